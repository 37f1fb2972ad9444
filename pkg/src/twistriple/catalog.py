"""Builders for the concrete two-point triples on C^3 and C^4.

Matrix layout conventions (row/column indices start at 0):

C^3: grading diag(1,-1,-1), representation (+,+,-), J swaps basis vectors
1 and 2. The Dirac family has free entries at (0,1) and (0,2); the reality
conditions tie them together per family.

C^4: grading diag(1,-1,-1,1), representation (+,+,-,-), J swaps 1 and 2.
Free entries sit at (0,1), (0,2), (1,3), (2,3); d1 = (0,2) and d2 = (1,3)
are the entries the calculus sees.

Family constraints are both enforced by the builders and re-derived from
scratch by `derive_family`, which solves the linear conditions and checks
the solver's basis against the closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import REP_C2, REP_C3, REP_C4, embed, projection_e
from .axioms import RealStructure, SignTriple, SpectralTriple, Twist
from .conformal import ConformalFactor, rescale
from .linalg import (
    DEFAULT_TOL,
    Antiunitary,
    ToleranceConfig,
    commutator,
    operator_norm,
    solve_linear_family,
)

__all__ = [
    "C3_UNTWISTED",
    "C3_PERM",
    "C4_UNTWISTED",
    "C4_PERM",
    "C3_CONFORMAL",
    "C4_CONFORMAL",
    "FAMILIES",
    "CatalogConstraintError",
    "DiracFamily",
    "ScanReport",
    "build_c3",
    "build_c4",
    "build_conformal",
    "build_c4_perm_conformal_composite",
    "derive_family",
    "scan_c2_nonexistence",
    "fluctuation_orbit_params",
    "fluctuated_distance_formula",
    "identify_family",
]

C3_UNTWISTED = "c3_untwisted"
C3_PERM = "c3_perm"
C4_UNTWISTED = "c4_untwisted"
C4_PERM = "c4_perm"
C3_CONFORMAL = "c3_conformal"
C4_CONFORMAL = "c4_conformal"
FAMILIES = (C3_UNTWISTED, C3_PERM, C4_UNTWISTED, C4_PERM, C3_CONFORMAL, C4_CONFORMAL)

GAMMA3 = np.diag([1.0, -1.0, -1.0]).astype(complex)
GAMMA4 = np.diag([1.0, -1.0, -1.0, 1.0]).astype(complex)
U3 = np.array([[1, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=complex)
U4 = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
NU3_PERM = U3.copy()
NU4_PERM = np.fliplr(np.eye(4)).astype(complex)          # reverses the basis order
NU4_PERM_BAD = np.block([[np.zeros((2, 2)), np.eye(2)],  # swaps the two 2-blocks
                         [np.eye(2), np.zeros((2, 2))]]).astype(complex)


class CatalogConstraintError(ValueError):
    """Parameters violate the family's reality constraint."""


def _real_structure(u: np.ndarray, eps_prime: int) -> RealStructure:
    return RealStructure(j=Antiunitary(u.copy()),
                         signs=SignTriple(eps=1, eps_prime=eps_prime, eps_dprime=1))


def _hermitian_from_slots(dim: int, slots: dict[tuple[int, int], complex]) -> np.ndarray:
    d = np.zeros((dim, dim), dtype=complex)
    for (i, j), v in slots.items():
        d[i, j] = v
        d[j, i] = np.conj(v)
    return d


def _check_epsilon_relation(dirac: np.ndarray, u: np.ndarray, nu: np.ndarray,
                            eps_prime: int, relation: str):
    residual = operator_norm(dirac @ u @ np.conj(nu) - eps_prime * nu @ u @ np.conj(dirac))
    scale = 1.0 + operator_norm(dirac)
    if residual > 1e-12 * scale:
        raise CatalogConstraintError(f"parameters violate {relation} (residual {residual:.3e})")


def build_c3(eps_prime: int, d1: complex, d2: Optional[complex] = None,
             twist: str = "none") -> SpectralTriple:
    """A C^3 triple of the requested family.

    Untwisted: the (0,1) entry is forced to eps'*conj(d1); passing d2 asserts
    that value. Permutation twist: d1 and d2 are free but must satisfy
    conj(d) = eps'*d (real for eps'=+1, imaginary for eps'=-1).
    """
    eps_prime = int(eps_prime)
    d1 = complex(d1)
    if twist == "none":
        derived = eps_prime * np.conj(d1)
        slot = derived if d2 is None else complex(d2)
        dirac = _hermitian_from_slots(3, {(0, 1): slot, (0, 2): d1})
        triple = SpectralTriple(rep=REP_C3, dirac=dirac, grading=GAMMA3,
                                real=_real_structure(U3, eps_prime))
        _check_epsilon_relation(dirac, U3, np.eye(3, dtype=complex), eps_prime,
                                "d3 = eps'*conj(d1)")
        return triple
    if twist == "perm":
        d2c = 0j if d2 is None else complex(d2)
        dirac = _hermitian_from_slots(3, {(0, 1): d2c, (0, 2): d1})
        triple = SpectralTriple(rep=REP_C3, dirac=dirac, grading=GAMMA3,
                                real=_real_structure(U3, eps_prime),
                                twist=Twist(NU3_PERM, implements_algebra_automorphism=False))
        _check_epsilon_relation(dirac, U3, NU3_PERM, eps_prime,
                                "conj(d1) = eps'*d1 and conj(d2) = eps'*d2")
        return triple
    raise ValueError(f"unknown C^3 twist {twist!r}")


def build_c4(eps_prime: int, d1: complex, d2: Optional[complex] = None,
             twist: str = "none") -> SpectralTriple:
    """A C^4 triple of the requested family.

    Untwisted: slots (0,1) and (2,3) are eps'*conj(d1) and eps'*conj(d2).
    Permutation twist (reversal nu): they are eps'*d2 and eps'*d1 instead.
    The block-swap twist 'perm_bad' keeps the permutation layout but its
    reality condition additionally forces d1 = eps'*conj(d2); it is the
    fixture that fails twisted regularity. An omitted d2 defaults to 0,
    except for perm_bad where it defaults to the derived eps'*conj(d1).
    """
    eps_prime = int(eps_prime)
    d1 = complex(d1)
    if d2 is None:
        d2 = eps_prime * np.conj(d1) if twist == "perm_bad" else 0j
    d2 = complex(d2)
    if twist == "none":
        dirac = _hermitian_from_slots(4, {
            (0, 1): eps_prime * np.conj(d1),
            (0, 2): d1,
            (1, 3): d2,
            (2, 3): eps_prime * np.conj(d2),
        })
        triple = SpectralTriple(rep=REP_C4, dirac=dirac, grading=GAMMA4,
                                real=_real_structure(U4, eps_prime))
        _check_epsilon_relation(dirac, U4, np.eye(4, dtype=complex), eps_prime,
                                "d3 = eps'*conj(d1), d4 = eps'*conj(d2)")
        return triple
    if twist in ("perm", "perm_bad"):
        dirac = _hermitian_from_slots(4, {
            (0, 1): eps_prime * d2,
            (0, 2): d1,
            (1, 3): d2,
            (2, 3): eps_prime * d1,
        })
        nu = NU4_PERM if twist == "perm" else NU4_PERM_BAD
        triple = SpectralTriple(rep=REP_C4, dirac=dirac, grading=GAMMA4,
                                real=_real_structure(U4, eps_prime),
                                twist=Twist(nu, implements_algebra_automorphism=True))
        relation = ("d3 = eps'*d2, d4 = eps'*d1" if twist == "perm"
                    else "d1 = eps'*conj(d2) (block-swap reality condition)")
        _check_epsilon_relation(dirac, U4, nu, eps_prime, relation)
        return triple
    raise ValueError(f"unknown C^4 twist {twist!r}")


def build_conformal(space: str, eps_prime: int, d1: complex, d2: complex = 0j,
                    rho: float = 0.5, zeta: float = 1.0,
                    side: str = "algebra") -> SpectralTriple:
    """Conformally rescaled untwisted triple on C^3 or C^4."""
    if space == "c3":
        base = build_c3(eps_prime, d1)
    elif space == "c4":
        base = build_c4(eps_prime, d1, d2)
    else:
        raise ValueError(f"unknown space {space!r}")
    return rescale(base, ConformalFactor(zeta=zeta, rho=rho, side=side))


def build_c4_perm_conformal_composite(eps_prime: int, d1: complex, d2: complex,
                                      rho: float, zeta: float = 1.0) -> SpectralTriple:
    """Permutation-twisted C^4 rescaled by k, carrying the product twist.

    The twist is nu_conformal . nu_permutation; for rho != 1/2 it fails the
    twisted regularity condition, which is the point of this fixture.
    """
    base = build_c4(eps_prime, d1, d2, twist="perm")
    k = ConformalFactor(zeta=zeta, rho=rho)
    k_alg = embed(REP_C4, k.values())
    k_j = base.real.j.conjugate(k_alg)
    nu_conf = np.linalg.inv(k_alg) @ k_j
    dirac = k_j @ base.dirac @ k_j
    return SpectralTriple(rep=REP_C4, dirac=dirac, grading=GAMMA4, real=base.real,
                          twist=Twist(nu_conf @ NU4_PERM, implements_algebra_automorphism=True))


@dataclass(frozen=True)
class DiracFamily:
    family_id: str
    eps_prime: int
    free_params: tuple[str, ...]
    constraints: tuple[str, ...]
    basis: tuple[np.ndarray, ...]

    @property
    def real_dimension(self) -> int:
        return len(self.basis)


def _epsilon_constraint(u: np.ndarray, nu: np.ndarray, eps_prime: int):
    def f(d: np.ndarray) -> np.ndarray:
        return d @ u @ np.conj(nu) - eps_prime * nu @ u @ np.conj(d)
    return f


def _gamma_constraint(gamma: np.ndarray):
    def f(d: np.ndarray) -> np.ndarray:
        return gamma @ d + d @ gamma
    return f


_FAMILY_SETUP = {
    C3_UNTWISTED: (3, GAMMA3, U3, lambda: np.eye(3, dtype=complex)),
    C3_PERM: (3, GAMMA3, U3, lambda: NU3_PERM),
    C4_UNTWISTED: (4, GAMMA4, U4, lambda: np.eye(4, dtype=complex)),
    C4_PERM: (4, GAMMA4, U4, lambda: NU4_PERM),
}


def _closed_form_defect(family_id: str, eps_prime: int, b: np.ndarray) -> float:
    if family_id == C3_UNTWISTED:
        return abs(b[0, 1] - eps_prime * np.conj(b[0, 2]))
    if family_id == C3_PERM:
        return float(operator_norm(np.conj(b) - eps_prime * b))
    if family_id == C4_UNTWISTED:
        return max(abs(b[0, 1] - eps_prime * np.conj(b[0, 2])),
                   abs(b[2, 3] - eps_prime * np.conj(b[1, 3])))
    if family_id == C4_PERM:
        return max(abs(b[0, 1] - eps_prime * b[1, 3]),
                   abs(b[2, 3] - eps_prime * b[0, 2]))
    raise ValueError(f"no constraint derivation for family {family_id!r}")


_FAMILY_CLOSED_FORMS = {
    C3_UNTWISTED: (("d1",), ("d3 = eps'*conj(d1)",)),
    C3_PERM: (("d1", "d2"), ("conj(d1) = eps'*d1", "conj(d2) = eps'*d2")),
    C4_UNTWISTED: (("d1", "d2"), ("d3 = eps'*conj(d1)", "d4 = eps'*conj(d2)")),
    C4_PERM: (("d1", "d2"), ("d3 = eps'*d2", "d4 = eps'*d1")),
}


def derive_family(family_id: str, eps_prime: int,
                  tol: ToleranceConfig = DEFAULT_TOL) -> DiracFamily:
    """Solve the grading and reality constraints for the Dirac family.

    The basis comes out of the linear solver; afterwards every member is
    checked against the family's closed-form entry relations, so the solver
    and the closed forms validate each other.
    """
    if family_id not in _FAMILY_SETUP:
        raise ValueError(f"no constraint derivation for family {family_id!r}")
    eps_prime = int(eps_prime)
    if eps_prime not in (1, -1):
        raise ValueError("eps' must be +1 or -1")
    dim, gamma, u, nu_of = _FAMILY_SETUP[family_id]
    nu = nu_of()
    basis = solve_linear_family(
        [_gamma_constraint(gamma), _epsilon_constraint(u, nu, eps_prime)], dim, tol)
    for b in basis:
        defect = _closed_form_defect(family_id, eps_prime, b)
        if defect > 1e-12:
            raise AssertionError(
                f"solver basis violates the closed-form relation for {family_id} (defect {defect:.3e})")
    free, constraints = _FAMILY_CLOSED_FORMS[family_id]
    return DiracFamily(family_id=family_id, eps_prime=eps_prime, free_params=free,
                       constraints=constraints, basis=tuple(basis))


@dataclass(frozen=True)
class ScanReport:
    trials: int
    failures_of_order_one: int
    j_shapes_tested: tuple[str, ...]
    conclusion: bool


def _c2_j_candidates(rng: np.random.Generator) -> list[tuple[str, np.ndarray]]:
    t1, t2 = rng.uniform(0.0, 2.0 * math.pi, size=2)
    p1 = np.exp(1j * t1)
    return [
        ("identity", np.eye(2, dtype=complex)),
        ("swap", np.array([[0, 1], [1, 0]], dtype=complex)),
        ("diag_phases", np.diag([p1, np.exp(1j * t2)]).astype(complex)),
        ("antidiag_plus", np.array([[0, p1], [p1, 0]], dtype=complex)),
        ("antidiag_minus", np.array([[0, p1], [-p1, 0]], dtype=complex)),
    ]


def scan_c2_nonexistence(trials: int, seed: int,
                         tol: ToleranceConfig = DEFAULT_TOL) -> ScanReport:
    """Sample C^2 triples with nonzero calculus and test order-one for each J.

    Every candidate antiunitary maps the diagonal algebra into itself, so
    order-one (twisted or not: the involutive twist candidates give the same
    residual) must fail whenever [D, e] is nonzero. Each (trial, J) pair that
    fails is counted; the conclusion holds iff they all fail.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    rng = np.random.default_rng(seed)
    rep = REP_C2
    e = projection_e(rep)
    one = np.eye(2, dtype=complex)
    basis = [e, one - e]
    nu_candidates = [one, np.array([[0, 1], [1, 0]], dtype=complex)]  # both involutive
    failures = 0
    shapes: list[str] = []
    total_pairs = 0
    for _ in range(trials):
        for _attempt in range(1000):
            m = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            d = m + m.conj().T
            if operator_norm(commutator(d, e)) > 0.1:
                break
        else:
            raise RuntimeError("sampler failed to find a nonzero calculus")
        for label, u in _c2_j_candidates(rng):
            if label not in shapes:
                shapes.append(label)
            j = Antiunitary(u)
            total_pairs += 1
            worst_over_twists = []
            for nu in nu_candidates:
                nu2 = nu @ nu
                nu2_inv = np.linalg.inv(nu2)
                residual = 0.0
                for a in basis:
                    da = commutator(d, a)
                    for b in basis:
                        lhs = da @ j.conjugate(nu2_inv @ b @ nu2)
                        rhs = j.conjugate(b) @ da
                        residual = max(residual, operator_norm(lhs - rhs))
                worst_over_twists.append(residual)
            if min(worst_over_twists) > tol.abs_tol:
                failures += 1
    return ScanReport(trials=trials, failures_of_order_one=failures,
                      j_shapes_tested=tuple(shapes),
                      conclusion=failures == total_pairs)


def fluctuation_orbit_params(family_id: str, d1: complex, d2: complex,
                             phi: complex) -> tuple[complex, complex]:
    """Closed-form parameter map of a gauge fluctuation with coefficient phi.

    c3_untwisted has a single free parameter; d2 is passed through untouched.
    """
    d1 = complex(d1)
    d2 = complex(d2)
    phi = complex(phi)
    if family_id == C3_UNTWISTED:
        return ((1.0 - phi) * d1, d2)
    if family_id == C3_PERM:
        return ((1.0 - phi - np.conj(phi)) * d1, d2)
    if family_id in (C4_UNTWISTED, C4_PERM, C3_CONFORMAL, C4_CONFORMAL):
        return ((1.0 - phi) * d1, (1.0 - phi) * d2)
    raise ValueError(f"unknown family {family_id!r}")


def fluctuated_distance_formula(family_id: str, params: dict, phi: complex) -> float:
    """Distance of the phi-fluctuated family member, in closed form."""
    phi = complex(phi)
    scale = abs(1.0 - phi)
    if family_id == C3_UNTWISTED:
        denom = scale * abs(params["d1"])
    elif family_id == C3_PERM:
        denom = max(abs(1.0 - phi - np.conj(phi)) * abs(params["d1"]), abs(params["d2"]))
    elif family_id in (C4_UNTWISTED, C4_PERM):
        denom = scale * max(abs(params["d1"]), abs(params["d2"]))
    elif family_id == C3_CONFORMAL:
        denom = scale * abs(params["hop1"])
    elif family_id == C4_CONFORMAL:
        denom = scale * max(abs(params["hop1"]), abs(params["hop2"]))
    else:
        raise ValueError(f"unknown family {family_id!r}")
    if denom < DEFAULT_TOL.rank_tol:
        return math.inf
    return 1.0 / denom


def _matches(a: np.ndarray, b: np.ndarray, tol: ToleranceConfig) -> bool:
    return operator_norm(np.asarray(a) - np.asarray(b)) < tol.abs_tol


def _conformal_rho(nu: np.ndarray, tol: ToleranceConfig) -> Optional[float]:
    """Recover rho from a diagonal twist diag(1, (1-rho)/rho, rho/(1-rho)[, 1])."""
    dim = nu.shape[0]
    if operator_norm(nu - np.diag(np.diag(nu))) > tol.abs_tol:
        return None
    diag = np.diag(nu).real
    if abs(nu[0, 0] - 1.0) > tol.abs_tol:
        return None
    if dim == 4 and abs(nu[3, 3] - 1.0) > tol.abs_tol:
        return None
    x = diag[1]
    if x <= 0:
        return None
    rho = 1.0 / (1.0 + x)
    if abs(diag[2] - rho / (1.0 - rho)) > tol.abs_tol * (1.0 + abs(diag[2])):
        return None
    return float(rho)


def identify_family(t: SpectralTriple, tol: ToleranceConfig = DEFAULT_TOL) -> Optional[tuple[str, dict]]:
    """Recognise a catalog shape, returning (family_id, parameters) or None."""
    if t.real is None or t.grading is None:
        return None
    d = t.dirac
    if t.dim == 3:
        if t.rep != REP_C3 or not _matches(t.grading, GAMMA3, tol) or not _matches(t.real.j.u, U3, tol):
            return None
        if t.twist is None:
            return (C3_UNTWISTED, {"d1": complex(d[0, 2]), "d3_slot": complex(d[0, 1])})
        if _matches(t.twist.nu, NU3_PERM, tol):
            return (C3_PERM, {"d1": complex(d[0, 2]), "d2": complex(d[0, 1])})
        rho = _conformal_rho(t.twist.nu, tol)
        if rho is not None:
            return (C3_CONFORMAL, {"rho": rho, "hop1": complex(d[0, 2]),
                                   "offdiag": complex(d[0, 1])})
        return None
    if t.dim == 4:
        if t.rep != REP_C4 or not _matches(t.grading, GAMMA4, tol) or not _matches(t.real.j.u, U4, tol):
            return None
        params = {"d1": complex(d[0, 2]), "d2": complex(d[1, 3]),
                  "d3_slot": complex(d[0, 1]), "d4_slot": complex(d[2, 3])}
        if t.twist is None:
            return (C4_UNTWISTED, params)
        if _matches(t.twist.nu, NU4_PERM, tol):
            return (C4_PERM, {"d1": params["d1"], "d2": params["d2"]})
        rho = _conformal_rho(t.twist.nu, tol)
        if rho is not None:
            return (C4_CONFORMAL, {"rho": rho, "hop1": params["d1"], "hop2": params["d2"],
                                   "offdiag1": params["d3_slot"], "offdiag2": params["d4_slot"]})
        return None
    return None
