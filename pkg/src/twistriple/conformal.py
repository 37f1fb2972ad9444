"""Conformal rescalings D -> k_J D k_J and the twists they induce.

A positive invertible element of the two-point algebra is k = zeta (rho e +
(1-rho)(1-e)) up to normalisation, so a conformal factor is the pair (zeta,
rho) plus a side: 'algebra' factors act through their commutant image
k_J = J k J^-1, 'commutant-image' factors act through the embedded element
directly. Both sides induce the same twist, computed here from the factor
matrices rather than read off any closed form.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .algebra import embed
from .axioms import SpectralTriple, Twist
from .forms import fluctuate
from .linalg import DEFAULT_TOL, ToleranceConfig, operator_norm

__all__ = [
    "ConformalFactor",
    "TwistCompositionError",
    "rescale",
    "equivalent_commutant_factor",
    "compose_twist",
    "check_gauge_conformal_compat",
]

SIDE_ALGEBRA = "algebra"
SIDE_COMMUTANT = "commutant-image"


class TwistCompositionError(ValueError):
    """Raised when k k_J is not invariant under the existing twist."""


@dataclass(frozen=True)
class ConformalFactor:
    zeta: float
    rho: float
    side: str = SIDE_ALGEBRA

    def __post_init__(self):
        if self.side not in (SIDE_ALGEBRA, SIDE_COMMUTANT):
            raise ValueError(f"unknown side {self.side!r}")
        if not self.zeta > 0:
            raise ValueError("overall scale must be positive")
        margin = DEFAULT_TOL.rank_tol
        if not (margin < self.rho < 1.0 - margin):
            raise ValueError("rho must lie strictly inside (0, 1)")

    def values(self) -> tuple[float, float]:
        """Point values of the factor as an algebra element."""
        if self.side == SIDE_ALGEBRA:
            return (self.zeta * self.rho, self.zeta * (1.0 - self.rho))
        return (self.zeta * (1.0 - self.rho), self.zeta * self.rho)


def _factor_matrices(t: SpectralTriple, k: ConformalFactor) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(embedded element, its J-conjugate, the sandwich matrix used on D)."""
    if t.real is None:
        raise ValueError("conformal rescaling needs a real structure")
    k_alg = embed(t.rep, k.values())
    k_j = t.real.j.conjugate(k_alg)
    sandwich = k_j if k.side == SIDE_ALGEBRA else k_alg
    return k_alg, k_j, sandwich


def rescale(t: SpectralTriple, k: ConformalFactor,
            tol: ToleranceConfig = DEFAULT_TOL) -> SpectralTriple:
    """Rescaled triple with dirac = s D s and the induced twist.

    For an untwisted triple the twist is nu = k^-1 k_J (algebra side) or its
    mirror k_J^-1 k (commutant side); a pre-twisted triple is delegated to
    compose_twist.
    """
    if t.twist is not None:
        return compose_twist(t, k, tol)
    k_alg, k_j, sandwich = _factor_matrices(t, k)
    dirac = sandwich @ t.dirac @ sandwich
    if k.side == SIDE_ALGEBRA:
        nu = np.linalg.inv(k_alg) @ k_j
    else:
        nu = np.linalg.inv(k_j) @ k_alg
    return replace(t, dirac=dirac, twist=Twist(nu=nu, implements_algebra_automorphism=True))


def equivalent_commutant_factor(k: ConformalFactor) -> ConformalFactor:
    """The commutant-image factor producing the identical rescaling.

    Matching the two sides forces zeta^2 rho = xi^2 (1 - rho), i.e.
    xi = zeta sqrt(rho / (1 - rho)).
    """
    if k.side != SIDE_ALGEBRA:
        raise ValueError("expected an algebra-side factor")
    xi = k.zeta * np.sqrt(k.rho / (1.0 - k.rho))
    return ConformalFactor(zeta=float(xi), rho=k.rho, side=SIDE_COMMUTANT)


def compose_twist(t: SpectralTriple, k: ConformalFactor,
                  tol: ToleranceConfig = DEFAULT_TOL) -> SpectralTriple:
    """Rescale a nu-twisted triple, producing the twist mu = k_J nu k^-1.

    Valid only when k k_J is invariant under conjugation by nu; otherwise the
    rescaled datum is not a twisted real triple and a TwistCompositionError
    is raised.
    """
    if t.twist is None:
        return rescale(t, k, tol)
    if k.side != SIDE_ALGEBRA:
        raise ValueError("composition with an existing twist uses algebra-side factors")
    k_alg, k_j, _ = _factor_matrices(t, k)
    nu = t.twist.nu
    kk = k_alg @ k_j
    defect = operator_norm(nu @ kk @ np.linalg.inv(nu) - kk)
    if defect > tol.abs_tol * (1.0 + operator_norm(kk)):
        raise TwistCompositionError(
            f"kk_J not twist-invariant (defect {defect:.3e}); composed datum would not be a twisted real triple"
        )
    dirac = k_j @ t.dirac @ k_j
    mu = k_j @ nu @ np.linalg.inv(k_alg)
    return replace(t, dirac=dirac,
                   twist=Twist(nu=mu, implements_algebra_automorphism=t.twist.implements_algebra_automorphism))


def check_gauge_conformal_compat(t: SpectralTriple, k: ConformalFactor, b_phi: complex,
                                 tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Fluctuating after rescaling agrees with rescaling after fluctuating.

    With B the selfadjoint one-form of D with coefficient b_phi and
    A = k_J B k_J, the rescaled-then-fluctuated Dirac
    D_{k_J} + A + eps' nu (J A J^-1) nu equals (D + B + eps' J B J^-1)_{k_J}.
    """
    if t.twist is not None:
        raise ValueError("compatibility identity starts from an untwisted triple")
    from .forms import selfadjoint_one_form  # local import to avoid cycle at module load

    b = selfadjoint_one_form(t, b_phi)
    rescaled = rescale(t, k, tol)
    _, k_j, sandwich = _factor_matrices(t, k)
    a_mat = sandwich @ b.value @ sandwich
    nu = rescaled.nu
    lhs = rescaled.dirac + a_mat + t.eps_prime * nu @ t.real.j.conjugate(a_mat) @ nu
    rhs = sandwich @ fluctuate(t, b, tol).dirac @ sandwich
    return operator_norm(lhs - rhs) < tol.abs_tol * (1.0 + operator_norm(rhs))
