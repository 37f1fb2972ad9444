"""One-forms of a two-point triple and gauge fluctuations.

The calculus of a two-point triple is generated by [D, e], so every one-form
is (phi1 e + phi2 (1-e)) [D, e] and is stored together with its generating
coefficients. Selfadjoint forms have phi2 = -conj(phi1); antihermitian ones
have phi2 = conj(phi1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import projection_e
from .axioms import SpectralTriple
from .linalg import DEFAULT_TOL, ToleranceConfig, commutator, operator_norm

__all__ = [
    "OneForm",
    "one_form",
    "selfadjoint_one_form",
    "antihermitian_one_form",
    "is_selfadjoint_form",
    "fluctuate",
    "fluctuate_chiral",
    "omega1_equal",
    "is_fluctuation_of",
]


@dataclass(frozen=True)
class OneForm:
    value: np.ndarray
    phi1: complex
    phi2: complex
    base_dirac: np.ndarray


def one_form(t: SpectralTriple, phi1: complex, phi2: complex) -> OneForm:
    """(phi1 e + phi2 (1-e)) [D, e] with its coefficients recorded."""
    e = projection_e(t.rep)
    de = commutator(t.dirac, e)
    one = np.eye(t.dim, dtype=complex)
    value = (complex(phi1) * e + complex(phi2) * (one - e)) @ de
    return OneForm(value=value, phi1=complex(phi1), phi2=complex(phi2), base_dirac=t.dirac.copy())


def selfadjoint_one_form(t: SpectralTriple, phi: complex) -> OneForm:
    return one_form(t, phi, -np.conj(phi))


def antihermitian_one_form(t: SpectralTriple, phi: complex) -> OneForm:
    return one_form(t, phi, np.conj(phi))


def is_selfadjoint_form(a: OneForm, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    return operator_norm(a.value - a.value.conj().T) < tol.abs_tol


def _require_matching_base(t: SpectralTriple, a: OneForm, tol: ToleranceConfig):
    if operator_norm(a.base_dirac - t.dirac) > tol.abs_tol * (1.0 + operator_norm(t.dirac)):
        raise ValueError("one-form was built from a different Dirac operator")


def fluctuate(t: SpectralTriple, a: OneForm, tol: ToleranceConfig = DEFAULT_TOL) -> SpectralTriple:
    """Gauge fluctuation D -> D + alpha + eps' nu (J alpha J^-1) nu.

    alpha must be selfadjoint; J, nu, gamma and the representation are kept,
    so the result is again a triple of the same kind.
    """
    if t.real is None:
        raise ValueError("fluctuation needs a real structure")
    if not is_selfadjoint_form(a, tol):
        raise ValueError("fluctuation requires a selfadjoint one-form")
    _require_matching_base(t, a, tol)
    nu = t.nu
    alpha = a.value
    dirac = t.dirac + alpha + t.eps_prime * nu @ t.real.j.conjugate(alpha) @ nu
    return t.with_dirac(dirac)


def fluctuate_chiral(t: SpectralTriple, a: OneForm, tol: ToleranceConfig = DEFAULT_TOL) -> SpectralTriple:
    """Chiral gauge fluctuation D -> D + gamma A + eps' nu (J gamma A J^-1) nu.

    A must be antihermitian and the triple graded. The nu factors make the
    twisted chiral orbit coincide with the twisted gauge orbit; untwisted
    they are the identity.
    """
    if t.real is None:
        raise ValueError("chiral fluctuation needs a real structure")
    if t.grading is None:
        raise ValueError("chiral fluctuation needs a grading")
    if operator_norm(a.value + a.value.conj().T) > tol.abs_tol:
        raise ValueError("chiral fluctuation requires an antihermitian one-form")
    _require_matching_base(t, a, tol)
    nu = t.nu
    ga = t.grading @ a.value
    dirac = t.dirac + ga + t.eps_prime * nu @ t.real.j.conjugate(ga) @ nu
    return t.with_dirac(dirac)


def _omega1_span(t: SpectralTriple) -> np.ndarray:
    e = projection_e(t.rep)
    de = commutator(t.dirac, e)
    one = np.eye(t.dim, dtype=complex)
    return np.array([(e @ de).ravel(), ((one - e) @ de).ravel()])


def _span_rank(rows: np.ndarray, rank_tol: float) -> int:
    s = np.linalg.svd(rows, compute_uv=False)
    if s.size == 0:
        return 0
    cutoff = rank_tol * (s[0] if s[0] > rank_tol else 1.0)
    return int(np.sum(s > cutoff))


def omega1_equal(t1: SpectralTriple, t2: SpectralTriple,
                 tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Whether span{e[D,e], (1-e)[D,e]} agrees for the two Dirac operators."""
    if t1.rep != t2.rep:
        raise ValueError("triples live on different representations")
    s1 = _omega1_span(t1)
    s2 = _omega1_span(t2)
    r1 = _span_rank(s1, tol.rank_tol)
    r2 = _span_rank(s2, tol.rank_tol)
    r12 = _span_rank(np.vstack([s1, s2]), tol.rank_tol)
    return r1 == r2 == r12


def is_fluctuation_of(base: SpectralTriple, candidate: SpectralTriple,
                      tol: ToleranceConfig = DEFAULT_TOL) -> Optional[tuple[complex, complex]]:
    """Selfadjoint-form coefficients (phi1, phi2) with fluctuate(base) = candidate.

    The fluctuated Dirac is affine-linear in (re phi, im phi), so membership
    reduces to a real least-squares solve; acceptance is scale aware. Returns
    None when the candidate is not in the gauge orbit.
    """
    if base.rep != candidate.rep:
        return None
    if (base.real is None) != (candidate.real is None):
        return None
    if base.real is not None:
        if base.real.signs != candidate.real.signs:
            return None
        if operator_norm(base.real.j.u - candidate.real.j.u) > tol.abs_tol:
            return None
    if (base.grading is None) != (candidate.grading is None):
        return None
    if base.grading is not None and operator_norm(base.grading - candidate.grading) > tol.abs_tol:
        return None
    if operator_norm(base.nu - candidate.nu) > tol.abs_tol:
        return None

    def assembled(phi: complex) -> np.ndarray:
        return fluctuate(base, selfadjoint_one_form(base, phi), tol).dirac

    d0 = assembled(0.0)
    dx = assembled(1.0) - d0
    dy = assembled(1.0j) - d0
    target = (candidate.dirac - d0).ravel()
    a = np.array([
        np.concatenate([dx.ravel().real, dx.ravel().imag]),
        np.concatenate([dy.ravel().real, dy.ravel().imag]),
    ]).T
    b = np.concatenate([target.real, target.imag])
    coeffs, *_ = np.linalg.lstsq(a, b, rcond=None)
    phi = complex(coeffs[0], coeffs[1])
    residual = operator_norm(assembled(phi) - candidate.dirac)
    if residual < tol.abs_tol * (1.0 + operator_norm(candidate.dirac)):
        return (phi, -np.conj(phi))
    return None
