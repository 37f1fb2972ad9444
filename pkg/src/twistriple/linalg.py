"""Dense complex linear algebra for small operators.

Everything in this package lives on Hilbert spaces of dimension <= 8, so the
routines here favour robustness and determinism over speed: the operator norm
is computed by a cyclic Jacobi eigensolver on m*m, and rank/nullspace
decisions use a relative singular-value threshold.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "ToleranceConfig",
    "DEFAULT_TOL",
    "Antiunitary",
    "adjoint",
    "commutator",
    "anticommutator",
    "operator_norm",
    "hermitian_eigenvalues",
    "conj_by_antiunitary",
    "commutant_dimension",
    "solve_linear_family",
    "hermitian_basis",
    "hermitian_from_coords",
    "coords_from_hermitian",
    "is_hermitian",
]


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical thresholds.

    abs_tol governs residual comparisons (axiom checks, constraint
    satisfaction); rank_tol governs rank and nullspace decisions, applied
    relative to the largest singular value (or 1 if everything is tiny).
    """

    abs_tol: float = 1e-9
    rank_tol: float = 1e-9

    def __post_init__(self):
        if self.abs_tol < 0 or self.rank_tol < 0:
            raise ValueError("tolerances must be nonnegative")


DEFAULT_TOL = ToleranceConfig()


def _as_square(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not (np.all(np.isfinite(a.real)) and np.all(np.isfinite(a.imag))):
        raise ValueError("matrix entries must be finite")
    return a


def _require_same_dim(a: np.ndarray, b: np.ndarray):
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")


def adjoint(m) -> np.ndarray:
    return _as_square(m).conj().T


def commutator(a, b) -> np.ndarray:
    """ab - ba for equally sized square matrices."""
    a = _as_square(a)
    b = _as_square(b)
    _require_same_dim(a, b)
    return a @ b - b @ a


def anticommutator(a, b) -> np.ndarray:
    a = _as_square(a)
    b = _as_square(b)
    _require_same_dim(a, b)
    return a @ b + b @ a


def is_hermitian(m, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    m = _as_square(m)
    return float(np.linalg.norm(m - m.conj().T)) < tol.abs_tol


def hermitian_eigenvalues(h) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic Jacobi sweeps.

    Returns the eigenvalues in ascending order. Convergence is to machine
    precision; matrices here are tiny so the quadratic cost is irrelevant.
    """
    a = _as_square(h).copy()
    n = a.shape[0]
    if n == 1:
        return a.real.diagonal().copy()
    if n == 2:
        mean = 0.5 * (a[0, 0].real + a[1, 1].real)
        radius = np.hypot(0.5 * (a[0, 0].real - a[1, 1].real), abs(a[0, 1]))
        return np.array([mean - radius, mean + radius])
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(n)
    for _ in range(100):
        off = np.sqrt(max(0.0, np.linalg.norm(a) ** 2 - np.linalg.norm(np.diag(a)) ** 2))
        if off <= 1e-15 * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = a[p, q]
                if abs(g) <= 1e-18 * scale:
                    continue
                # Unitary plane rotation (diagonal phase composed with a real
                # Jacobi rotation) that zeroes the (p, q) entry of G* A G.
                phase = np.conj(g) / abs(g)
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * abs(g))
                if tau >= 0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                gfull = np.eye(n, dtype=complex)
                gfull[p, p] = c
                gfull[p, q] = s
                gfull[q, p] = -s * phase
                gfull[q, q] = c * phase
                a = gfull.conj().T @ a @ gfull
    vals = np.sort(a.real.diagonal())
    return vals


def operator_norm(m) -> float:
    """Largest singular value, via Jacobi eigenvalues of m* m."""
    m = _as_square(m)
    if not np.any(m):
        return 0.0
    vals = hermitian_eigenvalues(m.conj().T @ m)
    return float(np.sqrt(max(0.0, vals[-1])))


@dataclass(frozen=True)
class Antiunitary:
    """An antiunitary operator J = U o conj acting as psi -> U conj(psi).

    A valid J has U*U = id (J is an isometry) and U conj(U) = eps id for a
    sign eps (J^2 = eps id). Validation is not enforced at construction so
    that deliberately broken operators can be inspected; use `unitary_defect`
    and `squared_sign` to check.
    """

    u: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "u", _as_square(self.u))

    @property
    def dim(self) -> int:
        return self.u.shape[0]

    def unitary_defect(self) -> float:
        return float(np.linalg.norm(self.u.conj().T @ self.u - np.eye(self.dim)))

    def squared_sign(self) -> tuple[int, float]:
        """Sign eps with J^2 = eps id, plus the residual of that identity."""
        m = self.u @ np.conj(self.u)
        eps = 1 if m[0, 0].real >= 0 else -1
        return eps, float(np.linalg.norm(m - eps * np.eye(self.dim)))

    def conjugate(self, m) -> np.ndarray:
        """The linear operator J m J^{-1} = U conj(m) U*."""
        m = _as_square(m)
        _require_same_dim(m, self.u)
        return self.u @ np.conj(m) @ self.u.conj().T


def conj_by_antiunitary(j: Antiunitary, m) -> np.ndarray:
    return j.conjugate(m)


def _rank(singular_values: np.ndarray, rank_tol: float) -> int:
    if singular_values.size == 0:
        return 0
    top = float(singular_values[0])
    cutoff = rank_tol * (top if top > rank_tol else 1.0)
    return int(np.sum(singular_values > cutoff))


def commutant_dimension(generators: Sequence[np.ndarray],
                        tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Complex dimension of {X : [X, G] = 0 for every generator G}.

    The commutation constraints are stacked as linear maps on the n^2
    dimensional matrix space (column-major vec convention) and the nullspace
    dimension is read off the singular values.
    """
    gens = [_as_square(g) for g in generators]
    if not gens:
        raise ValueError("need at least one generator (empty set has full commutant)")
    n = gens[0].shape[0]
    for g in gens:
        if g.shape[0] != n:
            raise ValueError("generators must share one dimension")
    eye = np.eye(n, dtype=complex)
    blocks = [np.kron(eye, g) - np.kron(g.T, eye) for g in gens]
    m = np.vstack(blocks)
    s = np.linalg.svd(m, compute_uv=False)
    return n * n - _rank(s, tol.rank_tol)


def hermitian_basis(dim: int) -> list[np.ndarray]:
    """Orthogonal real basis of Hermitian dim x dim matrices.

    Coordinate order: the dim real diagonal entries first, then (re, im) of
    each strictly upper entry in row-major order. This fixed order is what
    makes solve_linear_family deterministic.
    """
    basis = []
    for i in range(dim):
        m = np.zeros((dim, dim), dtype=complex)
        m[i, i] = 1.0
        basis.append(m)
    for i in range(dim):
        for j in range(i + 1, dim):
            m = np.zeros((dim, dim), dtype=complex)
            m[i, j] = 1.0
            m[j, i] = 1.0
            basis.append(m)
            m = np.zeros((dim, dim), dtype=complex)
            m[i, j] = 1.0j
            m[j, i] = -1.0j
            basis.append(m)
    return basis


def hermitian_from_coords(coords: np.ndarray, dim: int) -> np.ndarray:
    coords = np.asarray(coords, dtype=float)
    if coords.shape != (dim * dim,):
        raise ValueError(f"expected {dim * dim} coordinates")
    m = np.zeros((dim, dim), dtype=complex)
    m[np.diag_indices(dim)] = coords[:dim]
    k = dim
    for i in range(dim):
        for j in range(i + 1, dim):
            m[i, j] = coords[k] + 1j * coords[k + 1]
            m[j, i] = coords[k] - 1j * coords[k + 1]
            k += 2
    return m


def coords_from_hermitian(m: np.ndarray) -> np.ndarray:
    m = _as_square(m)
    dim = m.shape[0]
    coords = np.empty(dim * dim)
    coords[:dim] = m.diagonal().real
    k = dim
    for i in range(dim):
        for j in range(i + 1, dim):
            coords[k] = m[i, j].real
            coords[k + 1] = m[i, j].imag
            k += 2
    return coords


def _rref(rows: np.ndarray, tol: float) -> np.ndarray:
    """Reduced row echelon form; rows ordered by pivot column."""
    a = np.array(rows, dtype=float)
    nrow, ncol = a.shape
    r = 0
    for c in range(ncol):
        if r >= nrow:
            break
        pivot = r + int(np.argmax(np.abs(a[r:, c])))
        if abs(a[pivot, c]) <= tol:
            continue
        a[[r, pivot]] = a[[pivot, r]]
        a[r] = a[r] / a[r, c]
        for i in range(nrow):
            if i != r:
                a[i] = a[i] - a[i, c] * a[r]
        r += 1
    return a[:r]


def solve_linear_family(constraints: Sequence[Callable[[np.ndarray], np.ndarray]],
                        dim: int,
                        tol: ToleranceConfig = DEFAULT_TOL) -> list[np.ndarray]:
    """Real basis of the Hermitian matrices annihilated by all constraints.

    Each constraint is a real-linear map taking a Hermitian dim x dim matrix
    to an arbitrary complex matrix; its kernel is computed over the real
    coordinates from `hermitian_basis`. The returned basis is orthonormal in
    those coordinates and deterministically ordered by reduced-row-echelon
    pivots, so repeated runs (and platforms) agree.
    """
    basis = hermitian_basis(dim)
    if not constraints:
        return [b.copy() for b in basis]
    cols = []
    for b in basis:
        pieces = []
        for f in constraints:
            y = np.asarray(f(b), dtype=complex).ravel()
            pieces.append(y.real)
            pieces.append(y.imag)
        cols.append(np.concatenate(pieces))
    a = np.array(cols).T  # (outputs, ncoord)
    _, s, vt = np.linalg.svd(a)
    rank = _rank(s, tol.rank_tol)
    kernel = vt[rank:]
    if kernel.shape[0] == 0:
        return []
    canon = _rref(kernel, tol.rank_tol)
    # Gram-Schmidt in pivot order keeps the ordering deterministic.
    ortho: list[np.ndarray] = []
    for row in canon:
        v = row.copy()
        for w in ortho:
            v -= np.dot(v, w) * w
        nv = np.linalg.norm(v)
        if nv > tol.rank_tol:
            ortho.append(v / nv)
    return [hermitian_from_coords(v, dim) for v in ortho]
