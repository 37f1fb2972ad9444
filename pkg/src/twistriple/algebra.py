"""The function algebra on k points and its diagonal representations.

Elements of the algebra are tuples of complex values, one per point; the
two-point algebra is spanned by the projection e = (1, 0) and the unit. All
calculus operations (one-forms, distances) require exactly two points.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import DEFAULT_TOL, ToleranceConfig, commutator

__all__ = ["Representation", "embed", "projection_e", "check_bimodule_relation", "permute"]


@dataclass(frozen=True)
class Representation:
    """Diagonal representation: basis vector i carries the point point_of[i].

    Faithfulness requires every point index to occur at least once, and the
    indices to cover 0..n_points-1.
    """

    point_of: tuple[int, ...]

    def __post_init__(self):
        pts = tuple(int(p) for p in self.point_of)
        object.__setattr__(self, "point_of", pts)
        if not pts:
            raise ValueError("representation must have positive dimension")
        if min(pts) < 0:
            raise ValueError("point indices must be nonnegative")
        if set(pts) != set(range(max(pts) + 1)):
            raise ValueError("every point must appear at least once (faithful representation)")

    @property
    def dim(self) -> int:
        return len(self.point_of)

    @property
    def n_points(self) -> int:
        return max(self.point_of) + 1


REP_C2 = Representation((0, 1))
REP_C3 = Representation((0, 0, 1))
REP_C4 = Representation((0, 0, 1, 1))


def embed(rep: Representation, a: Sequence[complex]) -> np.ndarray:
    """Diagonal matrix of the algebra element a in the given representation."""
    values = [complex(v) for v in a]
    if len(values) != rep.n_points:
        raise ValueError(f"element has {len(values)} values, representation has {rep.n_points} points")
    return np.diag([values[p] for p in rep.point_of]).astype(complex)


def projection_e(rep: Representation) -> np.ndarray:
    """The projection (1, 0) of a two-point representation."""
    if rep.n_points != 2:
        raise ValueError("projection e is defined for two-point algebras only")
    return embed(rep, (1.0, 0.0))


def check_bimodule_relation(rep: Representation, d: np.ndarray,
                            tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Whether e [D, a] = [D, a] (1 - e) holds for the calculus of d.

    By linearity it suffices to test a = e.
    """
    e = projection_e(rep)
    de = commutator(np.asarray(d, dtype=complex), e)
    one = np.eye(rep.dim, dtype=complex)
    return float(np.linalg.norm(e @ de - de @ (one - e))) < tol.abs_tol


def permute(rep: Representation, perm: Sequence[int], a: Sequence[complex]) -> tuple[complex, ...]:
    """Apply a point permutation to an algebra element: result[i] = a[perm[i]]."""
    p = tuple(int(i) for i in perm)
    values = tuple(complex(v) for v in a)
    if len(p) != rep.n_points or len(values) != rep.n_points:
        raise ValueError("permutation, element and representation sizes must agree")
    if sorted(p) != list(range(rep.n_points)):
        raise ValueError("not a permutation")
    return tuple(values[p[i]] for i in range(rep.n_points))
