"""Box splines: direction matrices, refinement masks and autocorrelation symbols.

The autocorrelation symbol ``Phi(z) = sum_k M^c(k) z^k`` collects the
integer values of the centred box spline of the doubled direction matrix.
Those values are computed exactly as the normalised fixed point of the
refinement transition operator; :func:`numeric_box_spline_eval` provides an
independent floating-point check via the de Boor recurrence.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .laurent import LaurentPoly
from .linalg import int_det, nullspace

__all__ = [
    "DirectionMatrix",
    "Preset",
    "PRESETS",
    "get_preset",
    "is_unimodular",
    "mask_H",
    "center_shift",
    "autocorrelation_phi",
    "numeric_box_spline_eval",
    "symmetry_check",
    "NotUnimodularError",
]


class NotUnimodularError(ValueError):
    """Raised when a direction matrix fails the unimodularity requirement."""


@dataclass(frozen=True)
class DirectionMatrix:
    """Integer ``d x l`` matrix whose columns are the box-spline directions."""

    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if not rows or not rows[0]:
            raise ValueError("empty direction matrix")
        if len({len(r) for r in rows}) != 1:
            raise ValueError("ragged direction matrix")
        d, l = len(rows), len(rows[0])
        if l < d:
            raise ValueError(f"need at least d={d} columns, got {l}")
        if any(not any(c) for c in self.columns):
            raise ValueError("zero column in direction matrix")
        if np.linalg.matrix_rank(np.array(rows, dtype=float)) != d:
            raise ValueError("direction matrix must have full row rank")

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]]) -> "DirectionMatrix":
        return cls(tuple(zip(*columns)))

    @classmethod
    def parse(cls, text: str) -> "DirectionMatrix":
        """Parse ``"1 0 1; 0 1 1"`` (rows separated by ``;``)."""
        rows = [r.replace(",", " ").split() for r in text.split(";") if r.strip()]
        return cls(tuple(tuple(int(v) for v in r) for r in rows))

    @property
    def d(self) -> int:
        return len(self.rows)

    @property
    def l(self) -> int:
        return len(self.rows[0])

    @property
    def columns(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(zip(*self.rows))

    def doubled(self) -> "DirectionMatrix":
        return DirectionMatrix.from_columns(self.columns + self.columns)

    def __str__(self) -> str:
        return "; ".join(" ".join(str(v) for v in r) for r in self.rows)


@dataclass(frozen=True)
class Preset:
    name: str
    matrix: DirectionMatrix
    pivot: Tuple[int, ...]
    description: str
    # scale used for the reference tables when it differs from the minimal one
    scale: Optional[int] = None


def _dm(*rows) -> DirectionMatrix:
    return DirectionMatrix(tuple(tuple(r) for r in rows))


PRESETS: Dict[str, Preset] = {
    p.name: p
    for p in (
        Preset("courant2d", _dm((1, 0, 1), (0, 1, 1)), (1, 1),
               "piecewise linear Courant element, three-direction mesh"),
        Preset("cubic_c1_2d", _dm((1, 1, 0, 0, 1), (0, 0, 1, 1, 1)), (0, 0),
               "C1 piecewise cubic box spline, three-direction mesh"),
        Preset("quartic_c2_2d", _dm((1, 1, 0, 0, 1, 1), (0, 0, 1, 1, 1, 1)), (0, 0),
               "C2 piecewise quartic box spline, three-direction mesh", scale=2 ** 6 * 362880),
        Preset("linear3d", _dm((1, 0, 0, 1), (0, 1, 0, 1), (0, 0, 1, 1)), (1, 1, 1),
               "trivariate continuous piecewise linear box spline"),
    )
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


def is_unimodular(xi: DirectionMatrix) -> bool:
    """Every nonsingular ``d x d`` column submatrix has determinant +-1."""
    cols = xi.columns
    for sub in itertools.combinations(range(xi.l), xi.d):
        det = int_det([[cols[j][i] for j in sub] for i in range(xi.d)])
        if det not in (0, 1, -1):
            return False
    return True


def mask_H(xi: DirectionMatrix) -> LaurentPoly:
    """Refinement mask ``2^-l prod_j (1 + z^xi_j)``."""
    out = LaurentPoly.constant(1, xi.d)
    for col in xi.columns:
        out = out * (LaurentPoly.constant(1, xi.d) + LaurentPoly.monomial(col))
    return out.scale(Fraction(1, 2 ** xi.l))


def center_shift(xi: DirectionMatrix) -> Tuple[int, ...]:
    """``c_Xi = sum_j xi_j``."""
    return tuple(sum(r) for r in xi.rows)


def _zonotope_box(xi: DirectionMatrix) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    lo = tuple(sum(min(0, v) for v in r) for r in xi.rows)
    hi = tuple(sum(max(0, v) for v in r) for r in xi.rows)
    return lo, hi


def integer_values(xi: DirectionMatrix) -> Dict[Tuple[int, ...], Fraction]:
    """Exact values of ``M_xi`` at the integer points of its support.

    Solves ``v(k) = sum_j h(2k - j) v(j)`` with ``h = 2^d * mask_H(xi)`` on the
    bounding box of the zonotope, normalised so ``sum_k v(k) = 1``.  The
    fixed point must be unique; otherwise a ``ValueError`` is raised.
    """
    d = xi.d
    h = {k: Fraction(c) * 2 ** d for k, c in mask_H(xi).items()}
    lo, hi = _zonotope_box(xi)
    pts = list(itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))))
    index = {p: i for i, p in enumerate(pts)}
    n = len(pts)
    rows = []
    for k in pts:
        row = [Fraction(0)] * n
        row[index[k]] -= 1
        for m, c in h.items():
            j = tuple(2 * a - b for a, b in zip(k, m))
            i = index.get(j)
            if i is not None:
                row[i] += c
        rows.append(row)
    basis = nullspace(rows, n)
    if len(basis) != 1:
        raise ValueError(
            f"transition operator has a {len(basis)}-dimensional eigenspace for eigenvalue 1"
        )
    v = basis[0]
    total = sum(v)
    if total == 0:
        raise ValueError("fixed point of the transition operator sums to zero")
    return {p: x / total for p, x in zip(pts, v) if x != 0}


def autocorrelation_phi(xi: DirectionMatrix) -> LaurentPoly:
    """``Phi(z) = sum_k M_{Xi u Xi}(k + c_Xi) z^k``, exactly."""
    if not is_unimodular(xi):
        raise NotUnimodularError(f"direction matrix [{xi}] is not unimodular")
    vals = integer_values(xi.doubled())
    c = center_shift(xi)
    return LaurentPoly(xi.d, {tuple(a - b for a, b in zip(k, c)): v for k, v in vals.items()})


def transition_residual(xi: DirectionMatrix, phi: LaurentPoly) -> Dict[Tuple[int, ...], Fraction]:
    """Nonzero entries of ``T v - v`` for the coefficient vector of ``phi``.

    ``phi`` is shifted back onto the doubled box spline's integer grid first.
    An empty result certifies ``phi`` as a fixed point.
    """
    dbl = xi.doubled()
    c = center_shift(xi)
    v = {tuple(a + b for a, b in zip(k, c)): Fraction(x) for k, x in phi.items()}
    h = {k: Fraction(x) * 2 ** xi.d for k, x in mask_H(dbl).items()}
    lo, hi = _zonotope_box(dbl)
    out = {}
    for k in itertools.product(*(range(a - 1, b + 2) for a, b in zip(lo, hi))):
        s = sum(hc * v.get(tuple(2 * a - b for a, b in zip(k, m)), 0) for m, hc in h.items())
        r = s - v.get(k, 0)
        if r:
            out[k] = r
    return out


def numeric_box_spline_eval(xi: DirectionMatrix, x: Sequence[float]) -> float:
    """Floating-point ``M_xi(x)`` by the de Boor recurrence.

    ``(l - d) M_Xi(x) = sum_j t_j M_{Xi\\j}(x) + (1 - t_j) M_{Xi\\j}(x - xi_j)``
    for any ``t`` with ``Xi t = x``.  Columns whose removal drops the rank are
    skipped; their contribution is supported on hyperplanes.  Accurate away
    from knot planes only.
    """
    x = tuple(float(v) for v in x)
    if len(x) != xi.d:
        raise ValueError("point dimension does not match the direction matrix")
    cols = tuple(sorted(xi.columns))
    return _boxspline(cols, x, xi.d)


def _round_key(x):
    return tuple(round(v, 11) for v in x)


@lru_cache(maxsize=200_000)
def _boxspline_cached(cols, xkey, d):
    return _boxspline(cols, xkey, d)


def _boxspline(cols: Tuple[Tuple[int, ...], ...], x: Tuple[float, ...], d: int) -> float:
    A = np.array(cols, dtype=float).T
    l = len(cols)
    if l == d:
        det = np.linalg.det(A)
        if abs(det) < 0.5:
            return 0.0
        t = np.linalg.solve(A, np.array(x))
        if np.all(t >= 0) and np.all(t < 1):
            return 1.0 / abs(det)
        return 0.0
    t = np.linalg.pinv(A) @ np.array(x)
    total = 0.0
    for j in range(l):
        if j and cols[j] == cols[j - 1]:
            # identical columns give identical reduced matrices: merge the weights
            continue
        mult = sum(1 for c in cols if c == cols[j])
        tj = sum(t[i] for i in range(l) if cols[i] == cols[j])
        rest = cols[:j] + cols[j + 1:]
        if np.linalg.matrix_rank(np.array(rest, dtype=float).T) < d:
            continue
        shifted = tuple(a - b for a, b in zip(x, cols[j]))
        total += tj * _boxspline_cached(rest, _round_key(x), d)
        total += (mult - tj) * _boxspline_cached(rest, _round_key(shifted), d)
    return total / (l - d)


def symmetry_check(xi: DirectionMatrix) -> bool:
    """True iff every permutation of the variables can be undone by a column permutation.

    Equivalently, each row permutation of ``Xi`` has the same multiset of
    columns as ``Xi``; this is what makes ``H`` and ``Phi`` invariant under
    all permutations of ``z_1, ..., z_d``.
    """
    base = sorted(xi.columns)
    for perm in itertools.permutations(range(xi.d)):
        permuted = sorted(tuple(col[perm[i]] for i in range(xi.d)) for col in xi.columns)
        if permuted != base:
            return False
    return True
