"""Certificates that a Laurent polynomial has no zeros on the unit torus.

Three mechanisms, tried in order by :func:`certify_invertible`:

* dominance: one coefficient outweighs all others in absolute value;
* a grid scan with a Lipschitz slack, on ``Re`` of a conjugate-symmetric
  polynomial (``REAL_LOWER_BOUND``) or on ``|P|`` (``GRID_LIPSCHITZ``);
* exact factorisation, certifying every irreducible factor separately
  (``PRODUCT``).

Grid values are computed in floating point together with an a-priori bound
on the rounding error, and the final bound is assembled in exact rational
arithmetic, so an issued certificate is a proof rather than an estimate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from .laurent import Exponent, LaurentPoly, halve_exponents, is_downarrow

__all__ = [
    "CertKind",
    "TorusCertificate",
    "InconclusiveCertificate",
    "dominance_certificate",
    "is_conjugate_symmetric",
    "symmetric_center",
    "grid_lipschitz_bound",
    "certify_invertible",
    "check_certificate",
    "default_grid_cap",
    "sample_quantity",
]

# upper bound for pi: 355/113 = 3.14159292... > pi
PI_UP = Fraction(355, 113)
UNIT_ROUNDOFF = Fraction(1, 2 ** 53)
BLOCK = 1 << 16


class CertKind(str, Enum):
    DOMINANCE = "dominance"
    REAL_LOWER_BOUND = "real_lower_bound"
    GRID_LIPSCHITZ = "grid_lipschitz"
    PRODUCT = "product"


class InconclusiveCertificate(RuntimeError):
    """No certificate was found.  This is *not* evidence of a torus zero."""


@dataclass(frozen=True)
class TorusCertificate:
    """Replayable proof that ``|P| >= lower_bound > 0`` on the unit torus.

    ``pivot`` is the monomial factored out before the check.  ``reduced``
    is the polynomial the arithmetic was carried out on (after halving even
    exponents and removing ``pivot``); ``metadata`` holds kind-specific data.
    """

    kind: CertKind
    pivot: Exponent
    lower_bound: Fraction
    reduced: LaurentPoly
    halvings: int = 0
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.lower_bound > 0:
            raise ValueError("certificate lower bound must be positive")

    def summary(self) -> str:
        lb = self.lower_bound
        s = f"{self.kind.value}: |P| >= {lb} (~{float(lb):.6g})"
        if self.kind in (CertKind.REAL_LOWER_BOUND, CertKind.GRID_LIPSCHITZ):
            s += f", grid {self.metadata['resolution']}^{self.reduced.dim}"
        if self.kind is CertKind.PRODUCT:
            s += f", {len(self.metadata['factors'])} distinct factors"
        return s


def default_grid_cap(d: int) -> int:
    return {1: 1 << 16, 2: 1024, 3: 256}.get(d, 64)


# ---------------------------------------------------------------------------
# dominance


def dominance_certificate(P: LaurentPoly) -> Optional[TorusCertificate]:
    """Certificate from a single dominant coefficient, or ``None``.

    If ``|a_e| > sum_{k != e} |a_k|`` then ``|P| >= |a_e| - sum_{k != e} |a_k|``
    everywhere on the torus.
    """
    if P.is_zero():
        raise ValueError("the zero polynomial vanishes everywhere")
    total = P.abs_sum()
    e, c = max(P.items(), key=lambda kc: abs(Fraction(kc[1])))
    bound = 2 * abs(Fraction(c)) - total
    if bound <= 0:
        return None
    return TorusCertificate(
        CertKind.DOMINANCE,
        pivot=e,
        lower_bound=bound,
        reduced=P.shift(tuple(-v for v in e)),
        metadata={"dominant": Fraction(c), "residual_sum": total - abs(Fraction(c))},
    )


# ---------------------------------------------------------------------------
# symmetry helpers


def is_conjugate_symmetric(P: LaurentPoly) -> bool:
    """``conj(P) == P``, i.e. ``P`` is real-valued on the torus."""
    return P.conjugate() == P


def symmetric_center(P: LaurentPoly) -> Optional[Exponent]:
    """Exponent ``e`` with ``z^-e P`` conjugate-symmetric, if one exists."""
    if P.is_zero():
        return None
    lo, hi = P.exponent_bounds()
    if any((a + b) % 2 for a, b in zip(lo, hi)):
        return None
    e = tuple((a + b) // 2 for a, b in zip(lo, hi))
    return e if is_conjugate_symmetric(P.shift(tuple(-v for v in e))) else None


def _reduce_parity(P: LaurentPoly) -> Tuple[LaurentPoly, int]:
    # z -> z^2 maps the torus onto itself, so halving keeps the value set
    halvings = 0
    while len(P) > 1 and is_downarrow(P):
        P = halve_exponents(P)
        halvings += 1
    return P, halvings


# ---------------------------------------------------------------------------
# grid evaluation


def _grid_arrays(P: LaurentPoly):
    ks = np.array([k for k, _ in P.items()], dtype=np.int64)
    cs = np.array([float(c) for _, c in P.items()])
    return ks, cs


def _grid_min(P: LaurentPoly, n: int, mode: str, sign: int = 1) -> float:
    """Minimum over ``theta in (2 pi / n) Z^d`` of the target quantity (floating point).

    ``mode='real'``: ``sign * Re P``; ``mode='abs'``: ``|P|``.  Phases are
    reduced exactly in integer arithmetic and read from a cosine table.
    """
    d = P.dim
    ks, cs = _grid_arrays(P)
    ks_mod = np.mod(ks, n)
    ang = 2.0 * np.pi * np.arange(n) / n
    cos_t, sin_t = np.cos(ang), np.sin(ang)
    total = n ** d
    best = math.inf
    for start in range(0, total, BLOCK):
        flat = np.arange(start, min(start + BLOCK, total), dtype=np.int64)
        idx = np.stack(np.unravel_index(flat, (n,) * d), axis=1)
        r = np.mod(idx @ ks_mod.T, n)
        re = cos_t[r] @ cs
        if mode == "real":
            q = sign * re
        else:
            im = -(sin_t[r] @ cs)
            q = np.hypot(re, im)
        best = min(best, float(q.min()))
    return best


def _rounding_bound(P: LaurentPoly, mode: str) -> Fraction:
    """A-priori bound on the floating-point error of one grid value.

    Coefficient conversion and table entries contribute a few units in the
    last place per term, the dot product at most ``m`` more; ``64 + 2m``
    units of roundoff times the l1 norm covers both with margin.
    """
    m = len(P)
    err = P.abs_sum() * (64 + 2 * m) * UNIT_ROUNDOFF
    return err if mode == "real" else 3 * err


def _sqrt_up(d: int) -> Fraction:
    r = Fraction(math.sqrt(d))
    while r * r < d:
        r += Fraction(1, 2 ** 40)
    return r


def lipschitz_constant(P: LaurentPoly) -> Fraction:
    """``sum_k |a_k| * ||k||_1``: bounds the gradient of ``P`` in angle space."""
    return sum((abs(Fraction(c)) * sum(abs(e) for e in k) for k, c in P.items()), Fraction(0))


def _mode_for(P: LaurentPoly) -> Tuple[str, Exponent, LaurentPoly]:
    e = symmetric_center(P)
    if e is not None:
        return "real", e, P.shift(tuple(-v for v in e))
    # |P| ignores a monomial factor; centring the exponents shrinks the Lipschitz constant
    lo, hi = P.exponent_bounds()
    e = tuple((a + b) // 2 for a, b in zip(lo, hi))
    return "abs", e, P.shift(tuple(-v for v in e))


def _real_sign(Q: LaurentPoly) -> int:
    v = sum(Fraction(c) for _, c in Q.items())
    return 1 if v >= 0 else -1


def grid_lipschitz_bound(P: LaurentPoly, resolution: int) -> Optional[TorusCertificate]:
    """Grid + Lipschitz certificate at ``resolution`` points per axis, or ``None``.

    The target quantity is ``Re`` of the centred polynomial when ``P`` is
    conjugate-symmetric up to a monomial, else ``|P|``.  Every torus point is
    within ``pi sqrt(d) / n`` (Euclidean, in radians) of a grid point, hence
    ``Q >= min_grid Q - L pi sqrt(d) / n - rounding``.
    """
    if P.is_zero():
        raise ValueError("the zero polynomial vanishes everywhere")
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    R, halvings = _reduce_parity(P)
    return _grid_certificate(R, resolution, halvings)


def _grid_certificate(R: LaurentPoly, n: int, halvings: int) -> Optional[TorusCertificate]:
    mode, e, Q = _mode_for(R)
    sign = _real_sign(Q) if mode == "real" else 1
    grid_min = _grid_min(Q, n, mode, sign)
    L = lipschitz_constant(Q)
    slack = L * PI_UP * _sqrt_up(Q.dim) / n
    err = _rounding_bound(Q, mode)
    bound = Fraction(grid_min) - slack - err
    if bound <= 0:
        return None
    nice = Fraction(math.floor(bound * 10 ** 6), 10 ** 6)
    if nice > 0:
        bound = nice
    kind = CertKind.REAL_LOWER_BOUND if mode == "real" else CertKind.GRID_LIPSCHITZ
    return TorusCertificate(
        kind,
        pivot=e,
        lower_bound=bound,
        reduced=Q,
        halvings=halvings,
        metadata={
            "resolution": n,
            "mode": mode,
            "sign": sign,
            "grid_min": grid_min,
            "lipschitz": L,
            "slack": slack,
            "rounding": err,
        },
    )


def sample_quantity(P: LaurentPoly, thetas: np.ndarray, mode: Optional[str] = None) -> np.ndarray:
    """Evaluate the quantity a certificate bounds at the given angle vectors.

    The torus point is ``z_j = exp(-i theta_j)`` for the *original* ``P``.
    """
    from .laurent import eval_many

    if mode is None:
        mode = "real" if symmetric_center(P) is not None else "abs"
    if mode == "real":
        e = symmetric_center(P)
        Q = P.shift(tuple(-v for v in e))
        return _real_sign(Q) * eval_many(Q, thetas).real
    return np.abs(eval_many(P, thetas))


# ---------------------------------------------------------------------------
# driver


def certify_invertible(
    P: LaurentPoly,
    grid_cap: Optional[int] = None,
    *,
    factor: bool = True,
    start_resolution: int = 64,
) -> TorusCertificate:
    """Prove that ``P`` has no zeros on the unit torus.

    Raises
    ------
    InconclusiveCertificate
        When no mechanism succeeds up to ``grid_cap`` points per axis.
    """
    if P.is_zero():
        raise ValueError("the zero polynomial vanishes everywhere")
    cap = grid_cap or default_grid_cap(P.dim)
    R, halvings = _reduce_parity(P)

    cert = dominance_certificate(R)
    if cert is not None:
        return TorusCertificate(cert.kind, cert.pivot, cert.lower_bound, cert.reduced,
                                halvings, cert.metadata)

    cert = _scan(R, cap, start_resolution, halvings)
    if cert is not None:
        return cert
    if factor:
        cert = _factor_certificate(R, cap, start_resolution, halvings)
        if cert is not None:
            return cert
    raise InconclusiveCertificate(
        f"no certificate for a {len(P)}-term polynomial up to grid resolution {cap}"
    )


def _scan(R: LaurentPoly, cap: int, start: int, halvings: int) -> Optional[TorusCertificate]:
    mode, _, Q = _mode_for(R)
    sign = _real_sign(Q) if mode == "real" else 1
    # cheap coarse look first: resolutions whose slack already exceeds it cannot succeed
    estimate = _grid_min(Q, min(start, cap), mode, sign)
    if estimate <= 0:
        return None
    L = float(lipschitz_constant(Q))
    n = start
    while n <= cap:
        if L * math.pi * math.sqrt(Q.dim) / n < estimate:
            cert = _grid_certificate(R, n, halvings)
            if cert is not None:
                return cert
        n *= 2
    return None


def _factor_certificate(R, cap, start, halvings) -> Optional[TorusCertificate]:
    const, factors = factor_laurent(R)
    nontrivial = [(f, m) for f, m in factors if not f.is_monomial()]
    if len(nontrivial) == 1 and nontrivial[0][1] == 1:
        return None
    parts = []
    bound = abs(Fraction(const))
    for f, m in nontrivial:
        try:
            c = certify_invertible(f, cap, factor=False, start_resolution=start)
        except InconclusiveCertificate:
            return None
        parts.append((f, m, c))
        bound *= c.lower_bound ** m
    return TorusCertificate(
        CertKind.PRODUCT,
        pivot=(0,) * R.dim,
        lower_bound=bound,
        reduced=R,
        halvings=halvings,
        metadata={"constant": Fraction(const), "factors": parts},
    )


def factor_laurent(P: LaurentPoly):
    """Factor over the rationals: ``P = const * z^e * prod f_i^m_i``.

    Monomial factors are returned as single-term polynomials.
    """
    import sympy as sp

    gens = sp.symbols(" ".join(f"t{i}" for i in range(P.dim)))
    gens = gens if isinstance(gens, tuple) else (gens,)
    lo, _ = P.exponent_bounds()
    poly = sp.Poly.from_dict(
        {tuple(a - b for a, b in zip(k, lo)): sp.Rational(Fraction(c).numerator, Fraction(c).denominator)
         for k, c in P.items()},
        *gens,
    )
    const, flist = sp.factor_list(poly)
    out: List[Tuple[LaurentPoly, int]] = [(LaurentPoly.monomial(lo), 1)]
    for f, m in flist:
        terms = {k: Fraction(int(sp.numer(c)), int(sp.denom(c))) for k, c in sp.Poly(f, *gens).terms()}
        out.append((LaurentPoly(P.dim, terms), int(m)))
    const = Fraction(int(sp.numer(const)), int(sp.denom(const)))
    check = LaurentPoly.constant(const, P.dim)
    for f, m in out:
        check = check * f ** m
    if check != P:
        raise AssertionError("factorisation does not reproduce the polynomial")
    return const, out


def check_certificate(cert: TorusCertificate, P: LaurentPoly) -> bool:
    """Replay ``cert`` against ``P`` from scratch."""
    R = P
    for _ in range(cert.halvings):
        if not is_downarrow(R):
            return False
        R = halve_exponents(R)
    halvings = cert.halvings
    if cert.kind is CertKind.DOMINANCE:
        if R.shift(tuple(-v for v in cert.pivot)) != cert.reduced:
            return False
        c = Fraction(cert.reduced.coefficient((0,) * R.dim))
        return 2 * abs(c) - R.abs_sum() >= cert.lower_bound
    if cert.kind in (CertKind.REAL_LOWER_BOUND, CertKind.GRID_LIPSCHITZ):
        again = _grid_certificate(R, cert.metadata["resolution"], halvings)
        return again is not None and again.kind is cert.kind and again.lower_bound >= cert.lower_bound
    if cert.kind is CertKind.PRODUCT:
        prod = LaurentPoly.constant(cert.metadata["constant"], R.dim)
        bound = abs(cert.metadata["constant"])
        for f, m, c in cert.metadata["factors"]:
            if not check_certificate(c, f):
                return False
            prod = prod * f ** m
            bound *= c.lower_bound ** m
        # the remaining cofactor must be a monomial
        rest = [t for t in _monomial_cofactor(R, prod)]
        return bool(rest) and bound >= cert.lower_bound
    return False


def _monomial_cofactor(R: LaurentPoly, prod: LaurentPoly):
    if prod.is_zero():
        return []
    lo_r, _ = R.exponent_bounds()
    lo_p, _ = prod.exponent_bounds()
    e = tuple(a - b for a, b in zip(lo_r, lo_p))
    return [e] if prod.shift(e) == R else []
