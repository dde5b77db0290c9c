"""Exact sparse multivariate Laurent polynomials over the rationals.

A :class:`LaurentPoly` is a finite map from integer exponent vectors to
nonzero rational coefficients.  Values are immutable and kept in canonical
form (no zero coefficients), so structural equality is polynomial equality.

Besides ring arithmetic, this module provides the coset machinery used by
the prewavelet construction: the splitting of a polynomial into components
in the even-exponent subring, the projection onto the even coset, and the
Phi-weighted bracket product.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

__all__ = [
    "Exponent",
    "LaurentPoly",
    "CosetDecomposition",
    "coset_indices",
    "add",
    "mul",
    "conjugate",
    "sign_flip",
    "substitute_squares",
    "halve_exponents",
    "is_downarrow",
    "decompose",
    "negative_representatives",
    "rho",
    "rho_D",
    "tau_D",
    "bracket_product",
    "permute_vars",
    "support",
    "support_size",
    "eval_numeric",
    "parse_poly",
]

Exponent = Tuple[int, ...]
Rational = Union[int, Fraction]

VARIABLE_NAMES = {1: ("z",), 2: ("x", "y"), 3: ("x", "y", "z")}


def _norm(c) -> Rational:
    """Coerce a coefficient to int when integral, else Fraction."""
    if isinstance(c, int):
        return c
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


class LaurentPoly:
    """Immutable Laurent polynomial in ``dim`` variables with rational coefficients.

    Parameters
    ----------
    dim : int
        Number of variables ``d >= 1``.
    terms : mapping, optional
        Exponent tuple -> coefficient.  Zero coefficients are dropped.
    """

    __slots__ = ("_dim", "_terms", "_hash")

    def __init__(self, dim: int, terms: Optional[Mapping[Sequence[int], object]] = None):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        clean: Dict[Exponent, Rational] = {}
        if terms:
            for k, c in terms.items():
                k = tuple(int(e) for e in k)
                if len(k) != dim:
                    raise ValueError(f"exponent {k} does not have length {dim}")
                c = _norm(c)
                if c:
                    clean[k] = clean.get(k, 0) + c
                    if not clean[k]:
                        del clean[k]
        self._dim = dim
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, dim: int, terms: Dict[Exponent, Rational]) -> "LaurentPoly":
        # trusted constructor: terms already canonical
        p = cls.__new__(cls)
        p._dim = dim
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, dim: int) -> "LaurentPoly":
        return cls._raw(dim, {})

    @classmethod
    def constant(cls, c, dim: int) -> "LaurentPoly":
        return cls(dim, {(0,) * dim: c})

    @classmethod
    def monomial(cls, exponent: Sequence[int], coef=1) -> "LaurentPoly":
        exponent = tuple(exponent)
        return cls(len(exponent), {exponent: coef})

    @classmethod
    def variables(cls, dim: int) -> Tuple["LaurentPoly", ...]:
        """The coordinate monomials ``z_1, ..., z_d``."""
        return tuple(
            cls.monomial(tuple(int(i == j) for i in range(dim))) for j in range(dim)
        )

    # -- accessors ---------------------------------------------------------

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def terms(self) -> Mapping[Exponent, Rational]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Exponent, Rational]]:
        return iter(self._terms.items())

    def coefficient(self, exponent: Sequence[int]) -> Rational:
        return self._terms.get(tuple(exponent), 0)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def denominators_lcm(self) -> int:
        out = 1
        for c in self._terms.values():
            if isinstance(c, Fraction):
                out = out * c.denominator // math.gcd(out, c.denominator)
        return out

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self._terms.values())

    def abs_sum(self) -> Fraction:
        """Sum of absolute values of the coefficients (the l1 norm)."""
        return Fraction(sum(abs(Fraction(c)) for c in self._terms.values()))

    def value_at_one(self) -> Rational:
        """Exact value at ``z = (1, ..., 1)``."""
        return _norm(sum(Fraction(c) for c in self._terms.values()))

    def exponent_bounds(self) -> Tuple[Exponent, Exponent]:
        if not self._terms:
            raise ValueError("zero polynomial has no exponents")
        ks = list(self._terms)
        lo = tuple(min(k[i] for k in ks) for i in range(self._dim))
        hi = tuple(max(k[i] for k in ks) for i in range(self._dim))
        return lo, hi

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "LaurentPoly") -> None:
        if self._dim != other._dim:
            raise ValueError(f"dimension mismatch: {self._dim} vs {other._dim}")

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(other, self._dim)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = _norm(v)
            else:
                out.pop(k, None)
        return LaurentPoly._raw(self._dim, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self._dim, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "LaurentPoly":
        c = _norm(c)
        if not c:
            return LaurentPoly.zero(self._dim)
        return LaurentPoly._raw(self._dim, {k: _norm(v * c) for k, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check(other)
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: Dict[Exponent, Rational] = {}
        get = out.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = tuple(x + y for x, y in zip(ka, kb))
                out[k] = get(k, 0) + ca * cb
        return LaurentPoly._raw(self._dim, {k: _norm(v) for k, v in out.items() if v})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if not self.is_monomial():
                raise ValueError("only monomials have Laurent-polynomial inverses")
            (k, c), = self._terms.items()
            return LaurentPoly.monomial(tuple(-e * -n for e in k), Fraction(1) / Fraction(c) ** -n)
        out = LaurentPoly.constant(1, self._dim)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, exponent: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial ``z**exponent``."""
        e = tuple(exponent)
        return LaurentPoly._raw(
            self._dim, {tuple(x + y for x, y in zip(k, e)): c for k, c in self._terms.items()}
        )

    # -- structural maps ---------------------------------------------------

    def conjugate(self) -> "LaurentPoly":
        return LaurentPoly._raw(self._dim, {tuple(-e for e in k): c for k, c in self._terms.items()})

    def map_exponents(self, f) -> "LaurentPoly":
        out: Dict[Exponent, Rational] = {}
        for k, c in self._terms.items():
            k2 = tuple(f(k))
            out[k2] = out.get(k2, 0) + c
        return LaurentPoly._raw(len(next(iter(out))) if out else self._dim,
                                {k: _norm(v) for k, v in out.items() if v})

    # -- comparison / hashing ---------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self._dim == other._dim and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == LaurentPoly.constant(other, self._dim)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._dim, frozenset(self._terms.items())))
        return self._hash

    # -- rendering ---------------------------------------------------------

    def sorted_terms(self) -> list:
        """Terms in graded lexicographic order (total degree, then lex), descending."""
        return sorted(self._terms.items(), key=lambda kc: (sum(kc[0]), kc[0]), reverse=True)

    def to_string(self, names: Optional[Sequence[str]] = None) -> str:
        if not self._terms:
            return "0"
        names = names or VARIABLE_NAMES.get(self._dim) or tuple(f"z{i + 1}" for i in range(self._dim))
        parts = []
        for k, c in self.sorted_terms():
            mono = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(names, k) if e
            )
            c = Fraction(c)
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if mono:
                coef = "" if mag == 1 else f"{_fmt(mag)}*"
                parts.append((sign, coef + mono))
            else:
                parts.append((sign, _fmt(mag)))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"LaurentPoly({self._dim}, {self.to_string()!r})"


def _fmt(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# ---------------------------------------------------------------------------
# functional interface


def add(P: LaurentPoly, Q: LaurentPoly) -> LaurentPoly:
    return P + Q


def mul(P: LaurentPoly, Q: LaurentPoly) -> LaurentPoly:
    return P * Q


def conjugate(P: LaurentPoly) -> LaurentPoly:
    """``sum a_k z^k -> sum conj(a_k) z^-k``; coefficients are real here."""
    return P.conjugate()


def coset_indices(d: int) -> list:
    """All vertices of the unit cube ``{0,1}^d`` in ascending lexicographic order."""
    return [tuple(s) for s in itertools.product((0, 1), repeat=d)]


def sign_flip(P: LaurentPoly, s: Sequence[int]) -> LaurentPoly:
    """``P((-1)^s z)``: multiply the coefficient of ``z^k`` by ``(-1)^(s.k)``."""
    s = tuple(s)
    return LaurentPoly._raw(
        P.dim,
        {k: (-c if sum(a * b for a, b in zip(s, k)) % 2 else c) for k, c in P.items()},
    )


def substitute_squares(P: LaurentPoly) -> LaurentPoly:
    """``P(z^2)``."""
    return LaurentPoly._raw(P.dim, {tuple(2 * e for e in k): c for k, c in P.items()})


def halve_exponents(P: LaurentPoly) -> LaurentPoly:
    """Inverse of :func:`substitute_squares`; ``P`` must have only even exponents."""
    if not is_downarrow(P):
        raise ValueError("polynomial has odd exponents")
    return LaurentPoly._raw(P.dim, {tuple(e // 2 for e in k): c for k, c in P.items()})


def is_downarrow(P: LaurentPoly) -> bool:
    """True iff every exponent is componentwise even."""
    return all(e % 2 == 0 for k, _ in P.items() for e in k)


@dataclass(frozen=True)
class CosetDecomposition:
    """``P = sum_j components[j] * z**representatives[j]`` with even-exponent components."""

    components: Dict[Exponent, LaurentPoly]
    representatives: Dict[Exponent, Exponent]

    def __getitem__(self, j) -> LaurentPoly:
        return self.components[tuple(j)]

    def reconstruct(self) -> LaurentPoly:
        items = list(self.components.items())
        out = LaurentPoly.zero(items[0][1].dim)
        for j, comp in items:
            out = out + comp.shift(self.representatives[j])
        return out


def _parity(k: Sequence[int]) -> Exponent:
    return tuple(e % 2 for e in k)


def decompose(P: LaurentPoly, reps: Optional[Mapping[Sequence[int], Sequence[int]]] = None) -> CosetDecomposition:
    """Split ``P`` into its ``2^d`` coset components.

    Parameters
    ----------
    P : LaurentPoly
    reps : mapping, optional
        Coset index ``j`` -> representative exponent ``r_j`` with ``r_j = j (mod 2)``.
        Defaults to ``r_j = j``.  ``{j: -j}`` gives the negative convention.
    """
    d = P.dim
    E = coset_indices(d)
    if reps is None:
        rep = {j: j for j in E}
    else:
        rep = {tuple(j): tuple(r) for j, r in reps.items()}
        if set(rep) != set(E):
            raise ValueError("representatives must cover every coset index exactly once")
        for j, r in rep.items():
            if len(r) != d or _parity(r) != j:
                raise ValueError(f"representative {r} is not congruent to {j} mod 2")
    buckets: Dict[Exponent, Dict[Exponent, Rational]] = {j: {} for j in E}
    for k, c in P.items():
        j = _parity(k)
        r = rep[j]
        buckets[j][tuple(a - b for a, b in zip(k, r))] = c
    return CosetDecomposition(
        components={j: LaurentPoly._raw(d, buckets[j]) for j in E},
        representatives=rep,
    )


def negative_representatives(d: int) -> Dict[Exponent, Exponent]:
    return {j: tuple(-e for e in j) for j in coset_indices(d)}


def rho(P: LaurentPoly) -> LaurentPoly:
    """Coset-0 component: the even-exponent part of ``P``."""
    return LaurentPoly._raw(P.dim, {k: c for k, c in P.items() if all(e % 2 == 0 for e in k)})


def rho_D(D: LaurentPoly, F: LaurentPoly) -> LaurentPoly:
    """``rho(D * conj(F))``."""
    return rho(D * F.conjugate())


def tau_D(D: LaurentPoly, F: LaurentPoly) -> LaurentPoly:
    """``rho(conj(D) * F)``."""
    return rho(D.conjugate() * F)


def bracket_product(F: LaurentPoly, G: LaurentPoly, Phi: LaurentPoly) -> LaurentPoly:
    """Phi-weighted bracket ``sum_s (Phi F conj(G))((-1)^s z)``.

    The sign-flip average annihilates every odd exponent, so the sum equals
    ``2^d * rho(Phi F conj(G))``.
    """
    F._check(G)
    F._check(Phi)
    return rho(Phi * F * G.conjugate()).scale(2 ** F.dim)


def permute_vars(P: LaurentPoly, perm: Sequence[int]) -> LaurentPoly:
    """Rename variables: ``z_i -> z_perm[i]``.

    The exponent of ``z_i`` in a term moves to position ``perm[i]``.
    For ``d = 2`` and ``perm = (1, 0)`` this is ``P(x, y) -> P(y, x)``.
    """
    perm = tuple(perm)
    if sorted(perm) != list(range(P.dim)):
        raise ValueError(f"{perm} is not a permutation of {P.dim} symbols")

    def move(k):
        out = [0] * P.dim
        for i, e in enumerate(k):
            out[perm[i]] = e
        return tuple(out)

    return LaurentPoly._raw(P.dim, {move(k): c for k, c in P.items()})


def support(P: LaurentPoly) -> set:
    return set(k for k, _ in P.items())


def support_size(P: LaurentPoly) -> int:
    return len(P)


def eval_numeric(P: LaurentPoly, angles: Sequence[float]) -> complex:
    """Evaluate at ``z_j = exp(-i * angles[j])``."""
    angles = np.asarray(angles, dtype=float)
    if angles.shape != (P.dim,):
        raise ValueError("need one angle per variable")
    re_parts, im_parts = [], []
    for k, c in P.items():
        phase = float(np.dot(k, angles))
        cf = float(c)
        re_parts.append(cf * math.cos(phase))
        im_parts.append(-cf * math.sin(phase))
    return complex(math.fsum(re_parts), math.fsum(im_parts))


def eval_many(P: LaurentPoly, angles: np.ndarray) -> np.ndarray:
    """Vectorised evaluation at each row of ``angles`` (shape ``(n, d)``)."""
    angles = np.atleast_2d(np.asarray(angles, dtype=float))
    if not P:
        return np.zeros(angles.shape[0], dtype=complex)
    ks = np.array([k for k, _ in P.items()], dtype=float)
    cs = np.array([float(c) for _, c in P.items()])
    return np.exp(-1j * (angles @ ks.T)) @ cs


# ---------------------------------------------------------------------------
# parsing

_TERM_RE = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?P<coef>\d+(?:/\d+)?)?\s*\*?\s*
        (?P<mono>(?:[a-z]\d*\s*(?:\^\s*(?:\{\s*[+-]?\s*\d+\s*\}|[+-]?\d+))?\s*\*?\s*)*)
    """,
    re.VERBOSE,
)
_FACTOR_RE = re.compile(r"([a-z]\d*)\s*(?:\^\s*(?:\{\s*([+-]?)\s*(\d+)\s*\}|([+-]?\d+)))?")


def parse_poly(text: str, dim: Optional[int] = None, names: Optional[Sequence[str]] = None) -> LaurentPoly:
    """Parse a sum of terms such as ``"10 + 2y^{-2} + 2*x^-2 - 1/3 x y"``.

    Variables default to ``x, y, z`` (``z`` alone when ``dim == 1``).  Both
    ``x^{-2}`` and ``x^-2`` exponent styles are accepted; multiplication may be
    implicit.
    """
    if names is None:
        if dim is None:
            raise ValueError("need dim or names")
        names = VARIABLE_NAMES.get(dim) or tuple(f"z{i + 1}" for i in range(dim))
    names = tuple(names)
    dim = len(names)
    index = {n: i for i, n in enumerate(names)}
    src = text.replace("\n", " ").strip()
    if src in ("", "0"):
        return LaurentPoly.zero(dim)
    terms: Dict[Exponent, Rational] = {}
    pos = 0
    first = True
    while pos < len(src):
        m = _TERM_RE.match(src, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial near {src[pos:pos + 20]!r}")
        if not first and m.group("sign") is None:
            raise ValueError(f"missing operator near {src[pos:pos + 20]!r}")
        if m.group("coef") is None and not m.group("mono").strip():
            raise ValueError(f"empty term near {src[pos:pos + 20]!r}")
        first = False
        coef = Fraction(m.group("coef") or 1)
        if m.group("sign") == "-":
            coef = -coef
        k = [0] * dim
        for fm in _FACTOR_RE.finditer(m.group("mono")):
            name = fm.group(1)
            if name not in index:
                raise ValueError(f"unknown variable {name!r}")
            if fm.group(3) is not None:
                e = int(fm.group(3)) * (-1 if fm.group(2) == "-" else 1)
            elif fm.group(4) is not None:
                e = int(fm.group(4))
            else:
                e = 1
            k[index[name]] += e
        k = tuple(k)
        terms[k] = terms.get(k, 0) + coef
        pos = m.end()
    return LaurentPoly(dim, terms)
