"""Prewavelet mask construction and verification.

The pipeline is ``U = c H Phi``; pick a coset component ``u_{s0}`` of ``U``
that is certified nonvanishing on the torus; emit the ``2^d - 1`` masks

    H_{|r - s0|} = w_r z^{s0} - w_{s0} z^r,      r in E \\ {s0},

where ``w_j`` are the coset components of ``conj(U)`` taken with
representatives ``-j``.  When no component is certifiable the V_alpha
perturbation gives an alternative, larger-support construction.

Verification follows the two conditions for a prewavelet family:
orthogonality ``<H, H_s>_Phi = 0`` and nonvanishing of the determinant of the
coset-component matrix.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .boxspline import (
    DirectionMatrix,
    Preset,
    autocorrelation_phi,
    get_preset,
    mask_H,
    symmetry_check,
)
from .certify import InconclusiveCertificate, TorusCertificate, certify_invertible
from .laurent import (
    CosetDecomposition,
    Exponent,
    LaurentPoly,
    bracket_product,
    coset_indices,
    decompose,
    negative_representatives,
    permute_vars,
    rho,
    rho_D,
    support_size,
    tau_D,
)
from .linalg import poly_det

__all__ = [
    "PrewaveletFamily",
    "ValphaConstruction",
    "OrthogonalityReport",
    "BasisReport",
    "OrbitReport",
    "NoPivotError",
    "SingularBasisError",
    "scaled_U",
    "components_W",
    "find_pivot",
    "pivot_order",
    "masks_from_pivot",
    "construct_family",
    "verify_orthogonality",
    "coset_matrix",
    "verify_basis",
    "valpha_pathway",
    "jm_orthogonalize",
    "symmetry_orbits",
    "support_stats",
]

Index = Tuple[int, ...]


class NoPivotError(InconclusiveCertificate):
    """No coset component of ``U`` could be certified nonvanishing."""


class SingularBasisError(ValueError):
    """The coset-component matrix has zero determinant."""


# ---------------------------------------------------------------------------
# building blocks


def scaled_U(H: LaurentPoly, Phi: LaurentPoly) -> Tuple[int, LaurentPoly]:
    """Smallest positive integer ``c`` making ``c H Phi`` integral, and ``U = c H Phi``."""
    if H.is_zero() or Phi.is_zero():
        raise ValueError("H and Phi must be nonzero")
    P = H * Phi
    c = P.denominators_lcm()
    return c, P.scale(c)


def components_W(U: LaurentPoly) -> CosetDecomposition:
    """Coset components ``w_j`` of ``conj(U)`` with representatives ``-j``."""
    return decompose(U.conjugate(), negative_representatives(U.dim))


def pivot_order(d: int, preference: Optional[Sequence[int]] = None) -> List[Index]:
    """Candidate pivots: the preference, then ``1``, then ``0``, then ascending."""
    ones, zeros = (1,) * d, (0,) * d
    order = [ones, zeros] + [j for j in coset_indices(d) if j not in (ones, zeros)]
    if preference is not None:
        pref = tuple(int(v) for v in preference)
        if pref not in order:
            raise ValueError(f"pivot {pref} is not a coset index for d={d}")
        order.remove(pref)
        order.insert(0, pref)
    return order


def find_pivot(
    U: LaurentPoly,
    preference: Optional[Sequence[int]] = None,
    grid_cap: Optional[int] = None,
) -> Tuple[Index, TorusCertificate]:
    """First coset index whose component ``u_j = conj(w_j)`` is certified invertible."""
    W = components_W(U)
    for j in pivot_order(U.dim, preference):
        u = W[j].conjugate()
        if u.is_zero():
            continue
        try:
            return j, certify_invertible(u, grid_cap, factor=False)
        except InconclusiveCertificate:
            continue
    raise NoPivotError("no coset component of U could be certified nonvanishing on the torus")


def masks_from_pivot(U: LaurentPoly, s0: Sequence[int]) -> Dict[Index, LaurentPoly]:
    """``H_{|r-s0|} = w_r z^{s0} - w_{s0} z^r`` for ``r != s0``, keyed by ``|r - s0|``."""
    s0 = tuple(s0)
    W = components_W(U)
    out = {}
    for r in coset_indices(U.dim):
        if r == s0:
            continue
        key = tuple(abs(a - b) for a, b in zip(r, s0))
        out[key] = W[r].shift(s0) - W[s0].shift(r)
    return dict(sorted(out.items()))


def jm_orthogonalize(P: LaurentPoly, H: LaurentPoly, Phi: LaurentPoly) -> LaurentPoly:
    """``<P,H>_Phi H - <H,H>_Phi P``, which is orthogonal to ``H``."""
    return bracket_product(P, H, Phi) * H - bracket_product(H, H, Phi) * P


# ---------------------------------------------------------------------------
# family


@dataclass(frozen=True)
class PrewaveletFamily:
    """A constructed family of prewavelet masks with its certificates."""

    xi: Optional[DirectionMatrix]
    H: LaurentPoly
    Phi: LaurentPoly
    c: int
    U: LaurentPoly
    s0: Index
    masks: Dict[Index, LaurentPoly]
    pivot_certificate: Optional[TorusCertificate] = None
    basis_certificate: Optional[TorusCertificate] = None
    det: Optional[LaurentPoly] = None

    @property
    def d(self) -> int:
        return self.H.dim

    @property
    def supports(self) -> Dict[Index, int]:
        return {s: support_size(m) for s, m in self.masks.items()}

    @property
    def N(self) -> int:
        return sum(self.supports.values())

    def W(self) -> CosetDecomposition:
        return components_W(self.U)


def _resolve(source: Union[str, Preset, DirectionMatrix]) -> Tuple[DirectionMatrix, Optional[Preset]]:
    if isinstance(source, str):
        source = get_preset(source)
    if isinstance(source, Preset):
        return source.matrix, source
    return source, None


def construct_family(
    source: Union[str, Preset, DirectionMatrix],
    pivot: Optional[Sequence[int]] = None,
    grid_cap: Optional[int] = None,
    scale: Optional[int] = None,
    verify: bool = True,
) -> PrewaveletFamily:
    """Run the pivot construction for a preset name, preset or direction matrix.

    A preset supplies the default pivot preference and, where the reference
    tables use a non-minimal scale, the scale.  With ``verify`` the family
    is checked for orthogonality and its basis determinant is certified.
    """
    xi, preset = _resolve(source)
    H = mask_H(xi)
    Phi = autocorrelation_phi(xi)
    c_min, U = scaled_U(H, Phi)
    if scale is None and preset is not None:
        scale = preset.scale
    c = c_min
    if scale is not None:
        if scale <= 0 or scale % c_min:
            raise ValueError(f"scale must be a positive multiple of {c_min}")
        c, U = scale, U.scale(scale // c_min)
    if pivot is None and preset is not None:
        pivot = preset.pivot
    if pivot is None and xi.d == 1:
        # the 1-D symmetric choice reproduces the Haar-type mask 1 - z
        pivot = (0,)
    s0, cert = find_pivot(U, pivot, grid_cap)
    fam = PrewaveletFamily(xi, H, Phi, c, U, s0, masks_from_pivot(U, s0), cert)
    if not verify:
        return fam
    report = verify_orthogonality(fam)
    if not report.ok:
        raise AssertionError(f"orthogonality failed for masks {sorted(report.failures)}")
    basis = verify_basis(fam, grid_cap)
    return PrewaveletFamily(xi, H, Phi, c, U, s0, fam.masks, cert, basis.certificate, basis.det)


# ---------------------------------------------------------------------------
# verification


@dataclass
class OrthogonalityReport:
    """Per-mask residuals ``<H, H_s>_Phi`` and ``rho_U(H_s)``; all zero when valid."""

    bracket: Dict[Index, LaurentPoly]
    rho_U: Dict[Index, LaurentPoly]

    @property
    def failures(self) -> Dict[Index, LaurentPoly]:
        return {s: r for s, r in self.bracket.items() if not r.is_zero() or not self.rho_U[s].is_zero()}

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_orthogonality(family) -> OrthogonalityReport:
    """Exact orthogonality check of every mask against ``H``, by two routes.

    ``<H, H_s>_Phi = 2^d / c * rho_U(H_s)``; the routes are computed
    independently and must agree.
    """
    bracket, via_rho = {}, {}
    scale = Fraction(2 ** family.H.dim, family.c)
    for s, m in family.masks.items():
        b = bracket_product(family.H, m, family.Phi)
        r = rho_D(family.U, m)
        if b != r.scale(scale):
            raise AssertionError(f"bracket and rho_U routes disagree for mask {s}")
        bracket[s], via_rho[s] = b, r
    return OrthogonalityReport(bracket, via_rho)


def coset_matrix(H: LaurentPoly, masks: Dict[Index, LaurentPoly]) -> List[List[LaurentPoly]]:
    """Rows ``H, H_s`` (ascending ``s``); columns the coset components, default representatives."""
    rows = [H] + [masks[s] for s in sorted(masks)]
    E = coset_indices(H.dim)
    if len(rows) != len(E):
        raise ValueError(f"need {len(E) - 1} masks, got {len(masks)}")
    return [[decompose(P)[j] for j in E] for P in rows]


@dataclass
class BasisReport:
    det: LaurentPoly
    certificate: TorusCertificate


def verify_basis(family, grid_cap: Optional[int] = None) -> BasisReport:
    """Exact determinant of the coset-component matrix and a nonvanishing certificate.

    Raises
    ------
    SingularBasisError
        If the determinant is the zero polynomial.
    InconclusiveCertificate
        If the determinant cannot be certified up to ``grid_cap``.
    """
    det = poly_det(coset_matrix(family.H, family.masks))
    if det.is_zero():
        raise SingularBasisError("coset-component matrix is singular: masks do not form a basis")
    return BasisReport(det, certify_invertible(det, grid_cap))


# ---------------------------------------------------------------------------
# V_alpha pathway


@dataclass(frozen=True)
class ValphaConstruction:
    """Result of the V_alpha perturbation construction."""

    alpha: Fraction
    V: LaurentPoly
    D: LaurentPoly
    d0: LaurentPoly
    masks: Dict[Index, LaurentPoly]
    d0_certificate: TorusCertificate
    H: LaurentPoly
    Phi: LaurentPoly
    c: int
    U: LaurentPoly
    attempts: int = 1
    V_lower_bound: Fraction = field(default=Fraction(0))

    @property
    def d(self) -> int:
        return self.H.dim

    @property
    def supports(self) -> Dict[Index, int]:
        return {s: support_size(m) for s, m in self.masks.items()}

    @property
    def N(self) -> int:
        return sum(self.supports.values())


def _valpha(xi: DirectionMatrix, alpha: Fraction) -> LaurentPoly:
    one = LaurentPoly.constant(1, xi.d)
    V = one
    for col in xi.columns:
        V = V * (one.scale(alpha + 1) + LaurentPoly.monomial(col))
    return V.conjugate()


def valpha_pathway(
    xi: DirectionMatrix,
    Phi: Optional[LaurentPoly] = None,
    alpha_start=1,
    max_halvings: int = 40,
    grid_cap: Optional[int] = None,
    scale: Optional[int] = None,
) -> ValphaConstruction:
    """Masks ``H_j = conj(V_alpha D_j)`` with ``D_j = d_j - d_0 z^-j``.

    ``D = c H Phi V_alpha = sum_j d_j z^j`` (default representatives).  Starting
    at ``alpha_start`` the parameter is halved until ``d_0 = rho(D)`` is
    certified nonvanishing.  ``V_alpha`` itself is invertible for any
    ``alpha > 0``: each factor satisfies ``|alpha + 1 + z^xi| >= alpha``.
    """
    H = mask_H(xi)
    if Phi is None:
        Phi = autocorrelation_phi(xi)
    if Phi.dim != xi.d:
        raise ValueError("Phi and the direction matrix differ in dimension")
    c, U = scaled_U(H, Phi)
    if scale is not None:
        if scale <= 0 or scale % c:
            raise ValueError(f"scale must be a positive multiple of {c}")
        c, U = scale, U.scale(scale // c)
    alpha = Fraction(alpha_start)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    for attempt in range(1, max_halvings + 2):
        V = _valpha(xi, alpha)
        D = U * V
        d0 = rho(D)
        cert = None
        if not d0.is_zero():
            try:
                cert = certify_invertible(d0, grid_cap)
            except InconclusiveCertificate:
                cert = None
        if cert is not None:
            comps = decompose(D)
            masks = {}
            for j in coset_indices(xi.d):
                if any(j):
                    Dj = comps[j] - d0.shift(tuple(-v for v in j))
                    masks[j] = (V * Dj).conjugate()
            return ValphaConstruction(alpha, V, D, d0, masks, cert, H, Phi, c, U,
                                      attempt, alpha ** xi.l)
        alpha /= 2
    raise InconclusiveCertificate(f"no certified alpha after {max_halvings} halvings")


# ---------------------------------------------------------------------------
# reporting


@dataclass
class OrbitReport:
    orbits: List[List[Index]]
    checked: int

    @property
    def representatives(self) -> List[Index]:
        return [o[0] for o in self.orbits]


def symmetry_orbits(family, s0: Optional[Sequence[int]] = None) -> Optional[OrbitReport]:
    """Group masks into orbits under variable permutations and verify the relations.

    Returns ``None`` when the hypotheses do not hold (``Xi`` not permutation
    symmetric or the pivot outside ``{0, 1}``).  Otherwise checks
    ``permute_vars(H_i, sigma) == H_{sigma(i)}`` for every mask and every
    permutation, raising ``AssertionError`` on a mismatch.
    """
    d = family.H.dim
    s0 = tuple(family.s0 if s0 is None else s0)
    if s0 not in ((0,) * d, (1,) * d):
        return None
    if family.xi is not None and not symmetry_check(family.xi):
        return None
    checked = 0
    for perm in itertools.permutations(range(d)):
        for i, m in family.masks.items():
            j = [0] * d
            for pos, bit in enumerate(i):
                j[perm[pos]] = bit
            if permute_vars(m, perm) != family.masks[tuple(j)]:
                raise AssertionError(f"mask {i} does not map to {tuple(j)} under {perm}")
            checked += 1
    by_weight: Dict[int, List[Index]] = {}
    for i in sorted(family.masks, key=lambda s: (-s.count(0), tuple(-v for v in s))):
        by_weight.setdefault(i.count(0), []).append(i)
    orbits = [by_weight[k] for k in sorted(by_weight, reverse=True)]
    return OrbitReport(orbits, checked)


def support_stats(family) -> Tuple[Dict[Index, int], int]:
    """Per-mask support sizes and their total ``N``."""
    sizes = {s: support_size(m) for s, m in family.masks.items()}
    return sizes, sum(sizes.values())
