from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import family
from prewavelets.certify import (
    CertKind,
    InconclusiveCertificate,
    TorusCertificate,
    certify_invertible,
    check_certificate,
    dominance_certificate,
    factor_laurent,
    grid_lipschitz_bound,
    is_conjugate_symmetric,
    lipschitz_constant,
    sample_quantity,
    symmetric_center,
)
from prewavelets.laurent import LaurentPoly, parse_poly, substitute_squares

x, y = LaurentPoly.variables(2)
SAMPLES = 100_000


def torus(n, d, seed=0):
    return np.random.default_rng(seed).uniform(0, 2 * np.pi, size=(n, d))


def assert_sound(cert, P, seed=0):
    vals = sample_quantity(P, torus(SAMPLES, P.dim, seed))
    assert vals.min() >= float(cert.lower_bound) - 1e-9 * max(1.0, float(P.abs_sum()))


# --- dominance ------------------------------------------------------------------------


def test_dominance_courant_w11():
    w11 = family("courant2d").W()[(1, 1)]
    cert = dominance_certificate(w11)
    assert cert.kind is CertKind.DOMINANCE and cert.lower_bound == 12
    assert cert.metadata["dominant"] == 18 and cert.metadata["residual_sum"] == 6


def test_dominance_trivariate_w111():
    cert = dominance_certificate(family("linear3d").W()[(1, 1, 1)])
    assert cert.lower_bound == 84 - 36 == 48


def test_dominance_fails_on_tie():
    assert dominance_certificate(1 + x) is None


def test_dominance_zero_rejected():
    with pytest.raises(ValueError):
        dominance_certificate(LaurentPoly.zero(2))


@given(st.integers(-3, 3), st.integers(-3, 3))
@settings(max_examples=20, deadline=None)
def test_dominance_invariant_under_monomials(a, b):
    P = parse_poly("7 + x - 2*y + 3/2*x*y^-1", 2)
    c1, c2 = dominance_certificate(P), dominance_certificate(P.shift((a, b)))
    assert c1.lower_bound == c2.lower_bound == Fraction(5, 2)


def test_cubic_u00_dominance_fails():
    u00 = family("cubic_c1_2d").W()[(0, 0)].conjugate()
    coeffs = sorted((abs(c) for _, c in u00.items()), reverse=True)
    # 12303 + 2*12048 + 2*3630 + 1027 + 2*215 + 2*130 + 2*33 + 5
    assert coeffs[0] == 35193 and sum(coeffs[1:]) == 45447
    assert dominance_certificate(u00) is None


# --- symmetry -------------------------------------------------------------------------


def test_conjugate_symmetry():
    assert is_conjugate_symmetric(family("courant2d").Phi)
    assert not is_conjugate_symmetric(x)
    e00 = family("quartic_c2_2d").W()[(0, 0)].conjugate().shift((-2, -2))
    assert is_conjugate_symmetric(e00)
    assert symmetric_center(e00.shift((4, 2))) == (4, 2)


# --- grid + Lipschitz -----------------------------------------------------------------


def test_lipschitz_constant():
    assert lipschitz_constant(parse_poly("3*x^2*y^-1 - y + 5", 2)) == 3 * 3 + 1


def test_grid_cubic_e00():
    u00 = family("cubic_c1_2d").W()[(0, 0)].conjugate()
    e00 = u00.shift((-2, -2))
    cert = grid_lipschitz_bound(e00, 256)
    assert cert is not None and cert.lower_bound > 0
    assert cert.kind is CertKind.GRID_LIPSCHITZ
    assert cert.metadata["grid_min"] >= 1794
    assert_sound(cert, e00)


def test_grid_quartic_e00_real_mode():
    e00 = family("quartic_c2_2d").W()[(0, 0)].conjugate().shift((-2, -2))
    cert = grid_lipschitz_bound(e00, 128)
    assert cert.kind is CertKind.REAL_LOWER_BOUND
    assert 96360 <= cert.metadata["grid_min"] <= 5806080
    assert cert.lower_bound >= 96360 * Fraction(1, 2)
    assert_sound(cert, e00)


@pytest.mark.parametrize("n", [2, 16, 64, 256, 1024])
def test_grid_never_certifies_a_polynomial_with_zeros(n):
    assert grid_lipschitz_bound(1 + x, n) is None
    assert grid_lipschitz_bound(x + y - 2, n) is None


def test_grid_rejects_bad_input():
    with pytest.raises(ValueError):
        grid_lipschitz_bound(LaurentPoly.zero(2), 64)
    with pytest.raises(ValueError):
        grid_lipschitz_bound(1 + x, 1)


def test_grid_bound_monotone_in_resolution():
    Phi = family("cubic_c1_2d").Phi
    bounds = []
    for n in (64, 128, 256, 512, 1024):
        c = grid_lipschitz_bound(Phi, n)
        bounds.append(c.lower_bound if c else Fraction(-1))
    assert bounds == sorted(bounds)
    assert bounds[-1] > 0


def test_grid_bound_is_sound_for_phi():
    for name in ("courant2d", "quartic_c2_2d", "linear3d"):
        Phi = family(name).Phi
        cert = certify_invertible(Phi)
        assert_sound(cert, Phi, seed=1)


def test_parity_reduction_equivalence():
    P = parse_poly("5 + x + y^-1 + x*y", 2)
    sq = substitute_squares(P)
    a, b = certify_invertible(P), certify_invertible(sq)
    assert a.lower_bound == b.lower_bound and b.halvings == 1
    g1, g2 = grid_lipschitz_bound(substitute_squares(family("courant2d").Phi), 64), grid_lipschitz_bound(
        family("courant2d").Phi, 64)
    assert g1.lower_bound == g2.lower_bound and g1.halvings == 1


# --- driver ----------------------------------------------------------------------------


def test_certify_courant_u11_is_dominance():
    u11 = family("courant2d").W()[(1, 1)].conjugate()
    assert certify_invertible(u11).kind is CertKind.DOMINANCE


def test_certify_cubic_u00_by_grid():
    u00 = family("cubic_c1_2d").W()[(0, 0)].conjugate()
    cert = certify_invertible(u00)
    assert cert.kind is CertKind.GRID_LIPSCHITZ
    assert check_certificate(cert, u00)
    assert_sound(cert, u00)


def test_certify_inconclusive_for_vanishing():
    with pytest.raises(InconclusiveCertificate):
        certify_invertible(1 - x)
    with pytest.raises(InconclusiveCertificate):
        certify_invertible(LaurentPoly.variables(1)[0] + 1)


def test_certify_zero_rejected():
    with pytest.raises(ValueError):
        certify_invertible(LaurentPoly.zero(1))


def test_product_certificate():
    # hexagonal cosine sum ranges over [-3, 6]; shifted by 7/2 it stays >= 1/2
    F = x + y + x * y + x ** -1 + y ** -1 + (x * y) ** -1 + Fraction(7, 2)
    P = F ** 3 * (x + 3)
    cert = certify_invertible(P, grid_cap=256)
    assert cert.kind is CertKind.PRODUCT
    assert check_certificate(cert, P)
    mults = sorted(m for _, m, _ in cert.metadata["factors"])
    assert mults == [1, 3]
    assert_sound(cert, P)


def test_factor_laurent_round_trip():
    P = (x ** -1 + 2) * (y + 3) ** 2 * x ** 2
    const, factors = factor_laurent(P)
    prod = LaurentPoly.constant(const, 2)
    for f, m in factors:
        prod = prod * f ** m
    assert prod == P


def test_check_certificate_rejects_tampering():
    w11 = family("courant2d").W()[(1, 1)]
    cert = dominance_certificate(w11)
    forged = TorusCertificate(cert.kind, cert.pivot, cert.lower_bound + 1, cert.reduced, 0, cert.metadata)
    assert check_certificate(cert, w11)
    assert not check_certificate(forged, w11)


def test_certificate_requires_positive_bound():
    with pytest.raises(ValueError):
        TorusCertificate(CertKind.DOMINANCE, (0,), Fraction(0), LaurentPoly.constant(1, 1))


def test_issued_certificates_are_sound_for_all_pivots():
    for name in ("courant2d", "cubic_c1_2d", "quartic_c2_2d", "linear3d"):
        fam = family(name)
        u = fam.W()[fam.s0].conjugate()
        assert_sound(fam.pivot_certificate, u, seed=2)
