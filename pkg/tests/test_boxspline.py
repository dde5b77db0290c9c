import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from conftest import PRESET_NAMES, golden_phi
from prewavelets.boxspline import (
    PRESETS,
    DirectionMatrix,
    NotUnimodularError,
    autocorrelation_phi,
    center_shift,
    get_preset,
    integer_values,
    is_unimodular,
    mask_H,
    numeric_box_spline_eval,
    symmetry_check,
    transition_residual,
)
from prewavelets.laurent import LaurentPoly, bracket_product, parse_poly, permute_vars, substitute_squares
from prewavelets.linalg import int_det, nullspace, poly_det


def dm(text):
    return DirectionMatrix.parse(text)


# --- exact linear algebra -------------------------------------------------------


def test_int_det_against_numpy():
    rng = np.random.default_rng(1)
    for n in range(1, 6):
        for _ in range(10):
            A = rng.integers(-4, 5, size=(n, n))
            assert int_det(A.tolist()) == round(np.linalg.det(A))


def test_nullspace_rank_deficient():
    rows = [[Fraction(1), Fraction(2), Fraction(3)], [Fraction(2), Fraction(4), Fraction(6)]]
    basis = nullspace(rows, 3)
    assert len(basis) == 2
    for v in basis:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)


def test_poly_det_matches_leibniz():
    x, y = LaurentPoly.variables(2)
    M = [[1 + x, y, x * y ** -1], [2 * y, 1 - x, 3], [x ** -1, y + 1, 1 + x * y]]
    leibniz = LaurentPoly.zero(2)
    for perm in itertools.permutations(range(3)):
        sign = (-1) ** sum(1 for i in range(3) for j in range(i) if perm[j] > perm[i])
        term = LaurentPoly.constant(sign, 2)
        for i, j in enumerate(perm):
            term = term * M[i][j]
        leibniz = leibniz + term
    assert poly_det(M) == leibniz


# --- direction matrices ---------------------------------------------------------------


def test_direction_matrix_validation():
    with pytest.raises(ValueError):
        dm("1 0; 0 0")
    with pytest.raises(ValueError):
        dm("1 2; 0")
    with pytest.raises(ValueError):
        dm("1; 1")  # fewer columns than rows
    with pytest.raises(ValueError):
        dm("1 0 0; 0 1 0")  # zero column
    assert dm("1 0 1;0 1 1").columns == ((1, 0), (0, 1), (1, 1))


def test_presets_as_printed():
    assert get_preset("courant2d").matrix.rows == ((1, 0, 1), (0, 1, 1))
    assert get_preset("cubic_c1_2d").matrix.rows == ((1, 1, 0, 0, 1), (0, 0, 1, 1, 1))
    assert get_preset("quartic_c2_2d").matrix.rows == ((1, 1, 0, 0, 1, 1), (0, 0, 1, 1, 1, 1))
    assert get_preset("linear3d").matrix.rows == ((1, 0, 0, 1), (0, 1, 0, 1), (0, 0, 1, 1))
    with pytest.raises(KeyError):
        get_preset("nope")


def test_is_unimodular():
    assert is_unimodular(get_preset("courant2d").matrix)
    assert not is_unimodular(dm("1 1; 0 2"))
    assert is_unimodular(get_preset("linear3d").matrix)


def test_unimodular_by_exhaustive_minors():
    xi = get_preset("linear3d").matrix
    A = np.array(xi.rows)
    dets = {round(np.linalg.det(A[:, list(c)])) for c in itertools.combinations(range(4), 3)}
    assert dets <= {-1, 0, 1}


def test_mask_H():
    x, y = LaurentPoly.variables(2)
    assert mask_H(get_preset("courant2d").matrix) == ((1 + x) * (1 + y) * (1 + x * y)).scale(Fraction(1, 8))
    q = ((1 + x) ** 2 * (1 + y) ** 2 * (1 + x * y) ** 2).scale(Fraction(1, 64))
    assert mask_H(get_preset("quartic_c2_2d").matrix) == q
    z = LaurentPoly.variables(1)[0]
    assert mask_H(dm("1")) == (1 + z).scale(Fraction(1, 2))
    for p in PRESETS.values():
        H = mask_H(p.matrix)
        assert H.value_at_one() == 1 and all(c > 0 for _, c in H.items())


def test_center_shift():
    assert center_shift(get_preset("courant2d").matrix) == (2, 2)
    assert center_shift(dm("1")) == (1,)
    assert center_shift(get_preset("linear3d").matrix) == (2, 2, 2)


# --- Phi --------------------------------------------------------------------------


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_phi_properties(name):
    xi = get_preset(name).matrix
    Phi = autocorrelation_phi(xi)
    assert Phi.value_at_one() == 1
    assert Phi.conjugate() == Phi
    assert all(c > 0 for _, c in Phi.items())
    assert transition_residual(xi, Phi) == {}
    if symmetry_check(xi):
        for perm in itertools.permutations(range(xi.d)):
            assert permute_vars(Phi, perm) == Phi


@pytest.mark.parametrize("name", ["courant2d", "cubic_c1_2d", "linear3d"])
def test_phi_equals_printed(name):
    num, den = golden_phi(name)
    assert autocorrelation_phi(get_preset(name).matrix) == num.scale(Fraction(1, den))


def test_quartic_phi_printed_normalisation():
    # printed numerators sum to 9! = 362880, not to the printed denominator
    num, den = golden_phi("quartic_c2_2d")
    assert den == 322560 and num.value_at_one() == 362880
    assert num.scale(Fraction(1, den)).value_at_one() == Fraction(9, 8)
    assert autocorrelation_phi(get_preset("quartic_c2_2d").matrix) == num.scale(Fraction(1, 362880))


def test_phi_courant_explicit():
    Phi = autocorrelation_phi(get_preset("courant2d").matrix)
    expected = parse_poly("6 + x + x^-1 + y + y^-1 + x^-1*y^-1 + x*y", 2).scale(Fraction(1, 12))
    assert Phi == expected


def test_phi_univariate_is_one():
    assert autocorrelation_phi(dm("1")) == LaurentPoly.constant(1, 1)


def test_phi_rejects_non_unimodular():
    with pytest.raises(NotUnimodularError):
        autocorrelation_phi(dm("1 1; 0 2"))


def test_integer_values_fail_loudly_on_degenerate_eigenspace():
    # a single repeated direction in 2-D is rank deficient and rejected up front
    with pytest.raises(ValueError):
        integer_values(dm("1 1; 0 0"))


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_hh_bracket_is_phi_of_squares(name):
    xi = get_preset(name).matrix
    H, Phi = mask_H(xi), autocorrelation_phi(xi)
    assert bracket_product(H, H, Phi) == substitute_squares(Phi)


# --- numeric oracle --------------------------------------------------------------------


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_numeric_oracle_matches_phi(name):
    xi = get_preset(name).matrix
    Phi = autocorrelation_phi(xi)
    c = center_shift(xi)
    for k, v in Phi.items():
        # nudge off the knot planes; the doubled box spline is continuous there
        pt = [a + b + 1e-9 * (i + 1) * 0.7071 for i, (a, b) in enumerate(zip(k, c))]
        assert abs(numeric_box_spline_eval(xi.doubled(), pt) - float(v)) < 1e-8


def test_numeric_center_value_courant():
    xi = get_preset("courant2d").matrix
    assert abs(numeric_box_spline_eval(xi.doubled(), (2 + 1e-10, 2 + 2e-10)) - 0.5) < 1e-8


def test_numeric_outside_support_is_zero():
    xi = get_preset("courant2d").matrix
    assert numeric_box_spline_eval(xi, (5.0, -3.0)) == 0.0
    assert numeric_box_spline_eval(xi, (-0.5, 0.2)) == 0.0


def test_numeric_integral_is_one():
    xi = get_preset("courant2d").matrix
    rng = np.random.default_rng(5)
    pts = rng.uniform(0, 2, size=(20000, 2))  # support lies in [0, 2]^2
    vals = [numeric_box_spline_eval(xi, p) for p in pts]
    assert abs(4 * np.mean(vals) - 1) < 1e-2


# --- symmetry ------------------------------------------------------------------------


def test_symmetry_check():
    assert symmetry_check(get_preset("courant2d").matrix)
    assert symmetry_check(get_preset("linear3d").matrix)
    assert not symmetry_check(dm("1 0 2; 0 1 1"))
