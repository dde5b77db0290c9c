import functools
import os
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from prewavelets.laurent import LaurentPoly, parse_poly
from prewavelets.prewavelet import construct_family

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")
PRESET_NAMES = ["courant2d", "cubic_c1_2d", "quartic_c2_2d", "linear3d"]


@functools.lru_cache(maxsize=None)
def family(name):
    """Fully verified family for a preset (cached across the session)."""
    return construct_family(name)


@functools.lru_cache(maxsize=None)
def raw_family(name):
    return construct_family(name, verify=False)


def golden_text(name):
    with open(os.path.join(GOLDEN, name), encoding="utf-8", newline="") as f:
        return f.read()


def golden_phi(name):
    """Printed Phi fixture: (numerator polynomial incl. prefactor, printed denominator)."""
    fields = dict(line.split(": ", 1) for line in golden_text(f"phi_{name}.txt").splitlines())
    d = 3 if name == "linear3d" else 2
    num = parse_poly(fields["numerator"], d)
    if "prefactor" in fields:
        num = num * parse_poly(fields["prefactor"], d)
    return num, int(fields["denominator"])


@pytest.fixture(params=PRESET_NAMES)
def preset_family(request):
    return family(request.param)


# ---------------------------------------------------------------------------
# hypothesis strategies

coefficients = st.fractions(min_value=-20, max_value=20, max_denominator=12).filter(lambda c: c != 0)


@st.composite
def laurent_polys(draw, dim=None, max_terms=8, span=3):
    d = draw(st.integers(1, 3)) if dim is None else dim
    exps = st.tuples(*[st.integers(-span, span)] * d)
    terms = draw(st.dictionaries(exps, coefficients, max_size=max_terms))
    return LaurentPoly(d, terms)


@st.composite
def poly_pairs(draw, max_terms=8):
    d = draw(st.integers(1, 3))
    return draw(laurent_polys(d, max_terms)), draw(laurent_polys(d, max_terms))


# ---------------------------------------------------------------------------
# acceptance reporting

ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, 13):
        status, text = ACCEPTANCE.get(n, ("FAIL", "not run"))
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {text}")
