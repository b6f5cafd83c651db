import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from rmlab.errors import ParameterError
from rmlab.models.schemas import LinPolyModel
from rmlab.services.gf import field_for
from rmlab.services.linpoly import (
    LinPoly,
    lp_adjoint,
    lp_bilinear,
    lp_compose,
    lp_eval,
    lp_kernel_dim,
    lp_rank,
    lp_to_matrix,
    matrix_to_poly,
    poly_from_matrix,
    poly_report,
)

from tests.conftest import elements

F16 = field_for(2, 4)
F81 = field_for(3, 4)


def polys(F):
    return st.lists(elements(F), min_size=F.n, max_size=F.n).map(lambda c: LinPoly(F, c))


@settings(max_examples=40)
@given(f=polys(F81), g=polys(F81))
def test_composition_matches_evaluation(f, g):
    xs = F81.elements
    assert np.all(lp_eval(lp_compose(f, g), xs) == lp_eval(f, lp_eval(g, xs)))


@settings(max_examples=40)
@given(f=polys(F16), g=polys(F16))
def test_composition_is_matrix_product(f, g):
    assert np.all(lp_to_matrix(lp_compose(f, g)) == lp_to_matrix(f) @ lp_to_matrix(g))


@settings(max_examples=40)
@given(f=polys(F16), g=polys(F16))
def test_evaluation_is_additive_in_the_polynomial(f, g):
    xs = F16.elements
    assert np.all((f + g)(xs) == f(xs) + g(xs))
    assert np.all((f - g)(xs) == f(xs) - g(xs))


@settings(max_examples=30)
@given(f=polys(F81), a=elements(F81), b=elements(F81))
def test_adjoint_is_trace_adjoint(f, a, b):
    x, y = F81.GF(a), F81.GF(b)
    assert F81.trace(x * f(y), 1) == F81.trace(y * lp_adjoint(f)(x), 1)


@given(f=polys(F81))
def test_adjoint_is_an_involution(f):
    assert lp_adjoint(lp_adjoint(f)) == f


@given(f=polys(F16))
def test_matrix_round_trip(f):
    assert matrix_to_poly(F16, lp_to_matrix(f)) == f


@given(f=polys(F16), g=polys(F16))
def test_bilinear_form_is_symmetric(f, g):
    assert lp_bilinear(f, g) == lp_bilinear(g, f)


def test_known_ranks():
    assert lp_rank(LinPoly.identity(F16)) == 4
    assert lp_kernel_dim(LinPoly(F16, [1, 1, 0, 0])) == 1  # x^q + x kills F_2
    assert lp_kernel_dim(LinPoly.trace(F16)) == 3
    assert lp_rank(LinPoly.zero(F16)) == 0


def test_poly_report_and_its_matrix():
    f = LinPoly.trace(F81)
    report = poly_report(f)
    assert report.poly == "x + x^q + x^q^2 + x^q^3"
    assert (report.rank, report.kernel_dim) == (1, 3)
    assert poly_from_matrix(F81, report.matrix) == f


def test_poly_from_matrix_checks_its_input():
    with pytest.raises(ParameterError):
        poly_from_matrix(F81, [[1, 0], [0, 1]])
    with pytest.raises(ParameterError):
        poly_from_matrix(F81, [[3, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])


@pytest.mark.parametrize("text,coeffs", [
    ("x", [1, 0, 0, 0]),
    ("x^q", [0, 1, 0, 0]),
    ("2*x + x^q^3", [2, 0, 0, 1]),
    ("x^{q^2} - x^q", [0, 2, 1, 0]),
    ("x^q^5", [0, 1, 0, 0]),
])
def test_parse(text, coeffs):
    assert LinPoly.parse(F81, text) == LinPoly(F81, coeffs)


@given(f=polys(F81))
def test_text_round_trip(f):
    assume(not f.is_zero())
    assert LinPoly.parse(F81, f.to_text()) == f


def test_zero_prints_as_zero():
    assert LinPoly.zero(F81).to_text() == "0"


@pytest.mark.parametrize("text", ["", "y", "x^", "x+", "2x"])
def test_parse_rejects_garbage(text):
    with pytest.raises(ParameterError):
        LinPoly.parse(F81, text)


def test_wrong_number_of_coefficients():
    with pytest.raises(ParameterError):
        LinPoly(F16, [1, 0])


def test_model_round_trip_and_hash():
    f = LinPoly(F16, [3, 0, 7, 1])
    assert LinPoly.from_model(F16, LinPolyModel(coeffs=[3, 0, 7, 1])) == f
    assert f.to_model().coeffs == [3, 0, 7, 1]
    assert len({f, LinPoly(F16, [3, 0, 7, 1])}) == 1


def test_mixing_fields_is_refused():
    with pytest.raises(ParameterError):
        lp_compose(LinPoly.identity(F16), LinPoly.identity(F81))
