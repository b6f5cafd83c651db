import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rmlab.errors import FieldError
from rmlab.models.schemas import FieldSpec
from rmlab.services.gf import (
    codes,
    default_modulus,
    field_create,
    field_for,
    make_field,
    split_prime_power,
    subfield_membership,
)

from tests.conftest import elements

F16 = field_for(2, 4)
F81 = field_for(3, 4)
F4_SQUARED = field_for(4, 2)


@pytest.mark.parametrize("F", [F16, F81, F4_SQUARED])
def test_field_orders(F):
    assert F.order == F.q ** F.n
    assert len(F.elements) == F.order
    assert len(F.prime_subfield_q) == F.q


@given(a=elements(F81), b=elements(F81), c=elements(F81))
def test_distributivity(a, b, c):
    x, y, z = F81.GF(a), F81.GF(b), F81.GF(c)
    assert x * (y + z) == x * y + x * z


@given(a=elements(F81), b=elements(F81), s=st.integers(0, 7))
def test_frobenius_is_a_field_automorphism(a, b, s):
    x, y = F81.GF(a), F81.GF(b)
    assert F81.frobenius(x + y, s) == F81.frobenius(x, s) + F81.frobenius(y, s)
    assert F81.frobenius(x * y, s) == F81.frobenius(x, s) * F81.frobenius(y, s)
    assert F81.frobenius(x, s) == x ** (F81.q ** (s % F81.n))


@given(a=elements(F16))
def test_frobenius_has_order_n(a):
    x = F16.GF(a)
    assert F16.frobenius(x, F16.n) == x


@given(a=elements(F81))
def test_norm_and_trace_lie_in_fq(a):
    norm, trace = F81.norm_trace(F81.GF(a), 1)
    assert F81.in_subfield(norm, 1)
    assert F81.in_subfield(trace, 1)


@given(a=elements(F81, nonzero=True), b=elements(F81, nonzero=True))
def test_norm_is_multiplicative(a, b):
    x, y = F81.GF(a), F81.GF(b)
    assert F81.norm(x * y, 2) == F81.norm(x, 2) * F81.norm(y, 2)


def test_subfield_elements_are_fixed_points():
    for d in (1, 2, 4):
        sub = F16.subfield_elements(d)
        assert len(sub) == 2 ** d
        assert np.all(F16.in_subfield(sub, d))


def test_sub_degree_must_divide_n():
    with pytest.raises(FieldError):
        F16.in_subfield(F16.one, 3)


@pytest.mark.parametrize("F", [F16, F81, F4_SQUARED])
def test_coordinates_invert_from_coordinates(F):
    coords = F.coordinates(F.elements)
    assert coords.shape == (F.order, F.n)
    assert np.all(F.in_subfield(coords, 1))
    assert np.all(F.from_coordinates(coords) == F.elements)


def test_relative_coordinates_over_a_subfield():
    sub = F16.coordinates(F16.subfield_elements(2), 2)
    assert np.all(F16.from_coordinates(sub, 2) == F16.subfield_elements(2))


def test_basis_is_independent():
    assert F81.is_independent(F81.basis)
    assert not F81.is_independent(F81.GF([1, 2]))


@given(a=elements(F16), b=elements(F16))
@settings(max_examples=50)
def test_scalar_matrices_compose(a, b):
    Ma, Mb = F16.scalar_matrix(F16.GF(a)), F16.scalar_matrix(F16.GF(b))
    assert np.all(Ma @ Mb == F16.scalar_matrix(F16.GF(a) * F16.GF(b)))


def test_reducible_modulus_is_rejected():
    with pytest.raises(FieldError):
        make_field(2, 2, modulus=[1, 0, 1])


def test_non_monic_and_wrong_length_moduli_are_rejected():
    with pytest.raises(FieldError):
        make_field(3, 2, modulus=[1, 0, 2])
    with pytest.raises(FieldError):
        make_field(2, 3, modulus=[1, 1, 1])


def test_non_prime_characteristic_is_rejected():
    with pytest.raises(FieldError):
        make_field(4, 2)


def test_split_prime_power():
    assert split_prime_power(9) == (3, 2)
    assert split_prime_power(2) == (2, 1)
    with pytest.raises(FieldError):
        split_prime_power(6)


def test_missing_modulus_table_falls_back_to_galois(tmp_path):
    modulus = default_modulus(2, 7, table=str(tmp_path / "absent.json"))
    assert len(modulus) == 8 and modulus[-1] == 1


def test_explicit_modulus_is_kept():
    F = make_field(2, 3, modulus=[1, 1, 0, 1])
    assert F.modulus == [1, 1, 0, 1]
    assert F.spec.modulus == [1, 1, 0, 1]


def test_fields_compare_by_description():
    assert field_for(2, 4) == F16
    assert field_for(2, 4) is F16
    assert make_field(2, 3, modulus=[1, 1, 0, 1]) != make_field(2, 3, modulus=[1, 0, 1, 1])


def test_codes_are_plain_integers():
    out = codes(F16.elements[:3])
    assert out.dtype == np.int64 and out.tolist() == [0, 1, 2]


def test_field_create_from_spec():
    F = field_create(FieldSpec(p=2, h=1, n=2, modulus=[1, 1, 1]))
    assert F.order == 4
    assert field_create(F.spec) is F
    with pytest.raises(FieldError, match="reducible"):
        field_create(FieldSpec(p=2, h=1, n=2, modulus=[1, 0, 1]))
    with pytest.raises(FieldError, match="not prime"):
        field_create(FieldSpec(p=4, h=1, n=2))


def test_subfield_membership_counts():
    for sub in (1, 2, 4):
        inside = subfield_membership(F16, F16.elements, sub)
        assert int(np.count_nonzero(inside)) == 2 ** sub
    with pytest.raises(FieldError):
        subfield_membership(F16, F16.elements, 3)
