import numpy as np
import pytest

from rmlab.errors import ParameterError
from rmlab.services.bridge import (
    alternative_projection,
    bound_code,
    canonical_projection,
    code_digest,
    code_from_f,
    code_from_hscattered,
    code_from_kernel,
    code_from_subspace,
    code_to_subspace_report,
    converse_projection,
    roundtrip,
    subspace_digest,
    subspace_from_code,
    verify_sheekey,
    worked_example_binomial,
    worked_example_report,
)
from rmlab.services.gf import codes, field_for
from rmlab.services.linalg import rank
from rmlab.services.linpoly import LinPoly
from rmlab.services.linset import Subspace, is_scattered, subspace_from_map
from rmlab.services.families import family_gabidulin
from rmlab.services.rmcode import as_matrix_code, code_equal, is_fqn_linear, is_mrd, min_distance, singleton_holds
from rmlab.services.scattered import lavrauw, u1_map
from rmlab.services.search import gl_orbit_equivalent

F4 = field_for(2, 2)
F8 = field_for(2, 3)
F16 = field_for(2, 4)
F32 = field_for(2, 5)


def test_sheekey_agrees_for_a_scattered_monomial(config):
    report = verify_sheekey(LinPoly.monomial(F32, 1), config)
    assert report.scattered and report.mrd and report.agree
    assert report.params.label() == "(5,5,2;4)"


def test_sheekey_agrees_for_a_non_scattered_monomial(config):
    report = verify_sheekey(LinPoly.monomial(F16, 2), config)
    assert not report.scattered and not report.mrd
    assert report.agree


def test_code_from_f_rejects_multiples_of_x():
    with pytest.raises(ParameterError):
        code_from_f(LinPoly.monomial(F16, 0, 3))
    assert code_from_f(LinPoly.monomial(F16, 1)).dim == 8


def test_projections_have_kernel_u():
    U = lavrauw(F8, 4)
    for G in (canonical_projection(U), alternative_projection(U, seed=5)):
        assert G.shape == (6, 12)
        assert rank(G) == 6
        assert not np.any(codes(G @ U.coords.T))


def test_alternative_projection_is_seeded():
    U = lavrauw(F8, 4)
    assert np.array_equal(alternative_projection(U, 2), alternative_projection(U, 2))


def test_canonical_projection_of_the_whole_space():
    U = Subspace(F4, [[1, 0], [2, 0], [0, 1], [0, 2]], 2)
    with pytest.raises(ParameterError):
        canonical_projection(U)


def test_code_from_kernel_rejects_a_wrong_map():
    U = lavrauw(F8, 4)
    G = canonical_projection(U)
    with pytest.raises(ParameterError):
        code_from_kernel(U, G[:, :-1])
    with pytest.raises(ParameterError):
        code_from_kernel(U, G[:-1])


def test_code_of_a_maximum_scattered_subspace_is_mrd(config):
    U = lavrauw(F8, 4)
    code = code_from_subspace(U, config=config)
    assert code.shape == (6, 3) and code.dim == 12
    assert min_distance(code, config) == 2
    assert is_mrd(code, config)


def test_code_from_subspace_needs_rank_rn_over_two(config):
    with pytest.raises(ParameterError):
        code_from_subspace(Subspace(F8, F8.GF([[1, 0, 0, 0], [0, 1, 0, 0]]), 4), config=config)


def test_code_from_subspace_rejects_a_full_point(config):
    # {(x, 0)} contains the F_8-point <(1, 0)> entirely
    U = Subspace(F8, F8.GF([[1, 0], [2, 0], [4, 0]]), 2)
    with pytest.raises(ParameterError):
        code_from_subspace(U, config=config)


def test_bound_code(config):
    U = lavrauw(F8, 4)
    assert code_equal(bound_code(U, config), code_from_subspace(U, config=config))
    with pytest.raises(ParameterError):
        bound_code(subspace_from_map(LinPoly.monomial(F16, 2)), config)


def test_bound_code_below_half_rank(config):
    U = Subspace(F8, F8.GF([[1, 0], [0, 1]]), 2)
    assert U.dim == 2 and is_scattered(U, config)
    code = bound_code(U, config)
    assert code.shape == (4, 3) and code.dim == 6
    assert min_distance(code, config) >= 2
    assert singleton_holds(code, 2)[0]


def test_code_of_a_subspace_is_right_linear(config):
    code = code_from_subspace(lavrauw(F8, 4), config=config)
    assert is_fqn_linear(code, "right")
    assert not is_fqn_linear(code, "left")


def test_converse_recovers_a_scattered_subspace(config):
    code = code_from_subspace(lavrauw(F8, 4), config=config)
    U, G = converse_projection(code, config)
    assert U.dim == 6
    assert is_scattered(U, config)
    assert code_equal(code_from_subspace(U, G, config), code)


def test_converse_of_gabidulin(config):
    code = as_matrix_code(family_gabidulin(F16, 2, 1))
    U, G = converse_projection(code, config)
    assert U.r == 2 and U.dim == 4
    assert is_scattered(U, config)
    assert code_equal(code_from_subspace(U, G, config), code)


@pytest.mark.slow
def test_converse_of_gabidulin_is_semilinearly_equivalent_to_u1(config):
    U, _ = converse_projection(as_matrix_code(family_gabidulin(F16, 2, 1)), config)
    assert gl_orbit_equivalent(U, subspace_from_map(u1_map(F16, 1)), config)


def test_converse_rejects_the_span_of_the_identity(config):
    with pytest.raises(ParameterError):
        converse_projection(as_matrix_code(family_gabidulin(F16, 1, 1)), config)


def test_converse_needs_minimum_distance_n_minus_one(config):
    code = code_from_subspace(subspace_from_map(LinPoly.monomial(F16, 2)), config=config)
    with pytest.raises(ParameterError):
        converse_projection(code, config)


def test_code_to_subspace_report(config):
    report = code_to_subspace_report(code_from_subspace(lavrauw(F8, 4), config=config), config)
    assert report.direction == "code->subspace"
    assert report.scattered and report.mrd and report.round_trip_equal


def test_roundtrip_of_a_maximum_scattered_subspace(config):
    U = lavrauw(F8, 4)
    report = roundtrip(U, config, seed=3)
    assert report.params.label() == "(6,3,2;2)"
    assert report.round_trip_equal
    assert "equal weight distribution: True" in report.detail
    assert report.input_fingerprint == subspace_digest(U)


def test_roundtrip_of_a_non_scattered_subspace(config):
    report = roundtrip(subspace_from_map(LinPoly.monomial(F16, 2)), config)
    assert not report.scattered and not report.mrd
    assert not report.round_trip_equal


def test_digests_are_stable():
    code = code_from_f(LinPoly.monomial(F8, 1))
    assert code_digest(code) == code_digest(code_from_f(LinPoly.monomial(F8, 1)))
    assert len(code_digest(code)) == 16
    assert code_digest(code) != code_digest(code_from_f(LinPoly.monomial(F8, 2)))


def test_code_from_hscattered():
    maps = [LinPoly.identity(F16), LinPoly.monomial(F16, 1), LinPoly.monomial(F16, 2)]
    assert code_from_hscattered(maps).dim == 12
    with pytest.raises(ParameterError):
        code_from_hscattered([LinPoly.identity(F16), LinPoly.monomial(F16, 0, 2)])
    with pytest.raises(ParameterError):
        code_from_hscattered([])


def test_worked_example_needs_odd_r():
    with pytest.raises(ParameterError):
        worked_example_binomial(2, 3, 2, 2)


def test_worked_example_formula_matches_the_construction(config):
    example = worked_example_binomial(2, 2, 3, 3, config=config)
    assert code_equal(example.code, example.formula_code)
    assert example.code.shape == (6, 4)
    assert example.subspace.dim == 6 and example.subspace.field == F16


def test_worked_example_equals_c_ug_under_the_coordinate_identification(config):
    example = worked_example_binomial(2, 2, 3, 3, config=config)
    assert example.reference.field == example.code.field
    assert code_equal(example.reference, example.code)
    assert example.reference.dim == example.subspace.ambient_dim == 12


@pytest.mark.slow
def test_worked_example_report(config):
    report = worked_example_report(worked_example_binomial(2, 2, 3, 3, config=config), config)
    assert report.scattered and report.mrd
    assert "equals C_{U,G} over F_16: True" in report.detail


def test_subspace_from_code_matches_the_converse(config):
    code = code_from_subspace(lavrauw(F8, 4), config=config)
    assert subspace_from_code(code, config) == converse_projection(code, config)[0]
