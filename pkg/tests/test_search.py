import pytest

from rmlab.errors import BudgetExceededError, ParameterError
from rmlab.models.schemas import RunConfig
from rmlab.services.gf import field_for
from rmlab.services.linpoly import LinPoly
from rmlab.services.linset import Subspace, is_scattered, subspace_from_map
from rmlab.services.scattered import lavrauw
from rmlab.services.search import (
    count_scattered,
    gl_class,
    gl_orbit_equivalent,
    matching_subspaces,
    max_scattered_rank_search,
    zgl_class_bruteforce,
    zgl_classes,
    zgl_report,
)

F8 = field_for(2, 3)
F16 = field_for(2, 4)


def u1(F, s=1):
    return subspace_from_map(LinPoly.monomial(F, s))


def test_count_scattered_lines_of_f4_squared(config):
    # 35 planes of F_2^4, five of which are F_4-lines
    assert count_scattered(2, 2, 2, 2, config) == 30


def test_max_scattered_rank_small(config):
    report = max_scattered_rank_search(2, 2, 2, config)
    assert report.max_rank == 2 == report.bound
    assert report.refuted == {3: 15}
    assert len(report.witness) == 2


@pytest.mark.parametrize("r,n", [(2, 3), (3, 2)])
def test_max_scattered_rank_refutes_every_four_dimensional_subspace(r, n, config):
    report = max_scattered_rank_search(r, n, 2, config)
    assert report.max_rank == 3
    assert report.refuted == {4: 651}
    witness = Subspace(field_for(2, n), field_for(2, n).GF(report.witness), r)
    assert witness.dim == 3 and is_scattered(witness, config)


def test_search_respects_the_budget():
    with pytest.raises(BudgetExceededError):
        max_scattered_rank_search(3, 2, 2, RunConfig(vector_budget=100))


def test_u1_has_two_scalar_classes_at_n3(config):
    U = u1(F8)
    reps, matching = zgl_classes(U, config)
    assert len(reps) == 2
    assert matching == 14
    assert zgl_class_bruteforce(U, config) == 2
    assert any(W == U for W in matching_subspaces(U, config))


def test_zgl_report(config):
    report = zgl_report(u1(F8), config)
    assert report.linear_set_size == 7
    assert report.zgl_class == 2 and report.gl_class is None
    assert len(report.representatives) == 2


def test_gl_merges_the_two_classes_at_n3(config):
    report = gl_class(u1(F8), config)
    assert report.zgl_class == 2
    assert report.gl_class == 1


def test_gl_orbit_equivalence(config):
    U = u1(F8)
    assert gl_orbit_equivalent(U, U.scale(3), config)
    assert gl_orbit_equivalent(U, u1(F8, 2), config)
    assert not gl_orbit_equivalent(U, Subspace(F8, F8.GF([[1, 0], [2, 0], [4, 0]])), config)


def test_class_computations_need_r2(config):
    with pytest.raises(ParameterError):
        matching_subspaces(lavrauw(F8, 4), config)


@pytest.mark.slow
def test_u1_classes_at_n4(config):
    report = gl_class(u1(F16), config)
    assert report.zgl_class == 2
    assert report.gl_class == 1
