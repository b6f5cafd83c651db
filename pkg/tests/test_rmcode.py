import numpy as np
import pytest

from rmlab.errors import BudgetExceededError, ParameterError
from rmlab.models.schemas import RunConfig
from rmlab.services.families import family_gabidulin, family_twisted, find_twisted_eta
from rmlab.services.gf import codes, field_for
from rmlab.services.linpoly import LinPoly
from rmlab.services.rmcode import (
    MatrixCode,
    SquareCode,
    adjoint_code,
    as_matrix_code,
    code_equal,
    code_fingerprint,
    code_from_basis,
    code_from_model,
    code_params,
    code_to_model,
    codewords,
    delsarte_dual,
    fingerprint_digest,
    idealiser_report,
    is_fqn_linear,
    is_mrd,
    left_idealiser,
    min_distance,
    mrd_weight_formula,
    rank_tally,
    right_idealiser,
    singleton_holds,
    verify_code,
    weight_distribution,
)

F8 = field_for(2, 3)
F16 = field_for(2, 4)
F32 = field_for(2, 5)
F81 = field_for(3, 4)


def test_gabidulin_weight_distribution_at_n3():
    code = family_gabidulin(F8, 2, 1)
    assert weight_distribution(code).counts == [1, 0, 49, 14]


@pytest.mark.parametrize("l,expected", [(0, 49), (1, 14)])
def test_mrd_weight_formula(l, expected):
    assert mrd_weight_formula(3, 3, 2, 2, l) == expected


def test_mrd_weight_formula_domain():
    with pytest.raises(ParameterError):
        mrd_weight_formula(4, 3, 2, 2, 0)
    with pytest.raises(ParameterError):
        mrd_weight_formula(3, 3, 2, 2, 2)


def test_verify_gabidulin_uses_the_fast_path(config):
    report = verify_code(family_gabidulin(F32, 2, 1), config)
    assert report.params.label() == "(5,5,2;4)"
    assert report.mrd and report.singleton_ok
    assert report.fast_path == "left"
    assert report.ranks_computed == 33


def test_x_q2_at_n4_is_not_mrd(config):
    code = code_from_basis([LinPoly.identity(F16), LinPoly.monomial(F16, 2)])
    report = verify_code(code, config)
    assert not report.mrd
    assert report.params.d < 3


def test_fast_and_plain_enumeration_agree(config):
    code = family_gabidulin(F8, 2, 1)
    fast, pres = rank_tally(code, config)
    plain, plain_pres = rank_tally(code, config, fast=False)
    assert pres.side is not None and plain_pres.side is None
    assert fast.tolist() == plain.tolist()


def test_weights_do_not_depend_on_workers():
    code = family_gabidulin(F16, 2, 1)
    one = weight_distribution(code, RunConfig(workers=1, chunk_size=3))
    four = weight_distribution(code, RunConfig(workers=4, chunk_size=3))
    assert one == four


def test_budget_is_enforced():
    with pytest.raises(BudgetExceededError):
        verify_code(family_gabidulin(F32, 2, 1), RunConfig(budget=10))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_delsarte_dual_of_gabidulin(k, config):
    code = family_gabidulin(F16, k, 1)
    dual = delsarte_dual(code)
    assert dual.dim == 16 - 4 * k
    assert is_mrd(dual, config)
    assert code_equal(delsarte_dual(dual), code)


def test_dual_of_a_matrix_code():
    code = as_matrix_code(family_gabidulin(F8, 1, 1))
    dual = delsarte_dual(code)
    assert isinstance(dual, MatrixCode)
    assert dual.dim == 9 - code.dim
    products = np.einsum("kij,lij->kl", code.basis.view(np.ndarray), dual.basis.view(np.ndarray)) % 2
    assert not products.any()


def test_adjoint_is_an_involution_and_keeps_mrd(config):
    code = family_gabidulin(F16, 2, 1)
    adj = adjoint_code(code)
    assert code_equal(adjoint_code(adj), code)
    assert is_mrd(adj, config)
    mats = as_matrix_code(code)
    assert code_equal(adjoint_code(adjoint_code(mats)), mats)


def test_gabidulin_idealisers_are_fields_of_order_qn(config):
    report = idealiser_report(family_gabidulin(F16, 2, 1), config)
    assert report.left_order == report.right_order == 16
    assert report.left_is_field and report.right_is_field


def test_idealisers_contain_the_identity():
    code = family_gabidulin(F8, 2, 1)
    identity = F8.GF(np.eye(3, dtype=np.int64))[np.newaxis]
    assert left_idealiser(code).contains(identity)[0]
    assert right_idealiser(code).contains(identity)[0]


def test_gabidulin_is_left_linear():
    code = family_gabidulin(F16, 2, 1)
    assert is_fqn_linear(code, "left")
    assert is_fqn_linear(code, "right")
    with pytest.raises(ParameterError):
        is_fqn_linear(code, "up")


def test_matrix_code_from_generators():
    a = np.array([[1, 0], [0, 1]])
    b = np.array([[0, 1], [1, 1]])
    code = code_from_basis([a, b], field=F8)
    assert code.dim == 2 and code.shape == (2, 2)
    assert min_distance(code) == 2
    assert code.contains(F8.GF((a + b) % 2)[np.newaxis])[0]
    ok, tight = singleton_holds(code, 2)
    assert ok and tight


def test_matrix_generators_need_fq_entries_and_a_field():
    with pytest.raises(ParameterError):
        code_from_basis([np.array([[2, 0], [0, 1]])], field=F16)
    with pytest.raises(ParameterError):
        code_from_basis([np.eye(2, dtype=np.int64)])
    with pytest.raises(ParameterError):
        code_from_basis([np.eye(2, dtype=np.int64), np.eye(3, dtype=np.int64)], field=F8)


def test_zero_code_is_rejected():
    with pytest.raises(ParameterError):
        code_from_basis([LinPoly.zero(F8)])


@pytest.mark.parametrize("code", [family_gabidulin(F16, 2, 1), as_matrix_code(family_gabidulin(F8, 2, 1))])
def test_model_round_trip(code):
    back = code_from_model(code_to_model(code))
    assert type(back) is type(code)
    assert code_equal(back, code)


def test_square_code_keeps_polynomials():
    code = family_gabidulin(F8, 1, 1)
    assert isinstance(code, SquareCode)
    assert len(code.polys) == code.dim == 3


def test_codewords_are_members():
    code = family_gabidulin(F16, 2, 1)
    words = codewords(code, range(0, 200, 7))
    assert np.all(code.contains(words))


def test_code_params_label():
    code = family_gabidulin(F16, 2, 1)
    params = code_params(code, 3)
    assert params.label() == "(4,4,2;3)" and params.dim == 8
    assert params.singleton_exponent == 8


def test_code_params_dim_is_an_integer(config):
    report = verify_code(family_gabidulin(F16, 2, 1), config)
    assert isinstance(report.params.dim, int)
    assert '"dim":8' in report.params.model_dump_json()


def test_twisted_code_is_linear_on_neither_side():
    code = family_twisted(F81, 2, 1, find_twisted_eta(F81, 2), 1)
    assert not is_fqn_linear(code, "left")
    assert not is_fqn_linear(code, "right")


# -- the zero code and the full space ---------------------------------------------------


def _full_space(F, m, n):
    units = []
    for i in range(m):
        for j in range(n):
            unit = np.zeros((m, n), dtype=np.int64)
            unit[i, j] = 1
            units.append(unit)
    return code_from_basis(units, field=F)


def test_zero_code_has_only_the_zero_word(config):
    zero = MatrixCode.zero(F8, 2, 2)
    assert zero.dim == 0 and zero.size == 1
    assert weight_distribution(zero, config).counts == [1, 0, 0]
    assert min_distance(zero, config) == 0
    assert zero.contains(F8.GF(np.zeros((1, 2, 2), dtype=np.int64)))[0]


def test_dual_of_the_full_matrix_space_is_zero(config):
    full = _full_space(F8, 2, 2)
    assert weight_distribution(full, config).counts == [1, 9, 6]
    dual = delsarte_dual(full)
    assert isinstance(dual, MatrixCode)
    assert dual.dim == 0
    assert weight_distribution(dual, config).counts == [1, 0, 0]
    assert code_equal(delsarte_dual(dual), full)
    back = code_from_model(code_to_model(dual))
    assert back.dim == 0 and back.shape == (2, 2)


def test_dual_of_all_q_polynomials_is_zero(config):
    full = code_from_basis([LinPoly.monomial(F8, i) for i in range(3)])
    assert full.dim == 9
    dual = delsarte_dual(full)
    assert isinstance(dual, SquareCode)
    assert dual.dim == 0 and dual.polys == []
    assert weight_distribution(dual, config).counts == [1, 0, 0, 0]
    assert verify_code(dual, config).params.dim == 0
    back = code_from_model(code_to_model(dual))
    assert isinstance(back, SquareCode) and code_equal(back, dual)
    assert code_equal(delsarte_dual(dual), full)


# -- invariants --------------------------------------------------------------------------


@pytest.mark.parametrize("q,n,k,s", [(2, 4, 1, 1), (2, 5, 2, 2), (2, 5, 3, 1)])
def test_dual_of_gabidulin_has_gabidulin_parameters(q, n, k, s, config):
    F = field_for(q, n)
    dual = verify_code(delsarte_dual(family_gabidulin(F, k, s)), config)
    expected = verify_code(family_gabidulin(F, n - k, s), config)
    assert dual.params == expected.params
    assert dual.mrd


def test_equivalent_codes_share_a_fingerprint(config):
    code = as_matrix_code(family_gabidulin(F16, 2, 1))
    A = F16.scalar_matrix(F16.primitive)
    P = F16.GF(np.eye(4, dtype=np.int64)[[1, 3, 0, 2]])
    image = MatrixCode(F16, F16.GF(np.stack([codes(A @ M @ P) for M in code.basis])))
    ours, theirs = code_fingerprint(code, config), code_fingerprint(image, config)
    assert ours == theirs
    assert fingerprint_digest(ours) == fingerprint_digest(theirs)


def test_inequivalent_codes_have_different_fingerprints(config):
    gab = code_fingerprint(family_gabidulin(F81, 2, 1), config)
    twisted = code_fingerprint(family_twisted(F81, 2, 1, find_twisted_eta(F81, 2), 1), config)
    assert gab.params == twisted.params
    assert fingerprint_digest(gab) != fingerprint_digest(twisted)
