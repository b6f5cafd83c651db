import logging
import math

import numpy as np
import pytest

from rmlab.errors import ParameterError
from rmlab.services.families import (
    CODE_FAMILIES,
    SPORADIC,
    family_additive_twisted,
    family_code,
    family_gabidulin,
    family_sporadic,
    family_trombetti_zhou,
    family_twisted,
    find_sporadic_parameter,
    find_twisted_eta,
    find_tz_gamma,
    is_nonsquare,
)
from rmlab.services.gf import field_for
from rmlab.services.rmcode import code_equal, delsarte_dual, idealiser_report, is_mrd, verify_code

F16 = field_for(2, 4)
F81 = field_for(3, 4)


@pytest.mark.parametrize("q,n,k,s", [(2, 4, 2, 1), (2, 4, 3, 3), (2, 5, 2, 2), (3, 4, 2, 1)])
def test_gabidulin_is_mrd(q, n, k, s, config):
    F = field_for(q, n)
    report = verify_code(family_gabidulin(F, k, s), config)
    assert report.mrd
    assert report.params.d == n - k + 1


def test_gabidulin_warns_on_non_coprime_s(caplog):
    with caplog.at_level(logging.WARNING):
        family_gabidulin(F16, 2, 2)
    assert "gcd" in caplog.text


def test_k_out_of_range():
    with pytest.raises(ParameterError):
        family_gabidulin(F16, 4, 1)


@pytest.mark.parametrize("h", [1, 2, 3])
def test_twisted_idealisers(h, config):
    eta = find_twisted_eta(F81, 2)
    assert F81.norm(F81.GF(eta), 1) == 2
    code = family_twisted(F81, 2, 1, eta, h)
    assert is_mrd(code, config)
    report = idealiser_report(code, config)
    assert report.left_order == 3 ** math.gcd(4, h)
    assert report.right_order == 3 ** math.gcd(4, (2 - h) % 4)


def test_twisted_norm_condition():
    bad = find_twisted_eta(F81, 1)  # N(eta) = (-1)^{nk} = 1
    with pytest.raises(ParameterError):
        family_twisted(F81, 2, 1, bad, 1)
    with pytest.raises(ParameterError):
        family_twisted(F16, 2, 1, 1, 1)  # every nonzero norm is 1 when q = 2


def test_twisted_with_eta_zero_is_gabidulin():
    assert code_equal(family_twisted(F81, 2, 1, 0, 1), family_gabidulin(F81, 2, 1))


def test_trombetti_zhou(config):
    gamma = find_tz_gamma(F81)
    assert is_nonsquare(F81, F81.norm(F81.GF(gamma), 1))
    code = family_trombetti_zhou(F81, 2, 1, gamma)
    assert is_mrd(code, config)
    report = idealiser_report(code, config)
    assert report.left_order == report.right_order == 9


def test_trombetti_zhou_needs_odd_q_and_even_n():
    with pytest.raises(ParameterError):
        family_trombetti_zhou(F16, 2, 1, 1)
    with pytest.raises(ParameterError):
        family_trombetti_zhou(field_for(3, 3), 1, 1, 2)


def test_additive_twisted_needs_a_subfield():
    with pytest.raises(ParameterError):
        family_additive_twisted(field_for(9, 2), 1, 1, 2, 1, 1)
    with pytest.raises(ParameterError):
        family_additive_twisted(field_for(4, 2), 1, 1, 2, 3, 1)  # q0 = 2: N(eta) = 1 for every eta != 0


def test_additive_twisted_is_mrd(config):
    F = field_for(9, 2)
    F0 = F.over(1)
    eta = find_twisted_eta(F0, 2)
    code = family_additive_twisted(F, 1, 1, 3, eta, 1)
    assert code.field == F0 and code.rank_scale == 2
    report = verify_code(code, config)
    assert report.params.label() == "(2,2,9;2)"
    assert report.mrd
    assert report.params.dim == 2 and isinstance(report.params.dim, int)


def test_additive_twisted_with_eta_zero_is_gabidulin_over_the_subfield():
    F = field_for(9, 2)
    code = family_additive_twisted(F, 1, 1, 3, 0, 1)
    gab = family_gabidulin(F.over(1), 1)
    assert code.field == gab.field
    assert code.basis.shape == gab.basis.shape
    assert bool(np.all(code.basis == gab.basis))


@pytest.mark.parametrize("name,q,n,k,params,dim", [
    ("gabidulin", 2, 4, 2, {}, 8),
    ("twisted", 3, 4, 2, {"h": 1}, 8),
    ("additive-twisted", 9, 2, 1, {"q0": 3}, 4),
    ("trombetti-zhou", 3, 4, 2, {}, 8),
])
def test_family_code_searches_missing_parameters(name, q, n, k, params, dim):
    assert name in CODE_FAMILIES
    code = family_code(field_for(q, n), name, k, 1, params)
    assert code.dim == dim


def test_family_code_rejects_unknown_names():
    with pytest.raises(ParameterError):
        family_code(F16, "reed-solomon")
    with pytest.raises(ParameterError):
        family_code(F16, "sporadic")


def test_sporadic_checks_its_field():
    with pytest.raises(ParameterError):
        family_sporadic(F16, "C3", {"delta": 1})
    with pytest.raises(ParameterError):
        family_sporadic(field_for(5, 6), "C3", {"delta": 1})
    with pytest.raises(ParameterError):
        family_sporadic(F16, "C9")


@pytest.mark.slow
def test_c3_at_q5_is_mrd(config):
    F = field_for(5, 6)
    delta = find_sporadic_parameter(F, "C3")
    assert delta == 2
    report = verify_code(family_sporadic(F, "C3", {"delta": delta}), config)
    assert report.mrd
    assert report.params.label() == "(6,6,5;5)"


SPORADIC_CASES = [
    # (code, dual, q, parameter searched for)
    ("C1", "D1", 5, True),
    ("C2", "D2", 3, True),
    ("C3", "D3", 5, True),
    ("C4", "D4", 5, False),
    ("C4prime", "D4prime", 3, True),
    ("C5", "D5", 3, False),
    ("C6", "D6", 4, False),
]


@pytest.mark.parametrize("name,dual,q,searched", SPORADIC_CASES)
def test_sporadic_codes_and_their_duals_build(name, dual, q, searched):
    n = SPORADIC[name][0]
    F = field_for(q, n)
    params = {}
    if searched:
        key = SPORADIC[name][2]
        params[key] = find_sporadic_parameter(F, name)
        assert find_sporadic_parameter(F, dual) == params[key]
    code = family_sporadic(F, name, params)
    other = family_sporadic(F, dual, params)
    assert code.dim % n == 0 and other.dim % n == 0
    assert other.dim == n * n - code.dim
    assert delsarte_dual(code).dim == other.dim


@pytest.mark.parametrize("name,q,n", [
    ("C1", 4, 6),
    ("D1", 3, 6),
    ("C2", 2, 8),
    ("C3", 4, 6),
    ("C4", 3, 6),
    ("D4", 3, 6),
    ("C4prime", 2, 6),
    ("C5", 2, 7),
    ("C6", 2, 8),
    ("D6", 3, 8),
])
def test_sporadic_codes_reject_the_wrong_q(name, q, n):
    params = {"delta": 1, "h": 1}
    with pytest.raises(ParameterError):
        family_sporadic(field_for(q, n), name, params)
