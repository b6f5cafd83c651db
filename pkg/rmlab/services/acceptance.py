"""
Acceptance suites: JSON lists of criteria, each naming a registered check and its parameters.
"""
import logging
import math
import time
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from rmlab.config import settings
from rmlab.errors import ParameterError
from rmlab.models.response import AcceptanceReport, CriterionResult
from rmlab.models.schemas import RunConfig
from rmlab.services.bridge import (
    alternative_projection,
    code_from_f,
    code_from_hscattered,
    code_from_subspace,
    roundtrip,
    verify_sheekey,
)
from rmlab.services.families import (
    SPORADIC,
    family_gabidulin,
    family_sporadic,
    family_trombetti_zhou,
    family_twisted,
    find_twisted_eta,
    find_tz_gamma,
)
from rmlab.services.gf import field_for
from rmlab.services.linalg import fan_out, resolve_config
from rmlab.services.linpoly import LinPoly
from rmlab.services.linset import (
    is_h_scattered,
    is_scattered,
    random_subspace,
    subspace_from_map,
    subspace_from_maps,
)
from rmlab.services.rmcode import (
    Code,
    adjoint_code,
    code_equal,
    code_params,
    delsarte_dual,
    idealiser,
    idealiser_report,
    is_mrd,
    mrd_weight_formula,
    singleton_holds,
    verify_code,
    weight_distribution,
)
from rmlab.services.scattered import baer, graph_map, lavrauw, u4_map
from rmlab.services.search import gl_class, max_scattered_rank_search, zgl_class_bruteforce
from rmlab.services.serialization import read_json

logger = logging.getLogger(__name__)

Check = Callable[[Dict[str, Any], RunConfig], Tuple[bool, str]]
CHECKS: Dict[str, Check] = {}


def check(name: str) -> Callable[[Check], Check]:
    def register(fn: Check) -> Check:
        CHECKS[name] = fn
        return fn

    return register


def _gabidulin_cases(params: Dict[str, Any]):
    for q in params["q"]:
        for n in params["n"]:
            F = field_for(q, n)
            for k in params["k"]:
                for s in range(1, n):
                    if math.gcd(s, n) == 1 and (s == 1 or params.get("all_s", False)):
                        yield F, k, s, family_gabidulin(F, k, s)


@check("gabidulin_mrd")
def _gabidulin_mrd(params, config):
    failures = []
    count = 0
    for F, k, s, code in _gabidulin_cases(params):
        count += 1
        report = verify_code(code, config)
        if not report.mrd or report.params.d != F.n - k + 1:
            failures.append(f"q={F.q} n={F.n} k={k} s={s}: {report.params.label()}")
    return not failures, f"{count} codes" + (f"; failed {failures}" if failures else "")


@check("weight_formula")
def _weight_formula(params, config):
    failures = []
    for case in params["cases"]:
        F = field_for(case["q"], case["n"])
        k = case["k"]
        d = F.n - k + 1
        counts = weight_distribution(family_gabidulin(F, k), config).counts
        expected = [1] + [0] * (d - 1) + [mrd_weight_formula(F.n, F.n, F.q, d, l) for l in range(F.n - d + 1)]
        if counts != expected:
            failures.append(f"G_{k},1 q={F.q} n={F.n}: {counts} != {expected}")
        if "exact" in case and counts != case["exact"]:
            failures.append(f"G_{k},1 q={F.q} n={F.n}: {counts} != {case['exact']}")
    return not failures, "; ".join(failures) or f"{len(params['cases'])} distributions match"


@check("duality")
def _duality(params, config):
    failures = []
    count = 0
    for F, k, s, code in _gabidulin_cases(params):
        count += 1
        dual = delsarte_dual(code)
        n = F.n
        if dual.dim != n * n - n * k or not is_mrd(dual, config) or not code_equal(delsarte_dual(dual), code):
            failures.append(f"q={F.q} n={n} k={k} s={s}")
    return not failures, f"{count} duals" + (f"; failed {failures}" if failures else "")


def _idealiser_codes(params) -> List[Tuple[str, Code, Optional[Tuple[int, int]]]]:
    """(label, code, expected (|L|, |R|) or None)."""
    out = []
    for F, k, s, code in _gabidulin_cases(params["gabidulin"]):
        out.append((f"G_{k},{s} q={F.q} n={F.n}", code, (F.order, F.order)))
    tw = params["twisted"]
    F = field_for(tw["q"], tw["n"])
    eta = find_twisted_eta(F, tw["norm"])
    for h in tw["h"]:
        expected = (F.q ** math.gcd(F.n, h), F.q ** math.gcd(F.n, (2 - h) % F.n))
        out.append((f"H_2,1(eta={eta},h={h})", family_twisted(F, 2, 1, eta, h), expected))
    tz = params["trombetti_zhou"]
    F = field_for(tz["q"], tz["n"])
    side = F.q ** (F.n // 2)
    out.append(("D_2,1", family_trombetti_zhou(F, 2, 1, find_tz_gamma(F)), (side, side)))
    return out


@check("idealisers")
def _idealisers(params, config):
    failures = []
    codes_ = _idealiser_codes(params)
    for label, code, expected in codes_:
        report = idealiser_report(code, config)
        if (report.left_order, report.right_order) != expected:
            failures.append(f"{label}: ({report.left_order}, {report.right_order}) != {expected}")
        elif label.startswith("G_") and not (report.left_is_field and report.right_is_field):
            failures.append(f"{label}: idealisers are not fields")
    return not failures, "; ".join(failures) or f"{len(codes_)} codes"


@check("idealiser_transport")
def _idealiser_transport(params, config):
    failures = []
    codes_ = _idealiser_codes(params)
    for label, code, _ in codes_:
        L, R = idealiser(code, "left").size, idealiser(code, "right").size
        adj, dual = adjoint_code(code), delsarte_dual(code)
        identities = {
            "L(C^T)=R(C)": idealiser(adj, "left").size == R,
            "R(C^T)=L(C)": idealiser(adj, "right").size == L,
            "L(C^perp)=L(C)": idealiser(dual, "left").size == L,
            "R(C^perp)=R(C)": idealiser(dual, "right").size == R,
        }
        broken = [name for name, ok in identities.items() if not ok]
        if broken:
            failures.append(f"{label}: {broken}")
    return not failures, "; ".join(failures) or f"{len(codes_)} codes"


@check("scattered_catalogue")
def _scattered_catalogue(params, config):
    failures = []
    count = 0
    for q in params["u1"]["q"]:
        for n in params["u1"]["n"]:
            F = field_for(q, n)
            for s in range(1, n):
                if math.gcd(s, n) != 1:
                    continue
                count += 1
                if not is_scattered(subspace_from_map(LinPoly.monomial(F, s)), config):
                    failures.append(f"U1 q={q} n={n} s={s}")
    for case in params.get("not_scattered", []):
        F = field_for(case["q"], case["n"])
        count += 1
        if is_scattered(subspace_from_map(LinPoly.parse(F, case["f"])), config):
            failures.append(f"{case['f']} q={F.q} n={F.n} is scattered")
    for case in params.get("families", []):
        F = field_for(case["q"], case["n"])
        count += 1
        U = subspace_from_map(graph_map(F, case["family"], case.get("params")))
        if not is_scattered(U, config):
            failures.append(f"{case['family']} q={F.q} n={F.n}")
    for case in params.get("baer", []):
        count += 1
        if not is_scattered(baer(field_for(case["q"], 2), case["r"]), config):
            failures.append(f"Baer r={case['r']} q={case['q']}")
    return not failures, f"{count} subspaces" + (f"; failed {failures}" if failures else "")


@check("max_scattered_rank")
def _max_scattered_rank(params, config):
    failures = []
    for case in params["cases"]:
        report = max_scattered_rank_search(case["r"], case["n"], case["q"], config)
        if report.max_rank != case["expected"]:
            failures.append(f"V({case['r']},{case['q']}^{case['n']}): {report.max_rank} != {case['expected']}")
        for k, count in case.get("refuted", {}).items():
            if report.refuted.get(int(k)) != count:
                failures.append(f"rank {k}: refuted {report.refuted.get(int(k))} != {count}")
    return not failures, "; ".join(failures) or f"{len(params['cases'])} searches"


@check("sheekey")
def _sheekey(params, config):
    failures = []
    for case in params["cases"]:
        F = field_for(case["q"], case["n"])
        f = graph_map(F, case["family"], case.get("params")) if "family" in case else LinPoly.parse(F, case["f"])
        report = verify_sheekey(f, config)
        if not report.agree or report.scattered != case["expected"]:
            failures.append(f"{f.to_text()}: scattered={report.scattered}, MRD={report.mrd}")
    return not failures, "; ".join(failures) or f"{len(params['cases'])} maps agree"


@check("roundtrip")
def _roundtrip(params, config):
    F = field_for(params["q"], params["n"])
    U = lavrauw(F, params["r"])
    report = roundtrip(U, config)
    code = code_from_subspace(U, config=config)
    right = idealiser(code, "right").size
    other = code_from_subspace(U, alternative_projection(U, params.get("seed", 1)), config)
    same = weight_distribution(other, config) == weight_distribution(code, config) and is_mrd(other, config)
    ok = report.mrd and report.round_trip_equal and report.params.label() == params["label"] and right == F.order and same
    return ok, f"{report.params.label()} MRD={report.mrd} |R|={right} equal={report.round_trip_equal} G-independent={same}"


@check("sporadic")
def _sporadic(params, config):
    failures = []
    for case in params["cases"]:
        F = field_for(case["q"], SPORADIC[case["name"]][0])
        if case.get("via") == "scattered":
            f = u4_map(F, case["params"]["delta"])
            code = family_sporadic(F, case["name"], case["params"])
            scattered = is_scattered(subspace_from_map(f), config)
            same = code_equal(code, code_from_f(f))
            # U_f maximum scattered makes C_f MRD with d = n - 1
            d = F.n - 1
            mrd = scattered and singleton_holds(code, d)[1]
            label = code_params(code, d).label() if mrd else f"U_f scattered={scattered}"
            ok = same and mrd and label == case["label"]
            if not same:
                label += ", differs from C_f"
        else:
            report = verify_code(family_sporadic(F, case["name"], case.get("params")), config)
            ok = report.mrd and report.params.label() == case["label"]
            label = report.params.label()
        if not ok:
            failures.append(f"{case['name']} q={F.q}: {label}")
    return not failures, "; ".join(failures) or f"{len(params['cases'])} sporadic codes"


@check("classes")
def _classes(params, config):
    failures = []
    for case in params["zgl"]:
        F = field_for(case["q"], case["n"])
        got = zgl_class_bruteforce(subspace_from_map(LinPoly.monomial(F, 1)), config)
        if got != case["expected"]:
            failures.append(f"Z(GammaL)-class at n={F.n}: {got} != {case['expected']}")
    for case in params.get("gl", []):
        F = field_for(case["q"], case["n"])
        report = gl_class(subspace_from_map(LinPoly.monomial(F, 1)), config)
        if report.gl_class != case["expected"]:
            failures.append(f"GammaL-class at n={F.n}: {report.gl_class} != {case['expected']}")
    return not failures, "; ".join(failures) or "classes match"


@check("h_scattered")
def _h_scattered(params, config):
    failures = []
    F = field_for(params["q"], params["n"])
    maps = [LinPoly.monomial(F, i) for i in range(params["r"])]
    U = subspace_from_maps(maps)
    h = params["h"]
    if not is_h_scattered(U, h, config) or U.dim * (h + 1) != U.r * F.n:
        failures.append(f"{{(x, x^q, ...)}} over F_{F.order} is not maximum {h}-scattered")
    if not is_mrd(code_from_hscattered(maps), config):
        failures.append("<x, x^q, ...> is not MRD")
    rnd = params["random"]
    G = field_for(rnd["q"], rnd["n"])
    rng = np.random.default_rng(rnd.get("seed", 0))
    for trial in range(rnd["count"]):
        k = int(rng.integers(1, rnd["r"] * G.n // 2 + 2))
        V = random_subspace(G, rnd["r"], k, seed=int(rng.integers(2 ** 31)))
        if is_h_scattered(V, 1, config) != is_scattered(V, config):
            failures.append(f"random subspace {trial} (k={k})")
    return not failures, "; ".join(failures) or f"h={h} verified; {rnd['count']} random subspaces agree"


# -- runner ---------------------------------------------------------------------------


def suite_path(name: str) -> Path:
    path = settings.fixtures_path / f"{name}.json"
    if not path.exists():
        available = sorted(p.stem for p in settings.fixtures_path.glob("*.json"))
        raise ParameterError(f"unknown suite {name!r}; available: {', '.join(available)}")
    return path


def run_criterion(criterion: Dict[str, Any], config: RunConfig) -> CriterionResult:
    start = time.perf_counter()
    name = criterion["check"]
    try:
        if name not in CHECKS:
            raise ParameterError(f"unknown check {name!r}")
        passed, detail = CHECKS[name](criterion.get("params", {}), config)
    except Exception as e:
        passed, detail = False, f"{type(e).__name__}: {e}"
        logger.error(f"Criterion {criterion['id']} raised: {str(e)}", exc_info=not isinstance(e, ValueError))
    seconds = time.perf_counter() - start
    logger.info(f"Criterion {criterion['id']} {'PASS' if passed else 'FAIL'} in {seconds:.1f}s")
    return CriterionResult(id=str(criterion["id"]), title=criterion["title"], passed=passed,
                           seconds=round(seconds, 3), detail=detail)


def run_acceptance(suite: str, config: Optional[RunConfig] = None) -> AcceptanceReport:
    """Run every criterion of a suite; failures are reported, never raised."""
    config = resolve_config(config)
    data = read_json(suite_path(suite))
    criteria = data.get("criteria", [])
    inner = config.model_copy(update={"workers": 1})
    results = fan_out(criteria, lambda c: run_criterion(c, inner), config.workers)
    return AcceptanceReport(suite=data.get("suite", suite), results=results)
