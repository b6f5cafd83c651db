"""
Known families of F_q-linear MRD codes as q-polynomial codes.
"""
import logging
import math
from typing import Callable, Dict, List, Optional

import numpy as np

from rmlab.errors import ParameterError
from rmlab.models.schemas import RunConfig
from rmlab.services.gf import Field, codes, minus_one_power, split_prime_power
from rmlab.services.linpoly import LinPoly
from rmlab.services.rmcode import SquareCode, code_from_basis, is_mrd

logger = logging.getLogger(__name__)


def _check_gcd(n: int, s: int, family: str, strict: bool = False) -> None:
    if math.gcd(s, n) != 1:
        message = f"{family}: gcd(s={s}, n={n}) != 1"
        if strict:
            raise ParameterError(message)
        logger.warning(f"{message}; the code is not MRD in general")


def _check_k(n: int, k: int, family: str) -> None:
    if not 1 <= k <= n - 1:
        raise ParameterError(f"{family}: k={k} outside [1, {n - 1}]")


def family_gabidulin(F: Field, k: int, s: int = 1) -> SquareCode:
    """G_{k,s} = <x, x^{q^s}, ..., x^{q^{s(k-1)}}> over F_{q^n}."""
    _check_k(F.n, k, "gabidulin")
    _check_gcd(F.n, s, "gabidulin")
    gens = [LinPoly.monomial(F, s * i) for i in range(k)]
    return code_from_basis(gens)


def _norm_condition(F: Field, eta, e: int, family: str) -> None:
    if eta != 0 and F.norm(eta, 1) == minus_one_power(F, e):
        raise ParameterError(f"{family}: N(eta) = (-1)^{e}, the norm condition fails")


def family_twisted(F: Field, k: int, s: int, eta: int, h: int) -> SquareCode:
    """H_{k,s}(eta, h) = {a_0 x + ... + a_{k-1} x^{q^{s(k-1)}} + a_0^{q^{sh}} eta x^{q^{sk}}}."""
    n = F.n
    _check_k(n, k, "twisted")
    _check_gcd(n, s, "twisted", strict=True)
    eta_el = F.GF(int(eta))
    _norm_condition(F, eta_el, n * k, "twisted")
    rows = []
    for beta in F.basis:
        terms = {0: int(beta)}
        twisted = F.frobenius(beta, s * h) * eta_el
        rows.append(LinPoly.from_terms(F, terms) + LinPoly.monomial(F, s * k, int(twisted)))
        for i in range(1, k):
            rows.append(LinPoly.monomial(F, s * i, int(beta)))
    return code_from_basis(rows, over="fq")


def family_additive_twisted(F: Field, k: int, s: int, q0: int, eta: int, h: int) -> SquareCode:
    """A_{k,s,q0}(eta, h): F_{q0}-linear, returned over F_{q0} with rank_scale u (q = q0^u)."""
    n = F.n
    p0, h0 = split_prime_power(q0)
    if p0 != F.p or F.h % h0:
        raise ParameterError(f"additive twisted: q={F.q} is not a power of q0={q0}")
    u = F.h // h0
    _check_k(n, k, "additive twisted")
    _check_gcd(n, s, "additive twisted", strict=True)
    F0 = F.over(h0)
    eta_el = F0.GF(int(eta))
    _norm_condition(F0, eta_el, n * k * u, "additive twisted")
    rows = []
    for beta in F0.basis:
        twisted = F0.frobenius(beta, h) * eta_el
        rows.append(LinPoly.monomial(F0, 0, int(beta)) + LinPoly.monomial(F0, u * s * k, int(twisted)))
        for i in range(1, k):
            rows.append(LinPoly.monomial(F0, u * s * i, int(beta)))
    return code_from_basis(rows, over="fq", rank_scale=u)


def is_nonsquare(F: Field, x) -> bool:
    """x in F_q^* is a non-square (q odd)."""
    if x == 0:
        return False
    return bool(x ** ((F.q - 1) // 2) == -F.one)


def family_trombetti_zhou(F: Field, k: int, s: int, gamma: int) -> SquareCode:
    """D_{k,s}(gamma): a x + c_1 x^{q^s} + ... + gamma b x^{q^{sk}}, a, b in F_{q^{n/2}}."""
    n = F.n
    if n % 2:
        raise ParameterError(f"trombetti-zhou: n={n} must be even")
    if F.q % 2 == 0:
        raise ParameterError(f"trombetti-zhou: q={F.q} must be odd")
    _check_k(n, k, "trombetti-zhou")
    _check_gcd(n, s, "trombetti-zhou", strict=True)
    gamma_el = F.GF(int(gamma))
    if not is_nonsquare(F, F.norm(gamma_el, 1)):
        raise ParameterError("trombetti-zhou: N(gamma) must be a non-square in F_q")
    rows = []
    for a in F.subfield_basis(n // 2):
        rows.append(LinPoly.monomial(F, 0, int(a)))
        rows.append(LinPoly.monomial(F, s * k, int(a * gamma_el)))
    for beta in F.basis:
        for i in range(1, k):
            rows.append(LinPoly.monomial(F, s * i, int(beta)))
    return code_from_basis(rows, over="fq")


# -- sporadic codes -------------------------------------------------------------------


def _poly(F: Field, terms: Dict[int, object]) -> LinPoly:
    return LinPoly.from_terms(F, {i: int(a) for i, a in terms.items()})


def _require_q(F: Field, name: str, odd: bool = False, mod: Optional[tuple] = None, greater: int = 0) -> None:
    q = F.q
    if odd and q % 2 == 0:
        raise ParameterError(f"{name}: q={q} must be odd")
    if mod is not None and q % mod[0] != mod[1]:
        raise ParameterError(f"{name}: q={q} must be {mod[1]} mod {mod[0]}")
    if q <= greater:
        raise ParameterError(f"{name}: q={q} must exceed {greater}")


def _param(params: Dict[str, int], key: str, name: str) -> int:
    if key not in params or params[key] is None:
        raise ParameterError(f"{name} needs parameter {key!r}")
    return int(params[key])


def _delta_c1(F: Field, params: Dict[str, int], name: str):
    _require_q(F, name, greater=4)
    delta = F.GF(_param(params, "delta", name))
    if not F.in_subfield(delta, 2):
        raise ParameterError(f"{name}: delta must lie in F_{{q^2}}")
    return delta


def _delta_c2(F: Field, params: Dict[str, int], name: str):
    _require_q(F, name, odd=True)
    delta = F.GF(_param(params, "delta", name))
    if delta * delta != -F.one:
        raise ParameterError(f"{name}: delta^2 must equal -1")
    return delta


def _delta_c3(F: Field, params: Dict[str, int], name: str):
    _require_q(F, name, odd=True)
    delta = F.GF(_param(params, "delta", name))
    if delta * delta + delta != F.one:
        raise ParameterError(f"{name}: delta^2 + delta must equal 1")
    return delta


def _h_c4prime(F: Field, params: Dict[str, int], name: str):
    _require_q(F, name, odd=True)
    h = F.GF(_param(params, "h", name))
    if h ** (F.q ** 3 + 1) != -F.one:
        raise ParameterError(f"{name}: h^(q^3+1) must equal -1")
    return h


def _s_param(F: Field, params: Dict[str, int], name: str) -> int:
    s = int(params.get("s") or 1)
    if math.gcd(s, F.n) != 1:
        raise ParameterError(f"{name}: gcd(s={s}, {F.n}) must be 1")
    return s


def _c1(F, params):
    d = _delta_c1(F, params, "C1")
    return [_poly(F, {0: 1}), _poly(F, {1: d, 4: 1})]


def _d1(F, params):
    d = _delta_c1(F, params, "D1")
    return [_poly(F, {1: 1}), _poly(F, {2: 1}), _poly(F, {4: 1}), _poly(F, {0: 1, 3: -F.frobenius(d, 1)})]


def _c2(F, params):
    d = _delta_c2(F, params, "C2")
    return [_poly(F, {0: 1}), _poly(F, {1: d, 5: 1})]


def _d2(F, params):
    d = _delta_c2(F, params, "D2")
    return [_poly(F, {i: 1}) for i in (1, 2, 3, 5, 6)] + [_poly(F, {0: 1, 4: -d})]


def _c3(F, params):
    d = _delta_c3(F, params, "C3")
    return [_poly(F, {0: 1}), _poly(F, {1: 1, 3: 1, 5: d})]


def _d3(F, params):
    d = _delta_c3(F, params, "D3")
    return [_poly(F, {1: 1}), _poly(F, {3: 1}), _poly(F, {0: -F.one, 2: 1}), _poly(F, {0: d, 4: -F.one})]


def _c4(F, params):
    _require_q(F, "C4", odd=True, mod=(4, 1))
    if F.q > 29:
        logger.warning(f"C4: MRD property is established for q <= 29 only, got q={F.q}")
    return [_poly(F, {0: 1}), _poly(F, {1: 1, 2: -F.one, 4: 1, 5: 1})]


def _d4(F, params):
    _require_q(F, "D4", odd=True, mod=(4, 1))
    minus = -F.one
    return [_poly(F, {3: 1}), _poly(F, {1: 1, 2: 1}), _poly(F, {1: 1, 4: minus}), _poly(F, {1: 1, 5: minus})]


def _c4prime(F, params):
    h = _h_c4prime(F, params, "C4prime")
    return [_poly(F, {0: 1}), _poly(F, {1: h ** (F.q - 1), 2: -(h ** (F.q ** 2 - 1)), 4: 1, 5: 1})]


def _d4prime(F, params):
    h = _h_c4prime(F, params, "D4prime")
    hq1 = h ** (F.q - 1)
    return [
        _poly(F, {3: 1}),
        _poly(F, {1: F.frobenius(h, 2), 2: F.frobenius(h, 1)}),
        _poly(F, {1: 1, 4: -hq1}),
        _poly(F, {1: 1, 5: -hq1}),
    ]


def _c5(F, params):
    _require_q(F, "C5", odd=True)
    s = _s_param(F, params, "C5")
    return [_poly(F, {0: 1}), _poly(F, {s: 1}), _poly(F, {3 * s: 1})]


def _d5(F, params):
    _require_q(F, "D5", odd=True)
    s = _s_param(F, params, "D5")
    return [_poly(F, {j * s: 1}) for j in (0, 2, 3, 4)]


def _c6(F, params):
    _require_q(F, "C6", mod=(3, 1))
    s = _s_param(F, params, "C6")
    return [_poly(F, {0: 1}), _poly(F, {s: 1}), _poly(F, {3 * s: 1})]


def _d6(F, params):
    _require_q(F, "D6", mod=(3, 1))
    s = _s_param(F, params, "D6")
    return [_poly(F, {j * s: 1}) for j in (0, 2, 3, 4, 5)]


SPORADIC: Dict[str, tuple] = {
    # name: (n, generator builder, free parameter, expected minimum distance)
    "C1": (6, _c1, "delta", 5),
    "D1": (6, _d1, "delta", 3),
    "C2": (8, _c2, "delta", 7),
    "D2": (8, _d2, "delta", 3),
    "C3": (6, _c3, "delta", 5),
    "D3": (6, _d3, "delta", 3),
    "C4": (6, _c4, None, 5),
    "D4": (6, _d4, None, 3),
    "C4prime": (6, _c4prime, "h", 5),
    "D4prime": (6, _d4prime, "h", 3),
    "C5": (7, _c5, None, 5),
    "D5": (7, _d5, None, 4),
    "C6": (8, _c6, None, 6),
    "D6": (8, _d6, None, 4),
}


def family_sporadic(F: Field, name: str, params: Optional[Dict[str, int]] = None) -> SquareCode:
    """The sporadic codes C1..C6, C4prime and their listed duals, spanned over F_{q^n}."""
    if name not in SPORADIC:
        raise ParameterError(f"unknown sporadic code {name!r}; choose from {', '.join(SPORADIC)}")
    n, build, _, _ = SPORADIC[name]
    if F.n != n:
        raise ParameterError(f"{name} lives over F_{{q^{n}}}, got n={F.n}")
    gens: List[LinPoly] = build(F, params or {})
    return code_from_basis(gens)


# -- parameter searches ----------------------------------------------------------------


def _condition(F: Field, name: str) -> Callable[[np.ndarray], np.ndarray]:
    conditions = {
        "C1": lambda x: F.in_subfield(x, 2) & (codes(x) != 0),
        "C2": lambda x: x * x == -F.one,
        "C3": lambda x: x * x + x == F.one,
        "C4prime": lambda x: x ** (F.q ** 3 + 1) == -F.one,
    }
    key = "C" + name[1:]
    if key not in conditions:
        raise ParameterError(f"{name} has no free field parameter")
    return conditions[key]


def find_elements(F: Field, condition: Callable[[np.ndarray], np.ndarray]) -> List[int]:
    """Codes of all field elements satisfying a vectorized condition, ascending."""
    elems = F.elements
    return [int(c) for c in codes(elems[np.asarray(condition(elems))])]


def find_sporadic_parameter(F: Field, name: str, verify: bool = False,
                            config: Optional[RunConfig] = None) -> Optional[int]:
    """First field element satisfying the algebraic condition of ``name`` (and MRD, if asked)."""
    if name not in SPORADIC:
        raise ParameterError(f"unknown sporadic code {name!r}")
    key = SPORADIC[name][2]
    if key is None:
        raise ParameterError(f"{name} has no free field parameter")
    for candidate in find_elements(F, _condition(F, name)):
        if not verify:
            return candidate
        try:
            code = family_sporadic(F, name, {key: candidate})
        except ParameterError:
            continue
        if is_mrd(code, config):
            logger.info(f"{name}: {key}={candidate} gives an MRD code")
            return candidate
        logger.debug(f"{name}: {key}={candidate} is not MRD")
    return None


def find_twisted_eta(F: Field, norm: Optional[int] = None, k: int = 2) -> int:
    """First eta with N(eta) = norm, or the first nonzero eta passing the twisted norm condition."""
    if norm is not None:
        found = find_elements(F, lambda x: F.norm(x, 1) == F.GF(norm))
    else:
        bad = minus_one_power(F, F.n * k)
        found = find_elements(F, lambda x: (codes(x) != 0) & (F.norm(x, 1) != bad))
    if not found:
        raise ParameterError(f"no suitable eta in F_{F.order}")
    return found[0]


def find_tz_gamma(F: Field) -> int:
    """First gamma whose norm is a non-square in F_q."""
    for g in find_elements(F, lambda x: codes(x) != 0):
        if is_nonsquare(F, F.norm(F.GF(g), 1)):
            return g
    raise ParameterError(f"no gamma with non-square norm in F_{F.order}")


# -- dispatch ----------------------------------------------------------------------------


CODE_FAMILIES: List[str] = ["gabidulin", "twisted", "additive-twisted", "trombetti-zhou", "sporadic"]


def family_code(F: Field, name: str, k: int = 2, s: int = 1,
                params: Optional[Dict[str, int]] = None) -> SquareCode:
    """Build a named family; eta, gamma and sporadic parameters are searched for when missing."""
    params = {key: v for key, v in (params or {}).items() if v is not None}
    if name == "gabidulin":
        return family_gabidulin(F, k, s)
    if name == "twisted":
        eta = params["eta"] if "eta" in params else find_twisted_eta(F, k=k)
        return family_twisted(F, k, s, eta, params.get("h", 1))
    if name == "additive-twisted":
        if "q0" not in params:
            raise ParameterError("additive-twisted needs q0")
        F0 = F.over(split_prime_power(params["q0"])[1])
        eta = params["eta"] if "eta" in params else find_twisted_eta(F0, k=k)
        return family_additive_twisted(F, k, s, params["q0"], eta, params.get("h", 1))
    if name == "trombetti-zhou":
        gamma = params["gamma"] if "gamma" in params else find_tz_gamma(F)
        return family_trombetti_zhou(F, k, s, gamma)
    if name == "sporadic":
        sporadic = params.pop("name", None)
        if sporadic is None:
            raise ParameterError("sporadic needs a name")
        key = SPORADIC.get(sporadic, (None, None, None))[2]
        if key is not None and key not in params:
            params[key] = find_sporadic_parameter(F, sporadic)
            if params[key] is None:
                raise ParameterError(f"{sporadic}: no {key} in F_{F.order} meets the condition")
        return family_sporadic(F, sporadic, params)
    raise ParameterError(f"unknown family {name!r}; choose from {', '.join(CODE_FAMILIES)}")
