"""
Known maximum scattered F_q-subspaces.

U1..U5 live in F_{q^n}^2 as graphs {(x, f(x))}; lavrauw and baer in F_{q^n}^r;
bgmp and csmpz are given in the field model V = F_{q^{2rt}} and presented over
F_{q^{2t}}^r through a FieldEmbedding.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np

from rmlab.errors import ParameterError
from rmlab.models.schemas import RunConfig
from rmlab.services.families import find_elements
from rmlab.services.gf import Field, codes, field_for
from rmlab.services.linalg import rank, resolve_config
from rmlab.services.linpoly import LinPoly
from rmlab.services.linset import Subspace, is_scattered_field_model, subspace_from_map
from rmlab.services.tower import FieldEmbedding

logger = logging.getLogger(__name__)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ParameterError(message)


# -- U1..U5 -----------------------------------------------------------------------------


def _poly(F: Field, terms: Dict[int, object]) -> LinPoly:
    return LinPoly.from_terms(F, {i: int(a) for i, a in terms.items()})


def u1_map(F: Field, s: int = 1) -> LinPoly:
    """x^{q^s}, gcd(s, n) = 1."""
    _require(1 <= s <= F.n - 1 and math.gcd(s, F.n) == 1, f"U1: need 1 <= s < n with gcd(s={s}, n={F.n}) = 1")
    return _poly(F, {s: 1})


def u2_map(F: Field, delta: int, s: int = 1) -> LinPoly:
    """delta x^{q^s} + x^{q^{n-s}}, n >= 4, q != 2, N(delta) not in {0, 1}."""
    n = F.n
    _require(n >= 4, f"U2: n={n} must be at least 4")
    _require(F.q != 2, "U2: q must differ from 2")
    _require(math.gcd(s, n) == 1, f"U2: gcd(s={s}, n={n}) must be 1")
    d = F.GF(int(delta))
    _require(int(F.norm(d, 1)) not in (0, 1), "U2: N(delta) must not be 0 or 1")
    return _poly(F, {s: d, n - s: 1})


def u3_map(F: Field, delta: int, s: int = 1) -> LinPoly:
    """delta x^{q^s} + x^{q^{s+n/2}}, n in {6, 8}, N_{q^n/q^{n/2}}(delta) not in {0, 1}."""
    n = F.n
    _require(n in (6, 8), f"U3: n={n} must be 6 or 8")
    _require(math.gcd(s, n // 2) == 1, f"U3: gcd(s={s}, n/2={n // 2}) must be 1")
    d = F.GF(int(delta))
    _require(int(F.norm(d, n // 2)) not in (0, 1), "U3: N_{q^n/q^{n/2}}(delta) must not be 0 or 1")
    return _poly(F, {s: d, (s + n // 2) % n: 1})


def u4_map(F: Field, delta: int) -> LinPoly:
    """x^q + x^{q^3} + delta x^{q^5} over F_{q^6}, q odd, delta^2 + delta = 1."""
    _require(F.n == 6, f"U4 lives over F_{{q^6}}, got n={F.n}")
    _require(F.q % 2 == 1, f"U4: q={F.q} must be odd")
    d = F.GF(int(delta))
    _require(d * d + d == F.one, "U4: delta^2 + delta must equal 1")
    return _poly(F, {1: 1, 3: 1, 5: d})


def u5_map(F: Field, h: int) -> LinPoly:
    """h^{q-1} x^q - h^{q^2-1} x^{q^2} + x^{q^4} + x^{q^5} over F_{q^6}, q odd, h^{q^3+1} = -1."""
    _require(F.n == 6, f"U5 lives over F_{{q^6}}, got n={F.n}")
    _require(F.q % 2 == 1, f"U5: q={F.q} must be odd")
    q = F.q
    hh = F.GF(int(h))
    _require(hh ** (q ** 3 + 1) == -F.one, "U5: h^(q^3+1) must equal -1")
    return _poly(F, {1: hh ** (q - 1), 2: -(hh ** (q * q - 1)), 4: 1, 5: 1})


_CONDITIONS: Dict[str, Callable[[Field], Callable[[np.ndarray], np.ndarray]]] = {
    "U2": lambda F: lambda x: np.isin(codes(F.norm(x, 1)), [0, 1], invert=True),
    "U3": lambda F: lambda x: np.isin(codes(F.norm(x, F.n // 2)), [0, 1], invert=True),
    "U4": lambda F: lambda x: x * x + x == F.one,
    "U5": lambda F: lambda x: x ** (F.q ** 3 + 1) == -F.one,
}


def find_family_parameter(F: Field, name: str) -> Optional[int]:
    """Smallest element code satisfying the algebraic condition of U2..U5, or None."""
    if name not in _CONDITIONS:
        raise ParameterError(f"{name} has no free field parameter")
    found = find_elements(F, _CONDITIONS[name](F))
    return found[0] if found else None


def graph_map(F: Field, name: str, params: Optional[Dict[str, int]] = None) -> LinPoly:
    """The q-polynomial f of U = {(x, f(x))} for U1..U5; a missing delta or h is searched for."""
    params = dict(params or {})
    s = int(params.get("s") or 1)
    if name == "U1":
        return u1_map(F, s)
    if name not in _CONDITIONS:
        raise ParameterError(f"{name} is not one of U1..U5")
    key = "h" if name == "U5" else "delta"
    if params.get(key) is None:
        params[key] = find_family_parameter(F, name)
        if params[key] is None:
            raise ParameterError(f"{name}: no {key} in F_{{{F.order}}} satisfies the family condition")
        logger.info(f"{name}: using {key}={params[key]}")
    if name == "U2":
        return u2_map(F, params["delta"], s)
    if name == "U3":
        return u3_map(F, params["delta"], s)
    if name == "U4":
        return u4_map(F, params["delta"])
    return u5_map(F, params["h"])


# -- families in F_{q^n}^r ------------------------------------------------------------------


def lavrauw(F: Field, r: int) -> Subspace:
    """{(x_1, ..., x_{r/2}, x_1^q, ..., x_{r/2}^q)} of rank rn/2, r even."""
    _require(r >= 2 and r % 2 == 0, f"lavrauw: r={r} must be even")
    half = r // 2
    rows = np.zeros((half * F.n, r), dtype=np.int64)
    images = codes(F.frobenius(F.basis, 1))
    for j in range(half):
        rows[j * F.n:(j + 1) * F.n, j] = codes(F.basis)
        rows[j * F.n:(j + 1) * F.n, j + half] = images
    return Subspace(F, F.GF(rows), r)


def baer(F: Field, r: int) -> Subspace:
    """The canonical Baer subgeometry F_q^r of F_{q^2}^r."""
    _require(F.n == 2, f"baer: n={F.n} must be 2")
    _require(r >= 1, f"baer: r={r} must be positive")
    return Subspace(F, F.GF(np.eye(r, dtype=np.int64)), r)


# -- field-model families -------------------------------------------------------------------


@dataclass
class FieldModel:
    """An F_q-subspace of B = F_{q^{2rt}} given by elements, with V = F_{q^{2t}}^r."""

    big: Field
    small: Field
    embedding: FieldEmbedding
    omega: np.ndarray
    elements: np.ndarray

    @property
    def r(self) -> int:
        return self.embedding.r

    def subspace(self) -> Subspace:
        return Subspace(self.small, self.embedding.relative_coordinates(self.elements), self.r)


def omega_for(B: Field, t: int):
    """First element (by code) of F_{q^{2t}} outside F_{q^t}."""
    candidates = B.subfield_elements(2 * t)
    outside = candidates[~B.in_subfield(candidates, t)]
    return outside[0]


def _model_fields(q: int, t: int, r: int):
    B = field_for(q, 2 * r * t)
    S = field_for(q, 2 * t)
    return B, S, FieldEmbedding(S, B)


def bgmp_conditions(q: int, t: int, r: int, i: int) -> None:
    _require(t >= 2, f"bgmp: t={t} must be at least 2")
    _require(r >= 2 and math.gcd(t, r) == 1, f"bgmp: gcd(t={t}, r={r}) must be 1")
    _require(1 <= i <= r * t - 1, f"bgmp: i={i} outside [1, {r * t - 1}]")
    _require(math.gcd(i, 2 * t) == 1, f"bgmp: gcd(i={i}, 2t={2 * t}) must be 1")
    _require(math.gcd(i, r * t) == r, f"bgmp: gcd(i={i}, rt={r * t}) must equal r={r}")


def bgmp_norm_ok(B: Field, t: int, r: int, a) -> bool:
    """a in F_{q^{rt}}^* with N_{q^{rt}/q^r}(a) outside F_q."""
    if int(a) == 0 or not bool(B.in_subfield(a, r * t)):
        return False
    return not bool(B.in_subfield(B.norm_between(a, r * t, r), 1))


def find_bgmp_parameter(B: Field, t: int, r: int) -> Optional[int]:
    elems = B.subfield_elements(r * t)
    for a in elems[1:]:
        if bgmp_norm_ok(B, t, r, a):
            return int(a)
    return None


def bgmp_model(q: int, t: int, r: int, i: int, a: Optional[int] = None) -> FieldModel:
    """{a x^{q^i} + x omega : x in F_{q^{rt}}} in F_{q^{2rt}} over F_{q^{2t}}."""
    bgmp_conditions(q, t, r, i)
    B, S, emb = _model_fields(q, t, r)
    if a is None:
        a = find_bgmp_parameter(B, t, r)
        if a is None:
            raise ParameterError(f"bgmp: no a in F_{{q^{r * t}}} satisfies the norm condition")
        logger.info(f"bgmp: using a={a}")
    a_el = B.GF(int(a))
    _require(bgmp_norm_ok(B, t, r, a_el), f"bgmp: a={int(a)} must lie in F_{{q^{r * t}}}^* with N(a) outside F_q")
    omega = omega_for(B, t)
    x = B.subfield_basis(r * t)
    elements = a_el * B.frobenius(x, i) + x * omega
    return FieldModel(big=B, small=S, embedding=emb, omega=omega, elements=elements)


def bgmp(q: int, t: int, r: int, i: int, a: Optional[int] = None) -> Subspace:
    return bgmp_model(q, t, r, i, a).subspace()


def csmpz_model(q: int, t: int, config: Optional[RunConfig] = None, max_candidates: int = 4096) -> FieldModel:
    """First (i, a, b) in ascending order making {a x^{q^i} + b x^{q^{2t+i}} + omega x} scattered.

    x ranges over F_{q^{3t}}; scatteredness is taken with respect to F_{q^{2t}}.
    """
    config = resolve_config(config)
    _require(t >= 2, f"csmpz: t={t} must be at least 2")
    B, S, emb = _model_fields(q, t, 3)
    omega = omega_for(B, t)
    x = B.subfield_basis(3 * t)
    units = B.subfield_elements(3 * t)[1:]
    tried = 0
    for i in range(1, 3 * t):
        if math.gcd(i, 2 * t) != 1:
            continue
        xi = B.frobenius(x, i)
        xj = B.frobenius(x, 2 * t + i)
        for a in units:
            for b in units:
                tried += 1
                if tried > max_candidates:
                    raise ParameterError(f"csmpz: no scattered example among the first {max_candidates} candidates")
                elements = a * xi + b * xj + omega * x
                if rank(B.coordinates(elements)) != 3 * t:
                    continue
                if is_scattered_field_model(B, elements, 2 * t, config):
                    logger.info(f"csmpz: i={i}, a={int(a)}, b={int(b)} after {tried} candidates")
                    return FieldModel(big=B, small=S, embedding=emb, omega=omega, elements=elements)
                logger.debug(f"csmpz: i={i}, a={int(a)}, b={int(b)} not scattered")
    raise ParameterError("csmpz: search exhausted without a scattered example")


def csmpz(q: int, t: int, config: Optional[RunConfig] = None) -> Subspace:
    return csmpz_model(q, t, config).subspace()


# -- dispatch ----------------------------------------------------------------------------


FAMILIES: List[str] = ["U1", "U2", "U3", "U4", "U5", "lavrauw", "baer", "bgmp", "csmpz"]


def scattered_family(name: str, q: int, n: int, r: int = 2, params: Optional[Dict[str, int]] = None,
                     config: Optional[RunConfig] = None) -> Subspace:
    """Build a named family in F_{q^n}^r; missing field parameters are searched for."""
    params = dict(params or {})
    if name not in FAMILIES:
        raise ParameterError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")
    if name in ("bgmp", "csmpz"):
        _require(n % 2 == 0, f"{name}: n={n} must be even")
        t = n // 2
        if name == "csmpz":
            _require(r == 3, f"csmpz lives in PG(2, q^n), got r={r}")
            return csmpz(q, t, config)
        return bgmp(q, t, r, int(params.get("i") or r), params.get("a"))

    F = field_for(q, n)
    if name == "lavrauw":
        return lavrauw(F, r)
    if name == "baer":
        return baer(F, r)
    _require(r == 2, f"{name} lives in F_{{q^n}}^2, got r={r}")
    return subspace_from_map(graph_map(F, name, params))
