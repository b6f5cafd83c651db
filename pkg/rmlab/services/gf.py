"""
Finite-field tower F_p < F_q < F_{q^n} on top of ``galois``.

One ``galois.GF(p**(h*n))`` class carries all arithmetic; subfields are
predicates (fixed points of a Frobenius power), never second towers.
"""
import json
import logging
import math
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import galois
import numpy as np

from rmlab.config import settings
from rmlab.errors import FieldError
from rmlab.models.schemas import FieldSpec

logger = logging.getLogger(__name__)


def codes(x) -> np.ndarray:
    """Integer codes of a field array (or scalar) as a plain int64 ndarray."""
    return np.asarray(x.view(np.ndarray), dtype=np.int64)


@lru_cache(maxsize=8)
def _load_moduli(path: str) -> Dict[str, Dict[str, List[int]]]:
    table_path = Path(path)
    if not table_path.exists():
        logger.warning(f"Modulus table {table_path} not found, using galois defaults only")
        return {}
    with table_path.open(encoding="utf-8") as fh:
        raw = json.load(fh)
    return {str(p): {str(d): list(c) for d, c in entries.items()} for p, entries in raw.get("moduli", {}).items()}


def default_modulus(p: int, degree: int, table: Optional[str] = None) -> List[int]:
    """Ascending coefficients of the default irreducible polynomial of the given degree over F_p."""
    entries = _load_moduli(str(table or settings.moduli_path))
    stored = entries.get(str(p), {}).get(str(degree))
    if stored is not None:
        return stored
    poly = galois.irreducible_poly(p, degree)
    ascending = [int(c) for c in poly.coeffs[::-1]]
    logger.debug(f"No stored modulus for p={p}, degree={degree}; using {ascending}")
    return ascending


class Field:
    """The field F_{q^n}, q = p^h, with a distinguished F_q-basis."""

    def __init__(self, spec: FieldSpec):
        p, h, n = spec.p, spec.h, spec.n
        if not galois.is_prime(p):
            raise FieldError(f"p={p} is not prime")
        degree = h * n
        modulus = list(spec.modulus) if spec.modulus is not None else default_modulus(p, degree)
        if len(modulus) != degree + 1:
            raise FieldError(f"modulus must have {degree + 1} coefficients, got {len(modulus)}")
        if any(not 0 <= c < p for c in modulus):
            raise FieldError(f"modulus coefficients must lie in [0, {p})")
        if modulus[-1] != 1:
            raise FieldError("modulus is not monic")
        poly = galois.Poly(modulus, field=galois.GF(p), order="asc")
        if degree > 1 and not poly.is_irreducible():
            raise FieldError(f"modulus {modulus} is reducible over F_{p}")

        self.p, self.h, self.n = p, h, n
        self.q = p ** h
        self.degree = degree
        self.order = p ** degree
        self.modulus = modulus
        self.GF = galois.GF(self.order, irreducible_poly=poly) if degree > 1 else galois.GF(p)
        logger.debug(f"Created F_{self.order} (q={self.q}, n={n}) with modulus {modulus}")

    # -- identity -----------------------------------------------------------------

    @property
    def spec(self) -> FieldSpec:
        return FieldSpec(p=self.p, h=self.h, n=self.n, modulus=self.modulus)

    @property
    def key(self) -> Tuple[int, int, int, Tuple[int, ...]]:
        return (self.p, self.h, self.n, tuple(self.modulus))

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"Field(p={self.p}, h={self.h}, n={self.n}, modulus={self.modulus})"

    def over(self, h0: int) -> "Field":
        """The same field regarded over the subfield F_{p^h0} (h0 must divide h)."""
        if h0 < 1 or self.h % h0:
            raise FieldError(f"h0={h0} does not divide h={self.h}")
        return field_create(FieldSpec(p=self.p, h=h0, n=self.n * self.h // h0, modulus=self.modulus))

    # -- elements -----------------------------------------------------------------

    def __call__(self, value):
        return self.GF(value)

    @property
    def zero(self):
        return self.GF(0)

    @property
    def one(self):
        return self.GF(1)

    @property
    def root(self):
        """The modulus root (code p), or 0's successor in a prime field."""
        return self.GF(self.p) if self.degree > 1 else self.GF(1)

    @cached_property
    def elements(self):
        return self.GF.elements

    @cached_property
    def primitive(self):
        return self.GF.primitive_element

    # -- Frobenius, norm, trace -------------------------------------------------------

    @cached_property
    def _frobenius_table(self) -> Optional[np.ndarray]:
        if self.order > settings.TABLE_LIMIT:
            return None
        return codes(self.elements ** self.q)

    def frobenius(self, x, s: int = 1):
        """x^{q^s}, with s reduced mod n."""
        s %= self.n
        if s == 0:
            return x.copy() if isinstance(x, np.ndarray) and x.ndim else x
        table = self._frobenius_table
        if table is None:
            return x ** (self.q ** s)
        out = codes(x)
        for _ in range(s):
            out = table[out]
        return self.GF(out)

    def _check_sub_degree(self, sub_degree: int) -> None:
        if sub_degree < 1 or self.n % sub_degree:
            raise FieldError(f"sub_degree={sub_degree} does not divide n={self.n}")

    def norm_trace(self, x, sub_degree: int = 1):
        """(N_{q^n/q^sub}(x), Tr_{q^n/q^sub}(x))."""
        self._check_sub_degree(sub_degree)
        step = sub_degree
        norm = x
        trace = x
        y = x
        for _ in range(self.n // sub_degree - 1):
            y = self.frobenius(y, step)
            norm = norm * y
            trace = trace + y
        return norm, trace

    def norm(self, x, sub_degree: int = 1):
        return self.norm_trace(x, sub_degree)[0]

    def trace(self, x, sub_degree: int = 1):
        return self.norm_trace(x, sub_degree)[1]

    def norm_between(self, x, top: int, bottom: int):
        """N_{q^top/q^bottom}(x) for x in F_{q^top} (bottom divides top, top divides n)."""
        self._check_sub_degree(top)
        if top % bottom:
            raise FieldError(f"{bottom} does not divide {top}")
        norm = x
        y = x
        for _ in range(top // bottom - 1):
            y = self.frobenius(y, bottom)
            norm = norm * y
        return norm

    def subfield_trace(self, x, sub_degree: int):
        """Tr_{q^sub/q}(x) for x already in F_{q^sub}."""
        self._check_sub_degree(sub_degree)
        total = x
        y = x
        for _ in range(sub_degree - 1):
            y = self.frobenius(y, 1)
            total = total + y
        return total

    def in_subfield(self, x, sub_degree: int):
        """True where x^{q^sub} = x."""
        self._check_sub_degree(sub_degree)
        return self.frobenius(x, sub_degree) == x

    def subfield_elements(self, sub_degree: int):
        """All elements of F_{q^sub}, ordered by code."""
        self._check_sub_degree(sub_degree)
        if sub_degree == self.n:
            return self.elements
        gen = self.primitive ** ((self.order - 1) // (self.q ** sub_degree - 1))
        powers = gen ** np.arange(self.q ** sub_degree - 1)
        return self.GF(np.sort(np.concatenate([[0], codes(powers)])))

    @cached_property
    def prime_subfield_q(self):
        """Elements of F_q, ordered by code."""
        return self.subfield_elements(1)

    # -- F_q-bases and coordinates ---------------------------------------------------

    def is_independent(self, elems) -> bool:
        """F_q-independence of field elements via the rank of their Moore matrix."""
        k = len(elems)
        if k == 0:
            return True
        if k > self.n:
            return False
        rows = [self.frobenius(elems, i) for i in range(k)]
        return int(np.linalg.matrix_rank(self.GF(np.stack([codes(r) for r in rows])))) == k

    def _greedy_basis(self, candidates, size: int):
        chosen: List[int] = []
        for c in codes(candidates):
            trial = self.GF(chosen + [int(c)])
            if int(c) != 0 and self.is_independent(trial):
                chosen.append(int(c))
                if len(chosen) == size:
                    break
        if len(chosen) != size:
            raise FieldError(f"could not find {size} independent elements")
        return self.GF(chosen)

    @cached_property
    def basis(self):
        """FqBasis: greedy scan of 1, beta, beta^2, ... of the modulus root."""
        powers = self.root ** np.arange(self.degree + 1)
        return self._greedy_basis(powers, self.n)

    @lru_cache(maxsize=None)
    def subfield_basis(self, sub_degree: int):
        """Deterministic F_q-basis of F_{q^sub}."""
        self._check_sub_degree(sub_degree)
        if sub_degree == self.n:
            return self.basis
        gen = self.primitive ** ((self.order - 1) // (self.q ** sub_degree - 1))
        powers = gen ** np.arange(self.q ** sub_degree - 1)
        return self._greedy_basis(powers, sub_degree)

    @lru_cache(maxsize=None)
    def dual_basis(self, sub_degree: Optional[int] = None):
        """Trace-dual of subfield_basis(sub_degree) under Tr_{q^sub/q}."""
        sub = sub_degree or self.n
        b = self.subfield_basis(sub)
        gram = self.subfield_trace(b[:, np.newaxis] * b[np.newaxis, :], sub)
        inverse = np.linalg.inv(gram)
        return np.add.reduce(inverse * b[np.newaxis, :], axis=1)

    @cached_property
    def _coordinate_table(self) -> Optional[np.ndarray]:
        if self.order > settings.TABLE_LIMIT:
            return None
        return codes(self._coordinates_by_trace(self.elements, self.n))

    def _coordinates_by_trace(self, x, sub: int):
        dual = self.dual_basis(sub)
        return self.subfield_trace(x[..., np.newaxis] * dual, sub)

    def coordinates(self, x, sub_degree: Optional[int] = None):
        """F_q-coordinates of x (shape x.shape + (sub,)); entries are elements of F_q."""
        sub = sub_degree or self.n
        x = self.GF(x) if not isinstance(x, self.GF) else x
        if sub == self.n and self._coordinate_table is not None:
            return self.GF(self._coordinate_table[codes(x)])
        return self._coordinates_by_trace(x, sub)

    def from_coordinates(self, c, sub_degree: Optional[int] = None):
        """Inverse of coordinates: sum_j c_j b_j."""
        b = self.subfield_basis(sub_degree or self.n)
        return np.add.reduce(c * b, axis=-1)

    def scalar_matrix(self, alpha):
        """Matrix of tau_alpha: x -> alpha x in the FqBasis (columns are images)."""
        return self.scalar_matrices(self.GF([int(alpha)]))[0]

    def scalar_matrices(self, alphas):
        """Stack of tau_alpha matrices, shape (len(alphas), n, n)."""
        images = alphas[:, np.newaxis] * self.basis[np.newaxis, :]
        return np.swapaxes(self.coordinates(images), 1, 2)

    @cached_property
    def scalar_matrix_table(self):
        """tau_alpha for every alpha, indexed by code."""
        return self.scalar_matrices(self.elements)


@lru_cache(maxsize=64)
def _cached_field(p: int, h: int, n: int, modulus: Tuple[int, ...]) -> Field:
    return Field(FieldSpec(p=p, h=h, n=n, modulus=list(modulus)))


def field_create(spec: FieldSpec) -> Field:
    """Validate a FieldSpec and return the (cached) field it describes."""
    modulus = spec.modulus
    if modulus is None:
        if not galois.is_prime(spec.p):
            raise FieldError(f"p={spec.p} is not prime")
        modulus = default_modulus(spec.p, spec.h * spec.n)
    return _cached_field(spec.p, spec.h, spec.n, tuple(modulus))


def make_field(p: int, n: int, h: int = 1, modulus: Optional[List[int]] = None) -> Field:
    """Convenience wrapper around field_create."""
    return field_create(FieldSpec(p=p, h=h, n=n, modulus=modulus))


def frobenius(F: Field, x, s: int):
    return F.frobenius(x, s)


def norm_trace(F: Field, x, sub_degree: int):
    return F.norm_trace(x, sub_degree)


def subfield_membership(F: Field, x, sub_degree: int):
    return F.in_subfield(x, sub_degree)


def gcd(a: int, b: int) -> int:
    return math.gcd(a, b)


def split_prime_power(q: int) -> Tuple[int, int]:
    """q = p^h -> (p, h)."""
    if q < 2:
        raise FieldError(f"q={q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            h, rest = 0, q
            while rest % p == 0:
                rest //= p
                h += 1
            if rest != 1:
                raise FieldError(f"q={q} is not a prime power")
            return p, h
    raise FieldError(f"q={q} is not a prime power")


def field_for(q: int, n: int, modulus: Optional[List[int]] = None) -> Field:
    """F_{q^n} for a prime power q."""
    p, h = split_prime_power(q)
    return make_field(p, n, h, modulus)


def minus_one_power(F: Field, e: int):
    """(-1)^e as a field element."""
    return F.one if e % 2 == 0 else -F.one
