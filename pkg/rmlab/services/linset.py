"""
F_q-subspaces of F_{q^n}^r and the linear sets they define.

Points of PG(r-1, q^n) are keyed by their representative normalized at the
first nonzero coordinate; the weight of a point is recovered from how many
F_q-projective vectors of U land on it.
"""
import logging
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from rmlab.errors import ParameterError
from rmlab.models.response import HScatteredReport, LinearSetSummary
from rmlab.models.schemas import RunConfig, SubspaceModel
from rmlab.services.gf import Field, codes, field_create
from rmlab.services.linalg import (
    batch_rank,
    check_budget,
    fan_out,
    gaussian_binomial,
    in_row_space,
    iter_echelon_bases,
    normalize_rows,
    projective_coefficients,
    projective_count,
    projective_items,
    rank,
    resolve_config,
    row_keys,
    rref_rows,
)
from rmlab.services.linpoly import LinPoly, lp_eval

logger = logging.getLogger(__name__)


class Subspace:
    """F_q-subspace of F_{q^n}^r with a canonical basis (reduced echelon form of coordinates)."""

    def __init__(self, field: Field, vectors, r: Optional[int] = None):
        vectors = field.GF(vectors) if not isinstance(vectors, field.GF) else vectors
        if vectors.ndim != 2:
            if r is None:
                raise ParameterError("an empty subspace needs its ambient dimension r")
            vectors = vectors.reshape(-1, r)
        r = vectors.shape[1] if r is None else r
        if vectors.shape[1] != r:
            raise ParameterError(f"vectors have length {vectors.shape[1]}, expected r={r}")
        self.field = field
        self.r = r
        n = field.n
        coords = field.coordinates(vectors).reshape(vectors.shape[0], r * n)
        self.coords = rref_rows(coords)
        self.basis = field.from_coordinates(self.coords.reshape(-1, r, n))

    @property
    def dim(self) -> int:
        return int(self.coords.shape[0])

    @property
    def ambient_dim(self) -> int:
        """dim_{F_q} of F_{q^n}^r."""
        return self.r * self.field.n

    def vector_coordinates(self, vectors):
        return self.field.coordinates(vectors).reshape(vectors.shape[0], self.ambient_dim)

    def contains(self, vectors) -> np.ndarray:
        return in_row_space(self.coords, self.vector_coordinates(vectors))

    def scale(self, lam) -> "Subspace":
        """lambda * U for lambda in F_{q^n}^*."""
        return Subspace(self.field, self.basis * self.field.GF(int(lam)), self.r)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.r == other.r
            and self.coords.shape == other.coords.shape
            and bool(np.all(self.coords == other.coords))
        )

    def __hash__(self) -> int:
        return hash((self.field.key, self.r, codes(self.coords).tobytes()))

    def __repr__(self) -> str:
        return f"Subspace(q={self.field.q}, n={self.field.n}, r={self.r}, dim={self.dim})"


def subspace_to_model(U: Subspace) -> SubspaceModel:
    return SubspaceModel(field=U.field.spec, r=U.r, basis=codes(U.basis).tolist())


def subspace_from_model(model: SubspaceModel) -> Subspace:
    F = field_create(model.field)
    rows = np.asarray(model.basis, dtype=np.int64).reshape(-1, model.r)
    return Subspace(F, F.GF(rows), model.r)


def subspace_from_maps(polys: Sequence[LinPoly]) -> Subspace:
    """{(f_1(x), ..., f_k(x)) : x in F_{q^n}}."""
    if not polys:
        raise ParameterError("need at least one map")
    F = polys[0].field
    columns = [codes(lp_eval(f, F.basis)) for f in polys]
    return Subspace(F, F.GF(np.stack(columns, axis=1)), len(polys))


def subspace_from_map(f: LinPoly, r: int = 2) -> Subspace:
    """U_f = {(x, f(x))}."""
    if r != 2:
        raise ParameterError(f"U_f lives in F_{{q^n}}^2, got r={r}")
    return subspace_from_maps([LinPoly.identity(f.field), f])


def _expand(F: Field, vectors):
    """F_q-spanning set {b_a v} of the F_{q^n}-span of the given vectors, as coordinates."""
    prods = vectors[:, np.newaxis, :] * F.basis[np.newaxis, :, np.newaxis]
    flat = prods.reshape(-1, vectors.shape[-1])
    return F.coordinates(flat).reshape(flat.shape[0], -1)


def point_weight(U: Subspace, v) -> int:
    """dim_{F_q}(U intersect <v>_{F_{q^n}})."""
    F = U.field
    v = F.GF(v) if not isinstance(v, F.GF) else v
    if v.shape != (U.r,):
        raise ParameterError(f"vector must have length {U.r}")
    if not np.any(codes(v)):
        raise ParameterError("the zero vector defines no point")
    W = _expand(F, v[np.newaxis])
    return U.dim + F.n - rank(F.GF(np.concatenate([codes(U.coords), codes(W)])))


def subspace_weight(U: Subspace, generators) -> int:
    """dim_{F_q}(U intersect W) with W the F_{q^n}-span of the generators."""
    F = U.field
    gens = F.GF(generators) if not isinstance(generators, F.GF) else generators
    W = _expand(F, gens.reshape(-1, U.r))
    dim_w = rank(W)
    return U.dim + dim_w - rank(F.GF(np.concatenate([codes(U.coords), codes(W)])))


# -- linear sets ------------------------------------------------------------------------


def projective_vectors(U: Subspace, lead: int, idx: np.ndarray):
    """Vectors of U for the normalized F_q-coefficient tuples numbered by ``idx``."""
    F = U.field
    sub = F.prime_subfield_q
    one = int(np.flatnonzero(codes(sub) == 1)[0])
    coeff = projective_coefficients(codes(sub)[:, np.newaxis], one, U.dim, lead, idx)[:, :, 0]
    return F.GF(coeff) @ U.basis

def point_counts(U: Subspace, config: RunConfig) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Distinct point keys of L_U, F_q-projective vectors per point, and a representative per key."""
    F = U.field
    total = projective_count(U.dim, F.q) if U.dim else 0
    check_budget("linear set enumeration", total, config.vector_budget)
    if total == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64), np.zeros((0, U.r), dtype=np.int64)

    def work(item):
        lead, idx = item
        return normalize_rows(projective_vectors(U, lead, idx))

    reps = fan_out(projective_items(U.dim, F.q, config.chunk_size), work, config.workers)
    rows = np.concatenate([codes(v) for v in reps])
    keys = row_keys(rows, F.order)
    unique, first, counts = np.unique(keys, return_index=True, return_counts=True)
    return unique, counts, rows[first]


def _weights_from_counts(counts: np.ndarray, q: int) -> np.ndarray:
    """Invert c = (q^w - 1)/(q - 1)."""
    weights = np.zeros(len(counts), dtype=np.int64)
    level, size = 0, 0
    remaining = np.ones(len(counts), dtype=bool)
    while remaining.any():
        level += 1
        size = size * q + 1
        hit = remaining & (counts == size)
        weights[hit] = level
        remaining &= ~hit
        if size > counts.max():
            raise ParameterError("point counts are not of the form (q^w - 1)/(q - 1)")
    return weights


def point_weights(U: Subspace, config: Optional[RunConfig] = None) -> Tuple[np.ndarray, np.ndarray]:
    """(normalized point representatives as codes, their weights) over all of L_U."""
    config = resolve_config(config)
    _, counts, reps = point_counts(U, config)
    if len(counts) == 0:
        return np.zeros((0, U.r), dtype=np.int64), counts
    return reps, _weights_from_counts(counts, U.field.q)


def weight_spectrum(U: Subspace, config: Optional[RunConfig] = None) -> Dict[int, int]:
    _, weights = point_weights(U, config)
    values, counts = np.unique(weights, return_counts=True)
    return {int(w): int(c) for w, c in zip(values, counts)}


def linear_set_size(U: Subspace, config: Optional[RunConfig] = None) -> int:
    keys, _, _ = point_counts(U, resolve_config(config))
    return int(len(keys))


def is_scattered(U: Subspace, config: Optional[RunConfig] = None) -> bool:
    """All points of L_U have weight one, i.e. |L_U| = (q^k - 1)/(q - 1)."""
    if U.dim == 0:
        return True
    size = linear_set_size(U, config)
    scattered = size == projective_count(U.dim, U.field.q)
    logger.debug(f"{U!r}: |L_U| = {size}, scattered={scattered}")
    return scattered


def max_point_weight(U: Subspace, config: Optional[RunConfig] = None) -> int:
    _, weights = point_weights(U, config)
    return int(weights.max()) if len(weights) else 0


def max_field_of_linearity(U: Subspace) -> int:
    """Largest l dividing n such that U is an F_{q^l}-subspace."""
    F = U.field
    if U.dim == 0:
        return F.n
    for ell in sorted((d for d in range(1, F.n + 1) if F.n % d == 0), reverse=True):
        if ell == 1:
            return 1
        gen = F.primitive ** ((F.order - 1) // (F.q ** ell - 1))
        if np.all(U.contains(U.basis * gen)):
            return ell
    return 1


def linear_set_summary(U: Subspace, config: Optional[RunConfig] = None) -> LinearSetSummary:
    reps, weights = point_weights(U, config)
    values, counts = np.unique(weights, return_counts=True)
    spectrum = {int(w): int(c) for w, c in zip(values, counts)}
    return LinearSetSummary(
        rank=U.dim,
        size=int(len(weights)),
        points=codes(reps).tolist() if len(reps) else [],
        weights=weights.tolist(),
        spectrum=spectrum,
        scattered=U.dim == 0 or len(weights) == projective_count(U.dim, U.field.q),
        max_field_of_linearity=max_field_of_linearity(U),
    )


def is_scattered_field_model(F: Field, vectors, sub_degree: int, config: Optional[RunConfig] = None) -> bool:
    """Scatteredness of the F_q-span of elements of F_{q^N} with respect to F_{q^sub}.

    Points of PG(F_{q^N}, F_{q^sub}) are the cosets u F_{q^sub}^*, keyed by u^(q^sub - 1).
    """
    config = resolve_config(config)
    vectors = F.GF(vectors) if not isinstance(vectors, F.GF) else vectors
    k = len(vectors)
    if k == 0:
        return True
    if rank(F.coordinates(vectors)) != k:
        raise ParameterError("spanning elements are not F_q-independent")
    total = projective_count(k, F.q)
    check_budget("field-model enumeration", total, config.vector_budget)
    sub = F.prime_subfield_q
    one = int(np.flatnonzero(codes(sub) == 1)[0])
    exponent = F.q ** sub_degree - 1

    def work(item):
        lead, idx = item
        coeff = projective_coefficients(codes(sub)[:, np.newaxis], one, k, lead, idx)[:, :, 0]
        u = (F.GF(coeff) @ vectors[:, np.newaxis])[:, 0]
        return codes(u ** exponent)

    keys = np.concatenate(fan_out(projective_items(k, F.q, config.chunk_size), work, config.workers))
    return int(len(np.unique(keys))) == total


# -- weights of F_{q^n}-subspaces -------------------------------------------------------


def subspace_weights(U: Subspace, h: int, config: Optional[RunConfig] = None):
    """Yield (batch of h x r RREF bases, weights) over every h-dimensional F_{q^n}-subspace."""
    config = resolve_config(config)
    F = U.field
    if not 1 <= h <= U.r:
        raise ParameterError(f"h={h} outside [1, {U.r}]")
    total = gaussian_binomial(U.r, h, F.order)
    check_budget(f"{h}-subspace enumeration", total, config.vector_budget)
    k, n = U.dim, F.n
    base = codes(U.coords)
    for batch in iter_echelon_bases(F.elements, h, U.r, config.chunk_size):
        B = batch.shape[0]
        prods = batch[:, :, np.newaxis, :] * F.basis[np.newaxis, np.newaxis, :, np.newaxis]
        expanded = F.coordinates(prods.reshape(B * h * n, U.r)).reshape(B, h * n, U.r * n)
        stacked = np.concatenate([np.broadcast_to(base, (B, k, U.r * n)), codes(expanded)], axis=1)
        ranks = batch_rank(F.GF(stacked))
        yield batch, k + h * n - ranks


def hyperplane_weights(U: Subspace, config: Optional[RunConfig] = None) -> Dict[int, int]:
    """Histogram of the weights of all hyperplanes (points when r = 2)."""
    hist: Dict[int, int] = {}
    for _, weights in subspace_weights(U, U.r - 1, config):
        values, counts = np.unique(weights, return_counts=True)
        for w, c in zip(values, counts):
            hist[int(w)] = hist.get(int(w), 0) + int(c)
    return dict(sorted(hist.items()))


def spans_ambient(U: Subspace) -> bool:
    """<L_U> is the whole of PG(r-1, q^n)."""
    if U.dim == 0:
        return False
    return int(np.linalg.matrix_rank(U.basis)) == U.r


def h_scattered_report(U: Subspace, h: int, config: Optional[RunConfig] = None) -> HScatteredReport:
    """Every h-dimensional F_{q^n}-subspace has weight <= h, and L_U spans (for h >= 2).

    For h = 1 the verdict is plain scatteredness.
    """
    if not 1 <= h <= max(U.r - 1, 1):
        raise ParameterError(f"h={h} outside [1, {U.r - 1}]")
    checked = 0
    worst = 0
    for batch, weights in subspace_weights(U, h, config):
        checked += batch.shape[0]
        worst = max(worst, int(weights.max()))
    spans = spans_ambient(U)
    verdict = worst <= h and (spans or h == 1)
    logger.info(f"{U!r}: max weight of {h}-subspaces is {worst} over {checked}, h-scattered={verdict}")
    return HScatteredReport(
        h=h,
        h_scattered=verdict,
        spans=spans,
        subgeometry=spans and U.dim <= U.r,
        max_weight=worst,
        subspaces_checked=checked,
    )


def is_h_scattered(U: Subspace, h: int, config: Optional[RunConfig] = None) -> bool:
    return h_scattered_report(U, h, config).h_scattered


def random_subspace(F: Field, r: int, k: int, seed: int) -> Subspace:
    """Uniform-ish random k-dimensional F_q-subspace of F_{q^n}^r from a seeded generator."""
    rng = np.random.default_rng(seed)
    N = r * F.n
    if not 0 <= k <= N:
        raise ParameterError(f"k={k} outside [0, {N}]")
    sub = codes(F.prime_subfield_q)
    while True:
        coords = F.GF(sub[rng.integers(0, len(sub), size=(k, N))])
        if rank(coords) == k:
            return Subspace(F, F.from_coordinates(coords.reshape(k, r, F.n)), r)