"""
Exhaustive searches over F_q-subspaces of F_{q^n}^r: the largest scattered rank,
the defining subspaces of a linear set and the GammaL(2, q^n) action on them.
"""
import logging
from typing import List, Optional, Tuple

import numpy as np

from rmlab.errors import ParameterError
from rmlab.models.response import ClassReport, MaxScatteredReport
from rmlab.models.schemas import RunConfig
from rmlab.services.bridge import bound_code
from rmlab.services.gf import Field, codes, field_for
from rmlab.services.linalg import (
    check_budget,
    digits,
    gaussian_binomial,
    index_chunks,
    iter_echelon_bases,
    normalize_rows,
    null_space,
    projective_count,
    resolve_config,
    row_keys,
)
from rmlab.services.linset import Subspace, point_counts

logger = logging.getLogger(__name__)


def _fq_coefficients(F: Field, k: int):
    """Every normalized F_q-coefficient tuple of length k, as an F_q matrix (P, k)."""
    sub = codes(F.prime_subfield_q)
    one = int(np.flatnonzero(sub == 1)[0])
    blocks = []
    for lead in range(k):
        tail = k - 1 - lead
        idx = np.arange(F.q ** tail, dtype=np.int64)
        block = np.zeros((len(idx), k), dtype=np.int64)
        block[:, lead] = sub[one]
        if tail:
            block[:, lead + 1:] = sub[digits(idx, F.q, tail)]
        blocks.append(block)
    return F.GF(np.concatenate(blocks))


def _batch_point_keys(F: Field, r: int, bases, coeff):
    """Point keys (B, P) of the F_q-projective vectors of a batch of F_q-bases (B, k, rn)."""
    B, k, N = bases.shape
    vectors = (coeff @ np.swapaxes(bases, 0, 1).reshape(k, B * N)).reshape(len(coeff), B, N)
    vectors = np.swapaxes(vectors, 0, 1).reshape(-1, r, F.n)
    elems = F.from_coordinates(vectors)
    keys = row_keys(codes(normalize_rows(elems)), F.order)
    return keys.reshape(B, len(coeff))


def _scattered_mask(keys: np.ndarray) -> np.ndarray:
    ordered = np.sort(keys, axis=1)
    return ~np.any(ordered[:, 1:] == ordered[:, :-1], axis=1)


def _subspace_from_coords(F: Field, r: int, coords) -> Subspace:
    return Subspace(F, F.from_coordinates(coords.reshape(-1, r, F.n)), r)


def scattered_batches(F: Field, r: int, k: int, config: Optional[RunConfig] = None):
    """Yield (batch of k x rn F_q-bases, scattered mask) over all k-subspaces of F_q^{rn}."""
    config = resolve_config(config)
    N = r * F.n
    total = gaussian_binomial(N, k, F.q)
    check_budget(f"{k}-subspaces of F_q^{N}", total, config.vector_budget)
    check_budget("projective vectors", total * projective_count(k, F.q), config.budget)
    coeff = _fq_coefficients(F, k)
    for batch in iter_echelon_bases(F.prime_subfield_q, k, N, config.chunk_size):
        yield batch, _scattered_mask(_batch_point_keys(F, r, batch, coeff))


def count_scattered(r: int, n: int, q: int, k: int, config: Optional[RunConfig] = None) -> int:
    """Number of scattered k-dimensional F_q-subspaces of F_{q^n}^r."""
    F = field_for(q, n)
    return sum(int(mask.sum()) for _, mask in scattered_batches(F, r, k, config))


def max_scattered_rank_search(r: int, n: int, q: int, config: Optional[RunConfig] = None) -> MaxScatteredReport:
    """Descend from rn/2 + 1 until some subspace is scattered; every rank above it is refuted exhaustively."""
    config = resolve_config(config)
    F = field_for(q, n)
    N = r * n
    refuted = {}
    for k in range(N // 2 + 1, 0, -1):
        checked = 0
        for batch, mask in scattered_batches(F, r, k, config):
            if mask.any():
                U = _subspace_from_coords(F, r, batch[int(np.argmax(mask))])
                bound_code(U, config)
                logger.info(f"max scattered rank in V({r},{q}^{n}) is {k}; refuted ranks {refuted}")
                return MaxScatteredReport(r=r, n=n, q=q, max_rank=k, witness=codes(U.basis).tolist(), refuted=refuted)
            checked += batch.shape[0]
        refuted[k] = checked
        logger.info(f"all {checked} subspaces of rank {k} in V({r},{q}^{n}) are non-scattered")
    return MaxScatteredReport(r=r, n=n, q=q, max_rank=0, refuted=refuted)


# -- defining subspaces of a linear set --------------------------------------------------


def _canonical_scalar_form(U: Subspace) -> bytes:
    """Smallest RREF among lambda U, lambda in F_{q^n}^*."""
    best = None
    for lam in U.field.elements[1:]:
        form = codes(U.scale(lam).coords).tobytes()
        if best is None or form < best:
            best = form
    return best


def matching_subspaces(U: Subspace, config: Optional[RunConfig] = None) -> List[Subspace]:
    """All F_q-subspaces W of the same dimension as U with L_W = L_U (r = 2)."""
    config = resolve_config(config)
    if U.r != 2:
        raise ParameterError(f"class computations need r=2, got r={U.r}")
    F = U.field
    total = gaussian_binomial(U.ambient_dim, U.dim, F.q)
    check_budget(f"{U.dim}-subspaces of F_q^{U.ambient_dim}", total, config.vector_budget)
    target, _, _ = point_counts(U, config)
    size = len(target)
    coeff = _fq_coefficients(F, U.dim)
    found = []
    for batch in iter_echelon_bases(F.prime_subfield_q, U.dim, U.ambient_dim, config.chunk_size):
        keys = _batch_point_keys(F, U.r, batch, coeff)
        inside = np.isin(keys, target).all(axis=1)
        for b in np.flatnonzero(inside):
            if len(np.unique(keys[b])) == size:
                found.append(_subspace_from_coords(F, U.r, batch[b]))
    logger.info(f"{len(found)} subspaces define the same linear set as {U!r}")
    return found


def zgl_classes(U: Subspace, config: Optional[RunConfig] = None) -> Tuple[List[Subspace], int]:
    """Representatives of {W : L_W = L_U} up to F_{q^n}^* scalars, and the number of matches."""
    matches = matching_subspaces(U, config)
    seen = {}
    for W in matches:
        seen.setdefault(_canonical_scalar_form(W), W)
    return list(seen.values()), len(matches)


def zgl_class_bruteforce(U: Subspace, config: Optional[RunConfig] = None) -> int:
    reps, _ = zgl_classes(U, config)
    return len(reps)


# -- the GammaL(2, q^n) action ----------------------------------------------------------------


def _invertible_matrices(F: Field, idx: np.ndarray):
    """Invertible 2 x 2 matrices among those numbered by ``idx``, shape (B, 2, 2)."""
    entries = F.GF(digits(idx, F.order, 4))
    det = entries[:, 0] * entries[:, 3] - entries[:, 1] * entries[:, 2]
    return entries[codes(det) != 0].reshape(-1, 2, 2)


def gl_orbit_equivalent(U: Subspace, W: Subspace, config: Optional[RunConfig] = None) -> bool:
    """Some (A, sigma) in GammaL(2, q^n) maps U onto W."""
    config = resolve_config(config)
    F = U.field
    if U.r != 2 or W.r != 2:
        raise ParameterError("GammaL(2, q^n) acts on F_{q^n}^2")
    if U.field != W.field or U.dim != W.dim:
        return False
    if U == W:
        return True
    if len(point_counts(U, config)[0]) != len(point_counts(W, config)[0]):
        return False
    automorphisms = F.h * F.n
    check_budget("GammaL(2, q^n) elements", F.order ** 4 * automorphisms, config.vector_budget)
    parity = null_space(W.coords, U.ambient_dim).T
    for e in range(automorphisms):
        twisted = U.basis ** (F.p ** e)
        for idx in index_chunks(F.order ** 4, config.chunk_size):
            A = _invertible_matrices(F, idx)
            if len(A) == 0:
                continue
            images = (A[:, np.newaxis, :, 0] * twisted[np.newaxis, :, 0:1]
                      + A[:, np.newaxis, :, 1] * twisted[np.newaxis, :, 1:2])
            coords = F.coordinates(images).reshape(-1, U.ambient_dim)
            residual = codes(coords @ parity).reshape(len(A), -1)
            hit = ~residual.any(axis=1)
            if hit.any():
                logger.debug(f"GammaL element found: automorphism p^{e}")
                return True
    return False


def gl_class(U: Subspace, config: Optional[RunConfig] = None) -> ClassReport:
    """Merge the Z(GammaL)-classes of L_U along gl_orbit_equivalent."""
    config = resolve_config(config)
    reps, matching = zgl_classes(U, config)
    parent = list(range(len(reps)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            if find(i) != find(j) and gl_orbit_equivalent(reps[i], reps[j], config):
                parent[find(j)] = find(i)
    classes = len({find(i) for i in range(len(reps))})
    size = len(point_counts(U, config)[0])
    logger.info(f"{U!r}: Z(GammaL)-class {len(reps)}, GammaL-class {classes}")
    return ClassReport(
        linear_set_size=size,
        matching=matching,
        zgl_class=len(reps),
        gl_class=classes,
        representatives=[codes(W.basis).tolist() for W in reps],
    )


def zgl_report(U: Subspace, config: Optional[RunConfig] = None) -> ClassReport:
    config = resolve_config(config)
    reps, matching = zgl_classes(U, config)
    return ClassReport(
        linear_set_size=len(point_counts(U, config)[0]),
        matching=matching,
        zgl_class=len(reps),
        representatives=[codes(W.basis).tolist() for W in reps],
    )
