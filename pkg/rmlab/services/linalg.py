"""
Exact linear algebra over a subfield F_q, carried out on galois arrays of the
ambient field whose entries happen to lie in F_q.

Ranks, reduced echelon forms and null spaces of such matrices are the F_q ones,
so no separate F_q class is needed.  ``batch_rank`` eliminates a whole stack
of matrices at once and is the kernel behind every enumeration.
"""
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from rmlab.errors import BudgetExceededError
from rmlab.models.schemas import RunConfig

logger = logging.getLogger(__name__)


def resolve_config(config: Optional[RunConfig]) -> RunConfig:
    return config if config is not None else RunConfig.from_settings()


def check_budget(what: str, needed: int, budget: int) -> None:
    if needed > budget:
        raise BudgetExceededError(what, needed, budget)


def batch_rank(mats) -> np.ndarray:
    """Ranks of a stack of matrices, shape (B, rows, cols) -> (B,)."""
    A = mats.copy()
    B, rows, cols = A.shape
    GF = type(A)
    rank = np.zeros(B, dtype=np.int64)
    if B == 0 or rows == 0 or cols == 0:
        return rank
    batch = np.arange(B)
    row_ids = np.arange(rows)
    for col in range(cols):
        column = A[:, :, col].view(np.ndarray)
        candidate = (column != 0) & (row_ids[np.newaxis, :] >= rank[:, np.newaxis])
        has_pivot = candidate.any(axis=1)
        if not has_pivot.any():
            continue
        b = batch[has_pivot]
        target = rank[has_pivot]
        pivot = np.argmax(candidate[has_pivot], axis=1)

        pivot_rows = A[b, pivot].copy()
        A[b, pivot] = A[b, target]
        inv = pivot_rows[:, col] ** -1
        pivot_rows = pivot_rows * inv[:, np.newaxis]
        A[b, target] = pivot_rows

        factors = A[b, :, col].copy()
        factors[np.arange(len(b)), target] = GF(0)
        A[b] = A[b] - factors[:, :, np.newaxis] * pivot_rows[:, np.newaxis, :]
        rank[has_pivot] += 1
        if np.all(rank >= rows):
            break
    return rank


def rank(mat) -> int:
    return int(np.linalg.matrix_rank(mat)) if mat.size else 0


def rref_rows(mat):
    """Nonzero rows of the reduced row echelon form (canonical basis of the row space)."""
    if mat.shape[0] == 0:
        return mat
    reduced = mat.row_reduce()
    keep = np.any(reduced.view(np.ndarray) != 0, axis=1)
    return reduced[keep]


def null_space(mat, ncols: Optional[int] = None):
    """Basis (rows) of {x : mat @ x = 0}."""
    if mat.shape[0] == 0:
        GF = type(mat)
        return GF.Identity(ncols if ncols is not None else mat.shape[1])
    return mat.null_space()


def in_row_space(basis_rref, vectors) -> np.ndarray:
    """Membership of each row of ``vectors`` in the row space of an RREF basis."""
    if basis_rref.shape[0] == 0:
        return ~np.any(vectors.view(np.ndarray) != 0, axis=1)
    pivots = pivot_columns(basis_rref)
    residual = vectors - vectors[:, pivots] @ basis_rref
    return ~np.any(residual.view(np.ndarray) != 0, axis=1)


def pivot_columns(rref) -> List[int]:
    raw = rref.view(np.ndarray)
    return [int(np.argmax(row != 0)) for row in raw]


def span_equal(a, b) -> bool:
    ra, rb = rref_rows(a), rref_rows(b)
    return ra.shape == rb.shape and bool(np.all(ra == rb))


def gaussian_binomial(m: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^m."""
    if k < 0 or k > m:
        return 0
    num, den = 1, 1
    for i in range(k):
        num *= q ** (m - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def digits(indices: np.ndarray, base: int, width: int) -> np.ndarray:
    """Base-``base`` digits of each index, least significant first, shape (len, width)."""
    out = np.empty((len(indices), width), dtype=np.int64)
    rest = indices.astype(np.int64).copy()
    for j in range(width):
        out[:, j] = rest % base
        rest //= base
    return out


def index_chunks(total: int, chunk: int) -> Iterator[np.ndarray]:
    for start in range(0, total, chunk):
        yield np.arange(start, min(start + chunk, total), dtype=np.int64)


def combinations(symbols, basis, indices: np.ndarray):
    """F_q-combinations sum_k c_k basis[k] for the coefficient tuples numbered by ``indices``.

    ``symbols`` lists the elements of F_q; ``basis`` has shape (K, ...).
    """
    K = basis.shape[0]
    coeff = symbols[digits(indices, len(symbols), K)]
    flat = basis.reshape(K, -1)
    return (coeff @ flat).reshape((len(indices),) + basis.shape[1:])


def fan_out(
    tasks: Sequence[np.ndarray],
    work: Callable[[np.ndarray], np.ndarray],
    workers: int = 1,
) -> List[np.ndarray]:
    """Run ``work`` over chunks, in order, optionally on a thread pool."""
    if workers <= 1 or len(tasks) <= 1:
        return [work(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(work, tasks))


def tally(values: Iterable[np.ndarray], size: int) -> np.ndarray:
    total = np.zeros(size, dtype=np.int64)
    for v in values:
        total += np.bincount(v, minlength=size)[:size]
    return total


def echelon_patterns(k: int, N: int) -> Iterator[Tuple[int, ...]]:
    """Pivot column sets of k x N reduced echelon matrices, lexicographic."""
    return itertools.combinations(range(N), k)


def free_positions(pivots: Tuple[int, ...], N: int) -> List[Tuple[int, int]]:
    """Entries of a reduced echelon matrix with the given pivots that may be arbitrary."""
    pivot_set = set(pivots)
    return [(i, j) for i, p in enumerate(pivots) for j in range(p + 1, N) if j not in pivot_set]

def iter_echelon_bases(
    symbols,
    k: int,
    N: int,
    chunk: int = 4096,
) -> Iterator[np.ndarray]:
    """All k-dimensional subspaces of F^N as batches of canonical RREF bases.

    ``symbols`` are the field elements (galois array); batches have shape (B, k, N).
    Order: pivot patterns lexicographically, then free entries by index.
    """
    GF = type(symbols)
    size = len(symbols)
    for pivots in echelon_patterns(k, N):
        free = free_positions(pivots, N)
        total = size ** len(free)
        template = np.zeros((k, N), dtype=np.int64)
        for i, p in enumerate(pivots):
            template[i, p] = 1
        sym_codes = symbols.view(np.ndarray).astype(np.int64)
        for idx in index_chunks(total, chunk):
            block = np.repeat(template[np.newaxis], len(idx), axis=0)
            if free:
                fill = sym_codes[digits(idx, size, len(free))]
                rows = [i for i, _ in free]
                cols = [j for _, j in free]
                block[:, rows, cols] = fill
            yield GF(block)


def projective_count(r: int, Q: int) -> int:
    """Number of points of PG(r-1, Q)."""
    return (Q ** r - 1) // (Q - 1)


def projective_items(r: int, Q: int, chunk: int) -> List[Tuple[int, np.ndarray]]:
    """Work items (lead, indices) covering each normalized tuple (0,..,0,1,*,..,*) of length r once."""
    items = []
    for lead in range(r):
        for idx in index_chunks(Q ** (r - 1 - lead), chunk):
            items.append((lead, idx))
    return items


def projective_coefficients(symbol_codes: np.ndarray, one: int, r: int, lead: int, idx: np.ndarray) -> np.ndarray:
    """Symbol coordinates of the tuples numbered by ``idx``; shape (B, r, g).

    ``symbol_codes`` has shape (Q, g): row s holds the coordinates of symbol s.
    """
    Q, g = symbol_codes.shape
    coeff = np.zeros((len(idx), r, g), dtype=np.int64)
    coeff[:, lead] = symbol_codes[one]
    tail = r - 1 - lead
    if tail:
        coeff[:, lead + 1:] = symbol_codes[digits(idx, Q, tail)]
    return coeff


def normalize_rows(vectors):
    """Divide each nonzero row by its first nonzero entry."""
    raw = vectors.view(np.ndarray)
    nonzero = raw != 0
    first = np.argmax(nonzero, axis=1)
    lead = np.where(nonzero.any(axis=1), raw[np.arange(len(vectors)), first], 1)
    return vectors * (type(vectors)(lead) ** -1)[:, np.newaxis]


def row_keys(rows: np.ndarray, base: int) -> np.ndarray:
    """Injective integer keys of integer rows with entries < base."""
    width = rows.shape[-1]
    if base ** width < 2 ** 62:
        weights = base ** np.arange(width, dtype=np.int64)
        return rows.astype(np.int64) @ weights
    contiguous = np.ascontiguousarray(rows.astype(np.int64))
    return contiguous.view(np.dtype((np.void, contiguous.dtype.itemsize * width))).reshape(rows.shape[:-1])
