"""
Rank-metric codes: F_q-subspaces of m x n matrices over F_q, or of q-polynomials.

Every code keeps a canonical F_q-basis (reduced echelon form of the flattened
matrices), so two codes are equal exactly when their bases are equal.
"""
import hashlib
import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from rmlab.errors import ParameterError
from rmlab.models.response import CodeFingerprint, CodeParams, CodeReport, IdealiserReport, WeightDistribution
from rmlab.models.schemas import CodeModel, RunConfig
from rmlab.services.gf import Field, codes, field_create
from rmlab.services.linalg import (
    batch_rank,
    check_budget,
    digits,
    fan_out,
    gaussian_binomial,
    in_row_space,
    null_space,
    projective_coefficients,
    projective_count,
    projective_items,
    resolve_config,
    rref_rows,
    tally,
)
from rmlab.services.linpoly import LinPoly, coefficient_matrices, lp_adjoint

logger = logging.getLogger(__name__)


class MatrixCode:
    """F_q-linear code of m x n matrices over F_q with a canonical basis of shape (K, m, n).

    ``rank_scale`` u > 1 marks a code that is only linear over a subfield F_{q0} of the
    reported F_q (q = q0^u): the matrices are over F_{q0} and F_q-ranks are F_{q0}-ranks / u.
    """

    kind = "matrix"

    def __init__(self, field: Field, mats, rank_scale: int = 1):
        if mats.ndim != 3:
            raise ParameterError(f"expected a stack of matrices, got shape {mats.shape}")
        _, m, n = mats.shape
        reduced = rref_rows(mats.reshape(mats.shape[0], m * n))
        self.field = field
        self.m, self.n = m, n
        self.rank_scale = rank_scale
        self.basis = reduced.reshape(reduced.shape[0], m, n)

    @classmethod
    def zero(cls, field: Field, m: int, n: int, rank_scale: int = 1) -> "MatrixCode":
        """The code {0} of m x n matrices (sizes over the base field)."""
        return MatrixCode(field, field.GF(np.zeros((0, m, n), dtype=np.int64)), rank_scale)

    @property
    def dim(self) -> int:
        """F_q-dimension K of the stored basis (over F_{q0} when rank_scale > 1)."""
        return int(self.basis.shape[0])

    @property
    def q(self) -> int:
        return self.field.q ** self.rank_scale

    @property
    def size(self) -> int:
        return self.field.q ** self.dim

    @property
    def shape(self) -> Tuple[int, int]:
        """(m, n) as reported: matrix sizes over F_q."""
        return self.m // self.rank_scale, self.n // self.rank_scale

    @property
    def flat(self):
        return self.basis.reshape(self.dim, self.m * self.n)

    def contains(self, mats) -> np.ndarray:
        """Membership of each matrix of a (B, m, n) stack."""
        return in_row_space(self.flat, mats.reshape(mats.shape[0], self.m * self.n))

    def __eq__(self, other) -> bool:
        return code_equal(self, other)

    def __hash__(self) -> int:
        return hash((self.field.key, self.rank_scale, codes(self.basis).tobytes()))

    def __repr__(self) -> str:
        m, n = self.shape
        return f"{type(self).__name__}(m={m}, n={n}, q={self.q}, dim={self.dim})"


class SquareCode(MatrixCode):
    """F_q-subspace of q-polynomials over F_{q^n}; also kept as coefficient vectors."""

    kind = "square"

    def __init__(self, field: Field, coeffs, rank_scale: int = 1):
        n = field.n
        reduced = rref_rows(field.coordinates(coeffs).reshape(coeffs.shape[0], n * n)) if len(coeffs) else coeffs
        if reduced.shape[0] == 0:
            self.coeffs = field.GF(np.zeros((0, n), dtype=np.int64))
            super().__init__(field, field.GF(np.zeros((0, n, n), dtype=np.int64)), rank_scale)
            return
        self.coeffs = field.from_coordinates(reduced.reshape(-1, n, n))
        super().__init__(field, coefficient_matrices(field, self.coeffs), rank_scale)

    @property
    def polys(self) -> List[LinPoly]:
        return [LinPoly(self.field, row) for row in self.coeffs]


Code = Union[SquareCode, MatrixCode]


# -- construction ----------------------------------------------------------------------


def expand_left(field: Field, polys: Sequence[LinPoly]):
    """Coefficient rows of {b_a f : b_a in the FqBasis, f in polys}."""
    rows = [codes(b * f.coeffs) for f in polys for b in field.basis]
    return field.GF(np.stack(rows))


def code_from_basis(generators, field: Optional[Field] = None, over: Optional[str] = None,
                    rank_scale: int = 1) -> Code:
    """Code spanned by q-polynomials or by m x n matrices.

    q-polynomials are spanned over F_{q^n} (left scalars) unless ``over="fq"``;
    matrices are always spanned over F_q.
    """
    generators = list(generators)
    if not generators:
        raise ParameterError("no generators given")
    if isinstance(generators[0], LinPoly):
        F = generators[0].field
        if any(g.field != F for g in generators):
            raise ParameterError("generators live over different fields")
        if (over or "fqn") == "fqn":
            coeffs = expand_left(F, generators)
        else:
            coeffs = F.GF(np.stack([codes(g.coeffs) for g in generators]))
        return _nonzero(SquareCode(F, coeffs, rank_scale))
    if field is None:
        raise ParameterError("matrix generators need an explicit field")
    mats = [field.GF(np.asarray(codes(g) if isinstance(g, field.GF) else g, dtype=np.int64)) for g in generators]
    shapes = {m.shape for m in mats}
    if len(shapes) != 1 or len(next(iter(shapes))) != 2:
        raise ParameterError(f"matrices must share one 2-d shape, got {sorted(shapes)}")
    stack = field.GF(np.stack([codes(m) for m in mats]))
    if not np.all(field.in_subfield(stack, 1)):
        raise ParameterError("matrix entries must lie in F_q")
    return _nonzero(MatrixCode(field, stack, rank_scale))


def _nonzero(code: Code) -> Code:
    if code.dim == 0:
        raise ParameterError("generators span the zero code")
    return code


def code_equal(a: Code, b: Code) -> bool:
    """Equality as F_q-spaces of maps."""
    if not isinstance(a, MatrixCode) or not isinstance(b, MatrixCode):
        return False
    if a.field != b.field or a.rank_scale != b.rank_scale:
        return False
    return a.basis.shape == b.basis.shape and bool(np.all(a.basis == b.basis))


def as_matrix_code(code: Code) -> MatrixCode:
    """Forget the q-polynomial view."""
    return MatrixCode(code.field, code.basis, code.rank_scale)


# -- enumeration -----------------------------------------------------------------------


@dataclass
class _Presentation:
    """Codewords sum_l sum_a coord_a(c_l) gens[l, a] for symbol tuples c."""

    gens: np.ndarray  # (r, g, m, n)
    symbols: np.ndarray  # (Q, g) F_q coordinates of each symbol
    one: int  # index of the symbol 1
    side: Optional[str]

    @property
    def Q(self) -> int:
        return self.symbols.shape[0]

    @property
    def r(self) -> int:
        return self.gens.shape[0]

    @property
    def projective_count(self) -> int:
        return projective_count(self.r, self.Q)


def _plain_presentation(code: Code) -> _Presentation:
    F = code.field
    sub = F.prime_subfield_q
    return _Presentation(
        gens=code.basis[:, np.newaxis],
        symbols=sub[:, np.newaxis],
        one=int(np.flatnonzero(codes(sub) == 1)[0]),
        side=None,
    )


def scalar_action(code: Code, side: str, alphas):
    """tau_alpha o M (left) or M o tau_alpha (right) for each alpha and each basis matrix.

    Shape (len(alphas), K, m, n).
    """
    F = code.field
    T = F.scalar_matrices(alphas)
    out = []
    for t in T:
        if side == "left":
            out.append(np.stack([codes(t @ M) for M in code.basis]))
        else:
            out.append(np.stack([codes(M @ t) for M in code.basis]))
    return F.GF(np.stack(out))


def side_available(code: Code, side: str) -> bool:
    if code.rank_scale != 1:
        return False
    return (code.m if side == "left" else code.n) == code.field.n


def is_fqn_linear(code: Code, side: str) -> bool:
    """Closure of the code under composition with tau_beta, beta a primitive element."""
    if side not in ("left", "right"):
        raise ParameterError(f"side must be 'left' or 'right', got {side!r}")
    if not side_available(code, side):
        return False
    if code.dim == 0:
        return True
    images = scalar_action(code, side, code.field.GF([int(code.field.primitive)]))[0]
    return bool(np.all(code.contains(images)))


def fqn_basis(code: Code, side: str):
    """Greedy F_{q^n}-basis of an F_{q^n}-linear code, returned as its F_q-expansion (r, n, m, n)."""
    F = code.field
    actions = scalar_action(code, side, F.basis)  # (n, K, m, n)
    groups = []
    span = code.basis[:0].reshape(0, code.m * code.n)
    for k in range(code.dim):
        candidate = code.basis[k].reshape(1, -1)
        if span.shape[0] and in_row_space(span, candidate)[0]:
            continue
        group = actions[:, k]
        groups.append(codes(group))
        span = rref_rows(F.GF(np.concatenate([codes(span), codes(group).reshape(F.n, -1)])))
        if span.shape[0] == code.dim:
            break
    return F.GF(np.stack(groups))


def _fast_presentation(code: Code, side: str) -> _Presentation:
    F = code.field
    return _Presentation(
        gens=fqn_basis(code, side),
        symbols=F.coordinates(F.elements),
        one=1,
        side=side,
    )


def presentation(code: Code, fast: bool = True) -> _Presentation:
    if fast:
        for side in ("left", "right"):
            if is_fqn_linear(code, side):
                logger.debug(f"{code!r} is F_{{q^n}}-linear on the {side}")
                return _fast_presentation(code, side)
    return _plain_presentation(code)


def projective_codewords(pres: _Presentation, lead: int, idx: np.ndarray):
    """Codewords for the tuples (0,..,0,1,c_{lead+1},..) numbered by ``idx``; shape (B, m, n)."""
    r, g, m, n = pres.gens.shape
    GF = type(pres.gens)
    coeff = projective_coefficients(codes(pres.symbols), pres.one, r, lead, idx)
    flat = pres.gens.reshape(r * g, m * n)
    return (GF(coeff.reshape(len(idx), r * g)) @ flat).reshape(len(idx), m, n)


def rank_tally(code: Code, config: Optional[RunConfig] = None, fast: bool = True) -> Tuple[np.ndarray, _Presentation]:
    """Counts of codewords by F_q-rank, index 0..min(m,n)."""
    config = resolve_config(config)
    if code.dim == 0:
        counts = np.zeros(min(code.shape) + 1, dtype=np.int64)
        counts[0] = 1
        return counts, _plain_presentation(code)
    pres = presentation(code, fast)
    needed = pres.projective_count
    check_budget("rank enumeration", needed, config.budget)
    m, n = code.shape
    size = min(m, n) + 1
    u = code.rank_scale

    def work(item):
        lead, idx = item
        return batch_rank(projective_codewords(pres, lead, idx)) // u

    items = projective_items(pres.r, pres.Q, config.chunk_size)
    logger.debug(f"Enumerating {needed} projective codewords of {code!r} in {len(items)} chunks")
    counts = tally(fan_out(items, work, config.workers), size) * (pres.Q - 1)
    counts[0] += 1
    logger.info(f"Rank enumeration of {code!r}: {needed} ranks" + (f", {pres.side} fast path" if pres.side else ""))
    return counts, pres


def weight_distribution(code: Code, config: Optional[RunConfig] = None) -> WeightDistribution:
    counts, _ = rank_tally(code, config)
    return WeightDistribution(counts=[int(c) for c in counts])


def min_distance(code: Code, config: Optional[RunConfig] = None) -> int:
    counts, _ = rank_tally(code, config)
    nonzero = np.flatnonzero(counts[1:])
    return int(nonzero[0]) + 1 if len(nonzero) else 0


def code_params(code: Code, d: int) -> CodeParams:
    m, n = code.shape
    u = code.rank_scale
    dim = code.dim // u if code.dim % u == 0 else code.dim / u
    return CodeParams(m=m, n=n, q=code.q, d=d, dim=dim)


def singleton_holds(code: Code, d: int) -> Tuple[bool, bool]:
    """(|C| <= bound, |C| == bound) for the Singleton bound at distance d."""
    exponent = code_params(code, d).singleton_exponent
    bound = code.q ** exponent
    return code.size <= bound, code.size == bound


def is_mrd(code: Code, config: Optional[RunConfig] = None, d: Optional[int] = None) -> bool:
    d = min_distance(code, config) if d is None else d
    return singleton_holds(code, d)[1]


def verify_code(code: Code, config: Optional[RunConfig] = None) -> CodeReport:
    counts, pres = rank_tally(code, config)
    nonzero = np.flatnonzero(counts[1:])
    d = int(nonzero[0]) + 1 if len(nonzero) else 0
    ok, mrd = singleton_holds(code, d)
    return CodeReport(
        params=code_params(code, d),
        mrd=mrd,
        singleton_ok=ok,
        fast_path=pres.side,
        ranks_computed=pres.projective_count,
        weights=WeightDistribution(counts=[int(c) for c in counts]),
    )


def mrd_weight_formula(m: int, n: int, q: int, d: int, l: int) -> int:
    """Number of codewords of rank d + l in an MRD code with parameters (m, n, q; d), m <= n."""
    if m > n:
        raise ParameterError(f"formula needs m <= n, got m={m}, n={n}")
    if not 1 <= d <= m:
        raise ParameterError(f"d={d} outside [1, {m}]")
    if not 0 <= l <= m - d:
        raise ParameterError(f"l={l} outside [0, {m - d}]")
    total = 0
    for t in range(l + 1):
        sign = -1 if (l - t) % 2 else 1
        total += sign * gaussian_binomial(l + d, l - t, q) * q ** ((l - t) * (l - t - 1) // 2) * (q ** (n * (t + 1)) - 1)
    return gaussian_binomial(m, d + l, q) * total


# -- duality ---------------------------------------------------------------------------


def delsarte_dual(code: Code) -> Code:
    """Orthogonal code: b(f,g) = Tr(sum f_i g_i) for q-polynomials, Tr(M N^t) for matrices."""
    F = code.field
    if isinstance(code, SquareCode):
        n = F.n
        gram = F.trace(code.coeffs[:, :, np.newaxis] * F.basis[np.newaxis, np.newaxis, :], 1)
        Y = null_space(gram.reshape(code.dim, n * n), n * n)
        if Y.shape[0] == 0:
            return SquareCode(F, F.GF(np.zeros((0, n), dtype=np.int64)), code.rank_scale)
        return SquareCode(F, F.from_coordinates(Y.reshape(-1, n, n)), code.rank_scale)
    Y = null_space(code.flat, code.m * code.n)
    if Y.shape[0] == 0:
        return MatrixCode.zero(F, code.m, code.n, code.rank_scale)
    return MatrixCode(F, Y.reshape(-1, code.m, code.n), code.rank_scale)


def adjoint_code(code: Code) -> Code:
    """{f^ : f in C}; the transpose code for square matrix codes."""
    if code.dim == 0:
        return code
    if isinstance(code, SquareCode):
        coeffs = np.stack([codes(lp_adjoint(f).coeffs) for f in code.polys])
        return SquareCode(code.field, code.field.GF(coeffs), code.rank_scale)
    if code.m != code.n:
        raise ParameterError(f"the adjoint needs square matrices, got {code.m}x{code.n}")
    return MatrixCode(code.field, np.swapaxes(code.basis, 1, 2), code.rank_scale)


# -- idealisers ------------------------------------------------------------------------


def _idealiser_system(code: Code, side: str):
    F = code.field
    m, n = code.m, code.n
    H = null_space(code.flat, m * n)
    D = H.shape[0]
    if D == 0 or code.dim == 0:
        size = m if side == "left" else n
        return F.GF(np.zeros((0, size * size), dtype=np.int64)), size
    H = H.reshape(D, m, n)
    rows = []
    for C in code.basis:
        if side == "left":
            # row (h C^T) flattened: (Y C)_ab paired with h_ab
            block = (H.reshape(D * m, n) @ C.T).reshape(D, m * m)
        else:
            # row (C^T h) flattened
            stacked = np.swapaxes(H, 0, 1).reshape(m, D * n)
            block = np.swapaxes((C.T @ stacked).reshape(n, D, n), 0, 1).reshape(D, n * n)
        rows.append(codes(block))
    return F.GF(np.concatenate(rows)), (m if side == "left" else n)


def idealiser(code: Code, side: str) -> MatrixCode:
    """L(C) = {Y : Y C in C} (left) or R(C) = {Z : C Z in C} (right) as a matrix algebra."""
    if side not in ("left", "right"):
        raise ParameterError(f"side must be 'left' or 'right', got {side!r}")
    system, size = _idealiser_system(code, side)
    sol = null_space(system, size * size)
    return MatrixCode(code.field, sol.reshape(-1, size, size))


def left_idealiser(code: Code) -> MatrixCode:
    return idealiser(code, "left")


def right_idealiser(code: Code) -> MatrixCode:
    return idealiser(code, "right")


def is_field_algebra(algebra: MatrixCode, config: Optional[RunConfig] = None) -> bool:
    """True iff every nonzero element is invertible (a finite division algebra is a field)."""
    config = resolve_config(config)
    check_budget("idealiser field check", algebra.size, config.vector_budget)
    counts, _ = rank_tally(algebra, config, fast=False)
    return int(counts[algebra.m]) == algebra.size - 1


def idealiser_report(code: Code, config: Optional[RunConfig] = None) -> IdealiserReport:
    L = left_idealiser(code)
    R = right_idealiser(code)
    return IdealiserReport(
        left_order=L.size,
        right_order=R.size,
        left_is_field=is_field_algebra(L, config),
        right_is_field=is_field_algebra(R, config),
    )


# -- invariants and serialization ------------------------------------------------------


def code_fingerprint(code: Code, config: Optional[RunConfig] = None) -> CodeFingerprint:
    counts, _ = rank_tally(code, config)
    nonzero = np.flatnonzero(counts[1:])
    d = int(nonzero[0]) + 1 if len(nonzero) else 0
    return CodeFingerprint(
        params=code_params(code, d),
        weights=WeightDistribution(counts=[int(c) for c in counts]),
        idealisers=idealiser_report(code, config),
    )


def fingerprint_digest(fingerprint: CodeFingerprint) -> str:
    return hashlib.sha256(fingerprint.model_dump_json().encode("utf-8")).hexdigest()[:16]


def code_to_model(code: Code) -> CodeModel:
    if isinstance(code, SquareCode):
        basis = codes(code.coeffs).tolist()
        m = n = code.field.n
    else:
        basis = codes(code.flat).tolist()
        m, n = code.m, code.n
    return CodeModel(field=code.field.spec, kind=code.kind, m=m, n=n, basis=basis, rank_scale=code.rank_scale)


def code_from_model(model: CodeModel) -> Code:
    F = field_create(model.field)
    rows = np.asarray(model.basis, dtype=np.int64)
    if model.kind == "square":
        if model.m != F.n or model.n != F.n:
            raise ParameterError(f"square code over F_{F.order} must be {F.n}x{F.n}")
        return SquareCode(F, F.GF(rows.reshape(-1, F.n)), model.rank_scale)
    if not model.basis:
        return MatrixCode.zero(F, model.m, model.n, model.rank_scale)
    return code_from_basis(list(rows.reshape(-1, model.m, model.n)), field=F, rank_scale=model.rank_scale)


def codewords(code: Code, indices: Iterable[int]):
    """Codewords numbered by F_q-coefficient index (least significant coefficient first)."""
    F = code.field
    idx = np.asarray(list(indices), dtype=np.int64)
    coeff = F.prime_subfield_q[digits(idx, F.q, code.dim)]
    return (coeff @ code.flat).reshape(len(idx), code.m, code.n)
