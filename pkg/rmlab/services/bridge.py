"""
Maximum scattered subspaces <-> MRD codes.

Square case: U_f = {(x, f(x))} and C_f = <x, f(x)>_{F_{q^n}}.
General case: for G: V -> W with kernel U, C_{U,G} = {G o tau_v : v in V}, where
tau_v: F_{q^n} -> V sends lambda to lambda v.  Maps F_{q^n} -> W are stored as
dim W x n matrices over F_q (columns are images of the FqBasis).
"""
import hashlib
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from rmlab.errors import ParameterError, RmlabError
from rmlab.models.response import CorrespondenceReport
from rmlab.models.schemas import RunConfig
from rmlab.services.gf import Field, codes, field_for
from rmlab.services.linalg import fan_out, null_space, rank, resolve_config
from rmlab.services.linpoly import LinPoly
from rmlab.services.linset import Subspace, is_scattered, max_point_weight, subspace_from_map
from rmlab.services.rmcode import (
    Code,
    MatrixCode,
    code_equal,
    code_from_basis,
    code_params,
    fqn_basis,
    is_fqn_linear,
    min_distance,
    singleton_holds,
    weight_distribution,
)
from rmlab.services.scattered import FieldModel, bgmp_model, find_bgmp_parameter

logger = logging.getLogger(__name__)


def subspace_digest(U: Subspace) -> str:
    payload = f"{U.field.key}|{U.r}|".encode("utf-8") + codes(U.coords).tobytes()
    return hashlib.sha256(payload).hexdigest()[:16]


def code_digest(code: Code) -> str:
    payload = f"{code.field.key}|{code.m}x{code.n}|{code.rank_scale}|".encode("utf-8") + codes(code.basis).tobytes()
    return hashlib.sha256(payload).hexdigest()[:16]


def _both(first, second, config: RunConfig):
    """Run two independent verdicts, concurrently when workers allow."""
    results = fan_out([first, second], lambda task: task(), config.workers)
    return results[0], results[1]


# -- square case ---------------------------------------------------------------------


def code_from_f(f: LinPoly) -> Code:
    """C_f = {a f(x) + b x : a, b in F_{q^n}}."""
    F = f.field
    code = code_from_basis([LinPoly.identity(F), f])
    if code.dim != 2 * F.n:
        raise ParameterError(f"C_f has dimension {code.dim}, not 2n={2 * F.n}: f is a multiple of x")
    return code


def verify_sheekey(f: LinPoly, config: Optional[RunConfig] = None) -> CorrespondenceReport:
    """U_f maximum scattered iff C_f MRD, both sides computed independently."""
    config = resolve_config(config)
    code = code_from_f(f)
    U = subspace_from_map(f)
    scattered, d = _both(lambda: is_scattered(U, config), lambda: min_distance(code, config), config)
    mrd = singleton_holds(code, d)[1]
    logger.info(f"f = {f.to_text()}: scattered={scattered}, MRD={mrd}")
    return CorrespondenceReport(
        direction="subspace->code",
        input_fingerprint=subspace_digest(U),
        output_fingerprint=code_digest(code),
        scattered=scattered,
        mrd=mrd,
        params=code_params(code, d),
        detail=f"f = {f.to_text()}",
    )


# -- general case: C_{U,G} -----------------------------------------------------------------


def canonical_projection(U: Subspace):
    """G = [-R^T on pivot columns | I on the others] with kernel exactly U (R = U's non-pivot block)."""
    F = U.field
    N = U.ambient_dim
    k = U.dim
    if k == N:
        raise ParameterError("U is the whole space; no projection onto a nonzero complement")
    raw = codes(U.coords)
    pivots = [int(np.argmax(row != 0)) for row in raw]
    others = [j for j in range(N) if j not in set(pivots)]
    G = F.GF(np.zeros((N - k, N), dtype=np.int64))
    if k:
        G[:, pivots] = -U.coords[:, others].T
    G[np.arange(N - k), others] = F.one
    return G


def alternative_projection(U: Subspace, seed: int = 1):
    """X G for a random invertible X over F_q: another map with kernel U."""
    F = U.field
    G = canonical_projection(U)
    m = G.shape[0]
    rng = np.random.default_rng(seed)
    sub = codes(F.prime_subfield_q)
    while True:
        X = F.GF(sub[rng.integers(0, len(sub), size=(m, m))])
        if rank(X) == m:
            return X @ G


def _check_projection(U: Subspace, G) -> None:
    if G.shape[1] != U.ambient_dim:
        raise ParameterError(f"G must have {U.ambient_dim} columns, got {G.shape[1]}")
    if U.dim and np.any(codes(G @ U.coords.T)):
        raise ParameterError("G does not vanish on U")
    if rank(G) != U.ambient_dim - U.dim:
        raise ParameterError("the kernel of G is larger than U")


def code_from_kernel(U: Subspace, G=None) -> MatrixCode:
    """{G o tau_v : v in V} spanned over the F_q-basis {b_a e_j} of V."""
    F = U.field
    G = canonical_projection(U) if G is None else G
    _check_projection(U, G)
    n = F.n
    prods = F.basis[:, np.newaxis] * F.basis[np.newaxis, :]
    coords = F.coordinates(prods)  # (a, c, n): coordinates of b_c b_a
    mats = []
    for j in range(U.r):
        block = G[:, j * n:(j + 1) * n]
        for a in range(n):
            mats.append(codes(block @ coords[a].T))
    return MatrixCode(F, F.GF(np.stack(mats)))


def code_from_subspace(U: Subspace, G=None, config: Optional[RunConfig] = None) -> MatrixCode:
    """C_{U,G} for U of dimension rn/2; parameters (rn/2, n, q; n - i) with i the largest point weight."""
    F = U.field
    N = U.ambient_dim
    if N % 2 or U.dim != N // 2:
        raise ParameterError(f"U must have dimension rn/2 = {N / 2}, got {U.dim}")
    i = max_point_weight(U, config)
    if i >= F.n:
        raise ParameterError(f"a point of weight {i} = n lies inside U")
    code = code_from_kernel(U, G)
    if code.dim != N:
        raise RmlabError(f"C_{{U,G}} has dimension {code.dim}, expected rn={N}")
    logger.info(f"C_{{U,G}} from {U!r}: shape {code.shape}, expected d = n - i = {F.n - i}")
    return code


def bound_code(U: Subspace, config: Optional[RunConfig] = None) -> MatrixCode:
    """For scattered U of any rank k, C_{U,G} has d >= n - 1, so the Singleton bound forces k <= rn/2."""
    config = resolve_config(config)
    F = U.field
    if not is_scattered(U, config):
        raise ParameterError("bound_code needs a scattered subspace")
    code = code_from_kernel(U)
    d = min_distance(code, config)
    if d < F.n - 1:
        raise RmlabError(f"C_{{U,G}} of a scattered subspace has d={d} < n-1")
    # d >= n - 1 only weakens the bound: q^{rn} <= q^{2(rn - k)}, so k <= rn/2
    within = singleton_holds(code, d)[0] and singleton_holds(code, F.n - 1)[0]
    rn, k = U.ambient_dim, U.dim
    if not within:
        raise RmlabError(f"scattered subspace of rank {k} breaks the Singleton bound in V({U.r},{F.order})")
    logger.debug(f"bound code of {U!r}: d={d}, rank {k} <= rn/2 = {rn // 2}")
    return code


def converse_projection(code: MatrixCode, config: Optional[RunConfig] = None):
    """(U, G) with C_{U,G} = C for an MRD code (t, n, q; n-1), t >= n, closed under right scalar maps."""
    F = code.field
    t, n = code.shape
    if n != F.n or not is_fqn_linear(code, "right"):
        raise ParameterError("the code must be closed under composition with every tau_alpha on the right")
    if t < n:
        raise ParameterError(f"need t >= n, got t={t}, n={n}")
    if code.dim != 2 * t:
        raise ParameterError(f"dimension {code.dim} is not 2t={2 * t}")
    d = min_distance(code, config)
    if d != n - 1:
        raise ParameterError(f"minimum distance {d} is not n-1={n - 1}")
    groups = fqn_basis(code, "right")  # (r, n, t, n): M_l o tau_{b_a}
    r = groups.shape[0]
    one = F.coordinates(F.one)
    blocks = [np.add.reduce(groups[l] * one[:, np.newaxis, np.newaxis], axis=0) for l in range(r)]
    G = F.GF(np.concatenate([codes(b) for b in blocks], axis=1))
    kernel = null_space(G, r * n)
    U = Subspace(F, F.from_coordinates(kernel.reshape(-1, r, n)), r)
    if U.dim != r * n // 2:
        raise RmlabError(f"kernel has dimension {U.dim}, expected rn/2={r * n // 2}")
    logger.info(f"converse: r={r}, U of dimension {U.dim} in V({r},{F.order})")
    return U, G


def subspace_from_code(code: MatrixCode, config: Optional[RunConfig] = None) -> Subspace:
    return converse_projection(code, config)[0]


def roundtrip(U: Subspace, config: Optional[RunConfig] = None, seed: int = 1) -> CorrespondenceReport:
    """U -> C_{U,G} -> (U', G') -> C_{U',G'}, plus the verdicts under a second G."""
    config = resolve_config(config)
    code = code_from_subspace(U, config=config)
    scattered, d = _both(lambda: is_scattered(U, config), lambda: min_distance(code, config), config)
    mrd = singleton_holds(code, d)[1]
    other = code_from_subspace(U, alternative_projection(U, seed), config)
    same_weights = weight_distribution(other, config) == weight_distribution(code, config)
    equal = False
    detail = f"second G gives equal weight distribution: {same_weights}"
    if scattered and mrd:
        U2, G2 = converse_projection(code, config)
        equal = code_equal(code_from_subspace(U2, G2, config), code) and is_scattered(U2, config)
        detail += f"; recovered U' of dimension {U2.dim}"
    logger.info(f"roundtrip {U!r}: scattered={scattered}, MRD={mrd}, equal={equal}")
    return CorrespondenceReport(
        direction="subspace->code",
        input_fingerprint=subspace_digest(U),
        output_fingerprint=code_digest(code),
        scattered=scattered,
        mrd=mrd,
        round_trip_equal=equal,
        params=code_params(code, d),
        detail=detail,
    )


def code_to_subspace_report(
    code: MatrixCode, config: Optional[RunConfig] = None, converse: Optional[Tuple[Subspace, object]] = None
) -> CorrespondenceReport:
    """Verdicts on C and on the U it determines; ``converse`` is a (U, G) already computed for C."""
    config = resolve_config(config)
    U, G = converse or converse_projection(code, config)
    scattered = is_scattered(U, config)
    d = min_distance(code, config)
    mrd = singleton_holds(code, d)[1]
    equal = scattered and mrd and code_equal(code_from_subspace(U, G, config), code)
    return CorrespondenceReport(
        direction="code->subspace",
        input_fingerprint=code_digest(code),
        output_fingerprint=subspace_digest(U),
        scattered=scattered,
        mrd=mrd,
        round_trip_equal=equal,
        params=code_params(code, d),
    )


def code_from_hscattered(maps: Sequence[LinPoly]) -> Code:
    """<f_1, ..., f_k>_{F_{q^n}} for U = {(f_1(x), ..., f_k(x))}."""
    if not maps:
        raise ParameterError("need at least one map")
    code = code_from_basis(list(maps))
    F = maps[0].field
    if code.dim != len(maps) * F.n:
        raise ParameterError("the maps are not F_{q^n}-independent")
    return code


# -- worked example over F_{q^{2rt}} ------------------------------------------------------


@dataclass
class WorkedExample:
    subspace: Subspace
    code: MatrixCode
    formula_code: MatrixCode
    reference: MatrixCode
    a: int
    omega: int


def worked_example_binomial(q: int, t: int, r: int, i: int, a: Optional[int] = None,
                            config: Optional[RunConfig] = None) -> WorkedExample:
    """U_f = {x omega + a x^{q^i}} with G: x omega + y -> f(x) - y, and the explicit F_v formula."""
    config = resolve_config(config)
    if r % 2 == 0:
        raise ParameterError(f"r={r} must be odd")
    B = field_for(q, 2 * r * t)
    if a is None:
        a = find_bgmp_parameter(B, t, r)
    model = bgmp_model(q, t, r, i, a)
    a_el = B.GF(int(a))
    omega = model.omega
    rt = r * t
    omega_s = B.frobenius(omega, rt)
    A0 = omega + omega_s
    A1 = -(omega * omega_s)
    if omega * omega != omega * A0 + A1:
        raise RmlabError("omega does not satisfy omega^2 = A0 omega + A1")

    def G(w):
        X = (w - B.frobenius(w, rt)) * (omega - omega_s) ** -1
        Y = w - X * omega
        return a_el * B.frobenius(X, i) - Y

    b = B.subfield_basis(t)
    domain = np.concatenate([b * omega, b])
    vs = B.basis
    construction = _as_matrices(B, G(vs[:, np.newaxis] * domain[np.newaxis, :]), rt)

    bb = B.subfield_basis(rt)
    zeros_v = B.GF(np.zeros(rt, dtype=np.int64))
    v0 = np.concatenate([bb, zeros_v])[:, np.newaxis]
    v1 = np.concatenate([zeros_v, bb])[:, np.newaxis]
    zeros_t = B.GF(np.zeros(t, dtype=np.int64))
    x = np.concatenate([b, zeros_t])[np.newaxis, :]
    y = np.concatenate([zeros_t, b])[np.newaxis, :]
    def fr(z):
        return B.frobenius(z, i)

    values = (fr(x) * a_el * (fr(A0) * fr(v0) + fr(v1)) - x * A1 * v0
              + fr(y) * a_el * fr(v0) - y * v1)
    formula = _as_matrices(B, values, rt)

    code = MatrixCode(B, construction)
    formula_code = MatrixCode(B, formula)
    if not code_equal(code, formula_code):
        raise RmlabError("the explicit F_v formula does not span C_{U,G}")

    for mu in B.subfield_elements(r)[1:]:
        left = G(mu * vs[:, np.newaxis] * domain[np.newaxis, :])
        right = mu * G(vs[:, np.newaxis] * domain[np.newaxis, :])
        if np.any(left != right):
            raise RmlabError(f"mu F_v != F_(mu v) for mu={int(mu)}")

    U = model.subspace()
    reference = _in_domain_basis(model, code_from_subspace(U, _projection_matrix(model, G, rt), config), domain)
    if not code_equal(reference, code):
        raise RmlabError(f"C_{{U,G}} over F_{U.field.order} differs from the construction over F_{B.order}")
    logger.info(f"worked example q={q}, t={t}, r={r}, i={i}: code of shape {code.shape}, F_{{q^{r}}}-linear")
    return WorkedExample(subspace=U, code=code, formula_code=formula_code, reference=reference,
                         a=int(a_el), omega=int(omega))


def _as_matrices(B: Field, values, rt: int):
    """(V, D) elements of F_{q^{rt}} -> (V, rt, D) matrices over F_q."""
    coords = B.coordinates(values, rt)
    return np.swapaxes(coords, 1, 2)


def _projection_matrix(model: FieldModel, G, rt: int):
    """G as an rt x rn matrix over F_q acting on the F_q-basis {b_c e_j} of F_{q^{2t}}^r."""
    B, S, emb = model.big, model.small, model.embedding
    w = emb.relative_basis[:, np.newaxis] * emb.embed(S.basis)[np.newaxis, :]
    coords = B.coordinates(G(w), rt).reshape(-1, rt)
    return emb.restrict(coords.T)


def _in_domain_basis(model: FieldModel, code: MatrixCode, domain) -> MatrixCode:
    """A code over F_{q^{2t}} carried into B, its columns taken on the F_q-basis ``domain`` of F_{q^{2t}}."""
    S, emb = model.small, model.embedding
    change = S.coordinates(emb.restrict(domain)).T
    K, rows, n = code.basis.shape
    mats = (code.basis.reshape(K * rows, n) @ change).reshape(K, rows, change.shape[1])
    return MatrixCode(model.big, emb.embed(mats))


def worked_example_report(example: WorkedExample, config: Optional[RunConfig] = None) -> CorrespondenceReport:
    config = resolve_config(config)
    U, code = example.subspace, example.code
    scattered, d = _both(lambda: is_scattered(U, config), lambda: min_distance(code, config), config)
    mrd = singleton_holds(code, d)[1]
    same = code_equal(code, example.reference)
    return CorrespondenceReport(
        direction="subspace->code",
        input_fingerprint=subspace_digest(U),
        output_fingerprint=code_digest(code),
        scattered=scattered,
        mrd=mrd,
        params=code_params(code, d),
        detail=f"a={example.a}, omega={example.omega}; equals C_{{U,G}} over F_{U.field.order}: {same}",
    )
