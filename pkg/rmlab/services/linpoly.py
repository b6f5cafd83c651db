"""
The algebra of q-polynomials f(x) = sum_{i<n} a_i x^{q^i} over F_{q^n}
(composition taken modulo x^{q^n} - x).
"""
import logging
import re

import numpy as np

from rmlab.errors import ParameterError
from rmlab.models.response import PolyReport
from rmlab.models.schemas import LinPolyModel
from rmlab.services.gf import Field, codes
from rmlab.services.linalg import batch_rank

logger = logging.getLogger(__name__)


class LinPoly:
    """Immutable q-polynomial with coefficients (a_0, ..., a_{n-1})."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs):
        arr = field.GF(coeffs) if not isinstance(coeffs, field.GF) else coeffs.copy()
        if arr.shape != (field.n,):
            raise ParameterError(f"a q-polynomial over F_{field.order} needs {field.n} coefficients, got {arr.shape}")
        self.field = field
        self.coeffs = arr

    # -- constructors ------------------------------------------------------------

    @classmethod
    def zero(cls, field: Field) -> "LinPoly":
        return cls(field, [0] * field.n)

    @classmethod
    def monomial(cls, field: Field, i: int, a=1) -> "LinPoly":
        c = [0] * field.n
        c[i % field.n] = int(a)
        return cls(field, c)

    @classmethod
    def identity(cls, field: Field) -> "LinPoly":
        return cls.monomial(field, 0, 1)

    @classmethod
    def trace(cls, field: Field) -> "LinPoly":
        return cls(field, [1] * field.n)

    @classmethod
    def from_terms(cls, field: Field, terms: dict) -> "LinPoly":
        """{exponent i: coefficient} -> sum a_i x^{q^i}; exponents are reduced mod n."""
        c = field.GF([0] * field.n)
        for i, a in terms.items():
            c[i % field.n] += field.GF(int(a))
        return cls(field, c)

    @classmethod
    def parse(cls, field: Field, text: str) -> "LinPoly":
        """Parse sums of terms ``[c*]x``, ``[c*]x^q``, ``[c*]x^q^i`` or ``[c*]x^{q^i}``.

        Coefficients are integer element codes; a leading ``-`` negates the term.
        """
        cleaned = text.replace(" ", "")
        if not cleaned:
            raise ParameterError("empty polynomial")
        pattern = re.compile(r"([+-]?)(?:(\d+)\*)?x(?:\^\{?q(?:\^(\d+))?\}?)?")
        pos = 0
        c = field.GF([0] * field.n)
        for match in pattern.finditer(cleaned):
            if match.start() != pos or not match.group(0):
                raise ParameterError(f"cannot parse q-polynomial {text!r} at position {pos}")
            sign, coeff, exp = match.groups()
            a = field.GF(int(coeff)) if coeff else field.one
            if sign == "-":
                a = -a
            if "^" in match.group(0):
                i = int(exp) if exp else 1
            else:
                i = 0
            c[i % field.n] += a
            pos = match.end()
        if pos != len(cleaned):
            raise ParameterError(f"cannot parse q-polynomial {text!r} at position {pos}")
        return cls(field, c)

    # -- algebra -----------------------------------------------------------------

    def __add__(self, other: "LinPoly") -> "LinPoly":
        self._same_field(other)
        return LinPoly(self.field, self.coeffs + other.coeffs)

    def __sub__(self, other: "LinPoly") -> "LinPoly":
        self._same_field(other)
        return LinPoly(self.field, self.coeffs - other.coeffs)

    def __neg__(self) -> "LinPoly":
        return LinPoly(self.field, -self.coeffs)

    def scale(self, alpha) -> "LinPoly":
        """Left multiplication by a scalar: alpha * f(x)."""
        return LinPoly(self.field, self.coeffs * self.field.GF(int(alpha)))

    def __eq__(self, other) -> bool:
        return isinstance(other, LinPoly) and self.field == other.field and bool(np.all(self.coeffs == other.coeffs))

    def __hash__(self) -> int:
        return hash((self.field.key, tuple(codes(self.coeffs).tolist())))

    def __repr__(self) -> str:
        return f"LinPoly({self.to_text()})"

    def _same_field(self, other: "LinPoly") -> None:
        if self.field != other.field:
            raise ParameterError("q-polynomials live over different fields")

    def is_zero(self) -> bool:
        return not np.any(codes(self.coeffs))

    def to_text(self) -> str:
        terms = []
        for i, a in enumerate(codes(self.coeffs).tolist()):
            if a == 0:
                continue
            mono = "x" if i == 0 else ("x^q" if i == 1 else f"x^q^{i}")
            terms.append(mono if a == 1 else f"{a}*{mono}")
        return " + ".join(terms) if terms else "0"

    def to_model(self) -> LinPolyModel:
        return LinPolyModel(coeffs=codes(self.coeffs).tolist())

    @classmethod
    def from_model(cls, field: Field, model: LinPolyModel) -> "LinPoly":
        return cls(field, model.coeffs)

    def __call__(self, x):
        return lp_eval(self, x)


def lp_eval(f: LinPoly, x):
    """sum a_i x^{q^i}; x may be a scalar or any-shaped array."""
    F = f.field
    x = F.GF(x) if not isinstance(x, F.GF) else x
    total = x * f.coeffs[0]
    y = x
    for i in range(1, F.n):
        y = F.frobenius(y, 1)
        if f.coeffs[i] != 0:
            total = total + f.coeffs[i] * y
    return total


def lp_compose(f: LinPoly, g: LinPoly) -> LinPoly:
    """(f o g)_k = sum_{i+j = k mod n} a_i b_j^{q^i}."""
    f._same_field(g)
    F = f.field
    n = F.n
    out = F.GF([0] * n)
    for i in range(n):
        if f.coeffs[i] == 0:
            continue
        twisted = F.frobenius(g.coeffs, i)
        out = out + f.coeffs[i] * np.roll(twisted, i)
    return LinPoly(F, out)


def lp_adjoint(f: LinPoly) -> LinPoly:
    """Coefficient i of the adjoint is a_{(n-i) mod n}^{q^i}."""
    F = f.field
    n = F.n
    out = F.GF([0] * n)
    for i in range(n):
        out[i] = F.frobenius(f.coeffs[(n - i) % n], i)
    return LinPoly(F, out)


def lp_bilinear(f: LinPoly, g: LinPoly):
    """b(f, g) = Tr_{q^n/q}(sum f_i g_i)."""
    f._same_field(g)
    return f.field.trace(np.add.reduce(f.coeffs * g.coeffs), 1)


def lp_to_matrix(f: LinPoly):
    """n x n matrix over F_q of x -> f(x) in the field's FqBasis (columns are images)."""
    F = f.field
    images = lp_eval(f, F.basis)
    return F.coordinates(images).T


def lp_rank(f: LinPoly) -> int:
    return int(batch_rank(lp_to_matrix(f)[np.newaxis])[0])


def lp_kernel_dim(f: LinPoly) -> int:
    return f.field.n - lp_rank(f)


def coefficient_matrices(field: Field, coeffs):
    """Matrices of the q-polynomials whose coefficient rows are given, shape (K, n, n)."""
    n = field.n
    # powers[i, j] = b_j^{q^i}
    powers = field.GF(np.stack([codes(field.frobenius(field.basis, i)) for i in range(n)]))
    images = coeffs @ powers  # (K, n): f_k(b_j)
    return np.swapaxes(field.coordinates(images), 1, 2)


def matrix_to_poly(field: Field, mat) -> LinPoly:
    """The unique q-polynomial with the given matrix (inverse of lp_to_matrix)."""
    n = field.n
    images = field.from_coordinates(mat.T)  # f(b_j)
    powers = field.GF(np.stack([codes(field.frobenius(field.basis, i)) for i in range(n)]))
    # coeffs @ powers = images  ->  coeffs = images @ powers^{-1}
    coeffs = images[np.newaxis, :] @ np.linalg.inv(powers)
    return LinPoly(field, coeffs[0])


def poly_from_matrix(field: Field, rows) -> LinPoly:
    """The q-polynomial of an n x n matrix given as rows of F_q element codes."""
    n = field.n
    mat = field.GF(np.asarray(rows, dtype=np.int64))
    if mat.shape != (n, n):
        raise ParameterError(f"expected a {n} x {n} matrix, got shape {mat.shape}")
    if not np.all(field.in_subfield(mat, 1)):
        raise ParameterError("matrix entries must lie in F_q")
    return matrix_to_poly(field, mat)


def poly_report(f: LinPoly) -> PolyReport:
    return PolyReport(
        poly=f.to_text(),
        coeffs=codes(f.coeffs).tolist(),
        rank=lp_rank(f),
        kernel_dim=lp_kernel_dim(f),
        matrix=codes(lp_to_matrix(f)).tolist(),
    )
