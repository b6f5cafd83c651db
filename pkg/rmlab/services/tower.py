"""
Embedding of F_{q^a} into F_{q^b} (a | b), used to present subspaces of the
field model V = F_{q^b} as subspaces of F_{q^a}^{b/a}.
"""
import logging
from functools import cached_property

import galois
import numpy as np

from rmlab.errors import FieldError
from rmlab.services.gf import Field, codes
from rmlab.services.linalg import digits

logger = logging.getLogger(__name__)


class FieldEmbedding:
    """Field monomorphism small -> big sending the small modulus root to a root in big."""

    def __init__(self, small: Field, big: Field):
        if small.p != big.p or small.h != big.h:
            raise FieldError("embedding needs fields over the same F_q")
        if big.n % small.n:
            raise FieldError(f"F_{{q^{small.n}}} does not embed in F_{{q^{big.n}}}")
        self.small = small
        self.big = big
        self.degree = small.degree
        self.r = big.n // small.n
        poly = galois.Poly(small.modulus, field=big.GF, order="asc")
        roots = poly.roots()
        if len(roots) == 0:
            raise FieldError("small modulus has no root in the big field")
        self.root = big.GF(int(np.min(codes(roots))))
        logger.debug(f"Embedding F_{small.order} -> F_{big.order} via root {int(self.root)}")

    @cached_property
    def _powers(self):
        return self.root ** np.arange(self.degree)

    @cached_property
    def table(self) -> np.ndarray:
        """Big-field code of every small element, indexed by small code."""
        digit_rows = digits(np.arange(self.small.order), self.small.p, self.degree)
        return codes(np.add.reduce(self.big.GF(digit_rows) * self._powers, axis=1))

    @cached_property
    def _inverse(self):
        order = np.argsort(self.table)
        return self.table[order], order

    def embed(self, x):
        """Image of small elements in the big field."""
        return self.big.GF(self.table[codes(x)])

    def restrict(self, y):
        """Small-field preimage of big elements lying in the image subfield."""
        sorted_codes, order = self._inverse
        raw = codes(y)
        pos = np.searchsorted(sorted_codes, raw)
        pos = np.clip(pos, 0, len(sorted_codes) - 1)
        if not np.all(sorted_codes[pos] == raw):
            raise FieldError("element does not lie in the embedded subfield")
        return self.small.GF(order[pos])

    @cached_property
    def relative_basis(self):
        """F_{q^a}-basis of F_{q^b}: powers of the big field's modulus root, greedily."""
        big = self.big
        chosen = []
        sub = self.small.n
        for c in codes(big.root ** np.arange(big.degree)):
            trial = big.GF(chosen + [int(c)])
            rows = [codes(big.frobenius(trial, sub * i)) for i in range(len(trial))]
            if int(np.linalg.matrix_rank(big.GF(np.stack(rows)))) == len(trial):
                chosen.append(int(c))
            if len(chosen) == self.r:
                break
        return big.GF(chosen)

    @cached_property
    def _relative_dual(self):
        big = self.big
        b = self.relative_basis
        gram = big.trace(b[:, np.newaxis] * b[np.newaxis, :], self.small.n)
        return np.add.reduce(np.linalg.inv(gram) * b[np.newaxis, :], axis=1)

    def relative_coordinates(self, y):
        """Coordinates of big elements over the image of the small field, as small elements."""
        c = self.big.trace(y[..., np.newaxis] * self._relative_dual, self.small.n)
        return self.restrict(c)

    def from_relative(self, c):
        """sum_j c_j e_j for small-field coordinates c."""
        return np.add.reduce(self.embed(c) * self.relative_basis, axis=-1)
