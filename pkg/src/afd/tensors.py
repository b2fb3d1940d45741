"""Exact tensors as sparse component arrays in the coordinate dual basis.

A rank-(r, s) tensor stores only its nonzero components, keyed by 1-based
index tuples with the r contravariant slots first.  Rank-(0, 0) tensors are
plain scalars wrapped in an empty-or-singleton component table keyed by ().
"""

from __future__ import annotations

from itertools import product

from .algebraifold import Derivation, OneForm
from .errors import (
    ArityMismatch,
    Degenerate,
    DescriptorMismatch,
    NotInvertibleInAlgebra,
    NotSymmetric,
    SlotOutOfRange,
)
from .scalars import FIELD, POLYNOMIAL, Scalar, ScalarContext


class Tensor:
    """Sparse exact tensor over an algebraifold."""

    __slots__ = ("algebraifold", "r", "s", "comp")

    def __init__(self, algebraifold, r, s, comp):
        self.algebraifold = algebraifold
        self.r = r
        self.s = s
        self.comp = comp  # trusted: no zero values, valid 1-based indices

    @classmethod
    def make(cls, algebraifold, r, s, entries):
        n = algebraifold.n
        comp = {}
        for idx, value in entries.items():
            idx = tuple(idx)
            if len(idx) != r + s or any(not 1 <= k <= n for k in idx):
                raise SlotOutOfRange(
                    f"index {idx} invalid for rank ({r}, {s}) with n = {n}")
            value = algebraifold.scalar(value)
            if not value.is_zero:
                comp[idx] = value
        return cls(algebraifold, r, s, comp)

    @classmethod
    def scalar_tensor(cls, algebraifold, value):
        value = algebraifold.scalar(value)
        comp = {} if value.is_zero else {(): value}
        return cls(algebraifold, 0, 0, comp)

    @classmethod
    def zero(cls, algebraifold, r, s):
        return cls(algebraifold, r, s, {})

    # -- views

    @property
    def rank(self):
        return (self.r, self.s)

    @property
    def is_zero(self):
        return not self.comp

    def get(self, idx):
        return self.comp.get(tuple(idx), self.algebraifold.zero())

    def as_scalar(self):
        if self.r or self.s:
            raise ArityMismatch("only rank-(0, 0) tensors are scalars")
        return self.get(())

    def sorted_components(self):
        return sorted(self.comp.items())

    def __eq__(self, other):
        return (isinstance(other, Tensor)
                and self.algebraifold == other.algebraifold
                and self.rank == other.rank and self.comp == other.comp)

    def __repr__(self):
        return f"Tensor(rank={self.rank}, nnz={len(self.comp)})"

    # -- module structure

    def _check_same(self, other):
        if not isinstance(other, Tensor) or other.algebraifold != self.algebraifold:
            raise DescriptorMismatch("tensors over different algebraifolds")

    def __add__(self, other):
        self._check_same(other)
        if self.rank != other.rank:
            raise ArityMismatch(f"cannot add rank {self.rank} and {other.rank}")
        comp = dict(self.comp)
        for idx, value in other.comp.items():
            total = comp.get(idx)
            total = value if total is None else total + value
            if total.is_zero:
                comp.pop(idx, None)
            else:
                comp[idx] = total
        return Tensor(self.algebraifold, self.r, self.s, comp)

    def __neg__(self):
        return Tensor(self.algebraifold, self.r, self.s,
                      {idx: -v for idx, v in self.comp.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, scalar):
        scalar = self.algebraifold.scalar(scalar)
        if scalar.is_zero:
            return Tensor.zero(self.algebraifold, self.r, self.s)
        return Tensor(self.algebraifold, self.r, self.s,
                      {idx: scalar * v for idx, v in self.comp.items()})

    # -- multiplicative structure

    def tensor(self, other):
        """Tensor product; adds up the arities slotwise."""
        self._check_same(other)
        comp = {}
        for (i1, v1), (i2, v2) in product(self.comp.items(), other.comp.items()):
            idx = i1[:self.r] + i2[:other.r] + i1[self.r:] + i2[other.r:]
            value = v1 * v2
            if not value.is_zero:
                comp[idx] = comp.get(idx, self.algebraifold.zero()) + value
        return Tensor(self.algebraifold, self.r + other.r, self.s + other.s,
                      {i: v for i, v in comp.items() if not v.is_zero})

    def contract(self, contra_slot, cov_slot):
        """Contract one contravariant against one covariant slot (1-based)."""
        if not 1 <= contra_slot <= self.r:
            raise SlotOutOfRange(
                f"contravariant slot {contra_slot} of rank {self.rank}")
        if not 1 <= cov_slot <= self.s:
            raise SlotOutOfRange(
                f"covariant slot {cov_slot} of rank {self.rank}")
        up = contra_slot - 1
        down = self.r + cov_slot - 1
        comp = {}
        for idx, value in self.comp.items():
            if idx[up] != idx[down]:
                continue
            out = tuple(k for pos, k in enumerate(idx)
                        if pos != up and pos != down)
            total = comp.get(out)
            total = value if total is None else total + value
            if total.is_zero:
                comp.pop(out, None)
            else:
                comp[out] = total
        return Tensor(self.algebraifold, self.r - 1, self.s - 1, comp)

    def evaluate(self, oneforms, derivations):
        """Full multilinear pairing against components."""
        if len(oneforms) != self.r or len(derivations) != self.s:
            raise ArityMismatch(
                f"rank {self.rank} tensor takes {self.r} one-forms and"
                f" {self.s} derivations")
        for xi in oneforms:
            if not isinstance(xi, OneForm) or xi.algebraifold != self.algebraifold:
                raise DescriptorMismatch("one-form over a different algebraifold")
        for v in derivations:
            if not isinstance(v, Derivation) or v.algebraifold != self.algebraifold:
                raise DescriptorMismatch("derivation over a different algebraifold")
        total = self.algebraifold.zero()
        for idx, value in self.comp.items():
            term = value
            for a, xi in enumerate(oneforms):
                term = term * xi.coeffs[idx[a] - 1]
                if term.is_zero:
                    break
            else:
                for b, v in enumerate(derivations):
                    term = term * v.coeffs[idx[self.r + b] - 1]
                    if term.is_zero:
                        break
            if not term.is_zero:
                total = total + term
        return total


def kronecker(algebraifold):
    """The identity rank-(1, 1) tensor."""
    one = algebraifold.one()
    return Tensor(algebraifold, 1, 1,
                  {(i, i): one for i in range(1, algebraifold.n + 1)})


def lie_derivative(algebraifold, u, T):
    """Lie derivative of a tensor along a derivation, componentwise.

    Each component contributes u(T[K]); a contravariant slot holding m feeds
    -d(u^i)/dx_m into the slot-i component, a covariant slot holding m feeds
    +d(u^m)/dx_j into the slot-j component.
    """
    if u.algebraifold != algebraifold or T.algebraifold != algebraifold:
        raise DescriptorMismatch("inputs over different algebraifolds")
    n = algebraifold.n
    names = algebraifold.ctx.transcendentals
    zero = algebraifold.zero()
    # partials[i][m] = d(u^{i+1}) / dx_{m+1}
    partials = [[u.coeffs[i].partial(names[m]) for m in range(n)]
                for i in range(n)]
    out = {}

    def bump(idx, value):
        if value.is_zero:
            return
        total = out.get(idx)
        total = value if total is None else total + value
        if total.is_zero:
            out.pop(idx, None)
        else:
            out[idx] = total

    for idx, c in T.comp.items():
        bump(idx, algebraifold.apply(u, c))
        for pos in range(T.r):
            m = idx[pos]
            for i in range(1, n + 1):
                coeff = partials[i - 1][m - 1]
                if not coeff.is_zero:
                    bump(idx[:pos] + (i,) + idx[pos + 1:], -(coeff * c))
        for pos in range(T.r, T.r + T.s):
            m = idx[pos]
            for j in range(1, n + 1):
                coeff = partials[m - 1][j - 1]
                if not coeff.is_zero:
                    bump(idx[:pos] + (j,) + idx[pos + 1:], coeff * c)
    return Tensor(algebraifold, T.r, T.s, out)


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------

def _fraction_field(ctx):
    if ctx.kind == FIELD:
        return ctx
    return ScalarContext(FIELD, ctx.transcendentals, ctx.constants,
                         ctx.extensions)


def _matrix_inverse(ctx, rows):
    """Exact Gauss-Jordan inverse over the fraction field of the context.

    Returns entries as Scalars of the (possibly field-lifted) context, or
    raises Degenerate when the determinant vanishes.
    """
    field = _fraction_field(ctx)
    n = len(rows)
    work = [[Scalar(field, v.val) for v in row] for row in rows]
    identity = [[field.one() if i == j else field.zero() for j in range(n)]
                for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n)
                      if not work[r][col].is_zero), None)
        if pivot is None:
            raise Degenerate("matrix is singular")
        if pivot != col:
            work[col], work[pivot] = work[pivot], work[col]
            identity[col], identity[pivot] = identity[pivot], identity[col]
        inv = work[col][col].inverse()
        work[col] = [inv * v for v in work[col]]
        identity[col] = [inv * v for v in identity[col]]
        for r in range(n):
            if r == col:
                continue
            factor = work[r][col]
            if factor.is_zero:
                continue
            work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
            identity[r] = [a - factor * b
                           for a, b in zip(identity[r], identity[col])]
    return identity


def matrix_inverse_in_context(algebraifold, rows):
    """Invert a Scalar matrix, verifying entries lie in the context algebra."""
    from .errors import NotDivisible
    from .scalars import _require_in_polynomial_ring

    ctx = algebraifold.ctx
    inverse = _matrix_inverse(ctx, rows)
    out = []
    for row in inverse:
        mapped = []
        for v in row:
            s = Scalar(ctx, v.val)
            if ctx.kind == POLYNOMIAL:
                try:
                    _require_in_polynomial_ring(s)
                except NotDivisible:
                    raise NotInvertibleInAlgebra(
                        "inverse exists only in the fraction field") from None
            mapped.append(s)
        out.append(mapped)
    return out


class Metric:
    """A symmetric nondegenerate rank-(0, 2) tensor with its exact inverse."""

    __slots__ = ("algebraifold", "g", "g_inv")

    def __init__(self, algebraifold, g, g_inv):
        self.algebraifold = algebraifold
        self.g = g
        self.g_inv = g_inv

    @classmethod
    def build(cls, algebraifold, g):
        return metric_inverse(algebraifold, g)

    def entry(self, i, j):
        return self.g.get((i, j))

    def inv_entry(self, i, j):
        return self.g_inv.get((i, j))

    def pair(self, u, v):
        """g(u, v) for derivations."""
        return self.g.evaluate((), (u, v))

    def __repr__(self):
        return f"Metric(n={self.algebraifold.n})"


def metric_inverse(algebraifold, g):
    """Build the Metric for a symmetric rank-(0, 2) tensor.

    The inverse is computed over the fraction field; in polynomial contexts
    every entry is verified to lie in the polynomial ring.
    """
    if g.rank != (0, 2):
        raise ArityMismatch("a metric is a rank-(0, 2) tensor")
    n = algebraifold.n
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if g.get((i, j)) != g.get((j, i)):
                raise NotSymmetric(f"g[{i},{j}] != g[{j},{i}]")
    rows = [[g.get((i, j)) for j in range(1, n + 1)] for i in range(1, n + 1)]
    inverse = matrix_inverse_in_context(algebraifold, rows)
    g_inv = Tensor.make(algebraifold, 2, 0, {
        (i + 1, j + 1): inverse[i][j]
        for i in range(n) for j in range(n)
    })
    return Metric(algebraifold, g, g_inv)


def musical_flat(metric, v):
    """Lower an index: the one-form g(v, -)."""
    A = metric.algebraifold
    coeffs = []
    for i in range(1, A.n + 1):
        total = A.zero()
        for j in range(1, A.n + 1):
            entry = metric.entry(i, j)
            if not entry.is_zero and not v.coeffs[j - 1].is_zero:
                total = total + entry * v.coeffs[j - 1]
        coeffs.append(total)
    return OneForm(A, tuple(coeffs))


def musical_sharp(metric, eta):
    """Raise an index: the derivation paired to a one-form by the inverse."""
    A = metric.algebraifold
    coeffs = []
    for i in range(1, A.n + 1):
        total = A.zero()
        for j in range(1, A.n + 1):
            entry = metric.inv_entry(i, j)
            if not entry.is_zero and not eta.coeffs[j - 1].is_zero:
                total = total + entry * eta.coeffs[j - 1]
        coeffs.append(total)
    return Derivation(A, tuple(coeffs))
