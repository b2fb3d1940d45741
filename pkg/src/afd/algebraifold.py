"""Coordinate algebraifolds: derivation bases dual to coordinate elements.

An :class:`Algebraifold` wraps a scalar context together with the dual pair
(a_1..a_n; u_1..u_n), where the a_i are the transcendental coordinates and
u_i = d/dx_i acts by exact partial differentiation (extension generators are
differentiated implicitly).  The matrix M[i][j] = u_i(a_j) is the identity
for every built instance; it is stored explicitly so that duality residuals
can be recomputed and reported even after deliberate corruption in tests.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ContextMismatch, DescriptorMismatch
from .scalars import Scalar, validate_relation_separable


class Algebraifold:
    """A scalar context with its coordinate derivation basis and dual basis."""

    __slots__ = ("ctx", "coords", "basis_matrix")

    def __init__(self, ctx, coords, basis_matrix):
        self.ctx = ctx
        self.coords = coords
        self.basis_matrix = basis_matrix

    @classmethod
    def build(cls, ctx):
        """Construct the coordinate instance for a context.

        Separability of the extension relation is re-validated here (the
        derivation basis only exists when d(relation)/d(generator) is
        invertible).
        """
        for gen, rel in ctx.extensions:
            validate_relation_separable(rel, gen)
        coords = tuple(ctx.var(name) for name in ctx.transcendentals)
        matrix = tuple(
            tuple(a.partial(name) for a in coords)
            for name in ctx.transcendentals
        )
        # the coordinate construction must yield the identity action, which
        # is in particular invertible over the fraction field
        for i, row in enumerate(matrix):
            for j, entry in enumerate(row):
                expected = ctx.one() if i == j else ctx.zero()
                if entry != expected:
                    raise DescriptorMismatch(
                        "coordinate basis action is not the identity matrix")
        return cls(ctx, coords, matrix)

    @property
    def n(self):
        return len(self.coords)

    def __eq__(self, other):
        return isinstance(other, Algebraifold) and self.ctx == other.ctx

    def __hash__(self):
        return hash(self.ctx)

    def __repr__(self):
        return f"Algebraifold({self.ctx!r})"

    # -- scalar helpers

    def scalar(self, value):
        if isinstance(value, Scalar):
            if value.ctx != self.ctx:
                raise ContextMismatch("scalar from a different context")
            return value
        if isinstance(value, str):
            from .expr import parse_scalar

            return parse_scalar(value, self.ctx)
        return self.ctx.const(Fraction(value))

    def zero(self):
        return self.ctx.zero()

    def one(self):
        return self.ctx.one()

    # -- constructors for module elements

    def basis_derivation(self, i):
        """The coordinate derivation d/dx_i (1-based index)."""
        coeffs = [self.zero()] * self.n
        coeffs[i - 1] = self.one()
        return Derivation(self, tuple(coeffs))

    def coordinate_form(self, i):
        """The coordinate differential d(a_i) (1-based index)."""
        coeffs = [self.zero()] * self.n
        coeffs[i - 1] = self.one()
        return OneForm(self, tuple(coeffs))

    def derivation(self, *coeffs):
        return Derivation(self, tuple(self.scalar(c) for c in coeffs))

    def one_form(self, *coeffs):
        return OneForm(self, tuple(self.scalar(c) for c in coeffs))

    # -- core operations

    def apply(self, v, a):
        """Apply a derivation to a scalar: sum_i v_i da/dx_i."""
        a = self.scalar(a)
        total = self.zero()
        for coeff, name in zip(v.coeffs, self.ctx.transcendentals):
            if not coeff.is_zero:
                total = total + coeff * a.partial(name)
        return total

    def d(self, a):
        """The differential of a scalar: the one-form v -> v(a)."""
        a = self.scalar(a)
        return OneForm(self, tuple(
            a.partial(name) for name in self.ctx.transcendentals))

    def bracket(self, u, v):
        """Lie bracket of derivations in the commuting coordinate basis."""
        _same(self, u, v)
        coeffs = tuple(
            self.apply(u, v.coeffs[j]) - self.apply(v, u.coeffs[j])
            for j in range(self.n)
        )
        return Derivation(self, coeffs)

    def dimension(self):
        """Trace of the basis action matrix; the count of coordinates."""
        total = self.zero()
        for i in range(self.n):
            total = total + self.basis_matrix[i][i]
        return total

    def is_constant(self, a):
        """Whether every basis derivation kills the scalar."""
        a = self.scalar(a)
        return all(a.partial(name).is_zero for name in self.ctx.transcendentals)

    def dual_basis_residuals(self):
        """Residuals of the two dual-basis identities against the stored matrix.

        Derivation side: for basis index j and each context generator g, the
        residual of (sum_i u_j(a_i) u_i)(g) - u_j(g).  One-form side: for
        basis index j, the coefficient residuals of sum_i da_j(u_i) da_i - da_j.
        All residuals vanish exactly when the stored matrix is the honest
        identity action.
        """
        M = self.basis_matrix
        residuals = []
        gens = [(name, self.ctx.var(name))
                for name in self.ctx.generators]
        for j in range(self.n):
            for name, g in gens:
                total = self.zero()
                for i in range(self.n):
                    if not M[j][i].is_zero:
                        total = total + M[j][i] * g.partial(
                            self.ctx.transcendentals[i])
                total = total - g.partial(self.ctx.transcendentals[j])
                residuals.append(("derivation", j + 1, name, total))
        for j in range(self.n):
            for i in range(self.n):
                delta = self.one() if i == j else self.zero()
                residuals.append(
                    ("one_form", j + 1, self.ctx.transcendentals[i],
                     M[i][j] - delta))
        return residuals


def _same(afd, *elements):
    for e in elements:
        if e.algebraifold != afd:
            raise DescriptorMismatch("element belongs to a different algebraifold")


class Derivation:
    """A derivation written against the coordinate basis u_1..u_n."""

    __slots__ = ("algebraifold", "coeffs")

    def __init__(self, algebraifold, coeffs):
        if len(coeffs) != algebraifold.n:
            raise DescriptorMismatch(
                f"expected {algebraifold.n} coefficients, got {len(coeffs)}")
        self.algebraifold = algebraifold
        self.coeffs = tuple(coeffs)

    def __call__(self, a):
        return self.algebraifold.apply(self, a)

    def __add__(self, other):
        _same(self.algebraifold, other)
        return Derivation(self.algebraifold, tuple(
            a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        _same(self.algebraifold, other)
        return Derivation(self.algebraifold, tuple(
            a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return Derivation(self.algebraifold, tuple(-a for a in self.coeffs))

    def __rmul__(self, scalar):
        scalar = self.algebraifold.scalar(scalar)
        return Derivation(self.algebraifold,
                          tuple(scalar * a for a in self.coeffs))

    __mul__ = __rmul__

    @property
    def is_zero(self):
        return all(c.is_zero for c in self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, Derivation)
                and self.algebraifold == other.algebraifold
                and self.coeffs == other.coeffs)

    def __repr__(self):
        return f"Derivation({self.coeffs!r})"


class OneForm:
    """A one-form written against the coordinate differentials da_1..da_n."""

    __slots__ = ("algebraifold", "coeffs")

    def __init__(self, algebraifold, coeffs):
        if len(coeffs) != algebraifold.n:
            raise DescriptorMismatch(
                f"expected {algebraifold.n} coefficients, got {len(coeffs)}")
        self.algebraifold = algebraifold
        self.coeffs = tuple(coeffs)

    def __call__(self, v):
        """Pairing with a derivation."""
        _same(self.algebraifold, v)
        total = self.algebraifold.zero()
        for a, b in zip(self.coeffs, v.coeffs):
            total = total + a * b
        return total

    def __add__(self, other):
        _same(self.algebraifold, other)
        return OneForm(self.algebraifold, tuple(
            a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        _same(self.algebraifold, other)
        return OneForm(self.algebraifold, tuple(
            a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return OneForm(self.algebraifold, tuple(-a for a in self.coeffs))

    def __rmul__(self, scalar):
        scalar = self.algebraifold.scalar(scalar)
        return OneForm(self.algebraifold,
                       tuple(scalar * a for a in self.coeffs))

    __mul__ = __rmul__

    @property
    def is_zero(self):
        return all(c.is_zero for c in self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, OneForm)
                and self.algebraifold == other.algebraifold
                and self.coeffs == other.coeffs)

    def __repr__(self):
        return f"OneForm({self.coeffs!r})"
