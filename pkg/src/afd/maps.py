"""Homomorphisms between algebraifolds, formal lines and geodesic residuals.

A homomorphism is stored as a generator-image table and validated eagerly:
every minimal relation must map to zero, and the explicit pullback formula is
checked against the differentials of all generators before the map is
accepted.  Curves are homomorphisms into a line (polynomial Q[t], or its
rational diagnostic variant for field-type sources), and the geodesic
residual transports a connection along the curve and differentiates the
curve's own velocity.
"""

from __future__ import annotations

from .algebraifold import Algebraifold, OneForm
from .errors import (
    ContextMismatch,
    DescriptorMismatch,
    MissingImage,
    NoAntiderivative,
    PullbackVerificationFailed,
    RelationNotPreserved,
)
from .scalars import FIELD, POLYNOMIAL, MultiPoly, RatFunc, Scalar, ScalarContext


class AlgebraifoldHom:
    """A validated homomorphism given by images of the source generators."""

    __slots__ = ("source", "target", "images")

    def __init__(self, source, target, images):
        self.source = source
        self.target = target
        self.images = dict(images)

    @classmethod
    def build(cls, source, target, images):
        """Validate generator coverage, relations and the pullback identity."""
        images = {name: target.scalar(value) for name, value in images.items()}
        for name in source.ctx.generators:
            if name not in images:
                raise MissingImage(f"no image for generator '{name}'")
        for name in source.ctx.constants:
            if name not in target.ctx.constants:
                raise ContextMismatch(
                    f"target context lacks base constant '{name}'")
        hom = cls(source, target, images)
        for gen, rel in source.ctx.extensions:
            residual = hom._evaluate_relation(rel)
            if not residual.is_zero:
                from .expr import render_scalar

                raise RelationNotPreserved(gen, render_scalar(residual))
        hom._verify_pullback()
        return hom

    def _evaluate_relation(self, rel):
        total = self.target.zero()
        for exps, coeff in rel.terms.items():
            term = self.target.scalar(coeff)
            for name, e in zip(rel.vars, exps):
                if not e:
                    continue
                if name in self.images:
                    term = term * self.images[name] ** e
                else:
                    term = term * self.target.ctx.var(name) ** e
            total = total + term
        return total

    def _verify_pullback(self):
        """Check the explicit pullback against d(image) on every generator."""
        for name in self.source.ctx.generators:
            xi = self.source.d(self.source.ctx.var(name))
            expected = self.target.d(self.images[name])
            if self.pullback(xi) != expected:
                raise PullbackVerificationFailed(
                    f"pullback of d({name}) does not match d(image)")

    def __eq__(self, other):
        return (isinstance(other, AlgebraifoldHom)
                and self.source == other.source
                and self.target == other.target
                and self.images == other.images)

    # -- action on scalars and module elements

    def apply(self, a):
        """The image of a scalar under the homomorphism."""
        a = self.source.scalar(a)
        if a.is_constant_rational:
            return self.target.ctx.const(a.as_fraction())
        return a.substitute(self.images)

    def pullback(self, xi):
        """Pull a source one-form back to the target.

        Coefficients of sum_i phi(xi(u_i)) d(phi(a_i)) in the target basis.
        """
        if xi.algebraifold != self.source:
            raise DescriptorMismatch("one-form over a different source")
        out = [self.target.zero()] * self.target.n
        for i, coeff in enumerate(xi.coeffs):
            if coeff.is_zero:
                continue
            moved = self.apply(coeff)
            d_image = self.target.d(self.images[self.source.ctx.transcendentals[i]])
            for j in range(self.target.n):
                if not d_image.coeffs[j].is_zero:
                    out[j] = out[j] + moved * d_image.coeffs[j]
        return OneForm(self.target, tuple(out))

    def differential(self, w):
        """The differential applied to a target derivation.

        Returns the coefficient sequence (w(phi(a_1)), ..., w(phi(a_n)))
        against the pushed-forward basis.
        """
        if w.algebraifold != self.target:
            raise DescriptorMismatch("derivation over a different target")
        coeffs = tuple(
            self.target.apply(w, self.images[name])
            for name in self.source.ctx.transcendentals
        )
        return PulledVector(self, coeffs)

    def compose(self, inner):
        """self after inner (inner: A -> B, self: B -> C)."""
        if inner.target != self.source:
            raise DescriptorMismatch("homomorphisms are not composable")
        images = {name: self.apply(value)
                  for name, value in inner.images.items()}
        return AlgebraifoldHom.build(inner.source, self.target, images)

    def __repr__(self):
        pairs = ", ".join(f"{k}->{v!r}" for k, v in sorted(self.images.items()))
        return f"AlgebraifoldHom({pairs})"


class PulledVector:
    """An element of the pulled-back derivation module.

    Coefficients are target scalars against the pushed-forward basis
    1 (x) u_1, ..., 1 (x) u_n of the source derivations.
    """

    __slots__ = ("hom", "coeffs")

    def __init__(self, hom, coeffs):
        if len(coeffs) != hom.source.n:
            raise DescriptorMismatch(
                f"expected {hom.source.n} coefficients, got {len(coeffs)}")
        self.hom = hom
        self.coeffs = tuple(coeffs)

    @property
    def is_zero(self):
        return all(c.is_zero for c in self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, PulledVector) and self.hom == other.hom
                and self.coeffs == other.coeffs)

    def __add__(self, other):
        return PulledVector(self.hom, tuple(
            a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __rmul__(self, scalar):
        scalar = self.hom.target.scalar(scalar)
        return PulledVector(self.hom, tuple(scalar * c for c in self.coeffs))

    __mul__ = __rmul__

    def pair_source_form(self, xi):
        """Pair with a pulled-back source one-form: (1 (x) xi)(self)."""
        total = self.hom.target.zero()
        for coeff, xi_coeff in zip(self.coeffs, xi.coeffs):
            if not coeff.is_zero and not xi_coeff.is_zero:
                total = total + coeff * self.hom.apply(xi_coeff)
        return total

    def __repr__(self):
        return f"PulledVector({self.coeffs!r})"


def pushforward_connection(hom, connection, w, section):
    """Transport a source connection along the homomorphism and apply it.

    For section = sum_j b_j (x) u_j and the source connection written as the
    standard part plus Gamma, the result has coefficients

        w(b_k) + sum_{i,j} w(phi(a_i)) b_j phi(Gamma^k_{ij}).
    """
    if connection.algebraifold != hom.source:
        raise DescriptorMismatch("connection over a different source")
    if section.hom is not hom and section.hom != hom:
        raise DescriptorMismatch("section pulled back along a different map")
    velocity = hom.differential(w)
    out = [hom.target.apply(w, b) for b in section.coeffs]
    for (k, i, j), gamma in connection.gamma.comp.items():
        term = velocity.coeffs[i - 1] * section.coeffs[j - 1]
        if not term.is_zero:
            out[k - 1] = out[k - 1] + term * hom.apply(gamma)
    return PulledVector(hom, tuple(out))


def geodesic_residual(line, hom, connection):
    """Covariant derivative of the curve's velocity along itself.

    All-zero exactly when the curve opposite to the homomorphism is a
    geodesic of the connection.
    """
    if hom.target != line.algebraifold:
        raise DescriptorMismatch("homomorphism does not land in the line")
    velocity = hom.differential(line.derivation)
    return pushforward_connection(hom, connection, line.derivation, velocity)


class FormalLine:
    """The line Q[t] (or Q(t) as a non-formal-line diagnostic variant).

    The polynomial line has a free rank-one derivation module with a
    surjective generator d/dt, so antiderivatives exist; the rational variant
    supports differentiation but deliberately not antiderivatives.
    """

    __slots__ = ("algebraifold", "derivation", "t", "is_formal_line")

    def __init__(self, algebraifold, is_formal_line):
        self.algebraifold = algebraifold
        self.is_formal_line = is_formal_line
        self.derivation = algebraifold.basis_derivation(1)
        self.t = algebraifold.ctx.var("t")

    @classmethod
    def polynomial(cls, constants=()):
        ctx = ScalarContext(POLYNOMIAL, ("t",), tuple(constants))
        return cls(Algebraifold.build(ctx), True)

    @classmethod
    def rational(cls, constants=()):
        ctx = ScalarContext(FIELD, ("t",), tuple(constants))
        return cls(Algebraifold.build(ctx), False)

    def scalar(self, value):
        return self.algebraifold.scalar(value)

    def antiderivative(self, a):
        """The antiderivative with constant term normalized to zero."""
        if not self.is_formal_line:
            raise NoAntiderivative(
                "the rational line is not a formal line: derivation is not"
                " surjective")
        a = self.algebraifold.scalar(a)
        ctx = self.algebraifold.ctx
        v = a.val
        if isinstance(v, MultiPoly):
            return Scalar.make(ctx, _integrate_poly(v, "t"))
        if isinstance(v, RatFunc):
            # polynomial contexts only admit constants-only denominators
            return Scalar.make(
                ctx, RatFunc.make(_integrate_poly(v.num, "t"), v.den))
        # base rational: integrate the constant
        return self.t * a

    def __repr__(self):
        kind = "Q[t]" if self.is_formal_line else "Q(t)"
        return f"FormalLine({kind})"


def _integrate_poly(poly, name):
    from fractions import Fraction

    idx = poly.vars.index(name)
    out = {}
    for exps, coeff in poly.terms.items():
        k = exps[idx]
        out[exps[:idx] + (k + 1,) + exps[idx + 1:]] = coeff * Fraction(1, k + 1)
    return MultiPoly(poly.vars, out)
