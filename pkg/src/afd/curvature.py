"""Connections, torsion, curvature, Levi-Civita, Ricci and field equations.

A connection is stored as its difference from the standard componentwise
connection: a rank-(1, 2) tensor Gamma with components Gamma^k_{ij}, where k
is the contravariant slot, i the direction slot and j the argument slot.
The standard connection has Gamma = 0 and differentiates coefficient vectors
componentwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebraifold import Derivation
from .errors import DescriptorMismatch, NonConstantCoupling
from .tensors import Tensor


class Connection:
    """A connection given by its Christoffel difference tensor."""

    __slots__ = ("algebraifold", "gamma")

    def __init__(self, algebraifold, gamma):
        if gamma.rank != (1, 2):
            raise DescriptorMismatch("connection coefficients must be rank (1, 2)")
        if gamma.algebraifold != algebraifold:
            raise DescriptorMismatch("gamma over a different algebraifold")
        self.algebraifold = algebraifold
        self.gamma = gamma

    @classmethod
    def standard(cls, algebraifold):
        """The componentwise-derivative connection (Gamma = 0)."""
        return cls(algebraifold, Tensor.zero(algebraifold, 1, 2))

    def coeff(self, k, i, j):
        return self.gamma.get((k, i, j))

    def apply(self, u, v):
        """Covariant derivative of a derivation along a derivation."""
        A = self.algebraifold
        if u.algebraifold != A or v.algebraifold != A:
            raise DescriptorMismatch("derivations over a different algebraifold")
        coeffs = [A.apply(u, v.coeffs[k]) for k in range(A.n)]
        for (k, i, j), gamma in self.gamma.comp.items():
            term = gamma * u.coeffs[i - 1] * v.coeffs[j - 1]
            if not term.is_zero:
                coeffs[k - 1] = coeffs[k - 1] + term
        return Derivation(A, tuple(coeffs))

    def __eq__(self, other):
        return (isinstance(other, Connection)
                and self.algebraifold == other.algebraifold
                and self.gamma == other.gamma)

    def __repr__(self):
        return f"Connection(nnz={len(self.gamma.comp)})"


def standard_connection(algebraifold):
    return Connection.standard(algebraifold)


def covariant_derivative(connection, u, T):
    """Covariant derivative of a tensor along a derivation.

    The componentwise u-derivative plus one Gamma correction per slot: +Gamma
    on contravariant slots, -Gamma on covariant slots.
    """
    A = connection.algebraifold
    if u.algebraifold != A or T.algebraifold != A:
        raise DescriptorMismatch("inputs over a different algebraifold")
    n = A.n
    # G[k][j] = sum_i u^i Gamma^k_{ij}
    G = [[A.zero() for _ in range(n)] for _ in range(n)]
    for (k, i, j), gamma in connection.gamma.comp.items():
        if not u.coeffs[i - 1].is_zero:
            G[k - 1][j - 1] = G[k - 1][j - 1] + u.coeffs[i - 1] * gamma
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
        bump(idx, A.apply(u, c))
        for pos in range(T.r):
            m = idx[pos]
            for k in range(1, n + 1):
                coeff = G[k - 1][m - 1]
                if not coeff.is_zero:
                    bump(idx[:pos] + (k,) + idx[pos + 1:], coeff * c)
        for pos in range(T.r, T.r + T.s):
            m = idx[pos]
            for j in range(1, n + 1):
                coeff = G[m - 1][j - 1]
                if not coeff.is_zero:
                    bump(idx[:pos] + (j,) + idx[pos + 1:], -(coeff * c))
    return Tensor(A, T.r, T.s, out)


def torsion(connection):
    """T(u, v) = nabla_u v - nabla_v u - [u, v]; antisymmetrized Gamma here."""
    A = connection.algebraifold
    out = {}
    for (k, i, j), gamma in connection.gamma.comp.items():
        for idx, sign in (((k, i, j), 1), ((k, j, i), -1)):
            value = gamma if sign > 0 else -gamma
            total = out.get(idx)
            total = value if total is None else total + value
            if total.is_zero:
                out.pop(idx, None)
            else:
                out[idx] = total
    return Tensor(A, 1, 2, out)


def curvature_tensor(connection):
    """R(u, v)w on the coordinate basis, as a rank-(1, 3) tensor.

    Components indexed (l; i, j, k): the coefficient of u_l in R(u_i, u_j)u_k.
    """
    A = connection.algebraifold
    n = A.n
    names = A.ctx.transcendentals
    gamma = connection.gamma
    out = {}
    for l in range(1, n + 1):
        for k in range(1, n + 1):
            for i in range(1, n + 1):
                for j in range(1, i):
                    # antisymmetric in (i, j); fill both orders from one value
                    value = gamma.get((l, j, k)).partial(names[i - 1]) \
                        - gamma.get((l, i, k)).partial(names[j - 1])
                    for m in range(1, n + 1):
                        g_jk = gamma.get((m, j, k))
                        if not g_jk.is_zero:
                            value = value + gamma.get((l, i, m)) * g_jk
                        g_ik = gamma.get((m, i, k))
                        if not g_ik.is_zero:
                            value = value - gamma.get((l, j, m)) * g_ik
                    if not value.is_zero:
                        out[(l, i, j, k)] = value
                        out[(l, j, i, k)] = -value
    return Tensor(A, 1, 3, out)


def levi_civita(algebraifold, metric):
    """Christoffel symbols of the unique torsion-free metric connection.

    Gamma^k_{ij} = (1/2) g^{kl} (d_j g_{il} + d_i g_{jl} - d_l g_{ij}).
    """
    A = algebraifold
    n = A.n
    names = A.ctx.transcendentals
    half = A.scalar(Fraction(1, 2))
    # c[(i, j, l)] = (1/2)(d_j g_{il} + d_i g_{jl} - d_l g_{ij}), symmetric in i, j
    lowered = {}
    for i in range(1, n + 1):
        for j in range(1, i + 1):
            for l in range(1, n + 1):
                value = metric.entry(i, l).partial(names[j - 1]) \
                    + metric.entry(j, l).partial(names[i - 1]) \
                    - metric.entry(i, j).partial(names[l - 1])
                if not value.is_zero:
                    lowered[(i, j, l)] = half * value
    comp = {}
    for k in range(1, n + 1):
        for i in range(1, n + 1):
            for j in range(1, i + 1):
                total = A.zero()
                for l in range(1, n + 1):
                    ginv = metric.inv_entry(k, l)
                    c = lowered.get((i, j, l))
                    if c is not None and not ginv.is_zero:
                        total = total + ginv * c
                if not total.is_zero:
                    comp[(k, i, j)] = total
                    if i != j:
                        comp[(k, j, i)] = total
    return Connection(A, Tensor(A, 1, 2, comp))


def koszul_rhs(algebraifold, metric, u, v, w):
    """The six-term right side defining 2 g(nabla_u v, w), halved.

    Valid for arbitrary derivations; the three bracket terms vanish on the
    coordinate basis but not in general.
    """
    A = algebraifold
    g = metric.pair
    value = A.apply(u, g(v, w)) + A.apply(v, g(w, u)) - A.apply(w, g(u, v)) \
        + g(A.bracket(u, v), w) - g(A.bracket(v, w), u) + g(A.bracket(w, u), v)
    return A.scalar(Fraction(1, 2)) * value


def ricci(algebraifold, riemann):
    """Contraction of the curvature: Ric(v, w) = sum_i (R(u_i, v)w)(a_i)."""
    out = {}
    for (l, i, j, k), value in riemann.comp.items():
        if l != i:
            continue
        idx = (j, k)
        total = out.get(idx)
        total = value if total is None else total + value
        if total.is_zero:
            out.pop(idx, None)
        else:
            out[idx] = total
    return Tensor(algebraifold, 0, 2, out)


def ricci_scalar(algebraifold, metric, ric):
    """Full contraction of the Ricci tensor with the inverse metric."""
    total = algebraifold.zero()
    for (i, j), value in ric.comp.items():
        ginv = metric.inv_entry(i, j)
        if not ginv.is_zero:
            total = total + ginv * value
    return total


def einstein_tensor(algebraifold, metric):
    """Ric - (1/2) S g for the Levi-Civita connection of the metric."""
    connection = levi_civita(algebraifold, metric)
    riemann = curvature_tensor(connection)
    ric = ricci(algebraifold, riemann)
    scalar = ricci_scalar(algebraifold, metric, ric)
    return ric - metric.g.scale(algebraifold.scalar(Fraction(1, 2)) * scalar)


def efe_residual(algebraifold, metric, lam, kappa, stress_energy=None):
    """Residual of Ric - (1/2) S g + Lambda g - kappa T.

    Both couplings must lie in the constants; the residual vanishes exactly
    when the metric and stress-energy satisfy the field equations.
    """
    A = algebraifold
    lam = A.scalar(lam)
    kappa = A.scalar(kappa)
    for name, value in (("lambda", lam), ("kappa", kappa)):
        if not A.is_constant(value):
            raise NonConstantCoupling(f"{name} is not a constant")
    if kappa.is_zero:
        raise NonConstantCoupling("kappa must be nonzero")
    residual = einstein_tensor(A, metric) + metric.g.scale(lam)
    if stress_energy is not None:
        if stress_energy.rank != (0, 2):
            raise DescriptorMismatch("stress-energy must be rank (0, 2)")
        residual = residual - stress_energy.scale(kappa)
    return residual


@dataclass(frozen=True)
class CurvatureReport:
    """Riemann, Ricci, scalar curvature and Einstein tensor of one metric."""

    riemann: Tensor
    ricci: Tensor
    scalar: object
    einstein: Tensor


def curvature_report(algebraifold, metric):
    connection = levi_civita(algebraifold, metric)
    riemann = curvature_tensor(connection)
    ric = ricci(algebraifold, riemann)
    scalar = ricci_scalar(algebraifold, metric, ric)
    einstein = ric - metric.g.scale(
        algebraifold.scalar(Fraction(1, 2)) * scalar)
    return CurvatureReport(riemann, ric, scalar, einstein)
