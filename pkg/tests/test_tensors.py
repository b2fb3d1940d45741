"""Tensor algebra, contraction, Lie derivatives, metrics, musical maps."""

import random

import pytest

from afd.errors import (
    ArityMismatch,
    Degenerate,
    NotInvertibleInAlgebra,
    NotSymmetric,
    SlotOutOfRange,
)
from afd.tensors import (
    Tensor,
    kronecker,
    lie_derivative,
    metric_inverse,
    musical_flat,
    musical_sharp,
)

from helpers import (
    elliptic_field,
    poly_ring,
    random_derivation,
    random_invertible_metric,
    random_poly_scalar,
)

P2 = poly_ring("x", "y")
X, Y = P2.ctx.var("x"), P2.ctx.var("y")

POLY_METRIC = Tensor.make(P2, 0, 2, {
    (1, 1): "1", (1, 2): "x", (2, 1): "x", (2, 2): "1 + x^2"})


class TestTensorProduct:
    def test_kronecker_squared(self):
        d = kronecker(P2)
        dd = d.tensor(d)
        assert dd.rank == (2, 2)
        for i in (1, 2):
            for j in (1, 2):
                for k in (1, 2):
                    for l in (1, 2):
                        expected = P2.one() if i == j and k == l else P2.zero()
                        assert dd.get((i, k, j, l)) == expected

    def test_scalar_factor(self):
        T = Tensor.make(P2, 1, 1, {(1, 2): X})
        scaled = Tensor.scalar_tensor(P2, 3).tensor(T)
        assert scaled.rank == (1, 1)
        assert scaled.get((1, 2)) == 3 * X

    def test_dx_tensor_dy(self):
        dx = Tensor.make(P2, 0, 1, {(1,): 1})
        dy = Tensor.make(P2, 0, 1, {(2,): 1})
        prod = dx.tensor(dy)
        assert prod.rank == (0, 2)
        assert prod.comp == {(1, 2): P2.one()}


class TestContract:
    def test_kronecker_trace_is_dimension(self):
        assert kronecker(P2).contract(1, 1).as_scalar() == P2.ctx.const(2)

    def test_kronecker_trace_across_instances(self):
        instances = [poly_ring(*[f"x{i}" for i in range(1, n + 1)])
                     for n in (1, 3, 4)] + [elliptic_field()]
        for A in instances:
            assert kronecker(A).contract(1, 1).as_scalar() == A.dimension()

    def test_form_against_derivation(self):
        dx = Tensor.make(P2, 0, 1, {(1,): 1})
        dy_dir = Tensor.make(P2, 1, 0, {(2,): 1})
        paired = dy_dir.tensor(dx).contract(1, 1)
        assert paired.as_scalar().is_zero

    def test_metric_against_inverse(self):
        m = metric_inverse(P2, POLY_METRIC)
        prod = m.g.tensor(m.g_inv)
        assert prod.contract(1, 1) == kronecker(P2)

    def test_slot_out_of_range(self):
        with pytest.raises(SlotOutOfRange):
            kronecker(P2).contract(2, 1)


class TestEvaluate:
    def test_metric_on_basis(self):
        m = metric_inverse(P2, POLY_METRIC)
        value = m.g.evaluate((), (P2.basis_derivation(1), P2.basis_derivation(2)))
        assert value == X

    def test_zero_derivation(self):
        m = metric_inverse(P2, POLY_METRIC)
        zero = P2.derivation(0, 0)
        assert m.g.evaluate((), (P2.basis_derivation(1), zero)).is_zero

    def test_kronecker_scaled_argument(self):
        value = kronecker(P2).evaluate(
            (P2.coordinate_form(2),), (X * P2.basis_derivation(2),))
        assert value == X

    def test_arity_mismatch(self):
        with pytest.raises(ArityMismatch):
            kronecker(P2).evaluate((), (P2.basis_derivation(1),))

    def test_linearity_in_each_slot(self):
        rng = random.Random(5)
        T = Tensor.make(P2, 1, 1, {
            (i, j): random_poly_scalar(rng, P2.ctx)
            for i in (1, 2) for j in (1, 2)})
        a = random_poly_scalar(rng, P2.ctx)
        xi = P2.one_form(*[random_poly_scalar(rng, P2.ctx) for _ in range(2)])
        v = random_derivation(rng, P2)
        assert T.evaluate((a * xi,), (v,)) == a * T.evaluate((xi,), (v,))
        assert T.evaluate((xi,), (a * v,)) == a * T.evaluate((xi,), (v,))


class TestLieDerivative:
    def test_translation_kills_dx(self):
        dx = Tensor.make(P2, 0, 1, {(1,): 1})
        assert lie_derivative(P2, P2.basis_derivation(1), dx).is_zero

    def test_scaling_field_on_dx(self):
        # oracle: (L_u xi)(v) = u(xi(v)) - xi([u, v]) evaluated on v = d/dx
        u = X * P2.basis_derivation(1)
        dx = Tensor.make(P2, 0, 1, {(1,): 1})
        result = lie_derivative(P2, u, dx)
        assert result.comp == {(1,): P2.one()}

    def test_kronecker_is_invariant(self):
        u = P2.derivation("x^2", "y")
        assert lie_derivative(P2, u, kronecker(P2)).is_zero

    def test_kronecker_invariant_randomized(self):
        rng = random.Random(23)
        for _ in range(10):
            u = random_derivation(rng, P2, max_deg=2)
            assert lie_derivative(P2, u, kronecker(P2)).is_zero

    def test_reduces_to_application_on_scalars(self):
        rng = random.Random(29)
        u = random_derivation(rng, P2)
        a = random_poly_scalar(rng, P2.ctx)
        result = lie_derivative(P2, u, Tensor.scalar_tensor(P2, a))
        assert result.as_scalar() == u(a)

    def test_reduces_to_bracket_on_derivations(self):
        rng = random.Random(31)
        u = random_derivation(rng, P2)
        v = random_derivation(rng, P2)
        as_tensor = Tensor.make(P2, 1, 0, {(1,): v.coeffs[0], (2,): v.coeffs[1]})
        result = lie_derivative(P2, u, as_tensor)
        bracket = P2.bracket(u, v)
        assert result.get((1,)) == bracket.coeffs[0]
        assert result.get((2,)) == bracket.coeffs[1]

    def test_leibniz_over_tensor_product(self):
        rng = random.Random(37)
        u = random_derivation(rng, P2)
        S = Tensor.make(P2, 0, 1, {(1,): random_poly_scalar(rng, P2.ctx),
                                   (2,): random_poly_scalar(rng, P2.ctx)})
        T = Tensor.make(P2, 1, 0, {(1,): random_poly_scalar(rng, P2.ctx),
                                   (2,): random_poly_scalar(rng, P2.ctx)})
        lhs = lie_derivative(P2, u, S.tensor(T))
        rhs = lie_derivative(P2, u, S).tensor(T) + S.tensor(lie_derivative(P2, u, T))
        assert lhs == rhs

    def test_commutes_with_contraction(self):
        rng = random.Random(41)
        for _ in range(6):
            u = random_derivation(rng, P2)
            T = Tensor.make(P2, 1, 1, {
                (i, j): random_poly_scalar(rng, P2.ctx)
                for i in (1, 2) for j in (1, 2)})
            lhs = lie_derivative(P2, u, T.contract(1, 1))
            rhs = lie_derivative(P2, u, T).contract(1, 1)
            assert lhs == rhs

    def test_k_linear_in_tensor(self):
        rng = random.Random(43)
        u = random_derivation(rng, P2)
        S = Tensor.make(P2, 0, 2, {(1, 1): random_poly_scalar(rng, P2.ctx)})
        T = Tensor.make(P2, 0, 2, {(2, 2): random_poly_scalar(rng, P2.ctx)})
        assert lie_derivative(P2, u, S + T) == \
            lie_derivative(P2, u, S) + lie_derivative(P2, u, T)


class TestMetricInverse:
    def test_worked_two_by_two(self):
        m = metric_inverse(P2, POLY_METRIC)
        assert m.inv_entry(1, 1) == 1 + X**2
        assert m.inv_entry(1, 2) == -X
        assert m.inv_entry(2, 1) == -X
        assert m.inv_entry(2, 2) == P2.one()

    def test_identity(self):
        g = Tensor.make(P2, 0, 2, {(1, 1): 1, (2, 2): 1})
        m = metric_inverse(P2, g)
        assert m.g_inv == Tensor.make(P2, 2, 0, {(1, 1): 1, (2, 2): 1})

    def test_not_invertible_in_polynomial_ring(self):
        A = poly_ring("x")
        g = Tensor.make(A, 0, 2, {(1, 1): "x"})
        with pytest.raises(NotInvertibleInAlgebra):
            metric_inverse(A, g)

    def test_field_context_inverts_nonconstant(self):
        E = elliptic_field()
        g = Tensor.make(E, 0, 2, {(1, 1): "x"})
        m = metric_inverse(E, g)
        assert m.inv_entry(1, 1) == E.one() / E.ctx.var("x")

    def test_degenerate(self):
        g = Tensor.make(P2, 0, 2, {(1, 1): 1, (1, 2): 1, (2, 1): 1, (2, 2): 1})
        with pytest.raises(Degenerate):
            metric_inverse(P2, g)

    def test_not_symmetric(self):
        g = Tensor.make(P2, 0, 2, {(1, 2): X, (2, 1): Y})
        with pytest.raises(NotSymmetric):
            metric_inverse(P2, g)

    def test_double_inverse_randomized(self):
        rng = random.Random(47)
        for _ in range(5):
            g = random_invertible_metric(rng, P2)
            m = metric_inverse(P2, g)
            # invert the inverse: swap roles by viewing g_inv as a metric
            back = metric_inverse(P2, Tensor.make(P2, 0, 2, dict(m.g_inv.comp)))
            assert back.g_inv.comp == g.comp


class TestMusical:
    def test_flat_identity_metric(self):
        g = Tensor.make(P2, 0, 2, {(1, 1): 1, (2, 2): 1})
        m = metric_inverse(P2, g)
        assert musical_flat(m, P2.basis_derivation(1)) == P2.coordinate_form(1)

    def test_flat_worked_metric(self):
        # oracle: contract g against d/dx by hand: (g_11, g_21) = (1, x)
        m = metric_inverse(P2, POLY_METRIC)
        flat = musical_flat(m, P2.basis_derivation(1))
        assert flat == P2.one_form(1, "x")

    def test_sharp_inverts_flat(self):
        m = metric_inverse(P2, POLY_METRIC)
        v = P2.basis_derivation(2)
        assert musical_sharp(m, musical_flat(m, v)) == v

    def test_sharp_flat_random(self):
        rng = random.Random(53)
        m = metric_inverse(P2, POLY_METRIC)
        for _ in range(5):
            v = random_derivation(rng, P2)
            assert musical_sharp(m, musical_flat(m, v)) == v
