"""Forward semantics and gradients of the primitive catalog."""

import numpy as np
import pytest

from clinli.autodiff import Tape, Tensor, grad_check, ops, parameter
from clinli.errors import ShapeError


def finite_diff(f, x: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Central-difference gradient of scalar f at x (independent oracle)."""
    grad = np.zeros_like(x)
    flat = x.reshape(-1)
    out = grad.reshape(-1)
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + h
        fp = f()
        flat[i] = orig - h
        fm = f()
        flat[i] = orig
        out[i] = (fp - fm) / (2 * h)
    return grad


def scalar_loss(tensor: Tensor) -> Tensor:
    weights = ops.const(np.linspace(0.3, 1.1, tensor.size).reshape(tensor.shape))
    return ops.cross_entropy(
        ops.reshape(ops.mul(tensor, weights), (1, tensor.size)), np.array([tensor.size // 2])
    )


class TestForwardExamples:
    def test_softmax_symmetry(self):
        out = ops.softmax(Tensor([[0.0, 0.0, 0.0]]))
        np.testing.assert_allclose(out.data, [[1 / 3, 1 / 3, 1 / 3]])

    def test_relu_definition(self):
        out = ops.relu(Tensor([-2.0, 0.0, 3.0]))
        np.testing.assert_array_equal(out.data, [0.0, 0.0, 3.0])

    def test_matmul_identity_bit_exact(self):
        rng = np.random.default_rng(0)
        a = rng.normal(size=(4, 4))
        out = ops.matmul(Tensor(a), Tensor(np.eye(4)))
        assert np.array_equal(out.data, a)

    def test_masked_softmax_forces_mass_on_valid(self):
        out = ops.softmax(Tensor([[1.0, 1.0]]), mask=np.array([[True, False]]))
        np.testing.assert_array_equal(out.data, [[1.0, 0.0]])

    def test_masked_softmax_rows_sum_to_one(self):
        rng = np.random.default_rng(3)
        x = Tensor(rng.normal(size=(5, 7)))
        mask = rng.random((5, 7)) > 0.4
        mask[:, 0] = True
        out = ops.softmax(x, mask=mask)
        np.testing.assert_allclose(out.data.sum(axis=1), 1.0, atol=1e-9)
        assert np.array_equal(out.data[~mask], np.zeros((~mask).sum()))

    def test_softmax_all_masked_row_is_zero(self):
        out = ops.softmax(Tensor([[1.0, 2.0], [3.0, 4.0]]), mask=np.array([[True, True], [False, False]]))
        np.testing.assert_array_equal(out.data[1], [0.0, 0.0])

    def test_sigmoid_extreme_inputs_finite(self):
        out = ops.sigmoid(Tensor([-1000.0, 0.0, 1000.0]))
        assert np.all(np.isfinite(out.data))
        np.testing.assert_allclose(out.data, [0.0, 0.5, 1.0], atol=1e-12)

    def test_abs_and_mul(self):
        out = ops.absolute(ops.sub(Tensor([1.0, -4.0]), Tensor([3.0, -1.0])))
        np.testing.assert_array_equal(out.data, [2.0, 3.0])

    def test_concat_and_split_roundtrip(self):
        rng = np.random.default_rng(1)
        a, b = Tensor(rng.normal(size=(2, 3))), Tensor(rng.normal(size=(2, 5)))
        cat = ops.concat([a, b], axis=-1)
        assert cat.shape == (2, 8)
        parts = ops.split_cols(cat, 4)
        assert all(p.shape == (2, 2) for p in parts)

    def test_shape_error_names_primitive_and_shapes(self):
        with pytest.raises(ShapeError) as err:
            ops.matmul(Tensor(np.ones((2, 3))), Tensor(np.ones((4, 2))))
        assert "matmul" in str(err.value)
        assert "(2, 3)" in str(err.value) and "(4, 2)" in str(err.value)

    def test_embedding_lookup_rows(self):
        table = Tensor(np.arange(12.0).reshape(4, 3))
        out = ops.embedding(table, np.array([[0, 2], [3, 3]]))
        np.testing.assert_array_equal(out.data[0, 1], [6.0, 7.0, 8.0])
        np.testing.assert_array_equal(out.data[1, 0], out.data[1, 1])

    def test_cross_entropy_uniform_logits(self):
        loss = ops.cross_entropy(Tensor(np.zeros((2, 3))), np.array([0, 2]))
        np.testing.assert_allclose(loss.item(), np.log(3.0))

    def test_dropout_deterministic_and_identity_at_zero(self):
        x = Tensor(np.ones((4, 4)))
        a = ops.dropout(x, 0.5, seed=9)
        b = ops.dropout(x, 0.5, seed=9)
        assert np.array_equal(a.data, b.data)
        assert ops.dropout(x, 0.0, seed=9) is x


class TestPooling:
    def test_max_pool_selects_valid_max(self):
        x = Tensor(np.array([[[1.0], [5.0], [9.0]]]))
        mask = np.array([[True, True, False]])
        out = ops.max_pool_time(x, mask)
        assert out.data[0, 0] == 5.0

    def test_mean_pool_counts_valid_only(self):
        x = Tensor(np.array([[[2.0], [4.0], [100.0]]]))
        mask = np.array([[True, True, False]])
        out = ops.mean_pool_time(x, mask)
        assert out.data[0, 0] == 3.0

    @pytest.mark.parametrize("pool", [ops.max_pool_time, ops.mean_pool_time, ops.sum_pool_time])
    def test_pooling_invariant_to_trailing_padding(self, pool):
        rng = np.random.default_rng(5)
        x = rng.normal(size=(2, 4, 3))
        mask = np.array([[1, 1, 1, 0], [1, 1, 0, 0]], dtype=bool)
        padded = np.concatenate([x, rng.normal(size=(2, 3, 3))], axis=1)
        padded_mask = np.concatenate([mask, np.zeros((2, 3), dtype=bool)], axis=1)
        base = pool(Tensor(x), mask)
        more = pool(Tensor(padded), padded_mask)
        np.testing.assert_allclose(base.data, more.data, atol=1e-9)

    def test_fully_masked_row_raises(self):
        with pytest.raises(ShapeError):
            ops.max_pool_time(Tensor(np.ones((1, 2, 2))), np.zeros((1, 2), dtype=bool))


class TestPrimitiveGradients:
    """Analytic gradients vs the in-test central-difference oracle."""

    def test_catalog_gradients_randomized(self):
        rng = np.random.default_rng(11)
        cases = {
            "relu": lambda t: ops.relu(t),
            "tanh": lambda t: ops.tanh(t),
            "sigmoid": lambda t: ops.sigmoid(t),
            "abs": lambda t: ops.absolute(t),
            "softmax": lambda t: ops.softmax(t),
            "transpose": lambda t: ops.transpose_last2(t),
        }
        for name, op in cases.items():
            for trial in range(5):
                x = parameter(rng.normal(size=(3, 4)) + 0.05, f"x-{name}-{trial}")

                def closure(op=op, x=x):
                    return scalar_loss(op(x))

                report = grad_check(closure, {"x": x}, h=1e-6)
                assert report.passed, f"{name} trial {trial}: {report.summary()}"

    def test_binary_op_gradients_with_broadcasting(self):
        rng = np.random.default_rng(13)
        for op in (ops.add, ops.sub, ops.mul):
            a = parameter(rng.normal(size=(3, 4)), "a")
            b = parameter(rng.normal(size=(4,)), "b")

            def closure(op=op, a=a, b=b):
                return scalar_loss(op(a, b))

            report = grad_check(closure, {"a": a, "b": b}, h=1e-6)
            assert report.passed, report.summary()

    def test_matmul_gradients_2d_3d(self):
        rng = np.random.default_rng(17)
        shapes = [((3, 4), (4, 2)), ((2, 3, 4), (4, 2)), ((2, 3, 4), (2, 4, 2))]
        for sa, sb in shapes:
            a = parameter(rng.normal(size=sa), "a")
            b = parameter(rng.normal(size=sb), "b")

            def closure(a=a, b=b):
                return scalar_loss(ops.matmul(a, b))

            report = grad_check(closure, {"a": a, "b": b}, h=1e-6)
            assert report.passed, f"{sa}@{sb}: {report.summary()}"

    def test_pooling_and_embedding_gradients(self):
        rng = np.random.default_rng(19)
        mask = np.array([[1, 1, 1, 0], [1, 1, 0, 0]], dtype=bool)
        for pool in (ops.max_pool_time, ops.mean_pool_time, ops.sum_pool_time):
            x = parameter(rng.normal(size=(2, 4, 3)), "x")

            def closure(pool=pool, x=x):
                return scalar_loss(pool(x, mask))

            report = grad_check(closure, {"x": x}, h=1e-6)
            assert report.passed, report.summary()

        table = parameter(rng.normal(size=(5, 3)), "table")
        ids = np.array([[0, 2, 2], [4, 1, 0]])

        def emb_closure():
            return scalar_loss(ops.embedding(table, ids))

        report = grad_check(emb_closure, {"table": table}, h=1e-6)
        assert report.passed, report.summary()

    def test_cross_entropy_gradient_matches_oracle(self):
        rng = np.random.default_rng(23)
        logits = parameter(rng.normal(size=(4, 3)), "logits")
        labels = np.array([0, 1, 2, 1])
        with Tape() as tape:
            loss = ops.cross_entropy(logits, labels)
        tape.backward(loss)
        numeric = finite_diff(
            lambda: ops.cross_entropy(Tensor(logits.data), labels).item().__float__(), logits.data
        )
        np.testing.assert_allclose(logits.grad, numeric, atol=1e-8)
