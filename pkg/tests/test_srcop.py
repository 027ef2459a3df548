import itertools

import numpy as np
import pytest

from belgauge.errors import DimensionCapError, IndexOutOfRangeError, ShapeMismatchError
from belgauge.numlin import BipartiteShape, reduce_to_slots
from belgauge.srcop import (
    SourceOperator,
    build_source_operator,
    dilated_side,
    polarization_block,
    source_trace_norm_bound,
    verify_dilation,
)
from belgauge.states import maximally_entangled, pure_to_density, random_pure_state, schmidt_decompose


def _bell_spec():
    return schmidt_decompose(maximally_entangled(2))


class TestPolarization:
    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_single_setting_is_outer_product(self, d):
        e = np.eye(d, dtype=complex)
        for k, k1 in itertools.product(range(d), repeat=2):
            w = polarization_block(e, k, k1, 1)
            np.testing.assert_allclose(w, np.outer(e[:, k], e[:, k1]), atol=1e-12)

    def test_two_settings_brute_force(self):
        e = np.eye(3, dtype=complex)
        vecs = [e[:, 0] + e[:, 1], e[:, 0] - e[:, 1], e[:, 0] + 1j * e[:, 1], e[:, 0] - 1j * e[:, 1]]
        coeffs = [1, -1, 1j, -1j]
        expected = sum(c / 8 * np.kron(np.outer(v, v.conj()), np.outer(v, v.conj())) for c, v in zip(coeffs, vecs))
        np.testing.assert_allclose(polarization_block(e, 0, 1, 2), expected, atol=1e-15)

    @pytest.mark.parametrize("s", [2, 3])
    def test_marginal_of_block(self, s):
        basis = random_pure_state(BipartiteShape(3, 3), 5)
        u = schmidt_decompose(basis).left_basis
        w = polarization_block(u, 0, 2, s)
        for slot in range(s):
            red = reduce_to_slots(w, [3] * s, (slot,))
            np.testing.assert_allclose(red, np.outer(u[:, 0], u[:, 2].conj()), atol=1e-12)

    def test_index_out_of_range(self):
        with pytest.raises(IndexOutOfRangeError):
            polarization_block(np.eye(2), 0, 2, 1)


class TestBuild:
    @pytest.mark.parametrize("side", ["left", "right"])
    def test_single_setting_is_state(self, side):
        psi = random_pure_state(BipartiteShape(2, 3), 1)
        t = build_source_operator(schmidt_decompose(psi), side, 1)
        np.testing.assert_allclose(t.matrix, pure_to_density(psi).matrix, atol=1e-14)

    def test_product_state_is_positive(self, product):
        t = build_source_operator(schmidt_decompose(product), "right", 3)
        assert t.eigenvalues()[-1] >= -1e-14
        assert t.trace == pytest.approx(1.0)
        assert t.trace_norm() == pytest.approx(1.0)

    def test_bell_trace_norm(self):
        spec = _bell_spec()
        t = build_source_operator(spec, "right", 2)
        assert source_trace_norm_bound(spec) == pytest.approx(3.0)
        assert t.trace_norm() <= 3.0 + 1e-12
        assert t.side == 8

    def test_dimensions(self):
        assert dilated_side(BipartiteShape(3, 2), "left", 3) == 54
        assert dilated_side(BipartiteShape(3, 2), "right", 3) == 24

    def test_cap(self):
        spec = schmidt_decompose(random_pure_state(BipartiteShape(4, 4), 0))
        with pytest.raises(DimensionCapError):
            build_source_operator(spec, "right", 6)


class TestVerify:
    @pytest.mark.parametrize("side,s", [("left", 2), ("right", 2), ("right", 3), ("left", 3)])
    def test_identity_holds(self, side, s):
        psi = random_pure_state(BipartiteShape(2, 3), 42)
        spec = schmidt_decompose(psi)
        t = build_source_operator(spec, side, s)
        rep = verify_dilation(t, pure_to_density(psi), trials=30, seed=3, bound=source_trace_norm_bound(spec))
        assert rep.passed
        assert rep.max_residual <= 1e-10 * rep.scale
        assert rep.trace_norm <= rep.bound_eq26 + 1e-9

    def test_corrupted_operator_fails(self):
        psi = random_pure_state(BipartiteShape(2, 2), 4)
        t = build_source_operator(schmidt_decompose(psi), "right", 2)
        bad = t.matrix.copy()
        bad[0, 0] += 0.01
        rep = verify_dilation(SourceOperator(bad, t.s1, t.s2, t.shape), pure_to_density(psi), trials=20)
        assert not rep.passed
        assert rep.max_residual > 1e-6

    def test_thread_count_does_not_change_report(self, monkeypatch):
        psi = random_pure_state(BipartiteShape(3, 3), 9)
        t = build_source_operator(schmidt_decompose(psi), "left", 2)
        rho = pure_to_density(psi)
        monkeypatch.setenv("BELGAUGE_THREADS", "1")
        serial = verify_dilation(t, rho, trials=25, seed=5)
        monkeypatch.setenv("BELGAUGE_THREADS", "4")
        threaded = verify_dilation(t, rho, trials=25, seed=5)
        assert serial == threaded

    def test_shape_mismatch(self):
        t = build_source_operator(_bell_spec(), "right", 2)
        with pytest.raises(ShapeMismatchError):
            verify_dilation(t, pure_to_density(random_pure_state(BipartiteShape(2, 3), 0)))
