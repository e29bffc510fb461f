import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import twoatom as ta
from twoatom.errors import (
    NotAProbabilityVector,
    NotHermitian,
    NotNormalized,
    NotPSD,
    OutOfRange,
    TraceNotOne,
)

SINGLET = np.zeros((4, 4), dtype=complex)
SINGLET[1, 1] = SINGLET[2, 2] = 0.5
SINGLET[1, 2] = SINGLET[2, 1] = -0.5


def seeded_density(seed):
    return ta.random_density(np.random.default_rng(seed))


class TestMakeDensity:
    def test_maximally_mixed(self):
        rho = ta.make_density(np.eye(4) / 4)
        assert np.array_equal(rho.matrix, np.eye(4, dtype=complex) / 4)

    def test_pure_excited(self):
        rho = ta.make_density(np.diag([1.0, 0.0, 0.0, 0.0]))
        assert rho.matrix[0, 0] == 1.0

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(NotPSD) as exc_info:
            ta.make_density(np.diag([0.5, 0.6, -0.1, 0.0]))
        assert exc_info.value.min_eigenvalue == pytest.approx(-0.1)

    def test_rejects_non_hermitian(self):
        m = np.diag([0.25, 0.25, 0.25, 0.25]).astype(complex)
        m[0, 1] = 0.2
        with pytest.raises(NotHermitian) as exc_info:
            ta.make_density(m)
        assert exc_info.value.residual == pytest.approx(0.2)

    def test_rejects_bad_trace(self):
        with pytest.raises(TraceNotOne):
            ta.make_density(np.eye(4) / 2)

    def test_matrix_is_immutable(self):
        rho = ta.make_density(np.eye(4) / 4)
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 0.3


class TestQubit:
    def test_norm_enforced(self):
        with pytest.raises(NotNormalized):
            ta.Qubit(c0=1.0, c1=1.0)

    def test_global_phase_kept(self):
        q = ta.Qubit(c0=0.0, c1=1j)
        assert q.c1 == 1j

    def test_vector_ordering(self):
        ground = ta.Qubit(c0=1.0, c1=0.0)
        assert np.array_equal(ground.vector(), np.array([0.0, 1.0], dtype=complex))


class TestCollectiveTransform:
    def test_singlet_maps_to_pure_aa(self):
        c = ta.to_collective(ta.make_density(SINGLET))
        assert c.aa == pytest.approx(1.0, abs=1e-15)
        assert (c.ee, c.ss, c.gg) == pytest.approx((0.0, 0.0, 0.0), abs=1e-15)
        for coh in (c.eg, c.as_, c.ae, c.ag, c.se, c.sg):
            assert abs(coh) <= 1e-15

    def test_f2_projector_splits_between_s_and_a(self):
        # f2 = (s + a)/sqrt(2), worked out by expanding the outer product
        rho = ta.product_state(ta.Qubit(0.0, 1.0), ta.Qubit(1.0, 0.0))
        c = ta.to_collective(rho)
        assert c.ss == pytest.approx(0.5, abs=1e-15)
        assert c.aa == pytest.approx(0.5, abs=1e-15)
        assert abs(c.as_) == pytest.approx(0.5, abs=1e-15)

    def test_maximally_mixed(self):
        c = ta.to_collective(ta.make_density(np.eye(4) / 4))
        assert (c.ee, c.ss, c.aa, c.gg) == pytest.approx((0.25,) * 4, abs=1e-15)

    def test_round_trip_on_1000_random_states(self, rng):
        worst = 0.0
        for _ in range(1000):
            rho = ta.random_density(rng)
            back = ta.from_collective(ta.to_collective(rho))
            worst = max(worst, float(np.abs(back.matrix - rho.matrix).max()))
        assert worst <= 1e-12

    @given(seed=st.integers(0, 2**32 - 1))
    def test_round_trip_property(self, seed):
        rho = seeded_density(seed)
        c = ta.to_collective(rho)
        back = ta.from_collective(c)
        assert np.abs(back.matrix - rho.matrix).max() <= 1e-12
        c2 = ta.to_collective(back)
        for name in ("ee", "ss", "aa", "gg", "eg", "as_", "ae", "ag", "se", "sg"):
            assert abs(getattr(c, name) - getattr(c2, name)) <= 1e-12


class TestProductState:
    def test_both_ground(self):
        rho = ta.product_state(ta.Qubit(1.0, 0.0), ta.Qubit(1.0, 0.0))
        assert np.allclose(rho.matrix, np.diag([0.0, 0.0, 0.0, 1.0]))

    def test_excited_ground(self):
        rho = ta.product_state(ta.Qubit(0.0, 1.0), ta.Qubit(1.0, 0.0))
        assert np.allclose(rho.matrix, np.diag([0.0, 1.0, 0.0, 0.0]))

    def test_superposition_times_ground(self):
        # ((|0>+|1>)/sqrt2) (x) |0> populates f2 and f4 with full coherence
        s = 1.0 / np.sqrt(2.0)
        rho = ta.product_state(ta.Qubit(s, s), ta.Qubit(1.0, 0.0))
        m = rho.matrix
        assert m[1, 1] == pytest.approx(0.5)
        assert m[3, 3] == pytest.approx(0.5)
        assert m[1, 3] == pytest.approx(0.5)
        assert m[3, 1] == pytest.approx(0.5)


class TestMaxEntangled:
    def test_singlet_limit(self):
        rho = ta.max_entangled(0.0, 0.0, np.pi)
        assert np.abs(rho.matrix - SINGLET).max() <= 1e-15
        assert ta.fidelity_singlet(rho) == pytest.approx(1.0, abs=1e-12)

    def test_a_one_is_corner_state(self):
        rho = ta.max_entangled(1.0, 0.3, 1.1)
        m = rho.matrix
        assert m[0, 0] == pytest.approx(0.5)
        assert m[3, 3] == pytest.approx(0.5)
        assert m[1, 1] == pytest.approx(0.0, abs=1e-15)
        assert ta.fidelity_singlet(rho) == pytest.approx(0.0, abs=1e-12)

    def test_equal_phases_have_zero_fidelity(self):
        rho = ta.max_entangled(1.0 / np.sqrt(2.0), 0.7, 0.7)
        assert ta.fidelity_singlet(rho) == pytest.approx(0.0, abs=1e-12)

    def test_rejects_out_of_range(self):
        with pytest.raises(OutOfRange):
            ta.max_entangled(1.2, 0.0, 0.0)
        with pytest.raises(OutOfRange):
            ta.max_entangled(0.5, -0.1, 0.0)
        with pytest.raises(OutOfRange):
            ta.max_entangled(0.5, 0.0, 7.0)

    def test_concurrence_one_on_parameter_grid(self):
        worst = 1.0
        for a in np.linspace(0.0, 1.0, 20):
            for t1 in np.linspace(0.0, 2.0 * np.pi, 20):
                for t2 in np.linspace(0.0, 2.0 * np.pi, 20):
                    worst = min(worst, ta.concurrence(ta.max_entangled(a, t1, t2)))
        assert worst >= 1.0 - 1e-9


class TestWernerState:
    def test_p_zero_is_maximally_mixed(self):
        rho = ta.werner_state(0.0, "s")
        assert np.allclose(rho.matrix, np.eye(4) / 4)

    def test_p_one_is_anchor_projector(self):
        rho = ta.werner_state(1.0, "a")
        assert np.abs(rho.matrix - SINGLET).max() <= 1e-15

    def test_fidelity_at_one_third(self):
        rho = ta.werner_state(1.0 / 3.0, "a")
        assert ta.fidelity_singlet(rho) == pytest.approx(0.5, abs=1e-15)

    def test_rejects_bad_arguments(self):
        with pytest.raises(OutOfRange):
            ta.werner_state(1.5, "a")
        with pytest.raises(OutOfRange):
            ta.werner_state(0.5, "b")

    @given(p=st.floats(0.0, 1.0))
    def test_anchor_fidelities(self, p):
        assert ta.fidelity_singlet(ta.werner_state(p, "a")) == pytest.approx(
            (1.0 + 3.0 * p) / 4.0, abs=1e-14
        )
        for anchor in ("s", "plus", "minus"):
            assert ta.fidelity_singlet(ta.werner_state(p, anchor)) == pytest.approx(
                (1.0 - p) / 4.0, abs=1e-14
            )


class TestBellDiagonal:
    def test_uniform_is_maximally_mixed(self):
        rho = ta.bell_diagonal(0.25, 0.25, 0.25, 0.25)
        assert np.allclose(rho.matrix, np.eye(4) / 4)

    def test_pure_singlet_component(self):
        rho = ta.bell_diagonal(0.0, 0.0, 0.0, 1.0)
        assert np.abs(rho.matrix - SINGLET).max() <= 1e-15

    def test_dominant_singlet_weight(self):
        rho = ta.bell_diagonal(0.1, 0.1, 0.1, 0.7)
        assert ta.fidelity_singlet(rho) == pytest.approx(0.7, abs=1e-15)
        assert ta.concurrence(rho) == pytest.approx(0.4, abs=1e-12)

    def test_rejects_non_probability(self):
        with pytest.raises(NotAProbabilityVector):
            ta.bell_diagonal(0.5, 0.5, 0.5, -0.5)
        with pytest.raises(NotAProbabilityVector):
            ta.bell_diagonal(0.3, 0.3, 0.3, 0.3)

    @given(
        weights=st.lists(st.floats(1e-3, 1.0), min_size=4, max_size=4),
    )
    def test_fidelity_is_singlet_weight(self, weights):
        p = np.array(weights) / sum(weights)
        assert abs(ta.fidelity_singlet(ta.bell_diagonal(*p)) - p[3]) <= 1e-15


class TestXInitial:
    def test_singlet(self):
        rho = ta.x_initial(0.5, 0.5, -0.5)
        assert np.abs(rho.matrix - SINGLET).max() <= 1e-15

    def test_symmetric_state(self):
        rho = ta.x_initial(0.5, 0.5, 0.5)
        expected = SINGLET.copy()
        expected[1, 2] = expected[2, 1] = 0.5
        assert np.abs(rho.matrix - expected).max() <= 1e-15

    def test_pure_family_member(self):
        # (cos^2, sin^2, cos*sin) at phi=2pi/3 is the pure state with
        # sin(phi')=1/2, i.e. the phi'=5pi/6 member of the pure family
        phi = 2.0 * np.pi / 3.0
        rho = ta.x_initial(np.cos(phi) ** 2, np.sin(phi) ** 2, np.cos(phi) * np.sin(phi))
        assert ta.purity(rho) == pytest.approx(1.0, abs=1e-12)
        assert np.abs(rho.matrix - ta.pure_phi(5.0 * np.pi / 6.0).matrix).max() <= 1e-12

    def test_rejects_invalid(self):
        with pytest.raises(NotPSD):
            ta.x_initial(0.8, 0.2, 0.5)
        with pytest.raises(TraceNotOne):
            ta.x_initial(0.5, 0.6, 0.0)


class TestPurePhi:
    def test_phi_zero(self):
        assert np.allclose(ta.pure_phi(0.0).matrix, np.diag([0.0, 0.0, 1.0, 0.0]))

    def test_three_quarter_pi_has_unit_fidelity(self):
        assert ta.fidelity_singlet(ta.pure_phi(3.0 * np.pi / 4.0)) == pytest.approx(
            1.0, abs=1e-12
        )

    def test_two_thirds_pi_fidelity(self):
        f = ta.fidelity_singlet(ta.pure_phi(2.0 * np.pi / 3.0))
        assert f == pytest.approx((1.0 + np.sqrt(3.0) / 2.0) / 2.0, abs=1e-12)

    def test_rejects_out_of_range(self):
        with pytest.raises(OutOfRange):
            ta.pure_phi(-0.1)
        with pytest.raises(OutOfRange):
            ta.pure_phi(3.5)

    @given(phi=st.floats(0.0, np.pi))
    def test_matches_x_initial_parametrization(self, phi):
        direct = ta.pure_phi(phi).matrix
        via_x = ta.x_initial(
            np.sin(phi) ** 2, np.cos(phi) ** 2, np.sin(phi) * np.cos(phi)
        ).matrix
        assert np.abs(direct - via_x).max() <= 1e-12


class TestSystemParams:
    def test_rejects_gamma_above_gamma0(self):
        with pytest.raises(OutOfRange):
            ta.SystemParams(gamma0=1.0, gamma=1.5)

    def test_rejects_negative_gamma(self):
        with pytest.raises(OutOfRange):
            ta.SystemParams(gamma0=1.0, gamma=-0.1)

    def test_rejects_nonpositive_gamma0(self):
        with pytest.raises(OutOfRange):
            ta.SystemParams(gamma0=0.0, gamma=0.0)


class TestConstructorValidity:
    @given(seed=st.integers(0, 2**32 - 1))
    def test_random_constructor_outputs_validate(self, seed):
        rng = np.random.default_rng(seed)
        states = [
            ta.product_state(ta.random_qubit(rng), ta.random_qubit(rng)),
            ta.max_entangled(rng.uniform(0, 1), rng.uniform(0, 2 * np.pi), rng.uniform(0, 2 * np.pi)),
            ta.werner_state(rng.uniform(0, 1), ["a", "s", "plus", "minus"][rng.integers(4)]),
            ta.pure_phi(rng.uniform(0, np.pi)),
            ta.random_density(rng),
        ]
        for rho in states:
            ta.make_density(rho.matrix)


class TestSerialization:
    @given(seed=st.integers(0, 2**32 - 1))
    def test_pairs_round_trip(self, seed):
        rho = seeded_density(seed)
        back = ta.density_from_pairs(ta.density_to_pairs(rho))
        assert np.array_equal(back.matrix, rho.matrix)
