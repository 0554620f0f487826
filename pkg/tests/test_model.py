import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swstab.linalg import DimensionError
from swstab.model import (EquilibriumError, SubSystem, SwitchedSystem,
                          Weights, average_system, common_equilibrium,
                          equilibrium, load_system, system_from_dict,
                          system_to_dict)


class TestTypes:
    def test_dimension_mismatch_rejected(self):
        with pytest.raises(DimensionError):
            SubSystem(np.eye(2), np.zeros(3))
        with pytest.raises(DimensionError):
            SwitchedSystem((SubSystem(np.eye(2), np.zeros(2)),
                            SubSystem(np.eye(3), np.zeros(3))))

    def test_linear_flag(self):
        sub = SubSystem(np.eye(2), np.zeros(2))
        assert sub.is_linear
        assert not SubSystem(np.eye(2), np.array([1.0, 0.0])).is_linear

    def test_weights_validation(self):
        Weights(np.array([0.5, 0.5]), 2.0)
        with pytest.raises(ValueError):
            Weights(np.array([0.7, 0.5]), 1.0)
        with pytest.raises(ValueError):
            Weights(np.array([-0.1, 1.1]), 1.0)
        with pytest.raises(ValueError):
            Weights(np.array([1.0]), 0.0)

    def test_zero_weight_allowed(self):
        w = Weights(np.array([1.0, 0.0]), 1.0)
        assert w.alpha[1] == 0.0


class TestAverageSystem:
    def test_example2_average(self, example2):
        avg = average_system(example2, Weights(np.array([0.5, 0.5]), 4.0))
        np.testing.assert_allclose(avg.A, [[-0.55, 0.0], [0.3, -0.5]])
        np.testing.assert_allclose(avg.b, [0.0, 1.5])

    def test_simplex_vertex(self, example1):
        avg = average_system(example1, Weights(np.array([1.0, 0.0]), 1.0))
        np.testing.assert_allclose(avg.A, example1.subsystems[0].A)
        np.testing.assert_allclose(avg.b, example1.subsystems[0].b)

    def test_identical_subsystems(self):
        sub = SubSystem(np.diag([-1.0, -2.0]), np.array([1.0, 1.0]))
        sys_ = SwitchedSystem((sub, sub, sub))
        avg = average_system(sys_, Weights(np.array([0.2, 0.3, 0.5]), 1.0))
        np.testing.assert_allclose(avg.A, sub.A)
        np.testing.assert_allclose(avg.b, sub.b)

    def test_length_mismatch(self, example1):
        with pytest.raises(DimensionError):
            average_system(example1, Weights(np.array([1.0]), 1.0))

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.floats(0.01, 0.99))
    def test_affine_in_weights(self, a, b, lam):
        # averaging weight vectors commutes with building the average system
        sub1 = SubSystem(np.array([[0.0, 1.0], [-1.0, 0.0]]), np.array([1.0, 0.0]))
        sub2 = SubSystem(np.array([[2.0, 0.0], [0.0, -3.0]]), np.array([0.0, 2.0]))
        sys_ = SwitchedSystem((sub1, sub2))
        w1 = Weights(np.array([a, 1.0 - a]), 1.0)
        w2 = Weights(np.array([b, 1.0 - b]), 1.0)
        mixed = Weights(lam * w1.alpha + (1.0 - lam) * w2.alpha, 1.0)
        direct = average_system(sys_, mixed)
        blended_A = (lam * average_system(sys_, w1).A
                     + (1.0 - lam) * average_system(sys_, w2).A)
        np.testing.assert_allclose(direct.A, blended_A, atol=1e-12)


class TestEquilibria:
    def test_example1_common_point(self, example1):
        np.testing.assert_allclose(
            equilibrium(example1.subsystems[0]), [0.0, -1.0], atol=1e-12)
        np.testing.assert_allclose(
            equilibrium(example1.subsystems[1]), [0.0, -1.0], atol=1e-12)

    def test_example2_second_equilibrium(self, example2):
        e2 = equilibrium(example2.subsystems[1])
        np.testing.assert_allclose(e2, [-40.0 / 11.0, 9.0 / 11.0], atol=1e-12)
        assert np.allclose(e2, [-3.64, 0.82], atol=0.01)

    def test_example2_average_equilibrium(self, example2):
        avg = average_system(example2, Weights(np.array([0.5, 0.5]), 1.0))
        np.testing.assert_allclose(equilibrium(avg), [0.0, 3.0], atol=1e-12)

    def test_singular_matrix(self):
        with pytest.raises(EquilibriumError):
            equilibrium(SubSystem(np.zeros((2, 2)), np.array([1.0, 0.0])))

    def test_average_equilibrium_satisfies_dynamics(self, example2, rng):
        for _ in range(10):
            a = rng.uniform(0.05, 0.95)
            avg = average_system(example2, Weights(np.array([a, 1.0 - a]), 1.0))
            e = equilibrium(avg)
            assert np.linalg.norm(avg.A @ e + avg.b) <= 1e-9


class TestCommonEquilibrium:
    def test_example1_shares(self, example1):
        eq = common_equilibrium(example1, tol=1e-9)
        np.testing.assert_allclose(eq, [0.0, -1.0], atol=1e-12)

    def test_example2_does_not(self, example2):
        assert common_equilibrium(example2, tol=1e-9) is None

    def test_single_subsystem(self):
        sub = SubSystem(np.diag([-1.0, -1.0]), np.array([2.0, 0.0]))
        eq = common_equilibrium(SwitchedSystem((sub,)))
        np.testing.assert_allclose(eq, equilibrium(sub))

    def test_returned_point_is_equilibrium_of_each(self, example1):
        y = common_equilibrium(example1)
        for sub in example1.subsystems:
            norm = np.linalg.norm(sub.A @ y + sub.b)
            assert norm <= (1.0 + np.linalg.norm(sub.A)) * 1e-9

    def test_singular_subsystem_reported(self):
        sys_ = SwitchedSystem((
            SubSystem(np.zeros((2, 2)), np.array([1.0, 0.0])),
            SubSystem(np.eye(2), np.zeros(2))))
        with pytest.raises(EquilibriumError) as exc:
            common_equilibrium(sys_)
        assert exc.value.subsystem == 1


class TestJson:
    def test_round_trip(self, example2):
        again = system_from_dict(system_to_dict(example2))
        for a, b in zip(again.subsystems, example2.subsystems):
            np.testing.assert_allclose(a.A, b.A)
            np.testing.assert_allclose(a.b, b.b)

    def test_omitted_b_is_zero(self):
        sys_ = system_from_dict({"subsystems": [{"A": [[-1.0, 0.0], [0.0, -1.0]]}]})
        assert sys_.is_linear

    def test_dimension_declaration_checked(self):
        with pytest.raises(ValueError):
            system_from_dict({"n": 3, "subsystems": [{"A": [[1.0]]}]})

    def test_load_from_file(self, tmp_path, example1):
        path = tmp_path / "sys.json"
        path.write_text(json.dumps(system_to_dict(example1)))
        loaded = load_system(path)
        assert loaded.m == 2 and loaded.n == 2
