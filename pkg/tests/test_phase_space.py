import math

import numpy as np
import pytest

from coherent_propagators.exceptions import CausticError, NotSymplecticError
from coherent_propagators.phase_space import (
    IDENTITY,
    J,
    HyperbolicFrame,
    PhasePoint,
    SymplecticMap2,
    cayley_of,
    matrix_set_general,
    matrix_set_hyperbolic,
    metric_of,
    wedge,
)

SQRT3 = math.sqrt(3.0)


def random_symplectic(rng):
    a, b, c = rng.normal(size=3)
    a = a if abs(a) > 0.1 else 0.5
    return np.array([[a, b], [c, (1.0 + b * c) / a]])


def test_phase_point_parse():
    point = PhasePoint.parse(" 0.4, 0.3")
    assert (point.p, point.q) == (0.4, 0.3)


def test_phase_point_parse_rejects_triples():
    with pytest.raises(ValueError) as e_info:
        PhasePoint.parse("1,2,3")

    assert "p,q" in str(e_info.value)


def test_phase_point_rejects_nan():
    with pytest.raises(ValueError):
        PhasePoint(math.nan, 0.0)


def test_phase_point_on_torus():
    assert PhasePoint(0.25, 0.75).on_torus()
    assert not PhasePoint(1.0, 0.5).on_torus()
    assert not PhasePoint(0.5, -0.25).on_torus()


def test_wedge():
    assert wedge((1, 0), (0, 1)) == 1.0
    assert wedge((0.3, -0.7), (0.3, -0.7)) == 0.0
    assert wedge((1, 1 / SQRT3), (-SQRT3 / 2, 0.5)) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize(
    "matrix",
    [[[2.0, 1.0], [1.0, 2.0]], [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], [[math.inf, 0.0], [0.0, 1.0]]],
)
def test_symplectic_map_validation(matrix):
    with pytest.raises(NotSymplecticError):
        SymplecticMap2(matrix)


def test_symplectic_map_matrix_is_read_only():
    M = SymplecticMap2.from_entries(2, 3, 1, 2)
    with pytest.raises(ValueError):
        M.matrix[0, 0] = 5.0


def test_symplectic_map_power_and_compose():
    M = SymplecticMap2.from_entries(2, 3, 1, 2)
    assert np.array_equal(M.power(2).matrix, [[7, 12], [4, 7]])
    assert np.array_equal((M @ M).matrix, M.power(2).matrix)
    assert M.trace == 4.0
    assert SymplecticMap2.identity().trace == 2.0


def test_cayley_of_identity_vanishes():
    assert np.array_equal(cayley_of(IDENTITY), np.zeros((2, 2)))


def test_cayley_of_cat_map():
    B = cayley_of([[2, 3], [1, 2]])
    assert np.allclose(B, [[-1 / 3, 0.0], [0.0, 1.0]], atol=1e-14)


def test_cayley_of_random_maps(rng):
    for _ in range(20):
        M = random_symplectic(rng)
        if abs(np.linalg.det(M + IDENTITY)) < 0.1:
            continue
        B = cayley_of(M)
        assert np.max(np.abs(B - B.T)) < 1e-14
        residual = J @ B @ (IDENTITY + M) - (IDENTITY - M)
        assert np.max(np.abs(residual)) < 1e-12 * max(1.0, np.max(np.abs(M))) ** 2


def test_cayley_of_caustic():
    with pytest.raises(CausticError) as e_info:
        cayley_of(-IDENTITY)

    assert "caustic" in str(e_info.value)


def test_cat_frame():
    frame = HyperbolicFrame.from_map([[2, 3], [1, 2]])
    assert np.allclose(frame.zeta_u.vector, [1.0, 1 / SQRT3], atol=1e-12)
    assert np.allclose(frame.zeta_s.vector, [-SQRT3 / 2, 0.5], atol=1e-12)
    assert frame.lyapunov == pytest.approx(math.log(2 + SQRT3), abs=1e-12)
    assert np.linalg.det(frame.basis) == pytest.approx(1.0, abs=1e-12)


def test_frame_rejects_bad_wedge():
    with pytest.raises(ValueError):
        HyperbolicFrame(PhasePoint(1, 0), PhasePoint(0, 2), 1.0)


def test_metric_of():
    frame = HyperbolicFrame.from_map([[2, 3], [1, 2]])
    C = metric_of(frame)
    expected = [[4 / 3, -1 / SQRT3], [-1 / SQRT3, 1.0]]
    assert np.allclose(C, expected, atol=1e-12)
    assert np.linalg.det(C) == pytest.approx(1.0, abs=1e-12)
    orthonormal = HyperbolicFrame(PhasePoint(1, 0), PhasePoint(0, 1), 0.0)
    assert np.allclose(metric_of(orthonormal), IDENTITY)


def test_matrix_set_at_identity():
    ms = matrix_set_general(IDENTITY)
    assert np.allclose(ms.B, 0.0)
    assert np.allclose(ms.V, IDENTITY)
    assert np.allclose(ms.Cbar, IDENTITY)
    assert np.allclose(ms.Bbar, 0.0)
    assert np.allclose(ms.E, IDENTITY / 4)
    assert np.allclose(ms.D, 0.0)
    assert ms.detM1 == pytest.approx(4.0)


def test_matrix_set_of_cat_map():
    ms = matrix_set_general([[2, 3], [1, 2]])
    assert ms.detV == pytest.approx(complex(4 / 3, -2 / 3), abs=1e-12)
    assert ms.detV_mod == pytest.approx(2 * math.sqrt(5) / 3, abs=1e-12)
    assert ms.epsilon == pytest.approx(math.atan(-0.5), abs=1e-12)
    assert ms.detM1 == pytest.approx(6.0)
    V_tilde = J.T @ np.linalg.inv(ms.V) @ J
    assert np.max(np.abs(V_tilde - ms.V_tilde)) < 1e-12
    # for a symmetric V, J^T V^-1 J = V / det V
    assert np.max(np.abs(ms.V_tilde - ms.V / ms.detV)) < 1e-12


def test_matrix_set_of_rotation_is_finite():
    rotation = [[0.0, -1.0], [1.0, 0.0]]
    ms = matrix_set_general(rotation)
    assert np.all(np.isfinite(ms.V))
    assert ms.detV_mod > 0.5


@pytest.mark.parametrize("t", [1, 2, 3, 4, 5, 6])
def test_hyperbolic_closed_forms_match_general(t):
    M = np.array([[2, 3], [1, 2]])
    frame = HyperbolicFrame.from_map(M)
    closed = matrix_set_hyperbolic(frame, t)
    general = matrix_set_general(np.linalg.matrix_power(M, t))
    for name in ("B", "Cbar", "Bbar", "D", "E"):
        assert np.allclose(getattr(closed, name), getattr(general, name), atol=1e-10), name
    assert np.allclose(closed.M, general.M, rtol=1e-10)
    assert closed.detV == pytest.approx(general.detV, abs=1e-10)
    assert closed.detM1 == pytest.approx(general.detM1, rel=1e-10)


def test_hyperbolic_set_in_frame_basis():
    frame = HyperbolicFrame.from_map([[2, 3], [1, 2]])
    ms = matrix_set_hyperbolic(frame, 1, basis="frame")
    assert np.allclose(ms.B, [[0.0, 1 / SQRT3], [1 / SQRT3, 0.0]], atol=1e-12)
    assert ms.detM1 == pytest.approx(6.0)
    assert matrix_set_hyperbolic(frame, 2, basis="frame").detM1 == pytest.approx(16.0)
    zero = matrix_set_hyperbolic(frame, 0, basis="frame")
    assert np.allclose(zero.B, 0.0)
    # J^T C^-1 J = C when det C = 1
    assert np.allclose(zero.E, zero.C / 4)


def test_hyperbolic_set_unknown_basis():
    frame = HyperbolicFrame.from_map([[2, 3], [1, 2]])
    with pytest.raises(ValueError) as e_info:
        matrix_set_hyperbolic(frame, 1, basis="polar")

    assert "polar" in str(e_info.value)


def test_det_w_never_vanishes(rng):
    for _ in range(200):
        M = random_symplectic(rng)
        det_w = np.linalg.det((M + IDENTITY) + 1j * J @ (IDENTITY - M))
        assert abs(det_w) >= 1e-8
