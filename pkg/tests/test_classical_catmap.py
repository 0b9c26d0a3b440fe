import math

import numpy as np
import pytest

from coherent_propagators.classical_catmap import (
    CatMap,
    center_action,
    center_windings,
    chord_action,
    orbit_through,
    orbit_with_center,
    orbit_with_chord,
    power,
    step,
)
from coherent_propagators.exceptions import NotSymplecticError, PowerOverflowError
from coherent_propagators.phase_space import IDENTITY, J, cayley_of


def test_default_map(cat):
    assert cat.entries == ((2, 3), (1, 2))
    assert cat.trace == 4
    assert cat.det_plus == 6
    assert cat.det_minus == -2
    assert cat.lyapunov == pytest.approx(math.log(2 + math.sqrt(3)), abs=1e-12)
    assert np.allclose(cat.B, [[-1 / 3, 0.0], [0.0, 1.0]], atol=1e-14)


@pytest.mark.parametrize(
    "entries, message",
    [
        (((2, 1), (1, 2)), "det M"),
        (((1, 1), (0, 1)), "hyperbolic"),
        (((2.5, 3), (1, 2)), "integer"),
    ],
)
def test_cat_map_validation(entries, message):
    with pytest.raises(NotSymplecticError) as e_info:
        CatMap(entries)

    assert message in str(e_info.value)


def test_from_matrix():
    assert CatMap.from_matrix([[2, 3], [1, 2]]) == CatMap()


def test_power(cat):
    assert power(cat, 1) == cat
    squared = power(cat, 2)
    assert squared.entries == ((7, 12), (4, 7))
    M2 = np.array(squared.entries, dtype=float)
    residual = J @ squared.B @ (IDENTITY + M2) - (IDENTITY - M2)
    assert np.max(np.abs(residual)) < 1e-12 * 16


def test_power_guards(cat):
    with pytest.raises(ValueError):
        power(cat, 0)
    with pytest.raises(PowerOverflowError):
        power(cat, 31)


@pytest.mark.parametrize("t", [1, 2, 3, 4, 5, 6])
def test_powers_keep_cayley_diagonal(cat, t):
    B = power(cat, t).B
    assert abs(B[0, 1]) < 1e-12
    assert abs(B[1, 0]) < 1e-12


@pytest.mark.parametrize(
    "x, x_plus, m",
    [
        ((0.0, 0.0), (0.0, 0.0), (0, 0)),
        ((0.1, 0.2), (0.8, 0.5), (0, 0)),
        ((0.5, 0.5), (0.5, 0.5), (2, 1)),
    ],
)
def test_step(cat, x, x_plus, m):
    segment = step(cat, x)
    assert segment.m == m
    assert segment.x_plus.p == pytest.approx(x_plus[0], abs=1e-12)
    assert segment.x_plus.q == pytest.approx(x_plus[1], abs=1e-12)
    assert segment.x_plus.on_torus()


def test_step_rejects_points_off_the_torus(cat):
    with pytest.raises(ValueError) as e_info:
        step(cat, (1.2, 0.1))

    assert "[0, 1)" in str(e_info.value)


def test_orbit_through_one_step(cat):
    segment = orbit_through(cat, (0.1, 0.2), 1)
    assert segment.center.p == pytest.approx(0.45)
    assert segment.center.q == pytest.approx(0.35)
    assert segment.chord.p == pytest.approx(0.7)
    assert segment.chord.q == pytest.approx(0.3)


def test_orbit_through_fixed_point(cat):
    segment = orbit_through(cat, (0.0, 0.0), 5)
    assert segment.chord.p == 0.0
    assert segment.chord.q == 0.0
    assert segment.action == 0.0


def test_orbit_through_matches_power(cat):
    composed = orbit_through(cat, (0.1, 0.2), 2)
    direct = step(power(cat, 2), (0.1, 0.2))
    assert composed.m == direct.m == (3, 1)
    assert composed.x_plus.p == pytest.approx(direct.x_plus.p, abs=1e-12)
    assert composed.x_plus.q == pytest.approx(direct.x_plus.q, abs=1e-12)
    assert composed.action == pytest.approx(direct.action, abs=1e-10)


@pytest.mark.parametrize("t", [1, 2, 3, 4, 5, 6])
def test_orbit_through_then_center_recovers_start(cat, rng, t):
    for _ in range(5):
        start = rng.random(2)
        segment = orbit_through(cat, start, t)
        rebuilt = orbit_with_center(cat, segment.center, segment.m, t)
        assert np.allclose(rebuilt.x_minus.vector, start, atol=1e-10)


def test_orbit_with_center(cat):
    fixed = orbit_with_center(cat, (0.0, 0.0), (0, 0), 1)
    assert np.allclose(fixed.x_minus.vector, 0.0)
    segment = orbit_with_center(cat, (0.3, 0.7), (1, -2), 2)
    assert np.allclose(segment.center.vector, [0.3, 0.7], atol=1e-12)
    M2 = np.array(power(cat, 2).entries, dtype=float)
    assert np.allclose(segment.x_plus.vector, M2 @ segment.x_minus.vector - [1, -2], atol=1e-12)


def test_orbit_with_center_chord_is_gradient(cat):
    X, m, h = np.array([0.3, 0.7]), (1, 2), 1e-6
    segment = orbit_with_center(cat, X, m, 1)
    gradient = np.array(
        [
            (center_action(cat, X + h * e, m) - center_action(cat, X - h * e, m)) / (2 * h)
            for e in np.eye(2)
        ]
    )
    assert np.allclose(-J @ gradient, segment.chord.vector, atol=1e-6)


def test_orbit_with_chord(cat):
    fixed = orbit_with_chord(cat, (0.0, 0.0), (0, 0), 1)
    assert np.allclose(fixed.x_minus.vector, 0.0)
    segment = orbit_with_chord(cat, (0.2, -0.1), (1, 0), 1)
    assert np.allclose(segment.chord.vector, [0.2, -0.1], atol=1e-12)


def test_chord_action_gradient(cat):
    xi0, h = np.array([0.2, -0.1]), 1e-6
    center = orbit_with_chord(cat, xi0, (0, 0), 1).center.vector
    gradient = np.array(
        [
            (chord_action(cat, xi0 + h * e) - chord_action(cat, xi0 - h * e)) / (2 * h)
            for e in np.eye(2)
        ]
    )
    assert np.allclose(gradient, J @ center, atol=1e-6)


def test_center_action():
    cat = CatMap()
    assert center_action(cat, (0.0, 0.0)) == 0.0
    x = np.array([0.3, -0.4])
    assert center_action(cat, x) == pytest.approx(x @ cayley_of([[2, 3], [1, 2]]) @ x)


@pytest.mark.parametrize("t, count", [(1, 6), (2, 16)])
def test_center_windings(cat, t, count):
    windings = center_windings(power(cat, t))
    assert len(windings) == count
    assert (0, 0) in windings
    # no two windings differ by an element of (M + 1) Z^2
    plus = np.array(power(cat, t).entries) + np.eye(2, dtype=int)
    inverse = np.linalg.inv(plus)
    for i, a in enumerate(windings):
        for b in windings[i + 1 :]:
            pre_image = inverse @ (np.array(a) - np.array(b))
            assert not np.allclose(pre_image, np.rint(pre_image))
