# test_controllers.py

# Регуляторы на прямом пути вдоль оси x (начало пути в x = -5).

import math

import pytest

from controllers import (
    ControllerInput,
    DubinsRobustParams,
    PurePursuitParams,
    StanleyParams,
    compute_control,
)
from controllers.dubins_robust import dubins_robust_control
from controllers.pure_pursuit import find_lookahead_point, pure_pursuit_control, pure_pursuit_law, pure_pursuit_output
from controllers.stanley import stanley_control
from geometry.angles import Vec2
from geometry.path import Pose, SegmentSpec, build_path
from utils.errors import ConfigError, DomainError
from vehicles.kinematic import VehicleState

PATH = build_path(Pose(-5.0, 0.0, 0.0), [SegmentSpec("line", 100.0)])


def make_input(x, y, psi, v=1.0, path=PATH):
    return ControllerInput(VehicleState(Vec2(x, y), psi), v, path, s_hint=x + 5.0)


# --- Stanley ---

def test_stanley_on_path_equilibrium():
    assert stanley_control(make_input(0.0, 0.0, 0.0), StanleyParams()) == 0.0


def test_stanley_right_of_path_steers_left():
    # Передний мост в (1, -1): e = -1, k = 3, v = 1.
    delta = stanley_control(make_input(0.0, -1.0, 0.0), StanleyParams(gain_k=3.0))
    assert delta == pytest.approx(math.atan(3.0))
    assert delta == pytest.approx(1.2490, abs=1e-4)


def test_stanley_heading_term():
    # Курс на 0.1 рад левее пути: руль поворачивается на 0.1 рад вправо.
    inp = make_input(0.0, -math.sin(0.1), 0.1)
    assert stanley_control(inp, StanleyParams()) == pytest.approx(-0.1, abs=1e-12)


def test_stanley_uses_front_axle():
    # Задний мост на пути, курс под углом: передний мост уходит влево.
    params = StanleyParams(gain_k=2.0, wheelbase_l=2.0)
    psi = 0.2
    e_front = 2.0 * math.sin(psi)
    expected = -psi - math.atan(2.0 * e_front / 1.5)
    assert stanley_control(make_input(0.0, 0.0, psi, v=1.5), params) == pytest.approx(expected)


@pytest.mark.parametrize("v", [0.0, -1.0])
def test_stanley_requires_positive_speed(v):
    with pytest.raises(DomainError):
        stanley_control(make_input(0.0, 0.0, 0.0, v=v), StanleyParams())


# --- Pure Pursuit ---

def test_pure_pursuit_law_examples():
    assert pure_pursuit_law(0.0, 1.0, 1.45) == 0.0
    assert pure_pursuit_law(0.5, 1.0, 1.45) == pytest.approx(math.atan(1.0 / 2.1025))
    assert pure_pursuit_law(0.5, 1.0, 1.45) == pytest.approx(0.443958, abs=1e-6)
    assert pure_pursuit_law(-0.5, 1.0, 1.45) == -pure_pursuit_law(0.5, 1.0, 1.45)


def test_pure_pursuit_parallel_offset():
    # Цель на оси x на расстоянии 1.45 м: в связанной системе e_pp = 0.5.
    params = PurePursuitParams(lookahead_lh=1.45, wheelbase_l=1.0)
    out = pure_pursuit_output(make_input(0.0, -0.5, 0.0), params)
    assert out.delta == pytest.approx(math.atan(1.0 / 2.1025))
    assert out.s_ref == pytest.approx(5.0)
    assert not out.lookahead_fallback


def test_pure_pursuit_mirror_symmetry():
    params = PurePursuitParams()
    left = pure_pursuit_control(make_input(0.0, 0.3, 0.1), params)
    right = pure_pursuit_control(make_input(0.0, -0.3, -0.1), params)
    assert left == -right
    assert left < 0.0


def test_pure_pursuit_far_from_path_targets_projection():
    s, point, fallback = find_lookahead_point(PATH, Vec2(0.0, -3.0), 5.0, 1.45)
    assert s == 5.0
    assert point == Vec2(0.0, 0.0)
    assert not fallback


def test_pure_pursuit_falls_back_to_endpoint():
    short = build_path(Pose(0.0, 0.0, 0.0), [SegmentSpec("line", 10.0)])
    inp = ControllerInput(VehicleState(Vec2(9.5, 0.0), 0.0), 1.0, short, s_hint=9.5)
    out = pure_pursuit_output(inp, PurePursuitParams())
    assert out.lookahead_fallback
    assert out.delta == 0.0


# --- Dubins ---

def test_dubins_zero_at_equilibrium():
    assert dubins_robust_control(make_input(0.0, 0.0, 0.0), DubinsRobustParams()) == 0.0


@pytest.mark.parametrize("y, sign", [(-10.0, 1.0), (10.0, -1.0)])
def test_dubins_saturates_toward_path(y, sign):
    params = DubinsRobustParams()
    assert dubins_robust_control(make_input(0.0, y, 0.0), params) == sign * params.delta_bar


def test_dubins_odd_symmetry():
    params = DubinsRobustParams(boundary_layer=0.5)
    for e, theta in [(0.02, 0.01), (0.3, -0.2), (1.0, 0.5), (-0.1, 0.05)]:
        a = dubins_robust_control(make_input(0.0, e, theta), params)
        b = dubins_robust_control(make_input(0.0, -e, -theta), params)
        assert a == pytest.approx(-b, abs=1e-15)


def test_dubins_boundary_layer_is_linear():
    params = DubinsRobustParams()
    r_eff = params.effective_radius
    sigma_b = math.acos(1.0 - params.boundary_layer / r_eff)
    delta = dubins_robust_control(make_input(0.0, 0.0, 0.05), params)
    assert delta == pytest.approx(-params.delta_bar * 0.05 / sigma_b)
    assert abs(delta) < params.delta_bar


def test_dubins_params_validation():
    with pytest.raises(ConfigError):
        DubinsRobustParams(k_rob=1.0)
    with pytest.raises(ConfigError):
        DubinsRobustParams(boundary_layer=0.0)


# --- Выбор регулятора ---

def test_compute_control_dispatches_by_params():
    inp = make_input(0.0, -1.0, 0.0)
    assert compute_control(inp, StanleyParams()).delta == stanley_control(inp, StanleyParams())
    assert compute_control(inp, PurePursuitParams()).delta == pure_pursuit_control(inp, PurePursuitParams())
    assert compute_control(inp, DubinsRobustParams()).delta == dubins_robust_control(inp, DubinsRobustParams())
