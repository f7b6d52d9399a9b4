# test_compensator.py

import math

import numpy as np
import pytest

from compensator.predictor import (
    CompensatorConfig,
    PredictorQueue,
    compensator_tick,
    f_pm,
    predict,
    predictor_step,
)
from delay.delay_line import DelayLine
from geometry.angles import Vec2
from utils.errors import ConfigError
from vehicles.kinematic import VehicleState, kinematic_step
from vehicles.params import KinematicParams

DT = 0.01


# --- Модель объекта ---

def test_f_pm_examples():
    dp, dpsi = f_pm(0.0, 0.0, 1.0, DT, 1.0)
    assert dp == Vec2(0.01, 0.0)
    assert dpsi == 0.0
    dp, dpsi = f_pm(math.pi / 2.0, 0.0, 1.0, DT, 1.0)
    assert dp.x == pytest.approx(0.0, abs=1e-15)
    assert dp.y == pytest.approx(0.01)
    assert dpsi == 0.0


def test_f_pm_is_bit_identical_to_plant():
    rng = np.random.default_rng(30)
    for psi, delta, v, l in zip(rng.uniform(-7, 7, 1000), rng.uniform(-0.6, 0.6, 1000),
                                rng.uniform(0.0, 15.0, 1000), rng.uniform(0.5, 3.0, 1000)):
        dp, dpsi = f_pm(psi, delta, v, DT, l)
        s = kinematic_step(VehicleState(Vec2(0.0, 0.0), psi), delta, v, DT, KinematicParams(l, 0.6))
        assert s.p == Vec2(0.0, 0.0) + dp
        assert s.psi == psi + dpsi


# --- Очередь ---

def test_straight_queue_shifted_positions():
    q = PredictorQueue(3, heading=0.0, wheelbase_hat=1.0)
    for _ in range(3):
        q = predictor_step(q, 0.0, 1.0, DT)
    np.testing.assert_allclose(q.shifted_positions[:, 0], [0.0, 0.01, 0.02, 0.03], atol=1e-15)
    np.testing.assert_array_equal(q.shifted_positions[:, 1], 0.0)
    # Дальше очередь не меняется: самое старое положение всегда в нуле.
    for _ in range(100):
        q = predictor_step(q, 0.0, 1.0, DT)
    np.testing.assert_allclose(q.shifted_positions[:, 0], [0.0, 0.01, 0.02, 0.03], atol=1e-12)


def test_stationary_queue_stays_at_origin():
    q = PredictorQueue(5, heading=1.0, wheelbase_hat=2.7)
    for delta in np.linspace(-0.6, 0.6, 50):
        q = predictor_step(q, delta, 0.0, DT)
    assert np.all(q.shifted_positions == 0.0)
    y = VehicleState(Vec2(3.0, 4.0), 1.0)
    assert predict(q, y) == y


def test_queue_is_bounded_under_random_steering():
    rng = np.random.default_rng(31)
    k, v_max, n = 10, 15.0, 1_000_000
    q = PredictorQueue(k, heading=0.3, wheelbase_hat=2.7)
    bound = v_max * k * DT + 1e-9
    for delta, v in zip(rng.uniform(-0.62, 0.62, n).tolist(), rng.uniform(0.0, v_max, n).tolist()):
        q = predictor_step(q, delta, v, DT)
        assert q.rows[0, 0] == 0.0 and q.rows[0, 1] == 0.0
        assert np.hypot(q.rows[:, 0], q.rows[:, 1]).max() <= bound
    assert np.all((q.headings >= 0.0) & (q.headings < 2.0 * math.pi))


def test_heading_increment_matches_plant():
    # Курсы модели и объекта различаются на 0.5 рад, приращения курса одинаковы.
    k, v, delta = 4, 2.0, 0.1
    q = PredictorQueue(k, heading=0.0, wheelbase_hat=1.0)
    plant = VehicleState(Vec2(0.0, 0.0), 0.5)
    for _ in range(k):
        q = predictor_step(q, delta, v, DT)
    y_hat = predict(q, plant)
    future = plant
    for _ in range(k):
        future = kinematic_step(future, delta, v, DT, KinematicParams(1.0, 0.6))
    assert y_hat.psi - plant.psi == pytest.approx(future.psi - plant.psi, abs=1e-12)
    assert (y_hat.p - future.p).norm() <= 1e-12


def test_zero_depth_passes_feedback_through():
    q = PredictorQueue(0, heading=0.0, wheelbase_hat=1.0)
    y = VehicleState(Vec2(1.0, 2.0), 0.3)
    q, y_hat = compensator_tick(q, y, 0.4, 5.0, DT)
    assert y_hat == y


def test_disabled_compensator_leaves_queue_untouched():
    q = PredictorQueue.from_config(CompensatorConfig(enabled=False, dt_hat_s=0.1), DT, 0.0, 1.0)
    before = q.rows.copy()
    y = VehicleState(Vec2(1.0, 2.0), 0.3)
    q, y_hat = compensator_tick(q, y, 0.4, 5.0, DT)
    assert y_hat == y
    np.testing.assert_array_equal(q.rows, before)


def test_prediction_recovers_undelayed_plant():
    # Объект с запаздыванием на входе k шагов: после разгона очереди
    # предсказание по текущему состоянию совпадает с состоянием через k шагов.
    rng = np.random.default_rng(32)
    k, v, n = 25, 3.0, 400
    params = KinematicParams(1.0, 0.6)
    deltas = rng.uniform(-0.6, 0.6, n)
    q = PredictorQueue(k, heading=0.7, wheelbase_hat=1.0)
    line = DelayLine(k, 0.0)
    x = VehicleState(Vec2(2.0, -1.0), 0.7)
    states, predictions = [x], [x]
    for delta in deltas:
        x = kinematic_step(x, line.push(float(delta)), v, DT, params)
        q, y_hat = compensator_tick(q, x, float(delta), v, DT)
        states.append(x)
        predictions.append(y_hat)
    for i in range(k, n + 1 - k):
        assert (predictions[i].p - states[i + k].p).norm() <= 1e-9
        assert predictions[i].psi == pytest.approx(states[i + k].psi, abs=1e-9)


def test_prediction_ignores_model_initial_heading():
    # Курс модели 5.9 рад, курс объекта 0.1 рад; руль в основном влево,
    # курс модели проходит через 2π.
    rng = np.random.default_rng(33)
    k, v, n = 25, 3.0, 600
    params = KinematicParams(1.0, 0.6)
    deltas = rng.uniform(-0.2, 0.6, n)
    q = PredictorQueue(k, heading=5.9, wheelbase_hat=1.0)
    line = DelayLine(k, 0.0)
    x = VehicleState(Vec2(-3.0, 4.0), 0.1)
    states, predictions = [x], [x]
    for delta in deltas:
        x = kinematic_step(x, line.push(float(delta)), v, DT, params)
        q, y_hat = compensator_tick(q, x, float(delta), v, DT)
        states.append(x)
        predictions.append(y_hat)
    assert states[-1].psi - states[0].psi > 2.0 * math.pi - 5.9
    for i in range(k, n + 1 - k):
        assert (predictions[i].p - states[i + k].p).norm() <= 1e-9
        assert predictions[i].psi == pytest.approx(states[i + k].psi, abs=1e-9)


def test_model_pose_traces_absolute_model_path():
    q = PredictorQueue(2, heading=0.0, wheelbase_hat=1.0, origin=Vec2(5.0, 5.0))
    for _ in range(10):
        q = predictor_step(q, 0.0, 1.0, DT)
    assert q.model_pose.p.x == pytest.approx(5.1)
    assert q.model_pose.p.y == 5.0


def test_config_validation():
    with pytest.raises(ConfigError):
        CompensatorConfig(enabled=True, dt_hat_s=-0.1)
    with pytest.raises(ConfigError):
        CompensatorConfig(enabled=True, dt_hat_s=0.4, wheelbase_hat_m=0.0)
    with pytest.raises(ConfigError):
        CompensatorConfig(enabled=True, dt_hat_s=0.275).steps(DT)
    assert CompensatorConfig(enabled=True, dt_hat_s=0.4).steps(DT) == 40
