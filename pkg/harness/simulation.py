# harness/simulation.py

# Замкнутый контур моделирования: объект с запаздыванием, компенсатор, регулятор.
#
# Порядок на шаге i:
#   1. регулятор по оценке ŷ_i -> δ_cmd,i (с ограничением ±delta_max);
#   2. запись строки трассы;
#   3. δ_cmd,i через линию входного запаздывания (и рулевой фильтр) на объект;
#   4. новое состояние через линию выходного запаздывания -> y_del,i+1;
#   5. компенсатор: шаг модели командой δ_cmd,i, затем ŷ_i+1 по y_del,i+1.

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, NamedTuple, Union

import numpy as np

from compensator.predictor import PredictorQueue, compensator_tick, predict
from controllers import ControllerInput, compute_control
from delay.delay_line import DelayLine
from geometry.angles import Vec2
from geometry.path import project_to_path
from harness.scenario_config import ScenarioConfig, config_to_dict
from utils.validation import integer_ratio
from vehicles.kinematic import VehicleState, kinematic_step
from vehicles.kinetic import DynVehicleState, kinetic_step
from vehicles.steering import SteeringFilterState, steering_actuator_step

VERSION = "1.0.0"

# Окно поиска проекции позади подсказки, м.
PROJECTION_BEHIND_M = 1.0
# Запас окна впереди подсказки, м.
PROJECTION_MARGIN_M = 5.0


# --- Объекты управления ---

class KinematicPlant:
    """Кинематический объект; рулевой фильтр (если включён) работает с внутренним шагом."""

    def __init__(self, config: ScenarioConfig):
        pose = config.initial_pose
        self.params = config.vehicle
        self.state = VehicleState(Vec2(pose.x, pose.y), pose.psi)
        self.filter = _make_filter(config)
        self.delta_actual = 0.0

    @property
    def pose(self) -> VehicleState:
        return self.state

    def step(self, delta: float, v: float, dt: float) -> float:
        if self.filter is None:
            self.state = kinematic_step(self.state, delta, v, dt, self.params)
            self.delta_actual = delta
            return delta
        h = self.filter.inner_step_s
        for _ in range(integer_ratio(dt, h, "steering_filter.inner_step_s")):
            self.filter, self.delta_actual = steering_actuator_step(self.filter, delta, h)
            self.state = kinematic_step(self.state, self.delta_actual, v, h, self.params)
        return self.delta_actual


class KineticPlant:
    """Кинетический объект; рулевой фильтр и модель продвигаются вместе с внутренним шагом фильтра."""

    def __init__(self, config: ScenarioConfig):
        pose = config.initial_pose
        self.params = config.vehicle
        self.state = DynVehicleState.at_rest_on(Vec2(pose.x, pose.y), pose.psi, config.speed.speed_at(0.0))
        self.filter = _make_filter(config)
        self.delta_actual = 0.0

    @property
    def pose(self) -> VehicleState:
        return VehicleState(self.state.p, self.state.psi)

    @property
    def speed(self) -> float:
        return self.state.v_long

    def step(self, delta: float, v: float, dt: float) -> float:
        if self.filter is None:
            self.state = kinetic_step(self.state, delta, v, dt, self.params)
            self.delta_actual = delta
            return delta
        h = self.filter.inner_step_s
        for _ in range(integer_ratio(dt, h, "steering_filter.inner_step_s")):
            self.filter, self.delta_actual = steering_actuator_step(self.filter, delta, h)
            self.state = kinetic_step(self.state, self.delta_actual, v, h, self.params)
        return self.delta_actual


def _make_filter(config: ScenarioConfig):
    sf = config.steering_filter
    if not sf.enabled:
        return None
    return SteeringFilterState.settled(0.0, sf.inner_step_s, sf.tau_s)


def make_plant(config: ScenarioConfig) -> Union[KinematicPlant, KineticPlant]:
    if config.plant == "kinetic":
        return KineticPlant(config)
    return KinematicPlant(config)


# --- Трасса ---

class StepRecord(NamedTuple):
    t: float
    state: Union[VehicleState, DynVehicleState]
    v: float
    y_del: VehicleState
    y_hat: VehicleState
    s_star: float
    e_signed: float
    delta_cmd: float
    delta_actual: float
    queue_newest: Vec2
    model_pose: VehicleState
    lookahead_fallback: bool


TRACE_COLUMNS = (
    "t_s", "x_m", "y_m", "psi_rad", "v_mps", "e_m", "s_star_m",
    "delta_cmd_rad", "delta_act_rad", "yhat_x_m", "yhat_y_m", "yhat_psi_rad",
)
DEBUG_COLUMNS = (
    "t_s", "ydel_x_m", "ydel_y_m", "ydel_psi_rad", "queue_newest_x_m", "queue_newest_y_m", "lookahead_fallback",
)


@dataclass
class SimTrace:
    """Записи по шагам (duration/dt + 1 строк) и метаданные прогона."""

    records: List[StepRecord]
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __len__(self):
        return len(self.records)

    def columns(self) -> Dict[str, np.ndarray]:
        """Столбцы CSV-трассы в фиксированном порядке."""
        r = self.records
        return {
            "t_s": np.array([x.t for x in r]),
            "x_m": np.array([x.state.p.x for x in r]),
            "y_m": np.array([x.state.p.y for x in r]),
            "psi_rad": np.array([x.state.psi for x in r]),
            "v_mps": np.array([x.v for x in r]),
            "e_m": np.array([x.e_signed for x in r]),
            "s_star_m": np.array([x.s_star for x in r]),
            "delta_cmd_rad": np.array([x.delta_cmd for x in r]),
            "delta_act_rad": np.array([x.delta_actual for x in r]),
            "yhat_x_m": np.array([x.y_hat.p.x for x in r]),
            "yhat_y_m": np.array([x.y_hat.p.y for x in r]),
            "yhat_psi_rad": np.array([x.y_hat.psi for x in r]),
        }

    def debug_columns(self) -> Dict[str, np.ndarray]:
        """Отладочные столбцы: y_del, новейшее сдвинутое положение очереди и признак цели в конце пути."""
        r = self.records
        return {
            "t_s": np.array([x.t for x in r]),
            "ydel_x_m": np.array([x.y_del.p.x for x in r]),
            "ydel_y_m": np.array([x.y_del.p.y for x in r]),
            "ydel_psi_rad": np.array([x.y_del.psi for x in r]),
            "queue_newest_x_m": np.array([x.queue_newest.x for x in r]),
            "queue_newest_y_m": np.array([x.queue_newest.y for x in r]),
            "lookahead_fallback": np.array([float(x.lookahead_fallback) for x in r]),
        }

    def model_path(self) -> Dict[str, np.ndarray]:
        """Путь модели предсказателя p̂."""
        r = self.records
        return {
            "t_s": np.array([x.t for x in r]),
            "x_m": np.array([x.model_pose.p.x for x in r]),
            "y_m": np.array([x.model_pose.p.y for x in r]),
            "psi_rad": np.array([x.model_pose.psi for x in r]),
        }


# --- Моделирование ---

def _add_noise(y: VehicleState, config: ScenarioConfig, rng: np.random.Generator) -> VehicleState:
    if not config.noise.enabled:
        return y
    dx, dy = rng.normal(0.0, config.noise.position_std_m, size=2)
    dpsi = rng.normal(0.0, config.noise.heading_std_rad)
    return VehicleState(Vec2(y.p.x + dx, y.p.y + dy), y.psi + dpsi)


def projection_window_ahead(config: ScenarioConfig, k_total: int) -> float:
    """Ширина окна проекции вперёд: путь за запаздывание с запасом, база и упреждение."""
    lookahead = getattr(config.controller, "lookahead_lh", 0.0)
    return (2.0 * config.speed.v_max * config.dt_s * (k_total + 1)
            + 2.0 * config.wheelbase + lookahead + PROJECTION_MARGIN_M)


def run_scenario(config: ScenarioConfig) -> SimTrace:
    """
     Прогон одного сценария.

     Результат детерминирован: одинаковая конфигурация даёт побитно одинаковую трассу
     (шум обратной связи берётся из генератора с seed конфигурации).

     Args:
         config (ScenarioConfig): Проверенная конфигурация.

     Returns:
         SimTrace: duration/dt + 1 строк, t строго возрастает.
     """
    started = time.perf_counter()
    dt = config.dt_s
    n = config.steps
    k_in, k_out = config.delays.steps(dt)
    path = config.path
    delta_max = config.delta_max
    logging.info(
        f"Сценарий '{config.name}': объект {config.plant}, регулятор {type(config.controller).__name__}, "
        f"шагов {n}, запаздывание вход/выход {k_in}/{k_out} шагов"
    )

    plant = make_plant(config)
    x0 = plant.pose
    in_line = DelayLine(k_in, 0.0)
    out_line = DelayLine(k_out, x0)
    queue = PredictorQueue.from_config(config.compensator, dt, x0.psi, config.wheelbase, origin=x0.p)
    rng = np.random.default_rng(config.seed)

    ahead = projection_window_ahead(config, k_in + k_out + queue.k)
    behind = PROJECTION_BEHIND_M

    y_del = _add_noise(out_line.push(x0), config, rng)
    y_hat = predict(queue, y_del)
    hint_ctrl = project_to_path(path, y_hat.p, 0.0).s_star
    hint_true = project_to_path(path, x0.p, 0.0).s_star

    records = []
    fallbacks = 0
    for i in range(n + 1):
        t = i * dt
        v = config.speed.speed_at(t)
        ctrl = compute_control(ControllerInput(y_hat, v, path, hint_ctrl, ahead, behind), config.controller)
        hint_ctrl = max(hint_ctrl, ctrl.s_ref)
        delta_cmd = min(max(ctrl.delta, -delta_max), delta_max)
        fallbacks += ctrl.lookahead_fallback

        true_proj = project_to_path(path, plant.pose.p, hint_true, ahead, behind)
        hint_true = max(hint_true, true_proj.s_star)
        records.append(StepRecord(
            t=t,
            state=plant.state,
            v=plant.speed if config.plant == "kinetic" else v,
            y_del=y_del,
            y_hat=y_hat,
            s_star=true_proj.s_star,
            e_signed=true_proj.e_signed,
            delta_cmd=delta_cmd,
            delta_actual=plant.delta_actual,
            queue_newest=queue.newest_shifted,
            model_pose=queue.model_pose,
            lookahead_fallback=ctrl.lookahead_fallback,
        ))
        if i == n:
            break

        plant.step(in_line.push(delta_cmd), v, dt)
        y_del = _add_noise(out_line.push(plant.pose), config, rng)
        queue, y_hat = compensator_tick(queue, y_del, delta_cmd, v, dt)

    if fallbacks:
        logging.warning(f"Сценарий '{config.name}': точка упреждения за концом пути на {fallbacks} шагах")
    logging.info(f"Сценарий '{config.name}' завершён за {time.perf_counter() - started:.2f} с")
    metadata = {"version": VERSION, "dt_s": dt, "config": config_to_dict(config)}
    return SimTrace(records, metadata)

