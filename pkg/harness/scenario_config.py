# harness/scenario_config.py

# Чтение, проверка и сохранение конфигурации сценария (YAML).
#
# Файл сценария накладывается на встроенные значения по умолчанию.
# Неизвестные ключи отклоняются, все физические величины имеют единицы
# в имени поля (..._s, ..._m, ..._mps, ..._rad).

import copy
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Tuple, Union

import yaml

from compensator.predictor import CompensatorConfig
from controllers import CONTROLLER_TYPES, DubinsRobustParams, PurePursuitParams, StanleyParams
from geometry.path import Pose, ReferencePath, SegmentSpec, build_path
from utils.errors import ConfigError, ConfigParseError
from utils.validation import integer_ratio
from vehicles.params import DEFAULT_DELTA_MAX_RAD, DEFAULT_WHEELBASE_M, DynParams, KinematicParams, PacejkaCoeffs
from vehicles.steering import DEFAULT_INNER_STEP_S, DEFAULT_TAU_S

PLANT_TYPES = ("kinematic", "kinetic")

# --- Значения по умолчанию ---

DEFAULT_SCENARIO: Dict[str, Any] = {
    "name": "scenario",
    "plant": "kinematic",
    "dt_s": 0.01,
    "duration_s": 60.0,
    "seed": 0,
    "initial_pose": {"x_m": 0.0, "y_m": -5.0, "psi_rad": 0.0},
    "speed": {"v0_mps": 1.0, "v1_mps": None, "ramp_start_s": 0.0, "ramp_duration_s": 0.0},
    "delays": {"input_s": 0.0, "output_s": 0.0, "constant_dead_time_s": 0.0},
    "vehicle": {},
    "steering_filter": {},
    "controller": {"type": "stanley"},
    "compensator": {"enabled": False, "dt_hat_s": 0.0, "wheelbase_hat_m": None},
    "path": {
        "start": {"x_m": 0.0, "y_m": 0.0, "psi_rad": 0.0},
        "segments": [{"type": "line", "length_m": 100.0}],
    },
    "noise": {"position_std_m": 0.0, "heading_std_rad": 0.0},
    "metrics": {"eps_settle_m": 0.05, "window_s": 30.0, "reach_threshold_m": 0.5, "deadband_m": 1e-3},
}

_PACEJKA_FRONT = PacejkaCoeffs()
_PACEJKA_REAR = DynParams().pacejka_rear

PLANT_DEFAULTS: Dict[str, Dict[str, Any]] = {
    "kinematic": {
        "vehicle": {"wheelbase_m": 1.0, "delta_max_rad": 0.6},
        "steering_filter": {"enabled": False, "tau_s": DEFAULT_TAU_S, "inner_step_s": DEFAULT_INNER_STEP_S},
    },
    "kinetic": {
        "vehicle": {
            "wheelbase_m": DEFAULT_WHEELBASE_M,
            "delta_max_rad": DEFAULT_DELTA_MAX_RAD,
            "dist_cg_front_m": DEFAULT_WHEELBASE_M / 2.0,
            "dist_cg_rear_m": DEFAULT_WHEELBASE_M / 2.0,
            "mass_kg": 1500.0,
            "yaw_inertia_kgm2": 2500.0,
            "cg_height_m": 0.5,
            "speed_lag_s": 0.2,
            "max_substep_s": 0.001,
            "pacejka_front": asdict(_PACEJKA_FRONT),
            "pacejka_rear": asdict(_PACEJKA_REAR),
        },
        "steering_filter": {"enabled": True, "tau_s": DEFAULT_TAU_S, "inner_step_s": DEFAULT_INNER_STEP_S},
    },
}

CONTROLLER_DEFAULTS: Dict[str, Dict[str, Any]] = {
    "stanley": {"type": "stanley", "gain_k_per_s": 3.0},
    "pure_pursuit": {"type": "pure_pursuit", "lookahead_m": 1.45},
    "dubins_robust": {"type": "dubins_robust", "k_rob": 0.5, "boundary_layer_m": 0.05, "delta_bar_rad": None},
}

SEGMENT_DEFAULTS = {"type": None, "length_m": None, "start_curvature_per_m": 0.0, "end_curvature_per_m": None}


# --- Записи конфигурации ---

@dataclass(frozen=True)
class SpeedProfile:
    """Постоянная скорость v0 или линейный разгон v0 -> v1 за ramp_duration_s начиная с ramp_start_s."""

    v0_mps: float
    v1_mps: float = None
    ramp_start_s: float = 0.0
    ramp_duration_s: float = 0.0

    def speed_at(self, t: float) -> float:
        if self.v1_mps is None or t <= self.ramp_start_s:
            return self.v0_mps
        if self.ramp_duration_s <= 0.0 or t >= self.ramp_start_s + self.ramp_duration_s:
            return self.v1_mps
        fraction = (t - self.ramp_start_s) / self.ramp_duration_s
        return self.v0_mps + (self.v1_mps - self.v0_mps) * fraction

    @property
    def v_max(self) -> float:
        return max(self.v0_mps, self.v1_mps if self.v1_mps is not None else self.v0_mps)


@dataclass(frozen=True)
class DelayConfig:
    input_s: float = 0.0
    output_s: float = 0.0
    constant_dead_time_s: float = 0.0

    def steps(self, dt: float) -> Tuple[int, int]:
        """
         Запаздывания в шагах (вход, выход).

         Постоянное запаздывание делится: ⌊k/2⌋ шагов на вход, остаток на выход.
         """
        k_in = integer_ratio(self.input_s, dt, "delays.input_s")
        k_out = integer_ratio(self.output_s, dt, "delays.output_s")
        k_const = integer_ratio(self.constant_dead_time_s, dt, "delays.constant_dead_time_s")
        return k_in + k_const // 2, k_out + k_const - k_const // 2


@dataclass(frozen=True)
class SteeringFilterConfig:
    enabled: bool = False
    tau_s: float = DEFAULT_TAU_S
    inner_step_s: float = DEFAULT_INNER_STEP_S


@dataclass(frozen=True)
class NoiseConfig:
    position_std_m: float = 0.0
    heading_std_rad: float = 0.0

    @property
    def enabled(self) -> bool:
        return self.position_std_m > 0.0 or self.heading_std_rad > 0.0


@dataclass(frozen=True)
class MetricsConfig:
    eps_settle_m: float = 0.05
    window_s: float = 30.0
    reach_threshold_m: float = 0.5
    deadband_m: float = 1e-3


ControllerParams = Union[StanleyParams, PurePursuitParams, DubinsRobustParams]


@dataclass(frozen=True)
class ScenarioConfig:
    """
     Проверенная конфигурация одного прогона.

     raw - каноническая форма (все значения по умолчанию заполнены);
     её же печатает config_to_dict, поэтому чтение эха даёт ту же конфигурацию.
     """

    name: str
    plant: str
    dt_s: float
    duration_s: float
    seed: int
    initial_pose: Pose
    speed: SpeedProfile
    delays: DelayConfig
    vehicle: Union[KinematicParams, DynParams]
    steering_filter: SteeringFilterConfig
    controller: ControllerParams
    compensator: CompensatorConfig
    path: ReferencePath
    noise: NoiseConfig
    metrics: MetricsConfig
    raw: Dict[str, Any] = field(repr=False, compare=False, default_factory=dict)

    @property
    def steps(self) -> int:
        return integer_ratio(self.duration_s, self.dt_s, "duration_s")

    @property
    def wheelbase(self) -> float:
        return self.vehicle.wheelbase_l

    @property
    def delta_max(self) -> float:
        return self.vehicle.delta_max


# --- Слияние словарей ---

def deep_merge(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    """
     Накладывает overrides на base без проверки ключей.

     Вложенный словарь с ключом "type" заменяется целиком: смена типа
     регулятора не должна тащить параметры прежнего типа.
     """
    result = copy.deepcopy(base)
    for key, value in (overrides or {}).items():
        if isinstance(value, dict) and isinstance(result.get(key), dict) and "type" not in value:
            result[key] = deep_merge(result[key], value)
        else:
            result[key] = copy.deepcopy(value)
    return result


def _fill(defaults: Dict[str, Any], given: Any, where: str) -> Dict[str, Any]:
    # Наложение с проверкой неизвестных ключей.
    if given is None:
        given = {}
    if not isinstance(given, dict):
        raise ConfigError(f"ожидается словарь, получено {type(given).__name__}", where)
    unknown = sorted(set(given) - set(defaults))
    if unknown:
        error_msg = f"неизвестные ключи {unknown}; допустимы {sorted(defaults)}"
        logging.error(f"{where}: {error_msg}")
        raise ConfigError(error_msg, where)
    result = {}
    for key, default in defaults.items():
        sub = f"{where}.{key}" if where else key
        if isinstance(default, dict) and default:
            result[key] = _fill(default, given.get(key), sub)
        else:
            result[key] = copy.deepcopy(given.get(key, default))
    return result


def _number(value: Any, where: str, allow_none: bool = False) -> float:
    if value is None and allow_none:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"ожидается число, получено {value!r}", where)
    if not math.isfinite(value):
        raise ConfigError(f"ожидается конечное число, получено {value!r}", where)
    return float(value)


def _numbers(section: Dict[str, Any], where: str, allow_none=()) -> Dict[str, Any]:
    return {
        key: _number(value, f"{where}.{key}", key in allow_none) if not isinstance(value, dict) else value
        for key, value in section.items()
    }


# --- Разбор разделов ---

def _canonical(data: Dict[str, Any]) -> Dict[str, Any]:
    if not isinstance(data, dict):
        raise ConfigError(f"корень конфигурации должен быть словарём, получено {type(data).__name__}", "")
    plant = data.get("plant", DEFAULT_SCENARIO["plant"])
    if plant not in PLANT_TYPES:
        raise ConfigError(f"неизвестный тип объекта '{plant}', допустимы {PLANT_TYPES}", "plant")

    controller = data.get("controller") or {}
    ctrl_type = controller.get("type", "stanley") if isinstance(controller, dict) else None
    if ctrl_type not in CONTROLLER_DEFAULTS:
        raise ConfigError(f"неизвестный тип регулятора '{ctrl_type}', допустимы {sorted(CONTROLLER_TYPES)}",
                          "controller.type")

    defaults = copy.deepcopy(DEFAULT_SCENARIO)
    defaults.update(copy.deepcopy(PLANT_DEFAULTS[plant]))
    defaults["controller"] = copy.deepcopy(CONTROLLER_DEFAULTS[ctrl_type])
    # Сегменты пути - список, проверяются отдельно.
    defaults["path"]["segments"] = {}
    segments = (data.get("path") or {}).get("segments", DEFAULT_SCENARIO["path"]["segments"])
    without_segments = dict(data)
    if "path" in data:
        without_segments["path"] = {k: v for k, v in (data["path"] or {}).items() if k != "segments"}
    merged = _fill(defaults, without_segments, "")

    if not isinstance(segments, list) or not segments:
        error_msg = "путь должен содержать непустой список сегментов"
        logging.error(error_msg)
        raise ConfigError(error_msg, "path.segments")
    canonical_segments = []
    for i, segment in enumerate(segments):
        filled = _fill(SEGMENT_DEFAULTS, segment, f"path.segments[{i}]")
        if filled["end_curvature_per_m"] is None:
            filled["end_curvature_per_m"] = filled["start_curvature_per_m"]
        canonical_segments.append(filled)
    merged["path"]["segments"] = canonical_segments
    return merged


def _parse_vehicle(plant: str, v: Dict[str, Any]):
    v = _numbers(v, "vehicle")
    if plant == "kinematic":
        return KinematicParams(v["wheelbase_m"], v["delta_max_rad"])
    front = PacejkaCoeffs(**_numbers(v["pacejka_front"], "vehicle.pacejka_front"))
    rear = PacejkaCoeffs(**_numbers(v["pacejka_rear"], "vehicle.pacejka_rear"))
    return DynParams(
        wheelbase_l=v["wheelbase_m"],
        dist_cg_front=v["dist_cg_front_m"],
        dist_cg_rear=v["dist_cg_rear_m"],
        mass=v["mass_kg"],
        yaw_inertia=v["yaw_inertia_kgm2"],
        cg_height=v["cg_height_m"],
        pacejka_front=front,
        pacejka_rear=rear,
        delta_max=v["delta_max_rad"],
        speed_lag_s=v["speed_lag_s"],
        max_substep_s=v["max_substep_s"],
    )


def _parse_controller(c: Dict[str, Any], vehicle) -> ControllerParams:
    values = _numbers({k: v for k, v in c.items() if k != "type"}, "controller", allow_none=("delta_bar_rad",))
    if c["type"] == "stanley":
        return StanleyParams(values["gain_k_per_s"], vehicle.wheelbase_l)
    if c["type"] == "pure_pursuit":
        return PurePursuitParams(values["lookahead_m"], vehicle.wheelbase_l)
    # Насыщение регулятора - не больше предельного угла руля автомобиля.
    delta_bar = values["delta_bar_rad"]
    if delta_bar is None:
        delta_bar = vehicle.delta_max
    elif delta_bar > vehicle.delta_max:
        raise ConfigError(f"должен быть не больше vehicle.delta_max_rad = {vehicle.delta_max}, получено {delta_bar}",
                          "controller.delta_bar_rad")
    return DubinsRobustParams(delta_bar, values["k_rob"], values["boundary_layer_m"], vehicle.wheelbase_l)


def _parse_bool(value: Any, where: str) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(f"ожидается true/false, получено {value!r}", where)
    return value


def parse_config(data: Dict[str, Any]) -> ScenarioConfig:
    """
     Проверяет словарь сценария и строит ScenarioConfig.

     Args:
         data (dict): Содержимое файла сценария (может быть неполным).

     Returns:
         ScenarioConfig: Проверенная конфигурация с заполненными значениями по умолчанию.

     Raises:
         ConfigError: Ошибка с указанием поля (например, "delays.input_s").
     """
    raw = _canonical(data)
    dt = _number(raw["dt_s"], "dt_s")
    if dt <= 0.0:
        raise ConfigError(f"должен быть > 0, получено {dt}", "dt_s")
    duration = _number(raw["duration_s"], "duration_s")
    integer_ratio(duration, dt, "duration_s")
    seed = raw["seed"]
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigError(f"ожидается целое, получено {seed!r}", "seed")
    if not isinstance(raw["name"], str):
        raise ConfigError(f"ожидается строка, получено {raw['name']!r}", "name")

    pose = _numbers(raw["initial_pose"], "initial_pose")
    initial_pose = Pose(pose["x_m"], pose["y_m"], pose["psi_rad"])

    sp = _numbers(raw["speed"], "speed", allow_none=("v1_mps",))
    speed = SpeedProfile(sp["v0_mps"], sp["v1_mps"], sp["ramp_start_s"], sp["ramp_duration_s"])
    if speed.v0_mps < 0.0 or (speed.v1_mps is not None and speed.v1_mps < 0.0):
        raise ConfigError("скорость должна быть >= 0", "speed")

    d = _numbers(raw["delays"], "delays")
    delays = DelayConfig(d["input_s"], d["output_s"], d["constant_dead_time_s"])
    delays.steps(dt)

    vehicle = _parse_vehicle(raw["plant"], raw["vehicle"])

    sf = raw["steering_filter"]
    sf_num = _numbers({k: v for k, v in sf.items() if k != "enabled"}, "steering_filter")
    steering_filter = SteeringFilterConfig(_parse_bool(sf["enabled"], "steering_filter.enabled"),
                                           sf_num["tau_s"], sf_num["inner_step_s"])
    if steering_filter.enabled:
        if steering_filter.tau_s <= 0.0 or steering_filter.inner_step_s <= 0.0:
            raise ConfigError("tau_s и inner_step_s должны быть > 0", "steering_filter")
        integer_ratio(dt, steering_filter.inner_step_s, "steering_filter.inner_step_s")

    controller = _parse_controller(raw["controller"], vehicle)

    comp = raw["compensator"]
    compensator = CompensatorConfig(
        _parse_bool(comp["enabled"], "compensator.enabled"),
        _number(comp["dt_hat_s"], "compensator.dt_hat_s"),
        _number(comp["wheelbase_hat_m"], "compensator.wheelbase_hat_m", allow_none=True),
    )
    compensator.steps(dt)

    start = _numbers(raw["path"]["start"], "path.start")
    specs = []
    for i, seg in enumerate(raw["path"]["segments"]):
        where = f"path.segments[{i}]"
        specs.append(SegmentSpec(
            seg["type"],
            _number(seg["length_m"], f"{where}.length_m"),
            _number(seg["start_curvature_per_m"], f"{where}.start_curvature_per_m"),
            _number(seg["end_curvature_per_m"], f"{where}.end_curvature_per_m"),
        ))
    path = build_path(Pose(start["x_m"], start["y_m"], start["psi_rad"]), specs)

    nz = _numbers(raw["noise"], "noise")
    noise = NoiseConfig(nz["position_std_m"], nz["heading_std_rad"])
    if noise.position_std_m < 0.0 or noise.heading_std_rad < 0.0:
        raise ConfigError("стандартные отклонения должны быть >= 0", "noise")

    metrics = MetricsConfig(**_numbers(raw["metrics"], "metrics"))

    return ScenarioConfig(
        name=raw["name"],
        plant=raw["plant"],
        dt_s=dt,
        duration_s=duration,
        seed=seed,
        initial_pose=initial_pose,
        speed=speed,
        delays=delays,
        vehicle=vehicle,
        steering_filter=steering_filter,
        controller=controller,
        compensator=compensator,
        path=path,
        noise=noise,
        metrics=metrics,
        raw=raw,
    )


def config_to_dict(config: ScenarioConfig) -> Dict[str, Any]:
    """Каноническая форма конфигурации (эхо в метаданных трассы)."""
    return copy.deepcopy(config.raw)


def with_overrides(config: ScenarioConfig, overrides: Dict[str, Any]) -> ScenarioConfig:
    return parse_config(deep_merge(config.raw, overrides))


# --- Файлы ---

def load_yaml(path: str) -> Any:
    """
     Читает YAML-файл.

     Raises:
         ConfigParseError: Синтаксическая ошибка (с номером строки и столбца).
         ConfigError: Файл не найден.
     """
    try:
        with open(path, "r", encoding="utf-8") as f:
            return yaml.safe_load(f)
    except FileNotFoundError:
        error_msg = f"Файл конфигурации не найден: {path}"
        logging.error(error_msg)
        raise ConfigError(error_msg)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        column = mark.column + 1 if mark is not None else None
        error_msg = f"Ошибка разбора YAML в {path}: {getattr(e, 'problem', None) or e}"
        logging.error(error_msg)
        raise ConfigParseError(error_msg, line, column)


def read_config(path: str) -> ScenarioConfig:
    data = load_yaml(path)
    config = parse_config(data if data is not None else {})
    logging.info(f"Конфигурация '{config.name}' прочитана из {path}")
    return config


def write_config(config: ScenarioConfig, path: str):
    with open(path, "w", encoding="utf-8") as f:
        yaml.safe_dump(config_to_dict(config), f, allow_unicode=True, sort_keys=False)


def defaults_dict() -> Dict[str, Any]:
    """Все встроенные значения по умолчанию (для команды defaults)."""
    return {
        "scenario": copy.deepcopy(DEFAULT_SCENARIO),
        "plants": copy.deepcopy(PLANT_DEFAULTS),
        "controllers": copy.deepcopy(CONTROLLER_DEFAULTS),
    }
