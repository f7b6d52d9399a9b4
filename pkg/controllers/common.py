# controllers/common.py

# Общий интерфейс регуляторов слежения за траекторией:
# вход (обратная связь, скорость, путь, подсказка s), выход и параметры.

import math
from dataclasses import dataclass
from typing import NamedTuple

from geometry.path import ReferencePath
from utils.errors import ConfigError
from vehicles.kinematic import VehicleState


class ControllerInput(NamedTuple):
    """
     Вход регулятора.

     state - обратная связь, которую видит регулятор (истинная, задержанная или
     скомпенсированная), v - скорость, s_hint - подсказка для проекции на путь.
     ahead_m / behind_m ограничивают окно поиска проекции вокруг s_hint.
     """

    state: VehicleState
    v: float
    path: ReferencePath
    s_hint: float
    ahead_m: float = math.inf
    behind_m: float = math.inf


class ControlOutput(NamedTuple):
    # delta - до ограничения ±delta_max; s_ref - длина дуги точки проекции регулятора.
    delta: float
    s_ref: float
    lookahead_fallback: bool = False


@dataclass(frozen=True)
class StanleyParams:
    gain_k: float = 3.0
    wheelbase_l: float = 1.0

    def __post_init__(self):
        if not self.gain_k > 0.0:
            raise ConfigError(f"должен быть > 0, получено {self.gain_k}", "controller.gain_k_per_s")
        if not self.wheelbase_l > 0.0:
            raise ConfigError(f"должна быть > 0, получено {self.wheelbase_l}", "vehicle.wheelbase_m")


@dataclass(frozen=True)
class PurePursuitParams:
    lookahead_lh: float = 1.45
    wheelbase_l: float = 1.0

    def __post_init__(self):
        if not self.lookahead_lh > 0.0:
            raise ConfigError(f"должна быть > 0, получено {self.lookahead_lh}", "controller.lookahead_m")
        if not self.wheelbase_l > 0.0:
            raise ConfigError(f"должна быть > 0, получено {self.wheelbase_l}", "vehicle.wheelbase_m")


@dataclass(frozen=True)
class DubinsRobustParams:
    """
     Параметры регулятора по кратчайшему пути Дубинса.

     delta_bar - угол насыщения руля, k_rob ∈ (0, 1) - запас по радиусу поворота,
     boundary_layer - ширина пограничного слоя в метрах бокового отклонения.
     """

    delta_bar: float = 0.6
    k_rob: float = 0.5
    boundary_layer: float = 0.05
    wheelbase_l: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.delta_bar < math.pi / 2.0:
            raise ConfigError(f"должен быть в (0, π/2), получено {self.delta_bar}", "vehicle.delta_max_rad")
        if not 0.0 < self.k_rob < 1.0:
            raise ConfigError(f"должен быть в (0, 1), получено {self.k_rob}", "controller.k_rob")
        if not self.boundary_layer > 0.0:
            raise ConfigError(f"должен быть > 0, получено {self.boundary_layer}", "controller.boundary_layer_m")
        if not self.wheelbase_l > 0.0:
            raise ConfigError(f"должна быть > 0, получено {self.wheelbase_l}", "vehicle.wheelbase_m")

    @property
    def effective_radius(self) -> float:
        """Радиус поворота при насыщении, увеличенный в 1/k_rob раз."""
        return self.wheelbase_l / math.tan(self.delta_bar) / self.k_rob
