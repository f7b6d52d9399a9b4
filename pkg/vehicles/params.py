# vehicles/params.py

# Параметры моделей автомобиля и их значения по умолчанию.
# Значения по умолчанию печатаются командой `main.py defaults`
# и могут быть переопределены в файле сценария.

import math
from dataclasses import dataclass, field

from utils.errors import ConfigError

# Минимальный радиус разворота оценочного автомобиля, м.
MIN_TURNING_RADIUS_M = 3.8
DEFAULT_WHEELBASE_M = 2.7
DEFAULT_DELTA_MAX_RAD = math.atan(DEFAULT_WHEELBASE_M / MIN_TURNING_RADIUS_M)
GRAVITY_MPS2 = 9.81


@dataclass(frozen=True)
class KinematicParams:
    wheelbase_l: float = 1.0
    delta_max: float = 0.6

    def __post_init__(self):
        if not self.wheelbase_l > 0.0:
            raise ConfigError(f"должна быть > 0, получено {self.wheelbase_l}", "vehicle.wheelbase_m")
        if not 0.0 < self.delta_max < math.pi / 2.0:
            raise ConfigError(f"должен быть в (0, π/2), получено {self.delta_max}", "vehicle.delta_max_rad")


@dataclass(frozen=True)
class PacejkaCoeffs:
    """
     Коэффициенты "магической формулы" Пасейки для боковой силы.

     B - жёсткость, C - форма, D - пик (доля нормальной нагрузки), E - кривизна.
     """

    B: float = 10.0
    C: float = 1.9
    D: float = 1.0
    E: float = 0.97

    def __post_init__(self):
        if not (self.B > 0.0 and self.C > 0.0 and self.D > 0.0):
            raise ConfigError(f"B, C, D должны быть > 0, получено {self}", "vehicle.pacejka")


@dataclass(frozen=True)
class DynParams:
    """
     Параметры кинетической одноколейной модели.

     По умолчанию развесовка 50/50, а задняя шина жёстче передней (B=12 против 10),
     чтобы автомобиль имел недостаточную поворачиваемость. При одинаковых шинах
     и нагрузке, пропорциональной весу, поворачиваемость была бы нейтральной.
     """

    wheelbase_l: float = DEFAULT_WHEELBASE_M
    dist_cg_front: float = DEFAULT_WHEELBASE_M / 2.0
    dist_cg_rear: float = DEFAULT_WHEELBASE_M / 2.0
    mass: float = 1500.0
    yaw_inertia: float = 2500.0
    cg_height: float = 0.5
    pacejka_front: PacejkaCoeffs = field(default_factory=PacejkaCoeffs)
    pacejka_rear: PacejkaCoeffs = field(default_factory=lambda: PacejkaCoeffs(B=12.0))
    delta_max: float = DEFAULT_DELTA_MAX_RAD
    # Постоянная времени отслеживания продольной скорости, с.
    speed_lag_s: float = 0.2
    # Максимальный внутренний шаг RK4, с.
    max_substep_s: float = 0.001

    def __post_init__(self):
        positives = {
            "wheelbase_m": self.wheelbase_l,
            "dist_cg_front_m": self.dist_cg_front,
            "dist_cg_rear_m": self.dist_cg_rear,
            "mass_kg": self.mass,
            "yaw_inertia_kgm2": self.yaw_inertia,
            "cg_height_m": self.cg_height,
            "speed_lag_s": self.speed_lag_s,
            "max_substep_s": self.max_substep_s,
        }
        for name, value in positives.items():
            if not value > 0.0:
                raise ConfigError(f"должно быть > 0, получено {value}", f"vehicle.{name}")
        if abs(self.dist_cg_front + self.dist_cg_rear - self.wheelbase_l) > 1e-9:
            raise ConfigError(
                f"сумма плеч {self.dist_cg_front} + {self.dist_cg_rear} не равна базе {self.wheelbase_l}",
                "vehicle.dist_cg_front_m",
            )
        if not 0.0 < self.delta_max < math.pi / 2.0:
            raise ConfigError(f"должен быть в (0, π/2), получено {self.delta_max}", "vehicle.delta_max_rad")

    def kinematic(self) -> KinematicParams:
        """Кинематическая модель с той же базой и тем же ограничением руля."""
        return KinematicParams(self.wheelbase_l, self.delta_max)
