# vehicles/kinematic.py

# Дискретная кинематическая одноколейная модель (велосипедная модель).
# Угол поворота колёс постоянен на шаге, поэтому задний мост движется по дуге
# окружности и шаг вычисляется точно, без численного интегрирования.

import math
from typing import NamedTuple, Tuple

from geometry.angles import Vec2, rotate
from utils.validation import require_finite, require_positive_dt
from vehicles.params import KinematicParams

# Ниже этого значения |ψ̇·dt| дуга заменяется рядом Тейлора второго порядка.
SINGULARITY_THRESHOLD = 1e-6


class VehicleState(NamedTuple):
    """Поза автомобиля: p - положение заднего моста, psi - курс (не приводится к [0, 2π))."""

    p: Vec2
    psi: float


def kinematic_increment(psi: float, delta: float, v: float, dt: float, wheelbase: float) -> Tuple[Vec2, float]:
    """
     Приращение позы за один шаг при постоянных delta и v.

     Общая функция для реального объекта и модели предсказателя:
     обе используют одну и ту же арифметику.

     Args:
         psi (float): Текущий курс, рад.
         delta (float): Угол поворота колёс, рад.
         v (float): Скорость, м/с.
         dt (float): Шаг, с.
         wheelbase (float): База, м.

     Returns:
         tuple: (dp: Vec2 в мировой системе, dpsi: float).
     """
    require_positive_dt(dt)
    require_finite("kinematic input", psi, delta, v)
    yaw_rate = math.tan(delta) / wheelbase * v
    dpsi = yaw_rate * dt
    if abs(dpsi) < SINGULARITY_THRESHOLD:
        local = Vec2(v * dt, v * yaw_rate * dt * dt / 2.0)
    else:
        radius = v / yaw_rate
        half = math.sin(dpsi / 2.0)
        # 1 - cos(x) = 2·sin²(x/2) без потери точности при малых x.
        local = Vec2(radius * math.sin(dpsi), radius * 2.0 * half * half)
    return rotate(psi, local), dpsi


def kinematic_step(state: VehicleState, delta: float, v: float, dt: float, params: KinematicParams) -> VehicleState:
    """Один шаг модели; delta должен быть заранее ограничен ±delta_max."""
    dp, dpsi = kinematic_increment(state.psi, delta, v, dt, params.wheelbase_l)
    return VehicleState(state.p + dp, state.psi + dpsi)
