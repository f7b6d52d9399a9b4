# vehicles/kinetic.py

# Кинетическая одноколейная модель с шинами Пасейки и переносом нагрузки.
# Состояние: положение заднего моста, курс, продольная и боковая скорость
# центра масс, угловая скорость рыскания.
# Интегрирование - RK4 с внутренним шагом не больше params.max_substep_s.

import math
from typing import NamedTuple, Tuple

from geometry.angles import Vec2
from utils.validation import require_finite, require_positive_dt
from vehicles.params import GRAVITY_MPS2, DynParams, PacejkaCoeffs


class DynVehicleState(NamedTuple):
    p: Vec2
    psi: float
    v_long: float
    v_lat: float
    yaw_rate: float

    @classmethod
    def at_rest_on(cls, p: Vec2, psi: float, v_long: float) -> "DynVehicleState":
        """Прямолинейное движение без бокового скольжения."""
        return cls(Vec2(*p), psi, v_long, 0.0, 0.0)


def pacejka_lateral_force(alpha: float, f_z: float, coeffs: PacejkaCoeffs) -> float:
    """
     Боковая сила шины по "магической формуле".

     F_y = D·f_z·sin(C·arctan(B·α - E·(B·α - arctan(B·α)))).
     Функция нечётна по α; при малых α F_y ≈ B·C·D·f_z·α.

     Args:
         alpha (float): Угол увода, рад.
         f_z (float): Нормальная нагрузка на ось, Н (>= 0).
         coeffs (PacejkaCoeffs): Коэффициенты формулы.

     Returns:
         float: Боковая сила, Н.
     """
    b_alpha = coeffs.B * alpha
    return coeffs.D * f_z * math.sin(coeffs.C * math.atan(b_alpha - coeffs.E * (b_alpha - math.atan(b_alpha))))


def axle_loads(accel_long: float, params: DynParams) -> Tuple[float, float]:
    """Нормальные нагрузки (перед, зад) со статическим распределением и продольным переносом."""
    weight = params.mass * GRAVITY_MPS2
    transfer = params.mass * accel_long * params.cg_height / params.wheelbase_l
    f_zf = weight * params.dist_cg_rear / params.wheelbase_l - transfer
    f_zr = weight * params.dist_cg_front / params.wheelbase_l + transfer
    # Колесо не может тянуть дорогу вниз.
    return max(f_zf, 0.0), max(f_zr, 0.0)


def _derivatives(s: Tuple[float, ...], delta: float, v_cmd: float, params: DynParams) -> Tuple[float, ...]:
    x, y, psi, v_long, v_lat, r = s
    a = params.dist_cg_front
    b = params.dist_cg_rear

    accel_long = (v_cmd - v_long) / params.speed_lag_s
    f_zf, f_zr = axle_loads(accel_long, params)

    alpha_f = delta - math.atan2(v_lat + a * r, v_long)
    alpha_r = -math.atan2(v_lat - b * r, v_long)
    f_yf = pacejka_lateral_force(alpha_f, f_zf, params.pacejka_front)
    f_yr = pacejka_lateral_force(alpha_r, f_zr, params.pacejka_rear)

    cos_d = math.cos(delta)
    v_lat_dot = (f_yf * cos_d + f_yr) / params.mass - v_long * r
    r_dot = (a * f_yf * cos_d - b * f_yr) / params.yaw_inertia

    # Скорость заднего моста в связанной системе: (v_long, v_lat - b·r).
    c = math.cos(psi)
    sn = math.sin(psi)
    rear_lat = v_lat - b * r
    return (c * v_long - sn * rear_lat, sn * v_long + c * rear_lat, r, accel_long, v_lat_dot, r_dot)


def _rk4(s, h, delta, v_cmd, params):
    k1 = _derivatives(s, delta, v_cmd, params)
    k2 = _derivatives(tuple(si + h / 2.0 * ki for si, ki in zip(s, k1)), delta, v_cmd, params)
    k3 = _derivatives(tuple(si + h / 2.0 * ki for si, ki in zip(s, k2)), delta, v_cmd, params)
    k4 = _derivatives(tuple(si + h * ki for si, ki in zip(s, k3)), delta, v_cmd, params)
    return tuple(si + h / 6.0 * (a + 2.0 * b + 2.0 * c + d) for si, a, b, c, d in zip(s, k1, k2, k3, k4))


def kinetic_step(state: DynVehicleState, delta: float, v_cmd: float, dt: float, params: DynParams) -> DynVehicleState:
    """
     Один шаг кинетической модели длительностью dt.

     Шаг делится на равные внутренние шаги RK4 не длиннее params.max_substep_s.

     Args:
         state (DynVehicleState): Текущее состояние.
         delta (float): Угол поворота колёс, уже ограниченный ±delta_max.
         v_cmd (float): Заданная продольная скорость, м/с.
         dt (float): Длительность шага, с.
         params (DynParams): Параметры автомобиля.

     Returns:
         DynVehicleState: Состояние через dt.

     Raises:
         DomainError: dt <= 0 или нечисловое состояние.
     """
    require_positive_dt(dt)
    require_finite("kinetic state", state.p.x, state.p.y, state.psi, state.v_long, state.v_lat, state.yaw_rate)
    require_finite("kinetic input", delta, v_cmd)

    substeps = max(1, math.ceil(dt / params.max_substep_s - 1e-9))
    h = dt / substeps
    s = (state.p.x, state.p.y, state.psi, state.v_long, state.v_lat, state.yaw_rate)
    for _ in range(substeps):
        s = _rk4(s, h, delta, v_cmd, params)
    return DynVehicleState(Vec2(s[0], s[1]), s[2], s[3], s[4], s[5])
