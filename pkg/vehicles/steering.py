# vehicles/steering.py

# Рулевой привод: три одинаковых апериодических звена первого порядка.
# Звенья дискретизированы точно (экстраполятор нулевого порядка) с внутренним
# шагом inner_step_s, поэтому коэффициент передачи на постоянном сигнале равен 1.

import math
from typing import NamedTuple, Tuple

from utils.validation import integer_ratio, require_finite, require_positive_dt

DEFAULT_TAU_S = 0.05
DEFAULT_INNER_STEP_S = 0.001


class SteeringFilterState(NamedTuple):
    stages: Tuple[float, float, float]
    inner_step_s: float = DEFAULT_INNER_STEP_S
    tau_s: float = DEFAULT_TAU_S

    @classmethod
    def settled(cls, delta: float = 0.0, inner_step_s: float = DEFAULT_INNER_STEP_S,
                tau_s: float = DEFAULT_TAU_S) -> "SteeringFilterState":
        """Фильтр в установившемся состоянии с выходом delta."""
        return cls((delta, delta, delta), inner_step_s, tau_s)

    @property
    def output(self) -> float:
        return self.stages[-1]


def steering_actuator_step(
    filter: SteeringFilterState, delta_cmd: float, dt: float
) -> Tuple[SteeringFilterState, float]:
    """
     Продвигает фильтр на dt внутренними шагами.

     Каждое звено обновляется от уже обновлённого выхода предыдущего:
     x += (1 - exp(-h/τ))·(u - x).

     Returns:
         tuple: (новое состояние фильтра, фактический угол поворота колёс).

     Raises:
         ConfigError: dt не кратно внутреннему шагу.
     """
    require_positive_dt(dt)
    require_finite("delta_cmd", delta_cmd)
    n = integer_ratio(dt, filter.inner_step_s, "steering_filter.inner_step_s")
    gain = 1.0 - math.exp(-filter.inner_step_s / filter.tau_s)
    x1, x2, x3 = filter.stages
    for _ in range(n):
        x1 += gain * (delta_cmd - x1)
        x2 += gain * (x1 - x2)
        x3 += gain * (x2 - x3)
    return filter._replace(stages=(x1, x2, x3)), x3
