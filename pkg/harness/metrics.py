# harness/metrics.py

# Показатели качества слежения по трассе.
#
# Окно "после выхода на путь" начинается с первого |e| < reach_threshold.
# Колебание считается незатухающим, если в последних window_s секундах этого окна
# не меньше 5 смен знака e и все пики между сменами знака не ниже половины первого.

import logging
import math
from typing import Dict, List, Mapping, NamedTuple, Union

import numpy as np

from harness.simulation import SimTrace
from utils.errors import TraceError

MIN_SUSTAINED_CROSSINGS = 5
PEAK_DECAY_RATIO = 0.5


class Metrics(NamedTuple):
    rms_e: float
    max_abs_e: float
    settle_time: float
    zero_crossings: int
    oscillation_sustained: bool
    mean_abs_delta_rate: float
    oscillation_amplitude: float
    reach_time: float
    overshoot: float


def crossing_indices(e: np.ndarray, deadband: float) -> List[int]:
    """
     Индексы смен знака e с гистерезисом.

     Знак меняется, только когда e выходит за ±deadband с другой стороны;
     шум внутри полосы смену знака не даёт.
     """
    crossings = []
    state = 0
    for i, value in enumerate(e):
        if value > deadband:
            current = 1
        elif value < -deadband:
            current = -1
        else:
            continue
        if state != 0 and current != state:
            crossings.append(i)
        state = current
    return crossings


def _is_sustained(e: np.ndarray, deadband: float) -> bool:
    crossings = crossing_indices(e, deadband)
    if len(crossings) < MIN_SUSTAINED_CROSSINGS:
        return False
    abs_e = np.abs(e)
    peaks = [float(abs_e[a:b].max()) for a, b in zip(crossings[:-1], crossings[1:])]
    return all(p >= PEAK_DECAY_RATIO * peaks[0] for p in peaks)


def compute_metrics(
    trace: Union[SimTrace, Mapping[str, np.ndarray]],
    eps_settle: float = 0.05,
    window_s: float = 30.0,
    reach_threshold: float = 0.5,
    deadband: float = 1e-3,
) -> Metrics:
    """
     Вычисляет показатели по трассе.

     Args:
         trace: SimTrace или столбцы трассы (t_s, e_m, delta_cmd_rad), например прочитанные из CSV.
         eps_settle (float): Порог установления |e|, м.
         window_s (float): Длина окна анализа колебаний в конце трассы, с.
         reach_threshold (float): Порог выхода на путь, м.
         deadband (float): Полоса гистерезиса при подсчёте смен знака, м.

     Returns:
         Metrics: rms и максимум |e| после выхода на путь, время установления
                  (inf, если не установилось), число смен знака, признак
                  незатухающего колебания, средняя скорость руления,
                  перерегулирование после первой смены знака.

     Raises:
         TraceError: Пустая трасса.
     """
    columns: Dict[str, np.ndarray] = trace.columns() if isinstance(trace, SimTrace) else trace
    t = np.asarray(columns["t_s"], dtype=float)
    e = np.asarray(columns["e_m"], dtype=float)
    delta = np.asarray(columns["delta_cmd_rad"], dtype=float)
    if t.size == 0:
        error_msg = "Трасса пуста: показатели не вычисляются"
        logging.error(error_msg)
        raise TraceError(error_msg)

    abs_e = np.abs(e)
    reached = np.flatnonzero(abs_e < reach_threshold)
    reach = int(reached[0]) if reached.size else 0
    reach_time = float(t[reach]) if reached.size else math.inf

    post = e[reach:]
    rms_e = float(np.sqrt(np.mean(post ** 2)))
    max_abs_e = float(np.abs(post).max())

    outside = np.flatnonzero(abs_e >= eps_settle)
    if outside.size == 0:
        settle_time = float(t[0])
    elif outside[-1] == t.size - 1:
        settle_time = math.inf
    else:
        settle_time = float(t[outside[-1] + 1])

    window = post[t[reach:] >= t[-1] - window_s]
    sustained = _is_sustained(window, deadband)
    amplitude = float(np.abs(window).max()) if window.size else 0.0

    # Перерегулирование - пик |e| по другую сторону пути после первой смены знака.
    post_crossings = crossing_indices(post, deadband)
    overshoot = float(np.abs(post[post_crossings[0]:]).max()) if post_crossings else 0.0

    if t.size > 1:
        dt = float(np.mean(np.diff(t)))
        rate = float(np.mean(np.abs(np.diff(delta)))) / dt
    else:
        rate = 0.0

    return Metrics(
        rms_e=rms_e,
        max_abs_e=max_abs_e,
        settle_time=settle_time,
        zero_crossings=len(post_crossings),
        oscillation_sustained=sustained,
        mean_abs_delta_rate=rate,
        oscillation_amplitude=amplitude,
        reach_time=reach_time,
        overshoot=overshoot,
    )


def metrics_for(trace: SimTrace, config) -> Metrics:
    """Показатели с порогами из раздела metrics конфигурации."""
    m = config.metrics
    return compute_metrics(trace, m.eps_settle_m, m.window_s, m.reach_threshold_m, m.deadband_m)
