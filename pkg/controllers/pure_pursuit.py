# controllers/pure_pursuit.py

# Регулятор Pure Pursuit: цель на пути на евклидовом расстоянии l_h от заднего моста.

import logging
import math

from scipy.optimize import brentq

from controllers.common import ControllerInput, ControlOutput, PurePursuitParams
from geometry.angles import Vec2
from geometry.path import path_point_at, project_to_path

# Шаг перебора вдоль пути не больше этой величины и 0.1·l_h, м.
MAX_MARCH_STEP_M = 0.25


def pure_pursuit_law(e_pp: float, wheelbase: float, lookahead: float) -> float:
    """δ = arctan(2·l·e_pp / l_h²); e_pp - боковое смещение цели в связанной системе."""
    return math.atan(2.0 * wheelbase * e_pp / (lookahead * lookahead))


def find_lookahead_point(path, p: Vec2, s_from: float, lookahead: float):
    """
     Первая точка пути с s >= s_from на расстоянии lookahead от p.

     Returns:
         tuple: (s цели, точка цели, признак отката на конец пути).
     """

    def gap(s):
        return (path_point_at(path, s)[0] - p).norm() - lookahead

    if gap(s_from) >= 0.0:
        # Автомобиль дальше l_h от пути: целимся в ближайшую точку.
        return s_from, path_point_at(path, s_from)[0], False

    step = min(0.1 * lookahead, MAX_MARCH_STEP_M)
    s_prev = s_from
    while s_prev < path.total_length:
        s_next = min(s_prev + step, path.total_length)
        if gap(s_next) >= 0.0:
            s_target = brentq(gap, s_prev, s_next, xtol=1e-12)
            return s_target, path_point_at(path, s_target)[0], False
        s_prev = s_next

    logging.debug(f"Точка упреждения за концом пути, цель - конечная точка s={path.total_length:.3f}")
    return path.total_length, path_point_at(path, path.total_length)[0], True


def pure_pursuit_output(inp: ControllerInput, params: PurePursuitParams) -> ControlOutput:
    p = inp.state.p
    psi = inp.state.psi
    proj = project_to_path(inp.path, p, inp.s_hint, inp.ahead_m, inp.behind_m)
    _, target, fallback = find_lookahead_point(inp.path, p, proj.s_star, params.lookahead_lh)
    d = target - p
    e_pp = -math.sin(psi) * d.x + math.cos(psi) * d.y
    delta = pure_pursuit_law(e_pp, params.wheelbase_l, params.lookahead_lh)
    return ControlOutput(delta, proj.s_star, fallback)


def pure_pursuit_control(inp: ControllerInput, params: PurePursuitParams) -> float:
    return pure_pursuit_output(inp, params).delta
