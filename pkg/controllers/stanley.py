# controllers/stanley.py

import logging
import math

from controllers.common import ControllerInput, ControlOutput, StanleyParams
from geometry.angles import angle_diff, heading_vector
from geometry.path import project_to_path
from utils.errors import DomainError


def stanley_output(inp: ControllerInput, params: StanleyParams) -> ControlOutput:
    """
     Регулятор Stanley: ошибка курса плюс arctan(k·e/v) по отклонению переднего моста.

     Отклонение e берётся для переднего моста (p + l·[cos ψ, sin ψ]); направление
     пути - в той же точке проекции. e > 0 (слева от пути) даёт δ < 0.

     Raises:
         DomainError: v <= 0.
     """
    if not inp.v > 0.0:
        error_msg = f"Регулятор Stanley требует v > 0, получено v={inp.v}"
        logging.error(error_msg)
        raise DomainError(error_msg)
    psi = inp.state.psi
    front = inp.state.p + heading_vector(psi).scale(params.wheelbase_l)
    proj = project_to_path(inp.path, front, inp.s_hint, inp.ahead_m, inp.behind_m)
    delta = angle_diff(proj.phi_ref, psi) - math.atan(params.gain_k * proj.e_signed / inp.v)
    return ControlOutput(delta, proj.s_star)


def stanley_control(inp: ControllerInput, params: StanleyParams) -> float:
    return stanley_output(inp, params).delta
