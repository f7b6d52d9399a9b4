# controllers/dubins_robust.py

# Релейный регулятор по линии переключения кратчайшего пути Дубинса.
#
# Линия переключения - траектория выхода на прямую по дуге радиуса r_eff:
# σ = -θ - sign(e)·arccos(1 - min(|e|, r_eff)/r_eff), θ = ψ - φ_ref.
# Выход δ̄·sign(σ); в пограничном слое |σ| < σ_b он линейно интерполируется,
# σ_b = arccos(1 - min(b, r_eff)/r_eff) - ширина слоя b, пересчитанная в единицы σ.

import math

import numpy as np

from controllers.common import ControllerInput, ControlOutput, DubinsRobustParams
from geometry.angles import angle_diff
from geometry.path import project_to_path


def switching_function(e: float, heading_error: float, r_eff: float) -> float:
    reach = math.acos(1.0 - min(abs(e), r_eff) / r_eff)
    return -heading_error - float(np.sign(e)) * reach


def dubins_robust_output(inp: ControllerInput, params: DubinsRobustParams) -> ControlOutput:
    proj = project_to_path(inp.path, inp.state.p, inp.s_hint, inp.ahead_m, inp.behind_m)
    r_eff = params.effective_radius
    sigma = switching_function(proj.e_signed, angle_diff(inp.state.psi, proj.phi_ref), r_eff)
    sigma_b = math.acos(1.0 - min(params.boundary_layer, r_eff) / r_eff)
    delta = params.delta_bar * float(np.clip(sigma / sigma_b, -1.0, 1.0))
    return ControlOutput(delta, proj.s_star)


def dubins_robust_control(inp: ControllerInput, params: DubinsRobustParams) -> float:
    return dubins_robust_output(inp, params).delta
