from controllers.common import (
    ControllerInput,
    ControlOutput,
    DubinsRobustParams,
    PurePursuitParams,
    StanleyParams,
)
from controllers.dubins_robust import dubins_robust_output
from controllers.pure_pursuit import pure_pursuit_output
from controllers.stanley import stanley_output

CONTROLLER_TYPES = {
    "stanley": StanleyParams,
    "pure_pursuit": PurePursuitParams,
    "dubins_robust": DubinsRobustParams,
}

_DISPATCH = {
    StanleyParams: stanley_output,
    PurePursuitParams: pure_pursuit_output,
    DubinsRobustParams: dubins_robust_output,
}


def compute_control(inp: ControllerInput, params) -> ControlOutput:
    """Вызывает регулятор, соответствующий типу параметров."""
    return _DISPATCH[type(params)](inp, params)
