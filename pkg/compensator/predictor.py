# compensator/predictor.py

# Нелинейный компенсатор запаздывания.
#
# Модель объекта (кинематическая одноколейная модель с базой l̂) прогоняется
# на командах руления. Очередь хранит k+1 последних состояний модели, сдвинутых
# так, что самое старое положение всегда в начале координат: тогда очередь
# ограничена пройденным за время запаздывания путём и не растёт со временем.
# Предсказание поворачивает накопленное за k шагов смещение модели на
# расхождение курсов задержанной обратной связи и модели и прибавляет его
# к задержанному положению.

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from geometry.angles import TWO_PI, Vec2, rotate
from utils.errors import ConfigError
from utils.validation import integer_ratio
from vehicles.kinematic import VehicleState, kinematic_increment

# Столбцы очереди.
COL_X, COL_Y, COL_OFFSET, COL_HEADING = 0, 1, 2, 3


@dataclass(frozen=True)
class CompensatorConfig:
    """
     Параметры компенсатора из файла сценария.

     Args:
         enabled (bool): Включена ли компенсация.
         dt_hat_s (float): Компенсируемое запаздывание Δt̂, кратно шагу dt.
         wheelbase_hat_m (float): База модели l̂; None - взять базу объекта.
     """

    enabled: bool = False
    dt_hat_s: float = 0.0
    wheelbase_hat_m: float = None

    def __post_init__(self):
        if not (math.isfinite(self.dt_hat_s) and self.dt_hat_s >= 0.0):
            raise ConfigError(f"должно быть >= 0, получено {self.dt_hat_s}", "compensator.dt_hat_s")
        if self.wheelbase_hat_m is not None and not self.wheelbase_hat_m > 0.0:
            raise ConfigError(f"должна быть > 0, получено {self.wheelbase_hat_m}", "compensator.wheelbase_hat_m")

    def steps(self, dt: float) -> int:
        return integer_ratio(self.dt_hat_s, dt, "compensator.dt_hat_s")


class PredictorQueue:
    """
     Очередь сдвинутых состояний модели, самое старое первым.

     Строка очереди: [x, y, курс относительно самой старой строки (без приведения),
     курс в [0, 2π)]. Относительный курс накапливается без приведения, чтобы
     разность курсов не скачком на 2π при переходе через 0.

     Args:
         k (int): Глубина очереди в шагах.
         heading (float): Начальный курс модели.
         wheelbase_hat (float): База модели l̂, м.
         enabled (bool): Выключенный компенсатор пропускает обратную связь без изменений.
         origin (Vec2): Начальное абсолютное положение модели (только для трассы p̂).
     """

    def __init__(self, k: int, heading: float, wheelbase_hat: float, enabled: bool = True,
                 origin: Vec2 = Vec2(0.0, 0.0)):
        if k < 0:
            raise ConfigError(f"глубина очереди должна быть >= 0, получено {k}", "compensator.dt_hat_s")
        self.k = int(k)
        self.wheelbase_hat = wheelbase_hat
        self.enabled = enabled
        self.rows = np.zeros((self.k + 1, 4))
        self.rows[:, COL_HEADING] = _wrap(heading)
        self.model_pose = VehicleState(Vec2(*origin), heading)

    @classmethod
    def from_config(cls, config: CompensatorConfig, dt: float, heading: float, plant_wheelbase: float,
                    origin: Vec2 = Vec2(0.0, 0.0)) -> "PredictorQueue":
        wheelbase_hat = config.wheelbase_hat_m if config.wheelbase_hat_m is not None else plant_wheelbase
        k = config.steps(dt)
        logging.info(f"Компенсатор: {'включён' if config.enabled else 'выключен'}, k={k}, l̂={wheelbase_hat} м")
        return cls(k, heading, wheelbase_hat, config.enabled, origin)

    @property
    def shifted_positions(self) -> np.ndarray:
        return self.rows[:, :2]

    @property
    def headings(self) -> np.ndarray:
        return self.rows[:, COL_HEADING]

    @property
    def newest_shifted(self) -> Vec2:
        return Vec2(float(self.rows[-1, COL_X]), float(self.rows[-1, COL_Y]))


def _wrap(theta):
    wrapped = np.mod(theta, TWO_PI)
    return np.where(wrapped >= TWO_PI, 0.0, wrapped)


def f_pm(psi_hat: float, delta: float, v: float, dt: float, l_hat: float) -> Tuple[Vec2, float]:
    """Приращение модели объекта; та же функция, что и у кинематического объекта."""
    return kinematic_increment(psi_hat, delta, v, dt, l_hat)


def predictor_step(queue: PredictorQueue, delta_cmd: float, v: float, dt: float) -> PredictorQueue:
    """
     Продвигает очередь на один шаг командой delta_cmd.

     Новое состояние модели дописывается в конец, самое старое выбрасывается,
     затем из всех положений и относительных курсов вычитается самая старая строка.
     После шага самое старое положение ровно [0, 0], все курсы в [0, 2π).
     """
    rows = queue.rows
    newest = rows[-1]
    dp, dpsi = f_pm(float(newest[COL_HEADING]), delta_cmd, v, dt, queue.wheelbase_hat)
    new_row = (newest[COL_X] + dp.x, newest[COL_Y] + dp.y, newest[COL_OFFSET] + dpsi,
               newest[COL_HEADING] + dpsi)

    if queue.k > 0:
        rows[:-1] = rows[1:]
    rows[-1] = new_row
    oldest = rows[0, :COL_HEADING].copy()
    rows[:, :COL_HEADING] -= oldest
    rows[:, COL_HEADING] = _wrap(rows[:, COL_HEADING])

    pose = queue.model_pose
    dp_abs, _ = f_pm(pose.psi, delta_cmd, v, dt, queue.wheelbase_hat)
    queue.model_pose = VehicleState(pose.p + dp_abs, pose.psi + dpsi)
    return queue


def predict(queue: PredictorQueue, y_del: VehicleState) -> VehicleState:
    """
     Оценка незадержанного состояния по задержанной обратной связи.

     x̂ = y_del + R(ψ_del - ψ̂_oldest)·p̂_newest, ψ̂ = ψ_del + (ψ̂_newest - ψ̂_oldest).
     При k = 0 или выключенной компенсации возвращает y_del.
     """
    if not queue.enabled or queue.k == 0:
        return y_del
    oldest_heading = float(queue.rows[0, COL_HEADING])
    shift = rotate(y_del.psi - oldest_heading, queue.newest_shifted)
    return VehicleState(y_del.p + shift, y_del.psi + float(queue.rows[-1, COL_OFFSET]))


def compensator_tick(queue: PredictorQueue, y_del: VehicleState, delta_cmd: float, v: float,
                     dt: float) -> Tuple[PredictorQueue, VehicleState]:
    """Сначала продвигает очередь командой delta_cmd, затем предсказывает по y_del."""
    if not queue.enabled:
        return queue, y_del
    queue = predictor_step(queue, delta_cmd, v, dt)
    return queue, predict(queue, y_del)
