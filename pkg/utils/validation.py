# utils/validation.py

# Общие проверки входных данных: конечность чисел и целочисленность
# отношения длительностей (задержки и шаги должны быть кратны dt).

import logging
import math

from utils.errors import ConfigError, DomainError

# Относительный допуск при проверке кратности длительностей.
RATIO_TOLERANCE = 1e-9


def require_finite(name: str, *values: float):
    """
     Проверяет, что все значения конечны.

     Raises:
         DomainError: Если хотя бы одно значение NaN или бесконечность.
     """
    for value in values:
        if not math.isfinite(value):
            error_msg = f"{name}: ожидается конечное число, получено {value!r}"
            logging.error(error_msg)
            raise DomainError(error_msg)


def require_positive_dt(dt: float):
    if not (math.isfinite(dt) and dt > 0.0):
        error_msg = f"Шаг интегрирования должен быть положительным, получено dt={dt!r}"
        logging.error(error_msg)
        raise DomainError(error_msg)


def integer_ratio(duration: float, step: float, field: str) -> int:
    """
     Переводит длительность в целое число шагов.

     Округление не выполняется молча: если duration/step не целое
     (с относительным допуском RATIO_TOLERANCE), это ошибка конфигурации.

     Args:
         duration (float): Длительность, с.
         step (float): Шаг, с.
         field (str): Имя поля конфигурации для сообщения об ошибке.

     Returns:
         int: Число шагов k >= 0.

     Raises:
         ConfigError: Отрицательная длительность или нецелое отношение.
     """
    if not math.isfinite(duration) or duration < 0.0:
        raise ConfigError(f"длительность должна быть >= 0, получено {duration!r}", field)
    ratio = duration / step
    k = round(ratio)
    if abs(ratio - k) > RATIO_TOLERANCE * max(1.0, abs(ratio)):
        error_msg = f"{duration} с не кратно шагу {step} с (отношение {ratio:.6f} не целое)"
        logging.error(f"{field}: {error_msg}")
        raise ConfigError(error_msg, field)
    return int(k)
