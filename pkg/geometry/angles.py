# geometry/angles.py

# Плоские геометрические примитивы: вектор Vec2, приведение углов и поворот.
# Все функции чистые, типы неизменяемые.

import math
from typing import NamedTuple

from utils.validation import require_finite

TWO_PI = 2.0 * math.pi


class Vec2(NamedTuple):
    """Вектор на плоскости, компоненты в метрах."""

    x: float
    y: float

    def __add__(self, other):
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return Vec2(self.x - other.x, self.y - other.y)

    def scale(self, factor: float) -> "Vec2":
        return Vec2(self.x * factor, self.y * factor)

    def dot(self, other) -> float:
        return self.x * other.x + self.y * other.y

    def norm(self) -> float:
        return math.hypot(self.x, self.y)


# --- Функции модуля ---

def wrap_angle(theta: float) -> float:
    """
     Приводит угол к интервалу [0, 2π).

     Операция идемпотентна и периодична: wrap(θ + 2πn) = wrap(θ).

     Args:
         theta (float): Угол, рад.

     Returns:
         float: Угол в [0, 2π).

     Raises:
         DomainError: Если theta не конечно.
     """
    require_finite("theta", theta)
    wrapped = theta % TWO_PI
    # Для малых отрицательных theta остаток округляется ровно до 2π.
    if wrapped >= TWO_PI:
        wrapped = 0.0
    return wrapped


def angle_diff(a: float, b: float) -> float:
    """Разность углов a - b, приведённая к [-π, π); вне точки ±π angle_diff(-a, -b) == -angle_diff(a, b) точно."""
    d = math.remainder(a - b, TWO_PI)
    return -d if d >= math.pi else d


def rotate(psi: float, v: Vec2) -> Vec2:
    """
     Поворачивает вектор на угол psi: R(psi)·v.

     Args:
         psi (float): Угол поворота, рад.
         v (Vec2): Исходный вектор.

     Returns:
         Vec2: Повёрнутый вектор той же длины.
     """
    c = math.cos(psi)
    s = math.sin(psi)
    return Vec2(c * v.x - s * v.y, s * v.x + c * v.y)


def heading_vector(psi: float) -> Vec2:
    return Vec2(math.cos(psi), math.sin(psi))


def left_normal(psi: float) -> Vec2:
    # Нормаль слева от касательной: положительное e - точка левее пути.
    return Vec2(-math.sin(psi), math.cos(psi))
