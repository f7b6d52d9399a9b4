# geometry/path.py

# Опорный путь, параметризованный длиной дуги s.
# Путь состоит из аналитических примитивов: отрезок, дуга окружности и
# спираль с линейно меняющимся радиусом. Соседние сегменты стыкуются с
# непрерывностью положения и направления касательной (G1).

import bisect
import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence, Tuple

from scipy.optimize import minimize_scalar

from geometry.angles import Vec2, heading_vector, left_normal, wrap_angle
from utils.errors import ConfigError, PathRangeError
from utils.validation import require_finite

# Допуск на выход s за границы пути (ошибки округления при суммировании длин).
S_TOLERANCE = 1e-9
# Точность поиска ближайшей точки.
PROJECTION_TOLERANCE = 1e-9
NEWTON_MAX_ITERATIONS = 30

SEGMENT_TYPES = ("line", "arc", "spiral")


class Pose(NamedTuple):
    x: float
    y: float
    psi: float


class SegmentSpec(NamedTuple):
    """Описание сегмента в файле сценария: {type, length, start_curvature, end_curvature}."""

    type: str
    length_m: float
    start_curvature_per_m: float = 0.0
    end_curvature_per_m: float = 0.0


class PathProjection(NamedTuple):
    """
     Результат проекции точки на путь.

     s_star - длина дуги ближайшей точки, e_signed - расстояние со знаком
     (положительно, если точка левее касательной), phi_ref - направление
     касательной в s_star, curvature - кривизна в s_star.
     """

    s_star: float
    e_signed: float
    phi_ref: float
    curvature: float


# --- Классы сегментов ---

class _Segment:
    """Сегмент пути с начальной позой и длиной; s отсчитывается от начала сегмента."""

    def __init__(self, start: Pose, length: float):
        self.start = start
        self.length = length

    def evaluate(self, s: float) -> Tuple[Vec2, float, float]:
        raise NotImplementedError

    def local_minimum(self, q: Vec2, lo: float, hi: float, seed: float) -> float:
        raise NotImplementedError

    def end_pose(self) -> Pose:
        p, heading, _ = self.evaluate(self.length)
        return Pose(p.x, p.y, heading)


class _Line(_Segment):
    def evaluate(self, s):
        x0, y0, psi0 = self.start
        return Vec2(x0 + s * math.cos(psi0), y0 + s * math.sin(psi0)), psi0, 0.0

    def local_minimum(self, q, lo, hi, seed):
        x0, y0, psi0 = self.start
        s = (q.x - x0) * math.cos(psi0) + (q.y - y0) * math.sin(psi0)
        return min(max(s, lo), hi)


class _Arc(_Segment):
    def __init__(self, start, length, curvature):
        super().__init__(start, length)
        self.curvature = curvature
        x0, y0, psi0 = start
        radius = 1.0 / curvature
        self.center = Vec2(x0 - radius * math.sin(psi0), y0 + radius * math.cos(psi0))

    def evaluate(self, s):
        k = self.curvature
        heading = self.start.psi + k * s
        p = Vec2(self.center.x + math.sin(heading) / k, self.center.y - math.cos(heading) / k)
        return p, heading, k

    def local_minimum(self, q, lo, hi, seed):
        k = self.curvature
        w = q - self.center
        if w.norm() == 0.0:
            # Центр окружности равноудалён от всех точек дуги.
            return min(max(seed, lo), hi)
        beta = math.atan2(w.y, w.x)
        heading = beta + math.pi / 2.0 if k > 0 else beta - math.pi / 2.0
        s_free = wrap_angle((heading - self.start.psi) * math.copysign(1.0, k)) / abs(k)
        if lo <= s_free <= hi:
            return s_free
        # Минимум на границе интервала: расстояние вдоль окружности унимодально.
        d_lo = (self.evaluate(lo)[0] - q).norm()
        d_hi = (self.evaluate(hi)[0] - q).norm()
        return lo if d_lo <= d_hi else hi


class _Spiral(_Segment):
    """
     Спираль с линейно меняющимся радиусом R(s) = R0 + (R1 - R0)·s/L.

     Кривизна κ(s) = sign/R(s). Положение вычисляется в замкнутой форме:
     интеграл от cos(θ0 + σ·m·ln(ρ/R0)) по ρ берётся аналитически, m = L/(R1 - R0).
     """

    def __init__(self, start, length, start_curvature, end_curvature):
        super().__init__(start, length)
        self.sign = math.copysign(1.0, start_curvature)
        self.r0 = 1.0 / abs(start_curvature)
        self.r1 = 1.0 / abs(end_curvature)
        self.m = length / (self.r1 - self.r0)
        x0, y0, psi0 = start
        sm = self.sign * self.m
        self._c = self.m / (1.0 + self.m * self.m)
        self._base_x = self.r0 * (math.cos(psi0) + sm * math.sin(psi0))
        self._base_y = self.r0 * (math.sin(psi0) - sm * math.cos(psi0))

    def _radius(self, s):
        return self.r0 + s / self.m

    def evaluate(self, s):
        x0, y0, psi0 = self.start
        rho = self._radius(s)
        sm = self.sign * self.m
        heading = psi0 + sm * math.log(rho / self.r0)
        x = x0 + self._c * (rho * (math.cos(heading) + sm * math.sin(heading)) - self._base_x)
        y = y0 + self._c * (rho * (math.sin(heading) - sm * math.cos(heading)) - self._base_y)
        return Vec2(x, y), heading, self.sign / rho

    def local_minimum(self, q, lo, hi, seed):
        # Ньютон для g(s) = (P(s) - q)·T(s) = 0, g'(s) = 1 + κ·(P(s) - q)·N(s).
        s = min(max(seed, lo), hi)
        converged = False
        for _ in range(NEWTON_MAX_ITERATIONS):
            p, heading, kappa = self.evaluate(s)
            d = p - q
            g = d.dot(heading_vector(heading))
            dg = 1.0 + kappa * d.dot(left_normal(heading))
            if dg <= 0.0:
                break
            step = g / dg
            s_next = s - step
            if s_next < lo or s_next > hi:
                break
            s = s_next
            if abs(step) < PROJECTION_TOLERANCE:
                converged = True
                break
        if not converged:
            logging.debug(f"Ньютон не сошёлся на спирали, поиск золотым сечением на [{lo:.3f}, {hi:.3f}]")
            result = minimize_scalar(
                lambda t: (self.evaluate(t)[0] - q).norm(),
                bounds=(lo, hi),
                method="bounded",
                options={"xatol": PROJECTION_TOLERANCE},
            )
            s = float(result.x)
        # Граничные точки тоже кандидаты.
        candidates = [s, lo, hi]
        return min(candidates, key=lambda t: (self.evaluate(t)[0] - q).norm())


# --- Путь ---

@dataclass(frozen=True)
class ReferencePath:
    """
     Опорный путь p_ref(s), 0 <= s <= total_length.

     Создаётся функцией build_path из списка SegmentSpec; сегменты
     стыкуются G1-непрерывно по построению.
     """

    start: Pose
    specs: Tuple[SegmentSpec, ...]
    segments: Tuple[_Segment, ...] = field(repr=False, compare=False)
    offsets: Tuple[float, ...] = field(repr=False, compare=False)
    total_length: float = 0.0

    def segment_index(self, s: float) -> int:
        i = bisect.bisect_right(self.offsets, s) - 1
        return min(max(i, 0), len(self.segments) - 1)


def _make_segment(spec: SegmentSpec, start: Pose, index: int) -> _Segment:
    where = f"path.segments[{index}]"
    if spec.type not in SEGMENT_TYPES:
        raise ConfigError(f"неизвестный тип сегмента '{spec.type}', допустимы {SEGMENT_TYPES}", where)
    if not (math.isfinite(spec.length_m) and spec.length_m > 0.0):
        raise ConfigError(f"длина сегмента должна быть > 0, получено {spec.length_m}", where)
    k0, k1 = spec.start_curvature_per_m, spec.end_curvature_per_m
    if spec.type == "line":
        if k0 != 0.0 or k1 != 0.0:
            raise ConfigError("у отрезка кривизна должна быть 0", where)
        return _Line(start, spec.length_m)
    if spec.type == "arc":
        if k0 == 0.0 or k0 != k1:
            raise ConfigError("у дуги кривизна должна быть постоянной и ненулевой", where)
        return _Arc(start, spec.length_m, k0)
    if k0 == 0.0 or k1 == 0.0 or k0 * k1 < 0.0 or k0 == k1:
        raise ConfigError("у спирали кривизны на концах должны быть ненулевыми, одного знака и различны", where)
    return _Spiral(start, spec.length_m, k0, k1)


def build_path(start: Pose, specs: Sequence[SegmentSpec]) -> ReferencePath:
    """
     Строит путь из последовательности сегментов.

     Args:
         start (Pose): Начальная поза пути (x, y, направление).
         specs (Sequence[SegmentSpec]): Сегменты в порядке следования.

     Returns:
         ReferencePath: Путь с накопленными смещениями сегментов.

     Raises:
         ConfigError: Пустой путь или некорректный сегмент.
     """
    if not specs:
        error_msg = "Путь не содержит ни одного сегмента"
        logging.error(error_msg)
        raise ConfigError(error_msg, "path.segments")
    segments = []
    offsets = []
    pose = Pose(*start)
    total = 0.0
    for i, spec in enumerate(specs):
        segment = _make_segment(SegmentSpec(*spec), pose, i)
        segments.append(segment)
        offsets.append(total)
        total += segment.length
        pose = segment.end_pose()
    return ReferencePath(Pose(*start), tuple(SegmentSpec(*s) for s in specs), tuple(segments), tuple(offsets), total)


def path_point_at(path: ReferencePath, s: float) -> Tuple[Vec2, float, float]:
    """
     Положение, направление касательной и кривизна пути в точке s.

     Returns:
         tuple: (Vec2, phi_ref в [0, 2π), кривизна со знаком, 1/м).

     Raises:
         PathRangeError: s вне [0, total_length].
     """
    require_finite("s", s)
    if s < -S_TOLERANCE or s > path.total_length + S_TOLERANCE:
        error_msg = f"s={s} вне диапазона пути [0, {path.total_length}]"
        logging.error(error_msg)
        raise PathRangeError(error_msg)
    s = min(max(s, 0.0), path.total_length)
    i = path.segment_index(s)
    p, heading, kappa = path.segments[i].evaluate(s - path.offsets[i])
    return p, wrap_angle(heading), kappa


def project_to_path(
    path: ReferencePath,
    p: Vec2,
    s_hint: float,
    ahead_m: float = math.inf,
    behind_m: float = math.inf,
) -> PathProjection:
    """
     Ближайшая точка пути к p в окне [s_hint - behind_m, s_hint + ahead_m].

     Для отрезков и дуг минимум находится в замкнутой форме, для спирали -
     методом Ньютона от s_hint с переходом на поиск золотым сечением,
     если Ньютон не сошёлся. Из кандидатов всех сегментов окна выбирается
     ближайший к p; при равенстве - ближайший к s_hint.

     Args:
         path (ReferencePath): Путь.
         p (Vec2): Точка запроса.
         s_hint (float): Подсказка - примерное положение на пути.
         ahead_m (float): Ширина окна вперёд от s_hint.
         behind_m (float): Ширина окна назад от s_hint.

     Returns:
         PathProjection: s_star, e_signed (плюс - слева от пути), phi_ref, кривизна.

     Raises:
         ConfigError: Путь пустой.
         DomainError: Нечисловые координаты точки.
     """
    if path is None or not path.segments:
        raise ConfigError("проекция на пустой путь", "path.segments")
    require_finite("p", p.x, p.y)
    hint = min(max(s_hint, 0.0), path.total_length)
    lo = max(0.0, hint - behind_m)
    hi = min(path.total_length, hint + ahead_m)

    best = None
    for i, segment in enumerate(path.segments):
        seg_lo = max(lo, path.offsets[i]) - path.offsets[i]
        seg_hi = min(hi, path.offsets[i] + segment.length) - path.offsets[i]
        if seg_lo > seg_hi:
            continue
        s_local = segment.local_minimum(p, seg_lo, seg_hi, hint - path.offsets[i])
        point, heading, kappa = segment.evaluate(s_local)
        dist = (p - point).norm()
        s_global = path.offsets[i] + s_local
        key = (dist, abs(s_global - hint))
        if best is None or key < best[0]:
            best = (key, s_global, point, heading, kappa)

    _, s_star, point, heading, kappa = best
    e_signed = (p - point).dot(left_normal(heading))
    return PathProjection(s_star, e_signed, wrap_angle(heading), kappa)
