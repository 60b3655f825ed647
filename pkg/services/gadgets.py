# services/gadgets.py
"""
Конечные конструкции: частичные замощения T2/T3 плитками (2s+1)^n,
«скатывание» T3 на все грани куба и условие q из копий шаблона p0 вдоль
гиперплоскостей x_1 + ... + x_n = m.

Координаты центров плиток - точки решётки Z^n (не полуединицы).
"""

import asyncio
import logging
import time
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from geometry.errors import ConfigurationError, DomainError
from geometry.rects import GridPoint, HalfRect
from reporting.manifest import SuiteReport

# Настраиваем логирование
logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(levelname)s - %(message)s')


class Config:
    """Конфигурация службы конструкций."""
    TILING_SIZES = (1, 2)
    ROLL_COPIES = (1, 2)
    # Условие q: n = 3, d0 = 3, C = 55 и малое b с тремя гиперплоскостями
    Q_N = 3
    Q_D0 = 3
    Q_C = 55
    Q_B = 990
    Q_SEED = 0
    # Запас в оценке b ≥ Q_MARGIN·n·C²·d0²
    Q_MARGIN = 100
    BLOCK_SAMPLES = 200


# --- Частичные замощения ---

@dataclass(frozen=True)
class PartialTiling:
    """Центры плиток [-s, s]^dim + c; placements - число размещений до склейки совпавших."""
    s: int
    dim: int
    centers: Tuple[GridPoint, ...]
    placements: int

    @property
    def side(self) -> int:
        return 2 * self.s + 1

    @property
    def reach(self) -> int:
        """(2s+1)^3: полусторона квадрата угловых плиток."""
        return self.side ** 3

    def array(self) -> np.ndarray:
        return np.array(self.centers, dtype=np.int64).reshape(len(self.centers), self.dim)

    def tile_rect(self, center: Sequence[int]) -> HalfRect:
        """Плитка в полуединицах: грани на нечётных уровнях."""
        return HalfRect(tuple(2 * c - self.side for c in center), tuple(2 * c + self.side for c in center))

    def to_json(self) -> Dict[str, Any]:
        return {'s': self.s, 'dim': self.dim, 'placements': self.placements,
                'centers': [list(c) for c in self.centers]}


def _merge(s: int, dim: int, centers: Sequence[Sequence[int]]) -> PartialTiling:
    distinct = tuple(sorted({tuple(int(v) for v in c) for c in centers}))
    return PartialTiling(s, dim, distinct, len(centers))


def tiling_t2(s: int) -> PartialTiling:
    """Четыре семейства центров, переходящие друг в друга поворотом на 90°."""
    if s < 1:
        raise DomainError(f"tiling_t2: нужно s ≥ 1, получено {s}")
    side = 2 * s + 1
    a, b = side ** 2, 2 * s
    pairs = list(product(range(a), range(b + 1))) + [(a, b)]
    centers = []
    for alpha, beta in pairs:
        centers += [(alpha * side, alpha + beta * a), (-alpha - beta * a, alpha * side),
                    (-alpha * side, -alpha - beta * a), (alpha + beta * a, -alpha * side)]
    return _merge(s, 2, centers)


def tiling_t3(s: int) -> PartialTiling:
    """Трёхмерные плитки в точках (i, j, 0) для центров (i, j) из T2."""
    flat = tiling_t2(s)
    return PartialTiling(s, 3, tuple(c + (0,) for c in flat.centers), flat.placements)


def first_overlap(centers: np.ndarray, s: int) -> Optional[Tuple[GridPoint, GridPoint]]:
    """Пара различных пересекающихся плиток, если есть."""
    for i in range(len(centers) - 1):
        gap = np.abs(centers[i + 1:] - centers[i]).max(axis=1)
        hit = np.flatnonzero((gap <= 2 * s) & (gap > 0))
        if len(hit):
            j = i + 1 + int(hit[0])
            return tuple(int(v) for v in centers[i]), tuple(int(v) for v in centers[j])
    return None


def coordinate_gaps(tiling: PartialTiling) -> Dict[int, List[int]]:
    """Для каждой оси - значения t из [-(2s+1)^3, (2s+1)^3], не встречающиеся среди координат центров."""
    centers = tiling.array()
    span = np.arange(-tiling.reach, tiling.reach + 1)
    return {axis: [int(t) for t in np.setdiff1d(span, centers[:, axis])] for axis in range(tiling.dim)}


def corner_tiles(tiling: PartialTiling) -> List[GridPoint]:
    return [c for c in tiling.centers if all(abs(v) == tiling.reach for v in c[:2])]


def rotate_quarter(tiling: PartialTiling) -> PartialTiling:
    """Поворот на 90°: (x, y) → (-y, x)."""
    if tiling.dim != 2:
        raise DomainError("rotate_quarter: только для плоских замощений")
    return PartialTiling(tiling.s, 2, tuple(sorted((-y, x) for x, y in tiling.centers)), tiling.placements)


def compose_side_by_side(tiling: PartialTiling, axis: int = 0) -> PartialTiling:
    """Две копии рядом по оси axis с совпадающими угловыми плитками."""
    offset = np.zeros(tiling.dim, dtype=np.int64)
    offset[axis] = 2 * tiling.reach
    centers = tiling.array()
    return _merge(tiling.s, tiling.dim, np.concatenate([centers, centers + offset]))


# --- Скатывание на грани ---

@dataclass(frozen=True)
class FaceFrame:
    """Грань с внешней нормалью normal; центр плитки (u, v) ↦ origin + u·a + v·b."""
    normal: GridPoint
    a: GridPoint
    b: GridPoint


@dataclass(frozen=True)
class FacePlacement:
    frames: Tuple[FaceFrame, ...]
    tiling: PartialTiling   # все плитки на всех гранях после склейки
    copies: int             # m×m копий T3 на грани
    half_side: int          # полусторона куба (решётка): s + m·(2s+1)^3


def _roll(frame: FaceFrame, direction: GridPoint) -> FaceFrame:
    """Перекатывание через ребро в сторону direction (±a или ±b)."""
    normal = tuple(-v for v in frame.normal)
    if direction in (frame.a, tuple(-v for v in frame.a)):
        sign = 1 if direction == frame.a else -1
        return FaceFrame(direction, tuple(sign * v for v in normal), frame.b)
    sign = 1 if direction == frame.b else -1
    return FaceFrame(direction, frame.a, tuple(sign * v for v in normal))


def roll_down(s: int, copies: int = 1) -> FacePlacement:
    """
    Копии T3 на всех шести гранях куба со стороной 2s + m·2(2s+1)^3.

    Начинаем с верхней грани и перекатываем узор через рёбра: узор на
    соседней грани - это плоская соседняя копия, поэтому угловые плитки
    совпадают. Нижняя грань получается перекатыванием передней.
    """
    if s < 1 or copies < 1:
        raise DomainError(f"roll_down: нужно s ≥ 1 и m ≥ 1, получено s={s}, m={copies}")
    flat = tiling_t2(s)
    reach = flat.reach
    depth = copies * reach  # расстояние от центра куба до плоскости центров плиток грани
    top = FaceFrame((0, 0, 1), (1, 0, 0), (0, 1, 0))
    frames = [top]
    for direction in (top.a, tuple(-v for v in top.a), top.b, tuple(-v for v in top.b)):
        frames.append(_roll(top, direction))
    front = frames[3]
    frames.append(_roll(front, tuple(-v for v in top.normal)))

    pattern = flat.array()
    shifts = [(2 * i - (copies - 1)) * reach for i in range(copies)]
    centers = []
    for frame in frames:
        origin = depth * np.array(frame.normal)
        a, b = np.array(frame.a), np.array(frame.b)
        for du, dv in product(shifts, repeat=2):
            uv = pattern + np.array([du, dv])
            centers.append(origin + uv[:, :1] * a + uv[:, 1:] * b)
    tiling = _merge(s, 3, np.concatenate(centers))
    return FacePlacement(tuple(frames), tiling, copies, s + depth)


def face_tiles(placement: FacePlacement, normal: GridPoint) -> List[GridPoint]:
    """Плитки, прилегающие к грани с внешней нормалью normal."""
    axis = next(i for i, v in enumerate(normal) if v)
    level = normal[axis] * (placement.half_side - placement.tiling.s)
    return [c for c in placement.tiling.centers if c[axis] == level]


# --- Условие q ---

@dataclass
class ConditionQ:
    """Копии шаблона p0 в полосах |x_1 + ... + x_n - m| < C·d0 внутри [0, b]^n."""
    n: int
    d0: int
    b: int
    c: int
    pattern: np.ndarray
    hyperplanes: Tuple[int, ...]
    indices: Tuple[int, ...]                    # m' для каждой гиперплоскости
    flags: List[str] = field(default_factory=list)

    @property
    def width(self) -> int:
        return self.c * self.d0

    def shifts(self, k: int) -> np.ndarray:
        """v_0, v_1, ...: векторы с нулём в оси k и остальными координатами из [0, d0)."""
        others = [range(self.d0) if axis != k else range(1) for axis in range(self.n)]
        return np.array(list(product(*others)), dtype=np.int64)

    def values(self, cells: np.ndarray, k: int) -> np.ndarray:
        """T_k в клетках cells[N, n]; k - номер оси с нуля."""
        shifts = self.shifts(k)
        j = (cells[:, k] // self.d0) % len(shifts)
        index = np.mod(cells + shifts[j], self.d0)
        return self.pattern[tuple(index[:, axis] for axis in range(self.n))]

    def labels(self, cells: np.ndarray) -> np.ndarray:
        """Номер полосы Q_m, содержащей клетку, или -1."""
        total = cells.sum(axis=1)
        planes = np.array(self.hyperplanes, dtype=np.int64)
        near = np.abs(total[:, None] - planes[None, :]) < self.width
        return np.where(near.any(axis=1), near.argmax(axis=1), -1)

    def cells_per_total(self) -> np.ndarray:
        """Число клеток [0, b]^n с суммой координат t, t = 0..n·b."""
        counts = np.ones(1, dtype=object)
        for _ in range(self.n):
            counts = np.convolve(counts, np.ones(self.b + 1, dtype=object))
        return counts

    def to_json(self) -> Dict[str, Any]:
        return {'n': self.n, 'd0': self.d0, 'b': self.b, 'C': self.c, 'pattern': self.pattern.tolist(),
                'hyperplanes': list(self.hyperplanes), 'indices': list(self.indices), 'flags': self.flags}


def default_pattern(n: int, d0: int, seed: int = Config.Q_SEED) -> np.ndarray:
    """Абстрактный 0/1-шаблон p0 на ящике d0^n."""
    return np.random.default_rng(seed).integers(0, 2, size=(d0,) * n).astype(np.int8)


def build_condition_q(n: int, d0: int, b: int, c: int, pattern: Optional[np.ndarray] = None,
                      strict: bool = True) -> ConditionQ:
    """
    Гиперплоскости H_m для кратных 2·C·d0 значений m в [1, b], индекс
    m' = 1 + (m / (2Cd0) mod n) и шаблон T_{m'} в полосе вокруг H_m.
    Оценка b ≥ 100·n·C²·d0² при strict=False только отмечается.
    """
    pattern = default_pattern(n, d0) if pattern is None else np.asarray(pattern)
    hard, soft = [], []
    if n < 2 or d0 < 1:
        hard.append(f"нужно n ≥ 2 и d0 ≥ 1, получено n={n}, d0={d0}")
    if pattern.shape != (d0,) * n:
        hard.append(f"шаблон формы {pattern.shape} вместо {(d0,) * n}")
    if c <= 2 * d0 ** n:
        hard.append(f"C={c} ≤ 2·d0^n = {2 * d0 ** n}")
    if b % d0:
        hard.append(f"b={b} не кратно d0={d0}")
    if b < 2 * c * d0:
        hard.append(f"b={b} < 2·C·d0 = {2 * c * d0}: нет ни одной гиперплоскости")
    bound = Config.Q_MARGIN * n * c ** 2 * d0 ** 2
    if b < bound:
        soft.append(f"b={b} < {Config.Q_MARGIN}·n·C²·d0² = {bound}")
    if hard or (strict and soft):
        raise ConfigurationError("build_condition_q: " + '; '.join(hard + soft))

    step = 2 * c * d0
    planes = tuple(range(step, b + 1, step))
    indices = tuple(1 + (m // step) % n for m in planes)
    for flag in soft:
        logging.warning(f"Gadgets: ⚠️ {flag}")
    return ConditionQ(n, d0, b, c, pattern, planes, indices, soft)


def check_condition_q(q: ConditionQ, samples: int = Config.BLOCK_SAMPLES, seed: int = Config.Q_SEED) -> Dict[str, Any]:
    """
    Непересечение полос и совпадение блоков d0^n со сдвигами p0.
    Принадлежность полосе зависит только от суммы координат, поэтому
    непересечение проверяется по всем суммам t = 0..n·b.
    """
    totals = np.arange(q.n * q.b + 1)
    planes = np.array(q.hyperplanes, dtype=np.int64)
    near = np.abs(totals[:, None] - planes[None, :]) < q.width
    counts = q.cells_per_total()
    overlaps = int(sum(counts[t] for t in np.flatnonzero(near.sum(axis=1) > 1)))
    assigned = [int(sum(counts[near[:, i]])) for i in range(len(planes))]

    rng = np.random.default_rng(seed)
    bad_blocks = []
    offsets = np.array(list(product(range(q.d0), repeat=q.n)), dtype=np.int64)
    for _ in range(samples):
        corner = q.d0 * rng.integers(0, q.b // q.d0, size=q.n)
        cells = corner + offsets
        labels = q.labels(cells)
        if (labels < 0).any() or (labels != labels[0]).any():
            continue
        k = q.indices[labels[0]] - 1
        block = q.values(cells, k).reshape((q.d0,) * q.n)
        shift = q.shifts(k)[(corner[k] // q.d0) % q.d0 ** (q.n - 1)]
        expected = np.roll(q.pattern, tuple(-int(v) for v in shift), axis=tuple(range(q.n)))
        if not np.array_equal(block, expected):
            bad_blocks.append(tuple(int(v) for v in corner))
    return {'overlaps': overlaps, 'assigned': assigned, 'bad_blocks': bad_blocks}


def check_t2(report: SuiteReport, s: int) -> PartialTiling:
    """Свойства (a)-(d) и согласованность четвертей для T2 со стороной плитки 2s+1."""
    tiling = tiling_t2(s)
    reach = tiling.reach
    if s == 1:
        report.add('t2-s1-count', tiling.placements == 112 and len(tiling.centers) == 109,
                   f'{tiling.placements} размещений, {len(tiling.centers)} различных центров')
    overlap = first_overlap(tiling.array(), s)
    report.add(f't2-s{s}-a', overlap is None, 'пересекающиеся плитки совпадают', overlap)
    gaps = coordinate_gaps(tiling)
    report.add(f't2-s{s}-b', not any(gaps.values()), f'все t ∈ [-{reach}, {reach}] по обеим осям', gaps)
    corners = corner_tiles(tiling)
    side = max(c[0] for c in corners) - min(c[0] for c in corners) if corners else 0
    report.add(f't2-s{s}-c', len(corners) == 4 and side == 2 * reach, f'угловой квадрат со стороной {side}')
    for axis in (0, 1):
        composed = compose_side_by_side(tiling, axis)
        overlap = first_overlap(composed.array(), s)
        report.add(f't2-s{s}-d-axis{axis}', overlap is None, f'{len(composed.centers)} плиток', overlap)
    rotated = rotate_quarter(tiling)
    report.add(f't2-s{s}-quadrants', rotated.centers == tiling.centers, 'четверти переходят друг в друга')
    return tiling


def check_roll_down(report: SuiteReport, s: int, copies: int) -> FacePlacement:
    """Свойство (e): различные плитки на гранях куба не пересекаются."""
    placement = roll_down(s, copies)
    overlap = first_overlap(placement.tiling.array(), s)
    report.add(f't3-s{s}-roll-m{copies}-e', overlap is None,
               f'{len(placement.tiling.centers)} плиток на 6 гранях', overlap)
    if copies == 1:
        depth = placement.half_side - s
        lifted = {(x, y, z - depth) for x, y, z in face_tiles(placement, (0, 0, 1))}
        report.add(f't3-s{s}-roll-top-face', lifted == set(tiling_t3(s).centers), 'верхняя грань совпадает с T3')
    return placement


# --- Служба ---

class GadgetsService:
    """Служба конструкций: T2, T3 со скатыванием и условие q."""

    def __init__(self, sizes: Sequence[int] = Config.TILING_SIZES, copies: Sequence[int] = Config.ROLL_COPIES):
        self.sizes = tuple(sizes)
        self.copies = tuple(copies)
        logging.info(f"Gadgets: Служба инициализирована (s ∈ {self.sizes}).")

    def _check_t2(self, report: SuiteReport):
        for s in self.sizes:
            check_t2(report, s)

    def _check_roll_down(self, report: SuiteReport):
        for copies in self.copies:
            check_roll_down(report, 1, copies)

    def _check_condition_q(self, report: SuiteReport):
        try:
            build_condition_q(Config.Q_N, Config.Q_D0, Config.Q_B, Config.Q_C)
            report.add('q-strict-bound', False, 'слабое b не отвергнуто')
        except ConfigurationError as e:
            report.add('q-strict-bound', True, str(e))
        q = build_condition_q(Config.Q_N, Config.Q_D0, Config.Q_B, Config.Q_C, strict=False)
        result = check_condition_q(q)
        report.add('q-disjoint', result['overlaps'] == 0, f"гиперплоскости {list(q.hyperplanes)}, "
                                                         f"клеток в полосах {result['assigned']}")
        report.add('q-blocks', not result['bad_blocks'], 'блоки d0^n - сдвиги p0', result['bad_blocks'][:3])

    def run(self) -> SuiteReport:
        """Запускает все проверки набора и возвращает отчёт."""
        report = SuiteReport('gadgets')
        started = time.monotonic()
        for check in (self._check_t2, self._check_roll_down, self._check_condition_q):
            try:
                check(report)
            except Exception as e:
                logging.error(f"Gadgets: ❌ Ошибка в {check.__name__}: {e}")
                report.add(check.__name__, False, f'исключение: {e}')
        report.elapsed = time.monotonic() - started
        return report


async def main() -> SuiteReport:
    """Точка входа для запуска набора конструкций."""
    service = GadgetsService()
    return await asyncio.get_running_loop().run_in_executor(None, service.run)


if __name__ == "__main__":
    asyncio.run(main())
