# services/torus_sim.py
"""
Конечный тор вместо F(2^{Z^n}): сети маркеров, послойное размещение
прямоугольников R_z с подгонкой граней, рекурсивное деление H_z,
статистика ν по вершинам и доводка трёхмерного разбиения до 5.

Все координаты в полуединицах. Сторона тора m чётна, точки решётки имеют
чётные координаты, грани прямоугольников лежат на нечётных уровнях.
Ничего не берётся на веру из построения: сети, слои, ортогональность и
покрытие перепроверяются сканированием.
"""

import asyncio
import json
import logging
import math
import os
import time
from collections import defaultdict
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import product
from typing import Any, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from tqdm import tqdm

from geometry.errors import ConfigurationError, DomainError, OracleFailure
from geometry.partitions import coverage_grid, stats_from_bounds
from geometry.rects import GridPoint, HalfRect, directional_difference, lattice_box_points, r_to_z, unit_vector
from reporting.manifest import SuiteReport
from templates import PROGRESS, TORUS_SEEDS

# Настраиваем логирование
logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(levelname)s - %(message)s')

Box = Tuple[Tuple[int, ...], Tuple[int, ...]]  # замкнутый ящик решётки (lo, hi) включительно


class Config:
    """Конфигурация торовой симуляции."""
    PRESETS_FILE = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'torus_presets.json')
    # Грань сдвигается наружу не больше чем на r1 / SHIFT_FRACTION
    SHIFT_FRACTION = 10
    # Радиус согласования граней: HOPS·(r1 + сдвиг) + ℓ
    HOPS = 6
    # Первая фаза сети: столько случайных кандидатов на корзину
    NET_CANDIDATES_PER_BUCKET = 4
    # r1 ≥ SEPARATION_FACTOR·C·ℓ
    SEPARATION_FACTOR = 16
    # Наименьшее ℓ, при котором L_x помещается на сетке полуединиц
    MIN_REFINE_ELL = 4
    # Сколько вершин с наибольшим ν разбирать на активные/пассивные векторы
    CROSSING_SAMPLE = 200
    SEEDS = TORUS_SEEDS
    # Пресеты с ослабленными неравенствами обязаны носить этот суффикс
    RELAXED_SUFFIX = '-relaxed'
    SUITE_PRESETS = ('n2', 'n3', 'n4-relaxed')
    REFINE_PRESET = 'n3'


# --- Параметры ---

@dataclass(frozen=True)
class TorusConfig:
    """Параметры тора; все длины в полуединицах."""
    n: int
    m: int
    ell: int
    r1: int
    r2: int
    seed: int = 0
    relaxed: bool = False

    def __post_init__(self):
        problems = self.problems()
        if problems:
            raise ConfigurationError("TorusConfig: " + '; '.join(problems))

    @property
    def lattice_side(self) -> int:
        return self.m // 2

    @property
    def shift(self) -> int:
        """Наибольший сдвиг грани: ⌊r1/10⌋, округлённый до чётного."""
        s = self.r1 // Config.SHIFT_FRACTION
        return s - s % 2

    @property
    def reach(self) -> int:
        return self.r1 + self.shift

    @property
    def interaction_radius(self) -> int:
        return Config.HOPS * self.reach + self.ell

    @property
    def layer_count(self) -> int:
        """k = |D| - 1, D = {g : ρ(g, 0) ≤ r1 + r2}."""
        g = (self.r1 + self.r2) // 2
        return (2 * g + 1) ** self.n - 1

    @property
    def neighbour_constant(self) -> int:
        """
        C: сколько других маркеров r1-разделённой сети помещается в радиусе согласования.

        По каждой оси окно из 2R + 1 полуединиц (или весь тор, если он короче)
        режется на блоки по r1 + 1, и в блок попадает не больше одной
        координаты маркера.
        """
        span = min(2 * self.interaction_radius + 1, self.m)
        blocks = -(-span // (self.r1 + 1))
        return blocks ** self.n - 1

    def problems(self) -> List[str]:
        found = []
        if self.n < 2:
            found.append(f"n={self.n} < 2")
        if self.m <= 0 or self.m % 2:
            found.append(f"m={self.m} должно быть положительным и чётным")
        if self.ell < 2 or self.ell % 2:
            found.append(f"ℓ={self.ell} должно быть чётным и ≥ 2")
        if self.r1 % 2 == 0:
            found.append(f"r1={self.r1} должно быть нечётным (грани на Z + 1/2)")
        if self.shift < 2:
            found.append(f"r1={self.r1} слишком мал: сдвиг граней {self.shift} < 2")
        if self.r2 <= 2 * self.r1:
            found.append(f"r2={self.r2} ≤ 2·r1={2 * self.r1}")
        if self.relaxed:
            if self.r2 < 4 * self.r1 + 2 * self.shift + self.ell:
                found.append(f"r2={self.r2} < 4·r1 + 2·сдвиг + ℓ = {4 * self.r1 + 2 * self.shift + self.ell}")
            if self.m <= 2 * (self.r1 + self.r2):
                found.append(f"m={self.m} ≤ 2(r1 + r2) = {2 * (self.r1 + self.r2)}")
        else:
            if self.r2 < 8 * self.r1:
                found.append(f"r2={self.r2} < 8·r1 = {8 * self.r1}")
            if self.m < 4 * (self.r1 + self.r2):
                found.append(f"m={self.m} < 4(r1 + r2) = {4 * (self.r1 + self.r2)}")
        if self.m > 0 and self.r1 > 0 and self.ell > 0:
            c = self.neighbour_constant
            bound = Config.SEPARATION_FACTOR * c * self.ell
            if self.r1 < bound:
                found.append(f"r1={self.r1} < {Config.SEPARATION_FACTOR}·C·ℓ = {bound} (C={c}): "
                             f"подгонка граней не гарантирована")
        return found

    def with_seed(self, seed: int) -> 'TorusConfig':
        return replace(self, seed=seed)

    def to_json(self) -> Dict[str, Any]:
        return {'n': self.n, 'm': self.m, 'l': self.ell, 'r1': self.r1, 'r2': self.r2,
                'seed': self.seed, 'relaxed': self.relaxed, 'shift': self.shift}


def load_presets() -> Dict[str, Dict[str, Any]]:
    """Читает именованные наборы параметров из torus_presets.json."""
    if not os.path.exists(Config.PRESETS_FILE):
        raise ConfigurationError(f"Файл пресетов {Config.PRESETS_FILE} не найден")
    with open(Config.PRESETS_FILE, 'r', encoding='utf-8') as f:
        presets = json.load(f)
    for p in presets:
        if bool(p.get('relaxed', False)) != p['name'].endswith(Config.RELAXED_SUFFIX):
            raise ConfigurationError(f"Пресет '{p['name']}': ослабленные неравенства допустимы только "
                                     f"в пресетах с суффиксом '{Config.RELAXED_SUFFIX}'")
    return {p['name']: p for p in presets}


def preset_for_dimension(n: int) -> str:
    """Строгий пресет nN, а если его нет - nN-relaxed."""
    presets = load_presets()
    strict = f'n{n}'
    return strict if strict in presets else strict + Config.RELAXED_SUFFIX


def preset_config(name: str, **overrides) -> TorusConfig:
    """Пресет с переопределениями; None в overrides не учитывается."""
    presets = load_presets()
    if name not in presets:
        raise ConfigurationError(f"Неизвестный пресет '{name}', есть: {', '.join(sorted(presets))}")
    data = dict(presets[name])
    data.update({k: v for k, v in overrides.items() if v is not None})
    return TorusConfig(n=int(data['n']), m=int(data['m']), ell=int(data['l']), r1=int(data['r1']),
                       r2=int(data['r2']), seed=int(data.get('seed', 0)), relaxed=bool(data.get('relaxed', False)))


# --- Арифметика тора ---

def _wrap(diff: np.ndarray, period: int) -> np.ndarray:
    """Разность по модулю period в [-period/2, period/2)."""
    return np.mod(diff + period // 2, period) - period // 2


def _circular(diff: np.ndarray, period: int) -> np.ndarray:
    d = np.mod(diff, period)
    return np.minimum(d, period - d)


def torus_distance(first: Sequence[int], second: Sequence[int], m: int) -> int:
    """ρ = ℓ∞ на торе (Z/m)^n."""
    return int(_circular(np.asarray(first, dtype=np.int64) - np.asarray(second, dtype=np.int64), m).max())


def _mesh(values: Sequence[np.ndarray]) -> np.ndarray:
    if any(len(v) == 0 for v in values):
        return np.zeros((0, len(values)), dtype=np.int64)
    grids = np.meshgrid(*values, indexing='ij')
    return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)


class _TorusBuckets:
    """Корзины решётки (Z/side)^n ширины не меньше width."""

    def __init__(self, n: int, side: int, width: int):
        self.n = n
        self.side = side
        self.q = max(1, side // max(1, width))
        self.members: Dict[Tuple[int, ...], List[int]] = defaultdict(list)

    def key(self, point: Sequence[int]) -> Tuple[int, ...]:
        return tuple(int(c) * self.q // self.side for c in point)

    def bounds(self, key: Sequence[int]) -> Box:
        lo = tuple(-(-b * self.side // self.q) for b in key)
        hi = tuple(-(-(b + 1) * self.side // self.q) - 1 for b in key)
        return lo, hi

    def keys(self) -> List[Tuple[int, ...]]:
        return list(product(range(self.q), repeat=self.n))

    def add(self, index: int, point: Sequence[int]):
        self.members[self.key(point)].append(index)

    def around(self, key: Sequence[int]) -> List[int]:
        if self.q < 3:
            return [i for members in self.members.values() for i in members]
        found = []
        for delta in product((-1, 0, 1), repeat=self.n):
            found.extend(self.members.get(tuple((b + d) % self.q for b, d in zip(key, delta)), ()))
        return found


def _subtract(boxes: List[Box], cut: Box) -> List[Box]:
    """Ящики решётки минус замкнутый ящик cut."""
    result = []
    clo, chi = cut
    for lo, hi in boxes:
        if any(a > d or b < c for a, b, c, d in zip(lo, hi, clo, chi)):
            result.append((lo, hi))
            continue
        lo, hi = list(lo), list(hi)
        for axis in range(len(lo)):
            if lo[axis] < clo[axis]:
                part = list(hi)
                part[axis] = clo[axis] - 1
                result.append((tuple(lo), tuple(part)))
                lo[axis] = clo[axis]
            if hi[axis] > chi[axis]:
                part = list(lo)
                part[axis] = chi[axis] + 1
                result.append((tuple(part), tuple(hi)))
                hi[axis] = chi[axis]
    return result


def _wrapped_parts(lo: Sequence[int], hi: Sequence[int], side: int) -> List[Box]:
    """Ящик решётки, намотанный на тор, как набор ящиков внутри [0, side)."""
    per_axis = []
    for a, b in zip(lo, hi):
        if b - a + 1 >= side:
            per_axis.append([(0, side - 1)])
            continue
        a0, b0 = a % side, b % side
        per_axis.append([(a0, b0)] if a0 <= b0 else [(a0, side - 1), (0, b0)])
    return [tuple(tuple(v) for v in zip(*parts)) for parts in product(*per_axis)]


def _uncovered(region: Box, cuts: Sequence[Box], side: int) -> List[Box]:
    remainder = [region]
    for lo, hi in cuts:
        for part in _wrapped_parts(lo, hi, side):
            remainder = _subtract(remainder, part)
            if not remainder:
                return []
    return remainder


def _cubes(centers: Sequence[Sequence[int]], reach: int) -> List[Box]:
    return [(tuple(int(c) - reach for c in z), tuple(int(c) + reach for c in z)) for z in centers]


# --- Сети маркеров ---

@dataclass(frozen=True)
class NetParams:
    """Тор для одной сети: размерность, сторона m (полуединицы, чётная) и seed."""
    n: int
    m: int
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.m <= 0 or self.m % 2:
            raise DomainError(f"NetParams: нужно n ≥ 1 и чётное m > 0, получено n={self.n}, m={self.m}")

    @property
    def lattice_side(self) -> int:
        return self.m // 2


@dataclass(frozen=True)
class MarkerSet:
    """Маркеры на торе (чётные полуединицы) и радиус r."""
    points: Tuple[GridPoint, ...]
    radius: int
    m: int

    def __len__(self) -> int:
        return len(self.points)

    @property
    def n(self) -> int:
        return len(self.points[0])

    def array(self) -> np.ndarray:
        return np.array(self.points, dtype=np.int64).reshape(len(self.points), -1)

    def to_json(self) -> Dict[str, Any]:
        return {'radius': self.radius, 'm': self.m, 'points': [list(p) for p in self.points]}


def greedy_net(cfg: Union[TorusConfig, NetParams], r: int) -> MarkerSet:
    """
    Максимальное r-разделённое (а значит r-покрывающее) множество точек тора.

    Первая фаза просматривает случайные точки в порядке, заданном seed;
    вторая добивает непокрытые точки по корзинам в перемешанном порядке,
    беря лексикографически наименьшую. Итог не зависит ни от чего, кроме seed.
    """
    if r <= 0 or 4 * r >= cfg.m:
        raise DomainError(f"greedy_net: нужно 0 < r < m/4, получено r={r}, m={cfg.m}")
    side = cfg.lattice_side
    reach = r // 2  # ρ ≤ r для точек решётки ⇔ ρ_решётки ≤ r // 2
    rng = np.random.default_rng(cfg.seed)
    buckets = _TorusBuckets(cfg.n, side, reach)
    chosen: List[Tuple[int, ...]] = []

    def accept(point: Tuple[int, ...]):
        buckets.add(len(chosen), point)
        chosen.append(point)

    candidates = rng.integers(0, side, size=(Config.NET_CANDIDATES_PER_BUCKET * buckets.q ** cfg.n, cfg.n))
    for row in tqdm(candidates, desc=f'net r={r}', disable=not PROGRESS):
        point = tuple(int(c) for c in row)
        near = buckets.around(buckets.key(point))
        if near:
            others = np.array([chosen[i] for i in near], dtype=np.int64)
            if (_circular(others - np.array(point), side).max(axis=1) <= reach).any():
                continue
        accept(point)

    keys = buckets.keys()
    for k in rng.permutation(len(keys)):
        key = keys[int(k)]
        while True:
            remainder = _uncovered(buckets.bounds(key), _cubes([chosen[i] for i in buckets.around(key)], reach), side)
            if not remainder:
                break
            accept(min(lo for lo, _ in remainder))

    logging.info(f"Torus: сеть r={r}: {len(chosen)} маркеров")
    return MarkerSet(tuple(tuple(2 * c for c in p) for p in chosen), r, cfg.m)


def refine_net(s1: MarkerSet, r1: int, r2: int, seed: int = 0) -> MarkerSet:
    """S2 ⊆ S1: жадный r2-разделённый выбор из S1 в порядке, заданном seed."""
    if r2 <= 2 * r1:
        raise DomainError(f"refine_net: r2={r2} ≤ 2·r1={2 * r1}")
    side = s1.m // 2
    lattice = s1.array() // 2
    reach = r2 // 2
    rng = np.random.default_rng((seed, 2))
    chosen: List[int] = []
    for i in rng.permutation(len(lattice)):
        if chosen and (_circular(lattice[chosen] - lattice[i], side).max(axis=1) <= reach).any():
            continue
        chosen.append(int(i))
    return MarkerSet(tuple(s1.points[i] for i in sorted(chosen)), r2, s1.m)


@dataclass(frozen=True)
class NetCheck:
    separated: bool
    covering: bool
    witness: Optional[GridPoint] = None

    @property
    def valid(self) -> bool:
        return self.separated and self.covering


def verify_net(net: MarkerSet, separation: int, covering: int) -> NetCheck:
    """Попарно ρ > separation и каждая точка тора на расстоянии ≤ covering от сети."""
    side = net.m // 2
    lattice = net.array() // 2
    n = lattice.shape[1]
    separated, witness = True, None

    buckets = _TorusBuckets(n, side, max(1, separation // 2))
    for i, p in enumerate(lattice):
        buckets.add(i, p)
    for i, p in enumerate(lattice):
        near = [j for j in buckets.around(buckets.key(p)) if j != i]
        if near and (2 * _circular(lattice[near] - p, side).max(axis=1) <= separation).any():
            separated, witness = False, tuple(int(2 * c) for c in p)
            break

    reach = covering // 2
    buckets = _TorusBuckets(n, side, max(1, reach))
    for i, p in enumerate(lattice):
        buckets.add(i, p)
    covered = True
    for key in buckets.keys():
        remainder = _uncovered(buckets.bounds(key), _cubes(lattice[buckets.around(key)], reach), side)
        if remainder:
            covered = False
            witness = witness or tuple(2 * c for c in remainder[0][0])
            break
    return NetCheck(separated, covered, witness)


# --- Слои T_0, ..., T_k ---

@dataclass(frozen=True)
class Layers:
    ranks: Tuple[int, ...]                     # номер i слоя T_i в перечислении D
    layers: Tuple[Tuple[GridPoint, ...], ...]  # только непустые слои
    nominal: int                               # k = |D| - 1

    def members(self) -> List[GridPoint]:
        return [p for layer in self.layers for p in layer]


def _first_rank(diff: np.ndarray, g: int) -> int:
    """
    Наименьший номер среди строк diff в лексикографическом перечислении
    [-g, g]^n, где нулевой вектор идёт первым. Номер считается целым Python:
    (2g + 1)^n не помещается в int64 уже при n = 4.
    """
    if (diff == 0).all(axis=1).any():
        return 0
    first = diff[np.lexsort(diff.T[::-1])[0]]
    index = 0
    for c in first:
        index = index * (2 * g + 1) + int(c) + g
    return index + 1


def layer_markers(s1: MarkerSet, s2: MarkerSet, cfg: TorusConfig) -> Layers:
    """T_0 = S2, T_i = S1 ∩ (g_i·S2) ∖ ⋃_{j<i} T_j."""
    side = cfg.lattice_side
    g = (cfg.r1 + cfg.r2) // 2
    second = s2.array() // 2
    grouped: Dict[int, List[GridPoint]] = defaultdict(list)
    for point, p in zip(s1.points, s1.array() // 2):
        diff = _wrap(p - second, side)
        close = np.abs(diff).max(axis=1) <= g
        if not close.any():
            raise OracleFailure(f"layer_markers: маркер {point} дальше r1 + r2 от S2")
        grouped[_first_rank(diff[close], g)].append(point)
    ranks = tuple(sorted(grouped))
    return Layers(ranks, tuple(tuple(sorted(grouped[r])) for r in ranks), cfg.layer_count)


def layer_separation_violation(layers: Layers, cfg: TorusConfig) -> Optional[Tuple[GridPoint, GridPoint]]:
    """Пара маркеров одного слоя с ρ ≤ r2 - 2r1, если есть."""
    bound = cfg.r2 - 2 * cfg.r1
    for layer in layers.layers:
        points = np.array(layer, dtype=np.int64)
        for i in range(len(points) - 1):
            close = np.flatnonzero(_circular(points[i + 1:] - points[i], cfg.m).max(axis=1) <= bound)
            if len(close):
                return layer[i], layer[i + 1 + int(close[0])]
    return None


# --- Прямоугольники R_z ---

@dataclass(frozen=True)
class PlacedBox:
    marker: GridPoint
    layer: int                # позиция слоя, 0 - T_0
    box: HalfRect             # развёрнутые координаты около маркера
    shifts: Tuple[int, ...]   # сдвиги граней: lo_0, hi_0, lo_1, hi_1, ...


@dataclass(frozen=True)
class LayeredBoxes:
    config: TorusConfig
    layers: Layers
    boxes: Tuple[PlacedBox, ...]  # в порядке построения
    neighbours: int = 0           # наибольшее число более ранних R_u в радиусе согласования

    def centers(self) -> np.ndarray:
        return np.array([b.marker for b in self.boxes], dtype=np.int64).reshape(len(self.boxes), -1)


def _adjust_face(level: int, direction: int, levels: np.ndarray, cfg: TorusConfig,
                 marker: GridPoint, axis: int) -> Tuple[int, int]:
    for step in range(0, cfg.shift + 1, 2):
        candidate = level + direction * step
        if len(levels) == 0 or _circular(levels - candidate, cfg.m).min() >= cfg.ell:
            return candidate, step
    side = 'lo' if direction < 0 else 'hi'
    raise ConfigurationError(f"build_rectangles: грань {side} оси {axis} у маркера {marker} (уровень {level}) "
                             f"не отодвигается на ≤ {cfg.shift} до расстояния ≥ ℓ={cfg.ell}")


def build_rectangles(layers: Layers, cfg: TorusConfig) -> LayeredBoxes:
    """
    R_z = B(z, r1), каждая грань отодвигается наружу не больше чем на r1/10 до
    нечётного уровня на расстоянии ≥ ℓ от параллельных граней уже построенных
    прямоугольников в радиусе согласования.
    """
    total = sum(len(layer) for layer in layers.layers)
    centers = np.zeros((total, cfg.n), dtype=np.int64)
    lows = np.zeros((total, cfg.n), dtype=np.int64)
    highs = np.zeros((total, cfg.n), dtype=np.int64)
    placed: List[PlacedBox] = []
    neighbours = 0
    for position, markers in enumerate(tqdm(layers.layers, desc='layers', disable=not PROGRESS)):
        for z in markers:
            count = len(placed)
            near = _circular(centers[:count] - np.array(z), cfg.m).max(axis=1) <= cfg.interaction_radius
            neighbours = max(neighbours, int(near.sum()))
            lo = [c - cfg.r1 for c in z]
            hi = [c + cfg.r1 for c in z]
            shifts = []
            for axis in range(cfg.n):
                levels = np.concatenate([lows[:count][near, axis], highs[:count][near, axis]])
                lo[axis], s_lo = _adjust_face(lo[axis], -1, levels, cfg, z, axis)
                hi[axis], s_hi = _adjust_face(hi[axis], 1, levels, cfg, z, axis)
                shifts += [s_lo, s_hi]
            centers[count], lows[count], highs[count] = z, lo, hi
            placed.append(PlacedBox(z, position, HalfRect(tuple(lo), tuple(hi)), tuple(shifts)))
    adjusted = sum(1 for b in placed if any(b.shifts))
    logging.info(f"Torus: {len(placed)} прямоугольников, подогнано {adjusted}, "
                 f"соседей в радиусе согласования до {neighbours} (C={cfg.neighbour_constant})")
    return LayeredBoxes(cfg, layers, tuple(placed), neighbours)


def orthogonality_violations(boxes: LayeredBoxes, limit: int = 5) -> List[Tuple[int, int, int]]:
    """Пары (i, j, ось) с параллельными гранями ближе ℓ в радиусе согласования."""
    cfg = boxes.config
    centers = boxes.centers()
    lows = np.array([b.box.lo for b in boxes.boxes], dtype=np.int64)
    highs = np.array([b.box.hi for b in boxes.boxes], dtype=np.int64)
    found = []
    for i in range(1, len(centers)):
        near = np.flatnonzero(_circular(centers[:i] - centers[i], cfg.m).max(axis=1) <= cfg.interaction_radius)
        for axis in range(cfg.n):
            mine = np.array([lows[i, axis], highs[i, axis]])
            theirs = np.stack([lows[near, axis], highs[near, axis]], axis=1)
            close = (_circular(theirs[:, :, None] - mine[None, None, :], cfg.m) < cfg.ell).any(axis=(1, 2))
            for j in near[close]:
                found.append((int(j), i, axis))
                if len(found) >= limit:
                    return found
    return found


def boxes_cover(boxes: LayeredBoxes) -> Optional[GridPoint]:
    """Точка решётки (полуединицы), не покрытая ни одним R_z, если есть."""
    cfg = boxes.config
    side = cfg.lattice_side
    buckets = _TorusBuckets(cfg.n, side, (cfg.reach + 1) // 2)
    lattice_boxes = [r_to_z(b.box) for b in boxes.boxes]
    for i, b in enumerate(boxes.boxes):
        buckets.add(i, tuple((c // 2) % side for c in b.marker))
    for key in buckets.keys():
        remainder = _uncovered(buckets.bounds(key), [lattice_boxes[i] for i in buckets.around(key)], side)
        if remainder:
            return tuple(2 * c for c in remainder[0][0])
    return None


# --- Деление H_z ---

def _divide_cells(mask: np.ndarray, coords: Sequence[np.ndarray]) -> List[Box]:
    """Грани с нормалью последней оси продлеваются в гиперплоскости, затем рекурсия по сечению."""
    if mask.ndim == 1:
        runs, k = [], 0
        while k < len(mask):
            if not mask[k]:
                k += 1
                continue
            start = k
            while k < len(mask) and mask[k]:
                k += 1
            runs.append(((int(coords[0][start]),), (int(coords[0][k]),)))
        return runs
    last = coords[-1]
    cuts = [0] + [i for i in range(1, mask.shape[-1]) if not np.array_equal(mask[..., i - 1], mask[..., i])]
    cuts.append(mask.shape[-1])
    pieces = []
    for a, b in zip(cuts, cuts[1:]):
        section = mask[..., a]
        if not section.any():
            continue
        for lo, hi in _divide_cells(section, coords[:-1]):
            pieces.append((lo + (int(last[a]),), hi + (int(last[b]),)))
    return pieces


def divide_region(box: HalfRect, holes: Sequence[HalfRect]) -> List[HalfRect]:
    """Делит box ∖ ⋃holes рекурсивным продлением граней (e_n, затем e_{n-1}, ...)."""
    clipped = [c for c in (box.intersect(h) for h in holes) if c is not None and c.is_full]
    coords = [np.array(sorted({box.lo[i], box.hi[i]} | {v for c in clipped for v in (c.lo[i], c.hi[i])}),
                       dtype=np.int64) for i in range(box.n)]
    mask = ~coverage_grid(clipped, coords)
    return [HalfRect(lo, hi) for lo, hi in _divide_cells(mask, coords)]


def _to_torus(piece: HalfRect, m: int) -> HalfRect:
    return piece.translate(tuple(-(lo // m) * m for lo in piece.lo))


@dataclass(frozen=True)
class TorusPartition:
    """Разбиение тора (Z/m)^n: куски с lo в [0, m), владельцы R_z и их слои."""
    n: int
    m: int
    pieces: Tuple[HalfRect, ...]
    owners: Tuple[int, ...] = ()
    owner_layers: Tuple[int, ...] = ()
    config: Optional[TorusConfig] = None

    def __post_init__(self):
        object.__setattr__(self, 'pieces', tuple(_to_torus(p, self.m) for p in self.pieces))
        for piece in self.pieces:
            if piece.n != self.n:
                raise DomainError(f"TorusPartition: кусок {piece} не из R^{self.n}")

    def to_json(self) -> Dict[str, Any]:
        return {'scale': 'half-units', 'n': self.n, 'period': [self.m] * self.n,
                'pieces': [p.to_json() for p in self.pieces], 'owners': list(self.owners),
                'owner_layers': list(self.owner_layers),
                'config': self.config.to_json() if self.config else None}


def divide_polyhedra(boxes: LayeredBoxes) -> TorusPartition:
    """Для z в порядке слоёв: H_z = R_z минус прямоугольники более ранних слоёв, затем деление."""
    cfg = boxes.config
    centers = boxes.centers()
    layer_of = np.array([b.layer for b in boxes.boxes], dtype=np.int64)
    pieces, owners, layers = [], [], []
    for index, placed in enumerate(tqdm(boxes.boxes, desc='divide', disable=not PROGRESS)):
        z = centers[index]
        offsets = _wrap(centers - z, cfg.m)
        close = (np.abs(offsets).max(axis=1) <= 2 * cfg.reach) & (layer_of < placed.layer)
        holes = [boxes.boxes[j].box.translate(tuple(int(v) for v in z + offsets[j] - centers[j]))
                 for j in np.flatnonzero(close)]
        for piece in divide_region(placed.box, holes):
            pieces.append(piece)
            owners.append(index)
            layers.append(placed.layer)
    return TorusPartition(cfg.n, cfg.m, tuple(pieces), tuple(owners), tuple(layers), cfg)


# --- Индекс кусков на торе ---

class _PieceIndex:
    """Корзины кусков по нижнему углу; соседи берутся в ближайшем образе."""

    def __init__(self, partition: TorusPartition):
        self.m = partition.m
        self.n = partition.n
        self.lo = np.array([p.lo for p in partition.pieces], dtype=np.int64).reshape(-1, partition.n)
        self.hi = np.array([p.hi for p in partition.pieces], dtype=np.int64).reshape(-1, partition.n)
        self.sides = self.hi - self.lo
        width = int(self.sides.max()) if len(self.sides) else 1
        if 2 * width >= self.m:
            raise DomainError(f"_PieceIndex: кусок со стороной {width} не меньше половины тора {self.m}")
        self.q = max(1, self.m // width)
        self.keys = [tuple(int(v) for v in k) for k in (self.lo * self.q) // self.m]
        self.members: Dict[Tuple[int, ...], List[int]] = defaultdict(list)
        for i, key in enumerate(self.keys):
            self.members[key].append(i)

    def _around(self, key: Sequence[int]) -> np.ndarray:
        if self.q < 3:
            return np.arange(len(self.lo))
        found = []
        for delta in product((-1, 0, 1), repeat=self.n):
            found.extend(self.members.get(tuple((b + d) % self.q for b, d in zip(key, delta)), ()))
        return np.array(found, dtype=np.int64)

    def meeting(self, i: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Куски, касающиеся куска i (включая его самого), в образах рядом с ним."""
        candidates = self._around(self.keys[i])
        lo = self.lo[i] + _wrap(self.lo[candidates] - self.lo[i], self.m)
        hi = lo + self.sides[candidates]
        hit = np.all((lo <= self.hi[i]) & (hi >= self.lo[i]), axis=1)
        return candidates[hit], lo[hit], hi[hit]

    def containing(self, point: Sequence[int]) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Куски, содержащие точку; возвращает и саму точку, приведённую по модулю m."""
        p = np.mod(np.asarray(point, dtype=np.int64), self.m)
        candidates = self._around(tuple(int(c) * self.q // self.m for c in p))
        lo = p + _wrap(self.lo[candidates] - p, self.m)
        hi = lo + self.sides[candidates]
        hit = np.all((lo <= p) & (p <= hi), axis=1)
        return candidates[hit], lo[hit], hi[hit], p


@dataclass(frozen=True)
class TorusValidity:
    valid: bool
    volume: int
    expected: int
    overlap: Optional[Tuple[int, int]] = None
    degenerate: Optional[int] = None


def validate_torus(partition: TorusPartition) -> TorusValidity:
    """Непересекающиеся внутренности и суммарный объём m^n, то есть покрытие."""
    expected = partition.m ** partition.n
    degenerate = next((i for i, p in enumerate(partition.pieces) if not p.is_full), None)
    volume = sum(p.volume for p in partition.pieces)
    overlap = None
    if degenerate is None:
        index = _PieceIndex(partition)
        for i in range(len(partition.pieces)):
            candidates, lo, hi = index.meeting(i)
            hit = np.all(np.maximum(lo, index.lo[i]) < np.minimum(hi, index.hi[i]), axis=1) & (candidates != i)
            if hit.any():
                overlap = (i, int(candidates[hit][0]))
                break
    valid = degenerate is None and overlap is None and volume == expected
    return TorusValidity(valid, volume, expected, overlap, degenerate)


# --- Вершины и статистика ν ---

def _face_vertices(piece_lo: np.ndarray, piece_hi: np.ndarray,
                   lo: np.ndarray, hi: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Точки с β = n на гранях куска с нормалью e_1; lo/hi - соседи в согласованных образах."""
    n = len(piece_lo)
    parts = []
    for level in (piece_lo[0], piece_hi[0]):
        plane = (lo[:, 0] <= level) & (level <= hi[:, 0])
        plo, phi = lo[plane], hi[plane]
        values = [np.array([level], dtype=np.int64)]
        for axis in range(1, n):
            candidates = np.concatenate([plo[:, axis], phi[:, axis]])
            values.append(np.unique(candidates[(candidates >= piece_lo[axis]) & (candidates <= piece_hi[axis])]))
        points = _mesh(values)
        nu, beta, axes = stats_from_bounds(plo, phi, 2 * points)
        keep = beta == n
        parts.append((points[keep], nu[keep], axes[keep]))
    return tuple(np.concatenate(group) for group in zip(*parts))


@dataclass(frozen=True)
class VertexScan:
    points: np.ndarray  # N×n, полуединицы по модулю m
    nu: np.ndarray
    axes: np.ndarray


def scan_vertices(partition: TorusPartition) -> VertexScan:
    """
    Все вершины (β = n) разбиения тора.

    Вершина лежит на грани с нормалью e_1 некоторого содержащего её куска,
    а остальные её координаты - уровни граней кусков, касающихся этого.
    """
    index = _PieceIndex(partition)
    points, nus, masks = [], [], []
    for i in tqdm(range(len(partition.pieces)), desc='vertices', disable=not PROGRESS):
        _, lo, hi = index.meeting(i)
        p, nu, axes = _face_vertices(index.lo[i], index.hi[i], lo, hi)
        points.append(np.mod(p, partition.m))
        nus.append(nu)
        masks.append(axes)
    points = np.concatenate(points)
    unique, first = np.unique(points, axis=0, return_index=True)
    return VertexScan(unique, np.concatenate(nus)[first], np.concatenate(masks)[first])


def gamma_bound(n: int) -> int:
    """3·2^(n-2)."""
    return 3 * 2 ** (n - 2)


@dataclass(frozen=True)
class RegulationStats:
    histogram: Dict[int, int]
    max_nu: int
    vertices: int
    bound: int
    troublesome: int = 0

    @property
    def within_bound(self) -> bool:
        return self.max_nu <= self.bound

    def to_json(self) -> Dict[str, Any]:
        return {'histogram': {str(k): v for k, v in sorted(self.histogram.items())}, 'max': self.max_nu,
                'vertices': self.vertices, 'bound': self.bound, 'troublesome_count': self.troublesome}


def regulation_stats(partition: TorusPartition, scan: Optional[VertexScan] = None) -> RegulationStats:
    """Гистограмма ν по вершинам и наибольшее ν."""
    scan = scan if scan is not None else scan_vertices(partition)
    values, counts = np.unique(scan.nu, return_counts=True)
    histogram = {int(v): int(c) for v, c in zip(values, counts)}
    troublesome = int((scan.nu == 6).sum()) if partition.n == 3 else 0
    return RegulationStats(histogram, int(scan.nu.max()), len(scan.nu), gamma_bound(partition.n), troublesome)


# --- Активные и пассивные векторы ---

@dataclass(frozen=True)
class VertexAnalysis:
    point: GridPoint
    nu: int
    pieces: Tuple[int, ...]              # индексы кусков, содержащих точку
    owner: Optional[int]                 # R_z наибольшего слоя с x ∈ ∂H_z
    active: FrozenSet[int]
    passive: FrozenSet[int]
    crossing: FrozenSet[Tuple[int, int]]  # (j, l): e_j пересекает e_l

    @property
    def alpha(self) -> int:
        return len(self.active)

    @property
    def pi(self) -> int:
        return len(self.passive)

    def crosses(self, j: int, l: int) -> bool:
        return (j, l) in self.crossing

    def has_non_crossing(self) -> bool:
        n = len(self.point)
        return any(not self.crosses(j, l) for j in range(n) for l in range(n) if j != l)

    def pattern(self) -> Optional[str]:
        """Метка трудной точки при n = 3: какую из осей e_1, e_3 не пересекает e_2."""
        if len(self.point) != 3 or self.nu != 6 or self.active != frozenset({0}) or self.passive != frozenset({1, 2}):
            return None
        for j, k in ((0, 2), (2, 0)):
            if (not self.crosses(1, j) and self.crosses(1, k) and self.crosses(k, 1) and self.crosses(k, j)
                    and self.crosses(j, 1) and self.crosses(j, k)):
                return f'e2-misses-e{j + 1}'
        return None

    def to_json(self) -> Dict[str, Any]:
        return {'point': list(self.point), 'nu': self.nu, 'active': sorted(self.active),
                'passive': sorted(self.passive), 'crossing': sorted(list(c) for c in self.crossing),
                'pattern': self.pattern()}


def _orthants(n: int) -> np.ndarray:
    return np.array(list(product((-1, 1), repeat=n)), dtype=np.int64)


def _flip(k: int, axis: int, n: int) -> int:
    """Номер ортанта с противоположным знаком по оси axis."""
    return k ^ (1 << (n - 1 - axis))


def active_passive(partition: TorusPartition, x: Sequence[int], index: Optional['_PieceIndex'] = None) -> VertexAnalysis:
    """Активные и пассивные граничные векторы в x и отношение пересечения."""
    index = index or _PieceIndex(partition)
    n = partition.n
    idx, lo, hi, p = index.containing(x)
    if len(idx) == 0:
        raise DomainError(f"active_passive: точка {tuple(x)} не покрыта")
    signs = _orthants(n)
    corners = 2 * p[None, :] + signs
    inside = np.all((2 * lo[None] < corners[:, None]) & (corners[:, None] < 2 * hi[None]), axis=2)
    if not inside.any(axis=1).all():
        raise DomainError(f"active_passive: окрестность {tuple(x)} покрыта не полностью")
    orthant_piece = idx[inside.argmax(axis=1)]
    boundary = {axis for axis in range(n) if ((lo[:, axis] == p[axis]) | (hi[:, axis] == p[axis])).any()}

    owner, active = None, set()
    if partition.owners:
        owners = np.array(partition.owners)[orthant_piece]
        layers = dict(zip(partition.owners, partition.owner_layers))
        partial = [int(o) for o in set(owners.tolist()) if 0 < int((owners == o).sum()) < len(signs)]
        if partial:
            owner = max(partial, key=lambda o: (layers[o], o))
            mine = owners == owner
            active = {axis for axis in range(n)
                      if any(mine[k] != mine[_flip(k, axis, n)] for k in range(len(signs)))}

    # e_j пересекает e_l, если грань с нормалью e_j через x есть по обе стороны по e_l
    crossing = set()
    for j in range(n):
        faces = [k for k in range(len(signs)) if orthant_piece[k] != orthant_piece[_flip(k, j, n)]]
        for l in range(n):
            if l != j and {int(signs[k][l]) for k in faces} >= {-1, 1}:
                crossing.add((j, l))
    return VertexAnalysis(tuple(int(c) for c in p), len(idx), tuple(sorted(int(i) for i in idx)), owner,
                          frozenset(active), frozenset(boundary - active), frozenset(crossing))


def find_troublesome(partition: TorusPartition, scan: Optional[VertexScan] = None) -> List[VertexAnalysis]:
    """Вершины с ν = 6 трёхмерного разбиения вместе с разбором пересечений."""
    if partition.n != 3:
        raise DomainError(f"find_troublesome: только n = 3, получено {partition.n}")
    scan = scan if scan is not None else scan_vertices(partition)
    index = _PieceIndex(partition)
    return [active_passive(partition, tuple(int(c) for c in point), index)
            for point in scan.points[scan.nu == 6]]


# --- Доводка до 5 ---

@dataclass(frozen=True)
class Refinement:
    partition: TorusPartition
    inserted: Tuple[HalfRect, ...]   # L_x
    points: Tuple[GridPoint, ...]    # бывшие трудные точки
    epsilon: Fraction                # 1/(2C)
    neighbour_bound: int             # C


def carve(piece: HalfRect, hole: HalfRect, order: Sequence[int]) -> List[HalfRect]:
    """piece ∖ hole: грани hole продлеваются по осям в заданном порядке, затем по остальным."""
    hole = piece.intersect(hole)
    if hole is None or not hole.is_full:
        return [piece]
    axes = list(order) + [a for a in range(piece.n) if a not in order]
    region, pieces = piece, []
    for axis in axes:
        for bound in (hole.lo[axis], hole.hi[axis]):
            if region.lo[axis] < bound < region.hi[axis]:
                below = region.with_interval(axis, region.lo[axis], bound)
                above = region.with_interval(axis, bound, region.hi[axis])
                keep, cut = (below, above) if below.interiors_overlap(hole) else (above, below)
                pieces.append(cut)
                region = keep
    return pieces


def _pieces_near(partition: TorusPartition, point: np.ndarray, radius: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Куски в образах около point, подходящие к нему ближе radius."""
    lo = np.array([p.lo for p in partition.pieces], dtype=np.int64)
    hi = np.array([p.hi for p in partition.pieces], dtype=np.int64)
    # образ нижнего угла однозначен, пока сторона + 2·radius < m
    image_lo = point + _wrap(lo - point, partition.m)
    image_hi = image_lo + (hi - lo)
    gap = np.maximum(np.maximum(image_lo - point, point - image_hi), 0)
    close = gap.max(axis=1) <= radius
    return np.flatnonzero(close), image_lo[close], image_hi[close]


def neighbour_bound(partition: TorusPartition, points: Sequence[GridPoint], radius: int) -> int:
    """C: наибольшее число кусков в радиусе radius от точек."""
    best = 1
    for point in points:
        idx, _, _ = _pieces_near(partition, np.array(point, dtype=np.int64), radius)
        best = max(best, len(idx))
    return best


def _ell_offsets(ell: int, dmin: int) -> Iterator[Tuple[int, Tuple[int, int], Tuple[int, int]]]:
    steps = range(dmin, ell + 1, 2)
    for c in steps:
        for a1, b1, a2, b2 in product(steps, repeat=4):
            if a1 + b1 <= ell and a2 + b2 <= ell:
                yield c, (a1, b1), (a2, b2)


def ell_box(x: Sequence[int], axis: int, side: int, depth: int,
            spans: Sequence[Tuple[int, int]]) -> HalfRect:
    """L_x: грань на плоскости x_axis, глубина depth в сторону side, по остальным осям [x - a, x + b]."""
    lo, hi = [], []
    others = iter(spans)
    for i, c in enumerate(x):
        if i == axis:
            lo.append(c if side > 0 else c - depth)
            hi.append(c + depth if side > 0 else c)
        else:
            a, b = next(others)
            lo.append(c - a)
            hi.append(c + b)
    return HalfRect(tuple(lo), tuple(hi))


def _local_vertices(lo: np.ndarray, hi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    points, nus = [], []
    for i in range(len(lo)):
        touching = np.all((lo <= hi[i]) & (hi >= lo[i]), axis=1)
        p, nu, _ = _face_vertices(lo[i], hi[i], lo[touching], hi[touching])
        points.append(p)
        nus.append(nu)
    return np.concatenate(points), np.concatenate(nus)


def _try_ell_box(x: np.ndarray, box: HalfRect, pair: Tuple[int, int], orders: Tuple[Sequence[int], Sequence[int]],
                 lo: np.ndarray, hi: np.ndarray) -> Optional[List[HalfRect]]:
    """Вставка L_x в два куска pair (позиции в lo/hi) с проверкой ν вокруг."""
    rects = [HalfRect(tuple(a), tuple(b)) for a, b in zip(lo, hi)]
    first, second = rects[pair[0]], rects[pair[1]]
    new = [box] + carve(first, box, orders[0]) + carve(second, box, orders[1])
    keep = [r for k, r in enumerate(rects) if k not in pair]
    after = keep + new
    new_lo = np.array([r.lo for r in after], dtype=np.int64)
    new_hi = np.array([r.hi for r in after], dtype=np.int64)
    points, nu_after = _local_vertices(new_lo, new_hi)
    # вне замыкания двух кусков ничего не изменилось
    inside = (np.all((points >= lo[pair[0]]) & (points <= hi[pair[0]]), axis=1)
              | np.all((points >= lo[pair[1]]) & (points <= hi[pair[1]]), axis=1))
    points, nu_after = points[inside], nu_after[inside]
    nu_before, _, _ = stats_from_bounds(lo, hi, 2 * points)
    at_x = np.all(points == x, axis=1)
    if not at_x.any() or int(nu_after[at_x][0]) != 5:
        return None
    if ((nu_after > 5) & ((nu_after > nu_before) | at_x)).any():
        return None
    return new


@dataclass(frozen=True)
class _Insertion:
    box: HalfRect
    replaced: Tuple[int, int]          # индексы двух кусков в разбиении
    first: List[HalfRect]              # остаток первого куска
    second: List[HalfRect]             # остаток второго


def _insert_ell_box(partition: TorusPartition, analysis: VertexAnalysis, ell: int, dmin: int) -> Optional[_Insertion]:
    x = np.array(analysis.point, dtype=np.int64)
    _, six_lo, six_hi = _pieces_near(partition, x, 0)
    # все куски, касающиеся объединения шести
    idx, lo, hi = _pieces_near(partition, x, int((six_hi - six_lo).max()))
    position = {int(i): k for k, i in enumerate(idx)}
    six = [position[i] for i in analysis.pieces]
    for j in (0, 2):
        if analysis.crosses(1, j):
            continue
        for side in (1, -1):
            on_side = [k for k in six if (lo[k, j] if side > 0 else hi[k, j]) == x[j]]
            if len(on_side) != 2:
                continue
            other_axes = [a for a in range(3) if a != j]
            for depth, span1, span2 in _ell_offsets(ell, dmin):
                box = ell_box(x, j, side, depth, (span1, span2))
                far = box.hi[j] if side > 0 else box.lo[j]
                if np.abs(np.concatenate([lo[:, j], hi[:, j]]) - far).min() < dmin:
                    continue
                if any(np.abs(np.concatenate([lo[:, a], hi[:, a]]) - v).min() < dmin
                       for a in other_axes for v in (box.lo[a], box.hi[a])):
                    continue
                overlap = np.all(np.maximum(lo, box.lo) < np.minimum(hi, box.hi), axis=1)
                if sorted(np.flatnonzero(overlap).tolist()) != sorted(on_side):
                    continue
                pair = (on_side[0], on_side[1])
                for orders in (((0, 1), (2, 1)), ((2, 1), (0, 1))):
                    new = _try_ell_box(x, box, pair, orders, lo, hi)
                    if new is not None:
                        first = carve(HalfRect(tuple(lo[pair[0]]), tuple(hi[pair[0]])), box, orders[0])
                        return _Insertion(box, (int(idx[pair[0]]), int(idx[pair[1]])), first, new[1 + len(first):])
    return None


def refine_to_5(partition: TorusPartition, ell: Optional[int] = None) -> Refinement:
    """
    Вокруг каждой трудной точки x вставляет L_x и заново делит два задетых
    куска: первый продлением граней L_x с нормалью e_1, затем e_2, второй -
    e_3, затем e_2.
    """
    if partition.n != 3:
        raise DomainError(f"refine_to_5: только n = 3, получено {partition.n}")
    if ell is None:
        if partition.config is None:
            raise ConfigurationError("refine_to_5: не задано ℓ")
        ell = partition.config.ell
    if ell < Config.MIN_REFINE_ELL:
        raise ConfigurationError(f"refine_to_5: ℓ={ell} < {Config.MIN_REFINE_ELL}, L_x не помещается на сетке")
    troubles = find_troublesome(partition)
    radius = Config.HOPS * partition.config.r1 if partition.config else ell
    bound = neighbour_bound(partition, [t.point for t in troubles], radius)
    epsilon = Fraction(1, 2 * bound)
    dmin = max(2, math.ceil(epsilon * ell))
    dmin += dmin % 2
    if 2 * dmin > ell:
        raise ConfigurationError(f"refine_to_5: εℓ={float(epsilon * ell):.3f} не помещается в ℓ={ell}")

    pieces = list(partition.pieces)
    owners = list(partition.owners) or [0] * len(pieces)
    layers = list(partition.owner_layers) or [0] * len(pieces)
    inserted, points = [], []
    for trouble in troubles:
        current = TorusPartition(3, partition.m, tuple(pieces), tuple(owners), tuple(layers), partition.config)
        analysis = active_passive(current, trouble.point)
        if analysis.nu < 6:
            continue
        found = _insert_ell_box(current, analysis, ell, dmin)
        if found is None:
            raise OracleFailure(f"refine_to_5: не найдено место для L_x в точке {trouble.point}")
        first, second = found.replaced
        carried = [first] * (1 + len(found.first)) + [second] * len(found.second)
        new_owners = [owners[k] for k in carried]
        new_layers = [layers[k] for k in carried]
        for k in sorted((first, second), reverse=True):
            del pieces[k], owners[k], layers[k]
        pieces += [found.box] + found.first + found.second
        owners += new_owners
        layers += new_layers
        inserted.append(found.box)
        points.append(analysis.point)
    logging.info(f"Torus: вставлено {len(inserted)} прямоугольников L_x, C={bound}")
    refined = TorusPartition(3, partition.m, tuple(pieces), tuple(owners), tuple(layers), partition.config)
    return Refinement(refined, tuple(inserted), tuple(points), epsilon, bound)


# --- Невырожденность ---

@dataclass(frozen=True)
class NondegeneracyReport:
    axes: Tuple[bool, ...]                            # по каждой оси есть кусок толщиной ≥ 2 точек решётки
    differences: bool                                 # ∂_{u∖v} ≠ ∅ для всех u ≠ ±v
    witness: Optional[Tuple[GridPoint, GridPoint]] = None

    @property
    def nondegenerate(self) -> bool:
        return all(self.axes)


def _sample_points(piece: HalfRect) -> FrozenSet[GridPoint]:
    """Угловой подъящик куска: не больше трёх точек решётки по каждой оси."""
    lo, hi = r_to_z(piece)
    return lattice_box_points(lo, tuple(min(b, a + 2) for a, b in zip(lo, hi)))


def check_nondegenerate(partition: TorusPartition) -> NondegeneracyReport:
    n = partition.n
    axes = tuple(any(p.sides[i] >= 4 for p in partition.pieces) for i in range(n))
    vectors = [unit_vector(n, axis, sign) for axis in range(n) for sign in (1, -1)]
    samples = [_sample_points(p) for p in partition.pieces if all(s >= 4 for s in p.sides)]
    samples = samples[:1] or [_sample_points(p) for p in partition.pieces]
    for u in vectors:
        for v in vectors:
            if u == v or all(a == -b for a, b in zip(u, v)):
                continue
            if not any(directional_difference(points, u, v) for points in samples):
                return NondegeneracyReport(axes, False, (u, v))
    return NondegeneracyReport(axes, True)


# --- Полный прогон ---

@dataclass
class TorusRun:
    config: TorusConfig
    s1: MarkerSet
    s2: MarkerSet
    layers: Layers
    boxes: LayeredBoxes
    partition: TorusPartition
    scan: VertexScan
    stats: RegulationStats
    checks: Dict[str, bool] = field(default_factory=dict)


def simulate_torus(cfg: TorusConfig) -> TorusRun:
    """Сети, слои, прямоугольники, деление и статистика для одного seed."""
    logging.info(f"Torus: 🚀 n={cfg.n}, m={cfg.m}, ℓ={cfg.ell}, r1={cfg.r1}, r2={cfg.r2}, seed={cfg.seed}")
    s1 = greedy_net(cfg, cfg.r1)
    s2 = refine_net(s1, cfg.r1, cfg.r2, cfg.seed)
    layers = layer_markers(s1, s2, cfg)
    boxes = build_rectangles(layers, cfg)
    partition = divide_polyhedra(boxes)
    scan = scan_vertices(partition)
    stats = regulation_stats(partition, scan)
    logging.info(f"Torus: ✅ {len(partition.pieces)} кусков, max ν = {stats.max_nu} (граница {stats.bound})")
    return TorusRun(cfg, s1, s2, layers, boxes, partition, scan, stats)


def verify_run(run: TorusRun) -> Dict[str, Tuple[bool, str]]:
    """Перепроверка всех неравенств построения сканированием."""
    cfg = run.config
    results: Dict[str, Tuple[bool, str]] = {}
    check = verify_net(run.s1, cfg.r1, cfg.r1)
    results['net-s1'] = (check.valid, f'|S1|={len(run.s1)}, свидетель {check.witness}')
    check = verify_net(run.s2, cfg.r2 - 2 * cfg.r1, cfg.r1 + cfg.r2)
    subset = set(run.s2.points) <= set(run.s1.points)
    results['net-s2'] = (check.valid and subset, f'|S2|={len(run.s2)}, свидетель {check.witness}')
    members = run.layers.members()
    partitioned = len(members) == len(set(members)) and set(members) == set(run.s1.points)
    first = run.layers.ranks[0] == 0 and set(run.layers.layers[0]) == set(run.s2.points)
    clash = layer_separation_violation(run.layers, cfg)
    results['layers'] = (partitioned and first and clash is None,
                         f'{len(run.layers.layers)} непустых слоёв из k+1={run.layers.nominal + 1}, пара {clash}')
    shifts_ok = all(max(b.shifts) <= cfg.shift for b in run.boxes.boxes)
    violations = orthogonality_violations(run.boxes)
    results['orthogonality'] = (shifts_ok and not violations, f'нарушения {violations}')
    results['neighbour-constant'] = (run.boxes.neighbours <= cfg.neighbour_constant,
                                     f'соседей {run.boxes.neighbours}, C={cfg.neighbour_constant}, '
                                     f'r1={cfg.r1} ≥ {Config.SEPARATION_FACTOR}·C·ℓ')
    if not cfg.relaxed:
        balls = all(not any(b.shifts) for b in run.boxes.boxes if b.layer == 0)
        results['layer-0-balls'] = (balls, 'прямоугольники T_0 - шары B(z, r1)')
    uncovered = boxes_cover(run.boxes)
    results['boxes-cover'] = (uncovered is None, f'непокрытая точка {uncovered}')
    validity = validate_torus(run.partition)
    results['partition'] = (validity.valid, f'объём {validity.volume}/{validity.expected}, '
                                            f'пересечение {validity.overlap}')
    if cfg.n == 2:
        results['gamma'] = (run.stats.max_nu == 3, f'max ν = {run.stats.max_nu}')
    else:
        results['gamma'] = (run.stats.within_bound, f'max ν = {run.stats.max_nu} ≤ {run.stats.bound}')
    index = _PieceIndex(run.partition)
    top = run.scan.points[run.scan.nu == run.stats.max_nu][:Config.CROSSING_SAMPLE]
    bad = [a.point for a in (active_passive(run.partition, tuple(int(c) for c in p), index) for p in top)
           if a.alpha == 1 and a.pi == cfg.n - 1 and not a.has_non_crossing()]
    results['crossing'] = (not bad, f'проверено {len(top)} вершин с ν = {run.stats.max_nu}, контрпримеры {bad[:3]}')
    nondeg = check_nondegenerate(run.partition)
    results['nondegenerate'] = (nondeg.nondegenerate and nondeg.differences, f'оси {nondeg.axes}')
    return results


class TorusService:
    """Служба торовой симуляции: γ-оценка по нескольким seed и доводка n = 3."""

    def __init__(self, seeds: int = Config.SEEDS, presets: Sequence[str] = Config.SUITE_PRESETS,
                 refine_preset: Optional[str] = Config.REFINE_PRESET):
        self.seeds = seeds
        self.presets = list(presets)
        self.refine_preset = refine_preset
        logging.info(f"Torus: Служба инициализирована (пресеты {self.presets}, seed: {seeds}).")

    def _check_preset(self, name: str, report: SuiteReport):
        if name.endswith(Config.RELAXED_SUFFIX):
            logging.warning(f"Torus: ⚠️ пресет {name} вне строгих неравенств r2 ≥ 8·r1, m ≥ 4(r1 + r2)")
        seeds = min(self.seeds, int(load_presets().get(name, {}).get('seeds', self.seeds)))
        for seed in range(seeds):
            cfg = preset_config(name, seed=seed)
            run = simulate_torus(cfg)
            for check, (passed, detail) in verify_run(run).items():
                report.add(f'{name}-s{seed}-{check}', passed, detail)
            if name == self.refine_preset:
                self._check_refinement(name, seed, run, report)

    def _check_refinement(self, name: str, seed: int, run: TorusRun, report: SuiteReport):
        troubles = find_troublesome(run.partition, run.scan)
        patterns = [t.pattern() for t in troubles]
        report.add(f'{name}-s{seed}-troublesome', all(patterns),
                   f'{len(troubles)} точек с ν = 6, узоры {sorted(set(p for p in patterns if p))}',
                   [t.point for t, p in zip(troubles, patterns) if p is None][:3])
        refinement = refine_to_5(run.partition)
        refined = refinement.partition
        validity = validate_torus(refined)
        scan = scan_vertices(refined)
        stats = regulation_stats(refined, scan)
        index = _PieceIndex(refined)
        former = [active_passive(refined, p, index).nu for p in refinement.points]
        report.add(f'{name}-s{seed}-refine5', validity.valid and stats.max_nu <= 5 and stats.troublesome == 0
                   and all(v == 5 for v in former),
                   f'max ν = {stats.max_nu}, вставлено L_x: {len(refinement.inserted)}, C={refinement.neighbour_bound}')
        nondeg = check_nondegenerate(refined)
        report.add(f'{name}-s{seed}-refine5-nondegenerate', nondeg.nondegenerate and nondeg.differences,
                   f'оси {nondeg.axes}')

    def run(self) -> SuiteReport:
        """Запускает все проверки набора и возвращает отчёт."""
        report = SuiteReport('torus')
        started = time.monotonic()
        for name in self.presets:
            try:
                self._check_preset(name, report)
            except Exception as e:
                logging.error(f"Torus: ❌ Ошибка в пресете {name}: {e}")
                report.add(name, False, f'исключение: {e}')
        report.elapsed = time.monotonic() - started
        return report


async def main() -> SuiteReport:
    """Точка входа для запуска торового набора."""
    service = TorusService()
    return await asyncio.get_running_loop().run_in_executor(None, service.run)


if __name__ == "__main__":
    asyncio.run(main())
