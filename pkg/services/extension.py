# services/extension.py
"""
Задача продолжения: есть ли минимальное разбиение окна R, содержащее
заданные попарно непересекающиеся прямоугольники.

В размерности 2 ответ всегда «да» (extend_2d). В размерности 3 есть
препятствие из трёх ящиков; для него здесь есть перебор по сетке и
трассировка цепочки поверхностей, которая на любом кандидате находит либо
нарушение минимальности, либо противоречие. Перебор полон только на
заданной сетке и ничего не доказывает про вещественные координаты.
"""

import asyncio
import logging
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from joblib import Parallel, delayed

from geometry.errors import DomainError, OracleFailure
from geometry.geometry_config import GeometryConfig
from geometry.partitions import LocalPartition, slice_partition, validate_local_partition
from geometry.rects import HalfRect
from reporting.manifest import SuiteReport
from services.minimal_local import MinimalityWitness, is_minimal_local, minimality_witness
from services.surfaces import ChainStep, is_box_like, maximal_surfaces, surface_chain
from templates import EXTEND_2D_INSTANCES, FUZZ_CANDIDATES, SEARCH_HALF_STEP, SEARCH_WORKERS

# Настраиваем логирование
logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(levelname)s - %(message)s')


class Config:
    """Конфигурация службы продолжений."""
    RANDOM_INSTANCES = EXTEND_2D_INSTANCES
    RANDOM_SIZE = 8          # сторона окна случайных экземпляров, единицы
    RANDOM_PIECES = 5
    FUZZ_CANDIDATES = FUZZ_CANDIDATES
    WORKERS = SEARCH_WORKERS
    HALF_STEP = SEARCH_HALF_STEP
    SEED = 0


# --- Экземпляры ---

@dataclass(frozen=True)
class ExtensionInstance:
    """Окно R и обязательные прямоугольники S (полуединицы)."""
    window: HalfRect
    required: Tuple[HalfRect, ...]

    def __post_init__(self):
        object.__setattr__(self, 'required', tuple(self.required))
        if not self.window.is_full:
            raise DomainError(f"ExtensionInstance: окно {self.window} вырождено")
        for piece in self.required:
            if piece.n != self.window.n or not piece.is_full or not self.window.contains_rect(piece):
                raise DomainError(f"ExtensionInstance: {piece} не полноразмерный прямоугольник внутри {self.window}")
        for i, a in enumerate(self.required):
            for b in self.required[i + 1:]:
                if a.intersect(b) is not None:
                    raise DomainError(f"ExtensionInstance: замкнутые {a} и {b} пересекаются")

    @property
    def n(self) -> int:
        return self.window.n

    def lifted(self) -> 'ExtensionInstance':
        """R × [0, 1] и P × [0, 1]."""
        side = GeometryConfig.HALF_UNITS
        return ExtensionInstance(self.window.lift(0, side), tuple(p.lift(0, side) for p in self.required))

    def to_json(self) -> Dict[str, Any]:
        return {'scale': 'half-units', 'window': self.window.to_json(),
                'required': [p.to_json() for p in self.required]}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> 'ExtensionInstance':
        if data.get('scale', 'half-units') != 'half-units':
            raise DomainError(f"ExtensionInstance: неизвестный масштаб {data.get('scale')}")
        return cls(HalfRect.from_json(data['window']), tuple(HalfRect.from_json(p) for p in data.get('required', [])))


def obstruction_instance(n: int = 3) -> ExtensionInstance:
    """[0,4]^3 с P0 = [0,3]×[0,2]×[0,1], P1 = [2,4]×[3,4]×[0,3], P2 = [0,1]×[1,4]×[2,4]; при n > 3 - подъёмы."""
    if n < 3:
        raise DomainError(f"obstruction_instance: нужно n ≥ 3, получено {n}")
    real = [((0, 0, 0), (3, 2, 1)), ((2, 3, 0), (4, 4, 3)), ((0, 1, 2), (1, 4, 4))]
    instance = ExtensionInstance(HalfRect.from_real((0, 0, 0), (4, 4, 4)),
                                 tuple(HalfRect.from_real(lo, hi) for lo, hi in real))
    for _ in range(n - 3):
        instance = instance.lifted()
    return instance


def example_instance_2d() -> ExtensionInstance:
    """[0,4]^2 с одним обязательным квадратом [1,2]^2; продолжение - 5 прямоугольников."""
    return ExtensionInstance(HalfRect.cube(2, 0, 8), (HalfRect.cube(2, 2, 4),))


def random_instance_2d(rng: np.random.Generator, size: int = Config.RANDOM_SIZE,
                       count: int = Config.RANDOM_PIECES) -> ExtensionInstance:
    """Окно [0, size]^2 и до count случайных ящиков на целой сетке, попарно не касающихся."""
    side = GeometryConfig.HALF_UNITS
    pieces: List[HalfRect] = []
    for _ in range(count * 10):
        if len(pieces) >= count:
            break
        lo = rng.integers(0, size, size=2)
        hi = np.array([rng.integers(a + 1, size + 1) for a in lo])
        candidate = HalfRect(tuple(int(v) * side for v in lo), tuple(int(v) * side for v in hi))
        if all(candidate.intersect(p) is None for p in pieces):
            pieces.append(candidate)
    return ExtensionInstance(HalfRect.cube(2, 0, size * side), tuple(pieces))


# --- Двумерное продолжение ---

def extend_2d(instance: ExtensionInstance) -> LocalPartition:
    """
    Вертикальные стороны обязательных прямоугольников продлеваются вверх и
    вниз, пока не упрутся в горизонтальную сторону окна или другого
    обязательного прямоугольника. Горизонтальные отрезки не добавляются.
    """
    if instance.n != 2:
        raise DomainError(f"extend_2d: нужна размерность 2, получено {instance.n}")
    window, required = instance.window, instance.required
    xs = sorted({window.lo[0], window.hi[0]} | {v for p in required for v in (p.lo[0], p.hi[0])})
    ys = sorted({window.lo[1], window.hi[1]} | {v for p in required for v in (p.lo[1], p.hi[1])})
    owner = np.full((len(xs) - 1, len(ys) - 1), -1, dtype=np.int64)
    for k, piece in enumerate(required):
        owner[xs.index(piece.lo[0]):xs.index(piece.hi[0]), ys.index(piece.lo[1]):ys.index(piece.hi[1])] = k

    # walls[i, j]: продолжённая сторона на прямой xs[i + 1] в строке j
    rows = owner.shape[1]
    walls = np.zeros((len(xs) - 2, rows), dtype=bool)
    for i in range(len(xs) - 2):
        left, right = owner[i], owner[i + 1]
        for order in (range(rows), range(rows - 1, -1, -1)):
            active = False
            for j in order:
                if left[j] >= 0 or right[j] >= 0:
                    active = bool(left[j] != right[j])
                elif active:
                    walls[i, j] = True

    graph = nx.Graph()
    free = [tuple(c) for c in np.argwhere(owner < 0)]
    graph.add_nodes_from(free)
    for i, j in free:
        if j + 1 < rows and owner[i, j + 1] < 0:
            graph.add_edge((i, j), (i, j + 1))
        if i + 1 < owner.shape[0] and owner[i + 1, j] < 0 and not walls[i, j]:
            graph.add_edge((i, j), (i + 1, j))

    pieces = list(required)
    for component in nx.connected_components(graph):
        cells = np.array(sorted(component))
        lo, hi = cells.min(axis=0), cells.max(axis=0) + 1
        if len(cells) != int(np.prod(hi - lo)):
            raise OracleFailure(f"extend_2d: область {cells.tolist()} не прямоугольник")
        pieces.append(HalfRect((xs[lo[0]], ys[lo[1]]), (xs[hi[0]], ys[hi[1]])))
    return LocalPartition(window, tuple(sorted(pieces)))


# --- Перебор по сетке ---

class _Grid:
    """Окно, нарезанное на ячейки шага step; owner - номер куска или -1."""

    def __init__(self, instance: ExtensionInstance, step: int):
        if step <= 0:
            raise DomainError(f"Шаг сетки должен быть положительным, получено {step}")
        self.window = instance.window
        self.step = step
        for rect in (instance.window,) + instance.required:
            if any((v - w) % step for v, w in zip(rect.lo + rect.hi, self.window.lo + self.window.lo)):
                raise DomainError(f"{rect} не лежит на сетке шага {step}")
        self.shape = tuple((b - a) // step for a, b in zip(self.window.lo, self.window.hi))
        self.owner = np.full(self.shape, -1, dtype=np.int64)
        self.pieces: List[HalfRect] = []
        for piece in instance.required:
            self.place(self.cell(piece.lo), tuple((b - a) // step for a, b in zip(piece.lo, piece.hi)))

    def cell(self, point: Sequence[int]) -> Tuple[int, ...]:
        return tuple((v - w) // self.step for v, w in zip(point, self.window.lo))

    def _slices(self, cell: Sequence[int], sizes: Sequence[int]) -> Tuple[slice, ...]:
        return tuple(slice(c, c + s) for c, s in zip(cell, sizes))

    def rect(self, cell: Sequence[int], sizes: Sequence[int]) -> HalfRect:
        lo = tuple(w + c * self.step for w, c in zip(self.window.lo, cell))
        return HalfRect(lo, tuple(a + s * self.step for a, s in zip(lo, sizes)))

    def first_free(self) -> Optional[int]:
        flat = self.owner.ravel()
        k = int(np.argmax(flat < 0))
        return k if flat[k] < 0 else None

    def boxes_at(self, cell: Sequence[int]) -> List[Tuple[int, ...]]:
        """Размеры всех свободных ящиков с нижним углом в cell."""
        n = len(self.shape)
        options: List[Tuple[int, ...]] = [()]
        for axis in range(n):
            grown = []
            for sizes in options:
                k = 1
                while cell[axis] + k <= self.shape[axis]:
                    trial = sizes + (k,) + (1,) * (n - axis - 1)
                    if (self.owner[self._slices(cell, trial)] >= 0).any():
                        break
                    grown.append(sizes + (k,))
                    k += 1
            options = grown
        return options

    def place(self, cell: Sequence[int], sizes: Sequence[int]):
        self.owner[self._slices(cell, sizes)] = len(self.pieces)
        self.pieces.append(self.rect(cell, sizes))

    def pop(self, cell: Sequence[int], sizes: Sequence[int]):
        self.owner[self._slices(cell, sizes)] = -1
        self.pieces.pop()

    def partition(self) -> LocalPartition:
        return LocalPartition(self.window, tuple(sorted(self.pieces)))


class _MinimalityCheck:
    """
    Внутренние точки сетки (вершины и середины рёбер) и их 2^n соседние
    ячейки. Точка проверяется, когда заполнена её последняя ячейка.
    """

    def __init__(self, shape: Tuple[int, ...]):
        n = len(shape)
        axes = [np.arange(1, 2 * s) for s in shape]
        grids = np.meshgrid(*axes, indexing='ij')
        points = np.stack([g.ravel() for g in grids], axis=1)
        on_line = points % 2 == 0
        points = points[on_line.sum(axis=1) >= 2]
        on_line = points % 2 == 0
        signs = np.array([[(k >> (n - 1 - a)) & 1 for a in range(n)] for k in range(2 ** n)])
        # индексы ячеек: на линии - слева/справа, в середине ячейки - она сама
        base = np.where(on_line, points // 2 - 1, (points - 1) // 2)
        cells = base[:, None, :] + signs[None, :, :] * on_line[:, None, :]
        self.n = n
        self.cells = np.ravel_multi_index(tuple(cells[..., a] for a in range(n)), shape)
        self.last = self.cells.max(axis=1)
        order = np.argsort(self.last, kind='stable')
        self.cells, self.last = self.cells[order], self.last[order]

    def ok(self, owner: np.ndarray, start: int, stop: int) -> bool:
        """ν = β + 1 во всех точках, ставших полностью заполненными на [start, stop)."""
        a, b = np.searchsorted(self.last, [start, stop])
        if a == b:
            return True
        ids = owner.ravel()[self.cells[a:b]]
        ordered = np.sort(ids, axis=1)
        nu = 1 + (np.diff(ordered, axis=1) != 0).sum(axis=1)
        beta = np.zeros(len(ids), dtype=np.int64)
        for axis in range(self.n):
            flip = np.arange(2 ** self.n) ^ (1 << (self.n - 1 - axis))
            beta += (ids != ids[:, flip]).any(axis=1)
        return bool((nu == beta + 1).all())


@dataclass
class SearchResult:
    partition: Optional[LocalPartition]
    nodes: int
    step: int
    statement: str

    @property
    def found(self) -> bool:
        return self.partition is not None

    def to_json(self) -> Dict[str, Any]:
        return {'found': self.found, 'nodes': self.nodes, 'step': self.step, 'statement': self.statement,
                'partition': [p.to_json() for p in self.partition.pieces] if self.partition else None}


def _resolution(step: int, found: bool) -> str:
    unit = f'{step}/{GeometryConfig.HALF_UNITS}'
    if found:
        return f'найдено минимальное продолжение с координатами, кратными {unit}'
    return (f'минимального продолжения с координатами, кратными {unit}, нет; '
            f'о вещественных координатах перебор ничего не утверждает')


def _dfs(grid: _Grid, checker: _MinimalityCheck, counter: List[int]) -> bool:
    counter[0] += 1
    start = grid.first_free()
    if start is None:
        return True
    cell = np.unravel_index(start, grid.shape)
    for sizes in grid.boxes_at(cell):
        grid.place(cell, sizes)
        stop = grid.first_free()
        if checker.ok(grid.owner, start, grid.owner.size if stop is None else stop) and _dfs(grid, checker, counter):
            return True
        grid.pop(cell, sizes)
    return False


def _search_branch(instance: ExtensionInstance, step: int,
                   sizes: Tuple[int, ...]) -> Tuple[Optional[LocalPartition], int]:
    """Поддерево перебора с первым ящиком заданного размера."""
    grid = _Grid(instance, step)
    checker = _MinimalityCheck(grid.shape)
    start = grid.first_free()
    cell = np.unravel_index(start, grid.shape)
    grid.place(cell, sizes)
    stop = grid.first_free()
    counter = [1]
    if not checker.ok(grid.owner, start, grid.owner.size if stop is None else stop):
        return None, counter[0]
    found = _dfs(grid, checker, counter)
    return (grid.partition() if found else None), counter[0]


def search_minimal_extension(instance: ExtensionInstance, step: int = GeometryConfig.HALF_UNITS,
                             workers: int = Config.WORKERS) -> SearchResult:
    """
    Полный перебор разбиений окна на ящики с углами на сетке шага step
    (полуединицы), содержащих обязательные прямоугольники. Ячейки
    заполняются в лексикографическом порядке, поэтому новый кусок всегда
    начинается в первой свободной ячейке; ветка отсекается, как только
    в полностью окружённой точке ν ≠ β + 1.
    """
    grid = _Grid(instance, step)
    checker = _MinimalityCheck(grid.shape)
    start = grid.first_free()
    if start is None:
        ok = checker.ok(grid.owner, 0, grid.owner.size)
        partition = grid.partition() if ok else None
        return SearchResult(partition, 1, step, _resolution(step, ok))

    if not checker.ok(grid.owner, 0, start):
        return SearchResult(None, 1, step, _resolution(step, False))
    frontier = grid.boxes_at(np.unravel_index(start, grid.shape))
    logging.info(f"Extension: 🚀 перебор на сетке {grid.shape}, шаг {step}, {len(frontier)} ветвей")
    nodes, partition = 1, None
    if workers > 1:
        results = Parallel(n_jobs=workers)(delayed(_search_branch)(instance, step, sizes) for sizes in frontier)
        for found, count in results:
            nodes += count
            partition = partition or found
    else:
        for sizes in frontier:
            found, count = _search_branch(instance, step, sizes)
            nodes += count
            if found is not None:
                partition = found
                break
    statement = _resolution(step, partition is not None)
    logging.info(f"Extension: ✅ {statement} (узлов {nodes})")
    return SearchResult(partition, nodes, step, statement)


def random_completion(instance: ExtensionInstance, rng: np.random.Generator,
                      step: int = GeometryConfig.HALF_UNITS) -> LocalPartition:
    """Случайное разбиение окна на ящики сетки, содержащее обязательные."""
    grid = _Grid(instance, step)
    while True:
        start = grid.first_free()
        if start is None:
            return grid.partition()
        cell = np.unravel_index(start, grid.shape)
        options = grid.boxes_at(cell)
        grid.place(cell, options[int(rng.integers(len(options)))])


# --- Трассировка цепочки ---

@dataclass
class ObstructionCertificate:
    """Итог трассировки: certificate, non_minimal или accepted."""
    outcome: str
    deltas: List[int] = field(default_factory=list)
    chain: List[ChainStep] = field(default_factory=list)
    clash: str = ''
    witness: Optional[MinimalityWitness] = None

    def to_json(self) -> Dict[str, Any]:
        return {'outcome': self.outcome, 'deltas': self.deltas, 'chain': [s.to_json() for s in self.chain],
                'clash': self.clash,
                'witness': None if self.witness is None else {'point2': list(self.witness.point2),
                                                              'nu': self.witness.nu, 'beta': self.witness.beta}}


def _contains_required(instance: ExtensionInstance, candidate: LocalPartition) -> bool:
    pieces = set(candidate.pieces)
    return all(p in pieces for p in instance.required)


def trace_obstruction_chain(instance: ExtensionInstance, candidate: LocalPartition) -> ObstructionCertificate:
    """
    Проходит рассуждение для трёх ящиков P0, P1, P2: поверхность над P0,
    её рост до уровня низа P2 внутри проекции окна, срезанной по P1, и
    противоречие с поверхностью под P2.
    """
    if instance.n != 3 or len(instance.required) != 3:
        raise DomainError("trace_obstruction_chain: нужен трёхмерный экземпляр из трёх ящиков")
    if candidate.window != instance.window or not validate_local_partition(candidate.pieces, candidate.window).valid:
        raise DomainError("trace_obstruction_chain: кандидат не является разбиением окна")
    if not _contains_required(instance, candidate):
        raise DomainError("trace_obstruction_chain: кандидат не содержит обязательные ящики")

    witness = minimality_witness(candidate)
    if witness is not None:
        return ObstructionCertificate('non_minimal', witness=witness)

    p0, p1, p2 = instance.required
    axis = 2
    confinement = instance.window.project(axis).with_interval(1, instance.window.lo[1], p1.lo[1])
    top = p2.lo[axis]
    certificate = ObstructionCertificate('certificate')
    try:
        surfaces = [s for s in maximal_surfaces(candidate, p0.hi[axis], axis)
                    if any(b.interiors_overlap(p0.project(axis)) for b in s.region)]
        ok, m1 = is_box_like(surfaces[0].region) if surfaces else (False, None)
        if not ok:
            certificate.clash = f'поверхность над P0 на уровне {p0.hi[axis]} не прямоугольник'
            return certificate
        chain = surface_chain(candidate, m1, p0.hi[axis], axis)
    except (DomainError, OracleFailure) as e:
        certificate.clash = f'свойство поверхностей нарушено: {e}'
        return certificate

    certificate.chain = [s for s in chain.steps if s.d1 < top]
    certificate.deltas = [s.d2 for s in certificate.chain]
    for step in certificate.chain:
        if not confinement.contains_rect(step.rect):
            certificate.clash = f'поверхность {step.rect} на уровнях [{step.d1}, {step.d2}] выходит за {confinement}'
            return certificate
    terminal = certificate.chain[-1]
    if terminal.d2 > top:
        certificate.clash = f'виртуальная поверхность {terminal.rect} проходит низ P2 (до {terminal.d2} > {top})'
        return certificate
    footprint = p2.project(axis)
    if not terminal.rect.contains_rect(footprint):
        certificate.clash = (f'на уровне {top} поверхность {terminal.rect} ⊆ {confinement}, '
                             f'но должна продолжать поверхность, содержащую π(P2) = {footprint}')
        return certificate
    return ObstructionCertificate('accepted', certificate.deltas, certificate.chain)


# --- Подъём и сечение ---

def lift_partition(partition: LocalPartition) -> LocalPartition:
    side = GeometryConfig.HALF_UNITS
    return LocalPartition(partition.window.lift(0, side), tuple(p.lift(0, side) for p in partition.pieces))


def project_lift(partition: LocalPartition, instance: ExtensionInstance) -> LocalPartition:
    """Сечение (n+1)-мерного продолжения на высоте, не являющейся уровнем, и проверка, что оно продолжает instance."""
    axis = partition.n - 1
    window = partition.window
    heights = [c for c in range(window.lo[axis] + 1, window.hi[axis])
               if all(c not in (p.lo[axis], p.hi[axis]) for p in partition.pieces)]
    if not heights:
        raise DomainError("project_lift: нет высоты, не являющейся уровнем")
    section = slice_partition(partition, axis, heights[0])
    if not _contains_required(instance, section):
        raise OracleFailure("project_lift: сечение не содержит обязательные прямоугольники")
    return section


def lift_consistent(partition: LocalPartition, instance: ExtensionInstance) -> bool:
    """Минимальное продолжение lifted-экземпляра даёт в сечении минимальное продолжение исходного."""
    lifted = lift_partition(partition)
    if not is_minimal_local(lifted):
        return False
    section = project_lift(lifted, instance)
    return section.same_pieces(partition) and is_minimal_local(section)


# --- Служба ---

class ExtensionService:
    """Служба продолжений: 2D-алгоритм, препятствие, перебор и трассировка."""

    def __init__(self, instances: int = Config.RANDOM_INSTANCES, fuzz: int = Config.FUZZ_CANDIDATES,
                 half_step: bool = Config.HALF_STEP, workers: int = Config.WORKERS):
        self.instances = instances
        self.fuzz = fuzz
        self.half_step = half_step
        self.workers = workers
        logging.info(f"Extension: Служба инициализирована (экземпляров {instances}, кандидатов {fuzz}).")

    def _check_extend_2d(self, report: SuiteReport):
        example = example_instance_2d()
        expected = [HalfRect((0, 0), (2, 8)), HalfRect((2, 0), (4, 2)), HalfRect((2, 2), (4, 4)),
                    HalfRect((2, 4), (4, 8)), HalfRect((4, 0), (8, 8))]
        result = extend_2d(example)
        report.add('extend2d-example', list(result.sorted_pieces()) == sorted(expected),
                   f'{len(result.pieces)} кусков', result.pieces)

        rng = np.random.default_rng(Config.SEED)
        bad = []
        for _ in range(self.instances):
            instance = random_instance_2d(rng)
            partition = extend_2d(instance)
            valid = validate_local_partition(partition.pieces, partition.window).valid
            if not (valid and _contains_required(instance, partition) and is_minimal_local(partition)):
                bad.append(instance.to_json())
        report.add('extend2d-random', not bad, f'{self.instances} случайных экземпляров', bad[:1])

    def _check_obstruction(self, report: SuiteReport):
        three = obstruction_instance(3)
        four = obstruction_instance(4)
        lifted = all(p4 == p3.lift(0, 2) for p3, p4 in zip(three.required, four.required))
        report.add('obstruction-instance', len(three.required) == 3 and lifted and four.window == HalfRect.cube(4, 0, 8)
                   .with_interval(3, 0, 2), 'три ящика в [0,4]^3 и их подъём')

        result = search_minimal_extension(three, GeometryConfig.HALF_UNITS, self.workers)
        report.add('search-unit-grid', not result.found, f'{result.statement}; узлов {result.nodes}')
        if self.half_step:
            result = search_minimal_extension(three, 1, self.workers)
            report.add('search-half-grid', not result.found, f'{result.statement}; узлов {result.nodes}')

        analog = ExtensionInstance(HalfRect.cube(2, 0, 8), tuple(p.project(2) for p in three.required[:2]))
        result = search_minimal_extension(analog, GeometryConfig.HALF_UNITS, self.workers)
        report.add('search-2d-analog', result.found and is_minimal_local(result.partition), result.statement)

    def _check_trace(self, report: SuiteReport):
        instance = obstruction_instance(3)
        rng = np.random.default_rng(Config.SEED)
        outcomes: Dict[str, int] = {}
        accepted = None
        for _ in range(self.fuzz):
            certificate = trace_obstruction_chain(instance, random_completion(instance, rng))
            outcomes[certificate.outcome] = outcomes.get(certificate.outcome, 0) + 1
            if certificate.outcome == 'accepted':
                accepted = certificate
        report.add('trace-fuzz', accepted is None, f'исходы {dict(sorted(outcomes.items()))}', accepted)

    def _check_lift(self, report: SuiteReport):
        rng = np.random.default_rng(Config.SEED + 1)
        instance = random_instance_2d(rng)
        partition = extend_2d(instance)
        report.add('lift-consistency', lift_consistent(partition, instance), 'подъём 2D-продолжения и сечение')

    def run(self) -> SuiteReport:
        """Запускает все проверки набора и возвращает отчёт."""
        report = SuiteReport('extension')
        started = time.monotonic()
        for check in (self._check_extend_2d, self._check_obstruction, self._check_trace, self._check_lift):
            try:
                check(report)
            except Exception as e:
                logging.error(f"Extension: ❌ Ошибка в {check.__name__}: {e}")
                report.add(check.__name__, False, f'исключение: {e}')
        report.elapsed = time.monotonic() - started
        return report


async def main() -> SuiteReport:
    """Точка входа для запуска набора продолжений."""
    service = ExtensionService()
    return await asyncio.get_running_loop().run_in_executor(None, service.run)


if __name__ == "__main__":
    asyncio.run(main())
