# services/minimal_local.py
"""
Минимальные разбиения около точки: каноническая форма (дерево), e_j-пары,
перечисление, проекции половин, ортогональность и сертификат того, что
объединение любой части кусков гомеоморфно прямоугольнику.
"""

import asyncio
import logging
import time
from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from joblib import Parallel, delayed
from tqdm import tqdm

from geometry.errors import DomainError, PreconditionError
from geometry.partitions import (AboutPartition, LocalPartition, cell_points, point_stats,
                                 stats_at_points, union_equal, validate_local_partition)
from geometry.rects import HalfRect, boundary_incidence, bounding_box
from reporting.manifest import SuiteReport
from services.separative import (all_rows, matrix_is_partition, principal_matrix,
                                 r0_window, row_box)
from templates import MINIMAL_MAX_N, PARALLEL_JOBS, PROGRESS, UNION_MAX_N

# Настраиваем логирование
logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(levelname)s - %(message)s')


class Config:
    """Конфигурация службы минимальных разбиений."""
    MAX_N = MINIMAL_MAX_N
    UNION_MAX_N = UNION_MAX_N
    # До какого n сверять перечисление с перебором матриц
    MATRIX_ORACLE_MAX_N = 3
    # Сколько порядков пробует жадное стягивание
    COLLAPSE_ATTEMPTS = 6
    JOBS = PARALLEL_JOBS


# --- Минимальность ---

@dataclass(frozen=True)
class MinimalityWitness:
    """Точка (в удвоенных полуединицах), где ν ≠ β + 1."""
    point2: Tuple[int, ...]
    nu: int
    beta: int


def is_minimal_about(about: AboutPartition) -> bool:
    """ν = β + 1 в точке x."""
    stats = point_stats(about, about.x)
    return stats.nu == stats.beta + 1


def minimality_witness(partition: LocalPartition) -> Optional[MinimalityWitness]:
    """Первая ячейка решётки внутри окна, где ν ≠ β + 1, либо None."""
    points = cell_points(partition.window, partition.pieces)
    if len(points) == 0:
        return None
    nu, beta, _ = stats_at_points(partition.pieces, points)
    bad = np.flatnonzero(nu != beta + 1)
    if len(bad) == 0:
        return None
    k = int(bad[0])
    return MinimalityWitness(tuple(int(c) for c in points[k]), int(nu[k]), int(beta[k]))


def is_minimal_local(partition: LocalPartition) -> bool:
    """ν = β + 1 во всех ячейках решётки внутри окна (не только в вершинах)."""
    return minimality_witness(partition) is None


# --- Проекции и e_j-пары ---

def project_halves(about: AboutPartition, j: int, sign: int) -> AboutPartition:
    """π_A(P_{j,±}): куски с j-й инцидентностью ≠ -sign, ось j выброшена."""
    if about.n < 2:
        raise DomainError("project_halves: нужна размерность n ≥ 2")
    if not 0 <= j < about.n:
        raise DomainError(f"project_halves: ось {j} вне диапазона")
    pieces = tuple(p.project(j) for p in about.pieces if boundary_incidence(p, about.x)[j] != -sign)
    x = about.x[:j] + about.x[j + 1:]
    return AboutPartition(LocalPartition(about.window.project(j), pieces), x)


@dataclass(frozen=True)
class EjPair:
    axis: int
    plus: int   # индекс куска с +1 в столбце axis
    minus: int  # индекс куска с -1 в столбце axis


def find_ej_pair(about: AboutPartition) -> EjPair:
    """Два куска с одинаковыми строками инцидентности, кроме противоположных j-х элементов."""
    if not is_minimal_about(about):
        raise PreconditionError("find_ej_pair: разбиение не минимально, пара не гарантирована")
    rows = [boundary_incidence(p, about.x) for p in about.pieces]
    for a, b in combinations(range(len(rows)), 2):
        diff = [j for j in range(about.n) if rows[a][j] != rows[b][j]]
        if len(diff) == 1 and rows[a][diff[0]] * rows[b][diff[0]] == -1:
            j = diff[0]
            plus, minus = (a, b) if rows[a][j] == 1 else (b, a)
            return EjPair(j, plus, minus)
    raise PreconditionError("find_ej_pair: разбиение не содержит e_j-пары (β = 0?)")


def merge_pair(about: AboutPartition, pair: EjPair) -> AboutPartition:
    """Заменяет пару её объединением (на месте куска с +1)."""
    merged = bounding_box((about.pieces[pair.plus], about.pieces[pair.minus]))
    pieces = []
    for index, piece in enumerate(about.pieces):
        if index == pair.plus:
            pieces.append(merged)
        elif index != pair.minus:
            pieces.append(piece)
    return AboutPartition(LocalPartition(about.window, tuple(pieces)), about.x)


# --- Деревья ---

@dataclass(frozen=True)
class TreeNode:
    """Узел помеченного простого дерева; у корня метка 0."""
    label: int = 0
    children: Tuple['TreeNode', ...] = ()

    def to_json(self) -> Dict:
        return {'label': self.label, 'children': [c.to_json() for c in self.children]}

    @classmethod
    def from_json(cls, data: Dict) -> 'TreeNode':
        return cls(int(data.get('label', 0)), tuple(cls.from_json(c) for c in data.get('children', [])))


def tree_levels(root: TreeNode) -> List[List[TreeNode]]:
    levels = [[root]]
    while True:
        nxt = [c for node in levels[-1] for c in node.children]
        if not nxt:
            return levels
        levels.append(nxt)


def validate_tree(root: TreeNode, k: int):
    """Проверяет: k+1 уровней, терминалы на уровне k, ровно одно ветвление на уровне, метки."""
    levels = tree_levels(root)
    if len(levels) != k + 1:
        raise DomainError(f"Дерево имеет {len(levels)} уровней вместо {k + 1}")
    for depth, nodes in enumerate(levels[:-1]):
        if any(not node.children for node in nodes):
            raise DomainError(f"Терминальный узел на уровне {depth} < {k}")
        splits = [node for node in nodes if len(node.children) == 2]
        if len(splits) != 1 or any(len(node.children) > 2 for node in nodes):
            raise DomainError(f"На уровне {depth} должно быть ровно одно ветвление")
        for node in nodes:
            labels = sorted(c.label for c in node.children)
            if len(node.children) == 1 and labels != [0]:
                raise DomainError(f"Единственный потомок на уровне {depth + 1} должен иметь метку 0")
            if len(node.children) == 2 and labels != [-1, 1]:
                raise DomainError(f"Пара потомков на уровне {depth + 1} должна иметь метки ±1")


def tree_from_choices(choices: Sequence[int]) -> TreeNode:
    """Дерево, в котором на уровне ℓ ветвится узел с номером choices[ℓ] (слева направо)."""
    # Пути узлов уровня: кортежи меток от корня.
    level_paths: List[Tuple[int, ...]] = [()]
    children_of: Dict[Tuple[int, ...], Tuple[int, ...]] = {}
    for choice in choices:
        if not 0 <= choice < len(level_paths):
            raise DomainError(f"tree_from_choices: выбор {choice} вне 0..{len(level_paths) - 1}")
        nxt = []
        for index, path in enumerate(level_paths):
            labels = (1, -1) if index == choice else (0,)
            children_of[path] = labels
            nxt.extend(path + (label,) for label in labels)
        level_paths = nxt

    def freeze(path: Tuple[int, ...], label: int) -> TreeNode:
        return TreeNode(label, tuple(freeze(path + (c,), c) for c in children_of.get(path, ())))

    return freeze((), 0)


def enumerate_trees(k: int) -> List[TreeNode]:
    """Все помеченные полные простые деревья с k+1 уровнями (их k!)."""
    return [tree_from_choices(c) for c in product(*(range(level + 1) for level in range(k)))]


@dataclass(frozen=True)
class CanonicalForm:
    indices: Tuple[int, ...]
    tree: TreeNode

    @property
    def k(self) -> int:
        return len(self.indices)

    def to_json(self) -> Dict:
        return {'indices': list(self.indices), 'tree': self.tree.to_json()}

    @classmethod
    def from_json(cls, data: Dict) -> 'CanonicalForm':
        return cls(tuple(int(i) for i in data['indices']), TreeNode.from_json(data['tree']))


def _split(region: HalfRect, axis: int, x: Sequence[int], label: int) -> HalfRect:
    if label == 1:
        return region.with_interval(axis, x[axis], region.hi[axis])
    if label == -1:
        return region.with_interval(axis, region.lo[axis], x[axis])
    return region


def _terminal_regions(cf: CanonicalForm, window: HalfRect, x: Sequence[int]) -> List[HalfRect]:
    level: List[Tuple[TreeNode, HalfRect]] = [(cf.tree, window)]
    for depth in range(cf.k):
        axis = cf.indices[depth]
        level = [(child, _split(region, axis, x, child.label)) for node, region in level for child in node.children]
    return [region for _, region in level]


def build_from_tree(cf: CanonicalForm, window: HalfRect, x: Sequence[int]) -> AboutPartition:
    """Разбиение P(i_1..i_k; T): последовательное деление гиперплоскостями через x."""
    x = tuple(x)
    if len(set(cf.indices)) != len(cf.indices):
        raise DomainError(f"build_from_tree: повторяющиеся индексы {cf.indices}")
    if any(not 0 <= i < window.n for i in cf.indices):
        raise DomainError(f"build_from_tree: индексы {cf.indices} вне 0..{window.n - 1}")
    if not window.is_full or not window.interior_contains(x):
        raise DomainError(f"build_from_tree: точка {x} не внутри окна {window}")
    validate_tree(cf.tree, cf.k)
    return AboutPartition(LocalPartition(window, tuple(_terminal_regions(cf, window, x))), x)


def _extend_tree(node: TreeNode, region: HalfRect, depth: int, cf: CanonicalForm,
                 x: Sequence[int], merged: HalfRect) -> TreeNode:
    if depth == cf.k:
        if region == merged:
            return TreeNode(node.label, (TreeNode(1), TreeNode(-1)))
        return TreeNode(node.label, (TreeNode(0),))
    axis = cf.indices[depth]
    children = tuple(_extend_tree(c, _split(region, axis, x, c.label), depth + 1, cf, x, merged)
                     for c in node.children)
    return TreeNode(node.label, children)


def canonical_form(about: AboutPartition) -> CanonicalForm:
    """Каноническая форма минимального разбиения: слияние e_j-пар и обратное наращивание дерева."""
    if not is_minimal_about(about):
        raise PreconditionError("canonical_form: разбиение не минимально")
    if len(about.pieces) == 1:
        return CanonicalForm((), TreeNode(0))
    pair = find_ej_pair(about)
    merged = merge_pair(about, pair)
    inner = canonical_form(merged)
    merged_box = bounding_box((about.pieces[pair.plus], about.pieces[pair.minus]))
    tree = _extend_tree(inner.tree, about.window, 0, inner, about.x, merged_box)
    return CanonicalForm(inner.indices + (pair.axis,), tree)


# --- Перечисление ---

def _partitions_for_indices(indices: Tuple[int, ...], trees: List[TreeNode], window: HalfRect,
                            x: Tuple[int, ...]) -> List[Tuple[HalfRect, ...]]:
    return [tuple(sorted(build_from_tree(CanonicalForm(indices, t), window, x).pieces)) for t in trees]


def enumerate_minimal_about(n: int, k: int, jobs: int = 1) -> List[AboutPartition]:
    """Все различные минимальные разбиения [-1,1]^n около 0 с β = k."""
    if n < 1 or not 0 <= k <= n:
        raise DomainError(f"enumerate_minimal_about: требуется 0 ≤ k ≤ n, получено n={n}, k={k}")
    window = r0_window(n)
    x = (0,) * n
    trees = enumerate_trees(k)
    sequences = list(permutations(range(n), k))
    if jobs == 1:
        batches = [_partitions_for_indices(s, trees, window, x) for s in sequences]
    else:
        batches = Parallel(n_jobs=jobs)(delayed(_partitions_for_indices)(s, trees, window, x) for s in sequences)
    distinct = sorted({key for batch in batches for key in batch})
    return [AboutPartition(LocalPartition(window, key), x) for key in distinct]


def enumerate_minimal_by_matrices(n: int, k: int) -> List[Tuple[HalfRect, ...]]:
    """Перебор множеств строк {-1,0,+1}^n: разбиения R0 из k+1 куска с k ненулевыми столбцами."""
    result = set()
    for rows in combinations(all_rows(n), k + 1):
        nonzero = sum(1 for j in range(n) if any(r[j] for r in rows))
        if nonzero == k and matrix_is_partition(rows, n):
            result.add(tuple(sorted(row_box(r) for r in rows)))
    return sorted(result)


# --- Ортогональность ---

def boundary_vectors(about: AboutPartition) -> FrozenSet[int]:
    return point_stats(about, about.x).vectors


def are_orthogonal_about(first: AboutPartition, second: AboutPartition) -> bool:
    """Множества граничных векторов в x не пересекаются."""
    if first.x != second.x:
        raise DomainError(f"are_orthogonal_about: разные точки {first.x} и {second.x}")
    return not (boundary_vectors(first) & boundary_vectors(second))


# --- Объединения кусков ---

@dataclass(frozen=True)
class UnionCertificate:
    """
    Разложение объединения кусков по схеме доказательства.

    kind: 'window' | 'piece' | 'merge' | 'glue'. Для 'glue' дети - сечения
    в размерности n-1 под и над уровнем x_axis; interval = (lo, x, hi) по оси.
    """
    kind: str
    box: Optional[HalfRect] = None
    axis: Optional[int] = None
    interval: Optional[Tuple[int, int, int]] = None
    children: Tuple['UnionCertificate', ...] = ()

    def to_json(self) -> Dict:
        data = {'kind': self.kind}
        if self.box is not None:
            data['box'] = self.box.to_json()
        if self.axis is not None:
            data['axis'] = self.axis
            data['interval'] = list(self.interval) if self.interval else None
        if self.children:
            data['children'] = [c.to_json() for c in self.children]
        return data


def _union_certificate(about: AboutPartition, chosen: FrozenSet[HalfRect]) -> UnionCertificate:
    pieces = frozenset(about.pieces)
    if chosen == pieces:
        return UnionCertificate('window', box=about.window)
    if len(chosen) == 1:
        return UnionCertificate('piece', box=next(iter(chosen)))

    pair = find_ej_pair(about)
    plus, minus = about.pieces[pair.plus], about.pieces[pair.minus]
    merged = merge_pair(about, pair)
    union_box = bounding_box((plus, minus))
    j = pair.axis
    interval = (about.window.lo[j], about.x[j], about.window.hi[j])

    if (plus in chosen) == (minus in chosen):
        rest = chosen - {plus, minus}
        if plus in chosen:
            rest = rest | {union_box}
        return UnionCertificate('merge', axis=j, interval=interval,
                                children=(_union_certificate(merged, frozenset(rest)),))

    # Ровно один кусок пары: остальные куски - цилиндры вдоль оси j.
    rest = chosen - {plus, minus}
    projected = AboutPartition(LocalPartition(about.window.project(j), tuple(p.project(j) for p in merged.pieces)),
                               about.x[:j] + about.x[j + 1:])
    with_pair = frozenset(p.project(j) for p in rest | {union_box})
    without_pair = frozenset(p.project(j) for p in rest)
    lower, upper = (without_pair, with_pair) if plus in chosen else (with_pair, without_pair)
    return UnionCertificate('glue', axis=j, interval=interval,
                            children=(_union_certificate(projected, lower), _union_certificate(projected, upper)))


def union_box_homeomorphic(about: AboutPartition, subset: Iterable[int]) -> Tuple[bool, UnionCertificate]:
    """Объединение выбранных кусков минимального разбиения гомеоморфно прямоугольнику."""
    indices = sorted(set(subset))
    if not indices:
        raise DomainError("union_box_homeomorphic: пустой набор кусков")
    if any(not 0 <= i < len(about.pieces) for i in indices):
        raise DomainError(f"union_box_homeomorphic: индексы {indices} вне набора кусков")
    boxes = [about.pieces[i] for i in indices]
    certificate = _union_certificate(about, frozenset(boxes))
    return validate_certificate(certificate, boxes), certificate


def certificate_region(certificate: UnionCertificate) -> List[HalfRect]:
    """Набор прямоугольников, объединение которых описывает сертификат."""
    if certificate.kind in ('window', 'piece'):
        return [certificate.box]
    if certificate.kind == 'merge':
        return certificate_region(certificate.children[0])
    if certificate.kind == 'glue':
        lo, mid, hi = certificate.interval
        lower = [b.lift(lo, mid, certificate.axis) for b in certificate_region(certificate.children[0])]
        upper = [b.lift(mid, hi, certificate.axis) for b in certificate_region(certificate.children[1])]
        return lower + upper
    raise DomainError(f"certificate_region: неизвестный вид {certificate.kind}")


def validate_certificate(certificate: UnionCertificate, boxes: Sequence[HalfRect]) -> bool:
    """Сертификат описывает ровно объединение boxes."""
    return union_equal(certificate_region(certificate), boxes)


# --- Кубический комплекс ---

@dataclass(frozen=True)
class OracleResult:
    connected: bool
    euler: int
    collapsible: bool

    @property
    def ball_like(self) -> bool:
        return self.connected and self.euler == 1 and self.collapsible


def _cubical_cells(boxes: Sequence[HalfRect]) -> Tuple[set, List[Tuple[int, ...]]]:
    n = boxes[0].n
    coords = [sorted({v for b in boxes for v in (b.lo[i], b.hi[i])}) for i in range(n)]
    index = [{v: 2 * k for k, v in enumerate(c)} for c in coords]
    tops = set()
    for b in boxes:
        ranges = [range(index[i][b.lo[i]] + 1, index[i][b.hi[i]], 2) for i in range(n)]
        tops.update(product(*ranges))
    cells = set()
    for cube in tops:
        cells.update(product(*((c - 1, c, c + 1) for c in cube)))
    return cells, sorted(tops)


def _collapse(cells: set, order_seed: int) -> bool:
    """Жадное стягивание свободных граней; True, если осталась одна вершина."""
    rng = np.random.default_rng(order_seed)
    remaining = set(cells)

    def cofaces(cell):
        for i, c in enumerate(cell):
            if c % 2 == 0:
                for d in (-1, 1):
                    other = cell[:i] + (c + d,) + cell[i + 1:]
                    if other in remaining:
                        yield other

    while len(remaining) > 1:
        candidates = sorted(remaining, key=lambda c: (-sum(v % 2 for v in c), c))
        if order_seed:
            rng.shuffle(candidates)
        progress = False
        for cell in candidates:
            if cell not in remaining:
                continue
            above = list(cofaces(cell))
            if len(above) == 1:
                remaining.discard(cell)
                remaining.discard(above[0])
                progress = True
        if not progress:
            return False
    return len(remaining) == 1 and all(v % 2 == 0 for v in next(iter(remaining)))


def cubical_oracle(boxes: Sequence[HalfRect], attempts: int = Config.COLLAPSE_ATTEMPTS) -> OracleResult:
    """Связность, эйлерова характеристика и стягиваемость кубического комплекса объединения."""
    boxes = [b for b in boxes if b.is_full]
    if not boxes:
        raise DomainError("cubical_oracle: пустое объединение")
    cells, tops = _cubical_cells(boxes)
    euler = sum((-1) ** sum(v % 2 for v in cell) for cell in cells)
    graph = nx.Graph()
    graph.add_nodes_from(tops)
    present = set(tops)
    # соседние кубы делят (n-1)-грань: сдвиг на одну ячейку по одной оси
    for cube in tops:
        for i in range(len(cube)):
            other = cube[:i] + (cube[i] + 2,) + cube[i + 1:]
            if other in present:
                graph.add_edge(cube, other)
    connected = nx.is_connected(graph)
    collapsible = any(_collapse(cells, seed) for seed in range(attempts))
    return OracleResult(connected, euler, collapsible)


class MinimalLocalService:
    """Служба проверки минимальных разбиений около точки."""

    def __init__(self, max_n: int = Config.MAX_N, union_max_n: int = Config.UNION_MAX_N, jobs: int = Config.JOBS):
        self.max_n = max_n
        self.union_max_n = union_max_n
        self.jobs = jobs
        logging.info(f"MinimalLocal: Служба инициализирована (n ≤ {max_n}, объединения n ≤ {union_max_n}).")

    def _check_examples(self, report: SuiteReport):
        from services.separative import Config as SeparativeConfig, PrincipalMatrix, cover_from_matrix

        octant = cover_from_matrix(PrincipalMatrix.of(SeparativeConfig.OCTANT_ROWS))
        report.add('octant-not-minimal', not is_minimal_about(octant), 'ν=5, β=3')
        try:
            find_ej_pair(octant)
            report.add('octant-no-pair', False, 'пара найдена в неминимальном разбиении')
        except PreconditionError as e:
            report.add('octant-no-pair', True, str(e))
        count = len(enumerate_minimal_about(2, 2))
        report.add('count-2-2', count == 4, f'enumerate_minimal_about(2, 2) = {count}')

    def _check_partition(self, about: AboutPartition, k: int, failures: List[str]):
        if len(about.pieces) != k + 1:
            failures.append(f'кусков {len(about.pieces)} вместо {k + 1}')
        if not validate_local_partition(about.pieces, about.window, about.x).valid_about:
            failures.append('не является разбиением около x')
        if not is_minimal_about(about):
            failures.append('не минимально')
            return
        cf = canonical_form(about)
        if not build_from_tree(cf, about.window, about.x).base.same_pieces(about.base):
            failures.append(f'каноническая форма {cf.to_json()} не воспроизводит разбиение')
        if k >= 1:
            find_ej_pair(about)
        if about.n >= 2:
            for j in range(about.n):
                halves = [project_halves(about, j, s) for s in (1, -1)]
                if not all(is_minimal_about(h) for h in halves):
                    failures.append(f'проекция по оси {j} не минимальна')
                no_zero = all(boundary_incidence(p, about.x)[j] != 0 for p in about.pieces)
                if no_zero and not are_orthogonal_about(*halves):
                    failures.append(f'половины по оси {j} не ортогональны')

    def _check_unions(self, about: AboutPartition, failures: List[str]):
        count = len(about.pieces)
        for size in range(1, count + 1):
            for subset in combinations(range(count), size):
                ok, certificate = union_box_homeomorphic(about, subset)
                boxes = [about.pieces[i] for i in subset]
                if not ok:
                    failures.append(f'сертификат объединения {subset} не совпал')
                elif not cubical_oracle(boxes).ball_like:
                    failures.append(f'оракул не подтвердил объединение {subset}')

    def _check_enumeration(self, report: SuiteReport):
        for n in range(1, self.max_n + 1):
            for k in range(n + 1):
                partitions = enumerate_minimal_about(n, k, self.jobs)
                failures: List[str] = []
                for about in tqdm(partitions, desc=f'minimal n={n} k={k}', disable=not PROGRESS):
                    self._check_partition(about, k, failures)
                    if n <= self.union_max_n:
                        self._check_unions(about, failures)
                detail = f'{len(partitions)} разбиений'
                if n <= Config.MATRIX_ORACLE_MAX_N:
                    expected = enumerate_minimal_by_matrices(n, k)
                    if [tuple(sorted(a.pieces)) for a in partitions] != expected:
                        failures.append(f'перебор матриц дал {len(expected)} разбиений')
                report.add(f'enumeration-n{n}-k{k}', not failures, detail + ('; ' + failures[0] if failures else ''))

    def run(self) -> SuiteReport:
        report = SuiteReport('minimal-local')
        started = time.monotonic()
        for name, check in (('examples', self._check_examples), ('enumeration', self._check_enumeration)):
            try:
                check(report)
            except Exception as e:
                logging.error(f"MinimalLocal: ❌ Ошибка в проверке {name}: {e}")
                report.add(name, False, f'исключение: {e}')
        report.elapsed = time.monotonic() - started
        return report


async def main() -> SuiteReport:
    """Точка входа для набора минимальных разбиений."""
    service = MinimalLocalService()
    return await asyncio.get_running_loop().run_in_executor(None, service.run)


if __name__ == "__main__":
    asyncio.run(main())
