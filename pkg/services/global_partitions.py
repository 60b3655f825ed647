# services/global_partitions.py
"""
Периодические регулированные разбиения R^n: построение пары ортогональных
минимальных разбиений, число регулированности γ, критерий минимальности
ν = β + 1 и точка с ν ≥ n + 1.

Все глобальные кванторы проверяются на одной фундаментальной области:
куски берутся из блока 3^n соседних областей.
"""

import asyncio
import logging
import time
from dataclasses import dataclass
from itertools import product
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from geometry.errors import DomainError
from geometry.partitions import LocalPartition, restrict_to_window, stats_at_points, validate_local_partition
from geometry.rects import GridPoint, HalfRect
from reporting.manifest import SuiteReport
from templates import GLOBAL_MAX_N

# Настраиваем логирование
logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(levelname)s - %(message)s')


class Config:
    """Конфигурация службы глобальных разбиений."""
    MAX_N = GLOBAL_MAX_N
    # Полуединицы: базовый отрезок [0, 2] вещественных и сдвиг на 1⃗
    BASE_SIDE = 4
    SHIFT = 2
    UNIT_GRID_SIDE = 2


@dataclass(frozen=True)
class PeriodicPartition:
    """Разбиение R^n: сдвиги fundamental на решётку периодов."""
    period: Tuple[int, ...]
    fundamental: Tuple[HalfRect, ...]
    d: int

    def __post_init__(self):
        object.__setattr__(self, 'period', tuple(int(p) for p in self.period))
        object.__setattr__(self, 'fundamental', tuple(self.fundamental))
        if any(p <= 0 for p in self.period):
            raise DomainError(f"PeriodicPartition: период {self.period} не положителен")
        for piece in self.fundamental:
            if piece.n != len(self.period) or not piece.is_full:
                raise DomainError(f"PeriodicPartition: кусок {piece} не полноразмерен в R^{len(self.period)}")

    @property
    def n(self) -> int:
        return len(self.period)

    @property
    def domain(self) -> HalfRect:
        return HalfRect((0,) * self.n, self.period)

    def translates_meeting(self, rect: HalfRect) -> List[HalfRect]:
        """Все сдвиги кусков, пересекающие rect (хотя бы по границе)."""
        result = []
        for piece in self.fundamental:
            ranges = []
            for lo, hi, a, b, p in zip(piece.lo, piece.hi, rect.lo, rect.hi, self.period):
                k_min = -((hi - a) // p)
                k_max = (b - lo) // p
                ranges.append(range(k_min, k_max + 1))
            for k in product(*ranges):
                result.append(piece.translate(tuple(c * p for c, p in zip(k, self.period))))
        return result

    def window(self, rect: HalfRect) -> LocalPartition:
        """Ограничение разбиения на прямоугольник rect."""
        return restrict_to_window(self.translates_meeting(rect), rect)

    def shifted(self, offset: Sequence[int]) -> 'PeriodicPartition':
        return PeriodicPartition(self.period, tuple(_normalize(p.translate(offset), self.period)
                                                    for p in self.fundamental), self.d)


def _normalize(piece: HalfRect, period: Sequence[int]) -> HalfRect:
    """Сдвигает кусок так, чтобы lo лежал в [0, period)."""
    return piece.translate(tuple(-(lo // p) * p for lo, p in zip(piece.lo, period)))


def discreteness_constant(period: Sequence[int], pieces: Sequence[HalfRect]) -> int:
    """Наименьший зазор между различными координатами по каждой оси (с учётом периода)."""
    gaps = []
    for axis, p in enumerate(period):
        values = sorted({c % p for piece in pieces for c in (piece.lo[axis], piece.hi[axis])})
        values.append(values[0] + p)
        gaps.extend(b - a for a, b in zip(values, values[1:]) if b > a)
    return min(gaps)


def periodic_partition(period: Sequence[int], pieces: Sequence[HalfRect]) -> PeriodicPartition:
    pieces = tuple(_normalize(p, period) for p in pieces)
    return PeriodicPartition(tuple(period), pieces, discreteness_constant(period, pieces))


# --- Построения ---

def _even_construction(n: int) -> PeriodicPartition:
    if n == 1:
        return periodic_partition((Config.BASE_SIDE,), (HalfRect((0,), (Config.BASE_SIDE,)),))
    lower = _even_construction(n - 1)
    shifted = lower.shifted((Config.SHIFT,) * (n - 1))
    layer = 2 * Config.BASE_SIDE
    half = Config.BASE_SIDE
    pieces = [p.scaled(2).lift(0, half) for p in lower.fundamental]
    pieces += [p.scaled(2).lift(half, layer) for p in shifted.fundamental]
    return periodic_partition(tuple(2 * p for p in lower.period) + (layer,), pieces)


def orthogonal_minimal_pair(n: int) -> Tuple[PeriodicPartition, PeriodicPartition]:
    """Разбиение с чётными координатами и его сдвиг на 1⃗."""
    if n < 1:
        raise DomainError(f"orthogonal_minimal_pair: размерность {n} < 1")
    first = _even_construction(n)
    return first, first.shifted((Config.SHIFT,) * n)


def unit_grid(n: int, side: int = Config.UNIT_GRID_SIDE) -> PeriodicPartition:
    """Произведение одномерных разбиений: кубы со стороной side."""
    if n < 1 or side <= 0:
        raise DomainError(f"unit_grid: недопустимые n={n}, side={side}")
    return periodic_partition((side,) * n, (HalfRect.cube(n, 0, side),))


# --- Сканирование фундаментальной области ---

def _central_pieces(partition: PeriodicPartition, period: Sequence[int]) -> List[HalfRect]:
    return partition.translates_meeting(HalfRect((0,) * partition.n, tuple(period)))


def _scan_points(pieces: Sequence[HalfRect], period: Sequence[int], vertices_only: bool) -> np.ndarray:
    """Точки решётки ячеек в замкнутой области [0, period] (удвоенные полуединицы)."""
    per_axis = []
    for axis, p in enumerate(period):
        values = sorted({c for piece in pieces for c in (piece.lo[axis], piece.hi[axis]) if 0 <= c <= p} | {0, p})
        values = np.array(values, dtype=np.int64)
        doubled = set((2 * values).tolist())
        if not vertices_only:
            doubled.update((values[:-1] + values[1:]).tolist())
        per_axis.append(np.array(sorted(doubled), dtype=np.int64))
    mesh = np.meshgrid(*per_axis, indexing='ij')
    return np.stack([m.ravel() for m in mesh], axis=1)


@dataclass(frozen=True)
class Scan:
    points2: np.ndarray
    nu: np.ndarray
    beta: np.ndarray
    axes: np.ndarray


def scan_domain(partition: PeriodicPartition, vertices_only: bool = True,
                period: Optional[Sequence[int]] = None) -> Scan:
    period = tuple(period or partition.period)
    pieces = _central_pieces(partition, period)
    points = _scan_points(pieces, period, vertices_only)
    nu, beta, axes = stats_at_points(pieces, points)
    return Scan(points, nu, beta, axes)


def is_valid_periodic(partition: PeriodicPartition) -> bool:
    """Сдвиги покрывают фундаментальную область без наложений внутренностей."""
    local = partition.window(partition.domain)
    return validate_local_partition(local.pieces, local.window).valid


def regulation_number(partition: PeriodicPartition) -> int:
    """γ - наибольшее ν по вершинам фундаментальной области."""
    return int(scan_domain(partition).nu.max())


@dataclass(frozen=True)
class CharacterizationReport:
    gamma: int
    minimal: bool           # γ ≤ n + 1
    locally_minimal: bool   # ν = β + 1 во всех точках сканирования
    witness: Optional[GridPoint] = None  # точка с ν ≠ β + 1 (удвоенные полуединицы)

    @property
    def equivalent(self) -> bool:
        return self.minimal == self.locally_minimal


def verify_minimal_characterization(partition: PeriodicPartition, vertices_only: bool = True) -> CharacterizationReport:
    """
    Проверяет обе стороны равносильности «минимально ⇔ ν = β + 1 всюду».

    По умолчанию сканируются вершины решётки координат блока 3^n;
    vertices_only=False добавляет середины рёбер и ячеек.
    """
    scan = scan_domain(partition, vertices_only=True)
    gamma = int(scan.nu.max())
    if not vertices_only:
        scan = scan_domain(partition, vertices_only=False)
    bad = np.flatnonzero(scan.nu != scan.beta + 1)
    witness = tuple(int(c) for c in scan.points2[bad[0]]) if len(bad) else None
    report = CharacterizationReport(gamma, gamma <= partition.n + 1, len(bad) == 0, witness)
    if not report.equivalent:
        logging.error(f"GlobalPartitions: ❌ Равносильность нарушена: γ={gamma}, свидетель {witness}")
    return report


@dataclass(frozen=True)
class HighPoint:
    point: GridPoint  # полуединицы
    nu: int


def witness_high_point(partition: PeriodicPartition) -> Optional[HighPoint]:
    """Первая вершина (лексикографически) с ν ≥ n + 1."""
    scan = scan_domain(partition)
    found = np.flatnonzero(scan.nu >= partition.n + 1)
    if len(found) == 0:
        return None
    k = int(found[0])
    return HighPoint(tuple(int(c) // 2 for c in scan.points2[k]), int(scan.nu[k]))


def boundary_vector_sets(partition: PeriodicPartition, vertices_only: bool = True) -> Dict[GridPoint, FrozenSet[int]]:
    """Оси граничных векторов в каждой точке сканирования (удвоенные полуединицы)."""
    scan = scan_domain(partition, vertices_only)
    return {tuple(int(c) for c in point): frozenset(int(j) for j in np.flatnonzero(mask))
            for point, mask in zip(scan.points2, scan.axes)}


def are_orthogonal_periodic(first: PeriodicPartition, second: PeriodicPartition,
                            vertices_only: bool = True) -> Tuple[bool, Optional[GridPoint]]:
    """Во всех точках общей решётки множества граничных векторов не пересекаются."""
    if first.n != second.n:
        raise DomainError("are_orthogonal_periodic: разные размерности")
    period = tuple(int(np.lcm(a, b)) for a, b in zip(first.period, second.period))
    first_pieces = _central_pieces(first, period)
    second_pieces = _central_pieces(second, period)
    points = _scan_points(first_pieces + second_pieces, period, vertices_only)
    _, _, axes_first = stats_at_points(first_pieces, points)
    # второе разбиение проверяется только на границе первого
    on_boundary = np.flatnonzero(axes_first.any(axis=1))
    points, axes_first = points[on_boundary], axes_first[on_boundary]
    _, _, axes_second = stats_at_points(second_pieces, points)
    clash = np.flatnonzero((axes_first & axes_second).any(axis=1))
    if len(clash):
        return False, tuple(int(c) for c in points[clash[0]])
    return True, None


class GlobalPartitionsService:
    """Служба проверки периодических разбиений."""

    def __init__(self, max_n: int = Config.MAX_N):
        self.max_n = max_n
        logging.info(f"GlobalPartitions: Служба инициализирована (n ≤ {max_n}).")

    def _check_examples(self, report: SuiteReport):
        first, _ = orthogonal_minimal_pair(1)
        report.add('line-gamma', regulation_number(first) == 2, 'γ({[2k, 2k+2]}) = 2')
        grid = unit_grid(2)
        gamma = regulation_number(grid)
        characterization = verify_minimal_characterization(grid)
        report.add('unit-grid', gamma == 4 and not characterization.minimal and not characterization.locally_minimal,
                   f'γ={gamma}, обе стороны ложны')
        high = witness_high_point(grid)
        report.add('unit-grid-witness', high is not None and high.nu == 4, f'{high}')

    def _check_pair(self, n: int, report: SuiteReport):
        first, second = orthogonal_minimal_pair(n)
        shifted = first.shifted((Config.SHIFT,) * n)
        report.add(f'pair-n{n}-shift', sorted(shifted.fundamental) == sorted(second.fundamental), 'Q = P + 1⃗')
        for name, partition in (('P', first), ('Q', second)):
            valid = is_valid_periodic(partition)
            gamma = regulation_number(partition)
            high = witness_high_point(partition)
            report.add(f'pair-n{n}-{name}', valid and gamma == n + 1 and high is not None,
                       f'γ={gamma}, d={partition.d}, точка ν ≥ n+1: {high}')
            c = verify_minimal_characterization(partition)
            report.add(f'pair-n{n}-{name}-characterization', c.equivalent and c.minimal,
                       f'minimal={c.minimal}, ν=β+1 всюду={c.locally_minimal}', c.witness)
        orthogonal, clash = are_orthogonal_periodic(first, second)
        report.add(f'pair-n{n}-orthogonal', orthogonal, 'граничные векторы не пересекаются', clash)

    def run(self) -> SuiteReport:
        report = SuiteReport('global-partitions')
        started = time.monotonic()
        checks = [('examples', self._check_examples)]
        checks += [(f'pair-n{n}', lambda r, n=n: self._check_pair(n, r)) for n in range(1, self.max_n + 1)]
        for name, check in checks:
            try:
                check(report)
            except Exception as e:
                logging.error(f"GlobalPartitions: ❌ Ошибка в проверке {name}: {e}")
                report.add(name, False, f'исключение: {e}')
        report.elapsed = time.monotonic() - started
        return report


async def main() -> SuiteReport:
    """Точка входа для набора глобальных разбиений."""
    service = GlobalPartitionsService()
    return await asyncio.get_running_loop().run_in_executor(None, service.run)


if __name__ == "__main__":
    asyncio.run(main())
