# services/separative.py
"""
Главные матрицы, рекурсия сепаративности, восстановление покрытия по матрице
и счётные оценки ν ≥ β + 1 и |P_V| ≥ |V| + 1.
"""

import asyncio
import logging
import time
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import FrozenSet, Iterable, Iterator, List, Sequence, Tuple

from tqdm import tqdm

from geometry.errors import DomainError, PreconditionError
from geometry.partitions import AboutPartition, LocalPartition, point_stats
from geometry.rects import HalfRect, boundary_incidence
from reporting.manifest import SuiteReport
from templates import PROGRESS, SEPARATIVE_MAX_N, SEPARATIVE_MAX_ROWS

# Настраиваем логирование
logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(levelname)s - %(message)s')

Row = Tuple[int, ...]


class Config:
    """Конфигурация службы сепаративности."""
    MAX_N = SEPARATIVE_MAX_N
    MAX_ROWS = SEPARATIVE_MAX_ROWS
    # Полуширина окна R0 = [-1, 1]^n в полуединицах
    R0_HALF_SIDE = 2
    # Пример с октантами: разбиение без e_j-пары
    OCTANT_ROWS = ((1, 0, 1), (-1, 1, 0), (-1, -1, 1), (1, 1, -1), (0, -1, -1))
    # Покрывает, но не сепаративна
    NON_SEPARATIVE_COVER = ((0,), (1,))


@dataclass(frozen=True)
class PrincipalMatrix:
    """Матрица m×n над {-1, 0, +1}; строки соответствуют кускам."""
    rows: Tuple[Row, ...]
    n: int

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.rows)
        for row in rows:
            if len(row) != self.n:
                raise DomainError(f"PrincipalMatrix: строка {row} не длины {self.n}")
            if any(v not in (-1, 0, 1) for v in row):
                raise DomainError(f"PrincipalMatrix: строка {row} вне {{-1, 0, 1}}")
        object.__setattr__(self, 'rows', rows)

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]]) -> 'PrincipalMatrix':
        rows = tuple(tuple(r) for r in rows)
        if not rows:
            raise DomainError("PrincipalMatrix.of: нужна хотя бы одна строка, чтобы определить n")
        return cls(rows, len(rows[0]))

    @property
    def m(self) -> int:
        return len(self.rows)

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(row[j] for row in self.rows)

    def nonzero_columns(self) -> FrozenSet[int]:
        return frozenset(j for j in range(self.n) if any(row[j] for row in self.rows))

    def canonical(self) -> Tuple[Row, ...]:
        return tuple(sorted(self.rows))

    def to_json(self) -> List[List[int]]:
        return [list(row) for row in self.rows]


def principal_matrix(about: AboutPartition) -> PrincipalMatrix:
    """a_ij = j-я координата B_{P_i}(x)."""
    return PrincipalMatrix(tuple(boundary_incidence(p, about.x) for p in about.pieces), about.n)


def submatrix_half(matrix: PrincipalMatrix, j: int, sign: int) -> PrincipalMatrix:
    """M_{j,±}: удаляет строки с j-м элементом -sign и сам j-й столбец."""
    if not 0 <= j < matrix.n:
        raise DomainError(f"submatrix_half: столбец {j} вне 0..{matrix.n - 1}")
    if sign not in (1, -1):
        raise DomainError(f"submatrix_half: знак {sign} не ±1")
    rows = tuple(row[:j] + row[j + 1:] for row in matrix.rows if row[j] != -sign)
    return PrincipalMatrix(rows, matrix.n - 1)


def _half_rows(rows: Tuple[Row, ...], j: int, sign: int) -> Tuple[Row, ...]:
    return tuple(sorted(row[:j] + row[j + 1:] for row in rows if row[j] != -sign))


@lru_cache(maxsize=None)
def _separative(rows: Tuple[Row, ...], n: int) -> bool:
    if not rows:
        return False
    if n == 0:
        return True
    if n == 1:
        column = {row[0] for row in rows}
        return column == {0} or (1 in column and -1 in column)
    return all(_separative(_half_rows(rows, j, sign), n - 1) for j in range(n) for sign in (1, -1))


def is_separative(matrix: PrincipalMatrix) -> bool:
    """Рекурсивное определение; матрица без строк не сепаративна."""
    return _separative(matrix.canonical(), matrix.n)


def r0_window(n: int) -> HalfRect:
    return HalfRect.cube(n, -Config.R0_HALF_SIDE, Config.R0_HALF_SIDE)


def row_box(row: Row) -> HalfRect:
    """+1 -> [0, 1], -1 -> [-1, 0], 0 -> [-1, 1] (в полуединицах ×2)."""
    h = Config.R0_HALF_SIDE
    bounds = {1: (0, h), -1: (-h, 0), 0: (-h, h)}
    return HalfRect(tuple(bounds[v][0] for v in row), tuple(bounds[v][1] for v in row))


def cover_from_matrix(matrix: PrincipalMatrix) -> AboutPartition:
    """Покрытие R0 около 0, построенное по сепаративной матрице."""
    if not is_separative(matrix):
        raise PreconditionError("cover_from_matrix: матрица не сепаративна, покрытие не гарантировано")
    window = r0_window(matrix.n)
    return AboutPartition(LocalPartition(window, tuple(row_box(r) for r in matrix.rows)), (0,) * matrix.n)


@dataclass(frozen=True)
class CoverBound:
    nu: int
    beta: int
    holds: bool


def verify_cover_bound(cover: AboutPartition) -> CoverBound:
    """ν ≥ β + 1 для сепаративного покрытия."""
    if not is_separative(principal_matrix(cover)):
        raise PreconditionError("verify_cover_bound: покрытие не сепаративно")
    stats = point_stats(cover, cover.x)
    return CoverBound(stats.nu, stats.beta, stats.nu >= stats.beta + 1)


def boundary_subset_bound(about: AboutPartition, vectors: Iterable[int]) -> Tuple[int, bool]:
    """|P_V| и выполнение |P_V| ≥ |V| + 1; V - подмножество граничных осей."""
    vectors = frozenset(vectors)
    matrix = principal_matrix(about)
    boundary = matrix.nonzero_columns()
    if not vectors <= boundary:
        raise DomainError(f"boundary_subset_bound: оси {sorted(vectors - boundary)} не граничные")
    if not vectors:
        count = matrix.m
    else:
        count = sum(1 for row in matrix.rows if any(row[j] != 0 for j in vectors))
    return count, count >= len(vectors) + 1


# --- Перебор матриц ---

def all_rows(n: int) -> List[Row]:
    return list(product((-1, 0, 1), repeat=n))


def matrix_covers(rows: Sequence[Row], n: int) -> bool:
    """Каждый из 2^n ортантов покрыт некоторой строкой."""
    for orthant in product((-1, 1), repeat=n):
        if not any(all(v == 0 or v == s for v, s in zip(row, orthant)) for row in rows):
            return False
    return True


def matrix_is_partition(rows: Sequence[Row], n: int) -> bool:
    """Ящики строк попарно не пересекаются внутренностями и в сумме дают объём 2^n."""
    for a, b in combinations(rows, 2):
        if not any(u * v == -1 for u, v in zip(a, b)):
            return False
    return sum(2 ** row.count(0) for row in rows) == 2 ** n


def enumerate_row_sets(n: int, max_rows: int) -> Iterator[Tuple[Row, ...]]:
    """Все множества различных строк размера 1..max_rows."""
    rows = all_rows(n)
    for m in range(1, max_rows + 1):
        yield from combinations(rows, m)


def count_row_sets(n: int, max_rows: int) -> int:
    from math import comb
    return sum(comb(3 ** n, m) for m in range(1, max_rows + 1))


@dataclass
class EnumerationSummary:
    n: int
    matrices: int = 0
    separative: int = 0
    partitions: int = 0
    covers: int = 0
    failures: int = 0


class SeparativeService:
    """Служба проверки сепаративности: примеры и исчерпывающий перебор матриц."""

    def __init__(self, max_n: int = Config.MAX_N, max_rows: int = Config.MAX_ROWS):
        self.max_n = max_n
        self.max_rows = max_rows
        logging.info(f"Separative: Служба инициализирована (n ≤ {max_n}, m ≤ {max_rows}).")

    def _check_examples(self, report: SuiteReport):
        octant = PrincipalMatrix.of(Config.OCTANT_ROWS)
        cover = cover_from_matrix(octant)
        report.add('octant-separative', is_separative(octant), 'матрица примера с октантами сепаративна')
        report.add('octant-roundtrip', principal_matrix(cover) == octant, 'главная матрица восстановленного разбиения')
        bound = verify_cover_bound(cover)
        report.add('octant-bound', bound.holds and (bound.nu, bound.beta) == (5, 3), f'ν={bound.nu}, β={bound.beta}')
        witness = PrincipalMatrix.of(Config.NON_SEPARATIVE_COVER)
        report.add('cover-not-separative', matrix_covers(witness.rows, 1) and not is_separative(witness),
                   'покрытие [[0],[+1]] не сепаративно', witness.rows)

    def _check_row_set(self, rows: Tuple[Row, ...], n: int, summary: EnumerationSummary, report: SuiteReport):
        from services.minimal_local import project_halves

        matrix = PrincipalMatrix(rows, n)
        separative = is_separative(matrix)
        partition = matrix_is_partition(rows, n)
        covers = matrix_covers(rows, n)
        summary.matrices += 1
        summary.separative += separative
        summary.partitions += partition
        summary.covers += covers

        problems = []
        if partition and not separative:
            problems.append('разбиение с несепаративной матрицей')
        if separative and not covers:
            problems.append('сепаративная матрица не покрывает R0')
        if separative and len(rows) < len(matrix.nonzero_columns()) + 1:
            problems.append('ν < β + 1 на сепаративном покрытии')
        if partition:
            about = cover_from_matrix(matrix)
            nonzero = sorted(matrix.nonzero_columns())
            for size in range(len(nonzero) + 1):
                for subset in combinations(nonzero, size):
                    if not boundary_subset_bound(about, subset)[1]:
                        problems.append(f'|P_V| < |V| + 1 для V={subset}')
            if n >= 2:
                for j in range(n):
                    for sign in (1, -1):
                        expected = submatrix_half(matrix, j, sign).canonical()
                        projected = principal_matrix(project_halves(about, j, sign)).canonical()
                        if expected != projected:
                            problems.append(f'проекция половины ({j}, {sign}) не совпала с подматрицей')
        if problems:
            summary.failures += 1
            if summary.failures <= 5:
                report.add(f'matrix-{n}', False, '; '.join(problems), rows)

    def _check_enumeration(self, report: SuiteReport):
        for n in range(1, self.max_n + 1):
            summary = EnumerationSummary(n)
            total = count_row_sets(n, self.max_rows)
            for rows in tqdm(enumerate_row_sets(n, self.max_rows), total=total,
                             desc=f'separative n={n}', disable=not PROGRESS):
                self._check_row_set(rows, n, summary, report)
            report.add(f'enumeration-n{n}', summary.failures == 0,
                       f'матриц {summary.matrices}, сепаративных {summary.separative}, '
                       f'разбиений {summary.partitions}, покрытий {summary.covers}')

    def run(self) -> SuiteReport:
        """Запускает все проверки набора и возвращает отчёт."""
        report = SuiteReport('separative')
        started = time.monotonic()
        for name, check in (('examples', self._check_examples), ('enumeration', self._check_enumeration)):
            try:
                check(report)
            except Exception as e:
                logging.error(f"Separative: ❌ Ошибка в проверке {name}: {e}")
                report.add(name, False, f'исключение: {e}')
        report.elapsed = time.monotonic() - started
        return report


async def main() -> SuiteReport:
    """Точка входа для запуска набора сепаративности."""
    service = SeparativeService()
    return await asyncio.get_running_loop().run_in_executor(None, service.run)


if __name__ == "__main__":
    asyncio.run(main())
