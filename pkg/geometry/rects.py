# geometry/rects.py
"""
Прямоугольники с осями, параллельными координатным, в целых полуединицах.

Полуединица: целое число, равное удвоенной вещественной координате.
Точки решётки Z^n имеют чётные координаты, уровни вида Z + 1/2 - нечётные.
Оси нумеруются с нуля: ось 0 соответствует e_1.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from geometry.errors import DomainError
from geometry.geometry_config import GeometryConfig

logger = logging.getLogger(__name__)

GridPoint = Tuple[int, ...]
SignedAxis = Tuple[int, int]  # (ось, знак) - вектор ±e_axis
Real = Union[int, Fraction]


@dataclass(frozen=True, order=True)
class HalfRect:
    """Замкнутый прямоугольник [lo, hi] в полуединицах, возможно вырожденный."""
    lo: Tuple[int, ...]
    hi: Tuple[int, ...]

    def __post_init__(self):
        lo = tuple(int(v) for v in self.lo)
        hi = tuple(int(v) for v in self.hi)
        if not lo or len(lo) != len(hi):
            raise DomainError(f"HalfRect: несовместимые углы {lo} и {hi}")
        for axis, (a, b) in enumerate(zip(lo, hi)):
            if a > b:
                raise DomainError(f"HalfRect: lo > hi по оси {axis}: {a} > {b}")
        object.__setattr__(self, 'lo', lo)
        object.__setattr__(self, 'hi', hi)

    # --- Конструкторы ---

    @classmethod
    def box(cls, lo: Sequence[int], hi: Sequence[int]) -> 'HalfRect':
        return cls(tuple(lo), tuple(hi))

    @classmethod
    def cube(cls, n: int, lo: int, hi: int) -> 'HalfRect':
        return cls((lo,) * n, (hi,) * n)

    @classmethod
    def from_real(cls, lo: Sequence[Real], hi: Sequence[Real]) -> 'HalfRect':
        """Переводит вещественные (Fraction/int) углы в полуединицы."""
        return cls(tuple(to_half_units(v) for v in lo), tuple(to_half_units(v) for v in hi))

    @classmethod
    def from_json(cls, intervals: Sequence[Sequence[int]]) -> 'HalfRect':
        """Читает формат [[lo, hi], ...]."""
        if not intervals:
            raise DomainError("HalfRect: пустой список интервалов")
        for interval in intervals:
            if len(interval) != 2:
                raise DomainError(f"HalfRect: интервал должен иметь 2 конца, получено {interval}")
        return cls(tuple(i[0] for i in intervals), tuple(i[1] for i in intervals))

    # --- Свойства ---

    @property
    def n(self) -> int:
        return len(self.lo)

    @property
    def dim(self) -> int:
        """Размерность k = число невырожденных осей."""
        return sum(1 for a, b in zip(self.lo, self.hi) if a < b)

    @property
    def is_full(self) -> bool:
        return self.dim == self.n

    @property
    def sides(self) -> Tuple[int, ...]:
        return tuple(b - a for a, b in zip(self.lo, self.hi))

    @property
    def volume(self) -> int:
        result = 1
        for side in self.sides:
            result *= side
        return result

    # --- Отношения ---

    def contains(self, x: Sequence[int]) -> bool:
        return all(a <= v <= b for a, v, b in zip(self.lo, x, self.hi))

    def interior_contains(self, x: Sequence[int]) -> bool:
        return all(a < v < b for a, v, b in zip(self.lo, x, self.hi))

    def contains_rect(self, other: 'HalfRect') -> bool:
        return all(a <= c and d <= b for a, b, c, d in zip(self.lo, self.hi, other.lo, other.hi))

    def intersect(self, other: 'HalfRect') -> Optional['HalfRect']:
        lo = tuple(max(a, c) for a, c in zip(self.lo, other.lo))
        hi = tuple(min(b, d) for b, d in zip(self.hi, other.hi))
        if any(a > b for a, b in zip(lo, hi)):
            return None
        return HalfRect(lo, hi)

    def interiors_overlap(self, other: 'HalfRect') -> bool:
        return all(max(a, c) < min(b, d) for a, b, c, d in zip(self.lo, self.hi, other.lo, other.hi))

    # --- Преобразования ---

    def project(self, drop_axis: int) -> 'HalfRect':
        """Проекция π_A, A = все оси кроме drop_axis."""
        self._check_axis(drop_axis)
        if self.n < 2:
            raise DomainError("HalfRect: нельзя проецировать одномерный прямоугольник")
        keep = [i for i in range(self.n) if i != drop_axis]
        return self.project_axes(keep)

    def project_axes(self, axes: Sequence[int]) -> 'HalfRect':
        for axis in axes:
            self._check_axis(axis)
        return HalfRect(tuple(self.lo[i] for i in axes), tuple(self.hi[i] for i in axes))

    def lift(self, lo: int, hi: int, axis: Optional[int] = None) -> 'HalfRect':
        """Добавляет ось [lo, hi] (по умолчанию последней)."""
        axis = self.n if axis is None else axis
        return HalfRect(self.lo[:axis] + (lo,) + self.lo[axis:], self.hi[:axis] + (hi,) + self.hi[axis:])

    def translate(self, offset: Sequence[int]) -> 'HalfRect':
        return HalfRect(tuple(a + o for a, o in zip(self.lo, offset)),
                        tuple(b + o for b, o in zip(self.hi, offset)))

    def scaled(self, factor: int) -> 'HalfRect':
        return HalfRect(tuple(a * factor for a in self.lo), tuple(b * factor for b in self.hi))

    def with_interval(self, axis: int, lo: int, hi: int) -> 'HalfRect':
        self._check_axis(axis)
        return HalfRect(self.lo[:axis] + (lo,) + self.lo[axis + 1:], self.hi[:axis] + (hi,) + self.hi[axis + 1:])

    def corners(self) -> List[GridPoint]:
        return [tuple(c) for c in product(*zip(self.lo, self.hi))]

    def to_json(self) -> List[List[int]]:
        return [[a, b] for a, b in zip(self.lo, self.hi)]

    def to_real(self) -> Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]:
        scale = GeometryConfig.HALF_UNITS
        return (tuple(Fraction(a, scale) for a in self.lo), tuple(Fraction(b, scale) for b in self.hi))

    def _check_axis(self, axis: int):
        if not 0 <= axis < self.n:
            raise DomainError(f"HalfRect: ось {axis} вне диапазона 0..{self.n - 1}")

    def __repr__(self) -> str:
        return 'HalfRect(' + '×'.join(f'[{a},{b}]' for a, b in zip(self.lo, self.hi)) + ')'


def to_half_units(value: Real) -> int:
    """Вещественная координата -> полуединицы; допускаются только кратные 1/2."""
    doubled = Fraction(value) * GeometryConfig.HALF_UNITS
    if doubled.denominator != 1:
        raise DomainError(f"Координата {value} не кратна 1/2")
    return int(doubled)


def bounding_box(rects: Iterable[HalfRect]) -> HalfRect:
    rects = list(rects)
    if not rects:
        raise DomainError("bounding_box: пустой набор")
    n = rects[0].n
    return HalfRect(tuple(min(r.lo[i] for r in rects) for i in range(n)),
                    tuple(max(r.hi[i] for r in rects) for i in range(n)))


# --- Граничная инцидентность ---

def boundary_incidence(rect: HalfRect, x: Sequence[int]) -> Tuple[int, ...]:
    """
    Последовательность граничной инцидентности B_R(x).

    +1, если x_i = lo_i < hi_i; -1, если x_i = hi_i > lo_i; иначе 0.
    Для вырожденных осей значение 0.
    """
    if len(x) != rect.n:
        raise DomainError(f"boundary_incidence: точка {tuple(x)} не из R^{rect.n}")
    if not rect.contains(x):
        raise DomainError(f"boundary_incidence: точка {tuple(x)} вне {rect}")
    result = []
    for a, v, b in zip(rect.lo, x, rect.hi):
        if a == b:
            result.append(0)
        elif v == a:
            result.append(1)
        elif v == b:
            result.append(-1)
        else:
            result.append(0)
    return tuple(result)


def boundary_rank(rect: HalfRect, x: Sequence[int]) -> int:
    return sum(1 for e in boundary_incidence(rect, x) if e != 0)


# --- Соответствие Z^n <-> R^n ---

def z_to_r(lo: Sequence[int], hi: Sequence[int]) -> HalfRect:
    """Ящик решётки [a_i, b_i] -> C_P с углами a_i - 1/2, b_i + 1/2."""
    if len(lo) != len(hi) or not lo:
        raise DomainError("z_to_r: несовместимые углы")
    if any(a > b for a, b in zip(lo, hi)):
        raise DomainError(f"z_to_r: пустой ящик решётки {tuple(lo)}..{tuple(hi)}")
    return HalfRect(tuple(2 * a - 1 for a in lo), tuple(2 * b + 1 for b in hi))


def r_to_z(rect: HalfRect) -> Tuple[GridPoint, GridPoint]:
    """Обратное к z_to_r; все углы должны быть нечётными полуединицами."""
    if any(c % 2 == 0 for c in rect.lo + rect.hi):
        raise DomainError(f"r_to_z: {rect} не имеет нечётных углов")
    if not rect.is_full:
        raise DomainError(f"r_to_z: {rect} вырожден")
    return tuple((a + 1) // 2 for a in rect.lo), tuple((b - 1) // 2 for b in rect.hi)


def lattice_box_points(lo: Sequence[int], hi: Sequence[int]) -> FrozenSet[GridPoint]:
    return frozenset(product(*(range(a, b + 1) for a, b in zip(lo, hi))))


# --- Направленные границы ∂_v ---

def signed_axis(v: Sequence[int]) -> SignedAxis:
    """Разбирает вектор ±e_i; всё остальное - ошибка области."""
    nonzero = [(i, c) for i, c in enumerate(v) if c != 0]
    if len(nonzero) != 1 or nonzero[0][1] not in (1, -1):
        raise DomainError(f"Вектор {tuple(v)} не является ±e_i")
    return nonzero[0]


def unit_vector(n: int, axis: int, sign: int = 1) -> GridPoint:
    return tuple(sign if i == axis else 0 for i in range(n))


def _shift(x: GridPoint, v: Sequence[int], modulus: Optional[int]) -> GridPoint:
    moved = tuple(a + b for a, b in zip(x, v))
    if modulus is None:
        return moved
    return tuple(c % modulus for c in moved)


def directional_boundary(points: Iterable[GridPoint], v: Sequence[int],
                         modulus: Optional[int] = None) -> FrozenSet[GridPoint]:
    """∂_v A = {x ∈ A : v·x ∉ A}; при modulus - на торе (Z/modulus)^n."""
    signed_axis(v)
    points = frozenset(points)
    return frozenset(x for x in points if _shift(x, v, modulus) not in points)


def directional_interior(points: Iterable[GridPoint], v: Sequence[int],
                         modulus: Optional[int] = None) -> FrozenSet[GridPoint]:
    """Int_v(A) = A ∖ ∂_v A."""
    points = frozenset(points)
    return points - directional_boundary(points, v, modulus)


def directional_difference(points: Iterable[GridPoint], u: Sequence[int], v: Sequence[int],
                           modulus: Optional[int] = None) -> FrozenSet[GridPoint]:
    """∂_{u∖v} A = ∂_u A ∖ ∂_v A."""
    points = frozenset(points)
    return directional_boundary(points, u, modulus) - directional_boundary(points, v, modulus)
