# reporting/interchange.py
"""
JSON-формат обмена разбиениями.

Разбиение: {"n", "scale": "half-units", "window", "pieces", "about"?,
"principal_matrix"?}; периодическое разбиение дополнительно несёт "period"
и "d", а окном служит фундаментальная область. Все координаты - целые
полуединицы.
"""

import json
import logging
from typing import Any, Dict, Optional, Sequence, Union

from geometry.errors import DomainError
from geometry.geometry_config import GeometryConfig
from geometry.partitions import AboutPartition, LocalPartition
from geometry.rects import HalfRect
from reporting.manifest import canonical_json

logger = logging.getLogger(__name__)

SCALE = GeometryConfig.JSON_SCALE

AnyPartition = Union[LocalPartition, AboutPartition]


def partition_to_json(partition: AnyPartition, principal_matrix: Optional[Sequence[Sequence[int]]] = None,
                      **extra: Any) -> Dict[str, Any]:
    data = {
        'n': partition.n,
        'scale': SCALE,
        'window': partition.window.to_json(),
        'pieces': [p.to_json() for p in partition.pieces],
    }
    if isinstance(partition, AboutPartition):
        data['about'] = list(partition.x)
    if principal_matrix is not None:
        data['principal_matrix'] = [list(row) for row in principal_matrix]
    data.update(extra)
    return data


def _check_scale(data: Dict[str, Any]):
    if not isinstance(data, dict):
        raise DomainError("Interchange: ожидается JSON-объект")
    if data.get('scale', SCALE) != SCALE:
        raise DomainError(f"Interchange: неизвестный масштаб {data.get('scale')!r}")


def partition_from_json(data: Dict[str, Any]) -> AnyPartition:
    """LocalPartition или AboutPartition, если задан ключ "about"."""
    _check_scale(data)
    try:
        window = HalfRect.from_json(data['window'])
        pieces = tuple(HalfRect.from_json(p) for p in data['pieces'])
    except (KeyError, TypeError) as e:
        raise DomainError(f"Interchange: повреждённое разбиение: {e}") from e
    if 'n' in data and data['n'] != window.n:
        raise DomainError(f"Interchange: n={data['n']} не совпадает с окном размерности {window.n}")
    local = LocalPartition(window, pieces)
    if data.get('about') is not None:
        return AboutPartition(local, tuple(data['about']))
    return local


def periodic_to_json(partition) -> Dict[str, Any]:
    return {
        'n': partition.n,
        'scale': SCALE,
        'window': partition.domain.to_json(),
        'period': list(partition.period),
        'd': partition.d,
        'pieces': [p.to_json() for p in partition.fundamental],
    }


def periodic_from_json(data: Dict[str, Any]):
    from services.global_partitions import periodic_partition

    _check_scale(data)
    if 'period' not in data:
        raise DomainError("Interchange: у периодического разбиения нет ключа \"period\"")
    partition = periodic_partition(tuple(data['period']), [HalfRect.from_json(p) for p in data['pieces']])
    if 'd' in data and data['d'] != partition.d:
        logger.warning(f"Interchange: ⚠️ d={data['d']} в файле, вычислено d={partition.d}")
    return partition


def read_json(path: str) -> Any:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise DomainError(f"Interchange: {path} не является JSON: {e}") from e


def write_json(path: str, data: Any):
    with open(path, 'w', encoding='utf-8') as f:
        f.write(canonical_json(data))
    logger.info(f"Interchange: записан {path}")


def load_partition(path: str) -> AnyPartition:
    return partition_from_json(read_json(path))


def save_partition(path: str, partition: AnyPartition, **extra: Any):
    write_json(path, partition_to_json(partition, **extra))
