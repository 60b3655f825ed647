# geometry/errors.py
"""
Иерархия исключений пакета.

Все ошибки наследуются от ValueError, как и ошибки конфигурации в
остальном коде: вызывающая сторона может ловить ValueError целиком.
"""


class GeometryError(ValueError):
    """Базовая ошибка геометрических операций."""


class DomainError(GeometryError):
    """Аргумент вне области определения операции."""


class PreconditionError(GeometryError):
    """Нарушено предусловие (например, разбиение не минимально)."""


class ConfigurationError(GeometryError):
    """Параметры запуска несовместимы между собой."""


class OracleFailure(GeometryError):
    """Проверка уровня теоремы не прошла: найден контрпример."""
