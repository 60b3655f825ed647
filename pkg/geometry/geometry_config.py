import os


class GeometryConfig:
    """Общие константы геометрии в одном месте"""
    # Масштаб: целое число полуединиц на единицу вещественной координаты
    HALF_UNITS = 2
    # Множитель при переходе к четвертям единицы в localize_about
    REFINEMENT_FACTOR = 2
    # Метка масштаба в JSON
    JSON_SCALE = 'half-units'
    JSON_SCALE_REFINED = 'quarter-units'
    # Размер порции точек при векторизованном сканировании
    SCAN_CHUNK = int(os.getenv('SCAN_CHUNK', 4096))
