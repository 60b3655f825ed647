# tests/conftest.py
import os

import pytest
from hypothesis import HealthCheck, settings

# Профиль hypothesis: без ограничения по времени, число примеров из окружения
settings.register_profile('default', deadline=None, suppress_health_check=[HealthCheck.too_slow],
                          max_examples=int(os.getenv('HYPOTHESIS_EXAMPLES', 50)))
settings.load_profile('default')

os.environ.setdefault('PROGRESS', '0')


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False, help='запускать долгие проверки')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='нужен --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)
