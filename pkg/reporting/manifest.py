# reporting/manifest.py
"""
Отчёты проверочных наборов и манифесты запусков.

Манифест фиксирует команду, параметры, seed, версию и sha256 входных и
выходных файлов: по нему запуск воспроизводится байт в байт.
"""

import hashlib
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from templates import TOOL_VERSION

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ''
    witness: Optional[Any] = None

    def to_json(self) -> Dict[str, Any]:
        return {'name': self.name, 'passed': self.passed, 'detail': self.detail, 'witness': _jsonable(self.witness)}


@dataclass
class SuiteReport:
    """Отчёт одного набора: список проверок со свидетелями."""
    name: str
    checks: List[CheckResult] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = '', witness: Any = None) -> bool:
        self.checks.append(CheckResult(name, bool(passed), detail, witness))
        marker = '✅' if passed else '❌'
        log = logger.info if passed else logger.error
        log(f"{marker} [{self.name}] {name}: {detail}")
        return bool(passed)

    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> Dict[str, Any]:
        return {'suite': self.name, 'passed': self.passed, 'checks': [c.to_json() for c in self.checks]}

    def digest(self) -> str:
        """Хэш отчёта без времени выполнения."""
        return digest_bytes(canonical_json(self.to_json()).encode('utf-8'))


@dataclass
class RunManifest:
    command: str
    parameters: Dict[str, Any]
    seed: Optional[int] = None
    version: str = TOOL_VERSION
    inputs: Dict[str, str] = field(default_factory=dict)
    outputs: Dict[str, str] = field(default_factory=dict)

    def add_input(self, path: str):
        self.inputs[path] = digest_file(path)

    def add_output(self, path: str):
        self.outputs[path] = digest_file(path)

    def to_json(self) -> Dict[str, Any]:
        return {
            'command': self.command,
            'parameters': _jsonable(self.parameters),
            'seed': self.seed,
            'version': self.version,
            'inputs': dict(sorted(self.inputs.items())),
            'outputs': dict(sorted(self.outputs.items())),
        }

    def write(self, path: str):
        with open(path, 'w', encoding='utf-8') as f:
            f.write(canonical_json(self.to_json()))
        logger.info(f"Manifest: манифест записан в {path}")

    @classmethod
    def read(cls, path: str) -> 'RunManifest':
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
        return cls(command=data['command'], parameters=data.get('parameters', {}), seed=data.get('seed'),
                   version=data.get('version', TOOL_VERSION), inputs=data.get('inputs', {}),
                   outputs=data.get('outputs', {}))


def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, ensure_ascii=False, indent=2) + '\n'


def digest_bytes(payload: bytes) -> str:
    return hashlib.sha256(payload).hexdigest()


def digest_file(path: str) -> str:
    if not os.path.exists(path):
        raise FileNotFoundError(f"Manifest: файл {path} не найден")
    with open(path, 'rb') as f:
        return digest_bytes(f.read())


def _jsonable(value: Any) -> Any:
    """Приводит кортежи, множества и HalfRect к JSON-совместимому виду."""
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if hasattr(value, 'to_json'):
        return value.to_json()
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (set, frozenset)):
        return sorted((_jsonable(v) for v in value), key=repr)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, 'tolist'):
        return value.tolist()
    return repr(value)
