# app.py
import asyncio
import json
import logging
import os
import signal
import sys
from functools import wraps
from typing import Any, Dict, List, Optional, Sequence, Tuple

import click
import numpy as np

from geometry.errors import DomainError, GeometryError, OracleFailure
from geometry.partitions import AboutPartition, cell_points, stats_at_points, validate_local_partition
from reporting.interchange import partition_from_json, partition_to_json, read_json
from reporting.manifest import RunManifest, SuiteReport, canonical_json, digest_bytes
from reporting.svg_render import FIXTURES, render_fixture, render_svg, render_tiling
from services.extension import (ExtensionInstance, extend_2d, search_minimal_extension,
                                trace_obstruction_chain)
from services.extension import main as run_extension
from services.gadgets import check_roll_down, check_t2, roll_down, tiling_t2
from services.gadgets import main as run_gadgets
from services.global_partitions import main as run_global
from services.minimal_local import canonical_form, enumerate_minimal_about, is_minimal_local, minimality_witness
from services.minimal_local import main as run_minimal_local
from services.separative import is_separative, principal_matrix
from services.separative import main as run_separative
from services.surfaces import main as run_surfaces
from services.torus_sim import (preset_config, preset_for_dimension, refine_to_5, regulation_stats, simulate_torus,
                                verify_run)
from services.torus_sim import main as run_torus
from templates import PARALLEL_JOBS, SEARCH_WORKERS, TOOL_VERSION

# Настраиваем логирование для точки входа.
logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(levelname)s - %(message)s')

EXIT_FAILURE = 1
EXIT_USAGE = 2

SUITES = {
    'separative': run_separative,
    'minimal-local': run_minimal_local,
    'global': run_global,
    'surfaces': run_surfaces,
    'torus': run_torus,
    'extension': run_extension,
    'gadgets': run_gadgets,
}


class SuiteManager:
    """Менеджер для запуска проверочных наборов."""

    def __init__(self, names: Sequence[str]):
        self.names = list(names)
        self.tasks = []
        self.reports: Dict[str, SuiteReport] = {}
        self.is_running = True

        # Обработка сигналов остановки
        signal.signal(signal.SIGINT, self._signal_handler)
        signal.signal(signal.SIGTERM, self._signal_handler)

    def _signal_handler(self, signum, frame):
        """Обработчик сигналов остановки."""
        logging.info(f"Получен сигнал остановки {signum}")
        self.is_running = False
        for task in self.tasks:
            if not task.done():
                task.cancel()

    async def _run_suite(self, name: str, suite_func):
        """Запускает один набор с обработкой ошибок."""
        try:
            logging.info(f"🚀 Запуск набора {name}...")
            report = await suite_func()
            self.reports[name] = report
            if report.passed:
                logging.info(f"✅ Набор {name} пройден за {report.elapsed:.1f} с")
            else:
                logging.error(f"❌ Набор {name}: не пройдено {len(report.failures())} проверок")
        except asyncio.CancelledError:
            logging.info(f"Набор {name} остановлен")
        except Exception as e:
            logging.error(f"❌ Ошибка в наборе {name}: {e}")
            report = SuiteReport(name)
            report.add(name, False, f'исключение: {e}')
            self.reports[name] = report

    async def run(self) -> Dict[str, Any]:
        """Запускает наборы параллельно и собирает отчёт."""
        for name in self.names:
            self.tasks.append(asyncio.create_task(self._run_suite(name, SUITES[name])))
        await asyncio.gather(*self.tasks, return_exceptions=True)
        if not self.is_running:
            logging.warning("Запуск прерван: отчёт неполон")
        return self.merged()

    def merged(self) -> Dict[str, Any]:
        """Отчёты по именам наборов; порядок не зависит от порядка завершения."""
        suites = [self.reports[name].to_json() for name in sorted(self.reports)]
        complete = set(self.reports) == set(self.names)
        return {'suites': suites, 'passed': complete and all(s['passed'] for s in suites)}


def run_suite(name: str) -> Dict[str, Any]:
    if name != 'all' and name not in SUITES:
        raise DomainError(f"Неизвестный набор '{name}', есть: {', '.join(sorted(SUITES))}, all")
    names = sorted(SUITES) if name == 'all' else [name]
    return asyncio.run(SuiteManager(names).run())


# --- Общие помощники команд ---

def guarded(func):
    """Переводит ошибки геометрии в коды выхода."""
    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except OracleFailure as e:
            logging.error(f"❌ Проверка не прошла: {e}")
            sys.exit(EXIT_FAILURE)
        except GeometryError as e:
            logging.error(f"❌ {e}")
            sys.exit(EXIT_USAGE)
    return wrapper


def emit(payload: Any, output: Optional[str], manifest: RunManifest):
    """Пишет результат в файл с манифестом рядом или в stdout."""
    text = payload if isinstance(payload, str) else canonical_json(payload)
    if output is None:
        click.echo(text, nl=False)
        return
    with open(output, 'w', encoding='utf-8') as f:
        f.write(text)
    manifest.add_output(output)
    manifest.write(f'{output}.manifest.json')


def finish(report: SuiteReport):
    if not report.passed:
        sys.exit(EXIT_FAILURE)


def verify_partition(partition) -> Tuple[SuiteReport, Dict[str, Any]]:
    """Корректность разбиения, ν ≥ β + 1 во всех ячейках, минимальность и главная матрица."""
    report = SuiteReport('verify')
    about = isinstance(partition, AboutPartition)
    local = partition.base if about else partition
    validation = validate_local_partition(partition.pieces, partition.window, partition.x if about else None)
    witness = {k: v for k, v in vars(validation).items() if v is not None and k != 'valid'}
    report.add('valid', validation.valid, f'{len(partition.pieces)} кусков', witness)
    properties: Dict[str, Any] = {'pieces': len(partition.pieces)}
    if validation.valid:
        points = cell_points(partition.window, partition.pieces)
        nu, beta, _ = stats_at_points(partition.pieces, points)
        bad = np.flatnonzero(nu < beta + 1)
        report.add('nu-ge-beta-plus-one', not len(bad), f'{len(points)} ячеек (удвоенные полуединицы)',
                   points[bad[0]].tolist() if len(bad) else None)
        high = minimality_witness(local)
        properties['minimal'] = high is None
        if high is not None:
            properties['minimality_witness'] = {'point2': list(high.point2), 'nu': high.nu, 'beta': high.beta}
    if about:
        properties['about'] = validation.valid_about
        if validation.valid_about:
            matrix = principal_matrix(partition)
            properties['principal_matrix'] = matrix.to_json()
            report.add('separative', is_separative(matrix), 'главная матрица сепаративна')
    return report, properties


def _parse_json_list(text: Optional[str], option: str) -> List[Any]:
    if not text:
        return []
    try:
        value = json.loads(text)
    except json.JSONDecodeError as e:
        raise DomainError(f"{option}: ожидается JSON-список: {e}") from e
    if not isinstance(value, list):
        raise DomainError(f"{option}: ожидается JSON-список")
    return value


# --- Команды ---

@click.group()
@click.version_option(TOOL_VERSION)
def cli():
    """Регулярные разбиения на прямоугольники: проверки, построения и перебор."""


@cli.command()
@click.option('--partition', 'path', required=True, type=click.Path(exists=True, dir_okay=False))
@click.option('--output', type=click.Path(dir_okay=False))
@guarded
def verify(path, output):
    """Проверяет разбиение из JSON-файла."""
    partition = partition_from_json(read_json(path))
    report, properties = verify_partition(partition)
    manifest = RunManifest('verify', {'partition': path})
    manifest.add_input(path)
    emit({'report': report.to_json(), 'properties': properties}, output, manifest)
    finish(report)


@cli.command('enumerate')
@click.option('--n', 'n', required=True, type=click.IntRange(1, None))
@click.option('--k', 'k', required=True, type=click.IntRange(0, None))
@click.option('--jobs', default=PARALLEL_JOBS, show_default=True, type=click.IntRange(1, None))
@click.option('--output', type=click.Path(dir_okay=False))
@guarded
def enumerate_command(n, k, jobs, output):
    """Все минимальные разбиения около 0 с k индексами; JSON-строки канонических форм."""
    abouts = enumerate_minimal_about(n, k, jobs)
    lines = ''.join(json.dumps(canonical_form(a).to_json(), sort_keys=True, ensure_ascii=False) + '\n'
                    for a in abouts)
    logging.info(f"✅ n={n}, k={k}: {len(abouts)} разбиений")
    emit(lines, output, RunManifest('enumerate', {'n': n, 'k': k, 'jobs': jobs}))


def _torus_options(func):
    options = [
        click.option('--preset', default=None, help='Имя пресета из torus_presets.json'),
        click.option('--n', 'n', type=int), click.option('--m', 'm', type=int), click.option('--l', 'ell', type=int),
        click.option('--r1', type=int), click.option('--r2', type=int), click.option('--seed', type=int),
        click.option('--output', type=click.Path(dir_okay=False)),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _run_torus(command: str, default_preset: str, refine5: bool, preset, n, m, ell, r1, r2, seed, output):
    preset = preset or (preset_for_dimension(n) if n else default_preset)
    cfg = preset_config(preset, n=n, m=m, l=ell, r1=r1, r2=r2, seed=seed)
    run = simulate_torus(cfg)
    report = SuiteReport(command)
    for name, (ok, detail) in verify_run(run).items():
        report.add(name, ok, detail)
    result = {'config': cfg.to_json(), 'partition': run.partition.to_json(), 'stats': run.stats.to_json()}
    if refine5:
        refinement = refine_to_5(run.partition)
        stats = regulation_stats(refinement.partition)
        report.add('refine5', stats.max_nu <= 5 and stats.troublesome == 0,
                   f'max ν = {stats.max_nu}, трудных {stats.troublesome}, вставлено {len(refinement.inserted)}')
        result['refine5'] = {'partition': refinement.partition.to_json(), 'stats': stats.to_json(),
                             'inserted': [b.to_json() for b in refinement.inserted],
                             'epsilon': str(refinement.epsilon), 'C': refinement.neighbour_bound}
    result['report'] = report.to_json()
    emit(result, output, RunManifest(command, {'preset': preset, **cfg.to_json(), 'refine5': refine5}, seed=cfg.seed))
    finish(report)


@cli.command('simulate-torus')
@_torus_options
@click.option('--refine5', is_flag=True, help='Для n = 3 довести регулярность до 5')
@guarded
def simulate_torus_command(preset, n, m, ell, r1, r2, seed, output, refine5):
    """Маркерная конструкция на торе и статистика ν."""
    _run_torus('simulate-torus', 'n2', refine5, preset, n, m, ell, r1, r2, seed, output)


@cli.command('refine5')
@_torus_options
@guarded
def refine5_command(preset, n, m, ell, r1, r2, seed, output):
    """Трёхмерная конструкция с последующим доведением до 5-регулярности."""
    _run_torus('refine5', 'n3', True, preset, n, m, ell, r1, r2, seed, output)


def _load_instance(path: str) -> ExtensionInstance:
    try:
        return ExtensionInstance.from_json(read_json(path))
    except (KeyError, TypeError) as e:
        raise DomainError(f"Экземпляр {path} повреждён: {e}") from e


@cli.command()
@click.option('--instance', 'path', required=True, type=click.Path(exists=True, dir_okay=False))
@click.option('--output', type=click.Path(dir_okay=False))
@guarded
def extend2d(path, output):
    """Минимальное продолжение двумерного набора прямоугольников."""
    instance = _load_instance(path)
    partition = extend_2d(instance)
    report = SuiteReport('extend2d')
    report.add('valid', validate_local_partition(partition.pieces, partition.window).valid)
    report.add('minimal', is_minimal_local(partition), f'{len(partition.pieces)} кусков')
    manifest = RunManifest('extend2d', {'instance': path})
    manifest.add_input(path)
    emit({'partition': partition_to_json(partition), 'report': report.to_json()}, output, manifest)
    finish(report)


@cli.command()
@click.option('--instance', 'path', required=True, type=click.Path(exists=True, dir_okay=False))
@click.option('--grid', type=click.Choice(['1', '1/2']), default='1', show_default=True,
              help='Шаг сетки координат в единицах')
@click.option('--workers', default=SEARCH_WORKERS, show_default=True, type=click.IntRange(1, None))
@click.option('--output', type=click.Path(dir_okay=False))
@guarded
def search(path, grid, workers, output):
    """Полный перебор минимальных продолжений на сетке."""
    instance = _load_instance(path)
    step = 2 if grid == '1' else 1
    result = search_minimal_extension(instance, step, workers)
    manifest = RunManifest('search', {'instance': path, 'grid': grid, 'workers': workers})
    manifest.add_input(path)
    emit(result.to_json(), output, manifest)


@cli.command()
@click.option('--instance', 'path', required=True, type=click.Path(exists=True, dir_okay=False))
@click.option('--candidate', required=True, type=click.Path(exists=True, dir_okay=False))
@click.option('--output', type=click.Path(dir_okay=False))
@guarded
def trace(path, candidate, output):
    """Цепочка поверхностей, опровергающая кандидата в минимальные продолжения."""
    instance = _load_instance(path)
    partition = partition_from_json(read_json(candidate))
    if isinstance(partition, AboutPartition):
        partition = partition.base
    certificate = trace_obstruction_chain(instance, partition)
    manifest = RunManifest('trace', {'instance': path, 'candidate': candidate})
    manifest.add_input(path)
    manifest.add_input(candidate)
    emit(certificate.to_json(), output, manifest)
    if certificate.outcome == 'accepted':
        logging.error("❌ Кандидат не опровергнут")
        sys.exit(EXIT_FAILURE)


@cli.command()
@click.option('--s', 's', default=1, show_default=True, type=click.IntRange(1, None))
@click.option('--dim', default=2, show_default=True, type=click.Choice(['2', '3']))
@click.option('--copies', default=1, show_default=True, type=click.IntRange(1, None),
              help='Число копий T3 вдоль ребра грани (dim = 3)')
@click.option('--check', is_flag=True, help='Проверить свойства замощения')
@click.option('--svg', 'svg_path', type=click.Path(dir_okay=False),
              help='Рисунок T2 (dim = 2); с --check пишется и без флага, рядом с --output')
@click.option('--output', type=click.Path(dir_okay=False))
@guarded
def tiling(s, dim, copies, check, svg_path, output):
    """Частичные замощения T2 и T3 со скатыванием на грани куба."""
    report = SuiteReport('tiling')
    if dim == '2':
        result = check_t2(report, s) if check else tiling_t2(s)
    else:
        result = (check_roll_down(report, s, copies) if check else roll_down(s, copies)).tiling
    manifest = RunManifest('tiling', {'s': s, 'dim': int(dim), 'copies': copies, 'check': check})
    if check and dim == '2' and not svg_path:
        svg_path = f'{os.path.splitext(output)[0]}.svg' if output else f't2-s{s}.svg'
    if svg_path:
        if dim != '2':
            raise DomainError("tiling: рисунок строится только для dim = 2")
        with open(svg_path, 'w', encoding='utf-8') as f:
            f.write(render_tiling(result, title=f'T2, s = {s}'))
        manifest.add_output(svg_path)
    payload = result.to_json()
    if check:
        payload['report'] = report.to_json()
    emit(payload, output, manifest)
    if check:
        finish(report)


@cli.command()
@click.option('--input', 'path', type=click.Path(exists=True, dir_okay=False))
@click.option('--fixture', type=click.Choice(FIXTURES))
@click.option('--axis', type=int, help='Ось сечения (n = 3), с нуля')
@click.option('--level', type=int, help='Высота сечения в полуединицах')
@click.option('--highlight', help='JSON-список номеров кусков или точек')
@click.option('--required', help='JSON-список номеров обязательных кусков')
@click.option('--title', default='')
@click.option('--output', type=click.Path(dir_okay=False))
@guarded
def render(path, fixture, axis, level, highlight, required, title, output):
    """SVG двумерного разбиения или осевого сечения трёхмерного."""
    if bool(path) == bool(fixture):
        raise click.UsageError('нужен ровно один из --input и --fixture')
    manifest = RunManifest('render', {'input': path, 'fixture': fixture, 'axis': axis, 'level': level,
                                      'highlight': highlight, 'required': required})
    if fixture:
        emit(render_fixture(fixture), output, manifest)
        return
    manifest.add_input(path)
    partition = partition_from_json(read_json(path))
    marks = _parse_json_list(highlight, '--highlight')
    pieces = [v for v in marks if isinstance(v, int)]
    points = [v for v in marks if isinstance(v, list)]
    if isinstance(partition, AboutPartition):
        points.append(list(partition.x))
        partition = partition.base
    svg = render_svg(partition, axis=axis, level=level, highlight=pieces,
                     required=_parse_json_list(required, '--required'), points=points, title=title)
    emit(svg, output, manifest)


@cli.command()
@click.argument('name', type=click.Choice(sorted(SUITES) + ['all']))
@click.option('--output', type=click.Path(dir_okay=False))
@guarded
def suite(name, output):
    """Запускает проверочные наборы и печатает отчёт со свидетелями."""
    result = run_suite(name)
    logging.info(f"Отчёт {name}: sha256 {digest_bytes(canonical_json(result).encode('utf-8'))}")
    emit(result, output, RunManifest('suite', {'suite': name}))
    if not result['passed']:
        sys.exit(EXIT_FAILURE)


def start_application():
    """Основная функция для запуска приложения."""
    logging.info("🚀 Запуск приложения...")
    cli()


if __name__ == '__main__':
    start_application()
