# Параметры запуска и шаблоны SVG.
import os
from dotenv import load_dotenv

# Явно загружаем .env файл
load_dotenv()

TOOL_VERSION = '1.0.0'

# Пределы перебора для проверочных наборов
SEPARATIVE_MAX_N = int(os.getenv('SEPARATIVE_MAX_N', 3))
SEPARATIVE_MAX_ROWS = int(os.getenv('SEPARATIVE_MAX_ROWS', 6))
MINIMAL_MAX_N = int(os.getenv('MINIMAL_MAX_N', 4))
UNION_MAX_N = int(os.getenv('UNION_MAX_N', 3))
GLOBAL_MAX_N = int(os.getenv('GLOBAL_MAX_N', 5))
TORUS_SEEDS = int(os.getenv('TORUS_SEEDS', 5))
FUZZ_CANDIDATES = int(os.getenv('FUZZ_CANDIDATES', 10000))
EXTEND_2D_INSTANCES = int(os.getenv('EXTEND_2D_INSTANCES', 200))
SEARCH_WORKERS = int(os.getenv('SEARCH_WORKERS', 1))
PARALLEL_JOBS = int(os.getenv('PARALLEL_JOBS', 1))
SEARCH_HALF_STEP = os.getenv('SEARCH_HALF_STEP', '0') == '1'

# Прогресс-бары tqdm (0 - выключить)
PROGRESS = os.getenv('PROGRESS', '1') != '0'

# Оформление SVG
SVG_PIXELS_PER_UNIT = float(os.getenv('SVG_PIXELS_PER_UNIT', 20))
SVG_MARGIN = float(os.getenv('SVG_MARGIN', 10))


# --- 1. ДОКУМЕНТ С РАЗБИЕНИЕМ

SVG_PARTITION = """<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{{ width }}" height="{{ height }}" viewBox="0 0 {{ width }} {{ height }}">
  <title>{{ title }}</title>
  <rect x="0" y="0" width="{{ width }}" height="{{ height }}" fill="#ffffff"/>
  <g id="pieces" stroke="#222222" stroke-width="{{ stroke }}">
{%- for r in rects %}
    <rect x="{{ r.x }}" y="{{ r.y }}" width="{{ r.w }}" height="{{ r.h }}" fill="{{ r.fill }}"/>
{%- endfor %}
  </g>
  <g id="window" fill="none" stroke="#000000" stroke-width="{{ stroke * 2 }}">
    <rect x="{{ window.x }}" y="{{ window.y }}" width="{{ window.w }}" height="{{ window.h }}"/>
  </g>
{%- if points %}
  <g id="points" fill="#d62728">
{%- for p in points %}
    <circle cx="{{ p.x }}" cy="{{ p.y }}" r="{{ radius }}"/>
{%- endfor %}
  </g>
{%- endif %}
</svg>
"""

# --- 2. ДОКУМЕНТ С ЧАСТИЧНЫМ ЗАМОЩЕНИЕМ

SVG_TILING = """<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{{ width }}" height="{{ height }}" viewBox="0 0 {{ width }} {{ height }}">
  <title>{{ title }}</title>
  <rect x="0" y="0" width="{{ width }}" height="{{ height }}" fill="#ffffff"/>
  <g id="axes" stroke="#999999" stroke-width="{{ stroke }}">
    <line x1="{{ origin.x }}" y1="0" x2="{{ origin.x }}" y2="{{ height }}"/>
    <line x1="0" y1="{{ origin.y }}" x2="{{ width }}" y2="{{ origin.y }}"/>
  </g>
  <g id="tiles" stroke="#1f77b4" stroke-width="{{ stroke }}">
{%- for t in tiles %}
    <rect x="{{ t.x }}" y="{{ t.y }}" width="{{ t.w }}" height="{{ t.h }}" fill="{{ t.fill }}"/>
{%- endfor %}
  </g>
</svg>
"""

# Палитра кусков: обычные, обязательные, особые
FILL_PLAIN = '#f2f2f2'
FILL_REQUIRED = '#ffbb78'
FILL_HIGHLIGHT = '#ff9896'
FILL_TILE = '#aec7e8'
FILL_CORNER_TILE = '#1f77b4'
