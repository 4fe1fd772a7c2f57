"""
Gráficos SVG das quatro saídas do INTERSTATIS.

Círculo de correlações para T e E_v; plano principal para M_i e E_i. Cada
célula intervalar vira um retângulo [lo, hi] × [lo, hi] nos dois eixos
escolhidos. A saída é texto SVG 1.1 determinístico.
"""

import logging
from dataclasses import dataclass
from html import escape
from pathlib import Path

import numpy as np

from interstatis.config import Config
from interstatis.errors import PlotError
from interstatis.io_data import matrix_from_document

logger = logging.getLogger(__name__)

TABLE_CORRELATIONS = 'table-correlations'
VARIABLE_EVOLUTION = 'variable-evolution'
AVERAGE_INDIVIDUALS = 'average-individuals'
INDIVIDUAL_EVOLUTION = 'individual-evolution'

# figura → (arquivo, tabela do documento de resultados)
FIGURES = {
    TABLE_CORRELATIONS: ('fig-1a-correlacoes-tabelas.svg', 'T'),
    VARIABLE_EVOLUTION: ('fig-1b-evolucao-variaveis.svg', 'Ev'),
    AVERAGE_INDIVIDUALS: ('fig-1c-individuos-medios.svg', 'Mi'),
    INDIVIDUAL_EVOLUTION: ('fig-1d-evolucao-individuos.svg', 'Ei'),
}

PALETTE = (
    '#1f77b4', '#d62728', '#2ca02c', '#ff7f0e', '#9467bd',
    '#8c564b', '#e377c2', '#7f7f7f', '#bcbd22', '#17becf',
)

MARGIN = 40
CIRCLE_RANGE = 1.1
PLANE_PADDING = 1.05
POINT_RADIUS = 3


@dataclass(frozen=True)
class PlotSpec:
    which: str
    axes: tuple = (1, 2)
    subset: tuple = None
    width: int = None
    height: int = None
    labels: bool = True

    def __post_init__(self):
        if self.which not in FIGURES:
            raise PlotError(f"Gráfico desconhecido {self.which!r}; opções: {', '.join(FIGURES)}")
        eixos = tuple(int(a) for a in self.axes)
        if len(eixos) != 2 or eixos[0] == eixos[1] or min(eixos) < 1:
            raise PlotError(f"Eixos devem ser dois índices distintos ≥ 1 (recebido {self.axes})")
        object.__setattr__(self, 'axes', eixos)
        if self.subset is not None:
            object.__setattr__(self, 'subset', tuple(self.subset))
        object.__setattr__(self, 'width', int(self.width or Config.PLOT_WIDTH))
        object.__setattr__(self, 'height', int(self.height or Config.PLOT_HEIGHT))
        if self.width <= 2 * MARGIN or self.height <= 2 * MARGIN:
            raise PlotError(f"Tela {self.width}×{self.height} pequena demais (margem {MARGIN})")


def _fmt(v):
    return f"{v:.4f}"


class SVG:
    def __init__(self):
        self.svg = ""

    def header(self, width, height, title=None):
        self.svg += f"""<?xml version="1.0" encoding="UTF-8" standalone="no"?>
<svg version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}" xmlns="http://www.w3.org/2000/svg">
"""
        if title:
            self.svg += f"<title>{escape(title)}</title>\n"
        self.svg += f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>\n'

    def group_start(self, css_class, title=None):
        self.svg += f'<g class="{escape(css_class)}">\n'
        if title:
            self.svg += f"<title>{escape(title)}</title>\n"

    def group_end(self):
        self.svg += "</g>\n"

    def rectangle(self, x1, y1, x2, y2, color, css_class='retangulo'):
        self.svg += (
            f'<rect class="{css_class}" x="{_fmt(x1)}" y="{_fmt(y1)}" width="{_fmt(x2 - x1)}" '
            f'height="{_fmt(y2 - y1)}" fill="{color}" fill-opacity="0.25" stroke="{color}" stroke-width="1"/>\n'
        )

    def line(self, x1, y1, x2, y2, color='#000000', css_class='linha', width=1):
        self.svg += (
            f'<line class="{css_class}" x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke="{color}" stroke-width="{width}"/>\n'
        )

    def point(self, x, y, color):
        self.svg += f'<circle class="ponto" cx="{_fmt(x)}" cy="{_fmt(y)}" r="{POINT_RADIUS}" fill="{color}"/>\n'

    def ellipse(self, cx, cy, rx, ry):
        self.svg += (
            f'<ellipse class="circulo" cx="{_fmt(cx)}" cy="{_fmt(cy)}" rx="{_fmt(rx)}" ry="{_fmt(ry)}" '
            f'fill="none" stroke="#555555" stroke-width="1"/>\n'
        )

    def polyline(self, points, color):
        pontos = ' '.join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)
        self.svg += (
            f'<polyline class="trajetoria" points="{pontos}" fill="none" stroke="{color}" '
            f'stroke-width="1" stroke-dasharray="4,2"/>\n'
        )

    def text(self, x, y, string, color='#222222'):
        self.svg += (
            f'<text x="{_fmt(x)}" y="{_fmt(y)}" fill="{color}" font-size="11" '
            f'font-family="sans-serif" text-anchor="middle">{escape(str(string))}</text>\n'
        )

    def get_svg(self):
        return f"{self.svg}</svg>\n"


@dataclass(frozen=True)
class PlotTransform:
    """Transformação afim do quadrado [-R, R]² para a área útil da tela."""
    extent: float
    width: int
    height: int
    margin: int = MARGIN

    @property
    def scale_x(self):
        return (self.width - 2 * self.margin) / (2 * self.extent)

    @property
    def scale_y(self):
        return (self.height - 2 * self.margin) / (2 * self.extent)

    def x(self, v):
        return self.margin + (v + self.extent) * self.scale_x

    def y(self, v):
        return self.margin + (self.extent - v) * self.scale_y

    def inverse_x(self, px):
        return (px - self.margin) / self.scale_x - self.extent

    def inverse_y(self, py):
        return self.extent - (py - self.margin) / self.scale_y


def _axis_columns(coords, spec):
    a, b = spec.axes
    if coords.n_cols < 2:
        raise PlotError(f"São necessários ao menos 2 eixos (a matriz tem {coords.n_cols})")
    if max(a, b) > coords.n_cols:
        raise PlotError(f"Eixo {max(a, b)} fora do intervalo: a matriz tem {coords.n_cols} eixos")
    return a - 1, b - 1


def _draw_frame(svg, t, spec, titulo):
    svg.header(spec.width, spec.height, titulo)
    svg.group_start('eixos')
    svg.line(t.x(-t.extent), t.y(0.0), t.x(t.extent), t.y(0.0), '#999999')
    svg.line(t.x(0.0), t.y(-t.extent), t.x(0.0), t.y(t.extent), '#999999')
    svg.text(t.x(t.extent) - 20, t.y(0.0) - 6, f"eixo {spec.axes[0]}", '#666666')
    svg.text(t.x(0.0) + 24, t.y(t.extent) + 12, f"eixo {spec.axes[1]}", '#666666')
    svg.group_end()


def _draw_cell(svg, t, x_lo, x_hi, y_lo, y_hi, cor):
    """Retângulo da célula; intervalos degenerados viram ponto ou segmento."""
    if x_lo == x_hi and y_lo == y_hi:
        svg.point(t.x(x_lo), t.y(y_lo), cor)
    elif x_lo == x_hi or y_lo == y_hi:
        svg.line(t.x(x_lo), t.y(y_lo), t.x(x_hi), t.y(y_hi), cor, 'segmento', 2)
    else:
        svg.rectangle(t.x(x_lo), t.y(y_hi), t.x(x_hi), t.y(y_lo), cor)


def render_correlation_circle(coords, spec, names=None):
    """
    Círculo de correlações (T ou E_v) com um retângulo por linha de `coords`.

    Returns:
        texto SVG
    """
    a, b = _axis_columns(coords, spec)
    names = list(names) if names is not None else [str(i + 1) for i in range(coords.n_rows)]
    if len(names) != coords.n_rows:
        raise PlotError(f"{len(names)} rótulos para {coords.n_rows} linhas")

    t = PlotTransform(CIRCLE_RANGE, spec.width, spec.height)
    svg = SVG()
    _draw_frame(svg, t, spec, 'Círculo de correlações')
    svg.ellipse(t.x(0.0), t.y(0.0), t.scale_x, t.scale_y)

    for i, nome in enumerate(names):
        cor = PALETTE[i % len(PALETTE)]
        svg.group_start('celula', nome)
        _draw_cell(svg, t, coords.lo[i, a], coords.hi[i, a], coords.lo[i, b], coords.hi[i, b], cor)
        if spec.labels:
            cx = (coords.lo[i, a] + coords.hi[i, a]) / 2
            cy = (coords.lo[i, b] + coords.hi[i, b]) / 2
            svg.text(t.x(cx), t.y(cy) - 6, nome)
        svg.group_end()
    return svg.get_svg()


def _subset_indices(individual_names, subset):
    if subset is None:
        return list(range(len(individual_names)))
    desconhecidos = [s for s in subset if s not in individual_names]
    if desconhecidos:
        raise PlotError(f"Indivíduos desconhecidos no subconjunto: {desconhecidos}")
    escolhidos = set(subset)
    return [i for i, nome in enumerate(individual_names) if nome in escolhidos]


def render_principal_plane(coords, spec, individual_names, table_names=None):
    """
    Plano principal de M_i (um retângulo por indivíduo) ou de E_i (um por
    indivíduo e tabela).

    Na evolução as linhas de `coords` vêm em blocos por tabela; os retângulos
    de um mesmo indivíduo têm a mesma cor e são ligados, na ordem das tabelas,
    por uma linha que passa pelos seus centros.
    """
    a, b = _axis_columns(coords, spec)
    individual_names = list(individual_names)
    n = len(individual_names)
    evolucao = spec.which == INDIVIDUAL_EVOLUTION
    if evolucao:
        table_names = list(table_names or [])
        r = len(table_names)
        if r == 0 or coords.n_rows != r * n:
            raise PlotError(f"E_i com {coords.n_rows} linhas não corresponde a {r} tabelas × {n} indivíduos")
    else:
        r = 1
        if coords.n_rows != n:
            raise PlotError(f"{n} indivíduos para {coords.n_rows} linhas")

    indices = _subset_indices(individual_names, spec.subset)
    linhas = [k * n + i for i in indices for k in range(r)]
    if linhas:
        extremos = np.concatenate([
            coords.lo[linhas][:, [a, b]].ravel(), coords.hi[linhas][:, [a, b]].ravel()
        ])
        alcance = PLANE_PADDING * float(np.max(np.abs(extremos)))
    else:
        alcance = 0.0
    t = PlotTransform(alcance if alcance > 0 else 1.0, spec.width, spec.height)

    svg = SVG()
    _draw_frame(svg, t, spec, 'Evolução dos indivíduos' if evolucao else 'Indivíduos médios')
    for i in indices:
        cor = PALETTE[i % len(PALETTE)]
        nome = individual_names[i]
        svg.group_start('individuo', nome)
        centros = []
        for k in range(r):
            row = k * n + i
            x_lo, x_hi = coords.lo[row, a], coords.hi[row, a]
            y_lo, y_hi = coords.lo[row, b], coords.hi[row, b]
            _draw_cell(svg, t, x_lo, x_hi, y_lo, y_hi, cor)
            centros.append((t.x((x_lo + x_hi) / 2), t.y((y_lo + y_hi) / 2)))
        if evolucao and r > 1:
            svg.polyline(centros, cor)
        if spec.labels:
            for k, (cx, cy) in enumerate(centros):
                rotulo = f"{nome} ({table_names[k]})" if evolucao else nome
                svg.text(cx, cy - 6, rotulo, cor)
        svg.group_end()
    return svg.get_svg()


def available_axes(doc, which):
    """
    Eixos que a figura `which` pode usar.

    T usa todas as colunas; M_i, E_v e E_i ficam limitadas a `n_axes` do
    documento (as matrizes gravadas têm todos os l eixos).
    """
    _, tabela = FIGURES[which]
    n_cols = matrix_from_document(doc, tabela).n_cols
    if which == TABLE_CORRELATIONS or doc.get('n_axes') is None:
        return n_cols
    return min(int(doc['n_axes']), n_cols)


def render_figure(doc, spec):
    """Desenha a figura `spec.which` a partir de um documento de resultados."""
    _, tabela = FIGURES[spec.which]
    coords = matrix_from_document(doc, tabela)
    limite = available_axes(doc, spec.which)
    if max(spec.axes) > limite:
        raise PlotError(f"Eixo {max(spec.axes)} fora dos {limite} eixos retidos para {tabela} (n_axes)")
    rotulos = doc.get('labels', {})
    if spec.which == TABLE_CORRELATIONS:
        return render_correlation_circle(coords, spec, rotulos.get('tables'))
    if spec.which == VARIABLE_EVOLUTION:
        return render_correlation_circle(coords, spec, rotulos.get('variables'))
    return render_principal_plane(coords, spec, rotulos.get('individuals', []), rotulos.get('tables'))


def write_svg(path, texto):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(texto)
    return path


def render_figures(doc, directory, subset=None, axes=(1, 2), labels=True):
    """
    Grava as quatro figuras (FIGURES) em `directory`.

    O subconjunto de indivíduos vale apenas para a evolução dos indivíduos.
    """
    arquivos = []
    for which, (arquivo, tabela) in FIGURES.items():
        spec = PlotSpec(which, axes=axes, subset=subset if which == INDIVIDUAL_EVOLUTION else None,
                        labels=labels)
        n_eixos = available_axes(doc, which)
        if max(spec.axes) > n_eixos:
            logger.warning(f"{arquivo} não gerado: {tabela} tem {n_eixos} eixo(s) disponíveis")
            continue
        arquivos.append(write_svg(Path(directory) / arquivo, render_figure(doc, spec)))
        logger.info(f"Figura gravada: {arquivo}")
    return arquivos
