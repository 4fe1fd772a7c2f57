import xml.etree.ElementTree as ET

import numpy as np
import pytest

from interstatis import io_data, pipeline, plots
from interstatis.errors import PlotError
from interstatis.ia_linalg import IntervalMatrix
from interstatis.pipeline import StudyInput

from conftest import random_interval_matrix

NS = '{http://www.w3.org/2000/svg}'


def _parse(svg):
    return ET.fromstring(svg.encode('utf-8'))


def _by_class(raiz, tag, classe):
    return [e for e in raiz.iter(f'{NS}{tag}') if e.get('class') == classe]


def _rect_bounds(rect, t):
    x, y = float(rect.get('x')), float(rect.get('y'))
    w, h = float(rect.get('width')), float(rect.get('height'))
    return t.inverse_x(x), t.inverse_x(x + w), t.inverse_y(y + h), t.inverse_y(y)


@pytest.fixture
def documento(rng):
    tabelas = [random_interval_matrix(rng, 4, 3, max_radius=0.5) for _ in range(3)]
    out = pipeline.run(StudyInput(tables=tabelas, individual_names=['a', 'b', 'c', 'd']))
    return io_data.results_document(out, io_data.study_labels(out.study))


def test_plot_spec_validation():
    with pytest.raises(PlotError):
        plots.PlotSpec('pizza')
    with pytest.raises(PlotError):
        plots.PlotSpec(plots.TABLE_CORRELATIONS, axes=(1, 1))
    with pytest.raises(PlotError):
        plots.PlotSpec(plots.TABLE_CORRELATIONS, axes=(0, 2))
    with pytest.raises(PlotError):
        plots.PlotSpec(plots.TABLE_CORRELATIONS, width=50)
    spec = plots.PlotSpec(plots.AVERAGE_INDIVIDUALS, axes=[2, 3], subset=['a'])
    assert spec.axes == (2, 3) and spec.subset == ('a',)
    assert (spec.width, spec.height) == (600, 600)


def test_rectangles_map_back_to_intervals():
    coords = IntervalMatrix([[0.1, -0.6, 0.0], [-0.9, 0.2, 0.3]], [[0.4, -0.1, 0.5], [-0.3, 0.8, 0.9]])
    spec = plots.PlotSpec(plots.TABLE_CORRELATIONS, axes=(1, 2), width=640, height=480)
    raiz = _parse(plots.render_correlation_circle(coords, spec, ['x1', 'x2']))
    t = plots.PlotTransform(plots.CIRCLE_RANGE, 640, 480)
    rects = _by_class(raiz, 'rect', 'retangulo')
    assert len(rects) == 2
    for i, rect in enumerate(rects):
        esperado = (coords.lo[i, 0], coords.hi[i, 0], coords.lo[i, 1], coords.hi[i, 1])
        np.testing.assert_allclose(_rect_bounds(rect, t), esperado, atol=1e-3)
    assert len(_by_class(raiz, 'ellipse', 'circulo')) == 1


def test_principal_plane_rectangles_use_data_extent():
    coords = IntervalMatrix([[1.0, -2.0], [-4.0, 0.5]], [[3.0, 1.0], [-2.0, 2.0]])
    spec = plots.PlotSpec(plots.AVERAGE_INDIVIDUALS)
    raiz = _parse(plots.render_principal_plane(coords, spec, ['p', 'q']))
    t = plots.PlotTransform(plots.PLANE_PADDING * 4.0, spec.width, spec.height)
    rects = _by_class(raiz, 'rect', 'retangulo')
    for i, rect in enumerate(rects):
        esperado = (coords.lo[i, 0], coords.hi[i, 0], coords.lo[i, 1], coords.hi[i, 1])
        np.testing.assert_allclose(_rect_bounds(rect, t), esperado, atol=1e-3)


def test_degenerate_cells_render_as_points_and_segments():
    coords = IntervalMatrix([[0.2, 0.3], [0.1, -0.5]], [[0.2, 0.3], [0.6, -0.5]])
    spec = plots.PlotSpec(plots.VARIABLE_EVOLUTION)
    raiz = _parse(plots.render_correlation_circle(coords, spec))
    assert len(_by_class(raiz, 'circle', 'ponto')) == 1
    assert len(_by_class(raiz, 'line', 'segmento')) == 1
    assert _by_class(raiz, 'rect', 'retangulo') == []


def test_axis_out_of_range():
    coords = IntervalMatrix(np.zeros((2, 2)), np.ones((2, 2)))
    with pytest.raises(PlotError, match='Eixo 3'):
        plots.render_correlation_circle(coords, plots.PlotSpec(plots.TABLE_CORRELATIONS, axes=(1, 3)))


def test_individual_evolution_subset(documento):
    spec = plots.PlotSpec(plots.INDIVIDUAL_EVOLUTION, subset=['b', 'd'])
    raiz = _parse(plots.render_figure(documento, spec))
    grupos = [g for g in raiz.iter(f'{NS}g') if g.get('class') == 'individuo']
    assert len(grupos) == 2
    celulas = sum(len(list(g.iter(f'{NS}rect'))) + len(list(g.iter(f'{NS}line'))) +
                  len(list(g.iter(f'{NS}circle'))) for g in grupos)
    assert celulas == 6
    assert len(_by_class(raiz, 'polyline', 'trajetoria')) == 2
    textos = [e.text for e in raiz.iter(f'{NS}text')]
    assert 'b (tabela1)' in textos and 'a (tabela1)' not in textos


def test_unknown_individual_in_subset(documento):
    with pytest.raises(PlotError, match='zz'):
        plots.render_figure(documento, plots.PlotSpec(plots.INDIVIDUAL_EVOLUTION, subset=['a', 'zz']))


def test_labels_can_be_turned_off(documento):
    raiz = _parse(plots.render_figure(documento, plots.PlotSpec(plots.AVERAGE_INDIVIDUALS, labels=False)))
    textos = [e.text for e in raiz.iter(f'{NS}text')]
    assert textos == ['eixo 1', 'eixo 2']


def test_rendering_is_deterministic(documento):
    for which in plots.FIGURES:
        spec = plots.PlotSpec(which)
        assert plots.render_figure(documento, spec) == plots.render_figure(documento, spec)


def test_render_figures_writes_all_four(tmp_path, documento):
    arquivos = plots.render_figures(documento, tmp_path)
    assert sorted(a.name for a in arquivos) == [
        'fig-1a-correlacoes-tabelas.svg', 'fig-1b-evolucao-variaveis.svg',
        'fig-1c-individuos-medios.svg', 'fig-1d-evolucao-individuos.svg',
    ]
    for arquivo in arquivos:
        raiz = ET.parse(arquivo).getroot()
        assert raiz.tag == f'{NS}svg'


def test_render_figures_skips_missing_axes(tmp_path, documento):
    # T é 3×3 e n_axes=2 limita M_i, E_v e E_i aos dois primeiros eixos
    assert plots.render_figures(documento, tmp_path, axes=(1, 4)) == []
    documento = dict(documento, n_axes=9)
    arquivos = [a.name for a in plots.render_figures(documento, tmp_path, axes=(1, 4))]
    assert 'fig-1a-correlacoes-tabelas.svg' not in arquivos
    assert 'fig-1c-individuos-medios.svg' in arquivos


def test_axes_beyond_n_axes_are_rejected(documento):
    assert documento['n_axes'] == 2
    assert len(documento['tables']['Mi'][0]) == 9
    assert plots.available_axes(documento, plots.AVERAGE_INDIVIDUALS) == 2
    assert plots.available_axes(documento, plots.TABLE_CORRELATIONS) == 3
    for which in (plots.VARIABLE_EVOLUTION, plots.AVERAGE_INDIVIDUALS, plots.INDIVIDUAL_EVOLUTION):
        with pytest.raises(PlotError, match='n_axes'):
            plots.render_figure(documento, plots.PlotSpec(which, axes=(1, 3)))
    raiz = _parse(plots.render_figure(documento, plots.PlotSpec(plots.TABLE_CORRELATIONS, axes=(1, 3))))
    assert raiz.tag == f'{NS}svg'
