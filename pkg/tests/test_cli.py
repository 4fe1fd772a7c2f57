import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from interstatis import __version__, io_data
from interstatis.cli import cli_main
from interstatis.ia_linalg import embed_classic

from conftest import random_real_tables


def _write_study(pasta, tabelas, nomes=None, **opcoes):
    nomes = nomes or [f"t{k + 1}" for k in range(len(tabelas))]
    individuos = [f"i{i + 1}" for i in range(tabelas[0].n_rows)]
    for nome, x in zip(nomes, tabelas):
        io_data.write_table(pasta / f"{nome}.csv", x, individuos, [f"{nome}_v{j + 1}" for j in range(x.n_cols)])
    manifesto = {'tables': [{'name': n, 'file': f"{n}.csv"} for n in nomes], 'options': opcoes}
    caminho = pasta / 'manifest.json'
    caminho.write_text(json.dumps(manifesto), encoding='utf-8')
    return caminho


def test_run_wine_study(tmp_path, wine_manifest, capsys):
    assert cli_main(['run', str(wine_manifest), '-o', str(tmp_path)]) == 0
    doc = io_data.read_results(tmp_path / 'results.json')
    assert doc['labels']['tables'] == ['expert1', 'expert2', 'expert3']
    assert doc['metadata']['method'] == 'interstatis'
    for nome in ('fig-1a-correlacoes-tabelas.svg', 'fig-1b-evolucao-variaveis.svg',
                 'fig-1c-individuos-medios.svg', 'fig-1d-evolucao-individuos.svg'):
        assert ET.parse(tmp_path / nome).getroot().tag.endswith('svg')
    assert (tmp_path / 'tables' / 'T.csv').is_file()
    assert 'results.json' in capsys.readouterr().out


def test_run_without_figures(tmp_path, wine_manifest):
    assert cli_main(['run', str(wine_manifest), '-o', str(tmp_path), '--no-figures']) == 0
    assert (tmp_path / 'results.json').is_file()
    assert not list(tmp_path.glob('*.svg'))


def test_validate_wine_study(wine_manifest, capsys):
    assert cli_main(['validate', str(wine_manifest)]) == 0
    assert 'n=6' in capsys.readouterr().out


@pytest.mark.parametrize('conteudo, trecho', [
    ('id,a,b\ni1,1:2,3\ni2,x,4\n', 'linha 3'),
    ('id,a,b\ni1,1:2,3\ni2,5:4,4\n', "coluna 'a'"),
    ('id,a,b\ni1,1:2,3,9\ni2,1,4\n', 'bad.csv'),
    ('', 'bad.csv'),
    ('id,a\ni1,1\ni1,2\n', "duplicado 'i1'"),
])
def test_malformed_table_exits_with_input_error(tmp_path, capsys, conteudo, trecho):
    (tmp_path / 'bad.csv').write_text(conteudo, encoding='utf-8')
    (tmp_path / 'm.json').write_text('{"tables": [{"name": "t", "file": "bad.csv"}]}', encoding='utf-8')
    assert cli_main(['validate', str(tmp_path / 'm.json')]) == 1
    assert trecho in capsys.readouterr().err


def test_missing_manifest_exits_with_input_error(tmp_path, capsys):
    assert cli_main(['validate', str(tmp_path / 'nada.json')]) == 1
    assert 'nada.json' in capsys.readouterr().err


def test_classic_command_matches_degenerate_run(tmp_path, rng):
    tabelas = [embed_classic(t) for t in random_real_tables(rng)]
    manifesto = _write_study(tmp_path, tabelas)
    assert cli_main(['run', str(manifesto), '-o', str(tmp_path / 'ia'), '--no-figures']) == 0
    assert cli_main(['classic', str(manifesto), '-o', str(tmp_path / 'cl'), '--no-figures']) == 0
    ia = io_data.read_results(tmp_path / 'ia' / 'results.json')
    cl = io_data.read_results(tmp_path / 'cl' / 'results.json')
    assert cl['metadata']['method'] == 'classic'
    for nome in io_data.OUTPUT_TABLES:
        np.testing.assert_allclose(np.asarray(ia['tables'][nome]), np.asarray(cl['tables'][nome]),
                                   atol=1e-9, rtol=1e-9)


def test_plot_command(tmp_path, wine_manifest):
    assert cli_main(['run', str(wine_manifest), '-o', str(tmp_path), '--no-figures']) == 0
    destino = tmp_path / 'plano.svg'
    args = ['plot', str(tmp_path / 'results.json'), '--which', 'individual-evolution',
            '--axes', '2,1', '--subset', 'wine1,wine3', '-o', str(destino), '--no-labels']
    assert cli_main(args) == 0
    raiz = ET.parse(destino).getroot()
    assert len([g for g in raiz.iter('{http://www.w3.org/2000/svg}g') if g.get('class') == 'individuo']) == 2


@pytest.mark.parametrize('eixos', ['1', '1,1', 'a,b', '0,2'])
def test_plot_rejects_bad_axes(tmp_path, wine_manifest, eixos):
    assert cli_main(['run', str(wine_manifest), '-o', str(tmp_path), '--no-figures']) == 0
    args = ['plot', str(tmp_path / 'results.json'), '--which', 'table-correlations', '--axes', eixos]
    assert cli_main(args) == 1


def test_constant_table_exits_with_numerical_error(tmp_path, rng, capsys):
    tabelas = [embed_classic(t) for t in random_real_tables(rng, r=2)]
    tabelas.append(embed_classic(np.full((6, 2), 3.0)))
    manifesto = _write_study(tmp_path, tabelas)
    assert cli_main(['run', str(manifesto), '-o', str(tmp_path / 'out')]) == 2
    assert 'etapa 3' in capsys.readouterr().err


def test_version(capsys):
    assert cli_main(['--version']) == 0
    assert __version__ in capsys.readouterr().out


def test_unknown_command_is_usage_error():
    assert cli_main(['desconhecido']) == 1
