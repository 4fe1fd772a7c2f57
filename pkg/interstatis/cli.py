"""
Linha de comando do INTERSTATIS.

    interstatis run <manifesto>        análise intervalar completa + figuras
    interstatis classic <manifesto>    STATIS clássico sobre os centros
    interstatis validate <manifesto>   só leitura e conferência dos dados
    interstatis plot <results.json>    redesenha uma figura

Códigos de saída: 0 sucesso, 1 erro de entrada, 2 erro numérico.
"""

import logging
import sys
from pathlib import Path

import click

from interstatis import __version__, pipeline
from interstatis.config import Config
from interstatis.errors import EXIT_INPUT, EXIT_OK, InterstatisError
from interstatis.io_data import (
    build_study,
    load_manifest,
    read_results,
    real_tables,
    study_labels,
    study_metadata,
    write_results,
)
from interstatis.plots import FIGURES, PlotSpec, render_figure, render_figures, write_svg
from interstatis.statis_classic import ClassicOptions, run_classic
from interstatis.utils import parse_axes

logger = logging.getLogger(__name__)


def _configure_logging(verbose):
    nivel = logging.DEBUG if verbose else getattr(logging, Config.LOG_LEVEL, logging.INFO)
    logging.basicConfig(
        level=nivel,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )


def _split_names(valores):
    """Aceita nomes repetidos na opção ou separados por vírgula."""
    nomes = [n.strip() for v in valores or () for n in v.split(',') if n.strip()]
    return nomes or None


def _axes_option(ctx, param, value):
    try:
        return parse_axes(value)
    except ValueError as e:
        raise click.BadParameter(str(e))


def _output_dir(manifest, output):
    if output:
        return Path(output)
    return manifest.output_dir or Path(Config.OUTPUT_DIR)


@click.group()
@click.version_option(__version__, prog_name='interstatis')
@click.option('-v', '--verbose', is_flag=True, help='Log detalhado (DEBUG).')
def cli(verbose):
    """STATIS para tabelas de dados intervalares."""
    _configure_logging(verbose)


@cli.command()
@click.argument('manifest', type=click.Path(dir_okay=False))
@click.option('-o', '--output', type=click.Path(file_okay=False), help='Pasta de saída.')
@click.option('--subset', multiple=True, help='Indivíduos da evolução dos indivíduos (repetir ou separar por vírgula).')
@click.option('--no-figures', is_flag=True, help='Não gerar os SVG.')
def run(manifest, output, subset, no_figures):
    """Executa o INTERSTATIS e grava resultados e figuras."""
    m = load_manifest(manifest)
    study = build_study(m)
    out = pipeline.run(study)
    pasta = _output_dir(m, output)
    destino = write_results(out, pasta, metadata=study_metadata(study, 'interstatis'))
    click.echo(f"Resultados: {destino}")
    if not no_figures:
        for arquivo in render_figures(read_results(destino), pasta, subset=_split_names(subset)):
            click.echo(f"Figura: {arquivo}")
    click.echo(f"λ1 = {out.lambda1:.6g}; β = {', '.join(f'{b:.6g}' for b in out.beta)}")


@cli.command()
@click.argument('manifest', type=click.Path(dir_okay=False))
@click.option('-o', '--output', type=click.Path(file_okay=False),
              help='Pasta de saída (padrão: <saída do manifesto>/classico).')
@click.option('--no-figures', is_flag=True, help='Não gerar os SVG.')
def classic(manifest, output, no_figures):
    """Executa o STATIS clássico sobre os centros dos intervalos."""
    m = load_manifest(manifest)
    study = build_study(m)
    opcoes = ClassicOptions(center=study.center, normalize_widths=study.normalize_widths,
                            weights=study.weights, n_axes=study.n_axes)
    out = run_classic(real_tables(study, m.degeneracy_tol), opcoes)
    pasta = Path(output) if output else _output_dir(m, None) / 'classico'
    destino = write_results(out, pasta, labels=study_labels(study),
                            metadata=study_metadata(study, 'classic'))
    click.echo(f"Resultados: {destino}")
    if not no_figures:
        for arquivo in render_figures(read_results(destino), pasta):
            click.echo(f"Figura: {arquivo}")


@cli.command()
@click.argument('manifest', type=click.Path(dir_okay=False))
def validate(manifest):
    """Lê o manifesto e as tabelas e confere formatos e dimensões."""
    m = load_manifest(manifest)
    study = build_study(m)
    degeneradas = sum(int(t.is_degenerate(m.degeneracy_tol)) for t in study.tables)
    click.echo(
        f"Estudo válido: n={study.n} indivíduos, r={study.r} tabelas, p={list(study.p)} "
        f"(l={study.l}); tabelas degeneradas: {degeneradas}"
    )


@cli.command()
@click.argument('results', type=click.Path(dir_okay=False))
@click.option('--which', required=True, type=click.Choice(list(FIGURES)), help='Figura a desenhar.')
@click.option('--axes', default='1,2', show_default=True, callback=_axes_option, help='Par de eixos "a,b".')
@click.option('--subset', multiple=True, help='Indivíduos a mostrar (planos principais).')
@click.option('-o', '--output', type=click.Path(dir_okay=False), help='Arquivo SVG de saída.')
@click.option('--width', type=click.IntRange(min=100), default=None, help='Largura em pixels.')
@click.option('--height', type=click.IntRange(min=100), default=None, help='Altura em pixels.')
@click.option('--no-labels', is_flag=True, help='Sem rótulos.')
def plot(results, which, axes, subset, output, width, height, no_labels):
    """Redesenha uma figura a partir de um results.json."""
    doc = read_results(results)
    spec = PlotSpec(which, axes=axes, subset=_split_names(subset), width=width, height=height,
                    labels=not no_labels)
    destino = Path(output) if output else Path(results).parent / FIGURES[which][0]
    write_svg(destino, render_figure(doc, spec))
    click.echo(f"Figura: {destino}")


def cli_main(args=None):
    """Executa a CLI e devolve o código de saída em vez de encerrar o processo."""
    try:
        rv = cli.main(args=args, prog_name='interstatis', standalone_mode=False)
    except InterstatisError as e:
        logger.debug("Falha detalhada", exc_info=True)
        click.echo(f"Erro: {e}", err=True)
        return e.exit_code
    except click.exceptions.Abort:
        click.echo("Abortado.", err=True)
        return EXIT_INPUT
    except click.ClickException as e:
        e.show()
        return EXIT_INPUT
    except OSError as e:
        click.echo(f"Erro de arquivo: {e}", err=True)
        return EXIT_INPUT
    return rv if isinstance(rv, int) else EXIT_OK
