"""
Entrada e saída de dados do INTERSTATIS.

Tabelas intervalares em CSV (células "lo:hi"), manifesto do estudo em JSON e o
documento de resultados em JSON com todas as matrizes em precisão total.
"""

import json
import logging
import os
import re
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from interstatis import __version__
from interstatis.config import Config
from interstatis.errors import (
    CellParseError,
    DimensionError,
    InputError,
    ManifestError,
    TableFormatError,
)
from interstatis.ia_core import Interval
from interstatis.ia_linalg import IntervalMatrix, centers_matrix, embed_classic, radius_matrix
from interstatis.pipeline import StudyInput
from interstatis.utils import DEFAULT_N_AXES, axis_labels, digest_matrices, format_interval_cell

logger = logging.getLogger(__name__)

RESULTS_FORMAT = 'interstatis-results'
RESULTS_VERSION = 1
RESULTS_FILE = 'results.json'
OUTPUT_TABLES = ('T', 'Ev', 'Mi', 'Ei')

_DECIMAL = re.compile(r'[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?')

# Cache: {caminho absoluto: {"mtime": int, "tabela": LoadedTable}}
_cache = {}
_lock = threading.Lock()


# ── Células e tabelas ─────────────────────────────────────────────────────

def _parse_number(texto, row, column, path):
    if not _DECIMAL.fullmatch(texto):
        raise CellParseError(f"valor numérico inválido {texto!r}", row, column, path)
    valor = float(texto)
    if not np.isfinite(valor):
        raise CellParseError(f"valor não finito {texto!r}", row, column, path)
    return valor


def parse_interval_cell(text, row=None, column=None, path=None):
    """
    Converte o texto de uma célula em Interval.

    Aceita "lo:hi" ou um único número "x" (intervalo [x, x]); espaços nas
    bordas são ignorados. Erros informam linha e coluna quando fornecidas.
    """
    if text is None or (isinstance(text, float) and np.isnan(text)):
        raise CellParseError("célula ausente", row, column, path)
    texto = str(text).strip()
    if not texto:
        raise CellParseError("célula vazia", row, column, path)
    partes = texto.split(':')
    if len(partes) == 1:
        x = _parse_number(partes[0].strip(), row, column, path)
        return Interval(x, x)
    if len(partes) != 2:
        raise CellParseError(f"esperado 'lo:hi', recebido {texto!r}", row, column, path)
    lo = _parse_number(partes[0].strip(), row, column, path)
    hi = _parse_number(partes[1].strip(), row, column, path)
    if lo > hi:
        raise CellParseError(f"intervalo invertido {texto!r} (lo > hi)", row, column, path)
    return Interval(lo, hi)


@dataclass(frozen=True)
class LoadedTable:
    matrix: IntervalMatrix
    individual_names: list
    variable_names: list
    path: str = None


def _check_names(nomes, tipo, path):
    vistos = set()
    for nome in nomes:
        if not nome:
            raise TableFormatError(f"{path}: nome de {tipo} vazio")
        if nome in vistos:
            raise TableFormatError(f"{path}: nome de {tipo} duplicado {nome!r}")
        vistos.add(nome)


def _read_table(caminho):
    try:
        df = pd.read_csv(caminho, header=None, dtype=str, keep_default_na=False, encoding='utf-8')
    except FileNotFoundError:
        raise TableFormatError(f"Arquivo não encontrado: {caminho}")
    except pd.errors.EmptyDataError:
        raise TableFormatError(f"{caminho}: arquivo vazio")
    except pd.errors.ParserError as e:
        raise TableFormatError(f"{caminho}: linhas com número de campos diferente ({e})")
    except UnicodeDecodeError as e:
        raise TableFormatError(f"{caminho}: arquivo não está em UTF-8 ({e})")

    if df.shape[0] < 2 or df.shape[1] < 2:
        raise TableFormatError(
            f"{caminho}: a tabela precisa de cabeçalho, ao menos um indivíduo e uma variável"
        )
    faltando = np.argwhere(df.isna().to_numpy())
    if faltando.size:
        i, j = faltando[0]
        raise TableFormatError(f"{caminho}: linha {i + 1} tem menos campos que o cabeçalho (coluna {j + 1})")

    variaveis = [str(v).strip() for v in df.iloc[0, 1:].tolist()]
    individuos = [str(v).strip() for v in df.iloc[1:, 0].tolist()]
    _check_names(variaveis, 'variável', caminho)
    _check_names(individuos, 'indivíduo', caminho)

    n, p = len(individuos), len(variaveis)
    lo = np.empty((n, p))
    hi = np.empty((n, p))
    valores = df.iloc[1:, 1:].to_numpy()
    for i in range(n):
        for j in range(p):
            # linha do arquivo: cabeçalho é a linha 1
            cel = parse_interval_cell(valores[i, j], row=i + 2, column=variaveis[j], path=caminho)
            lo[i, j] = cel.lo
            hi[i, j] = cel.hi
    return LoadedTable(IntervalMatrix(lo, hi), individuos, variaveis, str(caminho))


def load_table(path):
    """
    Lê uma tabela intervalar de CSV UTF-8.

    A primeira linha traz os nomes das variáveis e a primeira coluna os nomes
    dos indivíduos. O resultado fica em cache enquanto o mtime do arquivo não
    mudar.

    Returns:
        LoadedTable(matrix, individual_names, variable_names, path)
    """
    caminho = os.path.abspath(path)
    try:
        mtime = os.stat(caminho).st_mtime_ns
    except OSError:
        raise TableFormatError(f"Arquivo não encontrado: {path}")

    with _lock:
        entry = _cache.get(caminho)
        if entry and entry["mtime"] == mtime:
            logger.debug(f"Tabela em cache: {caminho}")
            return entry["tabela"]

    tabela = _read_table(path)
    logger.info(f"Tabela carregada: {path} ({tabela.matrix.n_rows}×{tabela.matrix.n_cols})")
    with _lock:
        _cache[caminho] = {"mtime": mtime, "tabela": tabela}
    return tabela


def invalidate_cache(path=None):
    """Descarta o cache de tabelas (todo, ou só de `path`)."""
    with _lock:
        if path is None:
            _cache.clear()
        else:
            _cache.pop(os.path.abspath(path), None)
    logger.debug("Cache de tabelas invalidado")


def write_table(path, matrix, individual_names, variable_names, index_label='individuo'):
    """Grava uma matriz de intervalos no formato lido por `load_table`, sem perda de precisão."""
    if len(individual_names) != matrix.n_rows or len(variable_names) != matrix.n_cols:
        raise DimensionError(
            f"Rótulos ({len(individual_names)}×{len(variable_names)}) não conferem com a matriz "
            f"{matrix.n_rows}×{matrix.n_cols}"
        )
    celulas = [
        [format_interval_cell(l, h) for l, h in zip(linha_lo, linha_hi)]
        for linha_lo, linha_hi in zip(matrix.lo.tolist(), matrix.hi.tolist())
    ]
    df = pd.DataFrame(celulas, index=list(individual_names), columns=list(variable_names))
    df.index.name = index_label
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, encoding='utf-8')
    invalidate_cache(path)
    return Path(path)


# ── Manifesto do estudo ───────────────────────────────────────────────────

@dataclass(frozen=True)
class StudyManifest:
    """Configuração de um estudo lida do manifesto JSON."""
    path: Path
    table_files: list
    table_names: list
    variable_names: list = None
    individual_names: list = None
    weights: list = None
    center: bool = True
    normalize_widths: bool = False
    n_axes: int = DEFAULT_N_AXES
    degeneracy_tol: float = field(default_factory=lambda: Config.DEGENERACY_TOL)
    output_dir: Path = None

    @property
    def options(self):
        return {
            'center': self.center,
            'normalize_widths': self.normalize_widths,
            'n_axes': self.n_axes,
            'degeneracy_tol': self.degeneracy_tol,
            'weights': self.weights,
        }


def _option(opcoes, nome, tipo, padrao, path):
    valor = opcoes.get(nome, padrao)
    if tipo is bool:
        if not isinstance(valor, bool):
            raise ManifestError(f"{path}: opção '{nome}' deve ser true/false")
        return valor
    if isinstance(valor, bool) or not isinstance(valor, (int, float)):
        raise ManifestError(f"{path}: opção '{nome}' deve ser numérica")
    return tipo(valor)


def load_manifest(path):
    """
    Lê o manifesto JSON de um estudo.

    Formato:
        {
          "tables": [{"name": "expert1", "file": "expert1.csv", "variables": [...]}, ...],
          "individual_names": [...],            (opcional)
          "options": {"center": true, "normalize_widths": false, "n_axes": 2,
                      "degeneracy_tol": 0.0, "weights": [...]},
          "output_dir": "resultados"            (opcional)
        }

    Caminhos relativos são resolvidos a partir da pasta do manifesto.
    """
    path = Path(path)
    try:
        with open(path, encoding='utf-8') as f:
            doc = json.load(f)
    except FileNotFoundError:
        raise ManifestError(f"Manifesto não encontrado: {path}")
    except json.JSONDecodeError as e:
        raise ManifestError(f"{path}: JSON inválido na linha {e.lineno}, coluna {e.colno}: {e.msg}")
    except UnicodeDecodeError as e:
        raise ManifestError(f"{path}: manifesto não está em UTF-8 ({e})")

    if not isinstance(doc, dict):
        raise ManifestError(f"{path}: o manifesto deve ser um objeto JSON")
    tabelas = doc.get('tables')
    if not isinstance(tabelas, list) or not tabelas:
        raise ManifestError(f"{path}: 'tables' deve listar ao menos uma tabela")

    base = path.parent
    arquivos, nomes, variaveis = [], [], []
    for k, t in enumerate(tabelas):
        if not isinstance(t, dict) or not isinstance(t.get('file'), str):
            raise ManifestError(f"{path}: tabela {k + 1} sem campo 'file'")
        arquivo = (base / t['file']).resolve()
        if not arquivo.is_file():
            raise ManifestError(f"{path}: arquivo da tabela {k + 1} não existe: {arquivo}")
        arquivos.append(arquivo)
        nomes.append(str(t.get('name') or arquivo.stem))
        vs = t.get('variables')
        if vs is not None and (not isinstance(vs, list) or not all(isinstance(v, str) for v in vs)):
            raise ManifestError(f"{path}: 'variables' da tabela {nomes[-1]!r} deve ser lista de textos")
        variaveis.append(vs)
    if len(set(nomes)) != len(nomes):
        raise ManifestError(f"{path}: nomes de tabela repetidos {nomes}")

    individuos = doc.get('individual_names')
    if individuos is not None and (not isinstance(individuos, list) or not all(isinstance(v, str) for v in individuos)):
        raise ManifestError(f"{path}: 'individual_names' deve ser lista de textos")

    opcoes = doc.get('options') or {}
    if not isinstance(opcoes, dict):
        raise ManifestError(f"{path}: 'options' deve ser um objeto")
    pesos = opcoes.get('weights')
    if pesos is not None:
        if not isinstance(pesos, list) or not all(
                isinstance(w, (int, float)) and not isinstance(w, bool) for w in pesos):
            raise ManifestError(f"{path}: 'weights' deve ser lista de números")
        pesos = [float(w) for w in pesos]

    saida = doc.get('output_dir')
    manifest = StudyManifest(
        path=path,
        table_files=arquivos,
        table_names=nomes,
        variable_names=variaveis if any(v is not None for v in variaveis) else None,
        individual_names=individuos,
        weights=pesos,
        center=_option(opcoes, 'center', bool, True, path),
        normalize_widths=_option(opcoes, 'normalize_widths', bool, False, path),
        n_axes=(DEFAULT_N_AXES if opcoes.get('n_axes') is None
                else _option(opcoes, 'n_axes', int, DEFAULT_N_AXES, path)),
        degeneracy_tol=_option(opcoes, 'degeneracy_tol', float, Config.DEGENERACY_TOL, path),
        output_dir=(base / saida) if saida else None,
    )
    if manifest.n_axes < 1 or opcoes.get('n_axes') not in (None, manifest.n_axes):
        raise ManifestError(f"{path}: 'n_axes' deve ser um inteiro ≥ 1")
    if manifest.degeneracy_tol < 0:
        raise ManifestError(f"{path}: 'degeneracy_tol' não pode ser negativo")
    logger.info(f"Manifesto carregado: {path} ({len(arquivos)} tabelas)")
    return manifest


def build_study(manifest):
    """Carrega as tabelas do manifesto e monta o StudyInput, conferindo os rótulos."""
    carregadas = [load_table(f) for f in manifest.table_files]

    individuos = carregadas[0].individual_names
    for nome, t in zip(manifest.table_names, carregadas):
        if t.individual_names != individuos:
            raise ManifestError(
                f"Tabela {nome!r}: indivíduos {t.individual_names} diferem de {individuos} "
                f"(todas as tabelas devem ter os mesmos indivíduos, na mesma ordem)"
            )
    if manifest.individual_names is not None and list(manifest.individual_names) != individuos:
        raise ManifestError(
            f"individual_names do manifesto {manifest.individual_names} não confere com as tabelas {individuos}"
        )
    if manifest.variable_names is not None:
        for nome, vs, t in zip(manifest.table_names, manifest.variable_names, carregadas):
            if vs is not None and list(vs) != t.variable_names:
                raise ManifestError(
                    f"Tabela {nome!r}: variáveis do manifesto {vs} diferem do cabeçalho {t.variable_names}"
                )

    try:
        return StudyInput(
            tables=[t.matrix for t in carregadas],
            individual_names=individuos,
            table_names=manifest.table_names,
            variable_names=[t.variable_names for t in carregadas],
            weights=manifest.weights,
            center=manifest.center,
            normalize_widths=manifest.normalize_widths,
            n_axes=manifest.n_axes,
        )
    except InputError as e:
        raise ManifestError(f"{manifest.path}: {e}") from e


def real_tables(study, degeneracy_tol=0.0):
    """
    Tabelas reais para o STATIS clássico: o centro de cada intervalo.

    Células não degeneradas (largura > degeneracy_tol) são aceitas com aviso.
    """
    tabelas = []
    for nome, x in zip(study.table_names, study.tables):
        largos = int(np.count_nonzero(2 * radius_matrix(x) > degeneracy_tol))
        if largos:
            logger.warning(f"Tabela {nome!r}: {largos} células não degeneradas substituídas pelo centro")
        tabelas.append(centers_matrix(x))
    return tabelas


# ── Documento de resultados ───────────────────────────────────────────────

def _as_interval(m):
    if isinstance(m, IntervalMatrix):
        return m
    return embed_classic(m)


def study_labels(study):
    return {
        'individuals': list(study.individual_names),
        'tables': list(study.table_names),
        'variables': list(study.variable_labels),
    }


def study_metadata(study, method, **extra):
    metadata = {
        'method': method,
        'version': __version__,
        'input_digest': digest_matrices(study.tables),
        'n': study.n,
        'r': study.r,
        'p': list(study.p),
        'options': {
            'center': study.center,
            'normalize_widths': study.normalize_widths,
            'n_axes': study.n_axes,
            'weights': None if study.weights is None else list(study.weights),
        },
    }
    metadata.update(extra)
    return metadata


def results_document(out, labels, metadata=None):
    """Documento de resultados (dict pronto para JSON) de uma execução intervalar ou clássica."""
    tabelas = {nome: _as_interval(getattr(out, nome)).to_pairs() for nome in OUTPUT_TABLES}
    tabelas['W'] = [_as_interval(w).to_pairs() for w in out.W]
    tabelas['Xtilde'] = _as_interval(out.Xtilde).to_pairs()
    tabelas['IND'] = _as_interval(out.IND).to_pairs()
    tabelas['compromise'] = _as_interval(out.compromise).to_pairs()
    return {
        'format': RESULTS_FORMAT,
        'version': RESULTS_VERSION,
        'metadata': dict(metadata or {}),
        'labels': dict(labels),
        'beta': [float(b) for b in np.asarray(out.beta).tolist()],
        'lambda1': float(out.lambda1),
        'n_axes': int(out.n_axes),
        'u': [float(v) for v in np.asarray(out.u).tolist()],
        'eigenvalues': {
            'interstructure': [float(v) for v in out.interstructure.eigenvalues.tolist()],
            'intrastructure': [float(v) for v in out.intrastructure.eigenvalues.tolist()],
        },
        'tables': tabelas,
    }


def write_results(out, directory, labels=None, metadata=None):
    """
    Grava results.json e as tabelas em CSV (tables/<nome>.csv) em `directory`.

    Returns:
        Path do results.json
    """
    if labels is None:
        if getattr(out, 'study', None) is None:
            raise DimensionError("write_results precisa dos rótulos do estudo")
        labels = study_labels(out.study)
    pasta = Path(directory)
    pasta.mkdir(parents=True, exist_ok=True)
    doc = results_document(out, labels, metadata)
    destino = pasta / RESULTS_FILE
    with open(destino, 'w', encoding='utf-8') as f:
        json.dump(doc, f, ensure_ascii=False, indent=2)
        f.write('\n')
    export_tables_csv(doc, pasta / 'tables')
    logger.info(f"Resultados gravados em {destino}")
    return destino


def read_results(path):
    """Lê e valida um results.json."""
    path = Path(path)
    try:
        with open(path, encoding='utf-8') as f:
            doc = json.load(f)
    except FileNotFoundError:
        raise TableFormatError(f"Arquivo de resultados não encontrado: {path}")
    except json.JSONDecodeError as e:
        raise TableFormatError(f"{path}: JSON inválido na linha {e.lineno}, coluna {e.colno}: {e.msg}")
    if not isinstance(doc, dict) or doc.get('format') != RESULTS_FORMAT:
        raise TableFormatError(f"{path}: não é um documento '{RESULTS_FORMAT}'")
    if doc.get('version') != RESULTS_VERSION:
        raise TableFormatError(f"{path}: versão {doc.get('version')!r} não suportada")
    faltando = [t for t in OUTPUT_TABLES if t not in doc.get('tables', {})]
    if faltando:
        raise TableFormatError(f"{path}: tabelas ausentes {faltando}")
    return doc


def matrix_from_document(doc, name, index=None):
    """Reconstrói uma IntervalMatrix do documento; `index` escolhe a W_k quando name='W'."""
    try:
        dados = doc['tables'][name]
        if index is not None:
            dados = dados[index]
    except (KeyError, IndexError, TypeError):
        raise TableFormatError(f"Tabela {name!r} ausente no documento de resultados")
    arr = np.asarray(dados, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise TableFormatError(f"Tabela {name!r} mal formada: esperado linhas de pares [lo, hi]")
    return IntervalMatrix.from_endpoints(arr[:, :, 0], arr[:, :, 1])


def table_labels(doc, name):
    """Rótulos (linhas, colunas) de uma tabela do documento de resultados."""
    rotulos = doc.get('labels', {})
    individuos = rotulos.get('individuals', [])
    tabelas = rotulos.get('tables', [])
    variaveis = rotulos.get('variables', [])
    forma = np.asarray(doc['tables'][name][0] if name == 'W' else doc['tables'][name], dtype=float).shape
    eixos = axis_labels(forma[1]) if len(forma) > 1 else []
    evolucao = [f"{t}:{i}" for t in tabelas for i in individuos]
    linhas = {
        'T': tabelas,
        'Ev': variaveis,
        'Mi': individuos,
        'Ei': evolucao,
        'Xtilde': individuos,
        'IND': evolucao,
        'compromise': individuos,
        'W': individuos,
    }[name]
    colunas = {
        'Xtilde': variaveis,
        'IND': individuos,
        'compromise': individuos,
        'W': individuos,
    }.get(name, eixos)
    if len(linhas) != forma[0] or len(colunas) != forma[1]:
        # documento sem rótulos: numera
        linhas = [f"l{i + 1}" for i in range(forma[0])] if len(linhas) != forma[0] else linhas
        colunas = [f"c{j + 1}" for j in range(forma[1])] if len(colunas) != forma[1] else colunas
    return linhas, colunas


def export_tables_csv(doc, directory):
    """Grava cada tabela do documento como CSV intervalar rotulado."""
    pasta = Path(directory)
    pasta.mkdir(parents=True, exist_ok=True)
    arquivos = []
    for nome in (*OUTPUT_TABLES, 'Xtilde', 'IND', 'compromise'):
        linhas, colunas = table_labels(doc, nome)
        arquivos.append(write_table(pasta / f"{nome}.csv", matrix_from_document(doc, nome), linhas, colunas))
    for k in range(len(doc['tables']['W'])):
        linhas, colunas = table_labels(doc, 'W')
        arquivos.append(write_table(pasta / f"W{k + 1}.csv", matrix_from_document(doc, 'W', k), linhas, colunas))
    return arquivos
