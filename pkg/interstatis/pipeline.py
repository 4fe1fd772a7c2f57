"""
Algoritmo INTERSTATIS (etapas 1-11) com aritmética de intervalos e ACP de Centros.

Interestrutura (1-3), pesos do compromisso e intraestrutura (5-7) e evolução
dos indivíduos (10-11). As etapas de gráfico (4, 8, 9, 12) ficam em `plots`.
"""

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from interstatis.centers_pca import IntervalPcaResult, cpca
from interstatis.config import Config
from interstatis.eigen import standardization_metric
from interstatis.errors import (
    DimensionError,
    InterstatisError,
    ZeroEigenvalueError,
    ZeroVarianceError,
)
from interstatis.ia_linalg import (
    IntervalMatrix,
    add_matrices,
    center_columns,
    centers_matrix,
    hconcat,
    matmul,
    normalize_widths,
    scale_block,
    transpose,
    vectorize,
    vstack,
)
from interstatis.utils import DEFAULT_N_AXES, retained_axes

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StudyInput:
    """Estudo de r tabelas intervalares sobre os mesmos n indivíduos.

    weights é a diagonal de D (None → uniforme 1/n).
    """
    tables: list
    individual_names: list = None
    table_names: list = None
    variable_names: list = None
    weights: tuple = None
    center: bool = True
    normalize_widths: bool = False
    n_axes: int = DEFAULT_N_AXES

    def __post_init__(self):
        tabelas = list(self.tables)
        if not tabelas:
            raise DimensionError("O estudo precisa de ao menos uma tabela")
        if not all(isinstance(t, IntervalMatrix) for t in tabelas):
            raise DimensionError("Todas as tabelas devem ser IntervalMatrix")
        n = tabelas[0].n_rows
        if n == 0 or any(t.n_rows != n for t in tabelas):
            raise DimensionError(
                f"Tabelas com número de indivíduos diferente: {[t.n_rows for t in tabelas]}"
            )
        if any(t.n_cols == 0 for t in tabelas):
            raise DimensionError("Tabela sem variáveis")
        object.__setattr__(self, 'tables', tabelas)

        individuos = list(self.individual_names) if self.individual_names is not None else [
            f"ind{i + 1}" for i in range(n)
        ]
        if len(individuos) != n:
            raise DimensionError(f"{len(individuos)} nomes de indivíduos para {n} linhas")
        object.__setattr__(self, 'individual_names', individuos)

        nomes = list(self.table_names) if self.table_names is not None else [
            f"tabela{k + 1}" for k in range(len(tabelas))
        ]
        if len(nomes) != len(tabelas):
            raise DimensionError(f"{len(nomes)} nomes de tabela para {len(tabelas)} tabelas")
        object.__setattr__(self, 'table_names', nomes)

        if self.variable_names is None:
            variaveis = [[f"v{j + 1}" for j in range(t.n_cols)] for t in tabelas]
        else:
            variaveis = [list(v) for v in self.variable_names]
        if len(variaveis) != len(tabelas) or any(len(v) != t.n_cols for v, t in zip(variaveis, tabelas)):
            raise DimensionError("Nomes de variáveis não conferem com as colunas das tabelas")
        object.__setattr__(self, 'variable_names', variaveis)

        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float).ravel()
            if w.size != n or np.any(w <= 0) or abs(w.sum() - 1.0) > 1e-9:
                raise DimensionError("Pesos D devem ser n valores positivos somando 1")
            object.__setattr__(self, 'weights', tuple(float(v) for v in w))
        retained_axes(self.n_axes, self.l)
        object.__setattr__(self, 'n_axes', DEFAULT_N_AXES if self.n_axes is None else int(self.n_axes))

    @property
    def n(self):
        return self.tables[0].n_rows

    @property
    def r(self):
        return len(self.tables)

    @property
    def p(self):
        return [t.n_cols for t in self.tables]

    @property
    def l(self):
        return sum(self.p)

    @property
    def d(self):
        """Diagonal de D como array."""
        if self.weights is None:
            return np.full(self.n, 1.0 / self.n)
        return np.asarray(self.weights, dtype=float)

    @property
    def variable_labels(self):
        """Rótulos 'tabela:variável' das l colunas de X~."""
        return [f"{t}:{v}" for t, vs in zip(self.table_names, self.variable_names) for v in vs]


@dataclass(frozen=True)
class InterstatisOutput:
    T: IntervalMatrix
    u: np.ndarray
    lambda1: float
    beta: np.ndarray
    W: list
    Xtilde: IntervalMatrix
    Mi: IntervalMatrix
    Ev: IntervalMatrix
    IND: IntervalMatrix
    Ei: IntervalMatrix
    compromise: IntervalMatrix
    interstructure: IntervalPcaResult
    intrastructure: IntervalPcaResult
    n_axes: int = DEFAULT_N_AXES
    study: StudyInput = field(repr=False, default=None)

    def output_tables(self):
        """As quatro tabelas de saída do método, por nome."""
        return {'T': self.T, 'Ev': self.Ev, 'Mi': self.Mi, 'Ei': self.Ei}


class Interstructure(NamedTuple):
    T: IntervalMatrix
    u: np.ndarray
    lambda1: float
    pca: IntervalPcaResult


class Intrastructure(NamedTuple):
    Mi: IntervalMatrix
    Ev: IntervalMatrix
    pca: IntervalPcaResult
    n_axes: int = DEFAULT_N_AXES


@contextmanager
def _step(numero):
    """Marca com o número da etapa qualquer erro do INTERSTATIS que escape."""
    try:
        yield
    except InterstatisError as e:
        if e.step is None:
            e.step = numero
        raise


# ── Interestrutura (etapas 1-3) ───────────────────────────────────────────

def compute_w(tables, max_workers=None):
    """
    W_i = X_i ⊗ X_iᵀ para cada tabela.

    Os r produtos são independentes e rodam em paralelo; o resultado mantém a
    ordem das tabelas.
    """
    tables = list(tables)
    max_workers = min(len(tables), max_workers or Config.MAX_WORKERS)
    if max_workers <= 1:
        return [matmul(x, transpose(x)) for x in tables]

    resultados = [None] * len(tables)
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        futures = {executor.submit(matmul, x, transpose(x)): k for k, x in enumerate(tables)}
        for future in as_completed(futures):
            k = futures[future]
            try:
                resultados[k] = future.result()
            except InterstatisError:
                logger.error(f"Erro ao calcular W da tabela {k + 1}")
                raise
    return resultados


def build_interstructure_matrix(w_list):
    """X = [vec W_1 | ... | vec W_r], n²×r."""
    w_list = list(w_list)
    if not w_list:
        raise DimensionError("Lista de matrizes W vazia")
    formas = {w.shape for w in w_list}
    if len(formas) != 1:
        raise DimensionError(f"Matrizes W com formas diferentes: {sorted(formas)}")
    return hconcat([vectorize(w) for w in w_list])


def interstructure(x, n, weights=None, reference=None):
    """
    CPCA do triplo (X, D_{1/σ²}, (1/n²) I) sobre a matriz n²×r da interestrutura.

    As colunas são centradas (IA) antes da ACP normada, de modo que T contém
    correlações entre tabelas. Com D não uniforme os n² pesos são d_i·d_j.

    Args:
        x: IntervalMatrix n²×r
        n: número de indivíduos
        weights: diagonal de D (None → uniforme)
        reference: Interstructure de uma execução anterior cujos parâmetros
                   reais (métrica, eixos, u, λ1) são reutilizados

    Returns:
        Interstructure(T, u, lambda1, pca)
    """
    if x.n_rows != n * n:
        raise DimensionError(f"Matriz da interestrutura com {x.n_rows} linhas, esperado {n * n}")
    if weights is None:
        pesos = np.full(n * n, 1.0 / (n * n))
        centrada = center_columns(x)
    else:
        d = np.asarray(weights, dtype=float).ravel()
        pesos = np.outer(d, d).reshape(-1)
        centrada = center_columns(x, pesos)

    if reference is not None:
        resultado = cpca(centrada, None, None, reference=reference.pca.centers)
    else:
        try:
            metrica = standardization_metric(centers_matrix(centrada), pesos)
        except ZeroVarianceError as e:
            tabelas = [c + 1 for c in e.columns]
            raise ZeroVarianceError(
                f"Tabelas cujos produtos W têm centros constantes (σ = 0): {tabelas}",
                columns=e.columns,
            ) from e
        resultado = cpca(centrada, metrica, pesos, first_axis_nonnegative=True)

    lambda1 = resultado.first_eigenvalue
    if not lambda1 > 0:
        raise ZeroEigenvalueError(f"Primeiro autovalor da interestrutura não positivo: {lambda1!r}")
    u = resultado.first_eigenvector
    logger.info(f"Interestrutura: λ1={lambda1:.6g}, u={np.round(u, 6).tolist()}")
    return Interstructure(T=resultado.var_coords, u=u, lambda1=lambda1, pca=resultado)


# ── Compromisso e intraestrutura (etapas 5-7) ─────────────────────────────

def compute_beta(u, lambda1):
    """β = u / √λ1."""
    lambda1 = float(lambda1)
    if not lambda1 > 0:
        raise ZeroEigenvalueError(f"β exige λ1 > 0 (recebido {lambda1!r})")
    return np.asarray(u, dtype=float) / np.sqrt(lambda1)


def build_xtilde(tables, beta):
    """X~ = [β_1 ⊗ X_1 | ... | β_r ⊗ X_r], n×l."""
    tables = list(tables)
    beta = np.asarray(beta, dtype=float).ravel()
    if beta.size != len(tables):
        raise DimensionError(f"β com {beta.size} pesos para {len(tables)} tabelas")
    return hconcat([scale_block(b, x) for b, x in zip(beta, tables)])


def intrastructure(xtilde, weights=None, n_axes=DEFAULT_N_AXES, reference=None):
    """
    CPCA de (X~, I_l, D).

    Mi são as componentes intervalares das linhas (n×l) e Ev as coordenadas
    intervalares das variáveis (l×l), sempre com todos os eixos. n_axes só
    define quantos eixos entram nos gráficos: min(n_axes, l).
    """
    n, l = xtilde.shape
    k = retained_axes(n_axes, l)
    d = np.full(n, 1.0 / n) if weights is None else np.asarray(weights, dtype=float).ravel()
    if reference is not None:
        resultado = cpca(xtilde, None, None, reference=reference.pca.centers)
    else:
        resultado = cpca(xtilde, np.ones(l), d)
    return Intrastructure(Mi=resultado.row_components, Ev=resultado.var_coords, pca=resultado, n_axes=k)


def compromise_matrix(w_list, beta):
    """Σ β_k ⊗ W_k."""
    w_list = list(w_list)
    beta = np.asarray(beta, dtype=float).ravel()
    if beta.size != len(w_list):
        raise DimensionError(f"β com {beta.size} pesos para {len(w_list)} matrizes W")
    total = scale_block(beta[0], w_list[0])
    for b, w in zip(beta[1:], w_list[1:]):
        total = add_matrices(total, scale_block(b, w))
    return total


# ── Evolução dos indivíduos (etapas 10-11) ────────────────────────────────

def build_ind(w_list):
    """IND = [W_1; W_2; ...; W_r], rn×n."""
    return vstack(w_list)


def individuals_evolution(ind, mi):
    """E_i = IND ⊗ M_i."""
    if ind.n_cols != mi.n_rows:
        raise DimensionError(f"IND {ind.n_rows}×{ind.n_cols} incompatível com M_i {mi.n_rows}×{mi.n_cols}")
    return matmul(ind, mi)


# ── Execução completa ─────────────────────────────────────────────────────

def preprocess(study):
    """Normalização de larguras e centragem, conforme as flags do estudo."""
    tabelas = study.tables
    if study.normalize_widths:
        tabelas = [normalize_widths(x) for x in tabelas]
    if study.center:
        pesos = None if study.weights is None else study.d
        tabelas = [center_columns(x, pesos) for x in tabelas]
    return tabelas


def run(study, reference=None):
    """
    Executa o INTERSTATIS completo.

    Args:
        study: StudyInput
        reference: InterstatisOutput anterior; quando dado, β, λ1, u e as bases
                   das duas ACP de centros são reutilizados e o estudo é
                   projetado sobre essa solução

    Returns:
        InterstatisOutput com as tabelas de saída e todos os intermediários
    """
    n, r = study.n, study.r
    pesos = None if study.weights is None else study.d
    logger.info(f"INTERSTATIS: n={n}, r={r}, p={study.p}, l={study.l}")
    if reference is not None:
        _check_reference(study, reference)

    with _step(0):
        tabelas = preprocess(study)

    with _step(1):
        w_list = compute_w(tabelas)
        logger.info(f"Etapa 1: {len(w_list)} matrizes W {n}×{n}")

    with _step(2):
        x_inter = build_interstructure_matrix(w_list)

    with _step(3):
        inter = interstructure(
            x_inter, n, pesos,
            reference=None if reference is None else Interstructure(
                reference.T, reference.u, reference.lambda1, reference.interstructure),
        )

    with _step(5):
        if reference is None:
            beta = compute_beta(inter.u, inter.lambda1)
        else:
            beta = np.asarray(reference.beta, dtype=float)
        logger.info(f"Etapa 5: β={np.round(beta, 6).tolist()}")

    with _step(6):
        xtilde = build_xtilde(tabelas, beta)

    with _step(7):
        intra = intrastructure(
            xtilde, study.d, study.n_axes,
            reference=None if reference is None else Intrastructure(
                reference.Mi, reference.Ev, reference.intrastructure),
        )

    with _step(9):
        compromisso = compromise_matrix(w_list, beta)

    with _step(10):
        ind = build_ind(w_list)

    with _step(11):
        ei = individuals_evolution(ind, intra.Mi)
        logger.info(f"Etapa 11: E_i {ei.n_rows}×{ei.n_cols}")

    return InterstatisOutput(
        T=inter.T,
        u=inter.u,
        lambda1=inter.lambda1,
        beta=beta,
        W=w_list,
        Xtilde=xtilde,
        Mi=intra.Mi,
        Ev=intra.Ev,
        IND=ind,
        Ei=ei,
        compromise=compromisso,
        interstructure=inter.pca,
        intrastructure=intra.pca,
        n_axes=intra.n_axes,
        study=study,
    )


def _check_reference(study, reference):
    ref = reference.study
    if ref is None:
        return
    if (ref.n, ref.r, ref.p) != (study.n, study.r, study.p):
        raise DimensionError(
            f"Estudo (n={study.n}, r={study.r}, p={study.p}) incompatível com a referência "
            f"(n={ref.n}, r={ref.r}, p={ref.p})"
        )
