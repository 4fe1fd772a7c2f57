"""
ACP de Centros (CPCA) para triplos intervalares.

A ACP clássica roda sobre os centros; cada indivíduo recebe como componente o
intervalo exato da projeção linear do seu hipercubo, e as variáveis recebem
coordenadas intervalares pela fórmula de transição calculada em aritmética
de intervalos.
"""

import itertools
import logging
from dataclasses import dataclass

import numpy as np

from interstatis.eigen import PcaResult, pca_triplet
from interstatis.errors import ArithmeticOverflowError, DimensionError
from interstatis.ia_core import Interval
from interstatis.ia_linalg import IntervalMatrix, centers_matrix

logger = logging.getLogger(__name__)

MAX_ORACLE_COLUMNS = 20


@dataclass(frozen=True)
class IntervalPcaResult:
    """Resultado da CPCA.

    eigenvalues/axes vêm da ACP dos centros (`centers`). row_components é n×k e
    var_coords é p×k, com k = número de eixos retidos.
    """
    eigenvalues: np.ndarray
    axes: np.ndarray
    first_eigenvalue: float
    first_eigenvector: np.ndarray
    row_components: IntervalMatrix
    var_coords: IntervalMatrix
    rank_deficient: np.ndarray
    centers: PcaResult

    @property
    def n_axes(self):
        return self.row_components.n_cols


def _projection_coefficients(pca, n_axes):
    # c_jk = m_j · v_jk
    return pca.metric[:, None] * pca.axes[:, :n_axes]


def project_intervals(x, pca, n_axes=None):
    """
    Projeta uma matriz de intervalos sobre uma ACP de centros já ajustada.

    Args:
        x: IntervalMatrix n×p (mesmas colunas da ACP)
        pca: PcaResult dos centros
        n_axes: eixos retidos (padrão: todos)

    Returns:
        (row_components n×k, var_coords p×k)
    """
    p = pca.axes.shape[0]
    if x.n_cols != p:
        raise DimensionError(f"Projeção: matriz com {x.n_cols} colunas, ACP com {p} variáveis")
    if x.n_rows != pca.weights.size:
        raise DimensionError(f"Projeção: matriz com {x.n_rows} linhas, ACP com {pca.weights.size} pesos")
    k = pca.axes.shape[1] if n_axes is None else int(n_axes)
    if not 1 <= k <= pca.axes.shape[1]:
        raise DimensionError(f"n_axes={k} fora do intervalo [1, {pca.axes.shape[1]}]")

    # Componentes das linhas: faixa exata da forma linear sobre o hipercubo
    c = _projection_coefficients(pca, k)
    g = x.lo[:, :, None] * c[None, :, :]
    h = x.hi[:, :, None] * c[None, :, :]
    comp_lo = np.minimum(g, h).sum(axis=1)
    comp_hi = np.maximum(g, h).sum(axis=1)

    # Coordenadas das variáveis: fórmula de transição em IA
    # Σ_i w_i · (x_ij ⊗ [s_ik, s_ik]), depois × 1/√λ_k e × √m_j
    centros = centers_matrix(x)
    s = centros @ (pca.metric[:, None] * pca.axes[:, :k])
    p1 = x.lo[:, :, None] * s[:, None, :]
    p2 = x.hi[:, :, None] * s[:, None, :]
    w = pca.weights[:, None, None]
    soma_lo = (w * np.minimum(p1, p2)).sum(axis=0)
    soma_hi = (w * np.maximum(p1, p2)).sum(axis=0)

    lam = pca.eigenvalues[:k]
    ativo = ~pca.rank_deficient[:k]
    inv_raiz = np.zeros(k)
    inv_raiz[ativo] = 1.0 / np.sqrt(lam[ativo])
    fator = np.sqrt(pca.metric)[:, None] * inv_raiz[None, :]
    coord_lo = fator * soma_lo
    coord_hi = fator * soma_hi

    for arr in (comp_lo, comp_hi, coord_lo, coord_hi):
        if not np.all(np.isfinite(arr)):
            raise ArithmeticOverflowError("Overflow na projeção da CPCA")
    return IntervalMatrix(comp_lo, comp_hi), IntervalMatrix(coord_lo, coord_hi)


def cpca(x, metric_diag, weights_diag, n_axes=None, *, first_axis_nonnegative=False, reference=None):
    """
    ACP de Centros do triplo (X, diag(metric), diag(weights)).

    Args:
        x: IntervalMatrix n×p
        metric_diag, weights_diag: diagonais de M e D
        n_axes: eixos retidos nas saídas intervalares (padrão: p)
        first_axis_nonnegative: convenção de sinal do 1º eixo
        reference: PcaResult de centros a reutilizar em vez de reestimar

    Returns:
        IntervalPcaResult
    """
    if reference is None:
        pca = pca_triplet(centers_matrix(x), metric_diag, weights_diag,
                          first_axis_nonnegative=first_axis_nonnegative)
    else:
        pca = reference
    componentes, coords = project_intervals(x, pca, n_axes)
    if np.any(pca.rank_deficient[:componentes.n_cols]):
        logger.debug("CPCA: eixos com autovalor nulo recebem coordenadas [0, 0]")
    return IntervalPcaResult(
        eigenvalues=pca.eigenvalues,
        axes=pca.axes,
        first_eigenvalue=pca.first_eigenvalue,
        first_eigenvector=pca.first_eigenvector,
        row_components=componentes,
        var_coords=coords,
        rank_deficient=pca.rank_deficient,
        centers=pca,
    )


def vertex_projection_oracle(x, axes, metric_diag, row, axis):
    """
    Mínimo e máximo da projeção sobre os 2^p vértices do hipercubo de uma linha.

    Serve de oráculo para a forma fechada de `project_intervals`.
    """
    p = x.n_cols
    if p > MAX_ORACLE_COLUMNS:
        raise DimensionError(f"Oráculo de vértices limitado a {MAX_ORACLE_COLUMNS} colunas (recebeu {p})")
    axes = np.asarray(axes, dtype=float)
    m = np.asarray(metric_diag, dtype=float).ravel()
    c = m * axes[:, axis]
    bits = np.array(list(itertools.product((False, True), repeat=p)), dtype=bool).reshape(-1, p)
    vertices = np.where(bits, x.hi[row, :][None, :], x.lo[row, :][None, :])
    projecoes = vertices @ c
    return Interval(float(projecoes.min()), float(projecoes.max()))
