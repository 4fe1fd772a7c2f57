"""
STATIS clássico (dados reais), na formulação por ACP de tabelas de produtos W.

É o caso particular do INTERSTATIS com intervalos degenerados e serve de
oráculo para a equivalência. Compartilha apenas `eigen.pca_triplet` com o
caminho intervalar; todo o resto é álgebra real com numpy.
"""

import logging
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from interstatis.eigen import PcaResult, pca_triplet, standardization_metric
from interstatis.errors import (
    DimensionError,
    InterstatisError,
    ZeroEigenvalueError,
    ZeroVarianceError,
)
from interstatis.ia_linalg import as_real_matrix
from interstatis.utils import DEFAULT_N_AXES, retained_axes

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClassicOptions:
    center: bool = True
    normalize_widths: bool = False
    weights: tuple = None
    n_axes: int = DEFAULT_N_AXES


@dataclass(frozen=True)
class ClassicStatisOutput:
    T: np.ndarray
    u: np.ndarray
    lambda1: float
    beta: np.ndarray
    W: tuple
    Xtilde: np.ndarray
    Mi: np.ndarray
    Ev: np.ndarray
    IND: np.ndarray
    Ei: np.ndarray
    compromise: np.ndarray
    interstructure: PcaResult
    intrastructure: PcaResult
    n_axes: int = DEFAULT_N_AXES


@contextmanager
def _step(numero):
    try:
        yield
    except InterstatisError as e:
        if e.step is None:
            e.step = numero
        raise


def _center(x, weights):
    if weights is None:
        return x - x.mean(axis=0)[None, :]
    return x - (weights @ x)[None, :]


def run_classic(tables, options=None):
    """
    Executa as etapas 1-11 com aritmética real.

    Args:
        tables: lista de matrizes reais n×p_k
        options: ClassicOptions (centragem, normalização, pesos D, eixos dos gráficos)

    Returns:
        ClassicStatisOutput
    """
    options = options or ClassicOptions()
    tabelas = [as_real_matrix(t, f'tabela {k + 1}') for k, t in enumerate(tables)]
    if not tabelas:
        raise DimensionError("É necessária ao menos uma tabela")
    n = tabelas[0].shape[0]
    if n == 0 or any(t.shape[0] != n for t in tabelas):
        raise DimensionError(f"Tabelas com número de linhas diferente: {[t.shape[0] for t in tabelas]}")
    r = len(tabelas)

    if options.weights is None:
        d = np.full(n, 1.0 / n)
        pesos_centragem = None
    else:
        d = np.asarray(options.weights, dtype=float)
        pesos_centragem = d

    with _step(0):
        if options.normalize_widths:
            for k, t in enumerate(tabelas):
                sigma = t.std(axis=0)
                if np.any(sigma <= 0):
                    raise ZeroVarianceError(f"Tabela {k + 1}: coluna constante impede a normalização",
                                            columns=np.flatnonzero(sigma <= 0).tolist())
            tabelas = [t / t.std(axis=0)[None, :] for t in tabelas]
        if options.center:
            tabelas = [_center(t, pesos_centragem) for t in tabelas]

    with _step(1):
        w_list = tuple(t @ t.T for t in tabelas)

    with _step(2):
        x_inter = np.column_stack([w.reshape(-1) for w in w_list])

    with _step(3):
        pesos_inter = np.outer(d, d).reshape(-1)
        x_inter = _center(x_inter, None if pesos_centragem is None else pesos_inter)
        try:
            metrica = standardization_metric(x_inter, pesos_inter)
        except ZeroVarianceError as e:
            raise ZeroVarianceError(
                f"Tabelas com produtos W constantes: {[c + 1 for c in e.columns]}", columns=e.columns
            ) from e
        inter = pca_triplet(x_inter, metrica, pesos_inter, first_axis_nonnegative=True)
        lambda1 = inter.first_eigenvalue
        u = inter.first_eigenvector

    with _step(5):
        if not lambda1 > 0:
            raise ZeroEigenvalueError(f"Primeiro autovalor não positivo: {lambda1!r}")
        beta = u / np.sqrt(lambda1)

    with _step(6):
        xtilde = np.hstack([b * t for b, t in zip(beta, tabelas)])

    with _step(7):
        l = xtilde.shape[1]
        intra = pca_triplet(xtilde, np.ones(l), d)
        k = retained_axes(options.n_axes, l)
        mi = intra.row_scores
        ev = intra.var_coords

    with _step(9):
        compromise = sum(b * w for b, w in zip(beta, w_list))

    with _step(10):
        ind = np.vstack(w_list)

    with _step(11):
        ei = ind @ mi

    logger.info(f"STATIS clássico concluído: n={n}, r={r}, l={l}, λ1={lambda1:.6g}")
    return ClassicStatisOutput(
        T=inter.var_coords,
        u=u,
        lambda1=lambda1,
        beta=beta,
        W=w_list,
        Xtilde=xtilde,
        Mi=mi,
        Ev=ev,
        IND=ind,
        Ei=ei,
        compromise=compromise,
        interstructure=inter,
        intrastructure=intra,
        n_axes=k,
    )
