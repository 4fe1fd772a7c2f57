"""
Autodecomposição simétrica (Jacobi cíclico) e ACP de um triplo (X, M, D).

As matrizes do método são pequenas, densas e simétricas; o Jacobi cíclico
resolve o espectro completo com resíduos na ordem do épsilon da máquina.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from interstatis.config import Config
from interstatis.errors import (
    ArithmeticOverflowError,
    AsymmetricMatrixError,
    ConvergenceError,
    DimensionError,
    ZeroVarianceError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SymEigen:
    """Espectro de uma matriz simétrica.

    values: autovalores em ordem decrescente
    vectors: coluna j = autovetor unitário de values[j]; a entrada de maior
             módulo de cada coluna é positiva (empate → menor índice)
    sweeps: varreduras de Jacobi usadas
    """
    values: np.ndarray
    vectors: np.ndarray
    sweeps: int = 0


@dataclass(frozen=True)
class PcaResult:
    """Resultado da ACP do triplo (X, diag(metric), diag(weights)).

    eigenvalues: autovalores de V·M (decrescentes, truncados em zero)
    axes: eixos principais no espaço das variáveis (colunas M-ortonormais)
    eigenvectors: autovetores unitários de M^½ V M^½
    row_scores: componentes principais das linhas (X·M·axes)
    var_coords: coordenadas das variáveis (√λ_k · axes[j][k] · √m_j)
    """
    eigenvalues: np.ndarray
    axes: np.ndarray
    eigenvectors: np.ndarray
    row_scores: np.ndarray
    var_coords: np.ndarray
    metric: np.ndarray
    weights: np.ndarray
    rank_deficient: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))

    @property
    def first_eigenvalue(self):
        return float(self.eigenvalues[0])

    @property
    def first_eigenvector(self):
        return self.eigenvectors[:, 0].copy()

    @property
    def n_axes(self):
        return self.axes.shape[1]


def _sign_convention(vectors):
    """Torna positiva a entrada de maior módulo de cada coluna."""
    for j in range(vectors.shape[1]):
        idx = int(np.argmax(np.abs(vectors[:, j])))
        if vectors[idx, j] < 0:
            vectors[:, j] = -vectors[:, j]
    return vectors


def jacobi_eigen(a, tol=None, max_sweeps=None):
    """
    Autovalores e autovetores de uma matriz simétrica pelo método de Jacobi cíclico.

    Varre os pares (p, q) acima da diagonal anulando a[p, q] com uma rotação
    de Givens, até que a norma de Frobenius fora da diagonal fique abaixo de
    tol·‖a‖_F.

    Args:
        a: matriz quadrada simétrica (tolerância 1e-10 relativa)
        tol: tolerância relativa de convergência (padrão Config.JACOBI_TOL)
        max_sweeps: limite de varreduras (padrão Config.JACOBI_MAX_SWEEPS)

    Returns:
        SymEigen com autovalores decrescentes e autovetores em colunas
    """
    tol = Config.JACOBI_TOL if tol is None else tol
    max_sweeps = Config.JACOBI_MAX_SWEEPS if max_sweeps is None else max_sweeps

    a = np.array(a, dtype=float, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"jacobi_eigen espera matriz quadrada, recebeu forma {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ArithmeticOverflowError("jacobi_eigen: matriz com valores não finitos (inf ou nan)")
    n = a.shape[0]
    norma = float(np.linalg.norm(a))
    if not np.allclose(a, a.T, rtol=0.0, atol=1e-10 * max(1.0, norma)):
        raise AsymmetricMatrixError("jacobi_eigen: matriz não é simétrica")
    a = (a + a.T) / 2

    v = np.eye(n)
    limite = tol * norma
    sweeps = 0

    def fora_da_diagonal():
        return math.sqrt(2.0 * float(np.sum(np.triu(a, 1) ** 2)))

    while fora_da_diagonal() > limite:
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi não convergiu após {max_sweeps} varreduras (off = {fora_da_diagonal():.3e})"
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.hypot(1.0, theta))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                # a ← Jᵀ a J
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                lin_p = a[p, :].copy()
                lin_q = a[q, :].copy()
                a[p, :] = c * lin_p - s * lin_q
                a[q, :] = s * lin_p + c * lin_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
        sweeps += 1

    logger.debug(f"Jacobi convergiu em {sweeps} varreduras (n={n})")
    valores = np.diag(a).copy()
    ordem = np.argsort(-valores, kind='stable')
    valores = valores[ordem]
    vetores = _sign_convention(v[:, ordem].copy())
    return SymEigen(values=valores, vectors=vetores, sweeps=sweeps)


def _check_diag(valores, n, nome):
    d = np.asarray(valores, dtype=float).ravel()
    if d.size != n:
        raise DimensionError(f"{nome}: tamanho {d.size}, esperado {n}")
    if not np.all(np.isfinite(d)) or np.any(d <= 0):
        raise DimensionError(f"{nome}: entradas devem ser positivas e finitas")
    return d


def standardization_metric(centers, weights):
    """Diagonal de D_{1/σ²}: σ_k é o desvio padrão populacional (ponderado) da coluna k.

    Coluna com σ = 0 gera ZeroVarianceError indicando as colunas.
    """
    centers = np.asarray(centers, dtype=float)
    w = np.asarray(weights, dtype=float).ravel()
    media = w @ centers
    variancia = w @ (centers - media[None, :]) ** 2
    # resíduo de arredondamento da média em coluna constante não conta como variância
    escala = np.max(np.abs(centers), axis=0) if centers.size else np.zeros(centers.shape[1])
    nulas = [j for j, (s2, e) in enumerate(zip(variancia, escala)) if not s2 > (1e-12 * e) ** 2]
    if nulas:
        raise ZeroVarianceError(f"Colunas com variância nula: {nulas}", columns=nulas)
    return 1.0 / variancia


def pca_triplet(x, metric_diag, weights_diag, *, first_axis_nonnegative=False, rank_tol=None):
    """
    ACP do triplo (X, M, D) com M e D diagonais.

    Autodecompõe o operador simétrico M^½ V M^½ (V = Xᵀ D X) e leva os eixos de
    volta por M^-½. X deve chegar já centrado; a função não centra.

    Args:
        x: matriz n×p
        metric_diag: diagonal de M (p valores positivos)
        weights_diag: diagonal de D (n valores positivos somando 1)
        first_axis_nonnegative: inverte o 1º eixo para que o autovetor tenha soma ≥ 0
        rank_tol: autovalores < rank_tol·λ_max viram 0 (padrão Config.RANK_TOL)

    Returns:
        PcaResult
    """
    rank_tol = Config.RANK_TOL if rank_tol is None else rank_tol
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise DimensionError(f"pca_triplet espera matriz 2-D, recebeu {x.ndim}-D")
    n, p = x.shape
    m = _check_diag(metric_diag, p, 'métrica')
    w = _check_diag(weights_diag, n, 'pesos')
    if abs(w.sum() - 1.0) > 1e-9:
        raise DimensionError(f"pesos devem somar 1 (soma = {w.sum()!r})")

    v = x.T @ (w[:, None] * x)
    raiz_m = np.sqrt(m)
    s = raiz_m[:, None] * v * raiz_m[None, :]
    s = (s + s.T) / 2

    eig = jacobi_eigen(s)
    valores = eig.values.copy()
    q = eig.vectors.copy()

    lam_max = max(float(valores[0]), 0.0) if valores.size else 0.0
    deficiente = valores < rank_tol * lam_max
    if lam_max == 0.0:
        deficiente = np.ones_like(valores, dtype=bool)
    valores[deficiente] = 0.0
    if np.any(deficiente):
        logger.debug(f"ACP com posto deficiente: {int(deficiente.sum())} de {p} autovalores zerados")

    if first_axis_nonnegative and p:
        if q[:, 0].sum() < 0:
            q[:, 0] = -q[:, 0]
        if np.any(q[:, 0] < 0):
            logger.warning(f"Primeiro autovetor com sinais mistos: {np.round(q[:, 0], 6).tolist()}")

    eixos = q / raiz_m[:, None]
    componentes = x @ (m[:, None] * eixos)
    coords = np.sqrt(valores)[None, :] * q

    return PcaResult(
        eigenvalues=valores,
        axes=eixos,
        eigenvectors=q,
        row_scores=componentes,
        var_coords=coords,
        metric=m,
        weights=w,
        rank_deficient=deficiente,
    )
