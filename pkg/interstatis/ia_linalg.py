"""
Matrizes de intervalos e as operações matriciais usadas pelo INTERSTATIS.

A matriz de intervalos guarda dois arrays float64 somente-leitura (`lo`, `hi`).
As operações são vetorizadas com numpy, mas usam exatamente as mesmas
fórmulas de `ia_core`, de modo que a versão célula a célula e a vetorizada
coincidem bit a bit.
"""

import logging

import numpy as np

from interstatis import ia_core
from interstatis.errors import (
    ArithmeticOverflowError,
    DimensionError,
    InvalidIntervalError,
    ZeroVarianceError,
)
from interstatis.ia_core import Interval

logger = logging.getLogger(__name__)


def as_real_matrix(a, nome='matriz'):
    """Converte para RealMatrix (ndarray 2-D float64 com entradas finitas)."""
    arr = np.asarray(a, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, 0)
    if arr.ndim != 2:
        raise DimensionError(f"{nome}: esperado array 2-D, recebido {arr.ndim}-D")
    if not np.all(np.isfinite(arr)):
        raise InvalidIntervalError(f"{nome}: contém valores não finitos")
    return arr


def _readonly(arr):
    arr = np.array(arr, dtype=float, copy=True)
    arr.setflags(write=False)
    return arr


class IntervalMatrix:
    """Matriz densa n_rows × n_cols de intervalos, imutável."""

    __slots__ = ('lo', 'hi')

    def __init__(self, lo, hi):
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        if lo.ndim != 2 or hi.ndim != 2:
            raise DimensionError(f"Extremos devem ser 2-D (recebido {lo.ndim}-D e {hi.ndim}-D)")
        if lo.shape != hi.shape:
            raise DimensionError(f"Formas dos extremos diferem: {lo.shape} vs {hi.shape}")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise InvalidIntervalError("Matriz de intervalos com extremos não finitos")
        invertidos = np.argwhere(lo > hi)
        if invertidos.size:
            i, j = invertidos[0]
            raise InvalidIntervalError(
                f"Célula ({i}, {j}) com lo > hi: [{lo[i, j]}, {hi[i, j]}]"
            )
        object.__setattr__(self, 'lo', _readonly(lo))
        object.__setattr__(self, 'hi', _readonly(hi))

    def __setattr__(self, name, value):
        raise AttributeError("IntervalMatrix é imutável")

    # ── Construtores ──────────────────────────────────────────────────────

    @classmethod
    def from_endpoints(cls, lo, hi):
        return cls(lo, hi)

    @classmethod
    def from_intervals(cls, rows):
        """Constrói a partir de uma lista de linhas de `Interval`."""
        rows = [list(r) for r in rows]
        if not rows:
            return cls(np.zeros((0, 0)), np.zeros((0, 0)))
        n_cols = len(rows[0])
        if any(len(r) != n_cols for r in rows):
            raise DimensionError("Linhas com número diferente de células")
        lo = [[c.lo for c in r] for r in rows]
        hi = [[c.hi for c in r] for r in rows]
        return cls(np.array(lo, dtype=float).reshape(len(rows), n_cols),
                   np.array(hi, dtype=float).reshape(len(rows), n_cols))

    @classmethod
    def from_centers_radii(cls, centers, radii):
        centers = as_real_matrix(centers, 'centros')
        radii = as_real_matrix(radii, 'raios')
        if np.any(radii < 0):
            raise InvalidIntervalError("Raios negativos")
        return cls(centers - radii, centers + radii)

    @classmethod
    def zeros(cls, n_rows, n_cols):
        z = np.zeros((n_rows, n_cols))
        return cls(z, z)

    # ── Acesso ────────────────────────────────────────────────────────────

    @property
    def shape(self):
        return self.lo.shape

    @property
    def n_rows(self):
        return self.lo.shape[0]

    @property
    def n_cols(self):
        return self.lo.shape[1]

    def __getitem__(self, key):
        i, j = key
        return Interval(self.lo[i, j], self.hi[i, j])

    def column(self, j):
        return [Interval(l, h) for l, h in zip(self.lo[:, j], self.hi[:, j])]

    def row(self, i):
        return [Interval(l, h) for l, h in zip(self.lo[i, :], self.hi[i, :])]

    def to_pairs(self):
        """Lista de linhas de pares [lo, hi] (ordem por linhas)."""
        return [[[float(l), float(h)] for l, h in zip(rl, rh)] for rl, rh in zip(self.lo, self.hi)]

    def is_degenerate(self, tol=0.0):
        return bool(np.all(self.hi - self.lo <= tol))

    def __eq__(self, other):
        if not isinstance(other, IntervalMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.lo, other.lo) and np.array_equal(self.hi, other.hi)

    __hash__ = None

    def __repr__(self):
        return f"IntervalMatrix({self.n_rows}×{self.n_cols})"


def _checked(lo, hi, operacao):
    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
        raise ArithmeticOverflowError(f"Overflow em {operacao}: resultado não finito")
    return IntervalMatrix(lo, hi)


def _mul_endpoints(alo, ahi, blo, bhi):
    """Extremos do produto IA elemento a elemento (com broadcasting)."""
    p1 = alo * blo
    p2 = alo * bhi
    p3 = ahi * blo
    p4 = ahi * bhi
    lo = np.minimum(np.minimum(p1, p2), np.minimum(p3, p4))
    hi = np.maximum(np.maximum(p1, p2), np.maximum(p3, p4))
    return lo, hi


# ── Produto, transposição, vetorização ────────────────────────────────────

def matmul(a, b):
    """Produto matricial com multiplicação e soma IA.

    (a ⊗ b)[i][j] = Σ_k mul(a[i][k], b[k][j]), somando em ordem crescente de k.
    """
    if a.n_cols != b.n_rows:
        raise DimensionError(f"matmul: {a.n_rows}×{a.n_cols} por {b.n_rows}×{b.n_cols}")
    lo = np.zeros((a.n_rows, b.n_cols))
    hi = np.zeros((a.n_rows, b.n_cols))
    for k in range(a.n_cols):
        tlo, thi = _mul_endpoints(a.lo[:, k][:, None], a.hi[:, k][:, None],
                                  b.lo[k, :][None, :], b.hi[k, :][None, :])
        lo = lo + tlo
        hi = hi + thi
    return _checked(lo, hi, 'produto matricial')


def transpose(a):
    return IntervalMatrix(a.lo.T, a.hi.T)


def vectorize(w):
    """Empilha as linhas de w (n×n) numa coluna n²×1, em ordem de linhas."""
    if w.n_rows != w.n_cols:
        raise DimensionError(f"vectorize espera matriz quadrada, recebeu {w.n_rows}×{w.n_cols}")
    return IntervalMatrix(w.lo.reshape(-1, 1), w.hi.reshape(-1, 1))


def devectorize(v, n):
    """Inverso de `vectorize` para uma coluna de n² intervalos."""
    if v.n_cols != 1 or v.n_rows != n * n:
        raise DimensionError(f"devectorize: esperado {n * n}×1, recebido {v.n_rows}×{v.n_cols}")
    return IntervalMatrix(v.lo.reshape(n, n), v.hi.reshape(n, n))


def ia_dot(u, v):
    """Produto interno IA de duas colunas de mesmo tamanho (soma em ordem)."""
    if u.shape != v.shape:
        raise DimensionError(f"ia_dot: formas {u.shape} e {v.shape}")
    tlo, thi = _mul_endpoints(u.lo.ravel(), u.hi.ravel(), v.lo.ravel(), v.hi.ravel())
    lo = 0.0
    hi = 0.0
    for l, h in zip(tlo, thi):
        lo += l
        hi += h
    return ia_core._checked(lo, hi, 'produto interno')


def trace_inner_product(wi, wj):
    """<W_i, W_j> = trace(W_i ⊗ W_j) = <vec(W_i), vec(W_jᵀ)>."""
    if wi.shape != wj.shape or wi.n_rows != wi.n_cols:
        raise DimensionError(f"trace_inner_product: formas {wi.shape} e {wj.shape}")
    return ia_dot(vectorize(wi), vectorize(transpose(wj)))


# ── Médias e centragem ────────────────────────────────────────────────────

def _check_weights(weights, n):
    w = np.asarray(weights, dtype=float).ravel()
    if w.size != n:
        raise DimensionError(f"Pesos com tamanho {w.size}, esperado {n}")
    if np.any(w <= 0) or not np.all(np.isfinite(w)):
        raise DimensionError("Pesos devem ser positivos e finitos")
    if abs(w.sum() - 1.0) > 1e-9:
        raise DimensionError(f"Pesos devem somar 1 (soma = {w.sum()!r})")
    return w


def column_mean(col, weights=None):
    """Média de uma variável intervalar: médias aritméticas dos extremos.

    Com `weights`, as médias dos extremos são ponderadas (pesos somando 1).
    """
    col = list(col)
    if not col:
        raise DimensionError("Média de coluna vazia")
    lo = np.array([c.lo for c in col], dtype=float)
    hi = np.array([c.hi for c in col], dtype=float)
    if weights is None:
        return Interval(lo.sum() / lo.size, hi.sum() / hi.size)
    w = _check_weights(weights, lo.size)
    return Interval(float(w @ lo), float(w @ hi))


def column_means(x, weights=None):
    """Médias de todas as colunas como um par de vetores (lo, hi)."""
    if x.n_rows == 0:
        raise DimensionError("Matriz sem linhas")
    if weights is None:
        return x.lo.sum(axis=0) / x.n_rows, x.hi.sum(axis=0) / x.n_rows
    w = _check_weights(weights, x.n_rows)
    return w @ x.lo, w @ x.hi


def center_columns(x, weights=None):
    """Subtrai (IA) de cada célula a média intervalar da sua coluna."""
    mlo, mhi = column_means(x, weights)
    return _checked(x.lo - mhi[None, :], x.hi - mlo[None, :], 'centragem')


def normalize_widths(x):
    """Divide cada coluna pelo desvio padrão populacional dos seus centros."""
    c = centers_matrix(x)
    sigma = c.std(axis=0)
    nulos = [j for j, s in enumerate(sigma) if s <= 0]
    if nulos:
        raise ZeroVarianceError(
            f"Não é possível normalizar: colunas {nulos} têm centros constantes", columns=nulos
        )
    fator = 1.0 / sigma
    return _checked(x.lo * fator[None, :], x.hi * fator[None, :], 'normalização')


# ── Centros e raios ───────────────────────────────────────────────────────

def centers_matrix(x):
    return x.lo / 2 + x.hi / 2


def radius_matrix(x):
    return (x.hi - x.lo) / 2


# ── Blocos ────────────────────────────────────────────────────────────────

def hconcat(blocks):
    blocks = list(blocks)
    if not blocks:
        raise DimensionError("hconcat sem blocos")
    linhas = {b.n_rows for b in blocks}
    if len(linhas) != 1:
        raise DimensionError(f"hconcat: blocos com número de linhas diferente {sorted(linhas)}")
    return IntervalMatrix(np.hstack([b.lo for b in blocks]), np.hstack([b.hi for b in blocks]))


def vstack(blocks):
    blocks = list(blocks)
    if not blocks:
        raise DimensionError("vstack sem blocos")
    colunas = {b.n_cols for b in blocks}
    if len(colunas) != 1:
        raise DimensionError(f"vstack: blocos com número de colunas diferente {sorted(colunas)}")
    return IntervalMatrix(np.vstack([b.lo for b in blocks]), np.vstack([b.hi for b in blocks]))


def scale_block(beta, x):
    """β ⊗ X com o produto IA entre real e intervalo."""
    beta = float(beta)
    if not np.isfinite(beta):
        raise ArithmeticOverflowError(f"Escalar não finito: {beta}")
    if beta >= 0:
        return _checked(beta * x.lo, beta * x.hi, 'produto por escalar')
    return _checked(beta * x.hi, beta * x.lo, 'produto por escalar')


def add_matrices(a, b):
    if a.shape != b.shape:
        raise DimensionError(f"Soma de matrizes com formas {a.shape} e {b.shape}")
    return _checked(a.lo + b.lo, a.hi + b.hi, 'soma')


# ── Equivalência com matrizes clássicas ───────────────────────────────────

def embed_classic(a):
    """Matriz clássica como matriz de intervalos degenerados [x, x]."""
    a = as_real_matrix(a)
    return IntervalMatrix(a, a)


def is_equivalent(a, y, tol=0.0):
    """X ≡ Y: cada x_ij coincide com os dois extremos de y_ij (até `tol`)."""
    a = as_real_matrix(a)
    if a.shape != y.shape:
        raise DimensionError(f"is_equivalent: formas {a.shape} e {y.shape}")
    return bool(np.all(np.abs(y.lo - a) <= tol) and np.all(np.abs(y.hi - a) <= tol))


def is_subset_matrix(a, b, tol=0.0):
    """True se cada célula de a está contida na célula correspondente de b."""
    if a.shape != b.shape:
        raise DimensionError(f"is_subset_matrix: formas {a.shape} e {b.shape}")
    return bool(np.all(b.lo - tol <= a.lo) and np.all(a.hi <= b.hi + tol))
