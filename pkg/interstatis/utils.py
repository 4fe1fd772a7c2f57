import hashlib

import numpy as np

from interstatis.errors import DimensionError

DEFAULT_N_AXES = 2


def format_number(valor):
    """Representação decimal mais curta que reconstrói o float exatamente."""
    return repr(float(valor))


def format_interval_cell(lo, hi):
    """Célula de CSV: "lo:hi", ou só "x" quando o intervalo é degenerado."""
    if float(lo) == float(hi):
        return format_number(lo)
    return f"{format_number(lo)}:{format_number(hi)}"


def digest_matrices(matrices):
    """
    SHA-256 dos extremos de uma sequência de matrizes de intervalos.

    A forma entra no hash junto com os bytes float64, então matrizes com os
    mesmos valores e formas diferentes não colidem.
    """
    h = hashlib.sha256()
    for m in matrices:
        h.update(np.asarray(m.shape, dtype=np.int64).tobytes())
        h.update(np.ascontiguousarray(m.lo, dtype='<f8').tobytes())
        h.update(np.ascontiguousarray(m.hi, dtype='<f8').tobytes())
    return h.hexdigest()


def axis_labels(k):
    return [f"eixo{j + 1}" for j in range(k)]


def parse_axes(texto):
    """'1,2' → (1, 2). Índices começam em 1."""
    partes = [p.strip() for p in str(texto).split(',') if p.strip()]
    if len(partes) != 2:
        raise ValueError(f"Eixos devem ser dois inteiros separados por vírgula (recebido {texto!r})")
    return int(partes[0]), int(partes[1])


def retained_axes(n_axes, l):
    """
    Eixos da intraestrutura usados nos gráficos: min(n_axes, l).

    As saídas continuam completas (l eixos); n_axes só limita os planos
    principais desenhados.
    """
    if n_axes is None:
        n_axes = DEFAULT_N_AXES
    if isinstance(n_axes, bool) or int(n_axes) != n_axes or n_axes < 1:
        raise DimensionError(f"n_axes deve ser um inteiro ≥ 1 (recebido {n_axes!r})")
    return min(int(n_axes), int(l))
