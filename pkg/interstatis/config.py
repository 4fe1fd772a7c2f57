import os
import logging
from dotenv import load_dotenv

load_dotenv()
_log = logging.getLogger(__name__)


def _float_env(nome, padrao):
    """Lê um float do ambiente; valor inválido cai no padrão com aviso."""
    valor = os.environ.get(nome)
    if valor is None or not str(valor).strip():
        return padrao
    try:
        return float(valor)
    except ValueError:
        _log.warning('Valor inválido para %s (%r). Usando %s', nome, valor, padrao)
        return padrao


def _int_env(nome, padrao):
    valor = os.environ.get(nome)
    if valor is None or not str(valor).strip():
        return padrao
    try:
        return int(valor)
    except ValueError:
        _log.warning('Valor inválido para %s (%r). Usando %s', nome, valor, padrao)
        return padrao


class Config:
    LOG_LEVEL = os.environ.get('INTERSTATIS_LOG_LEVEL', 'INFO').upper()
    OUTPUT_DIR = os.environ.get('INTERSTATIS_OUTPUT_DIR') or 'resultados'

    # Solver de Jacobi e corte de posto
    JACOBI_TOL = _float_env('INTERSTATIS_JACOBI_TOL', 1e-13)
    JACOBI_MAX_SWEEPS = _int_env('INTERSTATIS_JACOBI_MAX_SWEEPS', 100)
    RANK_TOL = _float_env('INTERSTATIS_RANK_TOL', 1e-12)

    DEGENERACY_TOL = _float_env('INTERSTATIS_DEGENERACY_TOL', 0.0)
    MAX_WORKERS = max(1, _int_env('INTERSTATIS_MAX_WORKERS', 4))

    PLOT_WIDTH = _int_env('INTERSTATIS_PLOT_WIDTH', 600)
    PLOT_HEIGHT = _int_env('INTERSTATIS_PLOT_HEIGHT', 600)
