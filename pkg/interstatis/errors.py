"""
Exceções do INTERSTATIS.

Toda falha carrega um código de saída para a linha de comando e, quando
ocorre dentro do algoritmo, o número da etapa (1-11) que a gerou.
"""

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERICAL = 2

STEP_NAMES = {
    0: 'pré-processamento',
    1: 'matrizes W',
    2: 'matriz da interestrutura',
    3: 'interestrutura',
    5: 'pesos beta',
    6: 'matriz X~',
    7: 'intraestrutura',
    9: 'compromisso',
    10: 'matriz IND',
    11: 'evolução dos indivíduos',
}


class InterstatisError(Exception):
    """Erro base. `step` é preenchido pelo pipeline quando aplicável."""

    exit_code = EXIT_INPUT

    def __init__(self, message, step=None):
        super().__init__(message)
        self.message = message
        self.step = step

    def __str__(self):
        if self.step is None:
            return self.message
        nome = STEP_NAMES.get(self.step)
        if nome:
            return f"etapa {self.step} ({nome}): {self.message}"
        return f"etapa {self.step}: {self.message}"


# ── Erros de entrada (código 1) ───────────────────────────────────────────

class InputError(InterstatisError):
    exit_code = EXIT_INPUT


class InvalidIntervalError(InputError, ValueError):
    """Extremos não finitos ou lo > hi."""


class CellParseError(InputError, ValueError):
    """Célula de CSV mal formada; guarda a localização (linha, coluna)."""

    def __init__(self, message, row=None, column=None, path=None):
        local = []
        if path is not None:
            local.append(str(path))
        if row is not None:
            local.append(f"linha {row}")
        if column is not None:
            local.append(f"coluna '{column}'")
        if local:
            message = f"{', '.join(local)}: {message}"
        super().__init__(message)
        self.row = row
        self.column = column
        self.path = path


class TableFormatError(InputError, ValueError):
    pass


class ManifestError(InputError, ValueError):
    pass


class DimensionError(InputError, ValueError):
    pass


class PlotError(InputError, ValueError):
    pass


# ── Erros numéricos (código 2) ────────────────────────────────────────────

class NumericalError(InterstatisError, ArithmeticError):
    exit_code = EXIT_NUMERICAL


class ArithmeticOverflowError(NumericalError, OverflowError):
    pass


class IntervalDivisionError(NumericalError, ZeroDivisionError):
    pass


class NegativeSqrtError(NumericalError, ValueError):
    pass


class ConvergenceError(NumericalError):
    pass


class AsymmetricMatrixError(NumericalError, ValueError):
    pass


class ZeroVarianceError(NumericalError):
    """Coluna com desvio padrão nulo; `columns` lista os índices envolvidos."""

    def __init__(self, message, columns=(), step=None):
        super().__init__(message, step=step)
        self.columns = tuple(columns)


class ZeroEigenvalueError(NumericalError):
    pass
