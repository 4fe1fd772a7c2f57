"""
Aritmética de intervalos de Moore sobre intervalos escalares.

As operações {+, -, ×, /, √} devolvem o intervalo exato da operação pontual
sobre os operandos. Extremos são floats de precisão dupla, sem arredondamento
dirigido.
"""

import math
from dataclasses import dataclass

from interstatis.errors import (
    ArithmeticOverflowError,
    IntervalDivisionError,
    InvalidIntervalError,
    NegativeSqrtError,
)


@dataclass(frozen=True, slots=True)
class Interval:
    """Intervalo fechado [lo, hi] com extremos finitos e lo <= hi."""

    lo: float
    hi: float

    def __post_init__(self):
        try:
            lo = float(self.lo)
            hi = float(self.hi)
        except (TypeError, ValueError) as e:
            raise InvalidIntervalError(f"Extremos inválidos: {self.lo!r}, {self.hi!r}") from e
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise InvalidIntervalError(f"Extremos não finitos: [{lo}, {hi}]")
        if lo > hi:
            raise InvalidIntervalError(f"Extremo inferior maior que o superior: [{lo}, {hi}]")
        object.__setattr__(self, 'lo', lo)
        object.__setattr__(self, 'hi', hi)

    @classmethod
    def point(cls, x):
        """Intervalo degenerado [x, x]."""
        return cls(x, x)

    @property
    def midpoint(self):
        return midpoint(self)

    @property
    def width(self):
        return width(self)

    @property
    def radius(self):
        return (self.hi - self.lo) / 2

    def is_degenerate(self, tol=0.0):
        return is_degenerate(self, tol)

    def contains(self, x):
        return contains(self, x)

    def __add__(self, other):
        if isinstance(other, Interval):
            return add(self, other)
        return add(self, Interval.point(other))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Interval):
            return sub(self, other)
        return sub(self, Interval.point(other))

    def __rsub__(self, other):
        return sub(Interval.point(other), self)

    def __mul__(self, other):
        if isinstance(other, Interval):
            return mul(self, other)
        return scalar_mul(other, self)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Interval):
            return div(self, other)
        return div(self, Interval.point(other))

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __str__(self):
        return f"[{self.lo!r}, {self.hi!r}]"


def _checked(lo, hi, operacao):
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ArithmeticOverflowError(f"Overflow em {operacao}: resultado [{lo}, {hi}] não é finito")
    return Interval(lo, hi)


def add(a, b):
    return _checked(a.lo + b.lo, a.hi + b.hi, 'soma')


def sub(a, b):
    return _checked(a.lo - b.hi, a.hi - b.lo, 'subtração')


def mul(a, b):
    produtos = (a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi)
    return _checked(min(produtos), max(produtos), 'multiplicação')


def div(a, b):
    """a ÷ b = a × [1/b.hi, 1/b.lo], calculado pelos quatro quocientes de extremos.

    Divisor contendo zero é sempre erro (sem intervalos estendidos).
    """
    if b.lo <= 0.0 <= b.hi:
        raise IntervalDivisionError(f"Divisão por intervalo que contém zero: {b}")
    quocientes = (a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi)
    return _checked(min(quocientes), max(quocientes), 'divisão')


def sqrt(a):
    if a.lo < 0:
        raise NegativeSqrtError(f"Raiz quadrada de intervalo com extremo inferior negativo: {a}")
    return Interval(math.sqrt(a.lo), math.sqrt(a.hi))


def scalar_mul(c, a):
    """Produto de um real por um intervalo; igual a mul([c, c], a)."""
    c = float(c)
    if not math.isfinite(c):
        raise ArithmeticOverflowError(f"Escalar não finito: {c}")
    if c >= 0:
        return _checked(c * a.lo, c * a.hi, 'produto por escalar')
    return _checked(c * a.hi, c * a.lo, 'produto por escalar')


def midpoint(a):
    # lo/2 + hi/2 não transborda perto de ±max float
    return a.lo / 2 + a.hi / 2


def width(a):
    return a.hi - a.lo


def is_degenerate(a, tol=0.0):
    return width(a) <= tol


def contains(a, x):
    return a.lo <= x <= a.hi


def is_subset(a, b, tol=0.0):
    """True se a ⊆ b (com folga `tol` nos extremos)."""
    return b.lo - tol <= a.lo and a.hi <= b.hi + tol
