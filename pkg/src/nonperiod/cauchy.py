"""Fast rational Cauchy sequences.

A sequence ``g`` is *fast* when ``|g(i) - g(i+1)| < 7^-(i+1)`` for every ``i``.
:func:`enforce` truncates an enumerated sequence at its first violation, so
every code yields a fast sequence and hence a real number ``beta_e``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .elem_expr import Budget, ElemExpr, UndefinedValue, ZeroPow, eval_expr
from .enumeration import DEFAULT_ZERO_POW, Decoder, g

__all__ = ["FastSeq", "RealApprox", "enforce", "beta", "beta_radius", "reindex_fast", "is_fast_step"]

_UNDEF = object()


def is_fast_step(a: Fraction, b: Fraction, i: int) -> bool:
    """Exact test of ``|a - b| < 7^-(i+1)``."""
    return abs(a - b) * 7 ** (i + 1) < 1


class FastSeq:
    """Lazily inspected, enforced version of ``g_e``.

    Terms are computed on demand and cached. ``truncation`` is the least
    violating index found so far (``None`` while every inspected step is
    fast). An undefined term never satisfies the fastness test, so a sequence
    whose first term is undefined is undefined everywhere.
    """

    def __init__(
        self,
        source: int,
        budget: Budget | None = None,
        zero_pow: ZeroPow = DEFAULT_ZERO_POW,
        decoder: Decoder | None = None,
    ):
        self.source = source
        self.budget = budget or Budget()
        self.zero_pow = zero_pow
        self.decoder = decoder
        self.truncation: int | None = None
        self._values: list = []
        self._checked = 0  # steps i < _checked have been inspected

    @property
    def values(self) -> list:
        """Inspected raw terms ``g_e(0), g_e(1), ...``; ``None`` marks undefined."""
        return [None if v is _UNDEF else v for v in self._values]

    def raw(self, i: int):
        while len(self._values) <= i:
            j = len(self._values)
            try:
                v = g(self.source, j, self.budget, self.zero_pow, self.decoder)
            except UndefinedValue:
                v = _UNDEF
            self._values.append(v)
        return self._values[i]

    def _scan(self, n: int) -> None:
        while self.truncation is None and self._checked < n:
            i = self._checked
            a, b = self.raw(i), self.raw(i + 1)
            if a is _UNDEF or b is _UNDEF or not is_fast_step(a, b, i):
                self.truncation = i
            self._checked = i + 1

    def __call__(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError("index must be a natural")
        self._scan(n)
        if self.truncation is not None and self.truncation < n:
            v = self.raw(self.truncation)
        else:
            v = self.raw(n)
        if v is _UNDEF:
            raise UndefinedValue(f"enforced sequence {self.source} is undefined (0^0 in its first term)")
        return v


def enforce(
    e: int,
    n: int,
    budget: Budget | None = None,
    zero_pow: ZeroPow = DEFAULT_ZERO_POW,
    decoder: Decoder | None = None,
) -> Fraction:
    """``gbar_e(n)``: ``g_e(n)`` unless some ``i < n`` breaks fastness, else ``g_e(n0)``."""
    return FastSeq(e, budget, zero_pow, decoder)(n)


@dataclass(frozen=True)
class RealApprox:
    """The open interval ``(value - radius, value + radius)``."""

    value: Fraction
    radius: Fraction

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    @property
    def lo(self) -> Fraction:
        return self.value - self.radius

    @property
    def hi(self) -> Fraction:
        return self.value + self.radius

    def __contains__(self, x) -> bool:
        return self.lo < x < self.hi


def beta_radius(n: int) -> Fraction:
    return Fraction(1, 6 * 7**n)


def beta(
    e: int,
    n: int,
    budget: Budget | None = None,
    zero_pow: ZeroPow = DEFAULT_ZERO_POW,
    decoder: Decoder | None = None,
) -> RealApprox:
    """Certified enclosure of ``beta_e`` from the ``n``-th enforced term.

    The tail of a fast sequence after index ``n`` sums to less than
    ``sum_{i>n} 7^-i = 1/(6 * 7^n)``.
    """
    return RealApprox(enforce(e, n, budget, zero_pow, decoder), beta_radius(n))


def reindex_fast(
    a: ElemExpr,
    b: ElemExpr,
    c: ElemExpr,
    x: int,
    budget: Budget | None = None,
    zero_pow: ZeroPow = ZeroPow.ONE,
) -> Fraction:
    """``a(m) / (b(m) + 1)`` with ``m = c(8^(x+1))``.

    If ``|a(y)/(b(y)+1) - alpha| < 1/k`` for all ``y >= c(k)``, the result is
    within ``8^-(x+1)`` of ``alpha``.
    """
    for h in (a, b, c):
        if h.arity != 1:
            raise ValueError("reindex_fast takes one-variable functions")
    m = eval_expr(c, (8 ** (x + 1),), budget, zero_pow)
    return Fraction(eval_expr(a, (m,), budget, zero_pow), eval_expr(b, (m,), budget, zero_pow) + 1)
