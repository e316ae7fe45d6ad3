"""Diagonal construction of a computable real that is not elementary.

``alpha = sum 2 eps_i / 3^i`` where ``eps_{n+1}`` is chosen to steer the
ternary digit away from the ``n``-th enumerated real ``beta_n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cauchy import enforce
from .elem_expr import Budget, UndefinedValue, ZeroPow
from .enumeration import DEFAULT_ZERO_POW, Decoder

__all__ = [
    "AmbiguousAtBudget",
    "DiagonalState",
    "Diagonal",
    "step",
    "epsilons",
    "alpha_interval",
    "half_alpha_digits",
]


class AmbiguousAtBudget(ArithmeticError):
    """The enclosure still straddles a decimal boundary at the term limit."""

    def __init__(self, count: int, max_terms: int):
        self.count = count
        self.max_terms = max_terms
        super().__init__(f"{count} digits not certified after {max_terms} terms (max_terms)")


@dataclass(frozen=True)
class DiagonalState:
    n: int = 0
    epsilons: tuple = ()
    alpha: Fraction = Fraction(0)

    @property
    def interval(self) -> tuple[Fraction, Fraction]:
        """``[alpha_n, alpha_n + 3^-n]``, which contains the limit."""
        return self.alpha, self.alpha + Fraction(1, 3**self.n)


def step(
    state: DiagonalState,
    budget: Budget | None = None,
    zero_pow: ZeroPow = DEFAULT_ZERO_POW,
    decoder: Decoder | None = None,
) -> DiagonalState:
    """Decide ``eps_{n+1}`` and return the state at ``n + 1``.

    ``eps_{n+1} = 0`` iff ``gbar_n(n) > alpha_n + 1/(2 * 3^n)``. An undefined
    ``gbar_n`` never satisfies the strict comparison, so it yields 1.
    Budget errors propagate; no bit is ever guessed.
    """
    n = state.n
    threshold = state.alpha + Fraction(1, 2 * 3**n)
    try:
        above = enforce(n, n, budget, zero_pow, decoder) > threshold
    except UndefinedValue:
        above = False
    eps = 0 if above else 1
    return DiagonalState(n + 1, state.epsilons + (eps,), state.alpha + Fraction(2 * eps, 3 ** (n + 1)))


@dataclass
class Diagonal:
    """Incrementally extended construction sharing one decoder."""

    budget: Budget = field(default_factory=Budget)
    zero_pow: ZeroPow = DEFAULT_ZERO_POW
    decoder: Decoder = field(default_factory=Decoder)
    state: DiagonalState = field(default_factory=DiagonalState)

    def advance(self, n: int) -> DiagonalState:
        while self.state.n < n:
            self.state = step(self.state, self.budget, self.zero_pow, self.decoder)
        return self.state

    def half_alpha_digits(self, count: int, max_terms: int | None = None) -> str:
        if count < 1:
            raise ValueError("count must be >= 1")
        if max_terms is None:
            max_terms = 4 * count + 16
        scale = 10**count
        n = 0
        while True:
            st = self.advance(n)
            lo = st.alpha / 2
            hi = lo + Fraction(1, 2 * 3**n)
            d_lo = lo.numerator * scale // lo.denominator
            if d_lo == hi.numerator * scale // hi.denominator:
                return str(d_lo).zfill(count)
            if n >= max_terms:
                raise AmbiguousAtBudget(count, max_terms)
            n += 1


def epsilons(
    count: int,
    budget: Budget | None = None,
    zero_pow: ZeroPow = DEFAULT_ZERO_POW,
    decoder: Decoder | None = None,
) -> list[int]:
    """``[eps_1, ..., eps_count]``."""
    d = Diagonal(budget or Budget(), zero_pow, Decoder() if decoder is None else decoder)
    return list(d.advance(count).epsilons)


def alpha_interval(
    n: int,
    budget: Budget | None = None,
    zero_pow: ZeroPow = DEFAULT_ZERO_POW,
    decoder: Decoder | None = None,
) -> tuple[Fraction, Fraction]:
    d = Diagonal(budget or Budget(), zero_pow, Decoder() if decoder is None else decoder)
    return d.advance(n).interval


def half_alpha_digits(
    count: int,
    budget: Budget | None = None,
    max_terms: int | None = None,
    zero_pow: ZeroPow = DEFAULT_ZERO_POW,
    decoder: Decoder | None = None,
) -> str:
    """First ``count`` decimal digits of ``alpha/2`` after the point.

    A digit string is emitted only once ``[S_N, S_N + 3^-N / 2]`` (``S_N`` the
    partial sum of ``eps_i 3^-i``) lies inside a single decimal cell of width
    ``10^-count``; ``N`` defaults to at most ``4 * count + 16``.
    """
    d = Diagonal(budget or Budget(), zero_pow, Decoder() if decoder is None else decoder)
    return d.half_alpha_digits(count, max_terms)
