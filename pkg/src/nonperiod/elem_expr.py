"""Elementary-function expression trees with exact, budgeted evaluation.

Naturals are Python ints and rationals are :class:`fractions.Fraction`; the
only extra machinery here is bookkeeping for arity and resource budgets.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import isqrt
from typing import Sequence

__all__ = [
    "ArityMismatch",
    "BudgetExceeded",
    "UndefinedValue",
    "Budget",
    "ZeroPow",
    "ElemExpr",
    "Zero",
    "Succ",
    "Proj",
    "Add",
    "Mul",
    "Monus",
    "Quot",
    "Pow",
    "Comp",
    "BoundedSum",
    "BoundedProd",
    "eval_expr",
    "builtin",
    "render",
    "pair",
    "unpair",
    "BUILTIN_NAMES",
]


class BudgetExceeded(ArithmeticError):
    """An evaluation ran past its bit or step budget.

    ``resource`` is ``"max_bits"`` or ``"max_nodes"``.
    """

    def __init__(self, resource: str, limit: int, detail: str = ""):
        self.resource = resource
        self.limit = limit
        msg = f"{resource} budget of {limit} exhausted"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class ArityMismatch(ValueError):
    pass


class UndefinedValue(ArithmeticError):
    """Raised for ``0^0`` when evaluating under :attr:`ZeroPow.UNDEFINED`."""


class ZeroPow(enum.Enum):
    """Convention for ``0^0``."""

    ONE = "one"
    ZERO = "zero"
    UNDEFINED = "undefined"


@dataclass(frozen=True)
class Budget:
    max_bits: int = 2**20
    max_nodes: int = 10**7

    def __post_init__(self):
        if self.max_bits <= 0 or self.max_nodes <= 0:
            raise ValueError("budget caps must be positive")


# ---------------------------------------------------------------------------
# AST


class ElemExpr:
    """Base class of expression nodes; every node carries its arity."""

    __slots__ = ()
    arity: int


@dataclass(frozen=True, eq=True)
class Zero(ElemExpr):
    arity: int = 1

    def __post_init__(self):
        if self.arity < 1:
            raise ArityMismatch("Zero needs arity >= 1")


@dataclass(frozen=True)
class Succ(ElemExpr):
    child: ElemExpr
    arity: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "arity", self.child.arity)


@dataclass(frozen=True)
class Proj(ElemExpr):
    arity: int
    index: int

    def __post_init__(self):
        if not 1 <= self.index <= self.arity:
            raise ArityMismatch(f"projection index {self.index} outside 1..{self.arity}")


@dataclass(frozen=True)
class _Binary(ElemExpr):
    left: ElemExpr
    right: ElemExpr
    arity: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.left.arity != self.right.arity:
            raise ArityMismatch(
                f"{type(self).__name__}: operand arities {self.left.arity} != {self.right.arity}"
            )
        object.__setattr__(self, "arity", self.left.arity)


class Add(_Binary):
    pass


class Mul(_Binary):
    pass


class Monus(_Binary):
    """``max(left - right, 0)``."""


class Quot(_Binary):
    """``floor(left / (right + 1))``."""


class Pow(_Binary):
    """``left ** right``; ``0^0`` follows the evaluation's :class:`ZeroPow`."""


@dataclass(frozen=True)
class Comp(ElemExpr):
    outer: ElemExpr
    inner: tuple
    arity: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        inner = tuple(self.inner)
        object.__setattr__(self, "inner", inner)
        if not inner:
            raise ArityMismatch("composition needs at least one inner function")
        if self.outer.arity != len(inner):
            raise ArityMismatch(
                f"outer arity {self.outer.arity} != {len(inner)} inner functions"
            )
        arities = {g.arity for g in inner}
        if len(arities) != 1:
            raise ArityMismatch(f"inner functions disagree on arity: {sorted(arities)}")
        object.__setattr__(self, "arity", arities.pop())


@dataclass(frozen=True)
class _Bounded(ElemExpr):
    # body(t, x_1..x_n); the node takes (x, x_1..x_n) and ranges t over 0..x
    body: ElemExpr
    arity: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "arity", self.body.arity)


class BoundedSum(_Bounded):
    pass


class BoundedProd(_Bounded):
    pass


# ---------------------------------------------------------------------------
# Evaluation


class _Evaluator:
    __slots__ = ("budget", "zero_pow", "steps")

    def __init__(self, budget: Budget, zero_pow: ZeroPow):
        self.budget = budget
        self.zero_pow = zero_pow
        self.steps = 0

    def _check(self, v: int) -> int:
        if v.bit_length() > self.budget.max_bits:
            raise BudgetExceeded("max_bits", self.budget.max_bits, f"value of {v.bit_length()} bits")
        return v

    def run(self, e: ElemExpr, args: tuple) -> int:
        self.steps += 1
        if self.steps > self.budget.max_nodes:
            raise BudgetExceeded("max_nodes", self.budget.max_nodes)
        tp = type(e)
        if tp is Proj:
            return args[e.index - 1]
        if tp is Zero:
            return 0
        if tp is Succ:
            return self._check(self.run(e.child, args) + 1)
        if tp is Comp:
            vals = tuple(self.run(g, args) for g in e.inner)
            return self.run(e.outer, vals)
        if tp is BoundedSum or tp is BoundedProd:
            bound, rest = args[0], args[1:]
            if tp is BoundedSum:
                acc = 0
                for t in range(bound + 1):
                    acc = self._check(acc + self.run(e.body, (t,) + rest))
            else:
                acc = 1
                for t in range(bound + 1):
                    acc = self._check(acc * self.run(e.body, (t,) + rest))
            return acc
        a = self.run(e.left, args)
        b = self.run(e.right, args)
        if tp is Add:
            return self._check(a + b)
        if tp is Mul:
            if a and b and a.bit_length() + b.bit_length() - 1 > self.budget.max_bits:
                raise BudgetExceeded("max_bits", self.budget.max_bits, "product")
            return self._check(a * b)
        if tp is Monus:
            return a - b if a >= b else 0
        if tp is Quot:
            return a // (b + 1)
        if tp is Pow:
            return self._pow(a, b)
        raise TypeError(f"not an expression node: {e!r}")

    def _pow(self, a: int, b: int) -> int:
        if b == 0:
            if a == 0:
                if self.zero_pow is ZeroPow.ONE:
                    return 1
                if self.zero_pow is ZeroPow.ZERO:
                    return 0
                raise UndefinedValue("0^0")
            return 1
        if a <= 1:
            return a
        # a >= 2: a**b has at least (bitlen(a) - 1) * b + 1 bits
        if (a.bit_length() - 1) * b + 1 > self.budget.max_bits:
            raise BudgetExceeded("max_bits", self.budget.max_bits, f"power with exponent {b}")
        return self._check(a**b)


def eval_expr(
    expr: ElemExpr,
    args: Sequence[int],
    budget: Budget | None = None,
    zero_pow: ZeroPow = ZeroPow.ONE,
) -> int:
    """Evaluate ``expr`` at ``args`` exactly.

    Raises :class:`BudgetExceeded` when an intermediate value outgrows
    ``budget.max_bits`` or the walk visits more than ``budget.max_nodes`` nodes,
    and :class:`ArityMismatch` on a malformed call.
    """
    args = tuple(args)
    if len(args) != expr.arity:
        raise ArityMismatch(f"expression has arity {expr.arity}, got {len(args)} arguments")
    budget = budget or Budget()
    for a in args:
        if not isinstance(a, int) or a < 0:
            raise ValueError(f"arguments must be naturals, got {a!r}")
        if a.bit_length() > budget.max_bits:
            raise BudgetExceeded("max_bits", budget.max_bits, "argument")
    return _Evaluator(budget, zero_pow).run(expr, args)


# ---------------------------------------------------------------------------
# Pairing


def pair(x: int, y: int) -> int:
    """Cantor pairing ``J(x, y) = (x+y)(x+y+1)/2 + y``."""
    s = x + y
    return s * (s + 1) // 2 + y


def unpair(z: int) -> tuple[int, int]:
    """Return ``(L(z), R(z))`` with ``pair(L(z), R(z)) == z``."""
    if z < 0:
        raise ValueError("unpair is defined on naturals")
    # largest w with w(w+1)/2 <= z
    w = (isqrt(8 * z + 1) - 1) // 2
    r = z - w * (w + 1) // 2
    return w - r, r


# ---------------------------------------------------------------------------
# Derived combinators


def _const(c: int, arity: int) -> ElemExpr:
    e: ElemExpr = Zero(arity)
    for _ in range(c):
        e = Succ(e)
    return e


def _sgn() -> ElemExpr:
    x = Proj(1, 1)
    one = _const(1, 1)
    return Monus(one, Monus(one, x))


def _gt() -> ElemExpr:
    return Comp(_sgn(), (Monus(Proj(2, 1), Proj(2, 2)),))


def _geq() -> ElemExpr:
    # x >= y  iff  x + 1 > y
    return Comp(_gt(), (Succ(Proj(2, 1)), Proj(2, 2)))


def _swap(f: ElemExpr) -> ElemExpr:
    return Comp(f, (Proj(2, 2), Proj(2, 1)))


def _quotient_formula() -> ElemExpr:
    # body(i, x, y) = [x >= i * (y + 1)]
    i, x, y = Proj(3, 1), Proj(3, 2), Proj(3, 3)
    body = Comp(_geq(), (x, Mul(i, Succ(y))))
    # sum over i <= x, then subtract the i = 0 term
    total = Comp(BoundedSum(body), (Proj(2, 1), Proj(2, 1), Proj(2, 2)))
    return Monus(total, _const(1, 2))


def _bounded_min(f: ElemExpr) -> ElemExpr:
    k = f.arity
    # sgn(f(t, y_2..y_k)); the bounded product over t <= s is 1 while no zero has
    # appeared, so summing over s <= n counts the indices before the first zero
    nonzero = Comp(_sgn(), (f,))
    count = BoundedSum(BoundedProd(nonzero))
    # count == n + 1 when there is no zero; clamp to n
    n = Proj(k, 1)
    return Monus(count, Monus(count, n))


def _pairing_j() -> ElemExpr:
    s = Add(Proj(2, 1), Proj(2, 2))
    return Add(Quot(Mul(s, Succ(s)), _const(1, 2)), Proj(2, 2))


def _triangle(e: ElemExpr) -> ElemExpr:
    # e (e + 1) / 2
    return Quot(Mul(e, Succ(e)), _const(1, e.arity))


def _pair_w() -> ElemExpr:
    # largest w with w(w+1)/2 <= z, as (#{t <= z : t(t+1)/2 <= z}) - 1
    t, z = Proj(2, 1), Proj(2, 2)
    body = Comp(_swap(_geq()), (_triangle(t), z))
    count = Comp(BoundedSum(body), (Proj(1, 1), Proj(1, 1)))
    return Monus(count, _const(1, 1))


def _pairing_r() -> ElemExpr:
    return Monus(Proj(1, 1), _triangle(_pair_w()))


def _pairing_l() -> ElemExpr:
    return Monus(_pair_w(), _pairing_r())


_BUILTINS = {
    "sgn": _sgn,
    "gt": _gt,
    "geq": _geq,
    "lt": lambda: _swap(_gt()),
    "leq": lambda: _swap(_geq()),
    "quotient_formula": _quotient_formula,
    "pairing_J": _pairing_j,
    "pairing_L": _pairing_l,
    "pairing_R": _pairing_r,
}

BUILTIN_NAMES = tuple(_BUILTINS) + ("bounded_min",)


def builtin(name: str, operand: ElemExpr | None = None) -> ElemExpr:
    """Build one of the derived elementary functions from the primitive nodes.

    ``bounded_min`` is a combinator: pass the function ``f(t, y_2, ..., y_k)``
    as ``operand`` and get ``g(n, y_2, ..., y_k)``, the least ``t <= n`` with
    ``f(t, ...) == 0``, or ``n`` if there is none.
    """
    if name == "bounded_min":
        if operand is None:
            raise ValueError("bounded_min needs the function to minimise")
        return _bounded_min(operand)
    try:
        make = _BUILTINS[name]
    except KeyError:
        raise ValueError(f"unknown builtin {name!r}") from None
    return make()


# ---------------------------------------------------------------------------
# Rendering

_MONUS = {True: "∸", False: "-."}


def render(expr: ElemExpr, ascii: bool = False) -> str:
    """Canonical parenthesised rendering, e.g. ``S((S(x_1)^x_1))``."""
    op = _MONUS[not ascii]
    memo: dict[int, str] = {}

    def go(e: ElemExpr) -> str:
        key = id(e)
        if key in memo:
            return memo[key]
        tp = type(e)
        if tp is Zero:
            s = "0"
        elif tp is Succ:
            s = f"S({go(e.child)})"
        elif tp is Proj:
            s = f"x_{e.index}"
        elif tp is Add:
            s = f"({go(e.left)} + {go(e.right)})"
        elif tp is Mul:
            s = f"({go(e.left)} * {go(e.right)})"
        elif tp is Monus:
            s = f"({go(e.left)} {op} {go(e.right)})"
        elif tp is Quot:
            s = f"floor({go(e.left)}/({go(e.right)}+1))"
        elif tp is Pow:
            s = f"({go(e.left)}^{go(e.right)})"
        elif tp is Comp:
            s = f"{go(e.outer)}[{', '.join(go(g) for g in e.inner)}]"
        elif tp is BoundedSum:
            s = f"bsum({go(e.body)})"
        elif tp is BoundedProd:
            s = f"bprod({go(e.body)})"
        else:
            raise TypeError(f"not an expression node: {e!r}")
        memo[key] = s
        return s

    return go(expr)

