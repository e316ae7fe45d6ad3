"""Goedel-style enumeration ``e -> f_e`` of one-variable elementary functions.

Codes are split with the Cantor pairing, ``e = J(c, k)``:

* ``c == 0``: ``f_e(x) = x``
* ``c == 1``: ``f_e(x) = f_k(x) + 1``
* ``c in (2, 3, 4)``: monus, ``floor(a/(b+1))`` or ``a^b`` of ``f_L(k)(x)`` and
  ``f_R(k)(x)``
* ``c >= 5``: ``f_e(x) = 0``

and ``g_e(n) = f_L(e)(n) / (f_R(e)(n) + 1)``.
"""

from __future__ import annotations

import json
import os
import threading
from fractions import Fraction

from .elem_expr import (
    Budget,
    ElemExpr,
    Monus,
    Pow,
    Proj,
    Quot,
    Succ,
    Zero,
    ZeroPow,
    eval_expr,
    unpair,
)

__all__ = [
    "DEFAULT_ZERO_POW",
    "Decoder",
    "decode",
    "f",
    "g",
    "default_decoder",
    "save_cache",
    "load_cache",
    "CacheFormatError",
]

# 0^0 convention for the enumerated sequences. Undefined, so any g_e(n) that
# hits 0^0 has no value; see cauchy.enforce for how such terms are treated.
DEFAULT_ZERO_POW = ZeroPow.UNDEFINED

_IDENTITY = Proj(1, 1)
_ZERO = Zero(1)
_BINARY = {2: Monus, 3: Quot, 4: Pow}
_TAGS = {Monus: "monus", Quot: "quot", Pow: "pow"}
_TAG_NODES = {v: k for k, v in _TAGS.items()}


class CacheFormatError(ValueError):
    pass


class Decoder:
    """Memoising decoder. Codes up to ``limit`` are kept in memory.

    Lookups and inserts are guarded by a lock, so one decoder may be shared
    between threads; the decoded expressions are immutable.
    """

    def __init__(self, limit: int = 10**4):
        self.limit = limit
        self._table: dict[int, ElemExpr] = {}
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._table)

    def __contains__(self, e):
        return e in self._table

    def decode(self, e: int) -> ElemExpr:
        if e < 0:
            raise ValueError("codes are naturals")
        hit = self._table.get(e)
        if hit is not None:
            return hit
        c, k = unpair(e)
        if c == 0:
            expr = _IDENTITY
        elif c == 1:
            expr = Succ(self.decode(k))
        elif c in _BINARY:
            a, b = unpair(k)
            expr = _BINARY[c](self.decode(a), self.decode(b))
        else:
            expr = _ZERO
        if e <= self.limit:
            with self._lock:
                expr = self._table.setdefault(e, expr)
        return expr

    def items(self):
        with self._lock:
            return sorted(self._table.items())


_default = Decoder()


def default_decoder() -> Decoder:
    return _default


def decode(e: int, decoder: Decoder | None = None) -> ElemExpr:
    """Expression for ``f_e`` (arity 1)."""
    return (_default if decoder is None else decoder).decode(e)


def decode_uncached(e: int) -> ElemExpr:
    """Decode without any memo table (fresh nodes, no sharing)."""
    c, k = unpair(e)
    if c == 0:
        return Proj(1, 1)
    if c == 1:
        return Succ(decode_uncached(k))
    if c in _BINARY:
        a, b = unpair(k)
        return _BINARY[c](decode_uncached(a), decode_uncached(b))
    return Zero(1)


def f(
    e: int,
    x: int,
    budget: Budget | None = None,
    zero_pow: ZeroPow = DEFAULT_ZERO_POW,
    decoder: Decoder | None = None,
) -> int:
    """``f_e(x)``."""
    return eval_expr(decode(e, decoder), (x,), budget, zero_pow)


def g(
    e: int,
    n: int,
    budget: Budget | None = None,
    zero_pow: ZeroPow = DEFAULT_ZERO_POW,
    decoder: Decoder | None = None,
) -> Fraction:
    """``g_e(n) = f_L(e)(n) / (f_R(e)(n) + 1)`` as an exact fraction.

    Raises :class:`~nonperiod.elem_expr.UndefinedValue` if either evaluation
    meets ``0^0`` under ``ZeroPow.UNDEFINED``.
    """
    a, b = unpair(e)
    num = f(a, n, budget, zero_pow, decoder)
    den = f(b, n, budget, zero_pow, decoder)
    return Fraction(num, den + 1)


# ---------------------------------------------------------------------------
# Persistence


def _entry(e: int, expr: ElemExpr) -> list:
    c, k = unpair(e)
    if c == 0:
        return ["proj"]
    if c == 1:
        return ["succ", k]
    if c in _BINARY:
        a, b = unpair(k)
        return [_TAGS[type(expr)], a, b]
    return ["zero"]


def save_cache(decoder: Decoder, path: str | os.PathLike) -> None:
    entries = {str(e): _entry(e, expr) for e, expr in decoder.items()}
    doc = {"format": "nonperiod-decode-cache", "version": 1, "limit": decoder.limit, "entries": entries}
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load_cache(path: str | os.PathLike) -> Decoder:
    """Rebuild a :class:`Decoder` from :func:`save_cache` output.

    Entries only reference smaller codes, so they are rebuilt in code order
    with full sharing.
    """
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CacheFormatError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    if not isinstance(doc, dict) or doc.get("format") != "nonperiod-decode-cache":
        raise CacheFormatError(f"{path}: not a decode cache")
    entries = doc.get("entries")
    if not isinstance(entries, dict):
        raise CacheFormatError(f"{path}: field 'entries' must be an object")
    dec = Decoder(limit=int(doc.get("limit", 10**4)))
    table = dec._table
    for key in sorted(entries, key=int):
        e = int(key)
        ent = entries[key]
        tag = ent[0] if isinstance(ent, list) and ent else None
        try:
            if tag == "proj":
                expr = _IDENTITY
            elif tag == "zero":
                expr = _ZERO
            elif tag == "succ":
                expr = Succ(table[ent[1]])
            elif tag in _TAG_NODES:
                expr = _TAG_NODES[tag](table[ent[1]], table[ent[2]])
            else:
                raise CacheFormatError(f"{path}: entries[{key}]: unknown tag {tag!r}")
        except (KeyError, IndexError, TypeError):
            raise CacheFormatError(f"{path}: entries[{key}]: dangling or malformed operand") from None
        if _entry(e, expr) != ent:
            raise CacheFormatError(f"{path}: entries[{key}]: does not match code {e}")
        table[e] = expr
    return dec
