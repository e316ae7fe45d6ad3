"""Integer polynomials, basic open domains in a box, grid cubes, and their JSON form."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

__all__ = [
    "IntPolynomial",
    "BasicDomain",
    "GridCube",
    "DomainFormatError",
    "parse_fraction",
    "load_domain",
    "save_domain",
    "domain_from_json",
    "domain_to_json",
]


class DomainFormatError(ValueError):
    pass


class IntPolynomial:
    """Sparse polynomial in ``dim`` variables with integer coefficients.

    ``terms`` maps exponent tuples to nonzero ints. Instances are immutable and
    hashable; the usual ring operations are supported.
    """

    __slots__ = ("dim", "_terms", "_hash")

    def __init__(self, dim: int, terms: Mapping[Sequence[int], int] | Iterable = ()):
        if dim < 1:
            raise ValueError("dim must be >= 1")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple, int] = {}
        for exps, coeff in items:
            exps = tuple(int(j) for j in exps)
            if len(exps) != dim:
                raise ValueError(f"exponent vector {exps} has length {len(exps)}, expected {dim}")
            if any(j < 0 for j in exps):
                raise ValueError(f"negative exponent in {exps}")
            if not isinstance(coeff, int):
                raise TypeError(f"coefficients must be int, got {type(coeff).__name__}")
            acc[exps] = acc.get(exps, 0) + coeff
        self.dim = dim
        self._terms = {k: v for k, v in sorted(acc.items()) if v}
        self._hash = None

    @classmethod
    def variable(cls, dim: int, i: int) -> "IntPolynomial":
        """The coordinate ``x_i`` (0-based)."""
        exps = [0] * dim
        exps[i] = 1
        return cls(dim, {tuple(exps): 1})

    @classmethod
    def constant(cls, dim: int, c: int) -> "IntPolynomial":
        return cls(dim, {(0,) * dim: c})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    @property
    def degrees(self) -> tuple:
        """Largest exponent of each variable."""
        degs = [0] * self.dim
        for exps in self._terms:
            for v, j in enumerate(exps):
                degs[v] = max(degs[v], j)
        return tuple(degs)

    @property
    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=0)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.dim:
            raise ValueError("point has wrong dimension")
        total = Fraction(0)
        for exps, c in self._terms.items():
            t = Fraction(c)
            for x, j in zip(point, exps):
                if j:
                    t *= Fraction(x) ** j
            total += t
        return total

    __call__ = evaluate

    # ring operations

    def _coerce(self, other) -> "IntPolynomial":
        if isinstance(other, IntPolynomial):
            if other.dim != self.dim:
                raise ValueError("dimension mismatch")
            return other
        if isinstance(other, int):
            return IntPolynomial.constant(self.dim, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return IntPolynomial(self.dim, list(self.items()) + list(other.items()))

    __radd__ = __add__

    def __neg__(self):
        return IntPolynomial(self.dim, {k: -v for k, v in self.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prod = []
        for e1, c1 in self.items():
            for e2, c2 in other.items():
                prod.append((tuple(a + b for a, b in zip(e1, e2)), c1 * c2))
        return IntPolynomial(self.dim, prod)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = IntPolynomial.constant(self.dim, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        return self.dim == other.dim and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dim, tuple(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"IntPolynomial({self.dim}, {self._terms!r})"


@dataclass(frozen=True)
class BasicDomain:
    """``{x in [0, r]^dim : G_k(x) > 0 for all k}``."""

    dim: int
    box_scale: Fraction
    constraints: tuple

    def __post_init__(self):
        object.__setattr__(self, "box_scale", Fraction(self.box_scale))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.box_scale <= 0:
            raise ValueError("box_scale must be positive")
        if not self.constraints:
            raise ValueError("a domain needs at least one constraint")
        for i, p in enumerate(self.constraints):
            if p.dim != self.dim:
                raise ValueError(f"constraint {i} has dimension {p.dim}, domain has {self.dim}")

    def contains(self, point: Sequence) -> bool:
        r = self.box_scale
        if any(not 0 <= Fraction(x) <= r for x in point):
            return False
        return all(p.evaluate(point) > 0 for p in self.constraints)


@dataclass(frozen=True)
class GridCube:
    """``prod_i [k_i r/n, (k_i + 1) r/n]``."""

    n: int
    index: tuple

    def __post_init__(self):
        object.__setattr__(self, "index", tuple(int(k) for k in self.index))
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if any(not 0 <= k < self.n for k in self.index):
            raise ValueError(f"cube index {self.index} outside 0..{self.n - 1}")

    @property
    def dim(self) -> int:
        return len(self.index)

    def bounds(self, r) -> list[tuple[Fraction, Fraction]]:
        h = Fraction(r) / self.n
        return [(k * h, (k + 1) * h) for k in self.index]

    def children(self) -> list["GridCube"]:
        """The ``2^dim`` half-size cubes on the grid ``2n``."""
        out = [()]
        for k in self.index:
            out = [c + (2 * k + b,) for c in out for b in (0, 1)]
        return [GridCube(2 * self.n, c) for c in out]


# ---------------------------------------------------------------------------
# JSON


def parse_fraction(s, where: str = "value") -> Fraction:
    if not isinstance(s, str):
        raise DomainFormatError(f"{where}: expected a fraction string 'p/q', got {type(s).__name__}")
    num, sep, den = s.strip().partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise DomainFormatError(f"{where}: cannot parse {s!r} as 'p/q'") from None
    if q == 0:
        raise DomainFormatError(f"{where}: zero denominator in {s!r}")
    return Fraction(p, q)


def _fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def domain_from_json(doc, source: str = "<domain>") -> BasicDomain:
    if not isinstance(doc, dict):
        raise DomainFormatError(f"{source}: top level must be an object")
    for key in ("dim", "box_scale", "polynomials"):
        if key not in doc:
            raise DomainFormatError(f"{source}: missing field '{key}'")
    dim = doc["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise DomainFormatError(f"{source}: field 'dim' must be a positive integer")
    r = parse_fraction(doc["box_scale"], f"{source}: box_scale")
    if r <= 0:
        raise DomainFormatError(f"{source}: box_scale must be positive")
    polys_doc = doc["polynomials"]
    if not isinstance(polys_doc, list) or not polys_doc:
        raise DomainFormatError(f"{source}: 'polynomials' must be a nonempty list")
    polys = []
    for i, pd in enumerate(polys_doc):
        where = f"{source}: polynomials[{i}]"
        if not isinstance(pd, dict) or not isinstance(pd.get("terms"), list):
            raise DomainFormatError(f"{where}: expected an object with a 'terms' list")
        terms = []
        for j, td in enumerate(pd["terms"]):
            tw = f"{where}.terms[{j}]"
            if not isinstance(td, dict):
                raise DomainFormatError(f"{tw}: expected an object")
            coeff = td.get("coeff")
            if not isinstance(coeff, str):
                raise DomainFormatError(f"{tw}.coeff: expected a signed decimal string")
            try:
                c = int(coeff)
            except ValueError:
                raise DomainFormatError(f"{tw}.coeff: {coeff!r} is not an integer") from None
            exps = td.get("exponents")
            if not isinstance(exps, list) or not all(
                isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in exps
            ):
                raise DomainFormatError(f"{tw}.exponents: expected a list of naturals")
            if len(exps) != dim:
                raise DomainFormatError(
                    f"{tw}.exponents: dimension mismatch, length {len(exps)} but dim is {dim}"
                )
            terms.append((tuple(exps), c))
        polys.append(IntPolynomial(dim, terms))
    return BasicDomain(dim, r, tuple(polys))


def domain_to_json(domain: BasicDomain) -> dict:
    return {
        "dim": domain.dim,
        "box_scale": _fraction_str(domain.box_scale),
        "polynomials": [
            {"terms": [{"coeff": str(c), "exponents": list(e)} for e, c in p.items()]}
            for p in domain.constraints
        ],
    }


def load_domain(path: str | os.PathLike) -> BasicDomain:
    with open(path) as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainFormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return domain_from_json(doc, str(path))


def save_domain(domain: BasicDomain, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        json.dump(domain_to_json(domain), fh, indent=2)
        fh.write("\n")
