"""Exact sparse multivariate polynomials over the rationals.

A polynomial is a map from exponent tuples to nonzero ``Fraction``
coefficients, tied to an ordered tuple of variable names (its ambient).
Values are immutable; every arithmetic operation returns a new polynomial.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, Iterator, Sequence, Tuple, Union

Exponent = Tuple[int, ...]
Terms = Dict[Exponent, Fraction]
Scalar = Union[int, Fraction]


class VariableMismatch(ValueError):
    pass


class ArityMismatch(ValueError):
    pass


def _neg_rev(e: Exponent) -> Exponent:
    return tuple(-x for x in reversed(e))


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order: ``lex``, ``grevlex`` or ``block`` (eliminates the first k variables)."""

    kind: str = "grevlex"
    k: int = 0

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "block" and self.k < 0:
            raise ValueError("block order needs k >= 0")

    def key(self) -> Callable[[Exponent], tuple]:
        if self.kind == "lex":
            return lambda e: e
        if self.kind == "grevlex":
            return lambda e: (sum(e), _neg_rev(e))
        k = self.k

        def block_key(e):
            a, b = e[:k], e[k:]
            return (sum(a), _neg_rev(a), sum(b), _neg_rev(b))

        return block_key

    def __str__(self):
        return f"block({self.k})" if self.kind == "block" else self.kind


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def block(k: int) -> MonomialOrder:
    return MonomialOrder("block", k)


def _clean(terms: Terms) -> Terms:
    return {e: c for e, c in terms.items() if c != 0}


class Polynomial:
    """Immutable sparse polynomial with rational coefficients.

    >>> x, y = Polynomial.variables("x", "y")
    >>> str((x + y) * (x - y))
    'x^2 - y^2'
    """

    __slots__ = ("gens", "terms", "_hash")

    def __init__(self, gens: Sequence[str], terms: Terms | None = None, *, _trusted=False):
        self.gens = tuple(gens)
        if terms is None:
            terms = {}
        elif not _trusted:
            n = len(self.gens)
            clean = {}
            for e, c in terms.items():
                e = tuple(int(v) for v in e)
                if len(e) != n or any(v < 0 for v in e):
                    raise ArityMismatch(f"bad exponent {e} for {n} variables")
                c = Fraction(c)
                if c:
                    clean[e] = clean.get(e, 0) + c
            terms = _clean(clean)
        self.terms = terms
        self._hash = None

    # -- constructors ----------------------------------------------------
    @classmethod
    def constant(cls, gens: Sequence[str], value: Scalar) -> "Polynomial":
        value = Fraction(value)
        gens = tuple(gens)
        if value == 0:
            return cls(gens, {}, _trusted=True)
        return cls(gens, {(0,) * len(gens): value}, _trusted=True)

    @classmethod
    def var(cls, gens: Sequence[str], name: str) -> "Polynomial":
        gens = tuple(gens)
        if name not in gens:
            raise VariableMismatch(f"{name!r} is not one of {gens}")
        e = [0] * len(gens)
        e[gens.index(name)] = 1
        return cls(gens, {tuple(e): Fraction(1)}, _trusted=True)

    @classmethod
    def variables(cls, *names: str) -> Tuple["Polynomial", ...]:
        return tuple(cls.var(names, n) for n in names)

    @classmethod
    def monomial(cls, gens: Sequence[str], exps: Exponent, coef: Scalar = 1) -> "Polynomial":
        return cls(gens, {tuple(exps): Fraction(coef)})

    def zero(self) -> "Polynomial":
        return Polynomial(self.gens, {}, _trusted=True)

    def one(self) -> "Polynomial":
        return Polynomial.constant(self.gens, 1)

    # -- basic queries ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.gens), Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def support(self) -> Iterable[Exponent]:
        return self.terms.keys()

    def used_variables(self) -> set:
        return {self.gens[i] for e in self.terms for i, v in enumerate(e) if v}

    def sorted_terms(self, order: MonomialOrder = GREVLEX):
        key = order.key()
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_term(self, order: MonomialOrder = GREVLEX):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        key = order.key()
        e = max(self.terms, key=key)
        return e, self.terms[e]

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.gens != self.gens:
                raise VariableMismatch(f"ambient {other.gens} != {self.gens}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.gens, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial(self.gens, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.gens, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0:
                return self.zero()
            return Polynomial(self.gens, {e: v * c for e, v in self.terms.items()}, _trusted=True)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: Terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial(self.gens, _clean(out), _trusted=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and other != 0:
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result, base = self.one(), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def mul_term(self, exps: Exponent, coef: Scalar = 1) -> "Polynomial":
        coef = Fraction(coef)
        if coef == 0:
            return self.zero()
        return Polynomial(
            self.gens,
            {tuple(a + b for a, b in zip(e, exps)): c * coef for e, c in self.terms.items()},
            _trusted=True,
        )

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.gens, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.gens == other.gens and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.gens, frozenset(self.terms.items())))
        return self._hash

    # -- morphisms -------------------------------------------------------
    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Replace variable i by ``images[i]`` and expand."""
        if len(images) != len(self.gens):
            raise ArityMismatch(f"{len(images)} images for {len(self.gens)} variables")
        if not images:
            raise ArityMismatch("cannot substitute into a polynomial with no variables")
        target = images[0].gens
        for im in images:
            if im.gens != target:
                raise VariableMismatch("images must share an ambient")
        powers: Dict[Tuple[int, int], Polynomial] = {}

        def power(i, k):
            if (i, k) not in powers:
                powers[(i, k)] = images[i] ** k
            return powers[(i, k)]

        acc: Terms = {}
        for e, c in self.terms.items():
            term = Polynomial.constant(target, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            for m, v in term.terms.items():
                acc[m] = acc.get(m, 0) + v
        return Polynomial(target, _clean(acc), _trusted=True)

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != len(self.gens):
            raise ArityMismatch(f"point of length {len(point)} for {len(self.gens)} variables")
        pt = [Fraction(v) for v in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v *= x**k
            total += v
        return total

    def evaluate_complex(self, point: Sequence[complex]) -> complex:
        total = 0j
        for e, c in self.terms.items():
            v = complex(float(c))
            for x, k in zip(point, e):
                if k:
                    v *= x**k
            total += v
        return total

    def rename(self, gens: Sequence[str]) -> "Polynomial":
        """Same terms under new variable names (same arity)."""
        if len(gens) != len(self.gens):
            raise ArityMismatch("rename must keep the variable count")
        return Polynomial(gens, self.terms, _trusted=True)

    def embed(self, gens: Sequence[str]) -> "Polynomial":
        """Re-express in a larger (or permuted) ambient containing every used variable."""
        gens = tuple(gens)
        pos = []
        for i, name in enumerate(self.gens):
            if name in gens:
                pos.append(gens.index(name))
            else:
                pos.append(None)
        n = len(gens)
        out: Terms = {}
        for e, c in self.terms.items():
            ne = [0] * n
            for i, k in enumerate(e):
                if k:
                    if pos[i] is None:
                        raise VariableMismatch(f"{self.gens[i]!r} not in target ambient {gens}")
                    ne[pos[i]] = k
            out[tuple(ne)] = c
        return Polynomial(gens, out, _trusted=True)

    # -- printing --------------------------------------------------------
    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r}, gens={self.gens})"


def format_poly(p: Polynomial, order: MonomialOrder = GREVLEX) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for e, c in p.sorted_terms(order):
        mono = "*".join(
            (name if k == 1 else f"{name}^{k}") for name, k in zip(p.gens, e) if k
        )
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else f"{mag}*{mono}"
        else:
            body = str(mag)
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# --- textual syntax ---------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<rat>\d+/\d+)|(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9']*)|(?P<op>[-+*^()]))"
)


class PolySyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at offset {pos}")
        self.pos = pos


def tokenize_poly(text: str) -> Iterator[Tuple[str, str, int]]:
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolySyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        yield kind, m.group(kind), start
        pos = m.end()


class PolyParser:
    """Recursive-descent parser over a token list; also reused by the session DSL.

    Grammar: expr := ['-'|'+'] term (('+'|'-') term)* ; term := factor ('*' factor)* ;
    factor := atom ('^' INT)? ; atom := NUM | RAT | NAME | '(' expr ')'.
    """

    def __init__(self, tokens, gens: Sequence[str]):
        self.toks = list(tokens)
        self.i = 0
        self.gens = tuple(gens)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, value=None):
        tok = self.peek()
        if tok is None:
            raise PolySyntaxError("unexpected end of input", -1)
        if value is not None and tok[1] != value:
            raise PolySyntaxError(f"expected {value!r}, found {tok[1]!r}", tok[2])
        self.i += 1
        return tok

    def expr(self) -> Polynomial:
        tok = self.peek()
        neg = False
        if tok and tok[1] in "+-" and tok[0] == "op":
            neg = tok[1] == "-"
            self.take()
        acc = self.term()
        if neg:
            acc = -acc
        while (tok := self.peek()) and tok[0] == "op" and tok[1] in "+-":
            self.take()
            rhs = self.term()
            acc = acc + rhs if tok[1] == "+" else acc - rhs
        return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while (tok := self.peek()) and tok[0] == "op" and tok[1] == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self) -> Polynomial:
        base = self.atom()
        tok = self.peek()
        if tok and tok[1] == "^":
            self.take()
            exp = self.take()
            if exp[0] != "num":
                raise PolySyntaxError("exponent must be a non-negative integer", exp[2])
            base = base ** int(exp[1])
        return base

    def atom(self) -> Polynomial:
        tok = self.take()
        kind, val, pos = tok
        if kind == "num":
            return Polynomial.constant(self.gens, int(val))
        if kind == "rat":
            n, d = val.split("/")
            if int(d) == 0:
                raise PolySyntaxError("zero denominator", pos)
            return Polynomial.constant(self.gens, Fraction(int(n), int(d)))
        if kind == "name":
            if val not in self.gens:
                raise PolySyntaxError(f"unknown variable {val!r}", pos)
            return Polynomial.var(self.gens, val)
        if val == "(":
            inner = self.expr()
            self.take(")")
            return inner
        raise PolySyntaxError(f"unexpected {val!r}", pos)


def parse_poly(text: str, gens: Sequence[str]) -> Polynomial:
    """Parse ``text`` in the shared syntax (``+ - * ^``, parentheses, ``3/2`` literals)."""
    parser = PolyParser(tokenize_poly(text), gens)
    p = parser.expr()
    if parser.peek() is not None:
        tok = parser.peek()
        raise PolySyntaxError(f"trailing input {tok[1]!r}", tok[2])
    return p


def polys(gens: Sequence[str], *texts: str) -> Tuple[Polynomial, ...]:
    return tuple(parse_poly(t, gens) for t in texts)


def monomials_up_to(nvars: int, degree: int) -> Iterator[Exponent]:
    """All exponent vectors of total degree <= ``degree``, ascending by degree."""

    def rec(i, left):
        if i == nvars - 1:
            yield (left,)
            return
        for k in range(left, -1, -1):
            for rest in rec(i + 1, left - k):
                yield (k,) + rest

    if nvars == 0:
        yield ()
        return
    for d in range(degree + 1):
        yield from rec(0, d)
