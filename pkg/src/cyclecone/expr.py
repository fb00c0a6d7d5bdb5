"""A small language for cycle-class expressions.

    expr := ['-'] term (('+' | '-') term)*
    term := [rational '*'] gen
    gen  := 'H{' int (',' int)* '}' | 'E' int | 'E{' int ',' int '}'
          | ident ['(' [rational (',' rational)*] ')']

Named generators: ``Ws(s)``, ``D1``, ``D2`` and ``phi(c0, c1, ..)`` (the image
under phi of ``c0 H + c1 E_1 + ..``).  Whitespace is ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .chow_ring import ChowElement, RingContext
from .cycle_spaces import CycleClass, DimensionMismatchError, exceptional_class, from_chow, to_chow


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class ExprIndexError(ValueError):
    pass


NAMED = {"Ws": 1, "D1": 0, "D2": 0, "phi": None}


@dataclass(frozen=True)
class HGen:
    indices: tuple

    def __str__(self):
        return "H{" + ",".join(map(str, self.indices)) + "}"


@dataclass(frozen=True)
class EGen:
    j: int
    k: int | None = None

    def __str__(self):
        return f"E{self.j}" if self.k is None else f"E{{{self.j},{self.k}}}"


@dataclass(frozen=True)
class Named:
    name: str
    args: tuple = ()

    def __str__(self):
        if not self.args and NAMED.get(self.name) == 0:
            return self.name
        return f"{self.name}(" + ", ".join(_fmt(a) for a in self.args) + ")"


@dataclass(frozen=True)
class Term:
    coeff: Fraction
    gen: object


@dataclass(frozen=True)
class ClassExpr:
    terms: tuple

    def __str__(self):
        out = ""
        for t in self.terms:
            c = t.coeff
            body = str(t.gen) if abs(c) == 1 else f"{_fmt(abs(c))}*{t.gen}"
            if not out:
                out = ("-" if c < 0 else "") + body
            else:
                out += (" - " if c < 0 else " + ") + body
        return out


def _fmt(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.fail(f"expected {ch!r}")
        self.pos += 1

    def fail(self, message: str):
        self.skip()
        found = repr(self.text[self.pos]) if self.pos < len(self.text) else "end of input"
        raise ExprSyntaxError(f"{message}, found {found}", len(self.text[:self.pos].encode()))

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail("expected an integer")
        return int(self.text[start:self.pos])

    def rational(self) -> Fraction:
        sign = 1
        if self.peek() == "-":
            self.pos += 1
            sign = -1
        p = self.integer()
        if self.peek() == "/":
            self.pos += 1
            at = self.pos
            q = self.integer()
            if q == 0:
                raise ExprSyntaxError("zero denominator", at)
            return sign * Fraction(p, q)
        return Fraction(sign * p)

    def ident(self) -> str:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        return self.text[start:self.pos]

    def expr(self) -> ClassExpr:
        sign = 1
        if self.peek() == "-":
            self.pos += 1
            sign = -1
        terms = [self.term(sign)]
        while self.peek() in ("+", "-"):
            sign = 1 if self.text[self.pos] == "+" else -1
            self.pos += 1
            terms.append(self.term(sign))
        if self.peek():
            self.fail("expected '+', '-' or end of input")
        return ClassExpr(tuple(terms))

    def term(self, sign: int) -> Term:
        coeff = Fraction(1)
        if self.peek().isdigit():
            coeff = self.rational()
            self.expect("*")
        return Term(sign * coeff, self.gen())

    def gen(self):
        ch = self.peek()
        start = self.pos
        if ch == "H" and self._next_nonspace(self.pos + 1) == "{":
            self.pos += 1
            self.expect("{")
            indices = [self.integer()]
            while self.peek() == ",":
                self.pos += 1
                indices.append(self.integer())
            self.expect("}")
            return HGen(tuple(indices))
        if ch == "E":
            nxt = self._next_nonspace(self.pos + 1)
            if nxt == "{":
                self.pos += 1
                self.expect("{")
                j = self.integer()
                self.expect(",")
                k = self.integer()
                self.expect("}")
                return EGen(j, k)
            if nxt.isdigit():
                self.pos += 1
                return EGen(self.integer())
        if not ch.isalpha():
            self.fail("expected a generator")
        name = self.ident()
        if name not in NAMED:
            raise ExprSyntaxError(f"unknown generator {name!r}", len(self.text[:start].encode()))
        args = []
        if self.peek() == "(":
            self.pos += 1
            if self.peek() != ")":
                args.append(self.rational())
                while self.peek() == ",":
                    self.pos += 1
                    args.append(self.rational())
            self.expect(")")
        arity = NAMED[name]
        if arity is not None and len(args) != arity:
            raise ExprSyntaxError(f"{name} takes {arity} argument(s), got {len(args)}", len(self.text[:start].encode()))
        return Named(name, tuple(args))

    def _next_nonspace(self, i: int) -> str:
        while i < len(self.text) and self.text[i].isspace():
            i += 1
        return self.text[i] if i < len(self.text) else ""


def parse(text: str, context: RingContext | None = None, k: int | None = None) -> ClassExpr:
    """Parse ``text``; with a context, indices are validated as well."""
    tree = _Parser(text).expr()
    for t in tree.terms:
        if isinstance(t.gen, HGen) and len(set(t.gen.indices)) != len(t.gen.indices):
            dup = next(i for i in t.gen.indices if t.gen.indices.count(i) > 1)
            raise ExprIndexError(f"repeated index {dup} in {t.gen}")
    if context is not None:
        validate(tree, context, k)
    return tree


def validate(tree: ClassExpr, ctx: RingContext, k: int | None = None) -> None:
    n, r = ctx.n, ctx.r
    for t in tree.terms:
        g = t.gen
        if isinstance(g, HGen):
            for i in g.indices:
                if not 1 <= i <= n:
                    raise ExprIndexError(f"index {i} in {g} is out of range 1..{n}")
        elif isinstance(g, EGen):
            if not 1 <= g.j <= r:
                raise ExprIndexError(f"point index {g.j} in {g} is out of range 1..{r}")
            if g.k is not None and not 1 <= g.k <= n - 1:
                raise ExprIndexError(f"dimension {g.k} in {g} is out of range 1..{n - 1}")
        elif isinstance(g, Named):
            if g.name in ("D1", "D2") and (n, r) != (4, 4):
                raise ExprIndexError(f"{g.name} lives on X_4^4, not on X_{r}^{n}")
            if g.name == "Ws":
                s = g.args[0]
                if s.denominator != 1 or not 1 <= s <= n - 1:
                    raise ExprIndexError(f"index {_fmt(s)} in {g} is out of range 1..{n - 1}")
                if r < 1:
                    raise ExprIndexError(f"{g} needs a blown-up point")
            if g.name == "phi" and len(g.args) > n + r:
                raise ExprIndexError(f"phi takes at most {n + r} coefficients on X_{r}^{n}")


def _named_chow(g: Named, ctx: RingContext) -> ChowElement:
    from .theorems import W_divisor, phi_map, prop44_divisors

    if g.name == "Ws":
        return W_divisor(ctx, int(g.args[0]))
    if g.name in ("D1", "D2"):
        return prop44_divisors()[g.name == "D2"]
    return to_chow(phi_map(ctx.n, ctx.r).forward(g.args))


def to_ring(tree: ClassExpr, ctx: RingContext) -> ChowElement:
    """Value in the Chow ring: ``H{I}`` is the product of the ``h_i``, ``E j`` is ``e_j``."""
    validate(tree, ctx)
    total = ctx.zero()
    for t in tree.terms:
        g = t.gen
        if isinstance(g, HGen):
            x = ctx.one()
            for i in g.indices:
                x = x * ctx.h(i)
        elif isinstance(g, EGen):
            x = ctx.e(g.j) if g.k is None else to_chow(exceptional_class(ctx, g.k, g.j))
        else:
            x = _named_chow(g, ctx)
        total = total + x * t.coeff
    return total


def to_class(tree: ClassExpr, ctx: RingContext, k: int) -> CycleClass:
    """Value as a k-dimensional class; ``E j`` means ``E_{j,k}``."""
    validate(tree, ctx, k)
    n = ctx.n
    total = CycleClass(ctx, k)
    for t in tree.terms:
        g = t.gen
        if isinstance(g, HGen):
            if len(g.indices) != n - k:
                raise DimensionMismatchError(f"{g} has dimension {n - len(g.indices)}, expected {k}")
            x = CycleClass(ctx, k, {frozenset(g.indices): 1})
        elif isinstance(g, EGen):
            if g.k is not None and g.k != k:
                raise DimensionMismatchError(f"{g} has dimension {g.k}, expected {k}")
            x = exceptional_class(ctx, k, g.j)
        else:
            x = from_chow(_named_chow(g, ctx), k)
        total = total + x * t.coeff
    return total


def class_expr(c: CycleClass) -> ClassExpr:
    """Expression of a class in the ``H{..}`` / ``E{j,k}`` generators."""
    terms = [Term(Fraction(v), HGen(tuple(sorted(I)))) for I, v in c.h_coeffs.items() if v]
    terms.sort(key=lambda t: (len(t.gen.indices), t.gen.indices))
    terms += [Term(Fraction(v), EGen(j, c.k)) for j, v in sorted(c.e_coeffs.items()) if v]
    return ClassExpr(tuple(terms))
