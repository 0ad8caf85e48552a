"""Recursive-descent parser for operator and coefficient expressions.

Grammar (implicit multiplication by juxtaposition is accepted)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/' | <juxtaposition>) unary)*
    unary  := ('-' | '+') unary | power
    power  := atom (('^' | '**') ('-')? INT)?
    atom   := INT | NAME | '(' expr ')'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from ..exact import Poly, RatFunc
from ..ore import OrePoly, OreRing, normal_form


class ParseError(ValueError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        pointer = ""
        if text:
            pointer = f"\n  {text}\n  {' ' * pos}^"
        super().__init__(f"{message} at position {pos}{pointer}")


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


@dataclass
class Token:
    kind: str  # "int", "name", "op", "end"
    value: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            raise ParseError(f"unexpected character {text[i]!r}", i, text)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(Token("int", m.group(1), start))
        elif m.group(2):
            out.append(Token("name", m.group(2), start))
        else:
            out.append(Token("op", m.group(3), start))
        i = m.end()
    out.append(Token("end", "", len(text)))
    return out


@dataclass
class Algebra:
    """Callbacks giving meaning to the syntax."""

    number: Callable[[int], object]
    name: Callable[[str, int], object]
    power: Callable[[object, int, int], object]
    divide: Callable[[object, object, int], object]


class _Parser:
    def __init__(self, text: str, alg: Algebra):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.alg = alg

    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value: str):
        t = self.next()
        if t.kind != "op" or t.value != value:
            raise ParseError(f"expected {value!r}", t.pos, self.text)

    def parse(self):
        if self.peek().kind == "end":
            raise ParseError("empty expression", 0, self.text)
        v = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise ParseError(f"unexpected token {t.value!r}", t.pos, self.text)
        return v

    def expr(self):
        v = self.term()
        while True:
            t = self.peek()
            if t.kind == "op" and t.value in "+-" and t.value:
                self.next()
                w = self.term()
                v = v + w if t.value == "+" else v - w
            else:
                return v

    def _starts_atom(self, t: Token) -> bool:
        return t.kind in ("int", "name") or (t.kind == "op" and t.value == "(")

    def term(self):
        v = self.unary()
        while True:
            t = self.peek()
            if t.kind == "op" and t.value == "*":
                self.next()
                v = v * self.unary()
            elif t.kind == "op" and t.value == "/":
                self.next()
                w = self.unary()
                v = self.alg.divide(v, w, t.pos)
            elif self._starts_atom(t):
                v = v * self.power()
            else:
                return v

    def unary(self):
        t = self.peek()
        if t.kind == "op" and t.value in ("-", "+"):
            self.next()
            v = self.unary()
            return -v if t.value == "-" else v
        return self.power()

    def power(self):
        base = self.atom()
        t = self.peek()
        if t.kind == "op" and t.value in ("^", "**"):
            self.next()
            sign = 1
            nt = self.peek()
            if nt.kind == "op" and nt.value == "-":
                self.next()
                sign = -1
            elif nt.kind == "op" and nt.value == "(":
                # allow ^(k) and ^(-k)
                self.next()
                nt2 = self.peek()
                if nt2.kind == "op" and nt2.value == "-":
                    self.next()
                    sign = -1
                e = self.next()
                if e.kind != "int":
                    raise ParseError("integer exponent expected", e.pos, self.text)
                self.expect(")")
                return self.alg.power(base, sign * int(e.value), t.pos)
            e = self.next()
            if e.kind != "int":
                raise ParseError("integer exponent expected", e.pos, self.text)
            return self.alg.power(base, sign * int(e.value), t.pos)
        return base

    def atom(self):
        t = self.next()
        if t.kind == "int":
            return self.alg.number(int(t.value))
        if t.kind == "name":
            return self.alg.name(t.value, t.pos)
        if t.kind == "op" and t.value == "(":
            v = self.expr()
            self.expect(")")
            return v
        raise ParseError(f"unexpected token {t.value or 'end of input'!r}", t.pos, self.text)


def parse_with(text: str, alg: Algebra):
    return _Parser(text, alg).parse()


def _scalar_power(v, k):
    if k >= 0:
        return v ** k
    return (v ** (-k)).inverse() if hasattr(v, "inverse") else 1 / (v ** (-k))


def operator_algebra(ring: OreRing, text: str = "") -> Algebra:
    F = ring.coeff_field
    base = ring.base
    params = set(ring.params)
    gen_inv = ring.gen + "_inv"

    def number(k):
        return ring.scalar(k)

    def name(s, pos):
        if s == ring.var:
            return ring.var_elem()
        if s in params:
            return ring.scalar(base.gen(s))
        if s == ring.gen:
            return ring.generator(1)
        if s == gen_inv and ring.is_shift():
            return ring.generator(-1)
        if s in ("i", "I") and base.is_complex:
            from ..exact import GaussRat

            return ring.scalar(GaussRat(0, 1))
        if s.startswith("D") or s.startswith("S"):
            raise ParseError(f"unknown generator {s!r}", pos, text)
        raise ParseError(f"unknown symbol {s!r}", pos, text)

    def power(v: OrePoly, k, pos):
        if v.order <= 0 and v.low == 0:
            c = v.coeff(0)
            if k < 0 and not c:
                raise ParseError("negative power of zero", pos, text)
            return ring.scalar(c ** k)
        if k >= 0:
            return v ** k
        if ring.is_shift() and len(v.coeffs) == 1 and v.coeffs[0] == F.one:
            return ring.generator(v.low * k)
        raise ParseError("negative power of an operator", pos, text)

    def divide(a: OrePoly, b: OrePoly, pos):
        if b.order != 0 or b.low != 0:
            raise ParseError("division by an operator", pos, text)
        c = b.coeff(0)
        if not c:
            raise ParseError("division by zero", pos, text)
        return a * ring.scalar(c.inverse())

    return Algebra(number, name, power, divide)


def parse_operator(text: str, ring: OreRing | None = None, params=(), normalize=True) -> OrePoly:
    """Parse an operator; the ring is inferred from the generator name when absent."""
    if ring is None:
        ring = infer_ring(text, params)
    P = parse_with(text, operator_algebra(ring, text))
    return normal_form(P) if normalize else P


def explicit_ring(text: str, params=()) -> OreRing | None:
    """The ring named by a generator (Dx, Sn, Sn_inv) occurring in ``text``, if any."""
    from ..exact import field_for

    base = field_for(tuple(params))
    names = set(re.findall(r"[A-Za-z_][A-Za-z_0-9]*", text))
    for nm in sorted(names):
        m = re.fullmatch(r"D([A-Za-z][A-Za-z_0-9]*)", nm)
        if m and m.group(1) not in params:
            return OreRing.diff(m.group(1), base)
        m = re.fullmatch(r"S([A-Za-z][A-Za-z0-9]*)(_inv)?", nm)
        if m and m.group(1) not in params:
            return OreRing.shift(m.group(1), base)
    return None


def infer_ring(text: str, params=()) -> OreRing:
    from ..exact import field_for

    ring = explicit_ring(text, params)
    if ring is not None:
        return ring
    names = set(re.findall(r"[A-Za-z_][A-Za-z_0-9]*", text))
    base = field_for(tuple(params))
    # no generator: guess from the variable name
    free = [n for n in names if n not in params]
    var = free[0] if free else "x"
    if var in ("n", "k", "m"):
        return OreRing.shift(var, base)
    return OreRing.diff(var, base)


def ratfunc_algebra(var: str, field, text: str = "") -> Algebra:
    params = set(field.params)

    def number(k):
        return RatFunc.const(k, field)

    def name(s, pos):
        if s == var:
            return RatFunc.x(field)
        if s in params:
            return RatFunc.const(field.gen(s), field)
        if s in ("i", "I") and field.is_complex:
            from ..exact import GaussRat

            return RatFunc.const(GaussRat(0, 1), field)
        raise ParseError(f"unknown symbol {s!r}", pos, text)

    def power(v, k, pos):
        if k < 0 and not v:
            raise ParseError("negative power of zero", pos, text)
        return v ** k

    def divide(a, b, pos):
        if not b:
            raise ParseError("division by zero", pos, text)
        return a / b

    return Algebra(number, name, power, divide)


def parse_ratfunc(text: str, var: str, field) -> RatFunc:
    return parse_with(text, ratfunc_algebra(var, field, text))


def parse_poly(text: str, var: str, field) -> Poly:
    r = parse_ratfunc(text, var, field)
    if r.den.deg != 0:
        raise ParseError("expected a polynomial", 0, text)
    return r.num.scale(field.one / r.den.lc)


def parse_scalar(text: str, field):
    """A field element: rational number, Gaussian rational or parameter expression."""
    r = parse_ratfunc(text, "\0", field)
    return r.num.coeff(0) / r.den.coeff(0)
