"""Text formats for rational functions, divisors, Witt vectors and map files.

The grammar (EBNF, whitespace ignored)::

    ratfun   = expr ;
    expr     = [ "-" ] term { ( "+" | "-" ) term } ;
    term     = factor { ( "*" | "/" ) factor } ;
    factor   = atom [ "^" [ "-" ] integer ] ;
    atom     = integer | "t" | "g" | "(" expr ")" ;   (* g: fixed generator of F_q* *)
    divisor  = "0" | dterm { ( "+" | "-" ) dterm } ;
    dterm    = [ integer "*" ] place ;
    place    = "inf" | "(" expr ")" ;            (* monic irreducible polynomial *)
    witt     = "(" expr { ";" expr } ")" ;
    mapfile  = entry { ";" entry } [ ";" ] ;
    entry    = "p" "=" integer | "m" "=" integer | "r" "=" integer
             | "toric" "=" "[" [ expr { "," expr } ] "]"
             | "unip" "=" "[" [ witt { "," witt } ] "]" ;

Integers inside expressions are field elements in the integer encoding of
``F_{p^m}`` (base-p digits are coordinates), so they must be ``< p^m``.
Alternatively ``g^k`` names the k-th power of the fixed generator.
"""
from __future__ import annotations

import re

from .curve import Divisor
from .errors import DomainError, ParseError
from .fields import FiniteField, GF
from .modulus import RationalMapData
from .places import Place
from .poly import Poly
from .ratfun import RatFun
from .witt import WittVector

_TOKEN = re.compile(r"\s*(?:(\d+)|(inf|toric|unip|[a-z]+)|(.))")


def _tokenize(text: str):
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        start = m.start(m.lastindex) if m.lastindex else pos
        if m.group(1) is not None:
            out.append(("int", int(m.group(1)), start))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), start))
        elif m.group(3) is not None:
            out.append(("sym", m.group(3), start))
        pos = m.end()
    out.append(("end", None, n))
    return out


class _Parser:
    def __init__(self, text: str, field: FiniteField | None = None):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.field = field

    # token helpers
    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def accept(self, kind, value=None):
        tok = self.peek()
        if tok[0] == kind and (value is None or tok[1] == value):
            self.i += 1
            return tok
        return None

    def expect(self, kind, value=None):
        tok = self.accept(kind, value)
        if tok is None:
            want = value if value is not None else kind
            self.error(f"expected {want!r}")
        return tok

    def done(self):
        if self.peek()[0] != "end":
            self.error("unexpected trailing input")

    # rational functions
    def expr(self) -> RatFun:
        F = self.field
        neg = self.accept("sym", "-") is not None
        acc = self.term()
        if neg:
            acc = -acc
        while True:
            if self.accept("sym", "+"):
                acc = acc + self.term()
            elif self.accept("sym", "-"):
                acc = acc - self.term()
            else:
                return acc

    def term(self) -> RatFun:
        acc = self.factor()
        while True:
            tok = self.peek()
            if self.accept("sym", "*"):
                acc = acc * self.factor()
            elif self.accept("sym", "/"):
                rhs = self.factor()
                if not rhs:
                    self.error("division by zero", tok)
                acc = acc / rhs
            else:
                return acc

    def factor(self) -> RatFun:
        base = self.atom()
        if self.accept("sym", "^"):
            neg = self.accept("sym", "-") is not None
            tok = self.expect("int")
            e = -tok[1] if neg else tok[1]
            if e < 0 and not base:
                self.error("zero to a negative power", tok)
            base = base**e
        return base

    def atom(self) -> RatFun:
        F = self.field
        tok = self.peek()
        if self.accept("int"):
            if tok[1] >= F.order:
                self.error(f"coefficient {tok[1]} is not an element of a field with {F.order} elements", tok)
            return RatFun.const(F, tok[1])
        if self.accept("name", "t"):
            return RatFun.t(F)
        if self.accept("name", "g"):
            return RatFun.const(F, F.exp(1))
        if self.accept("sym", "("):
            val = self.expr()
            self.expect("sym", ")")
            return val
        self.error("expected a number, 't' or '('")

    # divisors
    def place(self) -> Place:
        F = self.field
        if self.accept("name", "inf"):
            return Place.infinity(F)
        tok = self.expect("sym", "(")
        f = self.expr()
        self.expect("sym", ")")
        if f.den.degree != 0 or f.num.degree < 1:
            self.error("a place must be a nonconstant polynomial", tok)
        poly = f.num.scale(F.inv(f.den.lc()))
        try:
            return Place(F, poly)
        except DomainError as exc:
            raise ParseError(str(exc), self.text, tok[2]) from None

    def divisor(self) -> Divisor:
        F = self.field
        if self.peek()[0] == "int" and self.peek()[1] == 0 and self.toks[self.i + 1][0] == "end":
            self.next()
            return Divisor.zero(F)
        coeffs = {}
        sign = -1 if self.accept("sym", "-") else 1
        while True:
            n = 1
            if self.peek()[0] == "int":
                n = self.next()[1]
                self.expect("sym", "*")
            q = self.place()
            coeffs[q] = coeffs.get(q, 0) + sign * n
            if self.accept("sym", "+"):
                sign = 1
            elif self.accept("sym", "-"):
                sign = -1
            else:
                return Divisor(F, coeffs)

    def witt(self) -> WittVector:
        self.expect("sym", "(")
        comps = [self.expr()]
        while self.accept("sym", ";"):
            comps.append(self.expr())
        self.expect("sym", ")")
        return WittVector(comps, self.field.p)


def _run(text, field, method):
    p = _Parser(text, field)
    try:
        out = getattr(p, method)()
        p.done()
    except ZeroDivisionError:
        raise ParseError("division by zero", text, p.peek()[2]) from None
    return out


def parse_ratfun(text: str, field: FiniteField) -> RatFun:
    return _run(text, field, "expr")


def parse_divisor(text: str, field: FiniteField) -> Divisor:
    return _run(text, field, "divisor")


def parse_witt(text: str, field: FiniteField) -> WittVector:
    return _run(text, field, "witt")


def parse_place(text: str, field: FiniteField) -> Place:
    return _run(text, field, "place")


def parse_map(text: str) -> RationalMapData:
    """Parse a map file ``p=..; m=..; r=..; toric=[..]; unip=[(..),..]``."""
    p = _Parser(text)
    raw = {}
    while p.peek()[0] != "end":
        key = p.expect("name")
        if key[1] not in ("p", "m", "r", "toric", "unip"):
            p.error(f"unknown key {key[1]!r}", key)
        if key[1] in raw:
            p.error(f"duplicate key {key[1]!r}", key)
        p.expect("sym", "=")
        if key[1] in ("p", "m", "r"):
            raw[key[1]] = p.expect("int")[1]
        else:
            # remember the token span; parsed once the field is known
            start = p.expect("sym", "[")
            depth = 1
            body_start = p.i
            while depth:
                tok = p.next()
                if tok[0] == "end":
                    p.error("unterminated list", start)
                if tok[1] in ("[", "("):
                    depth += 1
                elif tok[1] in ("]", ")"):
                    depth -= 1
            raw[key[1]] = (body_start, p.i - 1)
        if not p.accept("sym", ";"):
            break
    p.done()
    if "p" not in raw:
        p.error("missing key 'p'")
    m = raw.get("m", 1)
    try:
        F = GF(raw["p"], m)
    except DomainError as exc:
        raise ParseError(str(exc), text, 0) from None
    p.field = F
    r = raw.get("r", 1)

    def items(key, method):
        if key not in raw:
            return []
        lo, hi = raw[key]
        out = []
        p.i = lo
        if lo == hi:
            return out
        while True:
            out.append(getattr(p, method)())
            if p.i == hi:
                return out
            p.expect("sym", ",")

    toric = items("toric", "expr")
    unip = items("unip", "witt")
    try:
        return RationalMapData(F, toric=toric, unip=unip, r=r)
    except DomainError as exc:
        raise ParseError(str(exc), text, 0) from None


def format_witt(w: WittVector) -> str:
    return "(" + ";".join(c.format() if hasattr(c, "format") else repr(c) for c in w.comps) + ")"


def format_map(phi: RationalMapData) -> str:
    toric = ",".join(f.format() for f in phi.toric)
    unip = ",".join(format_witt(w) for w in phi.unip)
    return f"p={phi.p}; m={phi.field.degree}; r={phi.r}; toric=[{toric}]; unip=[{unip}]"
