"""Text grammar for set expressions.

::

    all | empty | odd | squares | taudiv | ap(r,m) | periodic(L,{r,...})
    val(p,{e,...}) | val(p,ap(a,d),K)
    mval((p,{e,...}),(p,ap(a,d),K),...)
    balpha(bits,K) | balpha(p/q,K)
    pt(t) | rt(t;p1,p2,...) | rt(t;default)
    slice(expr,p) | scale(a,expr) | union(e,...) | inter(e,...) | comp(e)

``format`` on any parsed expression produces text that parses back to an
equal expression.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .measure import ExponentSet
from .periodic import PeriodicSet
from .sets import (
    AP,
    All,
    BAlpha,
    Complement,
    Empty,
    Intersect,
    MultiValuation,
    Odd,
    Periodic,
    PSlice,
    PtMax,
    RtMax,
    Scale,
    SetExpr,
    Squares,
    TauDivides,
    Union,
    Valuation,
    default_rt_primes,
)

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]+)|(.))")


class ParseError(ValueError):
    def __init__(self, message: str, token: str, pos: int):
        super().__init__(f"{message}: {token!r} at position {pos}")
        self.token, self.pos = token, pos


class _Parser:
    def __init__(self, text: str):
        self.text = text = text.rstrip()
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                break
            if m.group(1) is not None:
                self.toks.append(("int", m.group(1), m.start(1)))
            elif m.group(2) is not None:
                self.toks.append(("name", m.group(2), m.start(2)))
            elif m.group(3) is not None:
                self.toks.append(("punct", m.group(3), m.start(3)))
            pos = m.end()
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        if self.i < len(self.toks):
            return self.toks[self.i]
        return ("end", "<end>", len(self.text))

    def next(self) -> tuple[str, str, int]:
        tok = self.peek()
        self.i += 1
        return tok

    def fail(self, message: str, tok=None):
        kind, val, pos = tok or self.peek()
        raise ParseError(message, val, pos)

    def expect(self, punct: str) -> None:
        tok = self.next()
        if tok[0] != "punct" or tok[1] != punct:
            self.fail(f"expected {punct!r}", tok)

    def accept(self, punct: str) -> bool:
        kind, val, _ = self.peek()
        if kind == "punct" and val == punct:
            self.i += 1
            return True
        return False

    def int(self) -> int:
        tok = self.next()
        if tok[0] != "int":
            self.fail("expected integer", tok)
        return int(tok[1])

    def int_list(self, close: str) -> list[int]:
        out = []
        if self.accept(close):
            return out
        out.append(self.int())
        while self.accept(","):
            out.append(self.int())
        self.expect(close)
        return out

    def exponents(self) -> ExponentSet:
        kind, val, pos = self.peek()
        if kind == "punct" and val == "{":
            self.next()
            try:
                return ExponentSet.explicit(self.int_list("}"))
            except ValueError as exc:
                if isinstance(exc, ParseError):
                    raise
                raise ParseError(str(exc), val, pos) from None
        if kind == "name" and val == "ap":
            self.next()
            self.expect("(")
            a = self.int()
            self.expect(",")
            d = self.int()
            self.expect(")")
            self.expect(",")
            K = self.int()
            try:
                return ExponentSet.ap(a, d, K)
            except ValueError as exc:
                raise ParseError(str(exc), val, pos) from None
        self.fail("expected exponent set '{...}' or 'ap(a,d),K'")

    def expr(self) -> SetExpr:
        tok = self.next()
        kind, name, pos = tok
        if kind != "name":
            self.fail("expected set expression", tok)
        try:
            return self._node(name, tok)
        except ParseError:
            raise
        except ValueError as exc:
            raise ParseError(str(exc), name, pos) from None

    def _node(self, name: str, tok) -> SetExpr:
        simple = {"all": All, "empty": Empty, "odd": Odd, "squares": Squares, "taudiv": TauDivides}
        if name in simple:
            return simple[name]()
        self.expect("(")
        if name == "ap":
            r = self.int()
            self.expect(",")
            m = self.int()
            node = AP(r, m)
        elif name == "periodic":
            L = self.int()
            self.expect(",")
            self.expect("{")
            node = Periodic(PeriodicSet(L, self.int_list("}")))
        elif name == "val":
            p = self.int()
            self.expect(",")
            node = Valuation(p, self.exponents())
        elif name == "mval":
            pairs = []
            while True:
                self.expect("(")
                p = self.int()
                self.expect(",")
                pairs.append((p, self.exponents()))
                self.expect(")")
                if not self.accept(","):
                    break
            node = MultiValuation(tuple(pairs))
        elif name == "balpha":
            first = self.int_token()
            if self.accept("/"):
                q = self.int()
                self.expect(",")
                node = BAlpha.from_alpha(Fraction(int(first), q), self.int())
            else:
                self.expect(",")
                node = BAlpha.from_bits(first, self.int())
        elif name == "pt":
            node = PtMax(self.int())
        elif name == "rt":
            t = self.int()
            self.expect(";")
            kind, val, _ = self.peek()
            if kind == "name" and val == "default":
                self.next()
                node = RtMax(t, default_rt_primes())
            else:
                primes = [self.int()]
                while self.accept(","):
                    primes.append(self.int())
                node = RtMax(t, tuple(primes))
        elif name == "slice":
            inner = self.expr()
            self.expect(",")
            node = PSlice(inner, self.int())
        elif name == "scale":
            a = self.int()
            self.expect(",")
            node = Scale(a, self.expr())
        elif name in ("union", "inter"):
            children = [self.expr()]
            while self.accept(","):
                children.append(self.expr())
            node = Union(tuple(children)) if name == "union" else Intersect(tuple(children))
        elif name == "comp":
            node = Complement(self.expr())
        else:
            self.fail("unknown set constructor", tok)
        self.expect(")")
        return node

    def int_token(self) -> str:
        tok = self.next()
        if tok[0] != "int":
            self.fail("expected digits", tok)
        return tok[1]


def parse(text: str) -> SetExpr:
    p = _Parser(text)
    node = p.expr()
    if p.peek()[0] != "end":
        p.fail("unexpected trailing input")
    return node


def format_expr(expr: SetExpr) -> str:
    return expr.format()
