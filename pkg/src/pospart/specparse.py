"""Parser and renderer for the distribution mini-language.

Grammar (whitespace-insensitive, numbers are decimal literals with an
optional exponent):

    SPEC := point(x)
          | discrete(x1:w1, x2:w2, ...)
          | normal(mu, var)
          | cpoisson(lambda, y)
          | shift(SPEC, c)
          | sum(SPEC, SPEC)

parse_spec builds the DistributionSpec tree directly; the tree mirrors the
grammar one-to-one, so render(parse_spec(s)) parses back to an equal tree.
Parse errors carry a 1-based byte offset and an expected-token message;
invariant violations (weight sums, negative variances) surface as semantic
errors with the offset of the offending construct.
"""

from __future__ import annotations

import re

from .distributions import (
    CenteredScaledPoisson,
    DistributionSpec,
    FiniteDiscrete,
    IndependentSum,
    Normal,
    PointMass,
    Shift,
)
from .errors import PreconditionError, SpecParseError, SpecSemanticError

_NUMBER = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")
_NAME = re.compile(r"[a-zA-Z_]+")


class _Cursor:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    @property
    def offset(self) -> int:
        # 1-based byte offset of the current position
        return len(self.text[: self.pos].encode()) + 1

    def fail(self, expected: str):
        got = self.text[self.pos : self.pos + 12] or "end of input"
        raise SpecParseError(f"expected {expected}, got {got!r}", self.offset)

    def expect(self, ch: str):
        self.skip_ws()
        if self.pos < len(self.text) and self.text[self.pos] == ch:
            self.pos += 1
            return
        self.fail(f"'{ch}'")

    def number(self) -> float:
        self.skip_ws()
        m = _NUMBER.match(self.text, self.pos)
        if not m:
            self.fail("a number")
        self.pos = m.end()
        return float(m.group())

    def name(self) -> tuple[str, int]:
        self.skip_ws()
        at = self.offset
        m = _NAME.match(self.text, self.pos)
        if not m:
            self.fail("a distribution name")
        self.pos = m.end()
        return m.group(), at


def _spec(cur: _Cursor) -> DistributionSpec:
    word, at = cur.name()
    cur.expect("(")
    try:
        if word == "point":
            x = cur.number()
            cur.expect(")")
            return PointMass(x)
        if word == "discrete":
            pairs = []
            while True:
                x = cur.number()
                cur.expect(":")
                w = cur.number()
                pairs.append((x, w))
                cur.skip_ws()
                if cur.pos < len(cur.text) and cur.text[cur.pos] == ",":
                    cur.pos += 1
                    continue
                break
            cur.expect(")")
            return FiniteDiscrete(tuple(pairs))
        if word == "normal":
            mu = cur.number()
            cur.expect(",")
            var = cur.number()
            cur.expect(")")
            return Normal(mu, var)
        if word == "cpoisson":
            lam = cur.number()
            cur.expect(",")
            y = cur.number()
            cur.expect(")")
            return CenteredScaledPoisson(lam, y)
        if word == "shift":
            inner = _spec(cur)
            cur.expect(",")
            c = cur.number()
            cur.expect(")")
            return Shift(inner, c)
        if word == "sum":
            left = _spec(cur)
            cur.expect(",")
            right = _spec(cur)
            cur.expect(")")
            return IndependentSum(left, right)
    except PreconditionError as exc:
        # constructor invariants become semantic errors at the call site
        raise SpecSemanticError(str(exc), at) from exc
    raise SpecParseError(
        "expected one of point, discrete, normal, cpoisson, shift, sum", at
    )


def parse_spec(text: str) -> DistributionSpec:
    """Parse a spec string; raises SpecParseError / SpecSemanticError."""
    cur = _Cursor(text)
    spec = _spec(cur)
    cur.skip_ws()
    if cur.pos != len(cur.text):
        cur.fail("end of input")
    return spec


def render(spec: DistributionSpec) -> str:
    """Canonical spec string; parse_spec(render(s)) equals s."""
    if isinstance(spec, PointMass):
        return f"point({spec.x!r})"
    if isinstance(spec, FiniteDiscrete):
        inner = ", ".join(f"{x!r}:{w!r}" for x, w in spec.atoms)
        return f"discrete({inner})"
    if isinstance(spec, Normal):
        return f"normal({spec.mu!r}, {spec.var!r})"
    if isinstance(spec, CenteredScaledPoisson):
        return f"cpoisson({spec.lam!r}, {spec.y!r})"
    if isinstance(spec, Shift):
        return f"shift({render(spec.inner)}, {spec.c!r})"
    if isinstance(spec, IndependentSum):
        return f"sum({render(spec.left)}, {render(spec.right)})"
    raise PreconditionError(f"unknown spec {spec!r}")
