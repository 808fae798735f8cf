"""Parsers for the profile and norm mini-languages used on the command line.

Profiles::

    power(0.5)  product(2)  gauss  log  tab:profile.csv
    john(3,1)   mazya(0.75,2)   tilde(power(0.25))

Norms::

    Lp:2  Lp:inf  LZ:6,2  LZ:6,2,0,0  Lambda:power(0.5)  mI:power(0.5)
    MI:power(0.5)  Z:Lp:2@power(0.5)  WeakL1  Down:Lp:2

Numbers may be written as decimals, ``inf`` or fractions such as ``2/3``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from rispace.norms import (
    BigM,
    DownDualVia,
    LambdaI,
    Lp,
    LorentzZygmund,
    NormFunctional,
    SmallM,
    WeakL1,
    ZNorm,
)
from rispace.profiles import LogProfile, Profile, TabulatedProfile, power_profile, product_profile

__all__ = ["SpecError", "parse_profile", "parse_norm"]

_NUMBER = re.compile(r"[+-]?(inf|\d+(\.\d*)?([eE][+-]?\d+)?(/\d+)?|\.\d+([eE][+-]?\d+)?)")
_WORD = re.compile(r"[A-Za-z][A-Za-z0-9]*")


class SpecError(ValueError):
    """Malformed spec; ``position`` is the 0-based offset of the problem."""

    def __init__(self, text: str, position: int, message: str):
        self.text = text
        self.position = position
        self.message = message
        caret = " " * position + "^"
        super().__init__(f"{message} at position {position}\n  {text}\n  {caret}")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def fail(self, message: str, pos: int | None = None):
        raise SpecError(self.text, self.pos if pos is None else pos, message)

    def peek(self, s: str) -> bool:
        return self.text.startswith(s, self.pos)

    def expect(self, s: str) -> None:
        if not self.peek(s):
            found = self.text[self.pos : self.pos + 1] or "end of input"
            self.fail(f"expected {s!r}, found {found!r}")
        self.pos += len(s)

    def word(self) -> str:
        m = _WORD.match(self.text, self.pos)
        if not m:
            self.fail("expected a name")
        self.pos = m.end()
        return m.group(0)

    def number(self) -> float:
        m = _NUMBER.match(self.text, self.pos)
        if not m:
            self.fail("expected a number")
        self.pos = m.end()
        raw = m.group(0)
        if raw.lstrip("+-") == "inf":
            return -math.inf if raw.startswith("-") else math.inf
        if "/" in raw:
            return float(Fraction(raw))
        return float(raw)

    def numbers(self, lo: int, hi: int) -> list[float]:
        start = self.pos
        out = [self.number()]
        while self.peek(","):
            self.pos += 1
            out.append(self.number())
        if not lo <= len(out) <= hi:
            self.fail(f"expected {lo} to {hi} numbers, got {len(out)}", start)
        return out

    def done(self) -> None:
        if self.pos != len(self.text):
            self.fail(f"unexpected trailing text {self.text[self.pos:]!r}")

    # -- profiles ------------------------------------------------------------
    def profile(self) -> Profile:
        start = self.pos
        if self.peek("tab:"):
            self.pos += 4
            end = self.text.find("@", self.pos)
            end = len(self.text) if end < 0 else end
            path = self.text[self.pos : end]
            if not path:
                self.fail("expected a CSV path")
            self.pos = end
            try:
                return TabulatedProfile.from_csv(path)
            except (OSError, ValueError) as exc:
                self.fail(f"cannot read tabulated profile: {exc}", start + 4)
        name = self.word()
        arg_pos = start
        try:
            if name == "gauss":
                return product_profile(2.0)
            if name == "log":
                return LogProfile()
            if name == "linear":
                return power_profile(1.0)
            if name == "tilde":
                self.expect("(")
                inner = self.profile()
                self.expect(")")
                return inner.tilde()
            self.expect("(")
            arg_pos = self.pos
            if name == "power":
                (a,) = self.numbers(1, 1)
                self.expect(")")
                return power_profile(a)
            if name == "product":
                (p,) = self.numbers(1, 1)
                self.expect(")")
                return product_profile(p)
            if name in ("john", "mazya"):
                from rispace.optimal import John, Mazya, sobolev_preset

                args = self.numbers(2, 3 if name == "mazya" else 2)
                self.expect(")")
                if name == "john":
                    return sobolev_preset(John(int(args[0]), int(args[1])))
                n = int(args[2]) if len(args) == 3 else None
                return sobolev_preset(Mazya(args[0], int(args[1]), n))
        except SpecError:
            raise
        except ValueError as exc:
            self.fail(str(exc), arg_pos)
        self.fail(f"unknown profile {name!r}", start)

    # -- norms ---------------------------------------------------------------
    def norm(self) -> NormFunctional:
        start = self.pos
        name = self.word()
        if name == "WeakL1":
            return WeakL1()
        self.expect(":")
        arg = self.pos
        try:
            if name == "Lp":
                (p,) = self.numbers(1, 1)
                return Lp(p)
            if name == "LZ":
                vals = self.numbers(2, 4)
                return LorentzZygmund(*vals)
            if name == "Lambda":
                return LambdaI(self.profile())
            if name == "mI":
                return SmallM(self.profile())
            if name == "MI":
                return BigM(self.profile())
            if name == "Z":
                base = self.norm()
                self.expect("@")
                return ZNorm(base, self.profile())
            if name == "Down":
                return DownDualVia(self.norm())
        except SpecError:
            raise
        except ValueError as exc:
            self.fail(str(exc), arg)
        self.fail(f"unknown norm {name!r}", start)


def parse_profile(text: str) -> Profile:
    p = _Parser(text.strip())
    out = p.profile()
    p.done()
    return out


def parse_norm(text: str) -> NormFunctional:
    p = _Parser(text.strip())
    out = p.norm()
    p.done()
    return out
