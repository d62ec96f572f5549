"""Sparse multivariate polynomials with rational coefficients.

Just enough ring to check polynomial identities and sign certificates: exact
+, −, ×, integer powers, substitution of a symbol by a polynomial, and a
square-root extraction. Terms are keyed by exponent vectors over the fixed
symbol tuple `SYMBOLS`; the canonical order is graded lex with that symbol order.
"""

from __future__ import annotations

import math
import typing
from fractions import Fraction

SYMBOLS = (
    "n",
    "e",
    "sigma_l",
    "sigma_u",
    "sigma_sing",
    "sigma_ns",
    "lam",
    "ord_t",
    "s_vert",
    "horiz",
    "vert",
)
_INDEX = {name: i for i, name in enumerate(SYMBOLS)}

Exponents = typing.Tuple[int, ...]


def _order_key(exps: Exponents):
    return (sum(exps), exps)


def _rational_sqrt(c: Fraction) -> typing.Optional[Fraction]:
    if c < 0:
        return None
    num, den = math.isqrt(c.numerator), math.isqrt(c.denominator)
    if num * num != c.numerator or den * den != c.denominator:
        return None
    return Fraction(num, den)


class MultiPoly:
    __slots__ = ("_terms",)

    def __init__(self, terms: typing.Optional[typing.Mapping[Exponents, Fraction]] = None):
        clean = {}
        for exps, c in (terms or {}).items():
            if len(exps) != len(SYMBOLS):
                raise ValueError(f"exponent vector {exps} has the wrong length")
            c = Fraction(c)
            if c:
                clean[tuple(exps)] = c
        self._terms = clean

    @classmethod
    def symbol(cls, name: str) -> "MultiPoly":
        if name not in _INDEX:
            raise ValueError(f"unknown symbol {name!r}")
        exps = [0] * len(SYMBOLS)
        exps[_INDEX[name]] = 1
        return cls({tuple(exps): Fraction(1)})

    @classmethod
    def const(cls, c) -> "MultiPoly":
        return cls({(0,) * len(SYMBOLS): Fraction(c)})

    @classmethod
    def _lift(cls, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return cls.const(other)
        return NotImplemented

    @property
    def terms(self) -> typing.Dict[Exponents, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def constant_value(self) -> typing.Optional[Fraction]:
        """The value of a constant polynomial, None otherwise."""
        if not self._terms:
            return Fraction(0)
        if set(self._terms) != {(0,) * len(SYMBOLS)}:
            return None
        return next(iter(self._terms.values()))

    def __add__(self, other):
        other = MultiPoly._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for exps, c in other._terms.items():
            out[exps] = out.get(exps, Fraction(0)) + c
        return MultiPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({exps: -c for exps, c in self._terms.items()})

    def __sub__(self, other):
        other = MultiPoly._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = MultiPoly._lift(other)
        if other is NotImplemented:
            return other
        out: typing.Dict[Exponents, Fraction] = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                exps = tuple(x + y for x, y in zip(ea, eb))
                out[exps] = out.get(exps, Fraction(0)) + ca * cb
        return MultiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = MultiPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        other = MultiPoly._lift(other)
        if other is NotImplemented:
            return other
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def substitute(self, name: str, value: "MultiPoly") -> "MultiPoly":
        idx = _INDEX[name]
        out = MultiPoly()
        for exps, c in self._terms.items():
            rest = list(exps)
            rest[idx] = 0
            out = out + MultiPoly({tuple(rest): c}) * (value ** exps[idx])
        return out

    def evaluate(self, values: typing.Mapping[str, typing.Union[int, Fraction]]) -> Fraction:
        total = Fraction(0)
        for exps, c in self._terms.items():
            term = c
            for name, a in zip(SYMBOLS, exps):
                if a:
                    term *= Fraction(values[name]) ** a
            total += term
        return total

    def ordered_terms(self) -> typing.List[typing.Tuple[Exponents, Fraction]]:
        return sorted(self._terms.items(), key=lambda t: _order_key(t[0]), reverse=True)

    def lead(self) -> typing.Tuple[Exponents, Fraction]:
        if not self._terms:
            raise ValueError("the zero polynomial has no leading term")
        return self.ordered_terms()[0]

    def has_nonnegative_coefficients(self) -> bool:
        """True when, with all symbols non-negative, the value is obviously ≥ 0."""
        return all(c > 0 for c in self._terms.values())

    def sqrt(self) -> typing.Optional["MultiPoly"]:
        """S with S·S == self and a positive leading coefficient, or None.

        Long division in graded lex: the root's leading term is the square root
        of self's; each next root term is the remainder's leading term divided
        by twice the root's leading term.
        """
        if self.is_zero():
            return MultiPoly()
        exps, c = self.lead()
        if any(a % 2 for a in exps):
            return None
        rc = _rational_sqrt(c)
        if rc is None:
            return None
        root_lead = tuple(a // 2 for a in exps)
        root = MultiPoly({root_lead: rc})
        last = root_lead
        for _ in range(math.prod(a + 1 for a in root_lead) + 1):
            rem = self - root * root
            if rem.is_zero():
                return root
            r_exps, r_c = rem.lead()
            q = tuple(a - b for a, b in zip(r_exps, root_lead))
            if any(a < 0 for a in q) or _order_key(q) >= _order_key(last):
                return None
            root = root + MultiPoly({q: r_c / (2 * rc)})
            last = q
        return None

    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for exps, c in self.ordered_terms():
            factors = [
                name if a == 1 else f"{name}^{a}" for name, a in zip(SYMBOLS, exps) if a
            ]
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if not out:
                out.append(body if c > 0 else f"-{body}")
            else:
                out.append(f" + {body}" if c > 0 else f" - {body}")
        return "".join(out)

    def __repr__(self):
        return f"MultiPoly({self})"


def symbols(*names: str) -> typing.Tuple[MultiPoly, ...]:
    return tuple(MultiPoly.symbol(n) for n in names)
