"""Sparse multivariate polynomials over Q, Groebner bases and ideal membership with cofactors.

Polynomials are immutable. A polynomial stores its terms as a dict mapping exponent
tuples to nonzero ``Fraction`` coefficients, and carries a reference to its
:class:`AmbientRing`, which fixes the variable names and the monomial order.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

MONOMIAL_ORDERS = ("grevlex", "lex")
DEFAULT_DEGREE_CAP = 64


class RingMismatchError(ValueError):
    pass


class PolynomialSyntaxError(ValueError):
    def __init__(self, message, text, pos):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


class ResourceLimitError(RuntimeError):
    """Raised when a computation exceeds the configured degree cap."""


def degree_cap() -> int:
    value = os.environ.get("BSLAB_DEGREE_CAP")
    return int(value) if value else DEFAULT_DEGREE_CAP


# ---------------------------------------------------------------------------
# rings and polynomials


@dataclass(frozen=True)
class AmbientRing:
    variable_names: tuple
    monomial_order: str = "grevlex"

    def __post_init__(self):
        object.__setattr__(self, "variable_names", tuple(self.variable_names))
        if len(set(self.variable_names)) != len(self.variable_names):
            raise ValueError(f"variable names must be distinct: {self.variable_names}")
        if self.monomial_order not in MONOMIAL_ORDERS:
            raise ValueError(f"unknown monomial order {self.monomial_order!r}")

    @property
    def nvars(self) -> int:
        return len(self.variable_names)

    def sort_key(self, exp):
        """Key whose natural ordering is the ring's monomial order."""
        if self.monomial_order == "lex":
            return exp
        return (sum(exp), tuple(-e for e in reversed(exp)))

    def index(self, name: str) -> int:
        try:
            return self.variable_names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: Fraction(c)})

    def gen(self, var) -> "Polynomial":
        i = self.index(var) if isinstance(var, str) else var
        exp = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Polynomial(self, {exp: Fraction(1)})

    def gens(self) -> list:
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, exp, coeff=1) -> "Polynomial":
        exp = tuple(int(e) for e in exp)
        if len(exp) != self.nvars or any(e < 0 for e in exp):
            raise ValueError(f"bad exponent vector {exp} for {self.nvars} variables")
        return Polynomial(self, {exp: Fraction(coeff)})

    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(text, self)


def _clean(terms: dict) -> dict:
    return {e: c for e, c in terms.items() if c != 0}


class Polynomial:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: AmbientRing, terms: dict):
        self.ring = ring
        self.terms = _clean({tuple(e): Fraction(c) for e, c in terms.items()})
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        # terms already canonical: tuple keys, nonzero Fraction values
        p = cls.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._hash = None
        return p

    # -- basic queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def sorted_terms(self) -> list:
        """Terms in descending monomial order."""
        return sorted(self.terms.items(), key=lambda t: self.ring.sort_key(t[0]), reverse=True)

    @property
    def LM(self):
        return max(self.terms, key=self.ring.sort_key)

    @property
    def LC(self) -> Fraction:
        return self.terms[self.LM]

    def coefficient(self, exp) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.ring.nvars)

    def variables_used(self) -> set:
        return {i for e in self.terms for i, k in enumerate(e) if k}

    # -- arithmetic
    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return Polynomial._raw(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, {e: -c for e, c in self.terms.items()})

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
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, 0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        return Polynomial._raw(self.ring, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if c == 0:
            return self.ring.zero()
        return Polynomial._raw(self.ring, {e: v * c for e, v in self.terms.items()})

    def mul_term(self, exp, coeff) -> "Polynomial":
        return Polynomial._raw(
            self.ring, {tuple(a + b for a, b in zip(e, exp)): c * coeff for e, c in self.terms.items()}
        )

    def monic(self) -> "Polynomial":
        return self.scale(1 / self.LC)

    def restrict_zero(self, indices: Iterable[int]) -> "Polynomial":
        """Substitute 0 for the given variables."""
        idx = tuple(indices)
        return Polynomial._raw(
            self.ring, {e: c for e, c in self.terms.items() if all(e[i] == 0 for i in idx)}
        )

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"


def arith(op: str, f: Polynomial, g: Polynomial) -> Polynomial:
    if f.ring != g.ring:
        raise RingMismatchError(f"{f.ring} vs {g.ring}")
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown operation {op!r}")


def derivative(f: Polynomial, var_index: int, order: int = 1) -> Polynomial:
    """Iterated formal partial derivative of ``f`` in one variable."""
    if not 0 <= var_index < f.ring.nvars:
        raise IndexError(f"variable index {var_index} out of range")
    if order < 0:
        raise ValueError("order must be nonnegative")
    terms = {}
    for e, c in f.terms.items():
        k = e[var_index]
        if k < order:
            continue
        falling = math.perm(k, order)
        e2 = e[:var_index] + (k - order,) + e[var_index + 1 :]
        terms[e2] = c * falling
    return Polynomial._raw(f.ring, terms)


# ---------------------------------------------------------------------------
# text format


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_polynomial(f: Polynomial) -> str:
    if f.is_zero():
        return "0"
    names = f.ring.variable_names
    out = []
    for i, (exp, c) in enumerate(f.sorted_terms()):
        factors = [n if k == 1 else f"{n}^{k}" for n, k in zip(names, exp) if k]
        a = abs(c)
        if not factors:
            body = _format_coeff(a)
        elif a == 1:
            body = "*".join(factors)
        else:
            body = _format_coeff(a) + "*" + "*".join(factors)
        if i == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


class _Parser:
    """Recursive-descent parser: sums of products of powers, with parentheses."""

    def __init__(self, text, ring):
        self.text = text
        self.ring = ring
        self.pos = 0

    def error(self, msg):
        raise PolynomialSyntaxError(msg, self.text, self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self):
        if not self.text.strip():
            self.error("empty expression")
        value = self.expr()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return value

    def expr(self):
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        value = self.term().scale(sign)
        while self.peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            t = self.term()
            value = value + t if op == "+" else value - t
        return value

    def term(self):
        value = self.power()
        while self.peek() in ("*", "/"):
            op = self.text[self.pos]
            self.pos += 1
            if op == "*" and self.peek() == "*":
                self.error("use '^' for powers")
            rhs = self.power()
            if op == "*":
                value = value * rhs
            else:
                if not rhs.terms or any(any(e) for e in rhs.terms) or len(rhs.terms) > 1:
                    self.error("division only by nonzero rational constants")
                value = value.scale(1 / rhs.constant_term())
        return value

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            self.skip()
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if start == self.pos:
                self.error("expected integer exponent")
            base = base ** int(self.text[start : self.pos])
        return base

    def atom(self):
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            value = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return value
        if ch.isdigit():
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            return self.ring.const(int(self.text[start : self.pos]))
        if ch.isalpha() or ch == "_":
            start = self.pos
            while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
                self.pos += 1
            name = self.text[start : self.pos]
            if name not in self.ring.variable_names:
                self.pos = start
                self.error(f"unknown variable {name!r}")
            return self.ring.gen(name)
        self.error("expected a number, variable or '('" if ch else "unexpected end of input")


def parse_polynomial(text: str, ring: AmbientRing) -> Polynomial:
    return _Parser(text, ring).parse()


# ---------------------------------------------------------------------------
# ideals


@dataclass(frozen=True)
class Ideal:
    generators: tuple

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise ValueError("an ideal needs at least one generator")
        ring = gens[0].ring
        if any(g.ring != ring for g in gens):
            raise RingMismatchError("generators live in different rings")
        object.__setattr__(self, "generators", gens)

    @property
    def ring(self) -> AmbientRing:
        return self.generators[0].ring

    @property
    def is_zero(self) -> bool:
        return all(g.is_zero() for g in self.generators)

    def is_monomial(self) -> bool:
        return all(g.is_monomial() or g.is_zero() for g in self.generators)

    def __len__(self):
        return len(self.generators)

    def __str__(self):
        return "(" + ", ".join(map(str, self.generators)) + ")"

    @classmethod
    def parse(cls, texts, ring: AmbientRing) -> "Ideal":
        if isinstance(texts, str):
            texts = [t for t in texts.split(",")]
        return cls(tuple(parse_polynomial(t, ring) for t in texts))


def power_products(ideal: Ideal, l: int) -> list:
    """All products of ``l`` generators, as ``(index multiset, product)`` pairs (0-based)."""
    if l < 1:
        raise ValueError("power must be at least 1")
    gens = ideal.generators
    out = []
    for combo in itertools.combinations_with_replacement(range(len(gens)), l):
        p = gens[0].ring.one()
        for i in combo:
            p = p * gens[i]
        out.append((combo, p))
    return out


def ideal_power(ideal: Ideal, l: int) -> Ideal:
    seen = []
    for _, p in power_products(ideal, l):
        if p not in seen:
            seen.append(p)
    nonzero = [p for p in seen if p]
    return Ideal(tuple(nonzero) if nonzero else (ideal.ring.zero(),))


def ideal_sum(*ideals: Ideal) -> Ideal:
    return Ideal(tuple(g for I in ideals for g in I.generators))


# ---------------------------------------------------------------------------
# Groebner bases


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Groebner basis together with its expression in the source generators.

    ``transform[i][j]`` is the coefficient of ``source.generators[j]`` in ``basis[i]``.
    """

    basis: tuple
    order: str
    source: Ideal
    transform: tuple = field(repr=False, default=())

    @property
    def leading_monomials(self):
        return [g.LM for g in self.basis]


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub_exp(a, b):
    return tuple(x - y for x, y in zip(a, b))


def s_polynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    lcm = _lcm(f.LM, g.LM)
    return f.mul_term(_sub_exp(lcm, f.LM), 1 / f.LC) - g.mul_term(_sub_exp(lcm, g.LM), 1 / g.LC)


def _reduce(f: Polynomial, basis: Sequence[Polynomial], ring: AmbientRing):
    """Full multivariate division. Returns (remainder, quotients)."""
    key = ring.sort_key
    lms = [b.LM for b in basis]
    lcs = [b.LC for b in basis]
    quots = [dict() for _ in basis]
    p = dict(f.terms)
    rem = {}
    while p:
        lm = max(p, key=key)
        c = p[lm]
        for i, m in enumerate(lms):
            if _divides(m, lm):
                q_exp = _sub_exp(lm, m)
                q_c = c / lcs[i]
                quots[i][q_exp] = quots[i].get(q_exp, 0) + q_c
                for e, bc in basis[i].terms.items():
                    e2 = tuple(a + b for a, b in zip(e, q_exp))
                    s = p.get(e2, 0) - q_c * bc
                    if s:
                        p[e2] = s
                    else:
                        p.pop(e2, None)
                break
        else:
            rem[lm] = c
            del p[lm]
    return (
        Polynomial._raw(ring, rem),
        [Polynomial(ring, q) for q in quots],
    )


def _combine(rows, coeffs, ring, width):
    """Sum_i coeffs[i] * rows[i] for cofactor vectors."""
    out = [ring.zero()] * width
    for c, row in zip(coeffs, rows):
        if c.is_zero():
            continue
        out = [a + c * b for a, b in zip(out, row)]
    return out


def groebner(ideal: Ideal, cap: Optional[int] = None) -> GroebnerBasis:
    return _groebner_cached(ideal, cap if cap is not None else degree_cap())


@lru_cache(maxsize=512)
def _groebner_cached(ideal: Ideal, cap: int) -> GroebnerBasis:
    ring = ideal.ring
    m = len(ideal.generators)
    unit = [[ring.one() if j == i else ring.zero() for j in range(m)] for i in range(m)]
    G, T = [], []
    for i, g in enumerate(ideal.generators):
        if not g.is_zero():
            G.append(g)
            T.append(unit[i])
    if not G:
        return GroebnerBasis((), ring.monomial_order, ideal, ())
    for g in G:
        if g.total_degree() > cap:
            raise ResourceLimitError(f"generator degree {g.total_degree()} exceeds cap {cap}")

    if all(g.is_monomial() for g in G):
        # S-polynomials of monomials vanish: the minimal monomials are the reduced basis.
        return _minimal_reduced(G, T, ring, ideal, m)

    pairs = [(i, j) for j in range(len(G)) for i in range(j)]
    while pairs:
        pairs.sort(key=lambda p: ring.sort_key(_lcm(G[p[0]].LM, G[p[1]].LM)))
        i, j = pairs.pop(0)
        lmi, lmj = G[i].LM, G[j].LM
        if all(a == 0 or b == 0 for a, b in zip(lmi, lmj)):
            continue  # coprime leading monomials
        lcm = _lcm(lmi, lmj)
        if any(
            k not in (i, j)
            and _divides(G[k].LM, lcm)
            and (min(i, k), max(i, k)) not in pairs
            and (min(j, k), max(j, k)) not in pairs
            for k in range(len(G))
        ):
            continue  # chain criterion
        ci = ring.monomial(_sub_exp(lcm, lmi), 1 / G[i].LC)
        cj = ring.monomial(_sub_exp(lcm, lmj), -1 / G[j].LC)
        s = G[i] * ci + G[j] * cj
        if s.total_degree() > cap:
            raise ResourceLimitError(f"S-polynomial degree {s.total_degree()} exceeds cap {cap}")
        r, quots = _reduce(s, G, ring)
        if r.is_zero():
            continue
        # r = s - sum q_k G_k
        row = _combine([T[i], T[j]], [ci, cj], ring, m)
        row = [a - b for a, b in zip(row, _combine(T, quots, ring, m))]
        G.append(r)
        T.append(row)
        n = len(G) - 1
        pairs.extend((k, n) for k in range(n))
    return _minimal_reduced(G, T, ring, ideal, m)


def _minimal_reduced(G, T, ring, ideal, m):
    keep = []
    for i, g in enumerate(G):
        dominated = False
        for j, h in enumerate(G):
            if i == j or not _divides(h.LM, g.LM):
                continue
            if h.LM != g.LM or j < i:
                dominated = True
                break
        if not dominated:
            keep.append(i)
    G = [G[i] for i in keep]
    T = [T[i] for i in keep]
    # inter-reduce tails
    for i in range(len(G)):
        others = G[:i] + G[i + 1 :]
        if others:
            tail = G[i] - ring.monomial(G[i].LM, G[i].LC)
            r, quots = _reduce(tail, others, ring)
            q_full = quots[:i] + [ring.zero()] + quots[i:]
            G[i] = ring.monomial(G[i].LM, G[i].LC) + r
            T[i] = [a - b for a, b in zip(T[i], _combine(T, q_full, ring, m))]
        lc = G[i].LC
        G[i] = G[i].scale(1 / lc)
        T[i] = [t.scale(1 / lc) for t in T[i]]
    order = sorted(range(len(G)), key=lambda i: ring.sort_key(G[i].LM))
    return GroebnerBasis(
        tuple(G[i] for i in order),
        ring.monomial_order,
        ideal,
        tuple(tuple(T[i]) for i in order),
    )


def normal_form(f: Polynomial, gb: GroebnerBasis):
    """Divide ``f`` by the basis: returns ``(remainder, cofactors)`` with
    ``f == sum(c * b for c, b in zip(cofactors, gb.basis)) + remainder``.
    """
    if f.ring != gb.source.ring:
        raise RingMismatchError(f"{f.ring} vs {gb.source.ring}")
    if not gb.basis:
        return f, []
    return _reduce(f, gb.basis, f.ring)


def ideal_member(f: Polynomial, ideal: Ideal) -> Optional[list]:
    """Cofactors ``c`` with ``f == sum(c_i * g_i)`` over the ideal's generators, or None."""
    if f.ring != ideal.ring:
        raise RingMismatchError(f"{f.ring} vs {ideal.ring}")
    ring = f.ring
    m = len(ideal.generators)
    if f.is_zero():
        return [ring.zero()] * m
    gb = groebner(ideal)
    r, quots = normal_form(f, gb)
    if not r.is_zero():
        return None
    return _combine(gb.transform, quots, ring, m)


def is_groebner(basis: Sequence[Polynomial]) -> bool:
    """Buchberger's criterion, checked directly on all pairs."""
    basis = [b for b in basis if b]
    if not basis:
        return True
    ring = basis[0].ring
    for f, g in itertools.combinations(basis, 2):
        r, _ = _reduce(s_polynomial(f, g), basis, ring)
        if r:
            return False
    return True
