"""Integral closure tests: Newton polyhedra, monomial valuations and the graded size check.

For a monomial ideal the integral closure of its M-th power consists of the monomials
whose exponent lies in ``M * NP``, where NP is the Newton polyhedron. For general ideals
we fall back on a finite family of monomial valuations, which gives a necessary condition.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .germ import ThickenedSpace, apply_operator, noetherian_set
from .polycore import Ideal, Polynomial, RingMismatchError, ideal_member, ideal_power

INF = math.inf
Order = Union[int, float, Fraction]


class NotMonomialError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Newton polyhedra


@dataclass(frozen=True)
class NewtonPolyhedron:
    """``conv(source_exponents) + R_{>=0}^n`` as ``{x : normal . x >= offset}``.

    Only facets with positive offset are kept; the coordinate facets ``x_i >= 0``
    hold for every exponent vector and carry no information.
    """

    source_exponents: tuple
    facets: tuple  # ((normal, offset), ...), primitive integer normals

    @property
    def dim(self) -> int:
        return len(self.source_exponents[0])

    def contains(self, x, scale=1) -> bool:
        return all(_dot(nrm, x) >= scale * off for nrm, off in self.facets)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _nullspace_vector(rows, n):
    """A nonzero vector orthogonal to ``rows`` when they have rank n-1, else None."""
    m = [list(map(Fraction, r)) for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                fac = m[i][c]
                m[i] = [a - fac * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    if r != n - 1:
        return None
    free = next(c for c in range(n) if c not in pivots)
    vec = [Fraction(0)] * n
    vec[free] = Fraction(1)
    for i, c in enumerate(pivots):
        vec[c] = -m[i][free]
    return vec


def _primitive(vec):
    den = math.lcm(*(v.denominator for v in vec))
    ints = [int(v * den) for v in vec]
    g = math.gcd(*ints)
    return tuple(v // g for v in ints)


def _pareto_minimal(points):
    pts = sorted(set(points))
    return [p for p in pts if not any(q != p and all(a <= b for a, b in zip(q, p)) for q in pts)]


def facets_of(points, n: int) -> tuple:
    """Facets with positive offset of ``conv(points) + R_{>=0}^n``, exact.

    Every facet is spanned by t >= 1 points and n - t coordinate rays; enumerate those
    spans and keep the supporting hyperplanes with nonnegative normals.
    """
    pts = _pareto_minimal(points)
    rays = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    found = set()
    for t in range(1, min(n, len(pts)) + 1):
        for P in itertools.combinations(pts, t):
            for Rs in itertools.combinations(rays, n - t):
                rows = [tuple(a - b for a, b in zip(p, P[0])) for p in P[1:]] + list(Rs)
                vec = _nullspace_vector(rows, n)
                if vec is None:
                    continue
                if all(v <= 0 for v in vec):
                    vec = [-v for v in vec]
                if any(v < 0 for v in vec):
                    continue
                normal = _primitive(vec)
                offset = _dot(normal, P[0])
                if offset <= 0:
                    continue
                if all(_dot(normal, q) >= offset for q in pts):
                    found.add((normal, offset))
    return tuple(sorted(found))


def newton_polyhedron(ideal: Ideal) -> NewtonPolyhedron:
    gens = [g for g in ideal.generators if g]
    if not gens:
        raise ValueError("the zero ideal has no Newton polyhedron")
    if not all(g.is_monomial() for g in gens):
        raise NotMonomialError(f"{ideal} is not a monomial ideal")
    exps = tuple(sorted({g.LM for g in gens}))
    return NewtonPolyhedron(exps, facets_of(exps, ideal.ring.nvars))


def closure_member_monomial(mon, np: NewtonPolyhedron, power: int = 1) -> bool:
    """Is ``x^mon`` in the integral closure of ``I^power``? (``mon`` in ``power * NP``)"""
    if power < 1:
        raise ValueError("power must be at least 1")
    if isinstance(mon, Polynomial):
        mon = mon.LM
    return np.contains(tuple(mon), power)


def lattice_points_upto(np: NewtonPolyhedron, max_degree: int) -> list:
    """Lattice points of NP of total degree <= max_degree."""
    n = np.dim
    return [
        e
        for d in range(max_degree + 1)
        for e in _compositions(d, n)
        if np.contains(e)
    ]


def _compositions(d, n):
    if n == 1:
        yield (d,)
        return
    for i in range(d, -1, -1):
        for rest in _compositions(d - i, n - 1):
            yield (i,) + rest


def power_closure_test(f: Polynomial, ideal: Ideal, s_bound: int = 6) -> bool:
    """Brute-force integral closure oracle: is ``f^s`` in ``I^s`` for some ``s <= s_bound``?"""
    if s_bound < 1:
        raise ValueError("s_bound must be at least 1")
    for s in range(1, s_bound + 1):
        if ideal_member(f**s, ideal_power(ideal, s)) is not None:
            return True
    return False


# ---------------------------------------------------------------------------
# monomial valuations


def valuation_order(f: Polynomial, weights: Sequence[int]) -> Order:
    if f.is_zero():
        return INF
    return min(_dot(weights, e) for e in f.terms)


def default_weights(n: int, top: int = 4) -> list:
    """All weight vectors in ``{1..top}^n`` with gcd 1."""
    return [c for c in itertools.product(range(1, top + 1), repeat=n) if math.gcd(*c) == 1]


@dataclass
class OperatorRecord:
    alpha: tuple
    order: int
    required: int
    attained: Order  # worst normalized order  min_c nu_c(L f) / nu_c(a)
    slack: Order
    passed: bool
    exact: Optional[bool] = None  # Newton-polyhedron verdict for monomial ideals

    def to_dict(self):
        return {
            "alpha": list(self.alpha),
            "order": self.order,
            "required": self.required,
            "attained": _num(self.attained),
            "slack": _num(self.slack),
            "pass": self.passed,
        }


def _num(x):
    if x == INF:
        return "inf"
    if x == -INF:
        return "-inf"
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else str(x)


@dataclass
class SizeReport:
    records: list
    passed: bool
    exact: bool  # True when decided by Newton polyhedra, False for valuative evidence only
    m: int
    l: int
    base: int  # N in the exponent N - order + l - 1
    weights: list = field(default_factory=list, repr=False)

    def record(self, alpha) -> OperatorRecord:
        return next(r for r in self.records if r.alpha == tuple(alpha))

    def failing(self) -> list:
        return [r for r in self.records if not r.passed]

    def to_dict(self):
        return {
            "pass": self.passed,
            "evidence": "exact" if self.exact else "valuative",
            "m": self.m,
            "l": self.l,
            "N": self.base,
            "records": [r.to_dict() for r in self.records],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_text(self) -> str:
        head = f"{'alpha':>8} {'order':>5} {'required':>8} {'attained':>9} {'slack':>6}  pass"
        lines = [head]
        for r in self.records:
            lines.append(
                f"{','.join(map(str, r.alpha)):>8} {r.order:>5} {r.required:>8} "
                f"{str(_num(r.attained)):>9} {str(_num(r.slack)):>6}  {'yes' if r.passed else 'NO'}"
            )
        verdict = "PASS" if self.passed else "FAIL"
        lines.append(f"overall: {verdict} ({'exact' if self.exact else 'valuative evidence'})")
        return "\n".join(lines)


def required_exponents(space: ThickenedSpace, m: int, l: int, base: Optional[int] = None) -> dict:
    """Per-operator exponents ``min(m, dim Z) + d - order + l - 1``.

    ``base`` overrides ``min(m, dim Z) + d`` (the role of N in ``N - order + l - 1``).
    """
    if l < 1:
        raise ValueError("l must be at least 1")
    if base is None:
        base = min(m, space.dim) + space.max_order
    return {op.alpha: base - op.order + l - 1 for op in noetherian_set(space)}


def graded_size_check(
    f: Polynomial,
    ideal: Ideal,
    space: ThickenedSpace,
    l: int,
    weights: Optional[Sequence] = None,
    base: Optional[int] = None,
) -> SizeReport:
    """Check ``|L_alpha f| <~ |a|^{e_alpha}`` on ``{w = 0}`` for every defining operator.

    The size of ``a`` on the reduced space is that of its restriction to ``w = 0``.
    Each record's ``attained`` value is the smallest ratio ``nu_c(L f) / nu_c(a)``
    over the weights (and, for monomial ideals, over the facet normals, which makes
    it exact); ``slack = attained - required``.
    """
    if l < 1:
        raise ValueError("l must be at least 1")
    if ideal.ring != space.ring or f.ring != space.ring:
        raise RingMismatchError("f, the ideal and the space must share a ring")
    if weights is None:
        weights = default_weights(space.ring.nvars)
    if not weights:
        raise ValueError("need at least one weight vector")
    m = len(ideal)
    req = required_exponents(space, m, l, base)
    red = [g.restrict_zero(space.w_indices) for g in ideal.generators]
    red = [g for g in red if g]
    monomial = all(g.is_monomial() for g in red)

    probes = [tuple(c) for c in weights]
    np = None
    if monomial and red:
        np = newton_polyhedron(Ideal(tuple(red)))
        probes = probes + [nrm for nrm, _ in np.facets if nrm not in probes]

    records = []
    for op in noetherian_set(space):
        e = req[op.alpha]
        g = apply_operator(op, f, space)
        attained: Order = INF
        for c in probes:
            nu_g = valuation_order(g, c)
            if nu_g == INF:
                continue
            nu_a = min((valuation_order(a, c) for a in red), default=INF)
            if nu_a == INF:
                ratio: Order = -INF  # a vanishes on Z_red but L f does not
            elif nu_a == 0:
                ratio = INF
            else:
                ratio = Fraction(nu_g, nu_a)
            attained = min(attained, ratio)
        passed = attained >= e
        exact = None
        if monomial:
            if not red:
                exact = g.is_zero()
            else:
                exact = e <= 0 or all(closure_member_monomial(t, np, e) for t in g.terms)
            passed = passed and exact
        slack = attained - e if attained not in (INF, -INF) else attained
        records.append(OperatorRecord(op.alpha, op.order, e, attained, slack, passed, exact))
    return SizeReport(
        records,
        all(r.passed for r in records),
        monomial,
        m,
        l,
        base if base is not None else min(m, space.dim) + space.max_order,
        list(weights),
    )
