"""Briancon-Skoda certification on ``O / (w^k)``.

Given ``f`` whose transversal jets satisfy the graded size conditions, the certifier
writes ``f = sum_i w^i P_i + w^k g`` with ``P_i`` in ``a^(k-i+l-1)`` by induction on
the number of transversal derivatives, then flattens the result into an identity

    f = sum_T coeff_T * a_{T_1} * ... * a_{T_l} + (element of J)

that :func:`verify_certificate` re-checks using nothing but polynomial arithmetic.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .closure import SizeReport, graded_size_check
from .germ import NoetherianOperator, ThickenedSpace, apply_operator, make_space
from .polycore import (
    Ideal,
    Polynomial,
    ResourceLimitError,
    RingMismatchError,
    derivative,
    ideal_member,
    ideal_power,
    ideal_sum,
    power_products,
)

log = logging.getLogger(__name__)

SCHEMA = 1

HYPOTHESIS_FAILED = "HYPOTHESIS_FAILED"
LIFT_FAILED = "LIFT_FAILED"
RESOURCE = "RESOURCE"


class UnsupportedSpaceError(ValueError):
    pass


class CertificationFailed(Exception):
    def __init__(self, kind: str, message: str, report: Optional[SizeReport] = None):
        super().__init__(f"{kind}: {message}")
        self.kind = kind
        self.message = message
        self.report = report


def _require_single_w(space: ThickenedSpace) -> int:
    k = space.k
    if k is None:
        raise UnsupportedSpaceError("certification needs a single w-variable and J = (w^k)")
    return k


@dataclass(frozen=True)
class CertifyRequest:
    f: Polynomial
    ideal: Ideal
    space: ThickenedSpace
    l: int = 1

    def __post_init__(self):
        if self.l < 1:
            raise ValueError("l must be at least 1")
        if self.f.ring != self.space.ring or self.ideal.ring != self.space.ring:
            raise RingMismatchError("f, the ideal and the space must share a ring")

    @property
    def k(self) -> int:
        return _require_single_w(self.space)

    @property
    def m(self) -> int:
        return len(self.ideal)

    @property
    def r(self) -> int:
        return min(self.m, self.space.z_count)


@dataclass
class MembershipCertificate:
    """``terms`` pairs a coefficient with a sorted tuple of 1-based generator indices."""

    terms: list
    j_witness: Polynomial

    def expand(self, generators: Sequence[Polynomial]) -> Polynomial:
        ring = self.j_witness.ring
        total = ring.zero()
        for coeff, idx in self.terms:
            prod = coeff
            for i in idx:
                prod = prod * generators[i - 1]
            total = total + prod
        return total

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "terms": [{"coeff": str(c), "gens": list(idx)} for c, idx in self.terms],
            "j_witness": str(self.j_witness),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict, ring) -> "MembershipCertificate":
        terms = [(ring.parse(t["coeff"]), tuple(int(i) for i in t["gens"])) for t in data["terms"]]
        return cls(terms, ring.parse(data["j_witness"]))

    @classmethod
    def from_json(cls, text: str, ring) -> "MembershipCertificate":
        return cls.from_dict(json.loads(text), ring)


@dataclass
class InductionState:
    """``f = sum_{i<=p} w^i P_i + w^(p+1) g_p``; ``committed[i]`` lists (index multiset, coeff)."""

    p: int
    committed: dict
    remainder: Polynomial

    def committed_poly(self, i: int, generators) -> Polynomial:
        ring = self.remainder.ring
        total = ring.zero()
        for idx, c in self.committed[i]:
            prod = c
            for j in idx:
                prod = prod * generators[j]
            total = total + prod
        return total


def bs_exponent(space: ThickenedSpace, m: int, l: int = 1) -> int:
    """The Briancon-Skoda number ``N = min(m, dim Z) + k - 1`` of ``O / (w^k)``."""
    k = _require_single_w(space)
    if m < 1 or l < 1:
        raise ValueError("m and l must be at least 1")
    return min(m, space.z_count) + k - 1


def _lift(g: Polynomial, red_gens, power: int, what: str):
    """Cofactors of ``g`` over all products of ``power`` reduced generators."""
    if g.is_zero():
        return []
    products = [(idx, p) for idx, p in power_products(Ideal(tuple(red_gens)), power) if p]
    if not products:
        raise CertificationFailed(LIFT_FAILED, f"{what}: {g} is nonzero but a vanishes on w = 0")
    cof = ideal_member(g, Ideal(tuple(p for _, p in products)))
    if cof is None:
        raise CertificationFailed(LIFT_FAILED, f"{what}: {g} is not in a_red^{power}")
    return [(idx, c) for (idx, _), c in zip(products, cof) if c]


def certify_membership(
    req: CertifyRequest,
    weights: Optional[Sequence] = None,
    base: Optional[int] = None,
    check_hypothesis: bool = True,
) -> MembershipCertificate:
    """Certify that ``f`` lies in ``a^l + (w^k)``.

    ``base`` overrides N in the hypothesis exponents ``N - j + l - 1``.
    Raises :class:`CertificationFailed` with kind HYPOTHESIS_FAILED, LIFT_FAILED or RESOURCE.
    """
    try:
        return _certify(req, weights, base, check_hypothesis)
    except ResourceLimitError as exc:
        raise CertificationFailed(RESOURCE, str(exc)) from exc


def _certify(req, weights, base, check_hypothesis):
    space, f, l = req.space, req.f, req.l
    k = req.k
    ring = space.ring
    (widx,) = space.w_indices
    gens = list(req.ideal.generators)

    if check_hypothesis:
        report = graded_size_check(f, req.ideal, space, l, weights, base)
        if not report.passed:
            raise CertificationFailed(HYPOTHESIS_FAILED, "graded size conditions fail", report)

    red = [g.restrict_zero((widx,)) for g in gens]
    w = ring.gen(widx)

    # (1) each transversal jet lies in a_red^(k-j+l-1)
    jets = [apply_operator(NoetherianOperator((j,)), f, space) for j in range(k)]
    jet_lifts = [_lift(jets[j], red, k - j + l - 1, f"jet {j}") for j in range(k)]

    def product(idx):
        out = ring.one()
        for i in idx:
            out = out * gens[i]
        return out

    def realize(lift):
        return sum((c * product(idx) for idx, c in lift), ring.zero())

    # (2) induction: f = sum_{i<=p} w^i P_i + w^(p+1) g_p
    committed = {0: jet_lifts[0]}
    rest = f - realize(jet_lifts[0])
    g = _divide_by_w(rest, widx)
    state = InductionState(0, committed, g)
    _check_stage(f, state, gens, w)
    for p in range(k - 1):
        # compare the (p+1)-st w-derivative of the representation with jet p+1
        known = ring.zero()
        for i in range(p + 1):
            Pi = state.committed_poly(i, gens)
            dPi = derivative(Pi, widx, p + 1 - i).restrict_zero((widx,))
            known = known + dPi.scale(math.comb(p + 1, i) * math.factorial(i))
        g_red = (jets[p + 1] - known).scale(Fraction(1, math.factorial(p + 1)))
        if g_red != state.remainder.restrict_zero((widx,)):
            raise AssertionError(f"stage {p}: derivative comparison disagrees with the remainder")
        lift = _lift(g_red, red, k - p - 1 + l - 1, f"stage {p + 1}")
        committed = dict(state.committed)
        committed[p + 1] = lift
        g = _divide_by_w(state.remainder - realize(lift), widx)
        state = InductionState(p + 1, committed, g)
        _check_stage(f, state, gens, w)

    # (3) flatten w^i * c * a^T with |T| >= l into terms over l-fold products
    terms: dict = {}
    for i, lift in state.committed.items():
        for idx, c in lift:
            head, tail = idx[:l], idx[l:]
            coeff = c * (w**i) * product(tail)
            key = tuple(j + 1 for j in head)
            terms[key] = terms.get(key, ring.zero()) + coeff
    cert = MembershipCertificate(
        [(c, key) for key, c in sorted(terms.items()) if c],
        state.remainder * w**k,
    )
    if not verify_certificate(cert, req):
        raise AssertionError("internal error: certificate does not verify")
    return cert


def _divide_by_w(g: Polynomial, widx: int) -> Polynomial:
    terms = {}
    for e, c in g.terms.items():
        if e[widx] == 0:
            raise AssertionError(f"{g} is not divisible by w")
        terms[e[:widx] + (e[widx] - 1,) + e[widx + 1 :]] = c
    return Polynomial(g.ring, terms)


def _check_stage(f, state: InductionState, gens, w):
    total = sum(
        (w**i * state.committed_poly(i, gens) for i in state.committed), f.ring.zero()
    ) + w ** (state.p + 1) * state.remainder
    if total != f:
        raise AssertionError(f"induction identity broken at stage {state.p}")


def certificate_problems(cert: MembershipCertificate, req: CertifyRequest) -> list:
    """Diagnostics for ``cert``; empty when it proves ``f in a^l + J``."""
    problems = []
    gens = req.ideal.generators
    ring = req.space.ring
    for c, idx in cert.terms:
        if c.ring != ring:
            problems.append("coefficient in the wrong ring")
            return problems
        if len(idx) != req.l:
            problems.append(f"term uses {len(idx)} generators, expected {req.l}")
        if any(not 1 <= i <= len(gens) for i in idx):
            problems.append(f"generator index out of range in {list(idx)}")
    if problems:
        return problems
    if cert.j_witness.ring != ring:
        return ["j_witness in the wrong ring"]
    diff = req.f - cert.expand(gens) - cert.j_witness
    if diff:
        problems.append(f"identity fails: f - expansion - j_witness = {diff}")
    if not _in_monomial_ideal(cert.j_witness, req.space):
        problems.append(f"j_witness {cert.j_witness} is not in J")
    return problems


def _in_monomial_ideal(g: Polynomial, space: ThickenedSpace) -> bool:
    gens = [space.lift(a) for a in space.j_exponents]
    return all(any(all(x >= y for x, y in zip(e, a)) for a in gens) for e in g.terms)


def verify_certificate(cert: MembershipCertificate, req: CertifyRequest) -> bool:
    problems = certificate_problems(cert, req)
    for msg in problems:
        log.warning("certificate rejected: %s", msg)
    return not problems


# ---------------------------------------------------------------------------
# sharpness


def witness_space(k: int) -> ThickenedSpace:
    """``C[z, w] / (w^k)``, the two-variable model space."""
    return make_space(1, [(k,)])


def optimality_witness(space: ThickenedSpace, p: int):
    """``(w^p z^(k-1-p), (z + w))``: fails the size check at order p by exactly one."""
    k = _require_single_w(space)
    if space.z_count != 1:
        raise UnsupportedSpaceError("optimality witnesses live in two variables")
    if not 0 <= p <= k - 1:
        raise ValueError(f"p must lie in 0..{k - 1}")
    z, w = space.ring.gens()
    return w**p * z ** (k - 1 - p), Ideal((z + w,))


def positive_witness(space: ThickenedSpace, p: int):
    """``(w^p z^(k-p), (z + w))``, which satisfies the size check and is certified."""
    k = _require_single_w(space)
    if not 0 <= p <= k - 1:
        raise ValueError(f"p must lie in 0..{k - 1}")
    z, w = space.ring.gens()
    return w**p * z ** (k - p), Ideal((z + w,))


def witness_corpus(space: ThickenedSpace, l: int = 1) -> list:
    k = _require_single_w(space)
    cases = [(*optimality_witness(space, p), l) for p in range(k)]
    cases += [(*positive_witness(space, p), l) for p in range(k)]
    return cases


def member_mod_J(f: Polynomial, ideal: Ideal, space: ThickenedSpace, l: int = 1) -> bool:
    """Groebner decision of ``f in a^l + J``."""
    return ideal_member(f, ideal_sum(ideal_power(ideal, l), space.j_ideal())) is not None


@dataclass
class SearchRow:
    N: int
    case: int
    hypothesis: bool
    certified: bool
    member: bool

    @property
    def counterexample(self) -> bool:
        return self.hypothesis and not self.certified


@dataclass
class SearchResult:
    N: int
    vacuous: bool
    rows: list = field(default_factory=list)

    def to_dict(self):
        return {
            "schema": SCHEMA,
            "N": self.N,
            "vacuous": self.vacuous,
            "table": [
                {
                    "N": r.N,
                    "case": r.case,
                    "hypothesis": r.hypothesis,
                    "certified": r.certified,
                    "member": r.member,
                }
                for r in self.rows
            ],
        }


def search_minimal_N(
    space: ThickenedSpace,
    corpus: Sequence,
    cap: Optional[int] = None,
    weights: Optional[Sequence] = None,
) -> SearchResult:
    """Smallest N such that the size conditions with exponents ``N - j + l - 1`` imply
    certification for every ``(f, ideal, l)`` in ``corpus``.
    """
    k = _require_single_w(space)
    if not corpus:
        raise ValueError("corpus must be nonempty")
    if cap is None:
        r = max(min(len(ideal), space.z_count) for _, ideal, _ in corpus)
        cap = r + k + 4
    member_cache = {}
    certified_cache = {}
    rows = []
    for N in range(1, cap + 1):
        bad = False
        any_hyp = False
        for ci, (f, ideal, l) in enumerate(corpus):
            hyp = graded_size_check(f, ideal, space, l, weights, base=N).passed
            if ci not in member_cache:
                member_cache[ci] = member_mod_J(f, ideal, space, l)
            certified = False
            if hyp:
                if ci not in certified_cache:
                    try:
                        certify_membership(CertifyRequest(f, ideal, space, l), check_hypothesis=False)
                        certified_cache[ci] = True
                    except CertificationFailed:
                        certified_cache[ci] = False
                certified = certified_cache[ci]
            row = SearchRow(N, ci, hyp, certified, member_cache[ci])
            rows.append(row)
            any_hyp |= hyp
            bad |= row.counterexample
        if not bad:
            return SearchResult(N, not any_hyp, rows)
    raise ResourceLimitError(f"no N <= {cap} works for this corpus")
