"""Exit criteria. Each test records one PASS/FAIL line, printed in the terminal summary.

Run alone with ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
"""

import itertools
import random
import time

import pytest

from bslab.certify import (
    CertifyRequest,
    bs_exponent,
    certify_membership,
    member_mod_J,
    optimality_witness,
    positive_witness,
    search_minimal_N,
    verify_certificate,
    witness_corpus,
    witness_space,
)
from bslab.closure import (
    closure_member_monomial,
    graded_size_check,
    newton_polyhedron,
    power_closure_test,
    required_exponents,
)
from bslab.germ import jet_mul, make_space, member_of_J, taylor_jet
from bslab.polycore import AmbientRing, groebner, ideal_member, ideal_power, normal_form
from bslab.sampling import (
    mutate_certificate,
    random_constructed_request,
    random_exponent,
    random_monomial_ideal,
    random_polynomial,
)

RESULTS = {}
RINGS = {2: AmbientRing(("x", "y")), 3: AmbientRing(("x", "y", "z"))}


def _record(n, title, ok, elapsed, limit):
    ok = ok and elapsed < limit
    RESULTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}  ({elapsed:.2f}s, limit {limit}s)"
    return ok


def test_criterion_1_sharp_exponent():
    start = time.perf_counter()
    problems = []
    for k in (2, 3, 4, 5):
        space = witness_space(k)
        for p in range(k):
            f, ideal = optimality_witness(space, p)
            rep = graded_size_check(f, ideal, space, 1)
            failing = rep.failing()
            if [r.alpha for r in failing] != [(p,)] or failing[0].slack != -1:
                problems.append(f"k={k} witness p={p}: {rep.to_dict()}")
            if member_mod_J(f, ideal, space, 1):
                problems.append(f"k={k} witness p={p} is a member")
            f, ideal = positive_witness(space, p)
            req = CertifyRequest(f, ideal, space, 1)
            if not graded_size_check(f, ideal, space, 1).passed:
                problems.append(f"k={k} positive p={p} fails the size check")
            if not verify_certificate(certify_membership(req), req):
                problems.append(f"k={k} positive p={p} does not verify")
    elapsed = time.perf_counter() - start
    assert _record(1, "sharp exponent: witnesses fail by one, phi'_p certify", not problems, elapsed, 10), problems


def test_criterion_2_search_minimal_N():
    start = time.perf_counter()
    found = {}
    for k in (1, 2, 3, 4, 5):
        space = witness_space(k)
        result = search_minimal_N(space, witness_corpus(space, 1))
        found[k] = (result.N, bs_exponent(space, 1))
    elapsed = time.perf_counter() - start
    ok = all(n == expected == k for k, (n, expected) in found.items())
    assert _record(2, "search_minimal_N = r+k-1 (= r for k=1)", ok, elapsed, 30), found


def test_criterion_3_classical_briancon_skoda():
    rng = random.Random(3)
    start = time.perf_counter()
    checked, problems = 0, []
    for _ in range(50):
        n = rng.choice([2, 3])
        ring = RINGS[n]
        m = rng.randint(1, 4)
        ideal = random_monomial_ideal(rng, ring, m, 5)
        np = newton_polyhedron(ideal)
        for l in (1, 2):
            power = ideal_power(ideal, l)
            M = min(m, n) + l - 1
            for e in itertools.product(range(13), repeat=n):
                if sum(e) <= 12 and closure_member_monomial(e, np, M):
                    checked += 1
                    if ideal_member(ring.monomial(e), power) is None:
                        problems.append((str(ideal), l, e))
    elapsed = time.perf_counter() - start
    assert checked > 0
    assert _record(3, f"closure of a^(min(m,n)+l-1) in a^l ({checked} monomials)", not problems, elapsed, 60), problems


def test_criterion_4_closure_oracles_agree():
    rng = random.Random(4)
    start = time.perf_counter()
    problems = []
    for _ in range(200):
        n = rng.choice([2, 3])
        ring = RINGS[n]
        ideal = random_monomial_ideal(rng, ring, rng.randint(1, 4), 5)
        e = random_exponent(rng, n, rng.randint(0, 8))
        np = newton_polyhedron(ideal)
        a = closure_member_monomial(e, np, 1)
        b = power_closure_test(ring.monomial(e), ideal, 6)
        if a != b:
            problems.append((str(ideal), e, a, b))
    elapsed = time.perf_counter() - start
    assert _record(4, "Newton polyhedron test == power test (s <= 6), 200 pairs", not problems, elapsed, 60), problems


def test_criterion_5_jet_ring_isomorphism():
    rng = random.Random(5)
    start = time.perf_counter()
    spaces = [make_space(zc, [(k,)]) for k in (1, 2, 3, 4) for zc in (1, 2)]
    problems = []
    for i in range(200):
        space = spaces[i % len(spaces)]
        f = random_polynomial(rng, space.ring, 8, 4)
        g = random_polynomial(rng, space.ring, 8, 4)
        if jet_mul(taylor_jet(f, space), taylor_jet(g, space)) != taylor_jet(f * g, space):
            problems.append(("mul", str(f), str(g)))
    for i in range(200):
        space = spaces[i % len(spaces)]
        f = random_polynomial(rng, space.ring, 8, 4)
        if i % 2:
            f = f * space.j_generators()[0]
            if i % 4 == 1:
                f = f + random_polynomial(rng, space.ring, 3, 1)
        expected = normal_form(f, groebner(space.j_ideal()))[0].is_zero()
        if member_of_J(f, space) != expected:
            problems.append(("J", str(f)))
    elapsed = time.perf_counter() - start
    assert _record(5, "jet ring isomorphism and member_of_J == normal form", not problems, elapsed, 20), problems


def test_criterion_6_certificates():
    rng = random.Random(6)
    start = time.perf_counter()
    problems = []
    for i in range(100):
        req = random_constructed_request(rng)
        cert = certify_membership(req)
        if not verify_certificate(cert, req):
            problems.append(("unverified", i))
        if verify_certificate(mutate_certificate(rng, cert), req):
            problems.append(("mutant accepted", i))
    elapsed = time.perf_counter() - start
    assert _record(6, "100 constructed requests certify; 100 mutants rejected", not problems, elapsed, 60), problems


def test_criterion_7_graded_exponents():
    start = time.perf_counter()
    problems = []
    for k, m, zc in itertools.product(range(1, 5), range(1, 5), range(1, 4)):
        space = make_space(zc, [(k,)])
        r = min(m, zc)
        for l in (1, 2, 3):
            table = required_exponents(space, m, l)
            want = {(j,): min(m, space.dim) + (k - 1) - j + l - 1 for j in range(k)}
            if table != want:
                problems.append((k, m, zc, l))
        if required_exponents(space, m, 1) != {(j,): r + (k - 1) - j for j in range(k)}:
            problems.append((k, m, zc, "smpremise"))
    elapsed = time.perf_counter() - start
    assert _record(7, "graded exponent table min(m,dim Z)+(k-1)-j+l-1", not problems, elapsed, 1), problems


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
