import itertools
import json
import random

import pytest

from bslab.certify import (
    HYPOTHESIS_FAILED,
    LIFT_FAILED,
    CertificationFailed,
    CertifyRequest,
    MembershipCertificate,
    UnsupportedSpaceError,
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
from bslab.closure import closure_member_monomial, graded_size_check, newton_polyhedron
from bslab.germ import make_space
from bslab.polycore import Ideal
from bslab.sampling import mutate_certificate, random_constructed_request, random_monomial_ideal

W3 = witness_space(3)
R = W3.ring
Z, W = R.gens()


def test_bs_exponent():
    assert bs_exponent(W3, 1) == 3
    assert bs_exponent(witness_space(1), 1) == 1
    assert bs_exponent(make_space(2, ["w^2"]), 5) == 3
    with pytest.raises(UnsupportedSpaceError):
        bs_exponent(make_space(1, ["w1^2", "w2"], w_count=2), 1)


def test_certify_z_cubed():
    req = CertifyRequest(Z**3, Ideal((Z + W,)), W3, 1)
    cert = certify_membership(req)
    assert cert.terms == [(Z**2 - Z * W + W**2, (1,))]
    assert cert.j_witness == -(W**3)
    assert verify_certificate(cert, req)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_certify_positive_family(k):
    space = witness_space(k)
    for p in range(k):
        f, ideal = positive_witness(space, p)
        req = CertifyRequest(f, ideal, space, 1)
        assert verify_certificate(certify_membership(req), req)


def test_certify_telescoping_identity():
    z, w = R.gens()
    req = CertifyRequest(w * z**2, Ideal((z + w,)), W3, 1)
    cert = certify_membership(req)
    assert cert.terms == [(w * z - w**2, (1,))]
    assert cert.j_witness == w**3


def test_certify_witness_fails_hypothesis():
    req = CertifyRequest(W * Z, Ideal((Z + W,)), W3, 1)
    with pytest.raises(CertificationFailed) as err:
        certify_membership(req)
    assert err.value.kind == HYPOTHESIS_FAILED
    assert [r.alpha for r in err.value.report.failing()] == [(1,)]
    assert err.value.report.record((1,)).slack == -1


def test_lift_failed_without_hypothesis():
    req = CertifyRequest(W * Z, Ideal((Z + W,)), W3, 1)
    with pytest.raises(CertificationFailed) as err:
        certify_membership(req, check_hypothesis=False)
    assert err.value.kind == LIFT_FAILED


def test_certify_needs_single_w():
    space = make_space(1, ["w1^2", "w2"], w_count=2)
    z = space.ring.gen(0)
    with pytest.raises(UnsupportedSpaceError):
        certify_membership(CertifyRequest(z**3, Ideal((z,)), space, 1))


def test_verify_rejects_perturbed():
    req = CertifyRequest(Z**3, Ideal((Z + W,)), W3, 1)
    cert = certify_membership(req)
    bad = MembershipCertificate([(c + 1, idx) for c, idx in cert.terms], cert.j_witness)
    assert not verify_certificate(bad, req)


def test_verify_hand_built():
    a1 = Z + W
    req = CertifyRequest(a1**2, Ideal((a1, Z * W)), W3, 2)
    assert verify_certificate(MembershipCertificate([(R.one(), (1, 1))], R.zero()), req)
    # wrong arity, out-of-range index, j part outside J
    assert not verify_certificate(MembershipCertificate([(R.one(), (1,))], R.zero()), req)
    assert not verify_certificate(MembershipCertificate([(R.one(), (1, 3))], R.zero()), req)
    fake = MembershipCertificate([(R.one(), (1, 1))], R.zero())
    assert not verify_certificate(fake, CertifyRequest(a1**2 + W, Ideal((a1, Z * W)), W3, 2))


def test_certificate_json_roundtrip():
    req = CertifyRequest(W * Z**2 + Z**3, Ideal((Z + W,)), W3, 1)
    cert = certify_membership(req)
    text = cert.to_json()
    assert json.loads(text)["schema"] == 1
    back = MembershipCertificate.from_json(text, R)
    assert back.to_json() == text
    assert verify_certificate(back, req)


def test_optimality_witness_examples():
    f, ideal = optimality_witness(W3, 1)
    assert f == W * Z and ideal.generators == (Z + W,)
    assert not member_mod_J(f, ideal, W3)
    s2 = witness_space(2)
    f, ideal = optimality_witness(s2, 0)
    z, w = s2.ring.gens()
    assert f == z
    assert graded_size_check(f, ideal, s2, 1).record((0,)).required == 2
    s1 = witness_space(1)
    f, ideal = optimality_witness(s1, 0)
    assert f == s1.ring.one() and not member_mod_J(f, ideal, s1)
    with pytest.raises(ValueError):
        optimality_witness(W3, 3)


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_witness_sharpness(k):
    space = witness_space(k)
    for p in range(k):
        f, ideal = optimality_witness(space, p)
        rep = graded_size_check(f, ideal, space, 1)
        assert [r.alpha for r in rep.failing()] == [(p,)]
        assert rep.record((p,)).slack == -1
        assert not member_mod_J(f, ideal, space)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_search_minimal_N(k):
    space = witness_space(k)
    result = search_minimal_N(space, witness_corpus(space))
    assert result.N == k
    assert not result.vacuous
    # below the answer some witness satisfies the hypothesis without being a member
    below = [r for r in result.rows if r.N == k - 1]
    assert k == 1 or any(r.counterexample and not r.member for r in below)


def test_search_vacuous():
    result = search_minimal_N(W3, [(R.one(), Ideal((Z + W,)), 1)])
    assert result.N == 1 and result.vacuous


def test_randomized_soundness():
    rng = random.Random(2026)
    for _ in range(40):
        req = random_constructed_request(rng)
        assert graded_size_check(req.f, req.ideal, req.space, req.l).passed
        cert = certify_membership(req)
        assert verify_certificate(cert, req)
        assert not verify_certificate(mutate_certificate(rng, cert), req)


def test_monotone_in_l():
    rng = random.Random(99)
    seen = 0
    while seen < 15:
        req = random_constructed_request(rng)
        if req.l != 2:
            continue
        seen += 1
        certify_membership(req)
        lower = CertifyRequest(req.f, req.ideal, req.space, 1)
        assert verify_certificate(certify_membership(lower), lower)


def test_classical_specialization():
    # k = 1: every monomial in the closure of a^(min(m,n)+l-1) is certified in a^l
    rng = random.Random(21)
    space = make_space(2, ["w"])
    ring = space.ring
    zring = [ring.gen(0), ring.gen(1)]
    for _ in range(6):
        m = rng.randint(1, 3)
        gens = []
        while len(gens) < m:
            g = zring[0] ** rng.randint(0, 3) * zring[1] ** rng.randint(0, 3)
            if g != ring.one() and g not in gens:
                gens.append(g)
        ideal = Ideal(tuple(gens))
        np = newton_polyhedron(ideal)
        for l in (1, 2):
            M = min(m, 2) + l - 1
            for a, b in itertools.product(range(9), repeat=2):
                e = (a, b, 0)
                if a + b <= 8 and closure_member_monomial(e, np, M):
                    req = CertifyRequest(ring.monomial(e), ideal, space, l)
                    assert verify_certificate(certify_membership(req), req)
