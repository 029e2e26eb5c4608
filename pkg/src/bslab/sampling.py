"""Random inputs for property checks and experiments. All generators take a ``random.Random``."""

from __future__ import annotations

import random
from fractions import Fraction

from .certify import CertifyRequest, MembershipCertificate
from .germ import make_space
from .polycore import AmbientRing, Ideal, Polynomial, power_products

COEFFS = [Fraction(1), Fraction(-1), Fraction(2), Fraction(-3), Fraction(1, 2)]


def random_exponent(rng: random.Random, n: int, degree: int) -> tuple:
    e = [0] * n
    for _ in range(degree):
        e[rng.randrange(n)] += 1
    return tuple(e)


def random_monomial_ideal(rng: random.Random, ring: AmbientRing, m: int, max_degree: int) -> Ideal:
    gens = []
    while len(gens) < m:
        g = ring.monomial(random_exponent(rng, ring.nvars, rng.randint(1, max_degree)))
        if g not in gens:
            gens.append(g)
    return Ideal(tuple(gens))


def random_polynomial(rng: random.Random, ring: AmbientRing, max_degree: int, nterms: int) -> Polynomial:
    f = ring.zero()
    for _ in range(nterms):
        e = random_exponent(rng, ring.nvars, rng.randint(0, max_degree))
        f = f + ring.monomial(e, rng.choice(COEFFS))
    return f


def _random_generator(rng, ring, binomial):
    # vanishes at the origin: every term has positive degree
    while True:
        g = ring.monomial(random_exponent(rng, ring.nvars, rng.randint(1, 2)))
        if binomial:
            g = g + ring.monomial(random_exponent(rng, ring.nvars, rng.randint(1, 2)), rng.choice(COEFFS))
        if g and g.constant_term() == 0:
            return g


def random_element_of_power(rng, ideal: Ideal, power: int, nterms: int = 2) -> Polynomial:
    ring = ideal.ring
    products = power_products(ideal, power)
    f = ring.zero()
    for _ in range(nterms):
        _, p = rng.choice(products)
        h = ring.monomial(random_exponent(rng, ring.nvars, rng.randint(0, 1)), rng.choice(COEFFS))
        f = f + h * p
    return f


def random_constructed_request(rng: random.Random) -> CertifyRequest:
    """``f = sum_{i<k} w^i (element of a^(r+k-i+l-2)) + (element of J)`` on ``O/(w^k)``.

    The extra ``r - 1`` in the power is what the graded size conditions demand when
    ``r = min(m, dim Z) > 1``; for ``r = 1`` it is the plain ``a^(k-i+l-1)``.
    """
    z_count = rng.choice([1, 2])
    k = rng.randint(1, 4)
    l = rng.randint(1, 2)
    m = rng.randint(1, 2)
    space = make_space(z_count, [(k,)])
    ring = space.ring
    binomial = rng.random() < 0.5
    gens = []
    while len(gens) < m:
        g = _random_generator(rng, ring, binomial)
        if g not in gens:
            gens.append(g)
    ideal = Ideal(tuple(gens))
    r = min(m, z_count)
    w = ring.gen(space.w_indices[0])
    f = ring.zero()
    for i in range(k):
        f = f + w**i * random_element_of_power(rng, ideal, r + k - i + l - 2, nterms=rng.randint(1, 2))
    f = f + w**k * ring.monomial(random_exponent(rng, ring.nvars, rng.randint(0, 1)), rng.choice(COEFFS))
    return CertifyRequest(f, ideal, space, l)


def mutate_certificate(rng: random.Random, cert: MembershipCertificate) -> MembershipCertificate:
    """A copy of ``cert`` with one coefficient perturbed by +1, or with the J part broken."""
    ring = cert.j_witness.ring
    if cert.terms and rng.random() < 0.7:
        terms = list(cert.terms)
        i = rng.randrange(len(terms))
        c, idx = terms[i]
        terms[i] = (c + 1, idx)
        return MembershipCertificate(terms, cert.j_witness)
    bump = ring.gen(rng.randrange(ring.nvars - 1)) if ring.nvars > 1 else ring.one()
    return MembershipCertificate(list(cert.terms), cert.j_witness + bump)
