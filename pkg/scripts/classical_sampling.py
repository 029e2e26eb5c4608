"""Sample the classical inclusion closure(a^(min(m,n)+l-1)) in a^l for random monomial ideals,
and compare the Newton-polyhedron closure test against the power test.

    python scripts/classical_sampling.py --ideals 200 --seed 1
"""

import argparse
import itertools
import random

from bslab.closure import closure_member_monomial, newton_polyhedron, power_closure_test
from bslab.polycore import AmbientRing, ideal_member, ideal_power
from bslab.sampling import random_exponent, random_monomial_ideal


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--ideals", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-degree", type=int, default=12)
    parser.add_argument("--s-bound", type=int, default=6)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    rings = {2: AmbientRing(("x", "y")), 3: AmbientRing(("x", "y", "z"))}
    inclusion = [0, 0]
    oracle = [0, 0]
    tight = 0
    for _ in range(args.ideals):
        n = rng.choice([2, 3])
        ring = rings[n]
        m = rng.randint(1, 4)
        ideal = random_monomial_ideal(rng, ring, m, 5)
        np = newton_polyhedron(ideal)
        for l in (1, 2):
            power = ideal_power(ideal, l)
            M = min(m, n) + l - 1
            for e in itertools.product(range(args.max_degree + 1), repeat=n):
                if sum(e) > args.max_degree:
                    continue
                member = ideal_member(ring.monomial(e), power) is not None
                if closure_member_monomial(e, np, M):
                    inclusion[0] += 1
                    inclusion[1] += member
                elif M > l and closure_member_monomial(e, np, M - 1) and not member:
                    tight += 1
        e = random_exponent(rng, n, rng.randint(0, 8))
        oracle[0] += 1
        oracle[1] += closure_member_monomial(e, np, 1) == power_closure_test(ring.monomial(e), ideal, args.s_bound)

    print(f"closure monomials certified in a^l: {inclusion[1]}/{inclusion[0]}")
    print(f"monomials in closure(a^(M-1)) but not in a^l (exponent one lower fails): {tight}")
    print(f"Newton polyhedron vs power test agreement: {oracle[1]}/{oracle[0]}")


if __name__ == "__main__":
    main()
