"""Witness and certification table for C[z,w]/(w^k), k = 1..K.

    python scripts/sharpness_table.py --kmax 6
"""

import argparse
import time

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
from bslab.closure import graded_size_check


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--kmax", type=int, default=5)
    parser.add_argument("--l", type=int, default=1)
    args = parser.parse_args()

    print(f"{'k':>2} {'p':>2} {'phi_p':>12} {'fails at':>9} {'slack':>6} {'member':>7} {'phi_p certified':>16}")
    for k in range(1, args.kmax + 1):
        space = witness_space(k)
        for p in range(k):
            f, ideal = optimality_witness(space, p)
            rep = graded_size_check(f, ideal, space, args.l)
            bad = rep.failing()
            g, _ = positive_witness(space, p)
            req = CertifyRequest(g, ideal, space, args.l)
            ok = verify_certificate(certify_membership(req), req)
            print(
                f"{k:>2} {p:>2} {str(f):>12} {','.join(str(r.alpha[0]) for r in bad):>9} "
                f"{','.join(str(r.slack) for r in bad):>6} {str(member_mod_J(f, ideal, space, args.l)):>7} {str(ok):>16}"
            )
    print()
    for k in range(1, args.kmax + 1):
        space = witness_space(k)
        t = time.perf_counter()
        res = search_minimal_N(space, witness_corpus(space, args.l))
        print(f"k={k}: minimal N = {res.N}, r+k-1 = {bs_exponent(space, 1)}  ({time.perf_counter() - t:.2f}s)")


if __name__ == "__main__":
    main()
