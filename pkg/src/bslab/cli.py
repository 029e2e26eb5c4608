"""Command-line front end: ``bslab <command> ...`` (or ``python -m bslab``).

Exit status: 0 success / verified / member, 1 verified-false / non-member /
hypothesis failed, 2 usage or resource error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import certify as cz
from .closure import (
    closure_member_monomial,
    default_weights,
    graded_size_check,
    newton_polyhedron,
    power_closure_test,
    required_exponents,
)
from .germ import (
    SpaceError,
    jet_mul,
    load_space,
    member_of_J,
    noetherian_set,
    space_to_dict,
    taylor_jet,
)
from .polycore import AmbientRing, Ideal, PolynomialSyntaxError, ResourceLimitError, ideal_power

SCHEMA = 1


class UsageError(Exception):
    pass


def _emit(args, text: str, payload: dict):
    if args.format == "json":
        payload = {"schema": SCHEMA, **payload}
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _space(args):
    if args.space:
        return load_space(args.space)
    if getattr(args, "k", None):
        return cz.witness_space(args.k)
    raise UsageError("--space (or --k) is required")


def _weights(args, n):
    if not getattr(args, "weights", None):
        return default_weights(n)
    out = []
    for chunk in args.weights.split(";"):
        c = tuple(int(x) for x in chunk.split(","))
        if len(c) != n or any(x < 1 for x in c):
            raise UsageError(f"bad weight vector {chunk!r}")
        out.append(c)
    return out


def _need(args, *names):
    for n in names:
        if getattr(args, n, None) is None:
            raise UsageError(f"--{n.replace('_', '-')} is required for {args.command}")


def _request(args):
    _need(args, "phi", "ideal")
    space = _space(args)
    f = space.ring.parse(args.phi)
    ideal = Ideal.parse(args.ideal, space.ring)
    return cz.CertifyRequest(f, ideal, space, args.l)


# ---------------------------------------------------------------------------
# commands


def cmd_jet(args):
    _need(args, "phi")
    space = _space(args)
    jet = taylor_jet(space.ring.parse(args.phi), space)
    text = "\n".join(f"{','.join(map(str, a))}: {c}" for a, c in jet.coefficients)
    _emit(args, text, {"jet": jet.to_json()})
    return 0


def cmd_noetherian(args):
    space = _space(args)
    ops = noetherian_set(space)
    lines = [f"{str(op):>8}  order {op.order}" for op in ops]
    lines.append(f"d = {space.max_order}")
    _emit(
        args,
        "\n".join(lines),
        {"operators": [{"alpha": list(op.alpha), "order": op.order} for op in ops], "d": space.max_order},
    )
    return 0


def cmd_closure(args):
    _need(args, "phi", "ideal")
    if args.space:
        ring = load_space(args.space).ring
    elif args.vars:
        ring = AmbientRing(tuple(v.strip() for v in args.vars.split(",")))
    else:
        raise UsageError("--space or --vars is required for closure")
    f = ring.parse(args.phi)
    ideal = Ideal.parse(args.ideal, ring)
    if ideal.is_monomial() and f.is_monomial():
        np = newton_polyhedron(ideal)
        member = closure_member_monomial(f.LM, np, args.power)
        facets = [{"normal": list(n), "offset": o} for n, o in np.facets]
        text = "\n".join(
            [f"facet {' '.join(map(str, n))} >= {o}" for n, o in np.facets]
            + [f"{f} in closure of I^{args.power}: {'yes' if member else 'no'}"]
        )
        _emit(args, text, {"facets": facets, "member": member, "method": "newton"})
    else:
        member = power_closure_test(f, ideal_power(ideal, args.power), args.s_bound)
        verdict = "yes" if member else "inconclusive"
        _emit(
            args,
            f"{f} in closure of I^{args.power}: {verdict} (power test, s <= {args.s_bound})",
            {"member": member, "method": "power-test", "s_bound": args.s_bound},
        )
    return 0 if member else 1


def cmd_size_check(args):
    req = _request(args)
    report = graded_size_check(req.f, req.ideal, req.space, req.l, _weights(args, req.space.ring.nvars))
    _emit(args, report.to_text(), {"report": report.to_dict()})
    return 0 if report.passed else 1


def cmd_certify(args):
    req = _request(args)
    weights = _weights(args, req.space.ring.nvars)
    try:
        cert = cz.certify_membership(req, weights)
    except cz.CertificationFailed as exc:
        if exc.kind == cz.RESOURCE:
            raise ResourceLimitError(exc.message) from exc
        text = exc.kind + ": " + exc.message
        payload = {"status": exc.kind, "message": exc.message}
        if exc.report is not None:
            text += "\n" + exc.report.to_text()
            payload["report"] = exc.report.to_dict()
        _emit(args, text, payload)
        return 1
    ok = cz.verify_certificate(cert, req)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(cert.to_json() + "\n")
    lines = [f"{req.f} = "]
    for c, idx in cert.terms:
        lines.append(f"  + ({c}) * " + " * ".join(f"a{i}" for i in idx))
    lines.append(f"  + ({cert.j_witness})   [in J]")
    lines.append("verified" if ok else "NOT VERIFIED")
    _emit(args, "\n".join(lines), {"status": "verified" if ok else "unverified", "certificate": cert.to_dict()})
    return 0 if ok else 1


def cmd_verify(args):
    _need(args, "cert")
    req = _request(args)
    with open(args.cert) as fh:
        cert = cz.MembershipCertificate.from_json(fh.read(), req.space.ring)
    problems = cz.certificate_problems(cert, req)
    text = "verified" if not problems else "rejected:\n" + "\n".join(problems)
    _emit(args, text, {"verified": not problems, "problems": problems})
    return 0 if not problems else 1


def cmd_witness(args):
    _need(args, "p")
    space = _space(args)
    f, ideal = cz.optimality_witness(space, args.p)
    report = graded_size_check(f, ideal, space, args.l)
    member = cz.member_mod_J(f, ideal, space, args.l)
    text = f"phi_{args.p} = {f}, a = {ideal}\n{report.to_text()}\nmember of a + J: {'yes' if member else 'no'}"
    _emit(args, text, {"phi": str(f), "ideal": [str(g) for g in ideal.generators],
                       "report": report.to_dict(), "member": member})
    return 0


def cmd_search_n(args):
    space = _space(args)
    corpus = cz.witness_corpus(space, args.l)
    result = cz.search_minimal_N(space, corpus)
    lines = [f"{'N':>3} {'case':>24} {'hyp':>4} {'cert':>5} {'member':>7}"]
    for row in result.rows:
        f, ideal, _ = corpus[row.case]
        lines.append(f"{row.N:>3} {str(f):>24} {_yn(row.hypothesis):>4} {_yn(row.certified):>5} {_yn(row.member):>7}")
    lines.append(f"minimal N = {result.N}" + (" (vacuous)" if result.vacuous else ""))
    _emit(args, "\n".join(lines), result.to_dict())
    return 0


def _yn(b):
    return "yes" if b else "no"


def cmd_paper_demo(args):
    k = args.k
    space = cz.witness_space(k)
    ring = space.ring
    z, w = ring.gens()
    out = [f"space C[z,w]/(w^{k}); staircase {[a[0] for a in space.staircase]}"]
    payload = {"k": k, "space": space_to_dict(space)}

    ops = noetherian_set(space)
    out.append("defining set: " + ", ".join(str(op) for op in ops) + f"   (d = {space.max_order})")
    payload["operators"] = [list(op.alpha) for op in ops]

    samples = [(z + 3 * z * w + w**2, 1 - w + z**2), (w * z**2 + 2, z - w**3), (1 + w, 1 - w)]
    iso = all(
        jet_mul(taylor_jet(f, space), taylor_jet(g, space)) == taylor_jet(f * g, space) for f, g in samples
    )
    nil = member_of_J(w, space)
    out.append(f"jet ring spot check: {'ok' if iso else 'FAILED'}; w in J: {_yn(nil)}")
    payload["jet_isomorphism"] = iso

    m, l = 1, 1
    table = required_exponents(space, m, l)
    out.append("required exponents r+(k-1)-j: " + ", ".join(f"j={a[0]}: {e}" for a, e in table.items()))

    wit = []
    out.append("optimality witnesses phi_p = w^p z^(k-1-p), a = (z+w):")
    for p in range(k):
        f, ideal = cz.optimality_witness(space, p)
        rep = graded_size_check(f, ideal, space, l)
        fails = [(r.alpha[0], r.slack) for r in rep.failing()]
        member = cz.member_mod_J(f, ideal, space, l)
        out.append(f"  p={p}: {str(f):<12} fails at {[j for j, _ in fails]} slack {[str(s) for _, s in fails]}; "
                   f"in a+J: {_yn(member)}")
        wit.append({"p": p, "phi": str(f), "fails": [j for j, _ in fails], "member": member})
    payload["witnesses"] = wit

    pos = []
    out.append("positive cases phi'_p = w^p z^(k-p):")
    for p in range(k):
        f, ideal = cz.positive_witness(space, p)
        req = cz.CertifyRequest(f, ideal, space, l)
        cert = cz.certify_membership(req)
        ok = cz.verify_certificate(cert, req)
        out.append(f"  p={p}: {str(f):<12} certified: {cert.to_json()}  verified: {_yn(ok)}")
        pos.append({"p": p, "phi": str(f), "verified": ok, "certificate": cert.to_dict()})
    payload["positive"] = pos

    result = cz.search_minimal_N(space, cz.witness_corpus(space, l))
    r = min(m, space.z_count)
    expected = cz.bs_exponent(space, m, l)
    out.append(f"search-minimal-N: N = {result.N}; expected N = r+k-1 = {r}+{k}-1 = {expected}")
    if k == 1:
        out.append(f"reduced case: N = r = {r}")
    payload.update({"N": result.N, "expected_N": expected, "r": r})
    _emit(args, "\n".join(out), payload)
    ok = iso and nil == (k == 1) and all(not x["member"] for x in wit) and all(x["verified"] for x in pos)
    return 0 if ok and result.N == expected else 1


COMMANDS = {
    "jet": cmd_jet,
    "noetherian": cmd_noetherian,
    "closure": cmd_closure,
    "size-check": cmd_size_check,
    "certify": cmd_certify,
    "verify": cmd_verify,
    "witness": cmd_witness,
    "search-n": cmd_search_n,
    "paper-demo": cmd_paper_demo,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bslab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--format", choices=["text", "json"], default="text")
        p.add_argument("--space", help="space description file (JSON)")
        p.add_argument("--k", type=int, help="use C[z,w]/(w^k) instead of a space file")
        p.add_argument("--phi", help="polynomial representative of the germ")
        p.add_argument("--ideal", help="comma-separated generators")
        p.add_argument("--l", type=int, default=1)
        p.add_argument("--weights", help="semicolon-separated weight vectors, e.g. '1,1;1,2'")
        if name == "closure":
            p.add_argument("--vars", help="comma-separated variable names")
            p.add_argument("--power", type=int, default=1)
            p.add_argument("--s-bound", type=int, default=6)
        if name == "certify":
            p.add_argument("--out", help="write the certificate JSON here")
        if name == "verify":
            p.add_argument("--cert", help="certificate JSON file")
        if name == "witness":
            p.add_argument("--p", type=int)
    return parser


def _fail(kind, message):
    print(json.dumps({"error": kind, "message": message}, sort_keys=True), file=sys.stderr)
    return 2


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "paper-demo" and args.k is None:
        args.k = 3
    if args.l < 1:
        return _fail("usage", "--l must be at least 1")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        return _fail("usage", str(exc))
    except (PolynomialSyntaxError, SpaceError, cz.UnsupportedSpaceError, KeyError, ValueError) as exc:
        return _fail("input", str(exc))
    except (OSError, json.JSONDecodeError) as exc:
        return _fail("io", str(exc))
    except ResourceLimitError as exc:
        return _fail("resource", str(exc))


if __name__ == "__main__":
    sys.exit(main())
