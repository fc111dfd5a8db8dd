"""Command-line front end.

Matrices are passed as row-major literals, rows separated by ";" and
entries by "," with each entry in the scalar grammar (integer, num/den,
or u*p^s).  Results go to stdout as one JSON document; errors go to
stderr as {"error": ..., "message": ...} with exit codes

    2  invalid input        3  precision loss
    4  unsupported prime    5  precondition violation
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import catalog, classify, selfsim, subalgebras
from .errors import (
    InvalidInput,
    PadicLieError,
    PrecisionLoss,
    PreconditionViolated,
    UnsupportedPrime,
)
from .lattice import Algebra, lcs_exponents
from .normal_forms import Mat, parse_matrix
from .padic_core import INF, PrimeContext


def _context(args):
    return PrimeContext(args.prime, args.precision)


def _algebra(args, ctx):
    if getattr(args, "name", None):
        return _named(args, ctx)
    if not getattr(args, "matrix", None):
        raise InvalidInput("provide --matrix or --name")
    return Algebra(parse_matrix(args.matrix, ctx))


def _named(args, ctx):
    s = tuple(int(t) for t in args.s.split(",")) if getattr(args, "s", None) else None
    eps = (args.eps1 or 0, args.eps2 or 0)
    return catalog.named_algebra(
        ctx, args.name, k=getattr(args, "k", None), s=s, eps=eps, n=getattr(args, "n", None)
    )


def _mat_json(M):
    return M.to_rows()


def _cf_json(cf):
    return {
        "family": cf.family,
        "s": list(cf.s),
        "eps": list(cf.eps),
        "eta": classify.eta(cf.matrix()).eta,
        "qp_type": classify.qp_type(cf.matrix()).value,
        "canonical_matrix": _mat_json(cf.matrix()),
    }


def _sigma_json(report):
    return {
        "index_p_self_similar": report.index_p_self_similar,
        "sigma_lower_exponent": report.sigma_lower,
        "sigma_upper_exponent": report.sigma_upper,
        "table_row": report.table_row,
        "witness_exponents": list(report.witness_exponents)
        if report.witness_exponents
        else None,
        "note": report.note,
    }


def cmd_classify(args):
    ctx = _context(args)
    alg = _algebra(args, ctx)
    return _cf_json(classify.canonical_form(alg))


def cmd_eta(args):
    ctx = _context(args)
    A = parse_matrix(args.matrix, ctx)
    br = classify.eta(A)
    return {
        "disc_valuation_parity": br.disc_valuation_parity,
        "hilbert_sum": br.hilbert_sum,
        "eta": br.eta,
        "qp_type": classify.qp_type(A).value,
    }


def cmd_selfsim(args):
    ctx = _context(args)
    alg = _algebra(args, ctx)
    cf = classify.canonical_form(alg)
    report = selfsim.sigma_bounds(cf)
    out = {"canonical": _cf_json(cf), "selfsim": _sigma_json(report)}
    if report.index_p_self_similar:
        ve = selfsim.construct_simple_ve(alg)
        out["certificate"] = {
            "domain": _mat_json(ve.domain),
            "phi": _mat_json(ve.phi),
            "is_morphism": selfsim.is_morphism(ve),
        }
    else:
        out["obstruction"] = (
            "every index-p subalgebra M satisfies [M,M] + p^{s_i} M = "
            "p[L,L] + p^{s_i} L, which any index-p morphism must stabilize"
        )
    return out


def cmd_subalgebras(args):
    ctx = _context(args)
    alg = _algebra(args, ctx)
    reports = subalgebras.enumerate_index_p(alg)
    return {
        "count": len(reports),
        "subalgebras": [
            {
                "xi": list(r.xi.entries),
                "class": r.xi.class_index(),
                "u": _mat_json(r.u_matrix),
                "b": _mat_json(r.b_matrix),
                "is_subalgebra": r.closed,
                "sub_s_invariants": [_val_json(v) for v in r.sub_s] if r.sub_s else None,
            }
            for r in reports
        ],
    }


def _val_json(v):
    return "inf" if v == INF else v


def cmd_endo(args):
    ctx = _context(args)
    alg = _algebra(args, ctx)
    ve = selfsim.VirtualEndomorphism(
        alg, parse_matrix(args.domain, ctx), parse_matrix(args.phi, ctx)
    )
    if args.action == "check":
        return {
            "is_morphism": selfsim.is_morphism(ve),
            "index_exponent": ve.index_exponent(),
        }
    if args.action == "chain":
        chain = selfsim.domain_chain(ve, args.depth)
        reg = selfsim.regularity_check(ve, args.depth)
        return {
            "chain": [_mat_json(m) for m in chain],
            "index_exponents": list(reg.index_exponents),
            "escapes": list(reg.escapes),
            "regular": reg.regular,
        }
    witness = selfsim.invariant_ideal_search(ve, args.search_bound)
    return {
        "witness": _mat_json(witness) if witness is not None else None,
        "simple_up_to_bound": witness is None,
        "bound_exponent": args.search_bound,
    }


def cmd_lcs(args):
    ctx = _context(args)
    alg = _algebra(args, ctx)
    cf = classify.canonical_form(alg)
    terms = []
    for n in range(1, args.depth + 1):
        exps = lcs_exponents(cf.s, n)
        terms.append([_val_json(v) for v in exps])
    return {"s": list(cf.s), "gamma_exponents": terms}


def cmd_named(args):
    ctx = _context(args)
    if args.name in ("dim1", "dim2"):
        s = None if args.s in (None, "inf") else int(args.s)
        rep = selfsim.lowdim_report(ctx, 1 if args.name == "dim1" else 2, args.k or 1, s)
        return {
            "dim": rep.dim,
            "s": _val_json(rep.s) if rep.s is not None else None,
            "k": rep.k,
            "domain": _mat_json(rep.domain),
            "phi": _mat_json(rep.phi),
            "is_morphism": rep.is_morphism,
            "d_infinity": _mat_json(rep.d_infinity),
            "invariant_ideal_found": rep.invariant_found,
        }
    alg = _named(args, ctx)
    cf = classify.canonical_form(alg)
    report = selfsim.sigma_bounds(cf)
    return {
        "name": args.name,
        "matrix": _mat_json(alg.matrix),
        "canonical": _cf_json(cf),
        "selfsim": _sigma_json(report),
        "conjectured": report.sigma_upper == selfsim.CONJECTURED_INFINITE,
    }


def cmd_report(args):
    ctx = _context(args)
    alg = _algebra(args, ctx)
    cf = classify.canonical_form(alg)
    gr = catalog.group_report(alg)
    out = {
        "canonical": _cf_json(cf),
        "selfsim": _sigma_json(selfsim.sigma_bounds(cf)),
        "group": {
            "name": gr.group_name,
            "family": gr.family,
            "parameters": list(gr.parameters),
            "residually_nilpotent": gr.residually_nilpotent,
            "failing_s": _val_json(gr.failing_s) if gr.failing_s is not None else None,
            "prime_threshold": gr.prime_threshold,
            "threshold_met": gr.threshold_met,
            "qp_type": gr.qp_type,
            "index_transfer": gr.index_transfer,
            "notes": list(gr.notes),
        },
    }
    return out


def cmd_selftest(args):
    rng = random.Random(args.seed)
    ctx = PrimeContext(args.prime, args.precision)
    from .classify import canonical_form, eta, is_isomorphic
    from .normal_forms import is_unimodular

    results = {}
    # orbit invariance on a reduced trial count
    trials = 25
    ok = 0
    for _ in range(trials):
        A = _random_symmetric(rng, ctx)
        V = _random_unimodular(rng, ctx)
        u = ctx.from_int(rng.randrange(1, ctx.p))
        B = (V.transpose() * A * V).scale(u)
        if canonical_form(Algebra(A)) == canonical_form(Algebra(B)):
            ok += 1
    results["orbit_invariance"] = {"trials": trials, "passed": ok}
    # eta dual route (it raises on disagreement)
    ok = 0
    for _ in range(trials):
        A = _random_symmetric(rng, ctx)
        eta(A)
        ok += 1
    results["eta_dual_route"] = {"trials": trials, "passed": ok}
    passed = all(v["passed"] == v["trials"] for v in results.values())
    return {"seed": args.seed, "prime": ctx.p, "results": results, "passed": passed}


def _random_symmetric(rng, ctx):
    while True:
        entries = [
            [
                ctx.from_int(rng.randrange(1, ctx.p) * ctx.p ** rng.randrange(0, 3))
                if rng.random() < 0.8
                else ctx.zero()
                for _ in range(3)
            ]
            for _ in range(3)
        ]
        rows = [
            [entries[min(i, j)][max(i, j)] for j in range(3)] for i in range(3)
        ]
        M = Mat(ctx, rows)
        if not M.det().is_zero():
            return M


def _random_unimodular(rng, ctx):
    while True:
        M = Mat.from_ints(
            ctx, [[rng.randrange(-ctx.p**2, ctx.p**2) for _ in range(3)] for _ in range(3)]
        )
        d = M.det()
        if not d.is_zero() and d.valuation() == 0:
            return M


def build_parser():
    ap = argparse.ArgumentParser(
        prog="padiclie",
        description="classification and self-similarity of 3-dimensional Lie lattices over Z_p",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, matrix=True):
        sp.add_argument("--prime", type=int, required=True)
        sp.add_argument("--precision", type=int, default=32)
        sp.add_argument("--pretty", action="store_true")
        sp.add_argument("--json", action="store_true", help="compact JSON (default)")
        if matrix:
            sp.add_argument("--matrix")
            sp.add_argument("--name")
            sp.add_argument("--k", type=int)
            sp.add_argument("--n", type=int)
            sp.add_argument("--s")
            sp.add_argument("--eps1", type=int)
            sp.add_argument("--eps2", type=int)
        return sp

    common(sub.add_parser("classify", help="canonical form of a lattice"))
    p_eta = common(sub.add_parser("eta", help="eta invariant of a symmetric matrix"), matrix=False)
    p_eta.add_argument("--matrix", required=True)
    common(sub.add_parser("selfsim", help="self-similarity report with certificate"))
    common(sub.add_parser("subalgebras", help="index-p submodule reports"))
    p_endo = common(sub.add_parser("endo", help="virtual endomorphism tools"))
    p_endo.add_argument("action", choices=["check", "chain", "search"])
    p_endo.add_argument("--domain", required=True)
    p_endo.add_argument("--phi", required=True)
    p_endo.add_argument("--depth", type=int, default=8)
    p_endo.add_argument("--search-bound", type=int, default=6)
    p_lcs = common(sub.add_parser("lcs", help="lower central series exponents"))
    p_lcs.add_argument("--depth", type=int, default=8)
    p_named = sub.add_parser("named", help="catalog lattice and its canonical data")
    p_named.add_argument("name")
    p_named.add_argument("--prime", type=int, required=True)
    p_named.add_argument("--precision", type=int, default=32)
    p_named.add_argument("--pretty", action="store_true")
    p_named.add_argument("--json", action="store_true")
    p_named.add_argument("--k", type=int)
    p_named.add_argument("--n", type=int)
    p_named.add_argument("--s")
    p_named.add_argument("--eps1", type=int)
    p_named.add_argument("--eps2", type=int)
    common(sub.add_parser("report", help="full lattice-and-group report"))
    p_self = sub.add_parser("selftest", help="randomized invariants on a seed")
    p_self.add_argument("--prime", type=int, required=True)
    p_self.add_argument("--precision", type=int, default=32)
    p_self.add_argument("--seed", type=int, default=0)
    p_self.add_argument("--pretty", action="store_true")
    return ap


HANDLERS = {
    "classify": cmd_classify,
    "eta": cmd_eta,
    "selfsim": cmd_selfsim,
    "subalgebras": cmd_subalgebras,
    "endo": cmd_endo,
    "lcs": cmd_lcs,
    "named": cmd_named,
    "report": cmd_report,
    "selftest": cmd_selftest,
}


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        result = HANDLERS[args.command](args)
    except UnsupportedPrime as e:
        return _fail(e, 4)
    except PrecisionLoss as e:
        return _fail(e, 3)
    except InvalidInput as e:
        return _fail(e, 2)
    except PreconditionViolated as e:
        return _fail(e, 5)
    except PadicLieError as e:
        return _fail(e, 5)
    indent = 2 if getattr(args, "pretty", False) else None
    print(json.dumps(result, indent=indent, sort_keys=False))
    return 0


def _fail(exc, code):
    sys.stderr.write(
        json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n"
    )
    return code


if __name__ == "__main__":
    sys.exit(main())
