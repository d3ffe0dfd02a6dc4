"""Command-line entry point: ``kappatwist <command> ...``.

Exit codes: 0 when every check passes, 1 when a check fails (the report is
still written), 2 on usage or configuration errors.
"""

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__, deform, hopf, invariants, lie
from ._backend import BACKEND
from .errors import KappaTwistError
from .pbw import RewriteSystem, Tensor

SCHEMA = 1
DEFAULT_SEED = 0
GOLDEN_DIR = Path(__file__).with_name("golden")


class UsageError(Exception):
    pass


def _threads():
    raw = os.environ.get("HOPF_CONTRACT_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError("HOPF_CONTRACT_THREADS must be an integer, got %r" % raw) from None
    if n < 1:
        raise UsageError("HOPF_CONTRACT_THREADS must be positive")
    return n


def _strip_timing(obj):
    if isinstance(obj, dict):
        return {k: _strip_timing(v) for k, v in obj.items() if k != "seconds"}
    if isinstance(obj, list):
        return [_strip_timing(v) for v in obj]
    return obj


def load_model_algebra(model):
    if model in lie.registry_names():
        return lie.get_algebra(model)
    p = Path(model)
    if p.suffix == ".json" and p.exists():
        try:
            return lie.load_algebra(p)
        except (KeyError, ValueError, json.JSONDecodeError) as exc:
            raise UsageError("cannot read algebra file %s: %s" % (model, exc)) from None
    raise UsageError("unknown model %r (registry: %s)" % (model, ", ".join(lie.registry_names())))


def _kappa_n(model):
    if model.startswith("kappa-poincare-"):
        tail = model[len("kappa-poincare-"):]
        if tail in ("3", "4"):
            return int(tail)
        raise UsageError("kappa-poincare models exist for n = 3, 4")
    return None


def load_hopf(model, order):
    n = _kappa_n(model)
    if n is not None:
        return hopf.kappa_poincare(n, order)
    alg = load_model_algebra(model)
    return hopf.canonical_hopf(RewriteSystem(alg, order))


# --- commands ---------------------------------------------------------------------

def cmd_algebra_check(args):
    spec = load_model_algebra(args.model)
    rep = lie.validate(spec)
    ok = rep["jacobi"] and rep["decomposition"]
    return ok, {"model": spec.name, "dim": spec.dim, "validate": rep,
                "note": "span_pp is informational (false for contracted algebras)"}


def cmd_hopf_check(args):
    h = load_hopf(args.model, args.order)
    rep = hopf.check_hopf_axioms(h, samples=args.samples, seed=args.seed)
    out = {"model": h.name, "order": args.order, "axioms": rep.to_json()}
    ok = rep.ok()
    if h.contractible:
        c = hopf.delta_contractibility(h)
        out["contractibility"] = {"ok": c["ok"], "witnesses": [list(map(str, w)) for w in c["witnesses"]]}
        ok = ok and c["ok"]
    if "d" in h.meta:
        out["antipode_d"] = "%d/%d" % (h.meta["d"].numerator, h.meta["d"].denominator)
    return ok, out


def _golden_path(model, order):
    return GOLDEN_DIR / ("twist_%s_order%d.json" % (model, order))


def cmd_twist_solve(args):
    n = _kappa_n(args.model)
    if n is None:
        raise UsageError("twist solve needs a kappa-poincare-N model")
    h = hopf.kappa_poincare(n, args.order)
    iso, dt, tw = deform.kappa_pipeline(h, degree_cap=args.degree_cap)
    s = tw.structure()
    qh = hopf.check_quasi_hopf(s)
    tri = hopf.check_triangular(s)
    f1a = deform.antisymmetric_part(tw.components[0]) if tw.components else None
    out = {"model": h.name, "order": args.order, "twist": tw.to_json(),
           "iso": iso.to_json(), "quasi_hopf": qh.to_json(), "triangular": tri.to_json(),
           "f1_antisymmetric": f1a.to_json() if f1a is not None else None}
    ok = qh.ok() and tri.ok()
    golden = Path(args.golden) if args.golden else _golden_path(args.model, args.order)
    if golden.exists():
        ref = json.loads(golden.read_text())
        match = ref.get("f1_antisymmetric") == out["f1_antisymmetric"]
        out["golden"] = {"path": golden.name, "f1_match": match}
        ok = ok and match
    else:
        out["golden"] = {"path": golden.name, "f1_match": None}
    if args.write_golden:
        golden.write_text(json.dumps({"model": args.model, "order": args.order,
                                      "f1_antisymmetric": out["f1_antisymmetric"],
                                      "components": out["twist"]["components"]},
                                     indent=1, sort_keys=True) + "\n")
    return ok, out


def cmd_contract(args):
    n = _kappa_n(args.model)
    out = {"model": args.model}
    ok = True
    if n is not None:
        h = hopf.kappa_poincare(n, args.order)
        cd = deform.kappa_contract(h.delta)
        same = all(cd.images[g].terms == h.delta.images[g].terms for g in range(h.rs.dim))
        out["delta_contracted_equal"] = same
        out["note"] = "the model is homogeneous, so the contraction limit returns it unchanged"
        ok = same
    else:
        spec = load_model_algebra(args.model)
        if not spec.has_decomposition():
            raise UsageError("%s has no symmetric decomposition" % spec.name)
        c = lie.iw_contract(spec)
        out["contracted"] = c.to_json()
        out["validate"] = lie.validate(c)
        ok = out["validate"]["jacobi"] and out["validate"]["decomposition"]
        ref = {"so4": "iso3", "so5": "iso4"}.get(spec.name)
        if ref:
            out["matches"] = {ref: c.same_structure(lie.get_algebra(ref))}
            ok = ok and out["matches"][ref]
    return ok, out


def cmd_invariants_restriction(args):
    try:
        spec = lie.get_algebra(args.pair)
    except KeyError:
        raise UsageError("unknown pair %r" % args.pair) from None
    if not spec.has_decomposition():
        raise UsageError("%s carries no symmetric decomposition" % args.pair)
    rep = invariants.restriction_check(spec, args.degree, cap=args.ambient_cap)
    # a non-surjective restriction is a finding, not a failure
    return True, invariants.report_json(rep)


def cmd_cybe(args):
    spec = load_model_algebra(args.model)
    try:
        data = json.loads(Path(args.r).read_text())
        entries = {(spec.index(t["a"]), spec.index(t["b"])): t["coeff"] for t in data["terms"]}
    except (OSError, KeyError, ValueError, KappaTwistError) as exc:
        raise UsageError("cannot read r-matrix file: %s" % exc) from None
    r = lie.LieTensor(2, entries, spec.name)
    rr = lie.cybe_bracket(spec, r)
    w = lie.ad_invariance_witness(spec, rr)
    out = {"model": spec.name,
           "cybe": [{"legs": [spec.labels[i] for i in k], "coeff": "%d/%d" % (v.numerator, v.denominator)}
                    for k, v in sorted(rr.entries.items())],
           "cybe_zero": rr.is_zero(),
           "ad_invariant": w is None,
           "witness_generator": spec.labels[w] if w is not None else None}
    return True, out


# --- driver -----------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="kappatwist", description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=None, help="report path (default: <command>-report.json)")
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--quiet", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    alg = sub.add_parser("algebra").add_subparsers(dest="action", required=True)
    p = alg.add_parser("check")
    p.add_argument("model")
    p.set_defaults(func=cmd_algebra_check, name="algebra-check")

    hp = sub.add_parser("hopf").add_subparsers(dest="action", required=True)
    p = hp.add_parser("check")
    p.add_argument("model")
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--samples", type=int, default=50)
    p.set_defaults(func=cmd_hopf_check, name="hopf-check")

    tw = sub.add_parser("twist").add_subparsers(dest="action", required=True)
    p = tw.add_parser("solve")
    p.add_argument("model")
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--degree-cap", type=int, default=None)
    p.add_argument("--golden", default=None)
    p.add_argument("--write-golden", action="store_true")
    p.set_defaults(func=cmd_twist_solve, name="twist-solve")

    p = sub.add_parser("contract")
    p.add_argument("model")
    p.add_argument("--order", type=int, default=2)
    p.set_defaults(func=cmd_contract, name="contract")

    iv = sub.add_parser("invariants").add_subparsers(dest="action", required=True)
    p = iv.add_parser("restriction")
    p.add_argument("pair")
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--ambient-cap", type=int, default=invariants.DEFAULT_CAP)
    p.set_defaults(func=cmd_invariants_restriction, name="invariants-restriction")

    p = sub.add_parser("cybe")
    p.add_argument("model")
    p.add_argument("--r", required=True)
    p.set_defaults(func=cmd_cybe, name="cybe")
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    for key in ("order", "degree", "samples", "ambient_cap"):
        v = getattr(args, key, None)
        if v is not None and v < (1 if key in ("degree", "ambient_cap") else 0):
            print("error: --%s must be %s" % (key.replace("_", "-"), "positive" if key != "order" else "non-negative"),
                  file=sys.stderr)
            return 2
    try:
        threads = _threads()
        ok, body = args.func(args)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    report = {"schema": SCHEMA, "command": args.name, "seed": args.seed, "threads": threads,
              "ok": bool(ok), "result": _strip_timing(body)}
    out = Path(args.out or "%s-report.json" % args.name)
    out.write_text(json.dumps(report, indent=1, sort_keys=True) + "\n")
    if not args.quiet:
        print("%s: %s (seed %d, backend %s) -> %s"
              % (args.name, "ok" if ok else "FAILED", args.seed, BACKEND, out))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
