"""Command line front end: ``svir <subcommand> [options] ARGS...``.

Every subcommand builds a job document (or reads one with ``--job``), runs
it and prints the report. Exit status: 0 holds, 1 negative verdict or a
failed ``--verify``, 2 usage, parse or schema error.
"""

from __future__ import annotations

import argparse
import sys

from . import jobs

SUBCOMMANDS = {
    "bracket": "bracket of two elements: X Y",
    "jacobi": "super-skew and super-Jacobi sweep over a degree window",
    "der-witness": "inner witness for a map table: X=V ...",
    "der-local": "is V the value at X of some inner derivation: X V",
    "der-intersect": "intersection of images of y -> [y, p] over probes: P ...",
    "der-pipeline": "normalize the inner derivation ad(Y) and recover Y: Y",
    "aut-apply": "apply an automorphism (--params) to elements: X ...",
    "aut-fit": "all automorphisms sending X to V: X V",
    "aut-check": "check a table (X=V ... with --fill), --params or --omega",
    "aut-local": "local automorphism decision for a table: X=V ... with --fill",
    "aut-2local": "2-local recovery against an oracle: X=V ... with --fallback",
    "run": "run a job file of any task (requires --job)",
}


class UsageError(ValueError):
    pass


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--eps", choices=["0", "1/2"], default=None, help="grid of G indices (default 0)")
    common.add_argument("--center", dest="center", action="store_true", default=None,
                        help="keep the central element C (default)")
    common.add_argument("--no-center", dest="center", action="store_false", help="centerless quotient")
    common.add_argument("--radius", type=int, default=None, help="degree radius")
    common.add_argument("--ansatz-radius", type=int, default=None)
    common.add_argument("--target-radius", type=int, default=None)
    common.add_argument("--job", metavar="FILE", help="read the job from a JSON file")
    common.add_argument("--verify", action="store_true", help="re-check certificates independently")
    common.add_argument("--json", action="store_true", help="print the machine-readable report")
    common.add_argument("--out", metavar="PATH", help="write the machine-readable report to PATH")
    common.add_argument("--params", help="automorphism: identity, omega or eps=..,a=..,s=..[,h=..]")
    common.add_argument("--omega", action="store_true", help="aut-check: the grading involution")
    common.add_argument("--fill", help="complete a table with identity, omega or eps=..,a=..,s=..")
    common.add_argument("--fill-radius", type=int, default=None)
    common.add_argument("--fallback", help="aut-2local: oracle values off the listed ones")
    common.add_argument("--parity", choices=["even", "odd"], default=None)
    common.add_argument("--family", nargs=2, metavar=("BASE", "DIRECTION"),
                        help="der-intersect: probes BASE + x*DIRECTION")
    common.add_argument("--xs", nargs="+", default=None, help="scalars for --family")
    common.add_argument("--expect", nargs="+", default=None, help="der-intersect: expected basis")
    p = argparse.ArgumentParser(prog="svir", description="Exact computations in super Virasoro algebras.")
    sub = p.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")
    for name, text in SUBCOMMANDS.items():
        sp = sub.add_parser(name, parents=[common], help=text, description=text)
        sp.add_argument("args", nargs="*", metavar="ARGS")
    return p


def _params_text(text: str):
    t = text.strip()
    if t in ("identity", "omega"):
        return t
    doc = {}
    for part in t.split(","):
        if "=" not in part:
            raise UsageError("bad parameter %r; expected key=value" % part)
        k, v = (s.strip() for s in part.split("=", 1))
        if k not in ("eps", "a", "s", "h"):
            raise UsageError("unknown automorphism parameter %r" % k)
        doc[k] = v
    if "eps" in doc:
        doc["eps"] = {"1": "+1", "+1": "+1", "-1": "-1"}.get(doc["eps"], doc["eps"])
    return doc


def _pairs(args):
    out = []
    for a in args:
        if "=" not in a:
            raise UsageError("expected X=V, got %r" % a)
        x, v = a.split("=", 1)
        out.append([x.strip(), v.strip()])
    return out


def _arity(ns, n):
    if len(ns.args) != n:
        raise UsageError("%s takes %d argument%s, got %d" % (ns.command, n, "" if n == 1 else "s", len(ns.args)))


def build_job(ns) -> dict:
    cmd = ns.command
    job = {"task": cmd,
           "config": {"epsilon": ns.eps or "0", "with_center": True if ns.center is None else ns.center}}
    ops, opts = {}, {}
    for key in ("radius", "ansatz_radius", "target_radius"):
        if getattr(ns, key) is not None:
            opts[key] = getattr(ns, key)
    a = ns.args
    if cmd == "bracket":
        _arity(ns, 2)
        ops["x"], ops["y"] = a
    elif cmd == "jacobi":
        _arity(ns, 0)
    elif cmd in ("der-witness", "aut-check", "aut-local"):
        if cmd == "aut-check" and (ns.omega or ns.params):
            _arity(ns, 0)
            if ns.omega:
                ops["omega"] = True
            else:
                ops["params"] = _params_text(ns.params)
        else:
            table = {"entries": _pairs(a)}
            if ns.fill:
                table["fill"] = _params_text(ns.fill)
            if ns.fill_radius is not None:
                table["fill_radius"] = ns.fill_radius
            if ns.parity:
                table["parity"] = ns.parity
            if not table["entries"] and "fill" not in table:
                raise UsageError("%s needs X=V entries or --fill" % cmd)
            ops["table"] = table
    elif cmd == "der-local":
        _arity(ns, 2)
        ops["x"], ops["v"] = a
    elif cmd == "der-intersect":
        if a:
            ops["probes"] = list(a)
        if ns.family:
            if not ns.xs:
                raise UsageError("--family needs --xs")
            ops["family"] = {"base": ns.family[0], "direction": ns.family[1], "xs": ns.xs}
        if not ops:
            raise UsageError("der-intersect needs probes or --family")
        if ns.expect:
            opts["expect"] = ns.expect
    elif cmd == "der-pipeline":
        _arity(ns, 1)
        ops["inner"] = a[0]
    elif cmd == "aut-apply":
        if not ns.params:
            raise UsageError("aut-apply needs --params")
        if not a:
            raise UsageError("aut-apply needs at least one element")
        ops["params"] = _params_text(ns.params)
        ops["elements"] = list(a)
    elif cmd == "aut-fit":
        _arity(ns, 2)
        ops["x"], ops["image"] = a
    elif cmd == "aut-2local":
        oracle = {"values": _pairs(a)}
        if ns.fallback:
            oracle["fallback"] = _params_text(ns.fallback)
        ops["oracle"] = oracle
    if ops:
        job["operands"] = ops
    if opts:
        job["options"] = opts
    return job


INLINE = ("eps", "center", "radius", "ansatz_radius", "target_radius", "params", "fill", "fill_radius",
          "fallback", "parity", "family", "xs", "expect")


def resolve_job(ns) -> dict:
    if ns.job:
        if ns.args or ns.omega or any(getattr(ns, k) is not None for k in INLINE):
            raise UsageError("use either --job or inline arguments, not both")
        job = jobs.load_job(ns.job)
        if ns.command != "run" and job["task"] != ns.command:
            raise UsageError("job file task %r does not match subcommand %r" % (job["task"], ns.command))
        return job
    if ns.command == "run":
        raise UsageError("run requires --job FILE")
    job = build_job(ns)
    jobs.validate_job(job)
    return job


def main(argv=None) -> int:
    try:
        ns = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and jobs.EXIT_USAGE
    try:
        job = resolve_job(ns)
        report = jobs.run_job(job)
    except (UsageError, OSError) + jobs.USAGE_ERRORS as exc:
        print("svir: error: %s" % exc, file=sys.stderr)
        return jobs.EXIT_USAGE
    status = report.status
    if ns.out:
        with open(ns.out, "w") as fh:
            fh.write(report.dumps())
    sys.stdout.write(report.dumps() if ns.json else report.text)
    if ns.verify:
        problems = jobs.verify_report(job, report.doc)
        if problems:
            for p in problems:
                print("verify: FAILED: %s" % p, file=sys.stderr)
            status = max(status, jobs.EXIT_NEGATIVE)
        else:
            print("verify: all certificates re-checked", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
