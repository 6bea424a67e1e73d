"""Job files, report documents and certificate verification.

A job is a JSON document (schema in ``schema/job.schema.json``) naming a
task, an algebra configuration, operands and options. ``run_job`` returns a
:class:`Report` holding a machine-readable document, a human-readable text
and an exit status (0 holds, 1 negative verdict, 2 usage error).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

import jsonschema

from . import algebra, automorphisms as aut, derivations as der
from .algebra import AlgebraConfig, Element, bracket
from .linalg import Subspace, Window
from .scalar import Scalar
from .textio import format_element, parse_element

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2

FIXER_NOTE = (
    "Fixing L(1) leaves two automorphisms, the identity and the grading involution "
    "omega (L -> L, G -> -G, C -> C). omega preserves every bracket, so the fixer "
    "set computed here is {id, omega}, not {id}.")


class JobError(ValueError):
    """Malformed or inconsistent job; maps to exit status 2."""


@dataclass
class Report:
    doc: dict
    text: str
    status: int

    def dumps(self) -> str:
        return dumps(self.doc)


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=True) + "\n"


def load_schema() -> dict:
    with resources.files("svir").joinpath("schema/job.schema.json").open() as fh:
        return json.load(fh)


def validate_job(job: dict):
    try:
        jsonschema.validate(job, load_schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(map(str, exc.absolute_path)) or "<root>"
        raise JobError("job schema violation at %s: %s" % (where, exc.message)) from None


def load_job(path) -> dict:
    try:
        with open(path) as fh:
            job = json.load(fh)
    except json.JSONDecodeError as exc:
        raise JobError("%s is not valid JSON: %s" % (path, exc)) from None
    validate_job(job)
    return job


def make_config(doc: dict) -> AlgebraConfig:
    return AlgebraConfig(Fraction(doc["epsilon"]), bool(doc["with_center"]))


def config_json(cfg: AlgebraConfig) -> dict:
    return {"epsilon": "1/2" if cfg.half else "0", "with_center": cfg.with_center}


# -- operand decoding ------------------------------------------------------------

class _Ctx:
    def __init__(self, job):
        self.job = job
        self.cfg = make_config(job["config"])
        self.ops = job.get("operands", {})
        self.opts = job.get("options", {})

    def need(self, key):
        if key not in self.ops:
            raise JobError("task %s needs operand %r" % (self.job["task"], key))
        return self.ops[key]

    def el(self, key) -> Element:
        return parse_element(self.cfg, self.need(key))

    def els(self, texts) -> list[Element]:
        return [parse_element(self.cfg, t) for t in texts]

    def opt(self, key, default):
        return self.opts.get(key, default)

    def params(self, doc) -> aut.AutParams:
        if doc == "identity":
            return aut.identity_params(self.cfg)
        if doc == "omega":
            return aut.omega_params(self.cfg)
        return aut.AutParams.from_json(doc).for_config(self.cfg)

    def table(self, doc, default_radius) -> der.MapTable:
        cfg = self.cfg
        entries = [(parse_element(cfg, a), parse_element(cfg, b)) for a, b in doc.get("entries", [])]
        fill = doc.get("fill")
        if fill is not None:
            p = self.params(fill)
            given = {s for x, _ in entries for s in x}
            for sym in cfg.symbols(doc.get("fill_radius", default_radius)):
                if sym not in given:
                    e = Element.basis(cfg, sym)
                    entries.append((e, aut.apply_aut(cfg, p, e)))
        parity = {"even": 0, "odd": 1}.get(doc.get("parity"))
        return der.MapTable(cfg, entries, parity)


def _el(x) -> str | None:
    return None if x is None else format_element(x)


def _sc(c: Scalar) -> str:
    return str(c)


def _table_json(t: der.MapTable) -> list:
    return [[_el(x), _el(y)] for x, y in t.entries]


def _params_json(p):
    return None if p is None else p.to_json()


# -- tasks -----------------------------------------------------------------------

def _bracket(c: _Ctx):
    x, y = c.el("x"), c.el("y")
    z = bracket(c.cfg, x, y)
    return ({"x": _el(x), "y": _el(y)}, "ok", EXIT_OK, {"value": _el(z)}, {})


def _jacobi(c: _Ctx):
    r = c.opt("radius", 3)
    viol = algebra.super_jacobi_report(c.cfg, r)
    result = {"violations": len(viol),
              "first": [{"kind": v["kind"], "triple": [str(s) for s in v["triple"]],
                         "defect": _el(v["defect"])} for v in viol[:10]]}
    verdict = "%d violations" % len(viol)
    return ({"radius": r}, verdict, EXIT_OK if not viol else EXIT_NEGATIVE, result, {})


def _witness_json(rep: der.WitnessReport):
    cert = {"status": rep.status, "ansatz_size": len(rep.ansatz), "witness": _el(rep.witness),
            "residual": _el(rep.residual)}
    if rep.obstruction:
        cert["obstruction"] = [{"entry": j, "functional": {str(s): _sc(v) for s, v in fn.items()}}
                               for j, fn in rep.obstruction]
    if rep.note:
        cert["note"] = rep.note
    return cert


def _der_witness(c: _Ctx):
    r = c.opt("ansatz_radius", c.opt("radius", 5))
    t = c.table(c.need("table"), r)
    rep = der.inner_witness(t, Window.degree(c.cfg, r))
    return ({"table": _table_json(t), "ansatz_radius": r}, rep.status,
            EXIT_OK if rep.found else EXIT_NEGATIVE, {"witness": _el(rep.witness)}, _witness_json(rep))


def _der_local(c: _Ctx):
    x, v = c.el("x"), c.el("v")
    r = c.opt("ansatz_radius", c.opt("radius", 5))
    rep = der.local_der_at(c.cfg, x, v, Window.degree(c.cfg, r))
    return ({"x": _el(x), "v": _el(v), "ansatz_radius": r}, rep.status,
            EXIT_OK if rep.found else EXIT_NEGATIVE, {"witness": _el(rep.witness)}, _witness_json(rep))


def _probes(c: _Ctx):
    probes = []
    if "probes" in c.ops:
        probes += c.els(c.ops["probes"])
    if "family" in c.ops:
        fam = c.ops["family"]
        base, direction = parse_element(c.cfg, fam["base"]), parse_element(c.cfg, fam["direction"])
        probes += der.probe_family(base, direction, [Scalar.coerce(x) for x in fam["xs"]])
    if not probes:
        raise JobError("der-intersect needs 'probes' or 'family'")
    return probes


def _der_intersect(c: _Ctx):
    probes = _probes(c)
    tr = c.opt("target_radius", c.opt("radius", 4))
    target = Window.degree(c.cfg, tr)
    if "ansatz_radius" in c.opts:
        ansatz = Window.degree(c.cfg, c.opts["ansatz_radius"])
    else:
        ansatz = der.padded_ansatz(c.cfg, probes, tr)
    space = der.image_intersection(c.cfg, probes, ansatz, target)
    basis = space.basis()
    pre = der.intersection_preimages(c.cfg, space, probes, ansatz)
    result = {"dim": space.dim, "basis": [_el(b) for b in basis]}
    status, verdict = EXIT_OK, "dim %d" % space.dim
    inputs = {"probes": [_el(p) for p in probes], "target_radius": tr, "ansatz_size": len(ansatz)}
    if "expect" in c.opts:
        expected = Subspace.span(target, c.els(c.opts["expect"]))
        inputs["expect"] = [_el(b) for b in expected.basis()]
        match = expected == space
        result["matches_expected"] = match
        if not match:
            status, verdict = EXIT_NEGATIVE, "dim %d, differs from expected dim %d" % (space.dim, expected.dim)
    cert = {"preimages": [{"vector": _el(v), "witnesses": [_el(y) for y in ys]} for v, ys in pre]}
    return inputs, verdict, status, result, cert


def _der_pipeline(c: _Ctx):
    r = c.opt("radius", 6)
    if "inner" in c.ops:
        y0 = c.el("inner")
        t = der.ad_table(c.cfg, y0, c.cfg.symbols(r))
        inputs = {"inner": _el(y0), "radius": r}
    else:
        t = c.table(c.need("table"), r)
        inputs = {"table": _table_json(t), "radius": r}
    res = der.normalization_pipeline(t)
    nonzero = [(x, v) for x, v in res.residuals if not v.is_zero()]
    result = {"status": res.status, "witness": _el(res.witness),
              "nonzero_residuals": [[_el(x), _el(v)] for x, v in nonzero]}
    steps = {k: (_el(v) if isinstance(v, Element) else _sc(v)) for k, v in res.steps.items()
             if k != "step"}
    cert = {"witness": _el(res.witness), "steps": steps, "inputs_checked": len(res.residuals)}
    return inputs, res.status, EXIT_OK if res.clean else EXIT_NEGATIVE, result, cert


def _aut_apply(c: _Ctx):
    p = c.params(c.need("params"))
    xs = c.els(c.need("elements"))
    vals = [aut.apply_aut(c.cfg, p, x) for x in xs]
    return ({"params": p.to_json(), "elements": [_el(x) for x in xs]}, "ok", EXIT_OK,
            {"values": [[_el(x), _el(v)] for x, v in zip(xs, vals)]}, {})


def _fit_json(fr: aut.FitResult):
    fams = []
    for f in fr.families():
        fams.append({"eps": "%+d" % f["eps"], "a": None if f["a"] is None else _sc(f["a"]),
                     "h": None if f["h"] is None else _sc(f["h"]), "s": [_sc(s) for s in f["s"]]})
    return fams


def _aut_fit(c: _Ctx):
    x, img = c.el("x"), c.el("image")
    fr = aut.fit_single(c.cfg, x, img)
    result = {"families": _fit_json(fr), "description": fr.describe(), "notes": fr.notes}
    cfg = c.cfg
    if x == cfg.L(1) and img == cfg.L(1):
        result["fixer_set_note"] = FIXER_NOTE
    cert = {"candidates": [{"eps": cd.eps, "a": None if cd.a is None else _sc(cd.a), "s": _sc(cd.s),
                            "h": None if cd.h is None else _sc(cd.h)} for cd in fr.candidates]}
    return ({"x": _el(x), "image": _el(img)}, "realizable" if fr else "not realizable",
            EXIT_OK if fr else EXIT_NEGATIVE, result, cert)


def _aut_check(c: _Ctx):
    r = c.opt("radius", 3)
    table_radius = 2 * r
    if c.ops.get("omega"):
        t = aut.grading_involution(c.cfg, table_radius)
        inputs = {"omega": True}
    elif "params" in c.ops:
        p = c.params(c.ops["params"])
        t = aut.aut_table(c.cfg, p, table_radius)
        inputs = {"params": p.to_json()}
    else:
        t = c.table(c.need("table"), table_radius)
        inputs = {"table": _table_json(t)}
    inputs["radius"] = r
    chk = aut.is_automorphism_table(t, r)
    cert = {}
    if not chk.ok:
        v = chk.violation
        cert = {"pair": [str(s) for s in v["pair"]], "map_of_bracket": _el(v["map_of_bracket"]),
                "bracket_of_maps": _el(v["bracket_of_maps"])}
    return (inputs, "automorphism on window" if chk else "not an automorphism",
            EXIT_OK if chk else EXIT_NEGATIVE, {"automorphism": chk.ok}, cert)


def _verdict_json(v: aut.AutVerdict):
    out = {"status": v.status, "params": _params_json(v.params), "reason": v.reason}
    if v.probe is not None:
        out["probe"] = _el(v.probe)
        out["image"] = _el(v.image)
    if v.pair is not None:
        out["pair"] = [_el(z) for z in v.pair]
    return out


def _aut_local(c: _Ctx):
    r = c.opt("radius", 3)
    t = c.table(c.need("table"), r + 1)
    v = aut.local_aut_decide(t, r)
    cert = {"checked": len(v.checked), "params": _params_json(v.params)}
    if v.status == "pointwise_failure":
        cert["unrealizable"] = {"probe": _el(v.probe), "image": _el(v.image)}
    return ({"table": _table_json(t), "radius": r}, v.status,
            EXIT_OK if v.is_automorphism else EXIT_NEGATIVE, _verdict_json(v), cert)


def _oracle(c: _Ctx):
    doc = c.need("oracle")
    values = {parse_element(c.cfg, a): parse_element(c.cfg, b) for a, b in doc.get("values", [])}
    fb = doc.get("fallback")
    return aut.TableOracle(c.cfg, values, None if fb is None else c.params(fb)), doc


def _aut_2local(c: _Ctx):
    r = c.opt("radius", 3)
    oracle, doc = _oracle(c)
    budget = c.els(c.ops["budget"]) if "budget" in c.ops else None
    v = aut.two_local_recover(c.cfg, oracle, budget, r)
    inputs = {"oracle_values": [[_el(a), _el(b)] for a, b in oracle.values.items()],
              "fallback": _params_json(oracle.fallback), "radius": r}
    cert = {"checked": [[_el(a), _el(b)] for a, b in v.checked], "params": _params_json(v.params)}
    return inputs, v.status, EXIT_OK if v.is_automorphism else EXIT_NEGATIVE, _verdict_json(v), cert


TASKS = {
    "bracket": _bracket,
    "jacobi": _jacobi,
    "der-witness": _der_witness,
    "der-local": _der_local,
    "der-intersect": _der_intersect,
    "der-pipeline": _der_pipeline,
    "aut-apply": _aut_apply,
    "aut-fit": _aut_fit,
    "aut-check": _aut_check,
    "aut-local": _aut_local,
    "aut-2local": _aut_2local,
}

# exceptions that mean "the job itself is wrong"
USAGE_ERRORS = (JobError, ValueError, KeyError, TypeError, ZeroDivisionError)


def run_job(job: dict) -> Report:
    validate_job(job)
    c = _Ctx(job)
    inputs, verdict, status, result, cert = TASKS[job["task"]](c)
    doc = {"task": job["task"], "config": config_json(c.cfg), "inputs": inputs,
           "verdict": verdict, "status": status, "result": result, "certificate": cert}
    return Report(doc, render_text(doc), status)


def render_text(doc: dict) -> str:
    cfg = make_config(doc["config"])
    lines = ["task: %s" % doc["task"], "algebra: %s" % cfg]
    for k in sorted(doc["inputs"]):
        lines.append("input %s: %s" % (k, _short(doc["inputs"][k])))
    lines.append("verdict: %s" % doc["verdict"])
    for k in sorted(doc["result"]):
        if k == "status":
            continue
        lines.append("%s: %s" % (k, _short(doc["result"][k])))
    lines.append("status: %d" % doc["status"])
    return "\n".join(lines) + "\n"


def _short(v, limit=400):
    if isinstance(v, str):
        text = v
    elif isinstance(v, list) and all(isinstance(e, str) for e in v):
        text = "[" + "; ".join(v) + "]"
    else:
        text = json.dumps(v, sort_keys=True)
    return text if len(text) <= limit else text[:limit] + " ..."


# -- verification ----------------------------------------------------------------

def verify_report(job: dict, doc: dict) -> list[str]:
    """Re-check the certificate in a report without re-running the solver.

    Returns a list of problems; empty means every certificate holds.
    """
    c = _Ctx(job)
    cfg = c.cfg
    task = doc["task"]
    cert = doc["certificate"]
    res = doc["result"]
    P = lambda s: parse_element(cfg, s)  # noqa: E731
    problems = []
    if task == "bracket":
        x, y = P(doc["inputs"]["x"]), P(doc["inputs"]["y"])
        # bilinearity route: expand by hand against the structure constants
        acc = cfg.zero()
        for a, ca in x.items():
            for b, cb in y.items():
                acc = acc + algebra.bracket_basis(cfg, a, b).scale(ca * cb)
        if acc != P(res["value"]):
            problems.append("bracket value does not re-expand")
    elif task == "jacobi":
        n = len(_jacobi_slow(cfg, doc["inputs"]["radius"]))
        if (n == 0) != (res["violations"] == 0):
            problems.append("independent Jacobi sweep disagrees")
    elif task in ("der-witness", "der-local"):
        if task == "der-witness":
            t = der.MapTable(cfg, [(P(a), P(b)) for a, b in doc["inputs"]["table"]])
        else:
            t = der.MapTable(cfg, [(P(doc["inputs"]["x"]), P(doc["inputs"]["v"]))]) \
                if not P(doc["inputs"]["x"]).is_zero() else None
        if cert["status"] == "witness":
            y = P(cert["witness"])
            if t is not None and not der.check_witness(t, y):
                problems.append("witness does not reproduce the table")
        elif cert["status"] == "none_in_window" and t is not None:
            rep = der.WitnessReport("none_in_window", Window.degree(cfg, doc["inputs"]["ansatz_radius"]),
                                    cfg.zero(), obstruction=[
                                        (o["entry"], {_sym(cfg, k): Scalar.coerce(v) for k, v in o["functional"].items()})
                                        for o in cert.get("obstruction", [])])
            if not der.check_obstruction(t, rep):
                problems.append("obstruction functional does not certify unsolvability")
    elif task == "der-intersect":
        probes = [P(p) for p in doc["inputs"]["probes"]]
        for item in cert["preimages"]:
            v = P(item["vector"])
            for p, w in zip(probes, item["witnesses"]):
                if w is None or bracket(cfg, P(w), p) != v:
                    problems.append("basis vector %s lacks a preimage under %s" % (item["vector"], _el(p)))
    elif task == "der-pipeline":
        if cert["witness"] is not None and res["status"] == "inner":
            w = P(cert["witness"])
            if "inner" in doc["inputs"]:
                y0 = P(doc["inputs"]["inner"])
                for s in cfg.symbols(doc["inputs"]["radius"]):
                    e = Element.basis(cfg, s)
                    if bracket(cfg, w, e) != bracket(cfg, y0, e):
                        problems.append("witness differs from the input map at %s" % s)
                        break
            else:
                for a, b in doc["inputs"]["table"]:
                    if bracket(cfg, w, P(a)) != P(b):
                        problems.append("witness differs from the table at %s" % a)
                        break
    elif task == "aut-apply":
        p = aut.AutParams.from_json(doc["inputs"]["params"])
        for a, b in res["values"]:
            if aut.apply_aut(cfg, p, P(a)) != P(b):
                problems.append("value at %s does not re-apply" % a)
    elif task == "aut-fit":
        x, img = P(doc["inputs"]["x"]), P(doc["inputs"]["image"])
        claimed = {(cd["eps"], cd["a"], cd["s"], cd["h"]) for cd in cert["candidates"]}
        brute = {(cd.eps, None if cd.a is None else str(cd.a), str(cd.s), None if cd.h is None else str(cd.h))
                 for cd in aut.brute_fit(cfg, x, img)}
        if claimed != brute:
            problems.append("fit candidates differ from the brute-force fit")
    elif task == "aut-check":
        if cert:
            a, b = (_sym(cfg, s) for s in cert["pair"])
            if P(cert["map_of_bracket"]) == P(cert["bracket_of_maps"]):
                problems.append("reported violation is not a violation")
        elif "params" in doc["inputs"]:
            p = aut.AutParams.from_json(doc["inputs"]["params"])
            if not _brackets_preserved(cfg, lambda e: aut.apply_aut(cfg, p, e), doc["inputs"]["radius"]):
                problems.append("independent bracket sweep found a violation")
    elif task in ("aut-local", "aut-2local"):
        if res["status"] == "automorphism":
            p = aut.AutParams.from_json(res["params"])
            pairs = cert["checked"] if task == "aut-2local" else doc["inputs"]["table"]
            for a, b in pairs:
                if aut.apply_aut(cfg, p, P(a)) != P(b):
                    problems.append("params do not reproduce %s -> %s" % (a, b))
                    break
            if not _brackets_preserved(cfg, lambda e: aut.apply_aut(cfg, p, e), 2):
                problems.append("recovered params do not preserve brackets")
        elif res["status"] == "pointwise_failure":
            z, v = P(res["probe"]), P(res["image"])
            if aut.brute_fit(cfg, z, v):
                problems.append("probe %s is realizable after all" % res["probe"])
        elif res["status"] == "pair_failure" and res.get("pair") and len(res["pair"]) == 2 and \
                task == "aut-2local" and res.get("probe"):
            z, v = P(res["probe"]), P(res["image"])
            L1 = cfg.L(1)
            v1 = dict((a, b) for a, b in cert["checked"])[_el(L1)]
            for cd in aut.brute_fit(cfg, L1, P(v1)):
                if aut.apply_aut(cfg, cd.params(), z) == v:
                    problems.append("candidate %s matches both values" % cd.params())
    return problems


def _sym(cfg, text):
    from .textio import parse_symbol
    return parse_symbol(cfg, text)


def _brackets_preserved(cfg, fn, radius) -> bool:
    es = [Element.basis(cfg, s) for s in cfg.symbols(radius)]
    return all(fn(bracket(cfg, x, y)) == bracket(cfg, fn(x), fn(y)) for x in es for y in es)


def _jacobi_slow(cfg, radius) -> list:
    """Element-level sweep, independent of the table-driven one."""
    es = [(s.parity, Element.basis(cfg, s)) for s in cfg.symbols(radius)]
    out = []
    for px, x in es:
        for py, y in es:
            xy = bracket(cfg, x, y)
            for pz, z in es:
                t = (bracket(cfg, x, bracket(cfg, y, z)).scale((-1) ** (px * pz))
                     + bracket(cfg, y, bracket(cfg, z, x)).scale((-1) ** (py * px))
                     + bracket(cfg, z, xy).scale((-1) ** (pz * py)))
                if t:
                    out.append((x, y, z))
    return out
