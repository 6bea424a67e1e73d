"""Acceptance criteria, one test per criterion.

Each test records a single PASS/FAIL line; the lines are printed together
at the end of the pytest run (see conftest.py) and when this file is run
directly with ``python tests/test_acceptance.py``.
"""

import functools
import json
import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

from svir.algebra import ALL_CONFIGS, CENTERLESS0, CENTERLESS_HALF, SVIR0, SVIR_HALF, Element
from svir.automorphisms import (AutParams, TableOracle, apply_aut, aut_table, compose, fit_single,
                                grading_involution, identity_params, invert, is_automorphism_table,
                                local_aut_decide)
from svir.automorphisms import two_local_recover
from svir.derivations import (MapTable, ad_table, check_obstruction, image_intersection, inner_witness,
                              leibniz_violations, probe_family, normalization_pipeline)
from svir.linalg import Subspace, Window
from svir.scalar import I, ONE, Scalar

ROOT = Path(__file__).resolve().parent.parent
RESULTS = {}
F = Fraction


def criterion(number, title):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                detail = fn(*args, **kwargs) or ""
            except AssertionError as exc:
                RESULTS[number] = (False, title, str(exc).splitlines()[0] if str(exc) else "assertion failed")
                raise
            except Exception as exc:
                RESULTS[number] = (False, title, "%s: %s" % (type(exc).__name__, exc))
                raise
            RESULTS[number] = (True, title, detail)
        return run
    return wrap


def summary_lines():
    return ["criterion %2d: %s  %s%s" % (n, "PASS" if ok else "FAIL", title, (" | " + detail) if detail else "")
            for n, (ok, title, detail) in sorted(RESULTS.items())]


# -- random data (fixed seeds, so every run checks the same instances) -------------

def rand_scalar(rng, nonzero=False):
    while True:
        z = Scalar(F(rng.randint(-9, 9), rng.randint(1, 4)), F(rng.randint(-9, 9), rng.randint(1, 4)))
        if not nonzero or not z.is_zero():
            return z


def rand_element(rng, cfg, radius, terms):
    syms = cfg.symbols(radius)
    x = cfg.zero()
    for _ in range(terms):
        x = x + Element.basis(cfg, rng.choice(syms), rand_scalar(rng))
    return x


def rand_params(rng, cfg):
    eps, s = rng.choice([(1, ONE), (1, -ONE), (-1, I), (-1, -I)])
    z = rand_scalar(rng, nonzero=True)
    if cfg.half:
        return AutParams(eps, z * z, s, z).canonical()
    return AutParams(eps, z, s)


# -- criteria ------------------------------------------------------------------------

@criterion(1, "structure constants: super-Jacobi and super-skew, |degree| <= 6, all four algebras")
def test_criterion_01_jacobi():
    from svir.algebra import super_jacobi_report
    t = time.perf_counter()
    bad = {str(cfg): len(super_jacobi_report(cfg, 6)) for cfg in ALL_CONFIGS}
    elapsed = time.perf_counter() - t
    assert all(n == 0 for n in bad.values()), "violations: %s" % bad
    assert elapsed < 10, "took %.1f s" % elapsed
    return "0 violations in %.1f s" % elapsed


@criterion(2, "inner maps are derivations: 25 random ad(u), Leibniz at radius 3")
def test_criterion_02_leibniz():
    rng = random.Random(2)
    for cfg in ALL_CONFIGS:
        for _ in range(25):
            u = rand_element(rng, cfg, 4, rng.randint(1, 4))
            viol = leibniz_violations(ad_table(cfg, u, cfg.symbols(7)), 3)
            assert not viol, "ad(%s) violates Leibniz at %s" % (u, viol[0]["pair"])
    return "100 maps (25 per algebra) clean"


XS5 = [F(x) for x in (1, 2, 3, 5, 7)]
XS3 = [F(x) for x in (11, 13, 17)]


def _family_intersections(base_fn, direction):
    c = CENTERLESS0
    target = Window.degree(c, 8)
    out = {}
    for m in (1, 2, 3):
        five = image_intersection(c, probe_family(base_fn(m), direction, XS5), target=target)
        eight = image_intersection(c, probe_family(base_fn(m), direction, XS5 + XS3), target=target)
        out[m] = (five, eight)
    return target, out


@criterion(3, "image intersection over L(m) + x L(0) is span{L(m), G(m)}, stable under 3 more x")
def test_criterion_03_L_family():
    c = CENTERLESS0
    t = time.perf_counter()
    target, out = _family_intersections(c.L, c.L(0))
    problems = []
    for m, (five, eight) in out.items():
        want = Subspace.span(target, [c.L(m), c.G(m)])
        if five != want:
            problems.append("m=%d: dim %d, expected 2" % (m, five.dim))
        if eight != five:
            problems.append("m=%d: 3 more x change dim %d -> %d" % (m, five.dim, eight.dim))
    assert time.perf_counter() - t < 30
    assert not problems, "; ".join(problems)


@criterion(4, "image intersection over G(m) + x G(0) is span{G(m)}")
def test_criterion_04_G_family():
    c = CENTERLESS0
    target, out = _family_intersections(c.G, c.G(0))
    problems = []
    for m, (five, _) in out.items():
        if five != Subspace.span(target, [c.G(m)]):
            problems.append("m=%d: dim %d, expected 1" % (m, five.dim))
    assert not problems, "; ".join(problems)


@criterion(5, "normalization pipeline recovers 50 random inner derivations on both grids")
def test_criterion_05_pipeline():
    rng = random.Random(5)
    for cfg in (CENTERLESS0, CENTERLESS_HALF):
        syms = cfg.symbols(8)
        for _ in range(50):
            y0 = rand_element(rng, cfg, 4, rng.randint(1, 5))
            res = normalization_pipeline(ad_table(cfg, y0, syms))
            assert res.status == "inner" and res.clean, "%s: %s for y0 = %s" % (cfg, res.status, y0)
            assert res.witness == y0, "%s: recovered %s instead of %s" % (cfg, res.witness, y0)
    return "100 of 100 recovered exactly"


@criterion(6, "L(0) -> C has no inner witness, with a bracket-checked certificate, ansatz radius <= 10")
def test_criterion_06_central():
    for cfg in (SVIR0, SVIR_HALF):
        d = MapTable(cfg, [(cfg.L(0), cfg.C())])
        for r in range(0, 11):
            rep = inner_witness(d, Window.degree(cfg, r))
            assert rep.status == "none_in_window", "%s radius %d: %s" % (cfg, r, rep.status)
            assert check_obstruction(d, rep), "%s radius %d: certificate does not check" % (cfg, r)
            assert rep.residual == cfg.C()
    return "22 windows, each certified by the functional on C"


@criterion(7, "automorphism family: 20 random params preserve brackets at radius 4; group laws")
def test_criterion_07_family():
    rng = random.Random(7)
    for k in range(20):
        cfg = ALL_CONFIGS[k % 4]
        p = rand_params(rng, cfg)
        chk = is_automorphism_table(aut_table(cfg, p, 8), 4)
        assert chk, "%s on %s fails at %s" % (p, cfg, chk.violation["pair"])
    for k in range(40):
        cfg = ALL_CONFIGS[k % 4]
        p, q, r = (rand_params(rng, cfg) for _ in range(3))
        x = rand_element(rng, cfg, 4, 4)
        assert apply_aut(cfg, compose(p, q), x) == apply_aut(cfg, p, apply_aut(cfg, q, x))
        assert apply_aut(cfg, compose(compose(p, q), r), x) == apply_aut(cfg, compose(p, compose(q, r)), x)
        assert apply_aut(cfg, invert(p), apply_aut(cfg, p, x)) == x
    return "20 tables exact; 40 random triples obey the group laws"


@criterion(8, "fixer of L(1) is {eps=1, a=1, s in {1,-1}}; report carries the omega note; omega is an automorphism")
def test_criterion_08_fixer():
    from svir import jobs
    fr = fit_single(SVIR0, SVIR0.L(1), SVIR0.L(1))
    got = sorted((p.eps, str(p.a), str(p.s)) for p in fr.params())
    assert got == [(1, "1", "-1"), (1, "1", "1")], got
    assert len(fr.candidates) == 2
    job = {"task": "aut-fit", "config": {"epsilon": "0", "with_center": True},
           "operands": {"x": "L(1)", "image": "L(1)"}}
    note = jobs.run_job(job).doc["result"].get("fixer_set_note", "")
    assert "omega" in note and "{id, omega}" in note
    for cfg in ALL_CONFIGS:
        assert is_automorphism_table(grading_involution(cfg, 8), 4)
    return "fixer set {id, omega}"


@criterion(9, "local and 2-local round trips on 10 random params per grid; three negative examples")
def test_criterion_09_local():
    rng = random.Random(9)
    for cfg in (SVIR0, SVIR_HALF):
        for _ in range(10):
            p = rand_params(rng, cfg).for_config(cfg)
            v = local_aut_decide(aut_table(cfg, p, 4), 3)
            assert v.is_automorphism and v.params == p, "local: %s -> %s" % (p, v.status)
            w = two_local_recover(cfg, lambda x: apply_aut(cfg, p, x), radius=3)
            assert w.is_automorphism and w.params == p, "2-local: %s -> %s" % (p, w.status)
    c = SVIR0
    assert not fit_single(c, c.G(1) + c.G(2) + c.L(1), c.G(1).scale(-1) + c.G(2) + c.L(1))

    def flip_low(x):
        return Element(c, {s: (-v if s.kind == "G" and s.degree <= 1 else v) for s, v in x.items()})
    v = local_aut_decide(MapTable.on_symbols(c, c.symbols(4), flip_low), 3)
    assert v.status == "pointwise_failure" and v.probe == c.G(1) + c.G(2) + c.L(1), v.status
    g12 = c.G(1) + c.G(2)
    w = two_local_recover(c, TableOracle(c, {g12: c.G(1) - c.G(2)}, identity_params(c)))
    assert w.status == "pair_failure" and w.pair == (c.L(1), g12), w.status
    return "40 round trips; fit, local and 2-local negatives as specified"


@criterion(10, "job corpus: byte-identical reports on two runs and --verify passes")
def test_criterion_10_cli():
    corpus = sorted((ROOT / "jobs").glob("*.json"))
    tasks = {json.loads(p.read_text())["task"] for p in corpus}
    assert len(corpus) >= 12 and len(tasks) == 11, "%d jobs, %d tasks" % (len(corpus), len(tasks))
    cmd = [sys.executable, "-m", "svir.cli", "run", "--json", "--job"]
    for p in corpus:
        a = subprocess.run(cmd + [str(p)], capture_output=True)
        b = subprocess.run(cmd + [str(p)], capture_output=True)
        assert a.returncode in (0, 1), "%s exited %d: %s" % (p.name, a.returncode, a.stderr.decode())
        assert a.stdout == b.stdout and a.returncode == b.returncode, "%s differs between runs" % p.name
        v = subprocess.run(cmd + [str(p), "--verify"], capture_output=True)
        assert v.returncode == a.returncode and b"all certificates re-checked" in v.stderr, \
            "%s: verify failed: %s" % (p.name, v.stderr.decode())
    return "%d jobs, %d tasks" % (len(corpus), len(tasks))


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except Exception:
                pass
    print("\n".join(summary_lines()))
