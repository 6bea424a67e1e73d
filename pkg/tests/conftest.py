import sys
from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from svir.algebra import ALL_CONFIGS, Element
from svir.automorphisms import AutParams
from svir.scalar import I, ONE, Scalar

settings.register_profile("svir", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("svir")

small_int = st.integers(-6, 6)
rationals = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5))
scalars = st.builds(Scalar, rationals, rationals)
nonzero_scalars = scalars.filter(lambda z: not z.is_zero())
configs = st.sampled_from(ALL_CONFIGS)


def symbols_of(cfg, radius=4):
    return st.sampled_from(cfg.symbols(radius))


def elements_of(cfg, radius=4, max_terms=4):
    term = st.tuples(symbols_of(cfg, radius), scalars)
    return st.lists(term, max_size=max_terms).map(
        lambda ts: sum((Element.basis(cfg, s, c) for s, c in ts), cfg.zero()))


def homogeneous_of(cfg, radius=4, max_terms=3):
    """Elements of a single parity (even or odd), possibly zero."""
    def build(parity):
        syms = [s for s in cfg.symbols(radius) if s.parity == parity]
        term = st.tuples(st.sampled_from(syms), scalars)
        return st.lists(term, max_size=max_terms).map(
            lambda ts: sum((Element.basis(cfg, s, c) for s, c in ts), cfg.zero()))
    return st.sampled_from([0, 1]).flatmap(build)


def params_for(cfg):
    branches = [(1, ONE), (1, -ONE), (-1, I), (-1, -I)]
    if cfg.half:
        return st.tuples(st.sampled_from(branches), nonzero_scalars).map(
            lambda t: AutParams(t[0][0], t[1] * t[1], t[0][1], t[1]).canonical())
    return st.tuples(st.sampled_from(branches), nonzero_scalars).map(
        lambda t: AutParams(t[0][0], t[1], t[0][1]))


def pytest_terminal_summary(terminalreporter):
    # one line per acceptance criterion, gathered by tests/test_acceptance.py
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
