"""Randomized property suites: fixed seed, 1000 examples each.

Driven by the acceptance suite, which also checks the example counts.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction

import numpy as np
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from oracles import mat_add, mat_mul, mat_of, mat_pair
from wimanedge.cusps import CUSP_SUBGROUPS, resolve_cusp, resolve_named
from wimanedge.finquot import closure, reduce_word
from wimanedge.matgrp import MONODROMY
from wimanedge.planegeom import ProjLine, ProjPoint, family_member, intersection_profile, klein_plane
from wimanedge.qfield import MOD4P5, QuadElt, reduce

COUNTS: Counter = Counter()

ITER = settings(
    max_examples=1000,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)

small = st.integers(-30, 30)
rat = st.builds(Fraction, small, st.integers(1, 12))
elts = st.builds(QuadElt, rat, rat)
ints = st.builds(QuadElt, st.integers(-50, 50), st.integers(-50, 50))


def pair(x):
    return (x.a, x.b)


@ITER
@given(elts, elts, elts)
def prop_field_homomorphism(x, y, z):
    COUNTS["field_homomorphism"] += 1
    mx, my = mat_of(*pair(x)), mat_of(*pair(y))
    assert pair(x * y) == mat_pair(mat_mul(mx, my))
    assert pair(x + y) == mat_pair(mat_add(mx, my))
    assert (x * y).galois() == x.galois() * y.galois()
    assert (x + y).galois() == x.galois() + y.galois()
    assert (x * y).norm() == x.norm() * y.norm()
    assert x * (y + z) == x * y + x * z
    if x:
        assert x * x.inv() == QuadElt(1)


@ITER
@given(ints, ints)
def prop_reduction_homomorphism(x, y):
    COUNTS["reduction_homomorphism"] += 1
    assert reduce(x * y, MOD4P5) == reduce(x, MOD4P5) * reduce(y, MOD4P5)
    assert reduce(x + y, MOD4P5) == reduce(x, MOD4P5) + reduce(y, MOD4P5)


def _unimodular(ops):
    a, b, c, d = 1, 0, 0, 1
    for kind, k in ops:
        if kind == 0:
            a, b = a + k * c, b + k * d
        elif kind == 1:
            c, d = c + k * a, d + k * b
        else:
            a, b, c, d = c, d, a, b
    return a, b, c, d


REF_CYCLES = {n: resolve_named(n).canonical() for n in ("lambda8", "lambda40")}


@ITER
@given(
    st.sampled_from(sorted(REF_CYCLES)),
    st.lists(st.tuples(st.integers(0, 2), st.integers(-3, 3)), max_size=4),
)
def prop_hull_basis_change_invariance(name, ops):
    COUNTS["hull_basis_change_invariance"] += 1
    lat = CUSP_SUBGROUPS[name].lattice().rebased(*_unimodular(ops))
    assert resolve_cusp(lat).canonical() == REF_CYCLES[name]


GENS = [reduce_word(w, MOD4P5) for _, w, _ in MONODROMY]
REF_CODES = closure(MOD4P5, GENS).codes


@ITER
@given(st.permutations(range(4)), st.lists(st.integers(0, 3), max_size=3))
def prop_closure_determinism_under_permutation(perm, extra):
    COUNTS["closure_determinism_under_permutation"] += 1
    gens = [GENS[i] for i in perm] + [GENS[i] @ GENS[(i + 1) % 4] for i in extra]
    assert np.array_equal(closure(MOD4P5, gens).codes, REF_CODES)


KP = klein_plane()
coef = st.builds(QuadElt, st.integers(-6, 6), st.integers(-6, 6))
point = st.tuples(coef, coef, coef).filter(any)


@ITER
@given(st.tuples(coef, coef, coef).filter(any), st.one_of(st.sampled_from(sorted(KP.lines)), st.tuples(point, point)))
def prop_bezout_multiplicity_sum(args, ln):
    f = family_member(*args)
    if isinstance(ln, str):
        line = KP.lines[ln]
    else:
        p, q = ProjPoint.of(ln[0]), ProjPoint.of(ln[1])
        assume(p != q)
        line = ProjLine(0, 0, p, q)
    COUNTS["bezout_multiplicity_sum"] += 1
    prof = intersection_profile(f, line, KP)
    assert prof.contained or prof.total_multiplicity == 3


PROPERTIES = {
    "field arithmetic homomorphism": prop_field_homomorphism,
    "reduction homomorphism": prop_reduction_homomorphism,
    "hull basis-change invariance": prop_hull_basis_change_invariance,
    "closure determinism under generator permutation": prop_closure_determinism_under_permutation,
    "Bezout multiplicity sums": prop_bezout_multiplicity_sum,
}
