from __future__ import annotations

from fractions import Fraction

import pytest

from wimanedge.cusps import (
    CUSP_SUBGROUPS,
    build_coset_table,
    canonical_cycle,
    chern,
    cusp_orbits,
    hull_svg,
    resolve_named,
    six_cycles,
    verify_chern,
    verify_cusp_orbits,
    verify_cusp_subgroups,
    verify_resolutions,
)
from wimanedge.qfield import DomainError, QuadElt, is_totally_positive


def test_coset_orbits():
    table = build_coset_table()
    orbits = cusp_orbits(table)
    assert len(table) == 240
    assert sorted(len(o) for o in orbits) == [8, 8, 24, 40, 40, 120]
    assert sorted(j for o in orbits for j in o) == list(range(240))


def test_cusp_suites():
    table = build_coset_table()
    for rep in (verify_cusp_orbits(table), verify_cusp_subgroups(table)):
        assert rep.ok, rep.failures()


@pytest.mark.parametrize(
    "name,cycle",
    [
        ("lambda8", (-3, -3)),
        ("lambda40", (-3, -3)),
        ("lambda24", tuple([-2] * 7 + [-4] + [-2] * 7 + [-4])),
        ("lambda120", tuple([-2] * 7 + [-4] + [-2] * 7 + [-4])),
    ],
)
def test_named_cycles(name, cycle):
    assert resolve_named(name).canonical() == cycle


def test_unknown_cusp():
    with pytest.raises(DomainError):
        resolve_named("lambda9")


def _trace(x: QuadElt) -> Fraction:
    return 2 * x.a + x.b


def _edge_functional(p: QuadElt, q: QuadElt) -> QuadElt:
    """xi with tr(xi p) = tr(xi q) = 1; the edge line is tr(xi z) = 1."""
    # xi = c + dX, tr(xi z) is linear in (c, d)
    def row(z):
        return _trace(z), _trace(QuadElt(0, 1) * z)

    (a1, b1), (a2, b2) = row(p), row(q)
    det = a1 * b2 - a2 * b1
    return QuadElt((b2 - b1) / det, (a1 - a2) / det)


@pytest.mark.parametrize("name", ["lambda8", "lambda40", "lambda24"])
def test_hull_is_supporting_against_brute_force(name):
    c = resolve_named(name)
    verts = c.extended(before=2, after=2)
    edges = [_edge_functional(p, q) for p, q in zip(verts, verts[1:])]
    t1, t2 = CUSP_SUBGROUPS[name].lattice().basis
    R = 14
    for n1 in range(-R, R + 1):
        for n2 in range(-R, R + 1):
            z = t1 * n1 + t2 * n2
            if not is_totally_positive(z):
                continue
            # every totally positive lattice point lies on or above every hull edge
            for xi in edges:
                assert _trace(xi * z) >= 1
    for v in verts:
        assert sum(_trace(xi * v) == 1 for xi in edges) >= 1


@pytest.mark.parametrize("name", list(CUSP_SUBGROUPS))
def test_vertex_recurrence_and_period(name):
    c = resolve_named(name)
    vs = c.extended(before=1, after=1)
    bs = c.b_values
    for k in range(len(bs)):
        assert vs[k] + vs[k + 2] == vs[k + 1] * bs[k]
    assert c.vertices[0] * c.unit == vs[-1]


def test_lambda24_families():
    c = resolve_named("lambda24")
    for j in range(9):
        assert c.contains_vertex(QuadElt(2 + j, 2 * j))
        assert c.contains_vertex(QuadElt(2 + 3 * j, -2 * j))


def test_canonical_cycle():
    assert canonical_cycle([3, 3]) == (3, 3)
    assert canonical_cycle([4, 2, 2]) == canonical_cycle([2, 4, 2]) == canonical_cycle([2, 2, 4])


def test_chern_numbers():
    inv = chern(16, six_cycles())
    d = inv.as_dict()
    assert (d["c2"], d["c1_sq"], d["chi"], d["q"], d["p_g"]) == (56, 16, 6, 0, 5)
    assert 12 * d["chi"] == d["c1_sq"] + d["c2"]
    assert verify_chern().ok
    assert verify_resolutions().ok


def test_svg(tmp_path):
    import xml.etree.ElementTree as ET

    path = tmp_path / "l8.svg"
    text = hull_svg(resolve_named("lambda8"), path)
    root = ET.parse(path).getroot()
    assert root.tag.endswith("svg") and root.get("version") == "1.1"
    assert text == path.read_text()
