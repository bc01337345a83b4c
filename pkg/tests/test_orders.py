"""Orders, odometer classification, extension verdicts, successor dynamics.

Core claims:
    - tags decide finite-right/finite-left exactly: left -> fr only,
      right -> fl only, middle -> both; explicit windows stay unknown
    - the extension verdict applies the cardinal rule: Borel iff |fr| = |fl|,
      homeomorphism never for quasi-stationary orders with nonempty sets
    - the successor advances the first non-maximal edge and resets the prefix
      to the order-minimal path; all-maximal windows are reported as such
    - the successor is injective and its replaced prefix is minimal
    - orbit frequencies approximate the normalized extension measure
"""

import random

import pytest

from bratteli.diagram import DiagramError, StationaryAK, Truncation
from bratteli.extension import extend_odometer
from bratteli.measure import DIAGONAL, VERTICAL, ExplicitPath
from bratteli.orders import (
    ALEPH0,
    LEFT,
    MIDDLE,
    RIGHT,
    AllMaximalPrefix,
    EventuallyQuasiStationary,
    ExplicitOrder,
    QuasiStationary,
    TruncatedPath,
    VertexOrder,
    canonical_order,
    classify_odometer,
    extension_verdict,
    minimal_path_into,
    orbit_frequencies,
    order_at,
    order_from_json,
    successor,
    vertical_path,
)

SPEC = StationaryAK(4, 2)


# -- vertex orders ---------------------------------------------------------------


def test_canonical_orders_and_tags():
    left = canonical_order(LEFT, 3)
    right = canonical_order(RIGHT, 3)
    middle = canonical_order(MIDDLE, 3)
    assert left.tag == LEFT and left.minimal == (DIAGONAL, 0)
    assert right.tag == RIGHT and right.maximal == (DIAGONAL, 0)
    assert middle.tag == MIDDLE
    assert middle.sequence == ((VERTICAL, 1), (DIAGONAL, 0), (VERTICAL, 2), (VERTICAL, 3))


def test_vertex_order_validation():
    with pytest.raises(DiagramError):
        VertexOrder(((VERTICAL, 1), (VERTICAL, 1), (DIAGONAL, 0)))
    with pytest.raises(DiagramError):
        VertexOrder(((VERTICAL, 1), (VERTICAL, 2)))  # diagonal missing
    with pytest.raises(DiagramError):
        canonical_order(MIDDLE, 1)


def test_order_json():
    order = order_from_json(
        {"kind": "quasiStationary", "tags": {"1": "left", "2": "middle", "default": "right"}}
    )
    assert order.tag_of(1) == LEFT
    assert order.tag_of(2) == MIDDLE
    assert order.tag_of(9) == RIGHT
    alt = order_from_json({"kind": "quasiStationary", "tags": {"default": ["left", "right"]}})
    assert [alt.tag_of(i) for i in (1, 2, 3, 4)] == [LEFT, RIGHT, LEFT, RIGHT]


def test_eventually_quasi_stationary_json_and_overrides():
    ev = order_from_json(
        {
            "kind": "eventuallyQuasiStationary",
            "tags": {"default": "right"},
            "exceptions": {"3,2": "middle"},
        }
    )
    assert isinstance(ev, EventuallyQuasiStationary)
    # the exception changes the concrete order at (level 3, vertex 2) only
    assert order_at(SPEC, ev, 3, 2).tag == MIDDLE
    assert order_at(SPEC, ev, 4, 2).tag == RIGHT
    assert ev.tag_of(2) == RIGHT  # eventual tag unchanged


# -- classification ----------------------------------------------------------------


def test_classify_tags():
    mid = classify_odometer(SPEC, QuasiStationary(default=(MIDDLE,)), 4)
    assert (mid.finite_right, mid.finite_left) == (True, True)
    left = classify_odometer(SPEC, QuasiStationary(default=(LEFT,)), 2)
    assert (left.finite_right, left.finite_left) == (True, False)
    right = classify_odometer(SPEC, QuasiStationary(default=(RIGHT,)), 1)
    assert (right.finite_right, right.finite_left) == (False, True)


def test_classify_explicit_is_unknown():
    orders = tuple(
        (((n, i), canonical_order(RIGHT, SPEC.vertical_edges(n - 1, i))))
        for n in range(1, 11)
        for i in range(1, 4)
    )
    got = classify_odometer(SPEC, ExplicitOrder(orders), 1)
    assert got.finite_right is None and got.finite_left is None
    assert "window" in got.note


def test_classification_matches_verdict_sets():
    # left => fr only, right => fl only, middle => both, per odometer
    rng = random.Random(17)
    for _ in range(20):
        tags = tuple((i, rng.choice([LEFT, RIGHT, MIDDLE])) for i in range(1, 8))
        order = QuasiStationary(tags, default=(rng.choice([LEFT, RIGHT, MIDDLE]),))
        verdict = extension_verdict(SPEC, order, i_max=7)
        for i in range(1, 8):
            c = classify_odometer(SPEC, order, i)
            assert (i in verdict.fr_witness) == c.finite_right
            assert (i in verdict.fl_witness) == c.finite_left


# -- extension verdicts ---------------------------------------------------------------


def test_all_left_has_no_borel_extension():
    v = extension_verdict(SPEC, QuasiStationary(default=(LEFT,)))
    assert v.i_fr == ALEPH0 and v.i_fl == 0
    assert not v.borel_extension
    assert v.homeomorphism == "no"


def test_alternating_and_middle_verdicts():
    v = extension_verdict(SPEC, QuasiStationary(default=(LEFT, RIGHT)))
    assert v.i_fr == ALEPH0 and v.i_fl == ALEPH0
    assert v.borel_extension and v.homeomorphism == "no-quasi-stationary"
    v = extension_verdict(SPEC, QuasiStationary(default=(MIDDLE,)))
    assert v.borel_extension and v.homeomorphism == "no-quasi-stationary"


def test_finitely_many_exceptions_keep_the_verdict():
    base = QuasiStationary(default=(LEFT, RIGHT))
    ev = EventuallyQuasiStationary(base, (((3, 2), MIDDLE), ((5, 1), RIGHT)))
    assert extension_verdict(SPEC, ev) == extension_verdict(SPEC, base)


def test_verdict_rejects_explicit_orders():
    orders = (((1, 1), canonical_order(RIGHT, 4)),)
    with pytest.raises(DiagramError):
        extension_verdict(SPEC, ExplicitOrder(orders))


def test_hand_rule_on_random_assignments():
    rng = random.Random(41)
    for _ in range(100):
        tags = tuple((i, rng.choice([LEFT, RIGHT, MIDDLE])) for i in range(1, rng.randint(2, 9)))
        default = (rng.choice([LEFT, RIGHT, MIDDLE]),)
        order = QuasiStationary(tags, default)
        v = extension_verdict(SPEC, order, i_max=12)

        def card(kinds):
            if default[0] in kinds:
                return ALEPH0
            return sum(1 for _, t in tags if t in kinds)

        assert v.i_fr == card({LEFT, MIDDLE})
        assert v.i_fl == card({RIGHT, MIDDLE})
        assert v.borel_extension == (v.i_fr == v.i_fl)
        if v.borel_extension:
            assert v.homeomorphism == "no-quasi-stationary"
        else:
            assert v.homeomorphism == "no"


# -- successor ---------------------------------------------------------------------


def test_successor_advances_lowest_level_first():
    order = QuasiStationary(default=(MIDDLE,))
    path = vertical_path(SPEC, 1, 3)  # edges (v,1) everywhere, not maximal
    out = successor(SPEC, order, path)
    assert out.edges[0] == (DIAGONAL, 0)  # middle order: successor of e_1 is f
    assert out.edges[1:] == path.edges[1:]
    assert out.start == 2


def test_successor_hand_trace_with_carry():
    # right orders: verticals first, then the diagonal is maximal
    order = QuasiStationary(default=(RIGHT,))
    # all-vertical path sitting at the top vertical edge of each level
    path = TruncatedPath(1, ((VERTICAL, 4), (VERTICAL, 1)))
    out = successor(SPEC, order, path)
    # x_0 advances into the diagonal edge from (0, 2); prefix empty
    assert out.start == 2
    assert out.edges == ((DIAGONAL, 0), (VERTICAL, 1))

    # diagonal maximal at level 0 forces the carry into level 1, and the
    # prefix resets to the minimal (first-vertical) path
    path = TruncatedPath(2, ((DIAGONAL, 0), (VERTICAL, 1)))
    out = successor(SPEC, order, path)
    assert out.edges == ((VERTICAL, 1), (VERTICAL, 2))
    assert out.start == 1


def test_all_maximal_prefix():
    order = QuasiStationary(default=(RIGHT,))
    path = TruncatedPath(3, ((DIAGONAL, 0), (DIAGONAL, 0)))  # maximal everywhere
    assert isinstance(successor(SPEC, order, path), AllMaximalPrefix)


def test_successor_injective_on_random_batches():
    rng = random.Random(23)
    order = QuasiStationary(default=(MIDDLE,))
    seen = {}
    for _ in range(400):
        depth = 4
        start = rng.randint(1, 4)
        edges, idx = [], start
        for l in range(depth):
            if idx > 1 and rng.random() < 0.3:
                edges.append((DIAGONAL, 0))
                idx -= 1
            else:
                edges.append((VERTICAL, rng.randint(1, SPEC.vertical_edges(l, idx))))
        path = TruncatedPath(start, tuple(edges))
        out = successor(SPEC, order, path)
        if isinstance(out, AllMaximalPrefix):
            continue
        key = (out.start, out.edges)
        assert seen.get(key, path) == path  # distinct inputs, distinct outputs
        seen[key] = path


def test_successor_prefix_is_minimal():
    rng = random.Random(31)
    order = QuasiStationary(default=(MIDDLE,))
    for _ in range(100):
        start = rng.randint(1, 4)
        edges, idx = [], start
        for l in range(5):
            if idx > 1 and rng.random() < 0.35:
                edges.append((DIAGONAL, 0))
                idx -= 1
            else:
                edges.append((VERTICAL, rng.randint(1, SPEC.vertical_edges(l, idx))))
        path = TruncatedPath(start, tuple(edges))
        out = successor(SPEC, order, path)
        if isinstance(out, AllMaximalPrefix):
            continue
        # find the replaced level: everything below the advanced edge is minimal
        changed = [l for l in range(5) if out.edges[l] != path.edges[l]]
        top = max(changed) if changed else 0
        for l in range(top):
            vo = order_at(SPEC, order, l + 1, out.vertex_at(l + 1))
            assert out.edges[l] == vo.minimal


def test_minimal_path_into():
    order = QuasiStationary(default=(MIDDLE,))
    path = minimal_path_into(SPEC, order, 3, 2)
    assert path.depth == 3
    assert path.vertex_at(3) == 2
    for l in range(3):
        vo = order_at(SPEC, order, l + 1, path.vertex_at(l + 1))
        assert path.edges[l] == vo.minimal


# -- orbits ------------------------------------------------------------------------


def test_orbit_zero_steps():
    order = QuasiStationary(default=(MIDDLE,))
    rep = orbit_frequencies(SPEC, order, vertical_path(SPEC, 1, 4), 0, [ExplicitPath(1, ((VERTICAL, 1),))])
    assert rep.entries[0].empirical == 0


def test_orbit_unreachable_cylinder_has_zero_frequency():
    order = QuasiStationary(default=(MIDDLE,))
    far = ExplicitPath(9, ((VERTICAL, 1),))
    rep = orbit_frequencies(SPEC, order, vertical_path(SPEC, 1, 6), 500, [far], window=Truncation(8, 30))
    assert rep.entries[0].empirical == 0


def test_orbit_matches_measure_roughly():
    order = QuasiStationary(default=(MIDDLE,))
    measure = extend_odometer(SPEC, 1).normalize()
    cyls = [ExplicitPath(1, ((VERTICAL, k),)) for k in range(1, 5)]
    cyls.append(ExplicitPath(2, ((DIAGONAL, 0),)))
    rep = orbit_frequencies(
        SPEC, order, vertical_path(SPEC, 1, 14), 20000, cyls, measure=measure, window=Truncation(16, 40)
    )
    assert not rep.aborted
    for e in rep.entries:
        assert e.theoretical is not None
        assert abs(float(e.empirical) - float(e.theoretical)) < 0.03
