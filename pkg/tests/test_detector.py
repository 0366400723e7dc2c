import random
from fractions import Fraction

import pytest

from qgms.detector import DetectorConfig, TerminalZone, detect_terminal_zones
from qgms.encoding import StructuralCoefficient, StructuralRole
from qgms.hierarchy import HierarchyConfig, StructureNode, admissible_region, build_tree, saturation_score
from qgms.market_data import affine_transform
from qgms.segmentation import Direction, Segment

from .conftest import random_walk_closes, series_from_closes


def _coeff_at_gauge(role: StructuralRole, gauge: float) -> StructuralCoefficient:
    """A coefficient whose box gauge against the role's region is `gauge`,
    achieved on the efficiency axis with other components centered."""
    region = admissible_region(role)
    comps = {n: region.center(n) for n in ("efficiency", "retracement", "balance", "skew")}
    comps["efficiency"] = region.center("efficiency") + gauge * region.halfwidth("efficiency")
    c = StructuralCoefficient(**comps)
    assert saturation_score(c, region) == pytest.approx(gauge, abs=1e-12)
    return c


def _node(start, end, direction, coeff, role, level, children=()):
    seg = Segment(start, end, direction, Fraction(100), Fraction(110 if direction is Direction.UP else 90))
    return StructureNode(seg, coeff, role, level, tuple(children))


def make_fixture(parent_gauge, child_gauge, child_dir=Direction.UP):
    role = StructuralRole.IMPULSIVE
    child = _node(5, 9, child_dir, _coeff_at_gauge(role, child_gauge), role, 0)
    first = _node(0, 5, Direction.DOWN, _coeff_at_gauge(role, 0.0), role, 0)
    parent = _node(0, 9, Direction.UP, _coeff_at_gauge(role, parent_gauge), role, 1,
                   (first, child))
    return parent


def test_constructed_zone_fires():
    parent = make_fixture(0.99, 0.97)
    zones = detect_terminal_zones([parent], DetectorConfig(epsilon=0.15, delta=0.15))
    assert len(zones) == 1
    z = zones[0]
    assert z.bar_index == 9
    assert z.expected_direction is Direction.DOWN
    assert z.parent_path == (0,)
    assert z.parent_saturation >= 0.85
    assert z.child_saturation >= 0.85


def test_no_zone_when_children_unsaturated():
    parent = make_fixture(0.99, 0.5)
    assert detect_terminal_zones([parent]) == []


def test_no_zone_when_parent_unsaturated():
    parent = make_fixture(0.5, 0.99)
    assert detect_terminal_zones([parent]) == []


def test_no_zone_for_counter_directional_last_child():
    parent = make_fixture(0.99, 0.97, child_dir=Direction.DOWN)
    assert detect_terminal_zones([parent]) == []


def test_childless_root_never_fires():
    root = _node(0, 9, Direction.UP, _coeff_at_gauge(StructuralRole.IMPULSIVE, 1.0),
                 StructuralRole.IMPULSIVE, 0)
    assert detect_terminal_zones([root]) == []


def test_config_validation():
    with pytest.raises(ValueError):
        DetectorConfig(epsilon=0.0)
    with pytest.raises(ValueError):
        DetectorConfig(delta=1.0)


def test_gate_soundness_on_random_trees(rng):
    # every emitted zone re-satisfies both saturation conditions and the
    # direction rule when recomputed from scratch
    config = DetectorConfig()
    for _ in range(40):
        closes = random_walk_closes(rng, rng.randint(5, 70))
        roots = build_tree(series_from_closes(closes), HierarchyConfig(levels=3))
        zones = detect_terminal_zones(roots, config)
        index = {}

        def visit(nodes, base=()):
            for k, n in enumerate(nodes):
                index[base + (k,)] = n
                visit(n.children, base + (k,))

        visit(roots)
        for z in zones:
            node = index[z.parent_path]
            assert node.children
            last = node.children[-1]
            assert last.direction is node.direction
            parent_path = z.parent_path[:-1]
            ref_role = index[parent_path].role if parent_path else node.role
            assert saturation_score(node.coefficient, admissible_region(ref_role)) >= 1 - config.epsilon
            assert saturation_score(last.coefficient, admissible_region(node.role)) >= 1 - config.delta
            assert z.expected_direction is node.direction.opposite()


def test_zones_sorted_by_bar_index(rng):
    closes = random_walk_closes(rng, 150)
    roots = build_tree(series_from_closes(closes), HierarchyConfig(levels=3))
    zones = detect_terminal_zones(roots)
    assert [z.bar_index for z in zones] == sorted(z.bar_index for z in zones)


def test_affine_invariance_of_zones(rng):
    closes = random_walk_closes(rng, 120)
    series = series_from_closes(closes)
    config = HierarchyConfig(levels=3)
    base = detect_terminal_zones(build_tree(series, config))
    for a, b in ((0.001, 0.0), (1000.0, 1e4), (3.3, -77.0)):
        moved = affine_transform(series, a, b)
        assert detect_terminal_zones(build_tree(moved, config)) == base


def test_monotone_in_epsilon_delta(rng):
    for _ in range(10):
        closes = random_walk_closes(rng, rng.randint(20, 100))
        roots = build_tree(series_from_closes(closes), HierarchyConfig(levels=3))
        tight = detect_terminal_zones(roots, DetectorConfig(epsilon=0.05, delta=0.05))
        loose = detect_terminal_zones(roots, DetectorConfig(epsilon=0.4, delta=0.4))
        tight_keys = {(z.bar_index, z.parent_path) for z in tight}
        loose_keys = {(z.bar_index, z.parent_path) for z in loose}
        assert tight_keys <= loose_keys
