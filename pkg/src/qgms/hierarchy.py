"""Multi-scale structure tree and role-based admissibility.

The tree is built coarse-to-fine: the whole series is segmented with the
largest reversal threshold, then each segment's span is re-segmented with
the next smaller threshold to produce its children.  Children therefore
tile their parent's span by construction.  Thresholds follow a geometric
ladder ``rho_k = rho0 * gamma**k`` where level 0 is the finest.

Admissibility is role-based, not value-based: a child is compatible with
its parent when its coefficient lies inside the box region configured for
the parent's role.  Proximity to the region boundary is measured by the
box gauge (0 at the region center, 1 exactly on the boundary, > 1
outside), which is what the terminal-zone detector thresholds against.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .encoding import (
    COMPONENTS,
    RETRACEMENT_CAP,
    RoleThresholds,
    StructuralCoefficient,
    StructuralRole,
    classify_role,
    encode_closes,
)
from .errors import DegenerateRegion
from .market_data import PriceSeries
from .segmentation import Direction, Segment, SegmentationConfig, segment_closes

_GLOBAL_RANGES = {
    "efficiency": (0.0, 1.0),
    "retracement": (0.0, RETRACEMENT_CAP),
    "balance": (0.0, 1.0),
    "skew": (0.0, 1.0),
}


@dataclass(frozen=True)
class AdmissibleRegion:
    """Closed per-component intervals in coefficient space."""

    efficiency: tuple = (0.0, 1.0)
    retracement: tuple = (0.0, RETRACEMENT_CAP)
    balance: tuple = (0.0, 1.0)
    skew: tuple = (0.0, 1.0)

    def __post_init__(self):
        for name in COMPONENTS:
            lo, hi = getattr(self, name)
            glo, ghi = _GLOBAL_RANGES[name]
            if not (glo <= lo <= hi <= ghi):
                raise ValueError(
                    f"{name} interval [{lo}, {hi}] outside global [{glo}, {ghi}]"
                )

    def center(self, name: str) -> float:
        lo, hi = getattr(self, name)
        return (lo + hi) / 2.0

    def halfwidth(self, name: str) -> float:
        lo, hi = getattr(self, name)
        return (hi - lo) / 2.0

    def as_dict(self) -> dict:
        return {name: list(getattr(self, name)) for name in COMPONENTS}


# Invented defaults: boxes wide enough that ordinary child structure is
# admissible, narrow enough that role character is preserved.
DEFAULT_REGION_TABLE = {
    StructuralRole.IMPULSIVE: AdmissibleRegion(
        efficiency=(0.1, 1.0), retracement=(0.0, 2.0), balance=(0.2, 1.0), skew=(0.0, 1.0)
    ),
    StructuralRole.CORRECTIVE: AdmissibleRegion(
        efficiency=(0.0, 0.9), retracement=(0.0, 4.0), balance=(0.0, 1.0), skew=(0.0, 1.0)
    ),
    StructuralRole.CONSOLIDATIVE: AdmissibleRegion(
        efficiency=(0.0, 0.7), retracement=(0.0, 4.0), balance=(0.0, 1.0), skew=(0.0, 1.0)
    ),
}


def admissible_region(parent_role: StructuralRole, table=None) -> AdmissibleRegion:
    """Region of child coefficients compatible with ``parent_role``.

    Depends on the role only, never on the parent's numeric coefficient.
    """
    table = DEFAULT_REGION_TABLE if table is None else table
    missing = [r for r in StructuralRole if r not in table]
    if missing:
        raise ValueError(f"region table missing roles: {[r.value for r in missing]}")
    return table[parent_role]


def saturation_score(c: StructuralCoefficient, region: AdmissibleRegion) -> float:
    """Box gauge of ``c`` in ``region``: max over components of
    ``|c_k - center_k| / halfwidth_k``.

    0 at the center, exactly 1 on the boundary, > 1 outside.  Components
    with zero halfwidth are excluded.

    Raises:
        DegenerateRegion: if every component has zero halfwidth.
    """
    scores = []
    for name in COMPONENTS:
        hw = region.halfwidth(name)
        if hw > 0:
            scores.append(abs(c.component(name) - region.center(name)) / hw)
    if not scores:
        raise DegenerateRegion("all components have zero halfwidth")
    return max(scores)


@dataclass(frozen=True)
class HierarchyConfig:
    levels: int = 3
    rho0: float = 0.382
    gamma: float = 1.6
    min_bars: int = 2
    region_table: dict = field(default_factory=lambda: dict(DEFAULT_REGION_TABLE))
    role_thresholds: RoleThresholds = RoleThresholds()

    def __post_init__(self):
        if self.levels < 1:
            raise ValueError(f"levels must be >= 1, got {self.levels}")
        if not self.gamma > 1:
            raise ValueError(f"gamma must be > 1, got {self.gamma}")
        # the whole ladder must stay a valid reversal fraction
        top = self.rho_at(self.levels - 1)
        if not 0 < top < 1:
            raise ValueError(
                f"coarsest threshold rho0*gamma^{self.levels - 1} = {float(top)} "
                "must stay in (0, 1); lower levels or gamma"
            )
        admissible_region(StructuralRole.IMPULSIVE, self.region_table)

    def rho_at(self, level: int) -> Fraction:
        return Fraction(self.rho0) * Fraction(self.gamma) ** level


@dataclass(frozen=True)
class StructureNode:
    """One segment at one scale, with its coefficient, role and children."""

    segment: Segment
    coefficient: StructuralCoefficient
    role: StructuralRole
    level: int
    children: tuple = ()

    @property
    def direction(self) -> Direction:
        return self.segment.direction


def build_tree(series: PriceSeries, config: HierarchyConfig = HierarchyConfig()) -> list:
    """Build the multi-scale structure tree; returns the root nodes.

    Roots are the segments of the coarsest decomposition; each node's span
    is re-segmented at the next finer threshold to produce its children.
    A span that re-segments into itself stops recursing.

    Raises:
        EmptySeries: if the series has no bars.
    """
    series.require_non_empty()
    closes = series.closes()

    def nodes_at(level: int, lo: int, hi: int) -> list:
        window = closes[lo : hi + 1]
        seg_cfg = SegmentationConfig(rho=float(config.rho_at(level)), min_bars=config.min_bars)
        out = []
        for s, e in segment_closes(window, seg_cfg):
            s += lo
            e += lo
            coeff = encode_closes(closes[s : e + 1])
            seg = Segment(
                start_index=s,
                end_index=e,
                direction=_dir(closes[s], closes[e]),
                start_price=closes[s],
                end_price=closes[e],
            )
            children = ()
            if level > 0:
                sub = nodes_at(level - 1, s, e)
                whole_span = (
                    len(sub) == 1
                    and sub[0].segment.start_index == s
                    and sub[0].segment.end_index == e
                )
                if not whole_span:
                    children = tuple(sub)
            out.append(
                StructureNode(
                    segment=seg,
                    coefficient=coeff,
                    role=classify_role(coeff, config.role_thresholds),
                    level=level,
                    children=children,
                )
            )
        return out

    return nodes_at(config.levels - 1, 0, len(closes) - 1)


def _dir(start, end) -> Direction:
    if end > start:
        return Direction.UP
    if end < start:
        return Direction.DOWN
    return Direction.FLAT


@dataclass(frozen=True)
class AdmissibilityViolation:
    path: tuple
    component: str
    score: float


def iter_nodes(roots):
    """Yield (path, node, parent) over the whole forest, depth-first."""
    stack = [((k,), node, None) for k, node in reversed(list(enumerate(roots)))]
    while stack:
        path, node, parent = stack.pop()
        yield path, node, parent
        for k, child in reversed(list(enumerate(node.children))):
            stack.append((path + (k,), child, node))


def check_admissibility(roots, table=None) -> list:
    """List every (child, component) whose gauge against the parent-role
    region exceeds 1.  Roots have no parent and are never listed."""
    violations = []
    for path, node, parent in iter_nodes(roots):
        if parent is None:
            continue
        region = admissible_region(parent.role, table)
        for name in COMPONENTS:
            hw = region.halfwidth(name)
            if hw <= 0:
                continue
            score = abs(node.coefficient.component(name) - region.center(name)) / hw
            if score > 1.0:
                violations.append(AdmissibilityViolation(path=path, component=name, score=score))
    return violations


def node_to_dict(node: StructureNode, parent_role: Optional[StructuralRole] = None,
                 table=None) -> dict:
    """JSON-ready nested representation, including each node's gauge
    against its parent-role region (own role for roots)."""
    ref_role = parent_role if parent_role is not None else node.role
    region = admissible_region(ref_role, table)
    return {
        "level": node.level,
        "start_index": node.segment.start_index,
        "end_index": node.segment.end_index,
        "direction": node.segment.direction.value,
        "role": node.role.value,
        "coefficient": node.coefficient.as_dict(),
        "saturation": saturation_score(node.coefficient, region),
        "children": [node_to_dict(c, node.role, table) for c in node.children],
    }
