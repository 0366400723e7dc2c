"""Terminal-zone detection: saturated parent plus saturated final leg.

A node flags a terminal zone when its own gauge is within ``epsilon`` of
the boundary, its *last* child is within ``delta`` of the boundary of the
region set by the node's role, and that child moves with the node's
direction — the trend's final leg is the one exhausting the structure.
The expected resolution is a reversal, so the zone carries the opposite
direction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .hierarchy import admissible_region, iter_nodes, saturation_score
from .segmentation import Direction


@dataclass(frozen=True)
class DetectorConfig:
    """Boundary proximity tolerances for parent (epsilon) and child (delta)."""

    epsilon: float = 0.15
    delta: float = 0.15

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must be in (0, 1), got {self.epsilon}")
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must be in (0, 1), got {self.delta}")


@dataclass(frozen=True)
class TerminalZone:
    bar_index: int
    expected_direction: Direction
    parent_path: tuple
    parent_saturation: float
    child_saturation: float

    def as_dict(self) -> dict:
        return {
            "bar_index": self.bar_index,
            "expected_direction": self.expected_direction.value,
            "parent_path": list(self.parent_path),
            "parent_saturation": self.parent_saturation,
            "child_saturation": self.child_saturation,
        }


def detect_terminal_zones(roots, config: DetectorConfig = DetectorConfig(),
                          table=None) -> list:
    """Scan a structure forest for terminal zones, sorted by bar index.

    A node P with children emits a zone iff:

    1. gauge(P) >= 1 - epsilon against the region of P's parent's role
       (roots score against their own role's region),
    2. gauge(last child) >= 1 - delta against the region of P's role,
    3. the last child's direction equals P's direction (both non-flat).

    Empty output is valid; childless trees never fire.
    """
    zones = []
    for path, node, parent in iter_nodes(roots):
        if not node.children or node.direction is Direction.FLAT:
            continue
        last = node.children[-1]
        if last.direction is not node.direction:
            continue
        ref_role = parent.role if parent is not None else node.role
        parent_sat = saturation_score(node.coefficient, admissible_region(ref_role, table))
        if parent_sat < 1.0 - config.epsilon:
            continue
        child_sat = saturation_score(last.coefficient, admissible_region(node.role, table))
        if child_sat < 1.0 - config.delta:
            continue
        zones.append(
            TerminalZone(
                bar_index=node.segment.end_index,
                expected_direction=node.direction.opposite(),
                parent_path=path,
                parent_saturation=parent_sat,
                child_saturation=child_sat,
            )
        )
    zones.sort(key=lambda z: (z.bar_index, z.parent_path))
    return zones
