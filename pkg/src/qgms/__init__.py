"""qgms: geometric market-structure analysis with blind-replay validation.

The pipeline: parse OHLC bars, decompose closes into directional segments,
encode each segment as a scale-invariant shape coefficient, assemble a
multi-scale structure tree under role-based admissibility, and flag
terminal zones where parent and final-leg coefficients sit near their
admissible boundaries.  Around it: a blind forward-replay harness with a
hash-chained prediction ledger, an HTTP session service, and excursion /
drawdown metrics for post-reveal scoring.
"""

from .blind import (
    AnonymizationManifest,
    BlindSession,
    CommitmentLedger,
    LedgerEntry,
    RevealResult,
    ServedBar,
    SessionState,
    VerificationReport,
    create_session,
    invert_affine,
    series_digest,
    verify_ledger,
)
from .detector import DetectorConfig, TerminalZone, detect_terminal_zones
from .encoding import (
    RETRACEMENT_CAP,
    RoleThresholds,
    StructuralCoefficient,
    StructuralRole,
    classify_role,
    encode,
)
from .errors import QgmsError
from .hierarchy import (
    DEFAULT_REGION_TABLE,
    AdmissibleRegion,
    HierarchyConfig,
    StructureNode,
    build_tree,
    check_admissibility,
    admissible_region,
    saturation_score,
)
from .market_data import Bar, PriceSeries, affine_transform, parse_csv
from .metrics import (
    EvaluationConfig,
    MetricsReport,
    Prediction,
    evaluate_predictions,
    max_drawdown,
)
from .segmentation import Direction, Segment, SegmentationConfig, segment_series

__version__ = "0.1.0"

__all__ = [
    "AnonymizationManifest",
    "AdmissibleRegion",
    "Bar",
    "BlindSession",
    "CommitmentLedger",
    "DEFAULT_REGION_TABLE",
    "DetectorConfig",
    "Direction",
    "EvaluationConfig",
    "HierarchyConfig",
    "LedgerEntry",
    "MetricsReport",
    "Prediction",
    "PriceSeries",
    "QgmsError",
    "RETRACEMENT_CAP",
    "RevealResult",
    "RoleThresholds",
    "Segment",
    "SegmentationConfig",
    "ServedBar",
    "SessionState",
    "StructuralCoefficient",
    "StructuralRole",
    "StructureNode",
    "TerminalZone",
    "VerificationReport",
    "affine_transform",
    "admissible_region",
    "build_tree",
    "check_admissibility",
    "classify_role",
    "create_session",
    "detect_terminal_zones",
    "encode",
    "evaluate_predictions",
    "invert_affine",
    "max_drawdown",
    "parse_csv",
    "saturation_score",
    "segment_series",
    "series_digest",
    "verify_ledger",
]
