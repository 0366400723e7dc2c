"""Domain exceptions shared across the toolkit."""


class QgmsError(Exception):
    """Base class for all toolkit errors."""


# --- market data ------------------------------------------------------------

class MalformedRow(QgmsError):
    """CSV row has the wrong column count or a non-numeric field."""


class InvariantViolation(QgmsError):
    """A bar violates the OHLC ordering or positivity invariants."""


class NonMonotonicTime(QgmsError):
    """Series timestamps are not strictly increasing."""


class NonPositiveScale(QgmsError):
    """Affine scale factor must be strictly positive."""


class OffsetUnderflow(QgmsError):
    """Affine offset would push a price to zero or below."""


class EmptySeries(QgmsError):
    """Operation requires at least one bar."""


class IndexOutOfRange(QgmsError):
    """Bar or segment index falls outside the series."""


# --- hierarchy --------------------------------------------------------------

class DegenerateRegion(QgmsError):
    """Admissible region has zero halfwidth on every component."""


# --- blind protocol ---------------------------------------------------------

class SessionStateError(QgmsError):
    """Operation not allowed in the session's current state."""


class SessionSealed(SessionStateError):
    """Mutation attempted on a sealed session."""


class SessionRevealed(SessionStateError):
    """Mutation attempted on a revealed session."""


class AlreadyRevealed(SessionStateError):
    """Reveal called twice on the same session."""


class LookaheadRejected(QgmsError):
    """Prediction references a bar that has not been served yet."""


class MalformedLedger(QgmsError):
    """Ledger file cannot be parsed into valid entries."""


class MalformedManifest(QgmsError):
    """Manifest file cannot be parsed or is missing fields."""


# --- metrics ----------------------------------------------------------------

class NonPositiveValue(QgmsError):
    """Drawdown input contains a value <= 0."""


class EmptySequence(QgmsError):
    """Drawdown input is empty."""
