"""Exception types shared across the package."""


class LevelCoverError(Exception):
    """Base class for all levelcover errors."""


class InstanceError(LevelCoverError):
    """Invalid instance definition or parameters."""


class BudgetError(LevelCoverError):
    """Declared size budget exceeded."""


class EdgeError(LevelCoverError):
    """Duplicate insert, missing delete, or bad endpoints."""


class CorruptionError(LevelCoverError):
    """Internal bookkeeping disagreed with itself; fail fast."""


class SchemeStateError(LevelCoverError):
    """Operation requires a quiescent (fully fixed) scheme."""


class FixBudgetError(LevelCoverError):
    """FIX exceeded its elementary-operation safety valve."""


class OracleBudgetError(LevelCoverError):
    """Instance too large for exhaustive solving."""


class CertificateError(LevelCoverError):
    """A computed bound or certificate failed its own guarantee."""


class SnapshotError(LevelCoverError):
    """Snapshot version/checksum mismatch or malformed dump."""
