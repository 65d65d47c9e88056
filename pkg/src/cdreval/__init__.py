"""cdreval: consistency-diversity-realism evaluation over prompt-grouped embeddings."""

__version__ = "0.1.0"

from .core import (  # noqa: F401
    AxisRegistry,
    Direction,
    EmbeddingRowMeta,
    EmbeddingTable,
    KnobConfig,
    MetricAxis,
    MetricPoint,
    Role,
    ValidationReport,
    VerdictLog,
    default_registry,
    register_axes,
    validate_table,
)
