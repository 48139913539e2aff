from ._streamad import (
    Anomaly,
    ConfigError,
    DomainError,
    ParseError,
    RunConfig,
    count_transitions,
    detect,
    generate,
    kmeans,
    oracle,
    parse_group,
    run,
    serialize_group,
    validate_config,
)

__all__ = [
    "Anomaly",
    "ConfigError",
    "DomainError",
    "ParseError",
    "RunConfig",
    "count_transitions",
    "detect",
    "generate",
    "kmeans",
    "oracle",
    "parse_group",
    "run",
    "serialize_group",
    "validate_config",
]
