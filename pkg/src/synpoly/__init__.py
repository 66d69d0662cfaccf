"""Exact complex-level machinery for syntomic polynomial cohomology."""

__version__ = "0.1.0"

# Bumped whenever a sign or indexing convention changes; embedded in every report.
CONVENTION_LEDGER_VERSION = "cones-v1/tot-sign-(-1)^p/cup-(-1)^(q1 p2)/koszul-eps-v1"
