"""Python access to the BMR/ER catalog, freeness certification and B3 representation checks."""

import json

from ._bmr_hecke import (
    DEFAULT_PRIME,
    B3Error,
    CatalogError,
    ConfigError,
    b3_brute_irreducible,
    b3_condition,
    catalog_checksum,
    group_ids,
    group_order,
    verify_iso,
)
from ._bmr_hecke import run as _run


def run(groups, task, seeds=(1,), prime=DEFAULT_PRIME, mode="modp", catalog_dir=""):
    """Run one task and return the report as a dict."""
    return json.loads(_run(list(groups), task, list(seeds), prime, mode, catalog_dir))


__all__ = [
    "DEFAULT_PRIME",
    "B3Error",
    "CatalogError",
    "ConfigError",
    "b3_brute_irreducible",
    "b3_condition",
    "catalog_checksum",
    "group_ids",
    "group_order",
    "run",
    "verify_iso",
]
