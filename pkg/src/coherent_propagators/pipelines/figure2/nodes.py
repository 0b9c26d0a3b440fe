import logging

import numpy as np
import pandas as pd
from scipy.stats import spearmanr

from coherent_propagators.classical_catmap import CatMap
from coherent_propagators.semiclassical import error_sweep, tabulate_errors

logger = logging.getLogger(__name__)


def sweep_dimensions(options: dict) -> list[int]:
    """Odd dimensions from an explicit ``ns`` list or an ``n_min``/``n_max`` range."""
    if options.get("ns"):
        return [int(n) for n in options["ns"]]
    first = options["n_min"] + (1 - options["n_min"] % 2)
    return list(range(first, options["n_max"] + 1, 2))


def run_error_sweep(options: dict, cat_map: list[list[int]]) -> pd.DataFrame:
    """Compares semiclassical and exact torus elements for every N.

    Args:
        options: Parameters defined in parameters_figure2.yml.
        cat_map: Integer matrix of the map.
    Returns:
        Long table with one row per dimension and method.
    """
    return error_sweep(
        sweep_dimensions(options),
        options["t"],
        options["x1"],
        options["x2"],
        options["methods"],
        cat=CatMap.from_matrix(cat_map),
        max_workers=options.get("max_workers", 1),
    )


def tabulate_figure2(errors: pd.DataFrame) -> pd.DataFrame:
    return tabulate_errors(errors)


def summarise_figure2(table: pd.DataFrame) -> dict[str, float]:
    """Logs the qualitative features of the error curves."""
    summary = {}
    if "E_sc1" in table:
        summary["min_E_sc1"] = float(table["E_sc1"].min())
    if "E_sc2" in table and len(table) > 1:
        summary["spearman_E_sc2"] = float(spearmanr(table["N"], table["E_sc2"])[0])
    if "E_sc3" in table:
        summary["max_E_sc3"] = float(np.nanmax(table["E_sc3"]))
    for name, value in summary.items():
        logger.info("Error sweep %s = %.6g", name, value)
    return summary
