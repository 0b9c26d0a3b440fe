import logging
import math

import pandas as pd

from coherent_propagators.exceptions import NotFound
from coherent_propagators.torus_quantum import TorusHilbert, nilpotency_period
from coherent_propagators.weyl_ops import compose_identities_report

logger = logging.getLogger(__name__)


def check_operator_identities(options: dict) -> pd.DataFrame:
    """Runs the identity report for every odd N of the configured range.

    Args:
        options: ``identities`` section of parameters_operator_algebra.yml.
    Returns:
        One row per dimension and identity with its largest deviation.
    """
    first = options["n_min"] + (1 - options["n_min"] % 2)
    records = []
    for N in range(first, options["n_max"] + 1, 2):
        report = compose_identities_report(TorusHilbert(N), options["samples"], options["seed"])
        if not report.passed:
            logger.warning("N = %d: identities failed: %s", N, ", ".join(report.failures()))
        records.extend(report.to_records())
    table = pd.DataFrame(records)
    logger.info(
        "Operator identities: %d of %d checks passed", int(table["passed"].sum()), len(table)
    )
    return table


def find_nilpotency_periods(options: dict) -> pd.DataFrame:
    """Smallest power of the quantum cat map proportional to the identity, per N.

    Dimensions without such a power below the search cap get an empty ``k``.
    """
    rows = []
    for N in range(options["n_min"], options["n_max"] + 1):
        try:
            period = nilpotency_period(TorusHilbert(N))
        except NotFound as exc:
            logger.warning("%s", exc)
            rows.append({"N": N, "k": None, "phi": math.nan, "site_residual": math.nan})
            continue
        rows.append(
            {
                "N": N,
                "k": period.k,
                "phi": period.phi,
                "site_residual": period.site_residual,
            }
        )
    return pd.DataFrame(rows)
