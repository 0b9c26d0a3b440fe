import logging

import numpy as np
import pandas as pd

from coherent_propagators.classical_catmap import CatMap
from coherent_propagators.continuum_oracle import exact_cs_propagator
from coherent_propagators.elements import Method
from coherent_propagators.quadratic_flows import QuadraticHamiltonian
from coherent_propagators.semiclassical import context, sc3_element, torus_element
from coherent_propagators.torus_quantum import TorusHilbert, exact_cs_element

logger = logging.getLogger(__name__)


def compare_sc3_with_exact(options: dict, cat_map: list[list[int]]) -> pd.DataFrame:
    """Compares SC3 and SC3LIN with the exact torus element on random label pairs.

    Args:
        options: ``torus`` section of parameters_exactness.yml.
        cat_map: Integer matrix of the map.
    Returns:
        One row per dimension, time, pair and method.
    """
    cat = CatMap.from_matrix(cat_map)
    rng = np.random.default_rng(options["seed"])
    first = options["n_min"] + (1 - options["n_min"] % 2)
    rows = []
    for N in range(first, options["n_max"] + 1, 2):
        space = TorusHilbert(N)
        for t in options["times"]:
            for pair in range(options["pairs"]):
                x1, x2 = rng.random(2), rng.random(2)
                exact = exact_cs_element(space, x1, x2, t)
                for method in (Method.SC3, Method.SC3LIN):
                    element = torus_element(method, space, x1, x2, t, cat)
                    rows.append(
                        {
                            "N": N,
                            "t": t,
                            "pair": pair,
                            "method": method.value,
                            "amplitude_error": element.relative_error(exact),
                            "phase_error": element.phase_error(exact),
                        }
                    )
    table = pd.DataFrame(rows)
    logger.info(
        "Torus SC3: worst amplitude error %.3e, worst phase error %.3e over %d elements",
        table["amplitude_error"].max(),
        table["phase_error"].abs().max(),
        len(table),
    )
    return table


def _flow_times(section: dict) -> list[float]:
    times = np.linspace(0.0, section["t_max"], section["samples"])
    return sorted({float(t) for t in times} | {float(t) for t in section.get("caustics", [])})


def compare_flow_with_oracle(options: dict) -> pd.DataFrame:
    """Compares SC3 for the harmonic and inverted oscillators with the Fock-basis oracle.

    Args:
        options: ``flows`` section of parameters_exactness.yml.
    Returns:
        One row per system and time, caustic times included.
    """
    hbar = options["hbar"]
    x1, x2 = options["x1"], options["x2"]
    rows = []
    for name, factory in (
        ("harmonic", QuadraticHamiltonian.harmonic),
        ("inverted", QuadraticHamiltonian.inverted),
    ):
        h = factory(hbar)
        for t in _flow_times(options[name]):
            semiclassical = sc3_element(h, x1, x2, t)
            exact = exact_cs_propagator(h, x1, x2, t)
            rows.append(
                {
                    "system": name,
                    "t": t,
                    "at_caustic": context(h, t).at_caustic,
                    "amplitude_error": semiclassical.relative_error(exact),
                    "phase_error": semiclassical.phase_error(exact),
                    "re_sc3": semiclassical.value.real,
                    "im_sc3": semiclassical.value.imag,
                    "re_exact": exact.real,
                    "im_exact": exact.imag,
                }
            )
    table = pd.DataFrame(rows)
    logger.info(
        "Flow SC3: worst amplitude error %.3e, worst phase error %.3e",
        table["amplitude_error"].max(),
        table["phase_error"].abs().max(),
    )
    return table
