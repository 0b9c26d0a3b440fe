import logging

import pytest
from kedro.io import DataCatalog
from kedro.runner import SequentialRunner

from coherent_propagators.pipelines.figure2 import create_pipeline as create_figure2_pipeline
from coherent_propagators.pipelines.figure2.nodes import (
    run_error_sweep,
    summarise_figure2,
    sweep_dimensions,
    tabulate_figure2,
)


@pytest.fixture
def figure2_parameters():
    return {
        "n_min": 3,
        "n_max": 31,
        "t": 1,
        "x1": [0.4, 0.3],
        "x2": [0.2, 0.3],
        "methods": ["sc1", "sc2", "sc3"],
        "max_workers": 2,
    }


@pytest.fixture
def cat_map():
    return [[2, 3], [1, 2]]


def test_sweep_dimensions(figure2_parameters):
    assert sweep_dimensions(figure2_parameters) == list(range(3, 32, 2))
    assert sweep_dimensions({"n_min": 4, "n_max": 9}) == [5, 7, 9]
    assert sweep_dimensions({"ns": [11, 3]}) == [11, 3]


def test_error_curves(figure2_parameters, cat_map):
    errors = run_error_sweep(figure2_parameters, cat_map)
    table = tabulate_figure2(errors)
    summary = summarise_figure2(table)

    assert len(table) == 15
    assert summary["min_E_sc1"] > 0.1
    assert summary["spearman_E_sc2"] > 0.9
    assert summary["max_E_sc3"] < 1e-9


def test_sweep_rejects_even_dimensions(figure2_parameters, cat_map):
    figure2_parameters["ns"] = [3, 6]
    with pytest.raises(ValueError) as e_info:
        run_error_sweep(figure2_parameters, cat_map)

    assert "[6]" in str(e_info.value)


def test_figure2_pipeline(caplog, figure2_parameters, cat_map):
    figure2_parameters.update(n_min=3, n_max=7)
    pipeline = create_figure2_pipeline()
    catalog = DataCatalog()
    catalog.add_feed_dict(
        {
            "params:figure2": figure2_parameters,
            "params:cat_map": cat_map,
        }
    )

    caplog.set_level(logging.DEBUG, logger="kedro")
    successful_run_msg = "Pipeline execution completed successfully."

    SequentialRunner().run(pipeline, catalog)

    assert successful_run_msg in caplog.text
