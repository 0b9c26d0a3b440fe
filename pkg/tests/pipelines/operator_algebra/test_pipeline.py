import logging

import pytest
from kedro.io import DataCatalog
from kedro.runner import SequentialRunner

from coherent_propagators.pipelines.operator_algebra import (
    create_pipeline as create_operator_algebra_pipeline,
)
from coherent_propagators.pipelines.operator_algebra.nodes import (
    check_operator_identities,
    find_nilpotency_periods,
)


@pytest.fixture
def identity_parameters():
    return {"n_min": 2, "n_max": 7, "samples": 4, "seed": 3}


@pytest.fixture
def nilpotency_parameters():
    return {"n_min": 1, "n_max": 5}


def test_check_operator_identities(identity_parameters):
    table = check_operator_identities(identity_parameters)

    assert sorted(set(table["N"])) == [3, 5, 7]
    assert table["passed"].all()
    assert table["max_deviation"].max() < 1e-10


def test_find_nilpotency_periods(nilpotency_parameters):
    table = find_nilpotency_periods(nilpotency_parameters)

    assert table["N"].tolist() == [1, 2, 3, 4, 5]
    periods = table.set_index("N")["k"]
    assert periods[1] == 1
    assert periods[3] == 6


def test_operator_algebra_pipeline(caplog, identity_parameters, nilpotency_parameters):
    pipeline = create_operator_algebra_pipeline()
    catalog = DataCatalog()
    catalog.add_feed_dict(
        {
            "params:operator_algebra.identities": identity_parameters,
            "params:operator_algebra.nilpotency": nilpotency_parameters,
        }
    )

    caplog.set_level(logging.DEBUG, logger="kedro")
    successful_run_msg = "Pipeline execution completed successfully."

    SequentialRunner().run(pipeline, catalog)

    assert successful_run_msg in caplog.text
