from kedro.pipeline import Pipeline, node, pipeline

from .nodes import check_operator_identities, find_nilpotency_periods


def create_pipeline(**kwargs) -> Pipeline:
    return pipeline(
        [
            node(
                func=check_operator_identities,
                inputs="params:operator_algebra.identities",
                outputs="operator_identities",
                name="check_operator_identities_node",
            ),
            node(
                func=find_nilpotency_periods,
                inputs="params:operator_algebra.nilpotency",
                outputs="nilpotency_periods",
                name="find_nilpotency_periods_node",
            ),
        ]
    )
