from kedro.pipeline import Pipeline, node, pipeline

from .nodes import compare_flow_with_oracle, compare_sc3_with_exact


def create_pipeline(**kwargs) -> Pipeline:
    return pipeline(
        [
            node(
                func=compare_sc3_with_exact,
                inputs=["params:exactness.torus", "params:cat_map"],
                outputs="sc3_torus_exactness",
                name="compare_sc3_with_exact_node",
            ),
            node(
                func=compare_flow_with_oracle,
                inputs="params:exactness.flows",
                outputs="sc3_flow_exactness",
                name="compare_flow_with_oracle_node",
            ),
        ]
    )
