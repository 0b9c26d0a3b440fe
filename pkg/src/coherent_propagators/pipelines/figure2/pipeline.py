from kedro.pipeline import Pipeline, node, pipeline

from .nodes import run_error_sweep, summarise_figure2, tabulate_figure2


def create_pipeline(**kwargs) -> Pipeline:
    return pipeline(
        [
            node(
                func=run_error_sweep,
                inputs=["params:figure2", "params:cat_map"],
                outputs="figure2_errors",
                name="run_error_sweep_node",
            ),
            node(
                func=tabulate_figure2,
                inputs="figure2_errors",
                outputs="figure2_table",
                name="tabulate_figure2_node",
            ),
            node(
                func=summarise_figure2,
                inputs="figure2_table",
                outputs="figure2_summary",
                name="summarise_figure2_node",
            ),
        ]
    )
