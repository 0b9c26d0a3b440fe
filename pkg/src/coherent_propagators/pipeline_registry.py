"""Project pipelines."""

from kedro.framework.project import find_pipelines
from kedro.pipeline import Pipeline


def register_pipelines() -> dict[str, Pipeline]:
    """Register the figure2, exactness and operator_algebra pipelines.

    ``checks`` bundles the two verification pipelines and ``__default__`` runs
    everything.
    """
    pipelines = find_pipelines()
    pipelines["checks"] = pipelines["exactness"] + pipelines["operator_algebra"]
    pipelines["__default__"] = pipelines["figure2"] + pipelines["checks"]
    return pipelines
