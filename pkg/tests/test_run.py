"""
End-to-end run of the registered pipelines with the project configuration.
Run from the project root, where ``conf/`` and ``data/`` live.
"""
from pathlib import Path

import pandas as pd
from kedro.framework.session import KedroSession
from kedro.framework.startup import bootstrap_project


class TestKedroRun:
    def test_kedro_run(self):
        bootstrap_project(Path.cwd())

        with KedroSession.create(project_path=Path.cwd()) as session:
            assert session.run() is not None

        reporting = Path.cwd() / "data" / "08_reporting"
        torus = pd.read_csv(reporting / "sc3_torus_exactness.csv")
        assert set(torus["t"]) == {1, 2, 3}
        assert torus["amplitude_error"].max() < 1e-9
        assert torus["phase_error"].abs().max() < 1e-9
        identities = pd.read_csv(reporting / "operator_identities.csv")
        assert identities["passed"].all()

    def test_figure2_run(self):
        bootstrap_project(Path.cwd())

        with KedroSession.create(project_path=Path.cwd()) as session:
            session.run(pipeline_name="figure2")

        table = pd.read_csv(Path.cwd() / "data" / "08_reporting" / "figure2_table.csv")
        assert table["N"].tolist() == list(range(3, 32, 2))
        assert (table["E_sc3"] < 1e-9).all()
