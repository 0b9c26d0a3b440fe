import io
import json
import logging

import numpy as np
import pandas as pd
import pytest
from click.testing import CliRunner

from coherent_propagators import __version__
from coherent_propagators.cli import cli
from coherent_propagators.exceptions import CausticError
from coherent_propagators.quadratic_flows import QuadraticHamiltonian
from coherent_propagators.semiclassical import sc3_element
from coherent_propagators.torus_quantum import TorusHilbert, exact_cs_element


@pytest.fixture(autouse=True)
def _isolate_from_kedro_logging(monkeypatch):
    # Importing kedro elsewhere in the session applies conf/logging.yml, whose
    # root RichHandler would write into CliRunner's captured stdout.
    from rich.logging import RichHandler

    root = logging.getLogger()
    kept = [h for h in root.handlers if not isinstance(h, RichHandler)]
    monkeypatch.setattr(root, "handlers", kept)


@pytest.fixture
def runner():
    return CliRunner()


def read_table(text):
    header = json.loads(text.splitlines()[0][2:])
    return header, pd.read_csv(io.StringIO(text), comment="#")


def test_version(runner):
    result = runner.invoke(cli, ["--version"])
    assert result.exit_code == 0
    assert __version__ in result.output


def test_exact_on_the_torus(runner):
    result = runner.invoke(cli, ["exact", "--n", "5", "--n", "7", "--t", "2"])

    assert result.exit_code == 0, result.output
    header, table = read_table(result.stdout)
    assert header["command"] == "exact"
    assert header["config"]["ns"] == [5, 7]
    assert list(table.columns) == ["system", "N", "hbar", "t", "X1", "X2", "re", "im"]
    expected = exact_cs_element(TorusHilbert(7), (0.4, 0.3), (0.2, 0.3), 2).value
    row = table[table["N"] == 7].iloc[0]
    assert complex(row["re"], row["im"]) == pytest.approx(expected, rel=1e-15)
    assert row["X1"] == "0.4,0.3"


def test_exact_json_output(runner):
    result = runner.invoke(cli, ["exact", "--n-min", "3", "--n-max", "7", "--format", "json"])

    assert result.exit_code == 0, result.output
    payload = json.loads(result.stdout)
    assert payload["header"]["config"]["ns"] == [3, 5, 7]
    assert [row["N"] for row in payload["rows"]] == [3, 5, 7]


def test_exact_writes_to_a_file(runner, tmp_path):
    target = tmp_path / "exact.csv"
    result = runner.invoke(cli, ["exact", "--n", "3", "--out", str(target)])

    assert result.exit_code == 0, result.output
    assert target.read_text(encoding="utf-8").startswith("# {")


@pytest.mark.parametrize(
    "arguments",
    [
        ["exact", "--n", "4"],
        ["exact", "--n", "1"],
        ["exact", "--n", "5", "--x1", "1.2,0.3"],
        ["exact", "--n", "5", "--x1", "abc"],
        ["exact", "--n", "5", "--t", "1.5"],
        ["exact"],
        ["exact", "--n-min", "3"],
        ["identities", "--n", "33"],
        ["semiclassical", "--system", "harmonic", "--hbar", "0"],
    ],
)
def test_usage_errors(runner, arguments):
    result = runner.invoke(cli, arguments)
    assert result.exit_code == 2


def test_semiclassical_on_a_flow(runner):
    result = runner.invoke(
        cli,
        ["semiclassical", "--system", "harmonic", "--t", "1.25", "--x1", "0.4,-0.3",
         "--method", "sc3", "--method", "sc1"],
    )

    assert result.exit_code == 0, result.output
    _, table = read_table(result.stdout)
    assert table["method"].tolist() == ["sc3", "sc1"]
    expected = sc3_element(QuadraticHamiltonian.harmonic(), (0.4, -0.3), (0.2, 0.3), 1.25).value
    row = table.iloc[0]
    assert complex(row["re"], row["im"]) == pytest.approx(expected, rel=1e-14)


def test_semiclassical_on_the_torus(runner):
    result = runner.invoke(cli, ["semiclassical", "--n", "5", "--method", "sc3"])

    assert result.exit_code == 0, result.output
    _, table = read_table(result.stdout)
    row = table.iloc[0]
    assert (row["winding_p"], row["winding_q"]) == (0, 0)
    expected = exact_cs_element(TorusHilbert(5), (0.4, 0.3), (0.2, 0.3), 1).value
    assert complex(row["re"], row["im"]) == pytest.approx(expected, rel=1e-9)


def test_semiclassical_caustic_is_a_computation_error(runner):
    result = runner.invoke(
        cli, ["semiclassical", "--system", "harmonic", "--t", "3.141592653589793",
              "--method", "sc1"],
    )

    assert result.exit_code == 1
    assert "CausticError" in result.output


def test_figure2(runner):
    result = runner.invoke(cli, ["figure2", "--n", "3", "--n", "5", "--n", "7"])

    assert result.exit_code == 0, result.output
    header, table = read_table(result.stdout)
    assert header["config"]["methods"] == ["sc1", "sc2", "sc3"]
    assert list(table.columns) == ["N", "E_sc1", "E_sc2", "E_sc3"]
    assert (table["E_sc3"] < 1e-9).all()


def test_figure2_reports_library_errors(runner, mocker):
    mocker.patch(
        "coherent_propagators.cli.error_sweep", side_effect=CausticError("det(M + 1) = 0")
    )
    result = runner.invoke(cli, ["figure2", "--n", "3"])

    assert result.exit_code == 1
    assert "CausticError: det(M + 1) = 0" in result.output


def test_weyl_symbol(runner):
    result = runner.invoke(cli, ["weyl-symbol", "--n", "3", "--t", "2"])

    assert result.exit_code == 0, result.output
    _, table = read_table(result.stdout)
    assert len(table) == 9
    assert np.allclose(table["re_quantum"], table["re_orbits"], atol=1e-10)
    assert np.allclose(table["im_quantum"], table["im_orbits"], atol=1e-10)


def test_identities(runner):
    result = runner.invoke(cli, ["identities", "--n", "3", "--n", "5", "--samples", "3"])

    assert result.exit_code == 0, result.output
    _, table = read_table(result.stdout)
    assert table["passed"].all()
    assert set(table["N"]) == {3, 5}
