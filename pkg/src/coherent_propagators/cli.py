"""Command line front end for exact and semiclassical coherent-state elements.

Tables go to ``--out`` (standard output by default), prefixed by a header that
echoes the validated configuration; diagnostics go to standard error. Usage
errors exit with status 2 and computation errors with status 1.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Literal

import click
import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from . import __version__
from .continuum_oracle import exact_cs_propagator
from .elements import Method
from .exceptions import CoherentPropagatorsError
from .phase_space import PhasePoint
from .quadratic_flows import QuadraticHamiltonian
from .semiclassical import (
    SC_METHODS,
    error_sweep,
    plane_element,
    tabulate_errors,
    torus_element,
)
from .torus_quantum import (
    TorusHilbert,
    exact_cs_element,
    lift_phase,
    propagator,
    torus_weyl_symbol,
    winding_sum_symbol,
)
from .weyl_ops import compose_identities_report

logger = logging.getLogger(__name__)

MAX_IDENTITY_N = 31

SystemName = Literal["cat", "harmonic", "inverted"]


class RunConfig(BaseModel):
    """Validated parameters of one command."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: str = Field(description="Sub-command being run.")
    ns: tuple[int, ...] = Field(default=(), description="Torus dimensions N.")
    t: float = Field(default=1.0, description="Number of map steps, or flow time.")
    x1: tuple[float, float] = Field(default=(0.4, 0.3), description="Bra label (p, q).")
    x2: tuple[float, float] = Field(default=(0.2, 0.3), description="Ket label (p, q).")
    methods: tuple[Method, ...] = Field(default=(), description="Semiclassical formulas.")
    system: SystemName = Field(default="cat", description="Cat map or plane flow.")
    hbar: float = Field(default=1.0, gt=0, description="Planck constant for plane flows.")
    fmt: Literal["csv", "json"] = Field(default="csv", description="Output format.")
    out: str = Field(default="-", description="Output path, '-' for standard output.")
    seed: int = Field(default=0, description="Seed for sampled lattice points.")
    samples: int = Field(default=8, ge=1, description="Samples per identity check.")
    workers: int = Field(default=1, ge=1, description="Threads for sweeps over N.")

    @property
    def on_torus(self) -> bool:
        return self.system == "cat"

    @model_validator(mode="after")
    def check_torus_inputs(self) -> RunConfig:
        if not self.on_torus:
            return self
        if not self.ns:
            raise ValueError("at least one dimension N is required (--n or --n-min/--n-max)")
        bad = [n for n in self.ns if n < 3 or n % 2 == 0]  # noqa: PLR2004
        if bad:
            raise ValueError(f"N must be odd and >= 3, got {bad}")
        if self.command == "identities" and max(self.ns) > MAX_IDENTITY_N:
            raise ValueError(f"identities supports N <= {MAX_IDENTITY_N}")
        if self.t < 0 or self.t != int(self.t):
            raise ValueError(f"t must be a non-negative integer on the torus, got {self.t}")
        for name, label in (("x1", self.x1), ("x2", self.x2)):
            if not all(0.0 <= v < 1.0 for v in label):
                raise ValueError(f"{name} must lie in [0, 1)^2 on the torus, got {label}")
        return self


class PhasePointParam(click.ParamType):
    name = "p,q"

    def convert(self, value, param, ctx):
        if isinstance(value, PhasePoint):
            return value
        try:
            return PhasePoint.parse(value)
        except ValueError as exc:
            self.fail(str(exc), param, ctx)


PHASE_POINT = PhasePointParam()


def _dimensions(n: tuple[int, ...], n_min: int | None, n_max: int | None) -> tuple[int, ...]:
    if n:
        return tuple(n)
    if n_min is None and n_max is None:
        return ()
    if n_min is None or n_max is None:
        raise click.UsageError("--n-min and --n-max go together")
    first = n_min if n_min % 2 else n_min + 1
    return tuple(range(first, n_max + 1, 2))


def _build_config(**values) -> RunConfig:
    try:
        return RunConfig(**values)
    except ValidationError as exc:
        messages = "; ".join(error["msg"] for error in exc.errors())
        raise click.UsageError(f"invalid configuration: {messages}") from exc


def _hamiltonian(config: RunConfig) -> QuadraticHamiltonian:
    if config.system == "harmonic":
        return QuadraticHamiltonian.harmonic(config.hbar)
    return QuadraticHamiltonian.inverted(config.hbar)


def _header(config: RunConfig) -> dict:
    return {
        "tool": "coherent-propagators",
        "version": __version__,
        "command": config.command,
        "config": config.model_dump(mode="json"),
    }


def write_table(table: pd.DataFrame, config: RunConfig) -> None:
    """Serialize a result table with its configuration header."""
    header = _header(config)
    if config.fmt == "csv":
        body = table.to_csv(index=False, float_format="%.17g", lineterminator="\n")
        text = "# " + json.dumps(header, sort_keys=True) + "\n" + body
    else:
        rows = [
            {key: _exact_json(value) for key, value in record.items()}
            for record in table.to_dict(orient="records")
        ]
        text = json.dumps({"header": header, "rows": rows}, indent=2, sort_keys=True) + "\n"
    if config.out == "-":
        click.echo(text, nl=False)
    else:
        Path(config.out).write_text(text, encoding="utf-8")
        logger.info("Wrote %d rows to %s", len(table), config.out)


def _exact_json(value):
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not np.isfinite(value):
        return None
    return value


def _run(fn):
    try:
        return fn()
    except CoherentPropagatorsError as exc:
        raise click.ClickException(f"{type(exc).__name__}: {exc}") from exc


def _label(point: tuple[float, float]) -> str:
    return f"{point[0]!r},{point[1]!r}"


def common_options(fn):
    options = [
        click.option("--n", "n", type=int, multiple=True, help="Torus dimension, repeatable."),
        click.option("--n-min", type=int, default=None, help="Smallest odd N of a range."),
        click.option("--n-max", type=int, default=None, help="Largest N of a range."),
        click.option("--t", "t", type=float, default=1.0, show_default=True, help="Map steps or flow time."),
        click.option("--x1", type=PHASE_POINT, default="0.4,0.3", show_default=True, help="Bra label p,q."),
        click.option("--x2", type=PHASE_POINT, default="0.2,0.3", show_default=True, help="Ket label p,q."),
        click.option(
            "--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True
        ),
        click.option("--out", default="-", show_default=True, help="Output file."),
        click.option("--seed", type=int, default=0, show_default=True),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def system_options(fn):
    fn = click.option(
        "--hbar", type=float, default=1.0, show_default=True, help="Planck constant (plane only)."
    )(fn)
    return click.option(
        "--system",
        type=click.Choice(["cat", "harmonic", "inverted"]),
        default="cat",
        show_default=True,
        help="Cat map on the torus, or a plane oscillator.",
    )(fn)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="coherent-propagators")
def cli():
    """Coherent-state propagators of cat maps and quadratic flows."""


@cli.command()
@common_options
@system_options
def exact(n, n_min, n_max, t, x1, x2, fmt, out, seed, system, hbar):
    """Exact matrix elements <X1|U^t|X2>."""
    config = _build_config(
        command="exact", ns=_dimensions(n, n_min, n_max), t=t, x1=(x1.p, x1.q),
        x2=(x2.p, x2.q), system=system, hbar=hbar, fmt=fmt, out=out, seed=seed,
    )

    def rows():
        if not config.on_torus:
            value = exact_cs_propagator(_hamiltonian(config), config.x1, config.x2, config.t)
            return [_row(config, None, value)]
        return [
            _row(config, N, exact_cs_element(TorusHilbert(N), config.x1, config.x2, int(config.t)).value)
            for N in config.ns
        ]

    write_table(pd.DataFrame(_run(rows)), config)


def _row(config: RunConfig, N: int | None, value: complex, **extra) -> dict:
    row = {
        "system": config.system,
        "N": N,
        "hbar": TorusHilbert(N).hbar if N else config.hbar,
        "t": config.t,
        "X1": _label(config.x1),
        "X2": _label(config.x2),
    }
    row.update(extra)
    row.update({"re": value.real, "im": value.imag})
    return row


@cli.command()
@common_options
@system_options
@click.option(
    "--method",
    "methods",
    type=click.Choice([m.value for m in SC_METHODS]),
    multiple=True,
    default=("sc3",),
    show_default=True,
)
def semiclassical(n, n_min, n_max, t, x1, x2, fmt, out, seed, system, hbar, methods):
    """Semiclassical matrix elements, one row per N and method."""
    config = _build_config(
        command="semiclassical", ns=_dimensions(n, n_min, n_max), t=t, x1=(x1.p, x1.q),
        x2=(x2.p, x2.q), methods=methods, system=system, hbar=hbar, fmt=fmt, out=out,
        seed=seed,
    )

    def element_row(N, method):
        if N is None:
            element = plane_element(method, _hamiltonian(config), config.x1, config.x2, config.t)
        else:
            element = torus_element(method, TorusHilbert(N), config.x1, config.x2, int(config.t))
        return _row(
            config, N, element.value, method=method.value,
            winding_p=element.winding[0], winding_q=element.winding[1], shift=element.shift,
        )

    def rows():
        ns = config.ns if config.on_torus else (None,)
        return [element_row(N, method) for N in ns for method in config.methods]

    write_table(pd.DataFrame(_run(rows)), config)


@cli.command()
@common_options
@click.option(
    "--method",
    "methods",
    type=click.Choice([m.value for m in SC_METHODS]),
    multiple=True,
    default=("sc1", "sc2", "sc3"),
    show_default=True,
)
@click.option("--workers", type=int, default=1, show_default=True, help="Threads across N.")
def figure2(n, n_min, n_max, t, x1, x2, fmt, out, seed, methods, workers):
    """Relative amplitude errors of the semiclassical formulas against N."""
    ns = _dimensions(n, n_min, n_max) or tuple(range(3, 32, 2))
    config = _build_config(
        command="figure2", ns=ns, t=t, x1=(x1.p, x1.q), x2=(x2.p, x2.q), methods=methods,
        fmt=fmt, out=out, seed=seed, workers=workers,
    )
    sweep = _run(
        lambda: error_sweep(
            config.ns, int(config.t), config.x1, config.x2, config.methods,
            max_workers=config.workers,
        )
    )
    for _, failed in sweep[sweep["error"] != ""].iterrows():
        click.echo(f"N = {failed['N']}, {failed['method']}: {failed['error']}", err=True)
    write_table(tabulate_errors(sweep), config)


@cli.command("weyl-symbol")
@common_options
def weyl_symbol(n, n_min, n_max, t, x1, x2, fmt, out, seed):
    """Weyl symbol of U^t from the quantum matrix and from classical orbits."""
    config = _build_config(
        command="weyl-symbol", ns=_dimensions(n, n_min, n_max), t=t, fmt=fmt, out=out,
        seed=seed,
    )

    def rows():
        records = []
        steps = int(config.t)
        for N in config.ns:
            space = TorusHilbert(N)
            quantum = torus_weyl_symbol(space, propagator(space, steps)) / lift_phase(steps)
            orbits = winding_sum_symbol(space, t=steps)
            for a in range(N):
                for b in range(N):
                    records.append(
                        {
                            "N": N, "t": steps, "a": a, "b": b, "p": a / N, "q": b / N,
                            "re_quantum": quantum[a, b].real, "im_quantum": quantum[a, b].imag,
                            "re_orbits": orbits[a, b].real, "im_orbits": orbits[a, b].imag,
                        }
                    )
        return records

    write_table(pd.DataFrame(_run(rows)), config)


@cli.command()
@common_options
@click.option("--samples", type=int, default=8, show_default=True, help="Random label sets.")
def identities(n, n_min, n_max, t, x1, x2, fmt, out, seed, samples):
    """Check the translation and reflection operator algebra."""
    config = _build_config(
        command="identities", ns=_dimensions(n, n_min, n_max) or (3, 5, 7), fmt=fmt,
        out=out, seed=seed, samples=samples,
    )
    reports = _run(
        lambda: [
            compose_identities_report(TorusHilbert(N), config.samples, config.seed)
            for N in config.ns
        ]
    )
    write_table(pd.DataFrame([r for report in reports for r in report.to_records()]), config)
    failed = [f"N = {r.N}: {', '.join(r.failures())}" for r in reports if not r.passed]
    if failed:
        raise click.ClickException("identities failed for " + "; ".join(failed))


if __name__ == "__main__":
    cli()
