"""Command-line client for the spectroscopy pipelines.

Runs everything in-process by default; pass --server to proxy the request
to a running HTTP service instead.  Flags override config-file values,
which override the built-in defaults.
"""

from __future__ import annotations

import json
import pathlib

import click
from pydantic import ValidationError

from . import grid as _grid
from . import pipelines
from .errors import SimulatorError
from .schemas import STATE_CHOICES, RunConfig, config_from_mapping


def _read_config_file(path: str) -> dict[str, str]:
    pairs: dict[str, str] = {}
    for lineno, line in enumerate(
        pathlib.Path(path).read_text().splitlines(), start=1
    ):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise click.ClickException(
                f"{path}:{lineno}: expected key=value, got {stripped!r}"
            )
        key, _, value = stripped.partition("=")
        pairs[key.strip()] = value.strip()
    return pairs


def _resolve_state(
    state: str | None, fields: dict[str, object]
) -> None:
    """Map the --state token onto config fields; a token that is not a
    known choice is treated as a path to an amplitude table."""
    if state is None:
        return
    if state in STATE_CHOICES and state != "custom":
        fields["state"] = state
        return
    path = pathlib.Path(state)
    if not path.exists():
        raise click.ClickException(
            f"--state {state!r} is neither one of {STATE_CHOICES[:-1]} nor a file"
        )
    n_sim = int(fields.get("n_sim", 4))
    d = float(fields.get("d", 0.5))
    table = _grid.load_custom_table(path.read_text(), _grid.make_grid(n_sim, d))
    fields["state"] = "custom"
    fields["state_table"] = [[float(a.real), float(a.imag)] for a in table]


def _build_config(config_path: str | None, **flags) -> RunConfig:
    fields: dict[str, object] = {}
    if config_path is not None:
        fields.update(config_from_mapping(_read_config_file(config_path)))
    state = flags.pop("state", None)
    shots = flags.pop("shots", None)
    for key, value in flags.items():
        if value is not None:
            fields[key] = value
    if shots is not None:
        if shots == "exact":
            fields["shots"] = None
        else:
            fields["shots"] = int(shots)
    _resolve_state(state, fields)
    try:
        return RunConfig(**fields)
    except ValidationError as exc:
        first = exc.errors()[0]
        loc = ".".join(str(p) for p in first["loc"]) or "config"
        raise click.ClickException(f"{loc}: {first['msg']}")


def _emit(text: str, output: str | None) -> None:
    if output is None:
        click.echo(text)
    else:
        pathlib.Path(output).write_text(text + "\n")


def _csv_path(output: str) -> str:
    path = pathlib.Path(output)
    if path.suffix == ".json":
        return str(path.with_suffix(".csv"))
    return str(path) + ".csv"


def _distribution_csv(rows) -> str:
    lines = ["bin,theta,energy,probability"]
    for row in rows:
        lines.append(
            f"{row['bin']},{row['theta']!r},{row['energy']!r},{row['probability']!r}"
        )
    return "\n".join(lines)


def _post(server: str, endpoint: str, cfg: RunConfig, **params) -> dict:
    import httpx

    response = httpx.post(
        server.rstrip("/") + endpoint,
        json=json.loads(cfg.model_dump_json()),
        params={k: v for k, v in params.items() if v is not None},
        timeout=300.0,
    )
    if response.status_code != 200:
        raise click.ClickException(
            f"server returned {response.status_code}: {response.text}"
        )
    return response.json()


def _result_json(result_or_dict) -> str:
    if isinstance(result_or_dict, dict):
        return json.dumps(result_or_dict, indent=2)
    return result_or_dict.model_dump_json(indent=2)


def common_options(fn):
    decorators = [
        click.option("--n-sim", "n_sim", type=int, default=None,
                     help="simulation register qubits (default 4)"),
        click.option("--n-work", "n_work", type=int, default=None,
                     help="work register qubits (default 4)"),
        click.option("--d", type=float, default=None,
                     help="box half-width (default 0.5)"),
        click.option("--a", type=float, default=None,
                     help="well half-aperture (default 0.25)"),
        click.option("--v0", type=float, default=None,
                     help="well depth (default 100)"),
        click.option("--t", type=float, default=None,
                     help="total evolution time (default 0.06)"),
        click.option("--steps", type=int, default=None,
                     help="Trotter steps m, dt = t/m (default 50)"),
        click.option("--state", type=str, default=None,
                     help="ground | excited | exact-ground | exact-excited | path"),
        click.option("--shots", type=str, default=None,
                     help="'exact' (default) or a shot count"),
        click.option("--seed", type=int, default=None, help="sampling seed"),
        click.option("--output", type=str, default=None,
                     help="write JSON here instead of stdout"),
        click.option("--config", "config_path",
                     type=click.Path(exists=True, dir_okay=False), default=None,
                     help="key=value config file; flags override it"),
        click.option("--server", type=str, default=None,
                     help="base URL of a running service to delegate to"),
    ]
    for dec in reversed(decorators):
        fn = dec(fn)
    return fn


@click.group()
def main() -> None:
    """Statevector spectroscopy of a particle in a finite square well."""


@main.command("solve-exact")
@common_options
def solve_exact(config_path, output, server, **flags) -> None:
    """Bound-state energies from the transcendental matching conditions."""
    cfg = _build_config(config_path, **flags)
    try:
        if server:
            payload = _post(server, "/solve-exact", cfg)
        else:
            payload = pipelines.run_solve_exact(cfg)
        _emit(_result_json(payload), output)
    except SimulatorError as exc:
        raise click.ClickException(str(exc))


@main.command("simulate-qpe")
@common_options
def simulate_qpe(config_path, output, server, **flags) -> None:
    """Work-register phase estimation; writes a JSON summary and, with
    --output, a bin,theta,energy,probability CSV next to it."""
    cfg = _build_config(config_path, **flags)
    try:
        if server:
            payload = _post(server, "/simulate-qpe", cfg)
        else:
            payload = pipelines.run_qpe(cfg)
        text = _result_json(payload)
        rows = (
            payload["distribution"]
            if isinstance(payload, dict)
            else [row.model_dump() for row in payload.distribution]
        )
        _emit(text, output)
        if output is not None:
            pathlib.Path(_csv_path(output)).write_text(
                _distribution_csv(rows) + "\n"
            )
    except SimulatorError as exc:
        raise click.ClickException(str(exc))


@main.command("simulate-ipe")
@common_options
@click.option("--repetitions", type=int, default=None,
              help="apply U(t) this many times per circuit (default 1)")
@click.option("--inject-theta", type=float, default=None,
              help="bypass the evolution: read back a known phase through "
                   "the one-qubit round-trip circuit")
def simulate_ipe(config_path, output, server, inject_theta, **flags) -> None:
    """Two-circuit iterative phase estimation (cos and sin quadratures)."""
    cfg = _build_config(config_path, **flags)
    try:
        if server:
            payload = _post(server, "/simulate-ipe", cfg, inject_theta=inject_theta)
        else:
            payload = pipelines.run_ipe(cfg, inject_theta=inject_theta)
        _emit(_result_json(payload), output)
    except SimulatorError as exc:
        raise click.ClickException(str(exc))


@main.command("dump-circuit")
@common_options
@click.option("--verify", is_flag=True, default=False,
              help="re-simulate the dumped text and compare against the "
                   "direct pipeline")
def dump_circuit(config_path, output, server, verify, **flags) -> None:
    """Emit the full evolution circuit as plain gate lines."""
    cfg = _build_config(config_path, **flags)
    try:
        if server:
            payload = _post(server, "/dump-circuit", cfg, verify=verify)
        else:
            payload = pipelines.run_dump_circuit(cfg, verify=verify)
        verified = payload["verified"] if isinstance(payload, dict) else payload.verified
        if verify and verified is not True:
            raise click.ClickException("dump verification failed")
        text = (
            payload["circuit_text"] if isinstance(payload, dict)
            else payload.circuit_text
        )
        _emit(text.rstrip("\n"), output)
    except SimulatorError as exc:
        raise click.ClickException(str(exc))


@main.command("compare-oracle")
@common_options
def compare_oracle(config_path, output, server, **flags) -> None:
    """Assembled circuit vs dense reference propagator error report."""
    cfg = _build_config(config_path, **flags)
    try:
        if server:
            payload = _post(server, "/compare-oracle", cfg)
        else:
            payload = pipelines.run_compare_oracle(cfg)
        _emit(_result_json(payload), output)
    except SimulatorError as exc:
        raise click.ClickException(str(exc))


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve(host: str, port: int) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .server import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
