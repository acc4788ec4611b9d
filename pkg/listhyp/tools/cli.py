# Copyright 2025 The listhyp Authors
# Licensed under the Apache License, Version 2.0

"""
Command-line interface.

Usage:
    listhyp gen --m 3 --card-y 3 --l 2 --seed 42 > j.json
    listhyp analyze --instance j.json --no-timestamp
    listhyp sweep-qy --instance j.json --family dirichlet:7:100
    listhyp simulate --instance j.json --samples 1000000 --seed 3
    listhyp oracle-check --count 200 --seed 1
    listhyp tradeoff --instance j.json --points 11
    listhyp lemma2 --instance j.json --q-y "[0.5, 0.5, 0]"

Reports go to stdout (or --out); diagnostics and logs go to stderr. Exit
codes: 0 success, 2 schema violation, 3 numeric validation failure, 4
oracle mismatch.
"""

import json
import logging
import sys
from contextlib import contextmanager
from enum import Enum
from io import StringIO
from pathlib import Path
from typing import Annotated, Iterator, List, Optional

import typer

from listhyp.core.config import settings
from listhyp.core.constants import EXIT_ORACLE_MISMATCH, FAMILY_QSTAR, FAMILY_UNIFORM
from listhyp.core.errors import ListHypError, SchemaError
from listhyp.distributions import product_channel, random_instance
from listhyp.models.instance import Instance, parse_instance, parse_product_channel
from listhyp.services import analysis
from listhyp.services.oracle_check import run_oracle_check

logger = logging.getLogger(__name__)

app = typer.Typer(
    name="listhyp",
    help="Exact list hypothesis testing error, meta-converse and information-spectrum identities.",
    no_args_is_help=True,
    add_completion=False,
)


class OutputFormat(str, Enum):
    json = "json"
    csv = "csv"


InstanceOption = Annotated[
    str, typer.Option("--instance", help="Instance JSON file, or - for stdin.")
]
ListSizeOption = Annotated[
    Optional[int], typer.Option("--l", help="List size L; defaults to the instance's L.")
]
OutOption = Annotated[
    Optional[Path], typer.Option("--out", help="Write output here instead of stdout.")
]
NoTimestampOption = Annotated[
    bool, typer.Option("--no-timestamp", help="Omit timestamp and timings for reproducible output.")
]


@contextmanager
def _cli_errors() -> Iterator[None]:
    """Turn library errors into a red diagnostic and the matching exit code."""
    try:
        yield
    except ListHypError as e:
        logger.debug("Command failed", exc_info=True)
        typer.secho(f"Error: {e}", fg="red", err=True)
        raise typer.Exit(e.exit_code) from e


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise SchemaError(f"cannot read {path}: {e}") from e


def _load_instance(path: str) -> Instance:
    return parse_instance(_read_text(path))


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        typer.echo(text, nl=False)
        return
    out.write_text(text, encoding="utf-8")
    logger.info("Wrote %s", out)


def _csv_text(rows: list) -> str:
    buffer = StringIO()
    analysis.write_csv(rows, buffer)
    return buffer.getvalue()


@app.callback()
def main(
    verbose: Annotated[bool, typer.Option("--verbose", "-v", help="Debug logging on stderr.")] = False,
) -> None:
    level = logging.DEBUG if verbose or settings.debug else logging.WARNING
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )


@app.command()
def analyze(
    instance: InstanceOption,
    list_size: ListSizeOption = None,
    family: Annotated[
        Optional[List[str]],
        typer.Option("--family", help="Q_Y family; repeatable. Default: qstar and uniform."),
    ] = None,
    output_format: Annotated[OutputFormat, typer.Option("--format")] = OutputFormat.json,
    out: OutOption = None,
    no_timestamp: NoTimestampOption = False,
) -> None:
    """Full report: eps_min, Q*, mu, lambda*, both bounds per Q_Y, oracle flags."""
    with _cli_errors():
        families = family or [FAMILY_QSTAR, FAMILY_UNIFORM]
        report = analysis.analyze_instance(
            _load_instance(instance), families, L=list_size, with_timestamp=not no_timestamp
        )
        if output_format == OutputFormat.csv:
            _emit(_csv_text(analysis.report_rows(report)), out)
        else:
            _emit(analysis.to_json(report), out)


@app.command("sweep-qy")
def sweep_qy(
    instance: InstanceOption,
    family: Annotated[str, typer.Option("--family", help="uniform | marginal | qstar | dirichlet:SEED:COUNT")],
    list_size: ListSizeOption = None,
    output_format: Annotated[OutputFormat, typer.Option("--format")] = OutputFormat.csv,
    out: OutOption = None,
) -> None:
    """Both bounds and their gaps to eps_min for every member of a Q_Y family."""
    with _cli_errors():
        rows = analysis.sweep_qy(_load_instance(instance), family, L=list_size)
        if output_format == OutputFormat.json:
            _emit(json.dumps([row.model_dump() for row in rows], indent=2) + "\n", out)
        else:
            _emit(_csv_text(rows), out)


@app.command()
def simulate(
    instance: InstanceOption,
    list_size: ListSizeOption = None,
    samples: Annotated[int, typer.Option("--samples")] = 1_000_000,
    seed: Annotated[int, typer.Option("--seed")] = 0,
    out: OutOption = None,
    no_timestamp: NoTimestampOption = False,
) -> None:
    """Monte Carlo error of the optimal list test against eps_min."""
    with _cli_errors():
        result = analysis.simulate_instance(
            _load_instance(instance), samples, seed, L=list_size, with_timestamp=not no_timestamp
        )
        _emit(analysis.to_json(result), out)


@app.command("oracle-check")
def oracle_check(
    instance: Annotated[
        Optional[str], typer.Option("--instance", help="Check this instance instead of generated ones.")
    ] = None,
    list_size: ListSizeOption = None,
    count: Annotated[int, typer.Option("--count", help="Number of generated instances.")] = 200,
    seed: Annotated[int, typer.Option("--seed")] = 1,
    out: OutOption = None,
) -> None:
    """Closed forms against brute force; exits 4 on any disagreement."""
    with _cli_errors():
        target = None
        if instance is not None:
            loaded = _load_instance(instance)
            target = (loaded.to_joint(), analysis.resolve_list_size(loaded, list_size))
        summary = run_oracle_check(count, seed, target)
        _emit(analysis.to_json(summary), out)
    if not summary.passed:
        typer.secho(f"{len(summary.failures)} oracle check(s) failed", fg="red", err=True)
        raise typer.Exit(EXIT_ORACLE_MISMATCH)


@app.command()
def gen(
    m: Annotated[int, typer.Option("--m", help="Number of hypotheses.")] = 3,
    card_y: Annotated[int, typer.Option("--card-y", help="Number of outcomes.")] = 3,
    list_size: Annotated[int, typer.Option("--l")] = 1,
    seed: Annotated[int, typer.Option("--seed")] = 0,
    concentration: Annotated[float, typer.Option("--concentration")] = 1.0,
    product_channel_spec: Annotated[
        Optional[str],
        typer.Option("--product-channel", help="JSON file with prior, channel and n."),
    ] = None,
    out: OutOption = None,
) -> None:
    """Write an instance JSON: random Gamma cells, or a memoryless product channel."""
    with _cli_errors():
        if product_channel_spec is not None:
            spec = parse_product_channel(_read_text(product_channel_spec))
            P = product_channel(spec.prior, spec.channel, spec.n, spec.symbol_labels)
        else:
            P = random_instance(m, card_y, list_size, seed, concentration)
        instance = Instance.from_joint(P, list_size)
        instance.to_joint()
        _emit(instance.to_json(), out)


@app.command()
def tradeoff(
    instance: InstanceOption,
    list_size: ListSizeOption = None,
    family: Annotated[str, typer.Option("--family")] = FAMILY_QSTAR,
    points: Annotated[int, typer.Option("--points", help="Grid size on [0, 1].")] = 11,
    out: OutOption = None,
) -> None:
    """Plot-ready CSV of (beta, alpha_beta) for P_X̲Y against Q_X̲ x Q_Y."""
    with _cli_errors():
        curve = analysis.tradeoff_curve(_load_instance(instance), family, points, L=list_size)
        _emit(_csv_text(curve), out)


@app.command()
def lemma2(
    instance: InstanceOption,
    q_y: Annotated[str, typer.Option("--q-y", help="JSON list with the auxiliary Q_Y.")],
    list_size: ListSizeOption = None,
    y_bar: Annotated[Optional[int], typer.Option("--y-bar", help="Outcome index; default first valid.")] = None,
    out: OutOption = None,
) -> None:
    """Strict improvement of a Q_Y that vanishes on a shared outcome."""
    with _cli_errors():
        try:
            raw = json.loads(q_y)
        except json.JSONDecodeError as e:
            raise SchemaError(f"--q-y is not valid JSON: {e}") from e
        if not isinstance(raw, list):
            raise SchemaError("--q-y must be a JSON list")
        record = analysis.lemma2_report(_load_instance(instance), raw, y_bar, L=list_size)
        _emit(analysis.to_json(record), out)
