"""Command line entry point: ``densecode run`` and ``densecode verify``."""

from __future__ import annotations

import json
import logging
import sys

import click

from . import experiments as ex

VERIFY_TARGETS = {
    "1": "verify_theorem1",
    "2": "verify_theorem2",
    "3": "verify_theorem3",
    "prop1": "verify_prop1",
}


def _build_config(config_path, **flags) -> ex.ExperimentConfig:
    settings: dict[str, object] = {}
    if config_path:
        settings.update(ex.read_config_file(config_path))
    for key, value in flags.items():
        if value is not None and value is not False:
            settings[key] = value
    return ex.ExperimentConfig.from_mapping(settings)


def _execute(cfg: ex.ExperimentConfig) -> ex.RunResult:
    try:
        result = ex.run(cfg)
    except ex.ConfigError as exc:
        raise click.UsageError(str(exc)) from exc
    click.echo(json.dumps(result.summary, indent=2, default=ex._json_default))
    if result.csv_path is not None:
        click.echo(f"wrote {result.csv_path} and {result.json_path}", err=True)
    return result


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def main(verbose):
    """Dense-coding capacity experiments on random multi-qubit states."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")


_common = [
    click.option("--samples", type=int, help="Number of random states (default 10000)."),
    click.option("--seed", type=int, help="Master seed (default 0)."),
    click.option("--out", type=click.Path(file_okay=False), default=None,
                 help="Directory for the CSV and JSON outputs."),
    click.option("--full", is_flag=True, help="Use the large publication sample counts."),
    click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
                 help="key=value file; command line flags take precedence."),
]


def _with_common(fn):
    for opt in reversed(_common):
        fn = opt(fn)
    return fn


@main.command()
@click.option("--experiment", type=click.Choice(ex.EXPERIMENTS), help="Experiment to run.")
@click.option("--measure", type=click.Choice(ex.MEASURES), help="Correlation measure to plot.")
@click.option("--channel", type=click.Choice(["correlated_pauli", "depolarizing"]),
              help="Noise applied to the senders.")
@click.option("--q", help="Correlated Pauli weights q0,q1,q2,q3.")
@click.option("--p", type=float, help="Depolarizing strength per sender.")
@_with_common
def run(experiment, measure, channel, q, p, samples, seed, out, full, config_path):
    """Run one experiment and print its JSON summary."""
    try:
        cfg = _build_config(config_path, experiment=experiment, measure=measure, channel=channel,
                            q=q, p=p, samples=samples, seed=seed, out=out, full=full)
    except (ex.ConfigError, ValueError) as exc:
        raise click.UsageError(str(exc)) from exc
    _execute(cfg)


@main.command()
@click.option("--theorem", required=True, type=click.Choice(list(VERIFY_TARGETS)),
              help="Which bound to check.")
@_with_common
def verify(theorem, samples, seed, out, full, config_path):
    """Check a bound on random states; exit status 1 on any violation."""
    try:
        cfg = _build_config(config_path, experiment=VERIFY_TARGETS[theorem], samples=samples,
                            seed=seed, out=out, full=full)
    except (ex.ConfigError, ValueError) as exc:
        raise click.UsageError(str(exc)) from exc
    result = _execute(cfg)
    click.echo("PASS" if result.passed else "FAIL", err=True)
    sys.exit(0 if result.passed else 1)


if __name__ == "__main__":
    main()
