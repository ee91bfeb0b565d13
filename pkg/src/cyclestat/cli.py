"""Command-line front end.

Three subcommands: ``analyze`` runs the single-sequence pipeline,
``compare`` scores a user sequence against a trainer sequence, and
``synth`` writes a synthetic sequence in the OpenPose JSON layout.
Exit codes: 0 ok, 2 bad input, 3 too few cycles, 4 numeric failure.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .errors import CycleStatError
from .estimators import CycleAnalyzer, ExerciseComparator
from .report import analysis_report, comparison_report, render_json, render_svg, write_csv
from .skeleton import load_sequence
from .synth import SynthConfig, generate_cyclic_sequence, write_openpose_sequence


def _pipeline_options(fn):
    opts = [
        click.option("--template-len", type=int, default=None,
                     help="Cycle-profile template length (default: frames // 8)."),
        click.option("--min-exclusion", type=int, default=None,
                     help="Local-minima exclusion radius (default: template // 2)."),
        click.option("--cluster-gap-mult", type=float, default=2.0, show_default=True,
                     help="Gap multiplier for minima clustering."),
        click.option("--mean", "mean_method", type=click.Choice(["medoid", "barycenter"]),
                     default="medoid", show_default=True, help="Mean-pose estimator."),
        click.option("--epsilon", type=float, default=1e-6, show_default=True,
                     help="Precision-index regularizer."),
        click.option("--out", type=click.Path(dir_okay=False), default=None,
                     help="Write the JSON report here instead of stdout."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _echo_config(**kwargs) -> dict:
    return {k: kwargs[k] for k in sorted(kwargs)}


def _emit(text: str, out: str | None) -> None:
    if out:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            click.echo(f"error: cannot write {out}: {exc}", err=True)
            sys.exit(2)
    else:
        click.echo(text, nl=False)


def _fail(exc: CycleStatError) -> None:
    click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
    sys.exit(exc.exit_code)


@click.group()
def main():
    """Cycle statistics and technique scoring for skeleton sequences."""


@main.command()
@click.argument("input_path", type=click.Path(exists=True))
@_pipeline_options
def analyze(input_path, template_len, min_exclusion, cluster_gap_mult,
            mean_method, epsilon, out):
    """Detect the period of INPUT_PATH and report per-pose statistics."""
    try:
        seq = load_sequence(input_path)
        analyzer = CycleAnalyzer(
            template_len=template_len,
            min_exclusion=min_exclusion,
            cluster_gap_mult=cluster_gap_mult,
            mean_method=mean_method,
            epsilon=epsilon,
        ).fit(seq)
    except CycleStatError as exc:
        _fail(exc)
    config = _echo_config(
        input=str(input_path), template_len=template_len,
        min_exclusion=min_exclusion, cluster_gap_mult=cluster_gap_mult,
        mean=mean_method, epsilon=epsilon,
    )
    _emit(render_json(analysis_report(analyzer, config)), out)


@main.command()
@click.argument("trainer_path", type=click.Path(exists=True))
@click.argument("user_path", type=click.Path(exists=True))
@_pipeline_options
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None,
              help="Also write the per-pose table as CSV.")
@click.option("--plot", "plot_path", type=click.Path(dir_okay=False), default=None,
              help="Also write an SVG plot of precision and fit curves.")
def compare(trainer_path, user_path, template_len, min_exclusion,
            cluster_gap_mult, mean_method, epsilon, out, csv_path, plot_path):
    """Score USER_PATH against TRAINER_PATH via per-pose fit indices."""
    try:
        trainer_seq = load_sequence(trainer_path)
        user_seq = load_sequence(user_path)
        comparator = ExerciseComparator(
            template_len=template_len,
            min_exclusion=min_exclusion,
            cluster_gap_mult=cluster_gap_mult,
            mean_method=mean_method,
            epsilon=epsilon,
        ).fit(trainer_seq)
        result = comparator.compare(user_seq)
    except CycleStatError as exc:
        _fail(exc)
    config = _echo_config(
        trainer=str(trainer_path), user=str(user_path),
        template_len=template_len, min_exclusion=min_exclusion,
        cluster_gap_mult=cluster_gap_mult, mean=mean_method, epsilon=epsilon,
    )
    report = comparison_report(result, config)
    if csv_path:
        write_csv(csv_path, report["per_pose"])
    if plot_path:
        rows = report["per_pose"]
        Path(plot_path).write_text(
            render_svg(
                [r["trainer_precision"] for r in rows],
                [r["user_precision"] for r in rows],
                [r["fit"] for r in rows],
            )
        )
    _emit(render_json(report), out)


@main.command()
@click.option("--out", type=click.Path(), required=True,
              help="Destination: a directory of frame files, or a .jsonl file.")
@click.option("--period", type=int, default=40, show_default=True,
              help="Cycle length in frames.")
@click.option("--cycles", type=int, default=4, show_default=True,
              help="Number of cycles.")
@click.option("--noise", type=float, default=0.0, show_default=True,
              help="Coordinate noise as a fraction of torso length.")
@click.option("--phase-jitter", type=int, default=0, show_default=True,
              help="Max per-cycle phase shift in frames.")
@click.option("--amplitude", type=float, default=1.0, show_default=True,
              help="Motion amplitude scale.")
@click.option("--seed", type=int, default=0, show_default=True,
              help="Generator seed.")
def synth(out, period, cycles, noise, phase_jitter, amplitude, seed):
    """Write a synthetic cyclic sequence readable by analyze/compare."""
    try:
        cfg = SynthConfig(
            period=period, num_cycles=cycles, noise_sigma=noise,
            phase_jitter=phase_jitter, amplitude=amplitude, seed=seed,
        )
        seq = generate_cyclic_sequence(cfg)
        write_openpose_sequence(seq, out)
    except CycleStatError as exc:
        _fail(exc)
    click.echo(f"wrote {len(seq)} frames to {out}")


if __name__ == "__main__":
    main()
