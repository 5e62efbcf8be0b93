"""arena command line: scenario generation, policy runs, metric recomputation, serving."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .harness import emit_table, metrics_from_transcripts, run_policy
from .policies import POLICY_KINDS, PolicySpec
from .scenario import load_scenario, save_scenario
from .server import ScenarioCatalog, serve
from .synth import DEFAULT_HORIZON, generate_synthetic_scenario


def parse_seeds(text: str) -> list[int]:
    """"0..99" (inclusive), "3,7,11", or a single integer."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    if "," in text:
        return [int(part) for part in text.split(",") if part.strip()]
    return [int(text)]


@click.group()
def main():
    """Long-horizon enterprise finance simulator."""


@main.command("gen-scenario")
@click.option("--seed", type=int, required=True)
@click.option("--profile", default="40,30,62", show_default=True,
              help="expansion,recession,neutral months (must sum to the horizon)")
@click.option("--horizon", type=int, default=DEFAULT_HORIZON, show_default=True)
@click.option("--out", "out_dir", type=click.Path(path_type=Path), required=True)
def gen_scenario(seed: int, profile: str, horizon: int, out_dir: Path):
    """Generate a synthetic scenario bundle."""
    parts = tuple(int(p) for p in profile.split(","))
    if len(parts) != 3:
        raise click.BadParameter("profile must be three comma-separated month counts")
    scenario = generate_synthetic_scenario(seed, parts, horizon=horizon)
    save_scenario(scenario, out_dir)
    click.echo(f"wrote scenario {scenario.id} ({scenario.horizon} months) to {out_dir}")


@main.command("run")
@click.option("--scenario", "scenario_dir", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--policy", type=click.Choice(POLICY_KINDS), default="steward", show_default=True)
@click.option("--seeds", default="0..4", show_default=True)
@click.option("--out", "out_dir", type=click.Path(path_type=Path), default=None,
              help="Directory for per-seed transcripts and the results CSV.")
def run(scenario_dir: Path, policy: str, seeds: str, out_dir: Path | None):
    """Run a scripted policy across seeds and print the results row."""
    scenario = load_scenario(scenario_dir)
    seed_list = parse_seeds(seeds)
    row, _stats = run_policy(PolicySpec(kind=policy), scenario, seed_list, out_dir=out_dir)
    text, csv_text = emit_table([row])
    click.echo(text, nl=False)
    if out_dir is not None:
        (Path(out_dir) / "results.csv").write_text(csv_text)
        click.echo(f"transcripts and results.csv written to {out_dir}")


@main.command("eval")
@click.option("--transcripts", "transcript_dir", type=click.Path(exists=True, path_type=Path), required=True)
def eval_transcripts(transcript_dir: Path):
    """Recompute the metrics row from transcripts alone."""
    paths = sorted(Path(transcript_dir).glob("*.ndjson"))
    if not paths:
        click.echo("no .ndjson transcripts found", err=True)
        sys.exit(1)
    row = metrics_from_transcripts(paths)
    text, _ = emit_table([row])
    click.echo(text, nl=False)


@main.command("serve")
@click.option("--scenarios", "scenario_root", type=click.Path(exists=True, path_type=Path), default=None,
              help="Directory of scenario bundles; defaults to the built-in synthetic scenario.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--static", "static_dir", type=click.Path(path_type=Path), default=None,
              help="Optional built cockpit directory to serve at /.")
def serve_cmd(scenario_root: Path | None, host: str, port: int, static_dir: Path | None):
    """Serve episodes over HTTP."""
    catalog = None
    if scenario_root is not None:
        catalog = ScenarioCatalog()
        catalog.load_dir(scenario_root)
    serve(catalog, host=host, port=port, static_dir=static_dir)


if __name__ == "__main__":
    main()
