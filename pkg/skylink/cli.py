import glob
import os
import sys
import tempfile
from typing import Any, Dict, List, Optional

import click
from rich.console import Console
from rich.table import Table

from skylink import __version__
from skylink.config import settings
from skylink.errors import ConfigError, SkylinkError
from skylink.services.pipeline import run_scenario
from skylink.utils.log import configure_logging

console = Console()


def _summary_table(title: str, reports: List[Dict[str, Any]]) -> Table:
    table = Table(title=title)
    table.add_column("scenario")
    table.add_column("check")
    table.add_column("passed", justify="right")
    table.add_column("status")
    for report in reports:
        for name, (passed, total) in sorted(report["checks"].items()):
            status = "[green]ok[/green]" if passed == total else "[red]FAIL[/red]"
            table.add_row(report["scenario"], name, f"{passed}/{total}", status)
        table.add_row(report["scenario"], "[bold]overall[/bold]", str(report["rows"]), report["summary"]["overall_status"])
    return table


@click.group()
@click.version_option(__version__, prog_name="skylink")
@click.option("--log-level", default=None, help="Logging level (default: SKYLINK_LOG_LEVEL).")
def main(log_level: Optional[str]) -> None:
    """Skies of events as Legendrian links, checked at desk scale."""
    configure_logging(log_level or settings.log_level)


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False), help="Scenario JSON file.")
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False), help="Output directory.")
@click.option("--seed", type=click.IntRange(min=0), default=None, help="Override the scenario seed.")
@click.option("--fan", type=int, default=None, help="Override the sky fan resolution.")
def run(config_path: str, out_dir: str, seed: Optional[int], fan: Optional[int]) -> None:
    """Run one scenario and write results.csv, fronts/ and summary.txt."""
    try:
        result = run_scenario(config_path, out_dir, seed=seed, fan=fan)
    except ConfigError as e:
        raise click.UsageError(str(e))
    except SkylinkError as e:
        console.print(f"[red]error:[/red] {e}")
        sys.exit(2)
    report = result["report"]
    console.print(_summary_table(report["scenario"], [report]))
    console.print(f"Outputs written to {result['output_dir']}")
    sys.exit(0 if report["summary"]["overall_status"] == "PASS" else 1)


@main.command()
@click.option("--out", "out_dir", default=None, type=click.Path(file_okay=False), help="Keep outputs here instead of a temporary directory.")
@click.option("--scenarios", "scenario_dir", default=None, type=click.Path(exists=True, file_okay=False), help="Directory of scenario files.")
def verify(out_dir: Optional[str], scenario_dir: Optional[str]) -> None:
    """Run every shipped reference scenario; exit nonzero on any failure."""
    scenario_dir = scenario_dir or settings.scenario_dir
    paths = sorted(glob.glob(os.path.join(scenario_dir, "*.json")))
    if not paths:
        raise click.UsageError(f"no scenarios found in {scenario_dir}")
    base = out_dir or tempfile.mkdtemp(prefix="skylink-verify-")
    reports, errors = [], 0
    for path in paths:
        name = os.path.splitext(os.path.basename(path))[0]
        try:
            reports.append(run_scenario(path, os.path.join(base, name))["report"])
        except SkylinkError as e:
            console.print(f"[red]{name}:[/red] {e}")
            errors += 1
    console.print(_summary_table("skylink verify", reports))
    failures = errors + sum(r["summary"]["failures"] for r in reports)
    console.print(f"{len(paths)} scenarios, {failures} failures; outputs in {base}")
    sys.exit(1 if failures else 0)


if __name__ == "__main__":
    main()
