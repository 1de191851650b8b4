from typing import Any, Dict

from skylink.services.experiments import ExperimentOutcome
from skylink.services.scenario import Scenario


class ScenarioEvaluator:
    """Turns an experiment outcome into the report written to summary.txt."""

    def _fan_refinements(self, outcome: ExperimentOutcome, scenario: Scenario) -> int:
        return sum(1 for r in outcome.rows if r.get("fan") not in (None, scenario.fan))

    def run(self, scenario: Scenario, outcome: ExperimentOutcome) -> Dict[str, Any]:
        failures = outcome.failures
        report: Dict[str, Any] = {
            "scenario": scenario.name,
            "experiment": scenario.experiment.kind,
            "seed": scenario.seed,
            "fan": scenario.fan,
            "rows": len(outcome.rows),
            "excluded": outcome.excluded,
            "checks": dict(outcome.checks),
            "summary": {
                "overall_status": "PASS" if failures == 0 else "FAIL",
                "failures": failures,
                "critical_issues": sum(1 for p, t in outcome.checks.values() if p < t),
                "recommendations": [],
            },
        }

        recommendations = report["summary"]["recommendations"]
        if outcome.rows and outcome.excluded > 0.1 * len(outcome.rows):
            recommendations.append("More than 10% of pairs fell in the marginal band - widen the generator bounds")
        refined = self._fan_refinements(outcome, scenario)
        if refined:
            recommendations.append(f"{refined} pairs needed a finer fan - consider raising 'fan'")
        if not outcome.checks:
            recommendations.append("No checks were evaluated - verify the scenario's pairs or generator")
        return report
