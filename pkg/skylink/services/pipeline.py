import os
from typing import Any, Dict

import numpy as np

from skylink.contact.fronts import link_signature
from skylink.contact.links import trivial_link_reference
from skylink.errors import SkylinkError
from skylink.packager.exporter import export_fronts, write_results_csv, write_summary
from skylink.services.evaluator import ScenarioEvaluator
from skylink.services.experiments import RUNNERS
from skylink.services.scenario import Scenario, load_scenario
from skylink.utils.log import get_logger

LOG = get_logger(__name__)


class ScenarioPipeline:
    def __init__(self) -> None:
        self.evaluator = ScenarioEvaluator()

    def run(self, scenario: Scenario, output_dir: str) -> Dict[str, Any]:
        kind = scenario.experiment.kind
        try:
            # Step 1: Seed the generator; every random draw of the run comes from it
            LOG.info("Step 1: Preparing scenario '%s' (%s, seed %d, fan %d)...", scenario.name, kind, scenario.seed, scenario.fan)
            rng = np.random.default_rng(scenario.seed)

            # Step 2: Run the experiment
            LOG.info("Step 2: Running %s on %s...", kind, scenario.metric.kind.value)
            outcome = RUNNERS[kind](scenario, rng)
            LOG.info("Produced %d rows", len(outcome.rows))

            # Step 3: Evaluate the checks
            LOG.info("Step 3: Evaluating checks...")
            report = self.evaluator.run(scenario, outcome)
        except SkylinkError as e:
            raise SkylinkError(f"scenario '{scenario.name}' ({kind}): {e}") from e

        # Step 4: Save results
        LOG.info("Step 4: Writing results...")
        os.makedirs(output_dir, exist_ok=True)
        results = write_results_csv(
            outcome.rows,
            os.path.join(output_dir, "results.csv"),
            {"scenario": scenario.name, "experiment": kind, "seed": scenario.seed, "fan": scenario.fan},
        )

        # Step 5: Front diagrams
        LOG.info("Step 5: Emitting front diagrams...")
        diagrams = list(outcome.diagrams)
        if kind == "link-verdict" and not scenario.metric.is_sphere:
            a, b = trivial_link_reference(np.zeros(2), np.array([1.0, 0.0]), scenario.fan)
            diagrams.insert(0, ("reference-trivial-link", link_signature(a, b)[1]))
        fronts = export_fronts(diagrams, output_dir)

        # Step 6: Summary
        LOG.info("Step 6: Writing summary...")
        summary = write_summary(os.path.join(output_dir, "summary.txt"), report)

        return {
            "output_dir": output_dir,
            "results": results,
            "summary": summary,
            "fronts": fronts,
            "report": report,
        }


def run_scenario(config_path: str, output_dir: str, seed=None, fan=None) -> Dict[str, Any]:
    scenario = load_scenario(config_path).with_overrides(seed=seed, fan=fan)
    return ScenarioPipeline().run(scenario, output_dir)
