"""
Boyd index tables for unweighted rearrangement-invariant spaces.
"""

import logging

from experiments.config import ExperimentConfig, parse_space
from experiments.grid import run_grid
from experiments.report import ESTIMATE, Report, ReportRow
from laurent_lab.boyd import boyd_indices, duality_pairs

logger = logging.getLogger(__name__)


def run_boyd_table(config: ExperimentConfig) -> Report:
    """alpha, beta and the duality residual |alpha_{X'} - (1 - beta_X)| per space."""
    try:
        specs = [parse_space(literal) for literal in config.spaces]

        def measure(index):
            return boyd_indices(
                specs[index],
                j_max=config.j_max,
                budget=config.boyd_budget,
                seed=config.seed + index,
                with_dual=True,
            )

        results = run_grid(
            list(range(len(specs))), measure, config.threads, desc="Boyd indices"
        )

        # residuals from rows of the same table take precedence over the
        # separately estimated associate indices
        residuals = {}
        for i, j in duality_pairs(specs):
            residuals[i] = abs(results[j].alpha_hat - (1.0 - results[i].beta_hat))

        report = Report(
            title="boyd",
            metadata={"j_max": config.j_max, "budget": config.boyd_budget},
        )
        for index, spec in enumerate(specs):
            estimate = results[index]
            residual = residuals.get(index, estimate.duality_residual)
            row = ReportRow(params={"space": spec.label()})
            row.measure("alpha", estimate.alpha_hat, ESTIMATE)
            row.measure("beta", estimate.beta_hat, ESTIMATE)
            row.measure("duality_residual", residual, ESTIMATE)
            row.measure("alpha_r2", estimate.fit["alpha_r2"], ESTIMATE)
            row.measure("beta_r2", estimate.fit["beta_r2"], ESTIMATE)
            report.add(row)

        logger.info(f"Boyd table finished: {len(report.rows)} spaces")
        return report

    except Exception as e:
        logger.error(f"Error in run_boyd_table: {str(e)}")
        raise
