import logging
from pathlib import Path

import numpy as np
import pandas as pd

from eharqsim.metrics import CurveSet, binormal_curve
from eharqsim.scenario import choose_scenario
from eharqsim.stage.stage import Stage
from eharqsim.system import (
    analytic_failure,
    fnr_sweep_system,
    optimal_operating_point,
    propagate_resource_distribution,
    simulate_system,
    total_score,
)
from eharqsim.system.sweep import FNR_EVAL
from eharqsim.utils.io import get_version, read_table, write_json, write_table
from eharqsim.utils.parse import quote_iterable
from eharqsim.utils.rng import Purpose, derive_seed

logger = logging.getLogger(__name__)

BASELINE = "regHARQ"
DEFAULT_SCENARIOS = ("medium-long", "medium-short", "high-long", "high-short")
RESULT_COLUMNS = (
    "scenario",
    "scheme",
    "fnr",
    "fpr",
    "p_pf",
    "marker",
    "diverged",
    "p_pf_sim",
    "p_pf_sim_ci_lo",
    "p_pf_sim_ci_hi",
)


def _by_tti(value, tti, what):
    if isinstance(value, dict):
        try:
            return value[tti]
        except KeyError:
            msg = f"The {what} has no entry for the {tti} TTI."
            raise ValueError(msg) from None
    return value


class SystemStage(Stage):
    """Evaluate the schemes in the scheduled multi-UE system."""

    name = "system evaluation"
    section = "system"
    options = (
        "curves",
        "binormal",
        "binormal_fnr",
        "p_e",
        "scenarios",
        "scenario_specs",
        "baseline",
        "simulate",
        "slots",
        "max_points",
        "fnr_eval",
        "trajectories",
        "parallel",
    )

    def __init__(self, experiment, **overrides):
        """Initialise the system stage and read the operating curves."""
        super().__init__(experiment, **overrides)
        specs = self.option("scenario_specs")
        names = self.option("scenarios", DEFAULT_SCENARIOS)
        if not names:
            msg = "No scenario is given in the system section."
            raise ValueError(msg)
        self.scenarios = [choose_scenario(name, specs) for name in names]
        self.p_e = self.option("p_e", 1e-3)
        self.curves = self._read_curves()
        if not self.curves:
            msg = (
                "No operating curve is given, set 'curves' or 'binormal' "
                "in the system section."
            )
            raise ValueError(msg)

        self.results = None
        self.scores = None

    def _read_curves(self):
        curves = {}
        for scheme, source in (self.option("curves") or {}).items():
            sources = source if isinstance(source, dict) else {None: source}
            curves[scheme] = {
                tti: CurveSet.from_frame(read_table(Path(path)))
                for tti, path in sources.items()
            }

        grid = np.logspace(-4, -1, 61)
        if (fnr := self.option("binormal_fnr")) is not None:
            grid = np.asarray(fnr, dtype=np.float64)
        for scheme, separation in (self.option("binormal") or {}).items():
            curves[scheme] = {None: binormal_curve(grid, float(separation))}

        return curves

    def _curve(self, scheme, tti):
        sources = self.curves[scheme]
        if None in sources:
            return sources[None]
        return _by_tti(sources, tti, f"curve of {scheme}")

    def describe(self):
        names = quote_iterable(s.name for s in self.scenarios)
        schemes = quote_iterable(self.curves)
        lines = [
            f"The scenarios are {names}.",
            f"The schemes are {schemes}.",
        ]
        if self.option("simulate", False):
            lines.append(
                f"The optimal points are simulated over "
                f"{self.option('slots', 100000)} slots."
            )
        return lines

    def report(self):
        lines = []
        for scheme, score in self.scores.items():
            lines.append(f"The total score of {scheme} is {score:.4f}.")
        return lines

    def _simulate(self, config, index):
        seed = derive_seed(self.seed, Purpose.SYSTEM, *index)
        result = simulate_system(
            config, self.option("slots", 100000), seed=seed
        )
        lo, hi = result.ci
        return {
            "p_pf_sim": result.p_pf,
            "p_pf_sim_ci_lo": lo,
            "p_pf_sim_ci_hi": hi,
        }

    def _trajectory(self, config, scenario, scheme):
        if not self.option("trajectories", True):
            return
        distribution = propagate_resource_distribution(config)
        file_path = self.out_path(f"trajectory_{scheme}_{scenario.name}.csv")
        self.emit(write_table(distribution.trajectory, file_path))

    def _empty_row(self, scenario, scheme):
        return {
            "scenario": scenario.name,
            "scheme": scheme,
            "fnr": np.nan,
            "fpr": np.nan,
            "p_pf": np.nan,
            "marker": "",
            "diverged": False,
            "p_pf_sim": np.nan,
            "p_pf_sim_ci_lo": np.nan,
            "p_pf_sim_ci_hi": np.nan,
        }

    def evaluate_baseline(self, scenario, index):
        """Return the regular HARQ row of a scenario."""
        p_e = _by_tti(self.p_e, scenario.tti, "block error probability")
        config = scenario.system_config(p_e, regular=True)
        p_pf, diverged = analytic_failure(config)

        row = self._empty_row(scenario, BASELINE)
        row |= {"fnr": 0.0, "fpr": 0.0, "p_pf": p_pf, "diverged": diverged}
        if diverged:
            row["marker"] = "diverged"
            logger.warning(
                f"The demand of regular HARQ diverges in {scenario}."
            )
        elif self.option("simulate", False):
            row |= self._simulate(config, (index, 0))

        self._trajectory(config, scenario, BASELINE)
        return row

    def evaluate_scheme(self, scenario, scheme, index):
        """Sweep a scheme in a scenario and return its optimal row."""
        p_e = _by_tti(self.p_e, scenario.tti, "block error probability")
        config = scenario.system_config(p_e)
        sweep = fnr_sweep_system(
            config,
            self._curve(scheme, scenario.tti),
            max_points=self.option("max_points", 200),
            parallel=self.option("parallel", True),
        )
        file_name = f"sweep_{scheme}_{scenario.name}.csv"
        self.emit(write_table(sweep, self.out_path(file_name)))

        row = self._empty_row(scenario, scheme)
        best = optimal_operating_point(
            sweep, self.option("fnr_eval", FNR_EVAL)
        )
        if best is None:
            row |= {"marker": "diverged", "diverged": True}
            logger.warning(
                f"The demand diverges at every operating point of "
                f"{scheme} in {scenario}."
            )
            return row

        row |= {
            "fnr": best["fnr"],
            "fpr": best["fpr"],
            "p_pf": best["p_pf_analytic"],
            "marker": best["marker"],
        }
        point = config.replace(fnr=best["fnr"], fpr=best["fpr"])
        if self.option("simulate", False):
            row |= self._simulate(point, index)

        self._trajectory(point, scenario, scheme)
        return row

    def run(self):
        """Write the sweeps, the result table and the total scores."""
        rows = []
        for i, scenario in enumerate(self.scenarios):
            if self.option("baseline", True):
                rows.append(self.evaluate_baseline(scenario, i))
            for j, scheme in enumerate(self.curves, start=1):
                rows.append(self.evaluate_scheme(scenario, scheme, (i, j)))

        self.results = pd.DataFrame(rows, columns=list(RESULT_COLUMNS))
        results_file = self.out_path("system_results.csv")
        self.emit(write_table(self.results, results_file))

        p_pf = self.results.pivot(
            index="scenario", columns="scheme", values="p_pf"
        )
        p_pf = p_pf.reindex(
            index=[s.name for s in self.scenarios],
            columns=list(dict.fromkeys(self.results["scheme"])),
        )
        self.emit(
            write_table(p_pf.reset_index(), self.out_path("p_pf_table.csv"))
        )

        scored = p_pf.dropna()
        if len(scored) < len(p_pf):
            dropped = quote_iterable(
                sorted(set(p_pf.index) - set(scored.index))
            )
            logger.warning(
                f"The scenario(s) {dropped} have no finite P_pf for every "
                "scheme and are left out of the total score."
            )
        if scored.empty:
            msg = "No scenario has a finite P_pf for every scheme."
            raise RuntimeError(msg)

        self.scores = total_score(scored)
        score_frame = self.scores.rename_axis("scheme").reset_index()
        self.emit(write_table(score_frame, self.out_path("total_score.csv")))

        self.emit(
            write_json(self.matrix(), self.out_path("scenario_matrix.json"))
        )
        return self.outputs

    def matrix(self):
        """Return the scenarios, their parameters and their results."""
        scenarios = {}
        for scenario in self.scenarios:
            p_e = _by_tti(self.p_e, scenario.tti, "block error probability")
            results = self.results[self.results["scenario"] == scenario.name]
            scenarios[scenario.name] = {
                "e_harq": scenario.system_config(p_e).to_dict(),
                "regular_harq": scenario.system_config(
                    p_e, regular=True
                ).to_dict(),
                "results": {
                    row["scheme"]: {
                        "fnr": float(row["fnr"]),
                        "fpr": float(row["fpr"]),
                        "p_pf": float(row["p_pf"]),
                        "marker": str(row["marker"]),
                        "diverged": bool(row["diverged"]),
                    }
                    for row in results.to_dict("records")
                },
            }

        return {
            "version": get_version(),
            "seed": self.seed,
            "scenarios": scenarios,
            "total_score": self.scores.to_dict(),
        }
