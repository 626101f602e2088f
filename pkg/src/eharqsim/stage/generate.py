import logging

from eharqsim.channel import (
    ChannelConfig,
    GenerationConfig,
    calibrate_snr,
    generate_dataset,
    load_code,
)
from eharqsim.channel.dataset import summary_path
from eharqsim.stage.stage import Stage
from eharqsim.utils.io import get_version, write_json
from eharqsim.utils.rng import Purpose, derive_seed

logger = logging.getLogger(__name__)

SPLITS = ("train", "val", "test")


class GenerateStage(Stage):
    """Generate the train, validation and test records."""

    name = "generation"
    section = "generate"
    options = (
        "n",
        "n_train",
        "n_val",
        "n_test",
        "snr_db",
        "target_bler",
        "calibration_trials",
        "modulation",
        "fading",
        "code",
        "subcode_fraction",
        "vnr_iters",
        "full_decode_iters",
        "scaling",
        "parallel",
    )

    def __init__(self, experiment, **overrides):
        """Initialise the generation stage and load the code."""
        super().__init__(experiment, **overrides)
        self.code = load_code(self.option("code"))
        self.snr_db = self.option("snr_db")
        self.split_sizes = {
            split: int(self.option(f"n_{split}", self.option("n", 100_000)))
            for split in SPLITS
        }
        self.summaries = {}

    def describe(self):
        lines = [
            f"The code has {self.code.n_vars} variables and "
            f"{self.code.n_checks} checks.",
        ]
        for split, n in self.split_sizes.items():
            lines.append(f"The {split} split has {n} records.")
        return lines

    def report(self):
        lines = [f"The SNR is {self.snr_db:.4f} dB."]
        for split, summary in self.summaries.items():
            lines.append(
                f"The {split} BLER is {summary['bler']:.3e} "
                f"[{summary['bler_ci_lo']:.3e}, {summary['bler_ci_hi']:.3e}]."
            )
        return lines

    def calibrate(self):
        """Return the SNR, calibrated to the target BLER if not given."""
        if self.snr_db is not None:
            return float(self.snr_db)

        target = float(self.option("target_bler", 3e-3))
        logger.info(f"Calibrating the SNR to a BLER of {target:.3e}...")
        return calibrate_snr(
            self.code,
            target,
            modulation=self.option("modulation", "QPSK"),
            max_trials=int(self.option("calibration_trials", 100_000)),
            seed=derive_seed(self.seed, Purpose.BLER, 0),
            parallel=self.option("parallel", True),
        )

    def generation_config(self, split, snr_db):
        """Return the settings of one split, its seed disjoint."""
        index = SPLITS.index(split)
        seed = derive_seed(self.seed, Purpose.SPLIT, index)
        channel = ChannelConfig(
            snr_db,
            modulation=self.option("modulation", "QPSK"),
            fading=self.option("fading"),
            seed=seed,
        )
        return GenerationConfig(
            channel,
            code=self.code,
            subcode_fraction=self.option("subcode_fraction", 5 / 6),
            vnr_iters=self.option("vnr_iters", 5),
            full_decode_iters=self.option("full_decode_iters", 50),
            n_records=self.split_sizes[split],
            seed=seed,
            scaling=self.option("scaling", 1.0),
        )

    def run(self):
        """Write a CSV and a summary per split, then the run summary."""
        self.snr_db = self.calibrate()

        for split in SPLITS:
            cfg = self.generation_config(split, self.snr_db)
            out_file = self.out_path(f"{split}.csv")
            _, summary = generate_dataset(
                cfg, out_file, parallel=self.option("parallel", True)
            )
            self.emit(out_file)
            self.emit(summary_path(out_file))
            self.summaries[split] = summary

        content = {
            "version": get_version(),
            "seed": self.seed,
            "snr_db": self.snr_db,
            "calibrated": self.option("snr_db") is None,
            "target_bler": self.option("target_bler", 3e-3),
            "splits": {
                split: {
                    k: summary[k]
                    for k in (
                        "n_records",
                        "n_errors",
                        "bler",
                        "bler_ci_lo",
                        "bler_ci_hi",
                    )
                }
                for split, summary in self.summaries.items()
            },
        }
        self.emit(write_json(content, self.out_path("generate_summary.json")))
        return self.outputs
