import logging

import pandas as pd

from eharqsim.classifier import (
    KINDS,
    SaeTrainConfig,
    apply_scaler,
    complete_rows,
    fit_scaler,
    gradient_check,
    init_sae,
    save_classifier,
    train_classifier,
    vnr_columns,
)
from eharqsim.classifier.classifier import LABEL_COLUMN
from eharqsim.features import history_feature_names, with_history
from eharqsim.stage.stage import Stage
from eharqsim.utils.io import get_version, read_table, write_json, write_table
from eharqsim.utils.model import Choice, FilePath
from eharqsim.utils.rng import Purpose, derive_seed

logger = logging.getLogger(__name__)

GRADCHECK_TOLERANCE = 1e-4


def require_both_classes(records, what="dataset"):
    """Raise ValueError unless both labels occur in the records."""
    labels = records[LABEL_COLUMN]
    n_pos = int(labels.sum())
    if n_pos in (0, len(labels)):
        msg = (
            f"The {what} must contain both classes ({n_pos} block errors "
            f"out of {len(labels)} records)."
        )
        raise ValueError(msg)


class TrainStage(Stage):
    """Train one decodability predictor on a generated dataset."""

    name = "training"
    section = "train"
    options = (
        "dataset",
        "val",
        "classifier",
        "features",
        "history",
        "l2",
        "tolerance",
        "sae",
        "gradcheck",
        "gradcheck_rows",
    )
    dataset = FilePath(must_exist=True)
    val = FilePath(undefined_ok=True, must_exist=True)
    kind = Choice(*KINDS)

    def __init__(self, experiment, **overrides):
        """Initialise the training stage and check its inputs."""
        super().__init__(experiment, **overrides)
        self.dataset = self.option("dataset", self.out_path("train.csv"))
        self.kind = self.option("classifier", "LR")

        val = self.option("val")
        if val is None and self.out_path("val.csv").is_file():
            val = self.out_path("val.csv")
        self.val = val if self.kind == "SAE" else None

        sae = dict(self.option("sae") or {})
        sae.setdefault("seed", derive_seed(self.seed, Purpose.TRAINING, 0))
        self.sae_config = SaeTrainConfig(**sae)

        self.classifier = None
        self.max_rel_error = None

    def describe(self):
        lines = [
            f"The classifier is {self.kind}.",
            f"The training records are read from '{self.dataset}'.",
        ]
        if self.val is not None:
            lines.append(f"The validation records are read from '{self.val}'.")
        return lines

    def report(self):
        lines = [
            "The input features are "
            f"{', '.join(self.classifier.features)}.",
        ]
        if self.max_rel_error is not None:
            lines.append(
                "The maximum relative gradient error is "
                f"{self.max_rel_error:.3e}."
            )
        return lines

    def features(self, records):
        """Return the input features of LR and SAE."""
        features = self.option("features")
        if features is not None:
            return list(features)

        vnr = vnr_columns(records)
        if not self.option("history", False):
            return vnr
        return vnr + history_feature_names([*vnr, "eucd"])

    def check_gradients(self, train, features):
        """Compare autograd and finite differences on the initial model."""
        rows = int(self.option("gradcheck_rows", 16))
        train = complete_rows(train, features)
        scaler = fit_scaler(train, features)
        batch = train.iloc[:rows]
        x = apply_scaler(scaler, batch)
        model = init_sae(len(features), self.sae_config)

        worst = gradient_check(
            model, x, batch[LABEL_COLUMN].to_numpy(dtype="int64")
        )
        if worst >= GRADCHECK_TOLERANCE:
            logger.warning(
                f"The maximum relative gradient error {worst:.3e} exceeds "
                f"{GRADCHECK_TOLERANCE:.0e}."
            )
        return worst

    def run(self):
        """Train, then write the model and its training log."""
        train = read_table(self.dataset)
        features = None
        if self.kind in ("LR", "SAE"):
            features = self.features(train)
            train = with_history(train, features)
            require_both_classes(complete_rows(train, features))
        else:
            require_both_classes(train)

        validation = None
        if self.val is not None:
            validation = with_history(read_table(self.val), features)

        if self.option("gradcheck", False):
            if self.kind == "SAE":
                self.max_rel_error = self.check_gradients(train, features)
            else:
                logger.warning(
                    f"The gradient check only applies to SAE, not "
                    f"{self.kind}."
                )

        self.classifier = train_classifier(
            self.kind,
            train,
            features=features,
            validation=validation,
            l2=self.option("l2", 1.0),
            tolerance=self.option("tolerance", 1e-8),
            sae_config=self.sae_config,
        )

        stem = self.kind.lower()
        model_file = self.out_path(f"model_{stem}.json")
        self.emit(save_classifier(self.classifier, model_file))

        content = {
            "version": get_version(),
            "kind": self.kind,
            "dataset": self.dataset.name,
            "features": list(self.classifier.features),
            "training": self.classifier.training,
            "gradcheck_max_rel_error": self.max_rel_error,
        }
        if self.kind == "SAE":
            content.pop("training")
            log = pd.DataFrame(self.classifier.training["epochs"])
            self.emit(write_table(log, self.out_path(f"train_{stem}_log.csv")))

        self.emit(write_json(content, self.out_path(f"train_{stem}.json")))
        return self.outputs
