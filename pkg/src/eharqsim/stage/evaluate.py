from eharqsim.classifier import complete_rows, load_classifier
from eharqsim.classifier.classifier import LABEL_COLUMN
from eharqsim.features import with_history
from eharqsim.metrics import (
    curve_summary,
    pr_curve_and_auc,
    threshold_for_target_fnr,
)
from eharqsim.stage.stage import Stage
from eharqsim.utils.io import get_version, read_table, write_json, write_table
from eharqsim.utils.model import FilePath

FNR_TARGETS = (1e-2, 1e-3, 8e-4)


class EvalStage(Stage):
    """Score a test dataset and emit the operating curves."""

    name = "evaluation"
    section = "eval"
    options = ("model", "dataset", "name", "targets")
    model = FilePath(must_exist=True)
    dataset = FilePath(must_exist=True)

    def __init__(self, experiment, **overrides):
        """Initialise the evaluation stage and check its inputs."""
        super().__init__(experiment, **overrides)
        self.model = self.option("model", self.out_path("model_lr.json"))
        self.dataset = self.option("dataset", self.out_path("test.csv"))
        self.classifier = load_classifier(self.model)
        self.label = str(self.option("name", self.classifier.kind.lower()))
        self.curve = None

    def describe(self):
        return [
            f"The {self.classifier.kind} model is read from '{self.model}'.",
            f"The test records are read from '{self.dataset}'.",
        ]

    def report(self):
        flagged = sum(p.low_confidence for p in self.curve.points)
        return [
            f"The AUC-PR of {self.label} is {self.curve.auc_pr:.6f}.",
            f"{len(self.curve)} operating points, {flagged} of them with "
            "fewer than 100 block errors.",
        ]

    def run(self):
        """Write the curve CSV and the summary JSON."""
        features = self.classifier.features
        records = with_history(read_table(self.dataset), features)
        records = complete_rows(records, features)

        scores = self.classifier.score(records)
        labels = records[LABEL_COLUMN].to_numpy(dtype="int64")
        self.curve = pr_curve_and_auc(scores, labels)

        targets = self.option("targets", FNR_TARGETS)
        summary = curve_summary(self.curve, self.label)
        summary |= {
            "version": get_version(),
            "kind": self.classifier.kind,
            "dataset": self.dataset.name,
            "n_records": len(records),
            "targets": [
                threshold_for_target_fnr(self.curve, t).to_dict()
                | {"fnr_target": t}
                for t in targets
            ],
        }

        curve_file = self.out_path(f"curves_{self.label}.csv")
        self.emit(write_table(self.curve.to_frame(), curve_file))
        self.emit(
            write_json(summary, self.out_path(f"eval_{self.label}.json"))
        )
        return self.outputs
