import numpy as np
import pandas as pd
import pytest

from eharqsim.classifier import (
    SaeTrainConfig,
    TrainedClassifier,
    complete_rows,
    train_classifier,
    vnr_columns,
)


class TestVnrColumns:
    def test_numeric_order(self):
        frame = pd.DataFrame(columns=["vnr_10", "label", "vnr_2", "vnr_0"])

        assert vnr_columns(frame) == ["vnr_0", "vnr_2", "vnr_10"]


class TestCompleteRows:
    def test_drops_incomplete(self):
        frame = pd.DataFrame({"a": [1.0, np.nan, 3.0], "b": [1, 2, 3]})

        assert complete_rows(frame, ["a"])["b"].tolist() == [1, 3]

    def test_missing_column(self):
        with pytest.raises(ValueError, match="'c'"):
            complete_rows(pd.DataFrame({"a": [1]}), ["a", "c"])


class TestTrainClassifier:
    @pytest.mark.parametrize(
        ("kind", "column"), [("HT0", "vnr_0"), ("ht5", "vnr_5")]
    )
    def test_hard_threshold(self, records, kind, column):
        classifier = train_classifier(kind, records)

        assert classifier.features == (column,)
        assert classifier.model is None
        assert classifier.score(records).tolist() == records[column].tolist()

    def test_logistic(self, records):
        classifier = train_classifier("LR", records)
        scores = classifier.score(records)
        labels = records["label"].to_numpy()

        assert classifier.features == tuple(f"vnr_{j}" for j in range(6))
        assert classifier.training["converged"]
        assert ((scores > 0) & (scores < 1)).all()
        assert scores[labels == 1].min() > scores[labels == 0].max()

    def test_sae(self, records):
        cfg = SaeTrainConfig(epochs=2, batch_size=64, oversampling=2)
        classifier = train_classifier(
            "SAE",
            records.iloc[:300],
            features=["vnr_0", "vnr_5", "eucd"],
            validation=records.iloc[300:],
            sae_config=cfg,
        )

        assert classifier.score(records).shape == (len(records),)
        assert len(classifier.training["epochs"]) == 3

    def test_unknown_kind(self, records):
        with pytest.raises(ValueError, match="'SVM' is not supported"):
            train_classifier("svm", records)

    def test_no_feature(self, records):
        with pytest.raises(ValueError, match="No input feature"):
            train_classifier("LR", records[["label", "eucd"]])

    def test_no_label(self, records):
        with pytest.raises(ValueError, match="no 'label' column"):
            train_classifier("LR", records.drop(columns="label"))


class TestTrainedClassifier:
    def test_round_trip_logistic(self, records):
        classifier = train_classifier("LR", records, features=["vnr_2"])
        restored = TrainedClassifier.from_dict(classifier.to_dict())

        assert restored.score(records) == pytest.approx(
            classifier.score(records)
        )

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="not supported"):
            TrainedClassifier("RF", ("vnr_0",)).score(pd.DataFrame())
