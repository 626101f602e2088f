import logging
from dataclasses import dataclass, field

import numpy as np

from eharqsim.classifier.logistic import (
    LrModel,
    fit_logistic_regression,
    lr_score,
)
from eharqsim.classifier.sae import (
    SaeModel,
    SaeTrainConfig,
    fit_sae,
    sae_score,
)
from eharqsim.classifier.scaler import FeatureScaler, apply_scaler, fit_scaler
from eharqsim.classifier.threshold import (
    HARD_THRESHOLD_FEATURES,
    hard_threshold_score,
)
from eharqsim.utils.parse import quote_iterable

logger = logging.getLogger(__name__)

KINDS = ("HT0", "HT5", "LR", "SAE")
LABEL_COLUMN = "label"


def vnr_columns(records):
    """Return the VNR columns of a record table in iteration order."""
    columns = [c for c in records.columns if c.startswith("vnr_")]
    return sorted(columns, key=lambda c: int(c.split("_")[1]))


def complete_rows(records, features):
    """Return the records having every feature, e.g. a full history."""
    missing = [f for f in features if f not in records.columns]
    if missing:
        msg = f"The records lack the column(s) {quote_iterable(missing)}."
        raise ValueError(msg)

    complete = records.dropna(subset=list(features))
    n_dropped = len(records) - len(complete)
    if n_dropped:
        logger.info(
            f"{n_dropped} record(s) without a complete feature set are "
            "skipped."
        )
    return complete


def _labels(records):
    if LABEL_COLUMN not in records.columns:
        msg = f"The records have no '{LABEL_COLUMN}' column."
        raise ValueError(msg)
    return records[LABEL_COLUMN].to_numpy(dtype=np.int64)


@dataclass
class TrainedClassifier:
    """Bundle a decodability predictor with its input preparation.

    Attributes
    ----------
    kind : str
        one of HT0, HT5, LR, SAE
    features : tuple of str
        the input columns, in order
    scaler : FeatureScaler or None
        the training-split scaler of LR and SAE
    model : LrModel, SaeModel or None
        the fitted parameters, None for a hard threshold
    training : dict
        the convergence report or the per-epoch loss log

    """

    kind: str
    features: tuple
    scaler: FeatureScaler | None = None
    model: object = None
    training: dict = field(default_factory=dict)

    def score(self, records):
        """Return the block-error score of every record.

        Parameters
        ----------
        records : pandas.DataFrame
            the records, with at least the feature columns

        Returns
        -------
        numpy.ndarray
            the scores, higher means a block error is more likely

        """
        match self.kind:
            case "HT0" | "HT5":
                scores = hard_threshold_score(records, self.kind)
                return np.atleast_1d(scores)
            case "LR":
                return lr_score(self.model, apply_scaler(self.scaler, records))
            case "SAE":
                return sae_score(
                    self.model, apply_scaler(self.scaler, records)
                )
            case _:
                msg = f"The classifier kind '{self.kind}' is not supported."
                raise ValueError(msg)

    def to_dict(self):
        """Return the classifier as a plain mapping."""
        content = {
            "kind": self.kind,
            "features": list(self.features),
            "scaler": None,
            "params": None,
            "config": None,
            "training": self.training,
        }
        if self.scaler is not None:
            content["scaler"] = self.scaler.to_dict()

        match self.model:
            case LrModel():
                content["params"] = self.model.to_dict()
            case SaeModel():
                content["params"] = self.model.to_dict()
                content["config"] = self.model.config.to_dict()

        return content

    @classmethod
    def from_dict(cls, content):
        """Create the classifier from to_dict output."""
        kind = str(content["kind"]).upper()
        scaler = content.get("scaler")
        if scaler is not None:
            scaler = FeatureScaler.from_dict(scaler)

        training = content.get("training") or {}
        match kind:
            case "HT0" | "HT5":
                model = None
            case "LR":
                model = LrModel.from_dict(content["params"])
            case "SAE":
                config = SaeTrainConfig.from_dict(content["config"])
                model = SaeModel.from_dict(
                    content["params"],
                    config=config,
                    history=training.get("epochs"),
                )
            case _:
                msg = f"The classifier kind '{kind}' is not supported."
                raise ValueError(msg)

        return cls(
            kind=kind,
            features=tuple(content["features"]),
            scaler=scaler,
            model=model,
            training=training,
        )


def train_classifier(
    kind,
    train,
    features=None,
    validation=None,
    l2=1.0,
    tolerance=1e-8,
    sae_config=None,
):
    """Train a decodability predictor on a record table.

    Parameters
    ----------
    kind : str
        one of HT0, HT5, LR, SAE
    train : pandas.DataFrame
        the training records, with a label column
    features : sequence of str, optional
        the input columns of LR and SAE. Default to None, every VNR
        column.
    validation : pandas.DataFrame, optional
        the validation records for early stopping of SAE. Default to
        None.
    l2 : float, optional
        the regularisation strength of LR. Default to 1.0.
    tolerance : float, optional
        the gradient tolerance of LR. Default to 1e-8.
    sae_config : SaeTrainConfig, optional
        the SAE settings. Default to None, the default settings.

    Returns
    -------
    TrainedClassifier
        the trained classifier

    """
    kind = str(kind).upper()
    if kind not in KINDS:
        msg = (
            f"The classifier kind '{kind}' is not supported, choose from "
            f"{quote_iterable(KINDS)}."
        )
        raise ValueError(msg)

    if kind in HARD_THRESHOLD_FEATURES:
        feature = HARD_THRESHOLD_FEATURES[kind]
        complete_rows(train, [feature])
        return TrainedClassifier(
            kind=kind,
            features=(feature,),
            training={"report": "pass-through, no parameters"},
        )

    features = tuple(vnr_columns(train) if features is None else features)
    if not features:
        msg = "No input feature is given for the classifier."
        raise ValueError(msg)

    train = complete_rows(train, features)
    labels = _labels(train)
    scaler = fit_scaler(train, features)
    x = apply_scaler(scaler, train)

    if kind == "LR":
        model = fit_logistic_regression(
            x, labels, l2=l2, tolerance=tolerance
        )
        training = {
            "converged": model.converged,
            "iterations": model.iterations,
            "grad_norm": model.grad_norm,
        }
    else:
        x_val = labels_val = None
        if validation is not None:
            validation = complete_rows(validation, features)
            x_val = apply_scaler(scaler, validation)
            labels_val = _labels(validation)

        model = fit_sae(x, labels, sae_config, x_val, labels_val)
        training = {"epochs": model.history}

    return TrainedClassifier(
        kind=kind,
        features=features,
        scaler=scaler,
        model=model,
        training=training,
    )
