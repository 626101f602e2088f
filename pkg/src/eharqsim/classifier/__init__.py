from eharqsim.classifier.classifier import (
    KINDS,
    TrainedClassifier,
    complete_rows,
    train_classifier,
    vnr_columns,
)
from eharqsim.classifier.logistic import (
    LrModel,
    fit_logistic_regression,
    lr_score,
)
from eharqsim.classifier.model_io import load_classifier, save_classifier
from eharqsim.classifier.sae import (
    SaeModel,
    SaeTrainConfig,
    SupervisedAutoencoder,
    fit_sae,
    gradient_check,
    init_sae,
    loss_gradients,
    sae_forward,
    sae_score,
)
from eharqsim.classifier.scaler import FeatureScaler, apply_scaler, fit_scaler
from eharqsim.classifier.threshold import hard_threshold_score
