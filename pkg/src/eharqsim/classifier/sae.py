"""Supervised autoencoder for decodability prediction.

An autoencoder d -> 25 -> 10 -> 3 -> 10 -> 25 -> d is trained jointly
with a classifier head 3 -> 10 -> 5 -> 2 on the bottleneck. Every
hidden block is Linear, BatchNorm1d, ReLU and Dropout.
"""

import copy
import logging
from dataclasses import dataclass, field

import numpy as np
import torch
from torch import nn
from torch.nn import functional as F

from eharqsim.utils.model import PositiveNumber
from eharqsim.utils.rng import Purpose, derive_seed, substream

logger = logging.getLogger(__name__)

ENCODER_WIDTHS = (25, 10, 3)
HEAD_WIDTHS = (10, 5)


def _block(n_in, n_out, dropout):
    return nn.Sequential(
        nn.Linear(n_in, n_out),
        nn.BatchNorm1d(n_out),
        nn.ReLU(),
        nn.Dropout(dropout),
    )


class SupervisedAutoencoder(nn.Module):
    """Autoencoder with a classifier head on its bottleneck."""

    def __init__(self, n_features, dropout=0.2, *, zero_head=False):
        """Initialise the layers.

        Parameters
        ----------
        n_features : int
            the input dimension d
        dropout : float, optional
            the dropout rate of the hidden blocks. Default to 0.2.
        zero_head : bool, optional
            whether the last classifier layer starts at zero, which
            makes both classes equally likely. Default to False.

        """
        super().__init__()
        self.n_features = int(n_features)
        self.dropout = float(dropout)

        w1, w2, w3 = ENCODER_WIDTHS
        h1, h2 = HEAD_WIDTHS
        self.encoder = nn.Sequential(
            _block(n_features, w1, dropout),
            _block(w1, w2, dropout),
            _block(w2, w3, dropout),
        )
        self.decoder = nn.Sequential(
            _block(w3, w2, dropout),
            _block(w2, w1, dropout),
            nn.Linear(w1, n_features),
        )
        self.head = nn.Sequential(
            _block(w3, h1, dropout),
            _block(h1, h2, dropout),
            nn.Linear(h2, 2),
        )

        if zero_head:
            nn.init.zeros_(self.head[-1].weight)
            nn.init.zeros_(self.head[-1].bias)

    def forward(self, x):
        """Return the reconstruction and the class logits."""
        bottleneck = self.encoder(x)
        return self.decoder(bottleneck), self.head(bottleneck)


class SaeTrainConfig:
    """Hold the training settings of the supervised autoencoder."""

    learning_rate = PositiveNumber(float, strict=True)
    epochs = PositiveNumber(int, strict=True)
    batch_size = PositiveNumber(int, strict=True)
    oversampling = PositiveNumber(int, strict=True)
    lam_rec = PositiveNumber(float)
    dropout = PositiveNumber(float)
    patience = PositiveNumber(int, strict=True)
    seed = PositiveNumber(int)

    def __init__(
        self,
        learning_rate=1e-3,
        epochs=50,
        batch_size=256,
        oversampling=100,
        lam_rec=1.0,
        dropout=0.2,
        patience=5,
        seed=0,
    ):
        """Initialise the training settings.

        Parameters
        ----------
        learning_rate : float, optional
            the Adam learning rate. Default to 1e-3.
        epochs : int, optional
            the maximum number of epochs. Default to 50.
        batch_size : int, optional
            the mini-batch size. Default to 256.
        oversampling : int, optional
            how many times every minority sample appears per epoch.
            Default to 100.
        lam_rec : float, optional
            the weight of the reconstruction loss. Default to 1.0.
        dropout : float, optional
            the dropout rate. Default to 0.2.
        patience : int, optional
            the epochs without validation improvement before stopping.
            Default to 5.
        seed : int, optional
            the seed of initialisation, dropout and shuffling. Default
            to 0.

        """
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.batch_size = batch_size
        self.oversampling = oversampling
        self.lam_rec = lam_rec
        self.dropout = dropout
        self.patience = patience
        self.seed = seed

        if self.dropout >= 1:
            msg = f"The dropout rate must be below 1 ({self.dropout})."
            raise ValueError(msg)

    def to_dict(self):
        """Return the settings as a plain mapping."""
        return {
            "learning_rate": self.learning_rate,
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "oversampling": self.oversampling,
            "lam_rec": self.lam_rec,
            "dropout": self.dropout,
            "patience": self.patience,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, content):
        """Create the settings from a mapping."""
        return cls(**content)


@dataclass
class SaeModel:
    """Hold a trained supervised autoencoder and its training log."""

    module: SupervisedAutoencoder
    config: SaeTrainConfig
    history: list = field(default_factory=list)

    @property
    def n_features(self):
        """Return the input dimension."""
        return self.module.n_features

    def to_dict(self):
        """Return the layer widths and parameters as a plain mapping."""
        state = {
            name: tensor.detach().cpu().numpy().tolist()
            for name, tensor in self.module.state_dict().items()
        }
        return {
            "n_features": self.n_features,
            "encoder_widths": list(ENCODER_WIDTHS),
            "head_widths": list(HEAD_WIDTHS),
            "state": state,
        }

    @classmethod
    def from_dict(cls, content, config=None, history=None):
        """Create the model from to_dict output."""
        config = SaeTrainConfig() if config is None else config
        module = SupervisedAutoencoder(
            content["n_features"], dropout=config.dropout
        ).double()

        reference = module.state_dict()
        state = {
            name: torch.as_tensor(
                np.asarray(values), dtype=reference[name].dtype
            ).reshape(reference[name].shape)
            for name, values in content["state"].items()
        }
        module.load_state_dict(state)
        module.eval()
        return cls(module=module, config=config, history=history or [])


def _as_tensor(x, n_features):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != n_features:
        msg = (
            f"The input has shape {x.shape}, expected (n, {n_features})."
        )
        raise ValueError(msg)
    return torch.from_numpy(np.ascontiguousarray(x))


def joint_loss(module, x, labels, lam_rec):
    """Return the total, reconstruction and cross-entropy losses.

    The reconstruction loss is the mean over the batch of the squared
    Euclidean reconstruction error.
    """
    x_rec, logits = module(x)
    rec = ((x_rec - x) ** 2).sum(dim=1).mean()
    ce = F.cross_entropy(logits, labels)
    return lam_rec * rec + ce, rec, ce


def oversampled_index(labels, factor):
    """Return the sample indices of an epoch, minority repeated."""
    labels = np.asarray(labels)
    n_pos = int(np.count_nonzero(labels == 1))
    minority = 1 if n_pos <= labels.size - n_pos else 0
    extra = np.flatnonzero(labels == minority)
    return np.concatenate(
        [np.arange(labels.size), np.tile(extra, int(factor) - 1)]
    )


def _cross_entropy(module, x, labels):
    module.eval()
    with torch.no_grad():
        _, logits = module(x)
        return float(F.cross_entropy(logits, labels))


def init_sae(n_features, cfg=None):
    """Return an untrained model with seeded initial parameters."""
    cfg = SaeTrainConfig() if cfg is None else cfg
    torch.manual_seed(derive_seed(cfg.seed, Purpose.TRAINING, 0))
    module = SupervisedAutoencoder(n_features, dropout=cfg.dropout).double()
    module.eval()
    return SaeModel(module=module, config=cfg)


def fit_sae(x, labels, cfg=None, x_val=None, labels_val=None):
    """Train a supervised autoencoder.

    The joint loss lam_rec·|x - x_rec|² + cross-entropy is minimised by
    Adam. Minority samples are duplicated within every epoch before
    shuffling. With a validation split, training stops after `patience`
    epochs without improvement of the validation cross-entropy and the
    best parameters are kept.

    Parameters
    ----------
    x : array-like, shape (n, d)
        the scaled training features
    labels : array-like
        the 0/1 labels, both classes present
    cfg : SaeTrainConfig, optional
        the settings. Default to None, the default settings.
    x_val : array-like, optional
        the scaled validation features. Default to None.
    labels_val : array-like, optional
        the validation labels. Default to None.

    Returns
    -------
    SaeModel
        the trained model, in inference mode

    """
    cfg = SaeTrainConfig() if cfg is None else cfg
    labels = np.asarray(labels).astype(np.int64)
    n_pos = int(labels.sum())
    if n_pos == 0 or n_pos == labels.size:
        msg = "Both classes must be present to train the autoencoder."
        raise ValueError(msg)

    x = np.asarray(x, dtype=np.float64)
    xt = _as_tensor(x, x.shape[1] if x.ndim == 2 else -1)
    if xt.shape[0] != labels.size:
        msg = (
            f"There are {xt.shape[0]} feature rows but {labels.size} "
            "labels."
        )
        raise ValueError(msg)

    yt = torch.from_numpy(labels)

    module = init_sae(x.shape[1], cfg).module
    rng = substream(cfg.seed, Purpose.TRAINING, 1)
    optimizer = torch.optim.Adam(module.parameters(), lr=cfg.learning_rate)

    has_val = x_val is not None and labels_val is not None
    if has_val:
        xv = _as_tensor(x_val, x.shape[1])
        yv = torch.from_numpy(np.asarray(labels_val).astype(np.int64))

    history = [{"epoch": 0, "train_ce": _cross_entropy(module, xt, yt)}]
    best_val = np.inf
    best_state = None
    stale = 0
    epoch_index = oversampled_index(labels, cfg.oversampling)

    for epoch in range(1, cfg.epochs + 1):
        module.train()
        order = rng.permutation(epoch_index)
        sums = np.zeros(3)
        n_batches = 0

        for start in range(0, order.size, cfg.batch_size):
            batch = torch.from_numpy(order[start : start + cfg.batch_size])
            if batch.numel() < 2:
                # batch statistics need two samples
                continue

            optimizer.zero_grad()
            loss, rec, ce = joint_loss(
                module, xt[batch], yt[batch], cfg.lam_rec
            )
            if not torch.isfinite(loss):
                msg = (
                    f"The training loss became {float(loss)} at epoch "
                    f"{epoch}, batch {n_batches} (reconstruction "
                    f"{float(rec)}, cross-entropy {float(ce)})."
                )
                raise RuntimeError(msg)

            loss.backward()
            optimizer.step()
            sums += (float(loss), float(rec), float(ce))
            n_batches += 1

        means = sums / max(n_batches, 1)
        entry = {
            "epoch": epoch,
            "loss": means[0],
            "rec": means[1],
            "ce": means[2],
            "train_ce": _cross_entropy(module, xt, yt),
        }

        if has_val:
            val_ce = _cross_entropy(module, xv, yv)
            entry["val_ce"] = val_ce
            if val_ce < best_val:
                best_val = val_ce
                best_state = copy.deepcopy(module.state_dict())
                stale = 0
            else:
                stale += 1

        history.append(entry)
        logger.debug(f"SAE epoch {epoch}: {entry}")

        if has_val and stale >= cfg.patience:
            logger.info(
                f"The validation cross-entropy has not improved for "
                f"{stale} epochs, training stops at epoch {epoch}."
            )
            break

    if best_state is not None:
        module.load_state_dict(best_state)

    module.eval()
    return SaeModel(module=module, config=cfg, history=history)


def sae_forward(model, x, mode="infer"):
    """Run the autoencoder on inputs.

    Parameters
    ----------
    model : SaeModel
        the model
    x : array-like, shape (n, d) or (d,)
        the scaled features
    mode : str, optional
        "infer" uses running batch-norm statistics without dropout,
        "train" uses batch statistics and dropout and needs n >= 2.
        Default to "infer".

    Returns
    -------
    x_rec : numpy.ndarray
        the reconstruction, shape (n, d)
    probs : numpy.ndarray
        the probabilities of (no error, error), shape (n, 2)

    """
    xt = _as_tensor(x, model.n_features)
    module = model.module

    match mode:
        case "infer":
            module.eval()
        case "train":
            if xt.shape[0] < 2:
                msg = "The training mode needs at least two inputs."
                raise ValueError(msg)
            module.train()
        case _:
            msg = f"The mode '{mode}' is not supported."
            raise ValueError(msg)

    try:
        with torch.no_grad():
            x_rec, logits = module(xt)
            probs = F.softmax(logits, dim=1)
    finally:
        module.eval()

    return x_rec.numpy(), probs.numpy()


def sae_score(model, x):
    """Return the probability of a block error in inference mode."""
    _, probs = sae_forward(model, x, mode="infer")
    return probs[:, 1]


def loss_gradients(model, x, labels, lam_rec=None, scale=1.0):
    """Return the parameter gradients of the scaled joint loss.

    Batch-norm uses its running statistics and dropout is off.

    Parameters
    ----------
    model : SaeModel
        the model, left unchanged
    x : array-like, shape (n, d)
        the scaled features
    labels : array-like
        the 0/1 labels
    lam_rec : float, optional
        the reconstruction weight. Default to None, the model's own.
    scale : float, optional
        the factor applied to the loss. Default to 1.0.

    Returns
    -------
    dict
        parameter name -> gradient as numpy array

    """
    lam_rec = model.config.lam_rec if lam_rec is None else lam_rec
    module = copy.deepcopy(model.module).double().eval()
    xt = _as_tensor(x, model.n_features)
    yt = torch.from_numpy(np.asarray(labels).astype(np.int64))

    module.zero_grad()
    loss, _, _ = joint_loss(module, xt, yt, lam_rec)
    (scale * loss).backward()

    grads = {}
    for name, param in module.named_parameters():
        grad = param.grad
        if grad is None:
            grad = torch.zeros_like(param)
        grads[name] = grad.detach().numpy().copy()
    return grads


def gradient_check(model, x, labels, eps=1e-5, lam_rec=None, atol=1e-5):
    """Compare autograd gradients with central finite differences.

    The relative error of one parameter is |a - f| / max(|a|, |f|, atol)
    for the autograd value a and the finite difference f.

    Parameters
    ----------
    model : SaeModel
        the model, left unchanged
    x : array-like, shape (n, d)
        a nonempty batch of scaled features
    labels : array-like
        the 0/1 labels of the batch
    eps : float, optional
        the finite-difference step. Default to 1e-5.
    lam_rec : float, optional
        the reconstruction weight. Default to None, the model's own.
    atol : float, optional
        the floor of the denominator. Default to 1e-5.

    Returns
    -------
    float
        the maximum relative error over all parameters

    """
    lam_rec = model.config.lam_rec if lam_rec is None else lam_rec
    xt = _as_tensor(x, model.n_features)
    if xt.shape[0] == 0:
        msg = "The gradient check needs a nonempty batch."
        raise ValueError(msg)

    yt = torch.from_numpy(np.asarray(labels).astype(np.int64))
    analytic = loss_gradients(model, x, labels, lam_rec)
    if not all(np.isfinite(g).all() for g in analytic.values()):
        msg = "The autograd gradients contain non-finite values."
        raise RuntimeError(msg)

    module = copy.deepcopy(model.module).double().eval()
    worst = 0.0

    with torch.no_grad():
        for name, param in module.named_parameters():
            flat = param.view(-1)
            grad = analytic[name].reshape(-1)
            for k in range(flat.numel()):
                original = float(flat[k])
                flat[k] = original + eps
                plus = float(joint_loss(module, xt, yt, lam_rec)[0])
                flat[k] = original - eps
                minus = float(joint_loss(module, xt, yt, lam_rec)[0])
                flat[k] = original

                numeric = (plus - minus) / (2 * eps)
                denom = max(abs(grad[k]), abs(numeric), atol)
                worst = max(worst, abs(grad[k] - numeric) / denom)

    return worst
