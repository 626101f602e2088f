"""Modulation, channel realisation and LLR demodulation.

Symbols have unit energy. A bit 1 maps to a positive amplitude, so the
channel LLR log P(b=1|y)/P(b=0|y) is positive for a likely 1.
"""

from dataclasses import dataclass

import numpy as np

from eharqsim.utils.model import Choice, FiniteNumber, FixedValue


class BlockFading:
    """First-order autoregressive Rayleigh gain, constant per codeword.

    The complex gain follows h_t = rho·h_(t-1) + sqrt(1-rho²)·w_t with
    w_t circularly symmetric unit Gaussian, and the receiver knows |h_t|.
    """

    rho = FixedValue()

    def __init__(self, rho=0.99):
        """Initialise the fading model.

        Parameters
        ----------
        rho : float, optional
            the correlation between successive codewords, in [0, 1).
            Default to 0.99.

        """
        rho = float(rho)
        if not 0 <= rho < 1:
            msg = f"The fading correlation must be in [0, 1) ({rho})."
            raise ValueError(msg)
        self.rho = rho

    def gains(self, n_blocks, rng):
        """Draw the gain magnitudes of successive codewords.

        Parameters
        ----------
        n_blocks : int
            the number of codewords
        rng : numpy.random.Generator
            the generator

        Returns
        -------
        the gains |h_t|, shape (n_blocks,)

        """
        innovation = (
            rng.standard_normal(n_blocks) + 1j * rng.standard_normal(n_blocks)
        ) / np.sqrt(2)

        h = np.empty(n_blocks, dtype=np.complex128)
        state = innovation[0] if n_blocks else 0
        scale = np.sqrt(1 - self.rho**2)
        for t in range(n_blocks):
            if t:
                state = self.rho * state + scale * innovation[t]
            h[t] = state

        return np.abs(h)

    def __repr__(self):
        return f"{type(self).__name__}(rho={self.rho})"


class ChannelConfig:
    """Hold the channel settings."""

    snr_db = FiniteNumber()
    modulation = Choice("BPSK", "QPSK")
    fading = FixedValue()
    seed = FixedValue()

    def __init__(self, snr_db, modulation="QPSK", fading=None, seed=0):
        """Initialise the channel settings.

        Parameters
        ----------
        snr_db : float
            the symbol energy to noise density ratio Es/N0, in dB
        modulation : str, optional
            "BPSK" or "QPSK" (Gray mapped). Default to "QPSK".
        fading : BlockFading, float or None, optional
            the block fading model, a float is taken as its
            correlation. Default to None, pure AWGN.
        seed : int, optional
            the seed used when the channel is driven on its own.
            Default to 0.

        """
        self.snr_db = snr_db
        self.modulation = modulation

        if fading is not None and not isinstance(fading, BlockFading):
            fading = BlockFading(fading)
        self.fading = fading
        self.seed = int(seed)

    @property
    def n0(self):
        """Return the noise density for unit symbol energy."""
        return 10 ** (-self.snr_db / 10)

    @property
    def amplitude(self):
        """Return the amplitude per real dimension."""
        return 1.0 if self.modulation == "BPSK" else np.sqrt(0.5)

    def to_dict(self):
        """Return the settings as a plain mapping."""
        return {
            "snr_db": self.snr_db,
            "modulation": self.modulation,
            "fading": None if self.fading is None else self.fading.rho,
            "seed": self.seed,
        }

    def __repr__(self):
        cls_name = type(self).__name__
        return (
            f"{cls_name}(snr_db={self.snr_db}, "
            f"modulation='{self.modulation}', fading={self.fading!r})"
        )


@dataclass(frozen=True)
class ReceivedWord:
    """Hold one received codeword."""

    channel_llrs: np.ndarray
    tx_symbols: np.ndarray
    rx_symbols: np.ndarray
    block_gain: float


def modulate(codeword, modulation):
    """Map bits to unit-energy symbols.

    Parameters
    ----------
    codeword : array-like of 0/1
        the bits
    modulation : str
        "BPSK" or "QPSK"

    Returns
    -------
    the complex symbols

    """
    amplitude = 2.0 * np.asarray(codeword, dtype=np.float64) - 1.0

    match modulation:
        case "BPSK":
            return amplitude.astype(np.complex128)
        case "QPSK":
            if amplitude.size % 2:
                msg = (
                    f"QPSK needs an even number of bits, got "
                    f"{amplitude.size}."
                )
                raise ValueError(msg)
            return (amplitude[0::2] + 1j * amplitude[1::2]) / np.sqrt(2)
        case _:
            msg = f"The modulation '{modulation}' is not supported."
            raise ValueError(msg)


def demodulate(rx_symbols, gain, cfg):
    """Compute the exact per-bit LLRs of received symbols.

    For both mappings every bit sits on its own real dimension, so the
    LLR is 2·g·a·y/sigma² with amplitude a and sigma² = N0/2, i.e.
    4·g·y/N0 for BPSK.

    Parameters
    ----------
    rx_symbols : numpy.ndarray
        the received complex symbols
    gain : float
        the channel gain known to the receiver
    cfg : ChannelConfig
        the channel settings

    Returns
    -------
    the LLRs, one per bit

    """
    if cfg.modulation == "BPSK":
        y = rx_symbols.real
    else:
        y = np.empty(2 * rx_symbols.size)
        y[0::2] = rx_symbols.real
        y[1::2] = rx_symbols.imag

    return 4.0 * gain * cfg.amplitude * y / cfg.n0


def transmit(codeword, cfg, stream, gain=None):
    """Send a codeword through the channel.

    Parameters
    ----------
    codeword : array-like of 0/1
        the bits
    cfg : ChannelConfig
        the channel settings
    stream : numpy.random.Generator
        the generator of this codeword
    gain : float, optional
        the block gain. Default to None, 1 without fading, otherwise a
        Rayleigh draw from the stream.

    Returns
    -------
    ReceivedWord
        the received word

    """
    tx = modulate(codeword, cfg.modulation)

    if gain is None:
        if cfg.fading is None:
            gain = 1.0
        else:
            gain = float(np.abs(stream.normal() + 1j * stream.normal()))
            gain /= np.sqrt(2)

    sigma = np.sqrt(cfg.n0 / 2)
    noise = sigma * stream.standard_normal(tx.size)
    if cfg.modulation == "QPSK":
        noise = noise + 1j * sigma * stream.standard_normal(tx.size)

    rx = gain * tx + noise
    llrs = demodulate(rx, gain, cfg)

    return ReceivedWord(
        channel_llrs=llrs,
        tx_symbols=tx,
        rx_symbols=rx,
        block_gain=float(gain),
    )
