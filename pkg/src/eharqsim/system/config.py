from eharqsim.utils.model import PositiveNumber, Probability


class SystemConfig:
    """Hold the parameters of a finite-resource scheduled system.

    Times are counted in slots (TTIs). A transmission counts if it is
    served at an offset of at most t_c - 1 slots from the arrival of its
    packet, and a NACK makes the packet eligible again t_rtt slots after
    it was served.
    """

    n_ue = PositiveNumber(int, strict=True)
    p_arrival = Probability()
    n_res = PositiveNumber(int, strict=True)
    t_c = PositiveNumber(int, strict=True)
    t_rtt = PositiveNumber(int, strict=True)
    n_retx = PositiveNumber(int)
    p_e = Probability()
    fnr = Probability()
    fpr = Probability()

    def __init__(
        self,
        n_ue=20,
        p_arrival=0.3,
        n_res=10,
        t_c=3,
        t_rtt=1,
        n_retx=None,
        p_e=1e-3,
        fnr=0.0,
        fpr=0.0,
    ):
        """Initialise the system parameters.

        Parameters
        ----------
        n_ue : int, optional
            the number of UEs. Default to 20.
        p_arrival : float, optional
            the probability that a UE has a new packet in a slot.
            Default to 0.3.
        n_res : int, optional
            the number of resources per slot. Default to 10.
        t_c : int, optional
            the latency constraint in slots. Default to 3.
        t_rtt : int, optional
            the HARQ round trip time in slots. Default to 1.
        n_retx : int, optional
            the retransmission budget. Default to None, the largest n
            with t_c > n·t_rtt.
        p_e : float, optional
            the block error probability of every transmission. Default
            to 1e-3.
        fnr : float, optional
            the false negative rate of the feedback predictor. Default
            to 0.
        fpr : float, optional
            the false positive rate of the feedback predictor. Default
            to 0.

        """
        self.n_ue = n_ue
        self.p_arrival = p_arrival
        self.n_res = n_res
        self.t_c = t_c
        self.t_rtt = t_rtt
        if n_retx is None:
            n_retx = (self.t_c - 1) // self.t_rtt
        self.n_retx = n_retx
        self.p_e = p_e
        self.fnr = fnr
        self.fpr = fpr

    @property
    def p_r(self):
        """Return the probability that a transmission is repeated."""
        return (1 - self.fnr) * self.p_e + self.fpr * (1 - self.p_e)

    @property
    def mean_arrivals(self):
        return self.n_ue * self.p_arrival

    def replace(self, **changes):
        """Return a copy with some parameters changed.

        A changed t_c or t_rtt resets a budget that was left to its
        default.
        """
        content = self.to_dict()
        default_budget = (self.t_c - 1) // self.t_rtt
        if {"t_c", "t_rtt"} & changes.keys() and self.n_retx == default_budget:
            content["n_retx"] = None
        content.update(changes)
        return type(self)(**content)

    def key(self):
        """Return a hashable key of the parameters."""
        return tuple(self.to_dict().values())

    def to_dict(self):
        """Return the parameters as a plain mapping."""
        return {
            "n_ue": self.n_ue,
            "p_arrival": self.p_arrival,
            "n_res": self.n_res,
            "t_c": self.t_c,
            "t_rtt": self.t_rtt,
            "n_retx": self.n_retx,
            "p_e": self.p_e,
            "fnr": self.fnr,
            "fpr": self.fpr,
        }

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.to_dict().items())
        return f"{type(self).__name__}({args})"
