from pathlib import Path

import yaml

from eharqsim.system.config import SystemConfig
from eharqsim.utils.parse import quote_iterable

SPECS_DIR = Path(__file__).parent / "specs"
LOADS = ("medium", "high")
TTIS = ("long", "short")
REQUIRED = ("n_ue", "n_res", "p_arrival", "t_c", "t_rtt", "t_rtt_regular")


class LayeredDict(dict):
    """A dictionary where later layers override scalars.

    Lists are extended and mappings merged instead.
    """

    def __ior__(self, other):
        for k, v in other.items():
            original = self.get(k)

            if isinstance(original, list):
                self[k] = [*original, *list(v)]
            elif isinstance(original, dict) and isinstance(v, dict):
                merged = LayeredDict(original)
                merged |= v
                self[k] = dict(merged)
            else:
                self[k] = v
        return self

    def __or__(self, other):
        if not isinstance(other, dict):
            return NotImplemented

        new = LayeredDict(self)
        new |= other
        return new


class SpecsAccumulator:
    """A descriptor layering YAML specifications in assignment order."""

    def __init__(self):
        """Initialise the name of descriptor as "specs"."""
        self.name = "specs"

    def __get__(self, obj, objtype=None):
        if obj is None:
            return self
        return obj.__dict__.get(self.name, [])

    def __set__(self, obj, value):
        if not isinstance(value, list):
            value = [value]

        obj.__dict__.setdefault(self.name, []).extend(value)
        layers = obj.__dict__.setdefault("_specs_dict", LayeredDict())

        for spec in value:
            spec = Path(spec)
            try:
                f = spec.open()
            except FileNotFoundError:
                msg = (
                    f"The scenario specification file '{spec.resolve()}' "
                    "cannot be found."
                )
                raise FileNotFoundError(msg) from None

            with f:
                content = yaml.safe_load(f) or {}

            if not isinstance(content, dict):
                msg = f"The scenario specification '{spec}' is not a mapping."
                raise ValueError(msg)

            layers |= content

    def __delete__(self, obj):
        obj.__dict__[self.name] = []
        obj.__dict__["_specs_dict"] = LayeredDict()


class ScenarioInfo:
    """Hold the system parameters of an evaluation scenario.

    The parameters are read from common.yaml, then from the load and TTI
    specifications named by the scenario, then from any extra file.
    """

    specs = SpecsAccumulator()

    def __init__(self, name, specs=None):
        """Initialise the scenario.

        Parameters
        ----------
        name : str
            the scenario, "<load>-<tti>" with an optional "-relaxed",
            e.g. "medium-long" or "high-long-relaxed"
        specs : str or pathlib.Path, optional
            an additional YAML specification. Default to None.

        """
        self.name = str(name).lower()
        self.specs = SPECS_DIR / "common.yaml"
        self.specs = [SPECS_DIR / f"{part}.yaml" for part in _parts(self.name)]
        if specs is not None:
            self.specs = Path(specs)

        self.populate_attr()

    def populate_attr(self):
        """Define attributes from the layered specifications."""
        missing = [k for k in REQUIRED if k not in self.specs_dict]
        if missing:
            msg = (
                f"The scenario '{self.name}' does not define "
                f"{quote_iterable(missing)}."
            )
            raise ValueError(msg)

        for attr_name, attr_val in self.specs_dict.items():
            self.__dict__[attr_name] = attr_val

    @property
    def specs_dict(self):
        """Return the layered specifications."""
        return self._specs_dict

    def system_config(self, p_e, fnr=0.0, fpr=0.0, *, regular=False):
        """Create the system configuration of a scheme.

        Parameters
        ----------
        p_e : float
            the block error probability of the transmissions
        fnr, fpr : float, optional
            the operating point of the feedback predictor. Default to 0.
        regular : bool, optional
            whether the round trip of regular HARQ is used. Default to
            False.

        Returns
        -------
        SystemConfig
            the configuration, its budget the largest n with
            t_c > n·t_rtt

        """
        return SystemConfig(
            n_ue=self.n_ue,
            p_arrival=self.p_arrival,
            n_res=self.n_res,
            t_c=self.t_c,
            t_rtt=self.t_rtt_regular if regular else self.t_rtt,
            p_e=p_e,
            fnr=fnr,
            fpr=fpr,
        )

    def __str__(self):
        return f"scenario '{self.name}'"

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r})"


def _parts(name):
    parts = name.split("-")
    match parts:
        case [load, tti] if load in LOADS and tti in TTIS:
            return parts
        case [load, "long", "relaxed"] if load in LOADS:
            return parts
        case _:
            msg = (
                f"The scenario '{name}' is not supported, use "
                f"'<load>-<tti>' with load in {quote_iterable(LOADS)} and "
                f"tti in {quote_iterable(TTIS)}, or '<load>-long-relaxed'."
            )
            raise ValueError(msg)


def choose_scenario(scenario, specs=None):
    """Choose the scenario information instance.

    Parameters
    ----------
    scenario : str or ScenarioInfo
        the scenario name, e.g. "high-short"
    specs : str or pathlib.Path, optional
        an additional YAML specification. Default to None.

    Returns
    -------
    ScenarioInfo
        the scenario

    """
    if isinstance(scenario, ScenarioInfo):
        return scenario
    return ScenarioInfo(scenario, specs)


def all_scenarios():
    """Return the names of the packaged scenarios."""
    names = [f"{load}-{tti}" for load in LOADS for tti in TTIS]
    return names + [f"{load}-long-relaxed" for load in LOADS]
