from eharqsim.utils.io import read_mapping
from eharqsim.utils.model import Directory, FixedValue, PositiveNumber
from eharqsim.utils.parse import quote_iterable

FORMAT_VERSION = 1
SECTIONS = ("generate", "train", "eval", "system")

# command-line flags and the section they override
FLAG_SECTIONS = {
    "n": "generate",
    "gradcheck": "train",
    "simulate": "system",
}


class ExperimentConfig:
    """Hold the settings shared by the pipeline stages.

    The stage sections are plain mappings, each stage reads its own
    section and validates the entries it uses.
    """

    format_version = FixedValue()
    seed = PositiveNumber(int)
    out_dir = Directory()
    sections = FixedValue()

    def __init__(
        self,
        seed=0,
        out_dir=None,
        format_version=FORMAT_VERSION,
        **sections,
    ):
        """Initialise the experiment settings.

        Parameters
        ----------
        seed : int, optional
            the global seed of every random stream. Default to 0.
        out_dir : str or pathlib.Path, optional
            the directory of all outputs. Default to None, the current
            working directory.
        format_version : int, optional
            the version of the configuration layout. Default to 1.
        sections : dict, optional
            the settings of the stages generate, train, eval and system

        """
        if int(format_version) != FORMAT_VERSION:
            msg = (
                f"The configuration format version {format_version} is not "
                f"supported, expected {FORMAT_VERSION}."
            )
            raise ValueError(msg)

        unknown = sorted(set(sections) - set(SECTIONS))
        if unknown:
            msg = (
                f"Unknown configuration section(s) {quote_iterable(unknown)}, "
                f"expected {quote_iterable(SECTIONS)}."
            )
            raise ValueError(msg)

        for name, content in sections.items():
            if content is not None and not isinstance(content, dict):
                msg = f"The configuration section '{name}' is not a mapping."
                raise ValueError(msg)

        self.format_version = int(format_version)
        self.seed = seed
        self.out_dir = out_dir
        self.sections = {
            name: dict(sections.get(name) or {}) for name in SECTIONS
        }

    @classmethod
    def from_file(cls, file_path=None, seed=None, out_dir=None, **flags):
        """Create the settings from a file and command-line overrides.

        Parameters
        ----------
        file_path : str or pathlib.Path, optional
            a YAML or JSON configuration. Default to None, every value
            at its default.
        seed : int, optional
            overrides the seed of the file. Default to None.
        out_dir : str or pathlib.Path, optional
            overrides the output directory of the file. Default to None.
        flags : dict, optional
            section overrides n, gradcheck and simulate, None is ignored

        Returns
        -------
        ExperimentConfig
            the settings

        """
        content = {} if file_path is None else read_mapping(file_path)

        if seed is not None:
            content["seed"] = seed
        if out_dir is not None:
            content["out_dir"] = out_dir

        for flag, value in flags.items():
            if flag not in FLAG_SECTIONS:
                msg = f"The flag '{flag}' does not belong to any section."
                raise ValueError(msg)
            if value is None or value is False:
                continue

            name = FLAG_SECTIONS[flag]
            section = dict(content.get(name) or {})
            section[flag] = value
            content[name] = section

        return cls(**content)

    def section(self, name):
        """Return a copy of the settings of a stage."""
        if name not in SECTIONS:
            msg = f"The stage '{name}' has no configuration section."
            raise ValueError(msg)
        return dict(self.sections[name])

    def to_dict(self):
        """Return the settings as a plain mapping."""
        return {
            "format_version": self.format_version,
            "seed": self.seed,
            "out_dir": str(self.out_dir),
            **self.sections,
        }

    def __repr__(self):
        return (
            f"{type(self).__name__}(seed={self.seed}, "
            f"out_dir='{self.out_dir}')"
        )
