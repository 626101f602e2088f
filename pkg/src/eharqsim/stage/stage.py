"""Base class of a pipeline stage.

This module provides:
- Stage: hold attributes/methods common to the stages gen, train, eval
         and system.
"""

import time
from contextlib import contextmanager

from eharqsim.utils.logger import create_logger
from eharqsim.utils.model import FixedValue
from eharqsim.utils.parse import quote_iterable


class Stage:
    """Hold attributes/methods common to the pipeline stages."""

    name = "stage"
    section = None
    options = ()
    experiment = FixedValue()
    settings = FixedValue()
    outputs = FixedValue()
    logger = FixedValue()

    def __init__(self, experiment, **overrides):
        """Initialise a stage.

        Parameters
        ----------
        experiment : ExperimentConfig
            the experiment settings
        overrides : dict, optional
            entries replacing those of the stage section, None is
            ignored

        """
        self.experiment = experiment

        settings = experiment.section(self.section)
        settings |= {k: v for k, v in overrides.items() if v is not None}
        unknown = sorted(set(settings) - set(self.options))
        if unknown:
            msg = (
                f"Unknown {self.section} setting(s) "
                f"{quote_iterable(unknown)}."
            )
            raise ValueError(msg)
        self.settings = settings

        self.outputs = []
        self.logger = None

    def run(self):
        """To be implemented in the subclass."""
        raise NotImplementedError

    def describe(self):
        """Return the lines logged before the stage runs."""
        return []

    def report(self):
        """Return the lines logged after the stage has run."""
        return []

    def option(self, key, default=None):
        """Return a setting of the stage section."""
        return self.settings.get(key, default)

    def out_path(self, file_name):
        """Return the path of an output file."""
        return self.experiment.out_dir / file_name

    def emit(self, file_path):
        """Record a produced file and return it."""
        self.outputs.append(file_path)
        return file_path

    @property
    def seed(self):
        """Store the global seed."""
        return self.experiment.seed

    @contextmanager
    def log_run(self, level=None, name=None):
        """Log the method run."""
        st = self._log_enter_run(level, name)
        yield
        self._log_exit_run(st, level, name)

    def _log_enter_run(self, level, name):
        if self.logger is None:
            self._logger = create_logger(level=level, name=name)
        logger = self.logger

        logger.info("")
        logger.info(f"Start the {self.name} stage...")
        logger.info(f"The global seed is {self.seed}.")
        logger.info(
            f"The output directory is '{self.experiment.out_dir}'."
        )
        for line in self.describe():
            logger.info(line)

        st = time.perf_counter()
        return st

    def _log_exit_run(self, st, level, name):
        if self.logger is None:
            self._logger = create_logger(level=level, name=name)
        logger = self.logger

        logger.info(f"Finished the {self.name} stage.")
        elapse = time.perf_counter() - st
        logger.info(f"The duration of the {self.name} stage: {elapse:.2f} s")
        for line in self.report():
            logger.info(line)

        if self.outputs:
            saved = quote_iterable(str(f) for f in self.outputs)
            file_is_are = (
                "file is" if (len(self.outputs) == 1) else "files are"
            )
            logger.info(f"The following {file_is_are} saved: {saved}.")
