import logging
import sys

from eharqsim.parser.parser import parse_eharq
from eharqsim.stage import ExperimentConfig
from eharqsim.utils.logger import create_logger
from eharqsim.utils.stage import select_stage

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def eharq_entry(argv=None):
    """Entry point for eharq."""
    args = parse_eharq(argv)
    sys.exit(run_eharq(**args))


def run_eharq(**kwargs):
    """Run eharq and map failures to exit codes.

    Configuration errors (ValueError, KeyError and FileNotFoundError)
    give 2, failed computations (RuntimeError, OSError and any other
    exception) give 3.
    """
    logger = create_logger(
        level=logging.NOTSET if kwargs.get("quiet") else logging.INFO
    )
    try:
        eharq(**kwargs)
    except (ValueError, KeyError, FileNotFoundError) as err:
        logger.error(f"Configuration error: {err}")
        return EXIT_CONFIG
    except (RuntimeError, OSError) as err:
        logger.error(f"Runtime error: {err}")
        return EXIT_RUNTIME
    except Exception as err:  # noqa: BLE001
        logger.error(f"Unexpected error: {type(err).__name__}: {err}")
        return EXIT_RUNTIME

    return EXIT_OK


def eharq(
    command,
    config=None,
    seed=None,
    out_dir=None,
    n=None,
    curves=None,
    binormal=None,
    *,
    gradcheck=False,
    simulate=False,
    quiet=False,
    **kwargs,
):
    """Run one stage of the E-HARQ evaluation pipeline.

    Parameters
    ----------
    command : str
        the stage, one of "gen", "train", "eval" and "system"
    config : str or pathlib.Path, optional
        the YAML or JSON experiment configuration. Default to None,
        every setting at its default.
    seed : int, optional
        the global seed, it overrides the configuration. Default to
        None.
    out_dir : str or pathlib.Path, optional
        the output directory, it overrides the configuration. Default
        to None.
    n : int, optional
        the number of records per split of gen. Default to None.
    curves : list of (str, str), optional
        the named curve files of system. Default to None.
    binormal : list of (str, str), optional
        the named binormal separations of system. Default to None.
    gradcheck : bool, optional
        whether train checks the SAE gradients first. Default to False.
    simulate : bool, optional
        whether system adds simulated packet failure rates. Default to
        False.
    quiet : bool, optional
        whether to suppress log messages. Default to False.
    kwargs : dict, optional
        further entries of the stage section, e.g. dataset, model or
        classifier

    Returns
    -------
    a list of the written files

    """
    if quiet:
        log_level = logging.NOTSET
    else:
        log_level = logging.INFO

    experiment = ExperimentConfig.from_file(
        config,
        seed=seed,
        out_dir=out_dir,
        n=n,
        gradcheck=gradcheck,
        simulate=simulate,
    )

    if curves:
        kwargs["curves"] = dict(curves)
    if binormal:
        kwargs["binormal"] = {k: float(v) for k, v in binormal}

    stage = select_stage(command, experiment, **kwargs)

    with stage.log_run(level=log_level):
        stage.run()

    return stage.outputs
