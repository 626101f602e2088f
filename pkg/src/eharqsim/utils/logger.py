import logging

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


def create_logger(level=None, name=None):
    """Create a logger writing to the console.

    Calling it again with the same name only updates the level, so
    stages sharing one logger do not print every message twice.

    Parameters
    ----------
    level : int, optional
        the logging level. Default to None, and set to logging.INFO.
    name : str, optional
        the name of the logger. Default to None, and set to
        "eharqsim".

    Returns
    -------
    logger : logging.Logger
        the logger

    """
    if level is None:
        level = logging.INFO
    if name is None:
        name = "eharqsim"

    logger = logging.getLogger(name)
    logger.setLevel(level)

    if any(getattr(h, "_eharq_console", False) for h in logger.handlers):
        for handler in logger.handlers:
            handler.setLevel(level)
        return logger

    ch = logging.StreamHandler()
    ch.setLevel(level)
    ch.setFormatter(logging.Formatter(LOG_FORMAT))
    ch._eharq_console = True
    logger.addHandler(ch)

    return logger
