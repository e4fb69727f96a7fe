import logging


class CustomFormatter(logging.Formatter):
    """Define logging formatter with colors for different log levels."""

    grey = "\x1b[38;20m"
    yellow = "\x1b[33;20m"
    red = "\x1b[31;20m"
    bold_red = "\x1b[31;1m"
    reset = "\x1b[0m"
    format = "%(asctime)s (%(levelname)s) %(message)s (%(name)s)"

    FORMATS = {
        logging.DEBUG: grey + format + reset,
        logging.INFO: grey + format + reset,
        logging.WARNING: yellow + format + reset,
        logging.ERROR: red + format + reset,
        logging.CRITICAL: bold_red + format + reset,
    }

    def format(self, record):
        """Set color formatting for logger."""
        log_fmt = self.FORMATS.get(record.levelno)
        formatter = logging.Formatter(log_fmt, datefmt="%Y-%m-%d %H:%M:%S")
        return formatter.format(record)


class WaveCauchyLogger:
    """Custom logging class for use throughout the wave_cauchy package.

    Parameters
    ----------
    name : str
        The name of the module the logger is being created from.
    level : int
        Logging level for the root logger and the stream handler.
    colour : bool
        Use the coloured formatter on the stream handler.
    """

    def __init__(self, name, level=logging.INFO, colour=False):
        """Initialise the logger class."""
        for handler in logging.root.handlers[:]:
            logging.root.removeHandler(handler)

        self.logger = logging.getLogger(name)
        self.level = level

        self.FORMAT = logging.Formatter(
            "%(asctime)s (%(levelname)s) %(message)s (%(name)s)",
            datefmt="%Y-%m-%d %H:%M:%S",
        )
        if colour:
            self.FORMAT = CustomFormatter()

        # Set root logging level to ensure handlers receive appropriate logs.
        self.logger.root.setLevel(level)
        # Named loggers are shared, so only attach one stream handler.
        if not any(
            isinstance(h, logging.StreamHandler) for h in self.logger.handlers
        ):
            self._set_stream_handler()

    def _set_stream_handler(self):
        """Set the stream handler for the logger to write to stderr."""
        stream_handler = logging.StreamHandler()
        stream_handler.setLevel(self.level)
        stream_handler.setFormatter(self.FORMAT)

        self.logger.addHandler(stream_handler)


def set_package_level(level: int | str) -> None:
    """Set the logging level for every wave_cauchy logger.

    Args:
        level (int | str): A logging level, e.g. ``"INFO"`` or
            ``logging.DEBUG``.
    """
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
    logging.root.setLevel(level)
    for name, obj in logging.root.manager.loggerDict.items():
        if name.startswith("wave_cauchy") and isinstance(obj, logging.Logger):
            obj.setLevel(level)
            for handler in obj.handlers:
                handler.setLevel(level)
