from __future__ import annotations

import logging
import sys

import colorlog

__all__ = ("init_logging",)

_PLAIN_FORMAT = "%(levelname)-8.8s %(asctime)23.23s %(name)s: %(message)s"
_COLOR_FORMAT = (
    "%(log_color)s%(bold)s%(levelname)-8.8s%(reset)s "
    "%(thin)s%(asctime)23.23s%(reset)s %(log_color)s%(name)s: "
    "%(message)s%(reset)s"
)


def init_logging(level: int | str | None, allow_color: bool) -> None:
    """Attach a stream handler to the root logger.

    Nothing happens when `level` is None or when the root logger already
    has handlers, so applications and test runners keep their own setup.

    Parameters
    ----------
    level : int | str | None
        The root log level, e.g. "INFO".
    allow_color : bool
        Use colour escapes when stderr is a terminal.
    """

    root = logging.getLogger()
    if level is None or root.handlers:
        return

    handler = logging.StreamHandler(sys.stderr)
    if allow_color and sys.stderr.isatty():
        handler.setFormatter(
            colorlog.ColoredFormatter(
                _COLOR_FORMAT,
                log_colors={
                    "DEBUG": "bold_white",
                    "INFO": "bold_green",
                    "WARNING": "bold_yellow",
                    "ERROR": "bold_red",
                    "CRITICAL": "bold_red,bg_white",
                },
            )
        )
    else:
        handler.setFormatter(logging.Formatter(_PLAIN_FORMAT))

    root.addHandler(handler)
    root.setLevel(level)
