import logging
from typing import TYPE_CHECKING

from rich.console import Console
from rich.logging import RichHandler

if TYPE_CHECKING:
    from anideal.models import Config

FILE_FORMAT = "%(asctime)s %(name)s - %(levelname)s - %(message)s"

# marks handlers owned by configure_logging
_OWNED = "_anideal_handler"


def logger_setup(name: str) -> logging.Logger:
    """
    Module logger. Handlers live on the root logger only, configured once by
    the CLI; library use of the engine stays silent.

    :param name: module name
    :return: log
    """
    return logging.getLogger(name)


def configure_logging(config: "Config", log_file: str | None = None) -> None:
    """
    Route log records for one CLI run.

    Records go to stderr through rich, so stdout carries command output only.
    With `debug` set in the resolved configuration the level is DEBUG and the
    engine reports precision escalations, subdivision counts and the causes of
    Undecidable verdicts; otherwise WARNING. A log file, when given, receives
    the same records with timestamps.

    :param config: resolved configuration
    :param log_file: path of a file that receives a copy of every record
    """
    root = logging.getLogger()
    root.setLevel(logging.DEBUG if config.debug else logging.WARNING)

    for handler in list(root.handlers):
        if getattr(handler, _OWNED, False):
            root.removeHandler(handler)
            handler.close()

    console_handler = RichHandler(
        console=Console(stderr=True),
        show_time=False,
        show_path=False,
        markup=False,
    )
    console_handler.setFormatter(logging.Formatter("%(name)s - %(message)s"))
    handlers: list[logging.Handler] = [console_handler]

    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(logging.Formatter(FILE_FORMAT))
        handlers.append(file_handler)

    for handler in handlers:
        setattr(handler, _OWNED, True)
        root.addHandler(handler)
