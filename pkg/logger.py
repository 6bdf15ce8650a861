import sys
from datetime import datetime
from typing import Optional

from logbook import (Logger, StreamHandler, FileHandler, DEBUG, INFO,
                     set_datetime_format)

from utilities import default_path


log = Logger(__name__)

_pushed = set()


def logger(name: str, stream_level=INFO, file_level=DEBUG,
           folder: Optional[str] = None) -> Logger:
    """
    Push stdout and per-run file handlers (once per process and name) and
    return a Logger.  File is only created when the first record arrives.
    """
    if name not in _pushed:
        set_datetime_format('local')
        StreamHandler(sys.stdout, level=stream_level,
                      bubble=True).push_application()
        folder = folder or default_path('logs')
        FileHandler(
            f'{folder}/{name}_{datetime.today().strftime("%Y-%m-%d_%H-%M")}'
            '.log', bubble=True, level=file_level, delay=True
        ).push_application()
        _pushed.add(name)
    return Logger(name)


def log_assert(condition: bool, message: str, module=None):
    """
    Push AssertionError into logger.
    """
    try:
        assert condition is True, message
    except AssertionError:
        log.error(f'{module}: {message}')
        raise
