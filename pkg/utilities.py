from pathlib import Path
from os import makedirs, path

from logbook import Logger

from config import DATA_FOLDER


log = Logger(__name__)


def default_path(*dirnames: str) -> str:
    """
    Return path created by joining  ~/cutlocus_data/ and recursively all
    dirnames. If the path doesn't exist create it.
    """
    home = Path.home()
    target = home.joinpath(DATA_FOLDER, *dirnames)
    if not target.exists():
        makedirs(target)
    return path.join(str(home), DATA_FOLDER, *dirnames)
