import struct
from abc import ABC, abstractmethod
from datetime import datetime
from typing import Any, Optional, Tuple

import numpy as np
from logbook import Logger

from formats import dumps
from utilities import default_path

log = Logger(__name__)

FIELD_MAGIC = b'CLFD'
FIELD_HEADER = '<4sii3d'


class AbstractBaseSaver(ABC):
    """
    Api for saving results of a run.
    """
    suffix = ''

    def __init__(self, path: Optional[str] = None, note: str = '') -> None:
        """
        Path determines the folder files are written to, file names are
        determined by self.name_str.
        """
        self.timestamp = datetime.now().strftime('%Y%m%d_%H_%M')
        if path is None:
            self.path = default_path('output')
        else:
            self.path = path
        if note:
            self.note = f'_{note}'
        else:
            self.note = note

    def name_str(self, what: str, label: str) -> str:
        """
        Return string under which the data is to be saved. Apart from data
        passed by save method, timestamp and note associated with particular
        run are being added.
        """
        label = label.replace(' ', '_').replace('/', '_')
        return f'{what}_{self.timestamp}_{label}{self.note}'

    def file_name(self, what: str, label: str) -> str:
        return f'{self.path}/{self.name_str(what, label)}.{self.suffix}'

    @abstractmethod
    def save(self, data: Any, what: str, label: str) -> str:
        """
        Write data to a new file, return its path.

        Args:
        ---------
        data: object to be saved
        what: string indicating what data it is
        label: string indicating what graph or torus data is associated with
        """
        pass

    def __str__(self):
        return f'{self.__class__.__name__}({self.path}, {self.note})'


class JsonSaver(AbstractBaseSaver):
    """
    Dicts produced by formats.
    """
    suffix = 'json'

    def save(self, data: Any, what: str, label: str) -> str:
        name = self.file_name(what, label)
        with open(name, 'w') as f:
            f.write(dumps(data))
        log.debug(f'saved {name}')
        return name


class SvgSaver(AbstractBaseSaver):
    """
    Svg documents as text.
    """
    suffix = 'svg'

    def save(self, data: str, what: str, label: str) -> str:
        name = self.file_name(what, label)
        with open(name, 'w') as f:
            f.write(data)
        log.debug(f'saved {name}')
        return name


class FieldSaver(AbstractBaseSaver):
    """
    Distance field on its grid: header (magic, ny, nx, x0, y0, h) followed
    by little endian doubles, row-major.  Unreached nodes are written as
    inf.
    """
    suffix = 'field'

    def save(self, data, what: str, label: str) -> str:
        name = self.file_name(what, label)
        write_field(name, data.values, data.origin, data.h)
        log.debug(f'saved {name}')
        return name


def write_field(name: str, values: np.ndarray, origin: np.ndarray,
                h: float) -> None:
    values = np.ascontiguousarray(values, dtype='<f8')
    ny, nx = values.shape
    with open(name, 'wb') as f:
        f.write(struct.pack(FIELD_HEADER, FIELD_MAGIC, ny, nx,
                            float(origin[0]), float(origin[1]), float(h)))
        f.write(values.tobytes())


def read_field(name: str) -> Tuple[np.ndarray, np.ndarray, float]:
    """Inverse of write_field: values, origin, h."""
    size = struct.calcsize(FIELD_HEADER)
    with open(name, 'rb') as f:
        magic, ny, nx, x0, y0, h = struct.unpack(FIELD_HEADER, f.read(size))
        if magic != FIELD_MAGIC:
            raise ValueError(f'{name} is not a distance field dump')
        values = np.frombuffer(f.read(), dtype='<f8')
    if values.size != ny * nx:
        raise ValueError(f'{name}: expected {ny * nx} values, '
                         f'found {values.size}')
    return values.reshape(ny, nx), np.array([x0, y0]), h
