"""On-disk cache of critical-line samples (t, Z(t)).

File layout, little-endian::

    header  magic b"LLZC" | version u32 | t_start f64 | t_end f64 | tol f64 | count u64
    records count x (t f64, z f64)

One file per (t_start, t_end, tol) key.  Writes go to a temporary file that is
renamed into place while holding an advisory lock, so concurrent processes never
observe a half-written file.  A file whose header or size does not check out is
ignored with a warning and recomputed.
"""
from __future__ import annotations

import fcntl
import os
import struct
import tempfile
import warnings
from contextlib import contextmanager
from pathlib import Path

import numpy as np

MAGIC = b"LLZC"
VERSION = 1
ENV_VAR = "LADDERLAB_CACHE"
_HEADER = struct.Struct("<4sIdddQ")
_RECORD = np.dtype([("t", "<f8"), ("z", "<f8")])


def resolve_cache_dir(cli_value: str | os.PathLike | None) -> Path | None:
    """The cache directory to use; the environment variable wins over the flag."""
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path(cli_value) if cli_value else None


class SampleCache:
    """Directory of binary sample grids with hit/miss accounting."""

    def __init__(self, directory: str | os.PathLike):
        self.directory = Path(directory)
        self.hits = 0
        self.misses = 0

    @property
    def hit_rate(self) -> float:
        total = self.hits + self.misses
        return self.hits / total if total else 0.0

    def path_for(self, t_start: float, t_end: float, tol: float) -> Path:
        return self.directory / f"z_{t_start:.17g}_{t_end:.17g}_{tol:.6g}.bin"

    @contextmanager
    def _locked(self):
        self.directory.mkdir(parents=True, exist_ok=True)
        with open(self.directory / ".lock", "a+b") as fh:
            fcntl.flock(fh, fcntl.LOCK_EX)
            try:
                yield
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)

    def _read(self, path: Path, t_start: float, t_end: float, tol: float):
        try:
            raw = path.read_bytes()
        except FileNotFoundError:
            return None
        if len(raw) < _HEADER.size:
            warnings.warn(f"ignoring truncated cache file {path}", RuntimeWarning, stacklevel=3)
            return None
        magic, version, t0, t1, tl, count = _HEADER.unpack_from(raw)
        if magic != MAGIC or version != VERSION or (t0, t1, tl) != (t_start, t_end, tol):
            warnings.warn(f"ignoring cache file with bad header {path}", RuntimeWarning, stacklevel=3)
            return None
        if len(raw) != _HEADER.size + count * _RECORD.itemsize:
            warnings.warn(f"ignoring cache file with bad length {path}", RuntimeWarning, stacklevel=3)
            return None
        return np.frombuffer(raw, dtype=_RECORD, offset=_HEADER.size)

    def load(self, t_start: float, t_end: float, tol: float, expected_t: np.ndarray | None = None):
        """Return the cached z array, or None on a miss.

        When ``expected_t`` is given the stored abscissae must match it exactly.
        """
        rec = self._read(self.path_for(t_start, t_end, tol), t_start, t_end, tol)
        if rec is not None and expected_t is not None:
            if rec.size != expected_t.size or not np.array_equal(rec["t"], expected_t):
                warnings.warn("ignoring cache file with unexpected abscissae", RuntimeWarning, stacklevel=2)
                rec = None
        if rec is None:
            self.misses += 1
            return None
        self.hits += 1
        return np.array(rec["z"])

    def contains(self, t_start: float, t_end: float, tol: float, expected_t: np.ndarray | None = None) -> bool:
        rec = self._read(self.path_for(t_start, t_end, tol), t_start, t_end, tol)
        if rec is None:
            return False
        return expected_t is None or np.array_equal(rec["t"], expected_t)

    def store(self, t_start: float, t_end: float, tol: float, t: np.ndarray, z: np.ndarray) -> int:
        """Persist a grid; returns the number of samples written (0 if already present)."""
        t = np.asarray(t, dtype=float)
        z = np.asarray(z, dtype=float)
        path = self.path_for(t_start, t_end, tol)
        with self._locked():
            if self.contains(t_start, t_end, tol, t):
                return 0
            rec = np.empty(t.size, dtype=_RECORD)
            rec["t"] = t
            rec["z"] = z
            header = _HEADER.pack(MAGIC, VERSION, t_start, t_end, tol, t.size)
            fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".bin")
            try:
                with os.fdopen(fd, "wb") as fh:
                    fh.write(header)
                    fh.write(rec.tobytes())
                os.replace(tmp, path)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise
        return int(t.size)
