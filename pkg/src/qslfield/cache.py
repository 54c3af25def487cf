"""Disk cache for eigen-solutions, keyed on the exact request parameters.

One JSON file per key.  Keys hash the request fields with floats rendered in
hex so that bitwise-different inputs never collide, plus the discretization
scheme version so stale entries die with solver changes.  Writes go through a
temporary file in the same directory followed by an atomic rename; readers
never observe partial entries.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .eigensolver import SCHEME_VERSION, EigenRequest, EigenSolution, RadialGrid, solve
from .field import PowerLawField

ENV_CACHE_DIR = "QSLFIELD_CACHE_DIR"


@dataclass(frozen=True)
class CacheKey:
    """Canonical encoding of one eigensolver request."""

    n: str
    b0_lab: str
    spin: str
    m: int
    levels: int
    tol: str
    scheme_version: int

    @classmethod
    def for_request(cls, req: EigenRequest) -> "CacheKey":
        return cls(
            n=float(req.field.n).hex(),
            b0_lab=float(req.field.B0).hex(),
            spin=req.spin,
            m=int(req.m),
            levels=int(req.levels),
            tol=float(req.tol).hex(),
            scheme_version=SCHEME_VERSION,
        )

    def digest(self) -> str:
        blob = json.dumps(self.__dict__, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


class EigenCache:
    """get_or_solve() front end over a directory of serialized solutions."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def path_for(self, req: EigenRequest) -> Path:
        return self.directory / f"{CacheKey.for_request(req).digest()}.json"

    def get_or_solve(self, req: EigenRequest) -> EigenSolution:
        path = self.path_for(req)
        if path.exists():
            return _deserialize(path.read_text(), req)
        sol = solve(req)
        _atomic_write(path, _serialize(sol))
        return sol


def _serialize(sol: EigenSolution) -> str:
    req = sol.request
    payload = {
        "scheme_version": SCHEME_VERSION,
        "request": {
            "B0": req.field.B0,
            "n": req.field.n,
            "spin": req.spin,
            "m": req.m,
            "levels": req.levels,
            "tol": req.tol,
        },
        "alphas": sol.alphas.tolist(),
        "richardson_error": sol.richardson_error.tolist(),
        "radials": sol.radials.tolist(),
        "grid": {"spacing_h": sol.grid.spacing_h, "count": sol.grid.count},
        "converged": sol.converged,
    }
    return json.dumps(payload)


def _deserialize(text: str, req: EigenRequest) -> EigenSolution:
    payload = json.loads(text)
    grid = RadialGrid(
        spacing_h=float(payload["grid"]["spacing_h"]), count=int(payload["grid"]["count"])
    )
    return EigenSolution(
        request=req,
        alphas=np.asarray(payload["alphas"], dtype=float),
        radials=np.asarray(payload["radials"], dtype=float),
        grid=grid,
        converged=bool(payload["converged"]),
        richardson_error=np.asarray(payload["richardson_error"], dtype=float),
    )


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def default_cache_dir() -> Path | None:
    value = os.environ.get(ENV_CACHE_DIR)
    return Path(value) if value else None
