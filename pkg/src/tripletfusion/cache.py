"""On-disk JSON cache for structure tables.

The cache is advisory: a missing file means recompute, a damaged or
mismatching one raises :class:`CacheCorruption` so the caller can decide.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from .catalog import AlgebraParams, _basis
from .errors import CacheCorruption

ENV_VAR = "FUSION_CACHE_DIR"


def cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "tripletfusion"


def basis_fingerprint(basis) -> str:
    text = "\n".join(str(m) for m in basis)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def table_path(params: AlgebraParams, which: str) -> Path:
    fp = basis_fingerprint(_basis(params, which))
    return cache_dir() / f"fusion-{which}-{params.p_plus}-{params.p_minus}-{fp}.json"


def table_payload(table) -> dict:
    """The canonical JSON document for a table (upper triangle only)."""
    constants = {
        f"{i},{j}": {str(k): v for k, v in sorted(row.items())}
        for (i, j), row in sorted(table.constants().items())
    }
    return {
        "p_plus": table.params.p_plus,
        "p_minus": table.params.p_minus,
        "basis": [str(m) for m in table.basis],
        "constants": constants,
    }


def dumps_canonical(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def save_table(table) -> Path | None:
    """Write atomically; returns the path, or None if the directory is unusable."""
    path = table_path(table.params, table.which)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(dumps_canonical(table_payload(table)))
        os.replace(tmp, path)
    except OSError:
        return None
    return path


def load_table(params: AlgebraParams, which: str):
    """The cached table, or None if there is none.

    Raises CacheCorruption if the file exists but does not describe this
    basis exactly.
    """
    from .fusion_engine import table_from_constants

    path = table_path(params, which)
    if not path.exists():
        return None
    basis = _basis(params, which)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
        if doc["p_plus"] != params.p_plus or doc["p_minus"] != params.p_minus:
            raise CacheCorruption(f"{path}: parameters do not match")
        if doc["basis"] != [str(m) for m in basis]:
            raise CacheCorruption(f"{path}: basis fingerprint mismatch")
        n = len(basis)
        constants = {}
        for key, row in doc["constants"].items():
            i, j = (int(t) for t in key.split(","))
            if not (0 <= i <= j < n):
                raise CacheCorruption(f"{path}: bad pair key {key!r}")
            parsed = {int(k): int(v) for k, v in row.items()}
            if any(not 0 <= k < n for k in parsed):
                raise CacheCorruption(f"{path}: index out of range in {key!r}")
            constants[(i, j)] = parsed
        if len(constants) != n * (n + 1) // 2:
            raise CacheCorruption(f"{path}: incomplete table")
    except CacheCorruption:
        raise
    except (OSError, ValueError, KeyError, TypeError, AttributeError) as exc:
        raise CacheCorruption(f"{path}: unreadable cache file ({exc})") from exc
    return table_from_constants(params, which, basis_fingerprint(basis), constants)
