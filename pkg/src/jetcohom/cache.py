"""Per-cell block cache keyed by the algebra content hash.

One JSON file per (algebra, degree, energy) cell holding the serialized
differential block (basis listing plus sparse triples) and the computed
cell summary.  A cached file is used only when its stored algebra hash
matches; hash mismatches and unreadable files trigger recomputation with
a warning.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path
from typing import Optional

ENV_CACHE_DIR = "JETCOHOM_CACHE_DIR"


def resolve_cache_dir(configured: str | None) -> Optional[Path]:
    override = os.environ.get(ENV_CACHE_DIR)
    path = override or configured
    return Path(path) if path else None


def cell_path(cache_dir: Path, algebra_hash: str, p: int, k: int) -> Path:
    return cache_dir / f"{algebra_hash[:16]}_p{p}_k{k}.json"


def load_cell(cache_dir: Optional[Path], algebra_hash: str, p: int, k: int) -> Optional[dict]:
    if cache_dir is None:
        return None
    path = cell_path(cache_dir, algebra_hash, p, k)
    if not path.exists():
        return None
    try:
        with open(path) as fh:
            record = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"warning: unreadable cache file {path} ({exc}); recomputing", file=sys.stderr)
        return None
    if record.get("algebra_hash") != algebra_hash:
        print(f"warning: cache file {path} has stale algebra hash; recomputing", file=sys.stderr)
        return None
    required = {"p", "k", "dim", "rank_d", "harmonic_dim", "harmonic", "checks"}
    if not required.issubset(record):
        print(f"warning: cache file {path} is incomplete; recomputing", file=sys.stderr)
        return None
    return record


def store_cell(cache_dir: Optional[Path], record: dict) -> None:
    if cache_dir is None:
        return
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = cell_path(cache_dir, record["algebra_hash"], record["p"], record["k"])
    tmp = path.with_suffix(".tmp")
    with open(tmp, "w") as fh:
        json.dump(record, fh, sort_keys=True)
    os.replace(tmp, path)  # atomic publication of the finished cell


def list_cache(cache_dir: Optional[Path]) -> list[dict]:
    if cache_dir is None or not cache_dir.exists():
        return []
    out = []
    for path in sorted(cache_dir.glob("*.json")):
        entry = {"file": path.name, "bytes": path.stat().st_size, "valid": False}
        try:
            with open(path) as fh:
                record = json.load(fh)
            entry.update(
                valid=True,
                algebra_hash=record.get("algebra_hash", "?"),
                p=record.get("p"),
                k=record.get("k"),
                dim=record.get("dim"),
            )
        except (OSError, json.JSONDecodeError):
            pass
        out.append(entry)
    return out
