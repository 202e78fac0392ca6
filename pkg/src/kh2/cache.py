"""Content-addressed result cache.

Keys hash the canonical PD code together with everything else that can change
the output bytes.  Writes go through a temporary file and ``os.replace`` so
concurrent readers never see a partial entry; writers (and gc) serialize on a
lock file in the cache root.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Optional

from .diagram import LinkDiagram, PDCode

try:
    import fcntl
except ImportError:  # pragma: no cover - non-POSIX
    fcntl = None

ENV_VAR = "KH2_CACHE_DIR"


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "kh2"


def canonical_diagram(d: LinkDiagram) -> LinkDiagram:
    """Relabel cyclically and sort crossings to the least code; the basepoint follows its arc.

    Ties between shifts are broken by the relabeled basepoint, so two inputs
    that differ only by relabeling map to the same diagram.
    """
    n2 = 2 * d.n_crossings
    if not n2:
        return LinkDiagram(d.pd, d.basepoint, d.name)
    best = None
    for s in range(n2):
        rel = tuple(sorted(tuple((x - 1 + s) % n2 + 1 for x in c) for c in d.pd.crossings))
        bp = d.basepoint
        if bp is not None and bp <= n2:
            bp = (bp - 1 + s) % n2 + 1
        cand = (rel, -1 if bp is None else bp)
        if best is None or cand < best:
            best = cand
    rel, bp = best
    return LinkDiagram(PDCode(rel, d.pd.loops), None if bp == -1 else bp, d.name)


def cache_key(**parts) -> str:
    blob = json.dumps(parts, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


class ResultCache:
    def __init__(self, root: Optional[Path] = None):
        self.root = Path(root) if root else default_cache_dir()

    def _path(self, key: str) -> Path:
        return self.root / key[:2] / f"{key}.json"

    def get(self, key: str) -> Optional[str]:
        p = self._path(key)
        try:
            return p.read_text(encoding="utf-8")
        except FileNotFoundError:
            return None

    @contextmanager
    def _write_lock(self):
        # readers never lock: os.replace makes every entry appear whole
        self.root.mkdir(parents=True, exist_ok=True)
        with open(self.root / ".lock", "a") as fh:
            if fcntl is not None:
                fcntl.flock(fh, fcntl.LOCK_EX)
            try:
                yield
            finally:
                if fcntl is not None:
                    fcntl.flock(fh, fcntl.LOCK_UN)

    def put(self, key: str, payload: str) -> None:
        p = self._path(key)
        with self._write_lock():
            p.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=p.parent, prefix=".tmp-", suffix=".json")
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as fh:
                    fh.write(payload)
                os.replace(tmp, p)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise

    def entries(self):
        if not self.root.exists():
            return
        yield from self.root.glob("*/*.json")

    def gc(self, engine_version: str, max_age_days: Optional[float] = None, everything: bool = False) -> int:
        """Drop entries from other engine versions, older than the age limit, or all of them."""
        if not self.root.exists():
            return 0
        removed = 0
        now = time.time()
        with self._write_lock():  # stray temp files are only stray while no writer holds the lock
            for tmp in self.root.glob("*/.tmp-*"):
                tmp.unlink(missing_ok=True)
                removed += 1
            for p in list(self.entries()):
                drop = everything
                if not drop and max_age_days is not None:
                    drop = now - p.stat().st_mtime > max_age_days * 86400
                if not drop:
                    try:
                        drop = json.loads(p.read_text(encoding="utf-8")).get("engine_version") != engine_version
                    except (OSError, ValueError):
                        drop = True
                if drop:
                    p.unlink(missing_ok=True)
                    removed += 1
        return removed
