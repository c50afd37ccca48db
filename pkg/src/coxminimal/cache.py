"""Content-addressed disk cache.

Entries are JSON files named by a SHA-256 key, each carrying a checksum of
its payload; an entry whose checksum does not match is discarded and
recomputed.  The default directory comes from COXMINIMAL_CACHE.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from fractions import Fraction
from pathlib import Path

import flint

from .polyalg import GradedPoly, Ring

log = logging.getLogger(__name__)

ENV_VAR = "COXMINIMAL_CACHE"


def default_dir() -> Path | None:
    d = os.environ.get(ENV_VAR)
    return Path(d) if d else None


def digest(*parts) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(p if isinstance(p, bytes) else str(p).encode())
        h.update(b"\0")
    return h.hexdigest()


def _checksum(payload) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


class DiskCache:
    """Entries live under root/<namespace>, so inputs never share entries."""

    def __init__(self, root, namespace: str = ""):
        self.root = Path(root) / namespace[:24] if namespace else Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0
        self.corrupt = 0

    def _path(self, kind: str, key: str) -> Path:
        return self.root / kind / key[:2] / f"{key}.json"

    def get(self, kind: str, key: str):
        path = self._path(kind, key)
        if not path.exists():
            self.misses += 1
            return None
        try:
            doc = json.loads(path.read_text())
            ok = doc.get("checksum") == _checksum(doc.get("payload"))
        except (OSError, ValueError):
            ok = False
        if not ok:
            self.corrupt += 1
            log.warning("corrupted cache entry %s/%s; recomputing", kind, key[:12])
            path.unlink(missing_ok=True)
            return None
        self.hits += 1
        log.info("cache hit %s/%s", kind, key[:12])
        return doc["payload"]

    def put(self, kind: str, key: str, payload) -> None:
        path = self._path(kind, key)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps({"checksum": _checksum(payload), "payload": payload}, sort_keys=True))
        tmp.replace(path)

    def delete(self, kind: str, key: str) -> None:
        self._path(kind, key).unlink(missing_ok=True)

    # Gröbner bases, in the raw form of the polyalg engine
    def get_gb(self, fp: str, ring: Ring):
        payload = self.get("gb", fp)
        if payload is None:
            return None
        return [raw_from_json(r) for r in payload]

    def put_gb(self, fp: str, ring: Ring, raws) -> None:
        self.put("gb", fp, [raw_to_json(r) for r in raws])


# -- serialization ------------------------------------------------------------

def _q(c) -> str:
    return str(Fraction(int(c.p), int(c.q)))


def raw_to_json(raw: dict) -> list:
    return [[list(e), [_q(c) for c in p.coeffs()]] for e, p in sorted(raw.items())]


def raw_from_json(obj) -> dict:
    out = {}
    for e, cs in obj:
        out[tuple(e)] = flint.fmpq_poly([flint.fmpq(Fraction(c).numerator, Fraction(c).denominator) for c in cs])
    return out


def poly_to_json(f: GradedPoly) -> dict:
    return {"terms": raw_to_json(f.raw()), "character": list(f.character) if f.character is not None else None}


def poly_from_json(ring: Ring, obj) -> GradedPoly:
    chi = obj.get("character")
    return GradedPoly.from_raw(ring, raw_from_json(obj["terms"]), tuple(chi) if chi is not None else None)
