"""On-disk cache of L-tables.

Entries are JSON files named by the sha256 of the canonical spec JSON plus
the package version.  A load is trusted only after the stored checksum
matches and the leading coefficients L_z^{sigma_z} = (u+1)^l*(z) are
re-checked; anything else is discarded with a warning.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import warnings
from pathlib import Path

from . import __version__
from .coxeter import CoxeterSpec, parse_word
from .exactring import LaurentPoly
from .invmod import LTable, derive_L_table
from .twistinv import TwistTable

__all__ = ["CacheWarning", "spec_key", "table_to_json", "table_from_json", "store", "load"]

_U_PLUS_1 = LaurentPoly({0: 1, 1: 1})


class CacheWarning(UserWarning):
    pass


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def spec_key(spec: CoxeterSpec) -> str:
    text = _canonical(spec.to_json()) + "\n" + __version__
    return hashlib.sha256(text.encode()).hexdigest()


def _rows_json(lt: LTable) -> list:
    g = lt.group
    order = lt.twist.position
    return [[g.word_str(x), [[g.word_str(z), p.to_json()]
                             for z, p in sorted(row.items(), key=lambda kv: order[kv[0]])]]
            for x, row in enumerate(lt.L)]


def table_to_json(lt: LTable) -> dict:
    rows = _rows_json(lt)
    spec = lt.group.spec
    return {
        "version": __version__,
        "key": spec_key(spec),
        "spec": spec.to_json(),
        "rows": rows,
        "checksum": hashlib.sha256(_canonical(rows).encode()).hexdigest(),
    }


def table_from_json(data: dict, twist: TwistTable) -> LTable:
    """Rebuild and validate; raises ValueError on any inconsistency."""
    g = twist.group
    if data.get("key") != spec_key(g.spec) or data.get("version") != __version__:
        raise ValueError("cache entry belongs to a different spec or version")
    rows_json = data["rows"]
    if hashlib.sha256(_canonical(rows_json).encode()).hexdigest() != data.get("checksum"):
        raise ValueError("checksum mismatch")
    if len(rows_json) != len(g):
        raise ValueError("row count does not match the group order")
    rows: list[dict[int, LaurentPoly]] = []
    for x, (xw, entries) in enumerate(rows_json):
        if g.index_of_word(parse_word(xw, g.rank)) != x:
            raise ValueError(f"row {x} labelled {xw!r} out of order")
        row = {}
        for zw, pj in entries:
            z = g.index_of_word(parse_word(zw, g.rank))
            if z not in twist:
                raise ValueError(f"{zw} is not a twisted involution")
            row[z] = LaurentPoly.from_json(pj)
        rows.append(row)
    for z in twist:
        lead = rows[twist.sigma[z]].get(z)
        if lead != _U_PLUS_1 ** twist.ell_star[z]:
            raise ValueError(f"leading coefficient for z = {g.word_str(z)} is {lead}")
    return derive_L_table(twist, rows)


def _path(cache_dir, spec: CoxeterSpec) -> Path:
    return Path(cache_dir) / f"ltable-{spec_key(spec)}.json"


def store(cache_dir, lt: LTable) -> Path:
    """Write atomically (temp file in the same directory, then rename)."""
    d = Path(cache_dir)
    d.mkdir(parents=True, exist_ok=True)
    target = _path(d, lt.group.spec)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(table_to_json(lt), fh, sort_keys=True, separators=(",", ":"))
        os.replace(tmp, target)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    return target


def load(cache_dir, twist: TwistTable) -> LTable | None:
    """The cached table, or None on a miss or a rejected entry."""
    path = _path(cache_dir, twist.group.spec)
    if not path.exists():
        return None
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
        return table_from_json(data, twist)
    except Exception as e:  # corrupt entries are never trusted
        warnings.warn(f"discarding cache entry {path.name}: {e}", CacheWarning, stacklevel=2)
        path.unlink(missing_ok=True)
        return None
