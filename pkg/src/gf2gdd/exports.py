"""Deterministic design exports, re-import, and run manifests.

JSON is the canonical machine form: field elements are hex bitmask
strings, keys are emitted in a fixed order, and serialization is
byte-stable, so a digest of the JSON body identifies a run.  CSV is the
human-facing table form and renders elements in the caller's notation.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np

from . import __version__
from .construction import sort_block_rows
from .field import FieldContext, build_field
from .reporting import VerificationReport
from .verifier import DesignTriple


def _hex(a: int) -> str:
    return format(int(a), "#x")


def header_dict(ctx: FieldContext, k: int | None = None) -> dict:
    h = {
        "tool": "gf2gdd",
        "version": __version__,
        "m": ctx.m,
        "modulus": _hex(ctx.modulus),
        "alpha": _hex(ctx.alpha),
        "notation": "hex",
    }
    if k is not None:
        h["k"] = k
    return h


def build_document(ctx: FieldContext, k: int | None = None,
                   groups: Sequence[Sequence[int]] | None = None,
                   blocks: np.ndarray | Sequence[Sequence[int]] | None = None,
                   params: dict | None = None,
                   report: VerificationReport | None = None,
                   extra: dict | None = None) -> dict:
    """Assemble the canonical export document; sections in fixed order."""
    doc: dict = {"header": header_dict(ctx, k)}
    if groups is not None:
        doc["groups"] = [[_hex(x) for x in g] for g in groups]
    if blocks is not None:
        arr = np.asarray(blocks)
        if arr.size:
            arr = sort_block_rows(arr)
        doc["blocks"] = [[_hex(x) for x in row] for row in arr.tolist()]
    if params is not None:
        doc["params"] = params
    if report is not None:
        doc["report"] = report.as_dict()
    if extra:
        doc.update(extra)
    return doc


def dumps_canonical(doc: dict) -> bytes:
    """Byte-stable JSON encoding with a trailing newline."""
    return (json.dumps(doc, indent=2, ensure_ascii=True, sort_keys=False) + "\n").encode()


def digest(doc: dict) -> str:
    return hashlib.sha256(dumps_canonical(doc)).hexdigest()


def write_json(path: str, doc: dict) -> str:
    body = dumps_canonical(doc)
    with open(path, "wb") as fh:
        fh.write(body)
    return hashlib.sha256(body).hexdigest()


def write_csv(path: str, ctx: FieldContext, rows: Iterable[Sequence[int]],
              notation: str = "power", meta: dict | None = None) -> None:
    """One row per block or group, elements in the chosen notation."""
    lines = []
    if meta:
        pairs = ",".join(f"{k}={v}" for k, v in meta.items())
        lines.append(f"# {pairs}")
    for row in rows:
        lines.append(",".join(ctx.format_element(int(x), notation) for x in row))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def import_design(path: str) -> tuple[FieldContext, DesignTriple]:
    """Rebuild the field context and design triple from a JSON export."""
    with open(path, "rb") as fh:
        doc = json.load(fh)
    h = doc["header"]
    ctx = build_field(int(h["m"]), int(h["modulus"], 0))
    if ctx.alpha != int(h["alpha"], 0):
        raise ValueError(f"export generator {h['alpha']} does not match "
                         f"the rebuilt context {ctx.alpha:#x}")
    groups = tuple(tuple(ctx.parse_element(x) for x in g)
                   for g in doc.get("groups", []))
    blocks = tuple(tuple(ctx.parse_element(x) for x in b)
                   for b in doc.get("blocks", []))
    return ctx, DesignTriple(universe=tuple(ctx.x_elements()),
                             groups=groups, blocks=blocks)


@dataclass(frozen=True)
class RunManifest:
    """Provenance record for one CLI run."""

    command: list[str]
    m: int
    modulus: str
    alpha: str
    k: int | None
    seed: int | None
    threads: int | None
    backend: str
    duration_s: float
    digest: str
    version: str = __version__

    def as_dict(self) -> dict:
        return asdict(self)


def write_manifest(path: str, manifest: RunManifest) -> None:
    with open(path, "w", encoding="ascii") as fh:
        json.dump(manifest.as_dict(), fh, indent=2)
        fh.write("\n")
