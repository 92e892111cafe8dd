"""Shared plumbing: seed derivation, deterministic CSV io, provenance headers."""

from __future__ import annotations

import hashlib
import json
import os


def derive_seed(seed: int, *labels) -> int:
    """Derive a child seed from a parent seed and a label path.

    Stable across runs and platforms (sha256 based, no salted hashing).
    """
    h = hashlib.sha256()
    h.update(str(int(seed)).encode())
    for lab in labels:
        h.update(b"/")
        h.update(str(lab).encode())
    return int.from_bytes(h.digest()[:8], "big") % (2**63)


def fmt_num(x) -> str:
    """Format a number for CSV output: shortest round-trip repr, stable."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    xf = float(x)
    if xf != xf:  # NaN marks a missing cell
        return ""
    if xf == int(xf) and abs(xf) < 1e15:
        return repr(xf)
    return repr(xf)


def write_csv(path, header, rows, provenance: dict | None = None) -> None:
    """Write a CSV with an optional provenance comment header.

    Values are formatted with fmt_num when numeric, written verbatim when str.
    Output is byte-deterministic for identical inputs.
    """
    lines = []
    if provenance:
        for k in sorted(provenance):
            lines.append(f"# {k}={provenance[k]}")
    lines.append(",".join(header))
    for row in rows:
        cells = [c if isinstance(c, str) else fmt_num(c) for c in row]
        lines.append(",".join(cells))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def read_csv(path):
    """Read a CSV written by write_csv: returns (header, rows of str cells).

    Comment lines (leading '#') are skipped.
    """
    header = None
    rows = []
    with open(path, "r") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            cells = line.split(",")
            if header is None:
                header = cells
            else:
                rows.append(cells)
    if header is None:
        raise ValueError(f"{path}: empty CSV")
    return header, rows


def config_digest(config: dict) -> str:
    """Stable short digest of a config mapping, for provenance headers."""
    blob = json.dumps(config, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def env_seed_override(default: int) -> int:
    """Resolve the global seed, honoring the FONTSPACE_SEED env variable."""
    raw = os.environ.get("FONTSPACE_SEED")
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError(f"FONTSPACE_SEED must be an integer, got {raw!r}") from exc
