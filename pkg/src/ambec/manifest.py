"""Run manifests and deterministic CSV input/output.

Every data file the CLI writes is paired with a manifest JSON recording
the command, its full parameter set, tool version, file paths and wall
time.  Data files themselves are byte-identical across reruns; only the
manifest's duration field may differ.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

TOOL_VERSION = "0.1.0"


def format_float(v: float) -> str:
    """15-significant-digit, locale-independent rendering."""
    return "%.15g" % v


def _format_value(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (int,)) and not isinstance(v, bool):
        return str(v)
    return format_float(float(v))


@dataclass
class RunManifest:
    """What produced a set of output files."""

    command: str
    parameters: dict
    inputs: list = field(default_factory=list)
    outputs: list = field(default_factory=list)
    version: str = TOOL_VERSION
    duration_s: float = 0.0

    def write(self, path: str) -> None:
        body = {
            "command": self.command,
            "parameters": self.parameters,
            "inputs": list(self.inputs),
            "outputs": list(self.outputs),
            "version": self.version,
            "duration_s": self.duration_s,
        }
        with open(path, "w", encoding="utf-8") as f:
            json.dump(body, f, indent=2, sort_keys=True)
            f.write("\n")

    @classmethod
    def read(cls, path: str) -> "RunManifest":
        with open(path, encoding="utf-8") as f:
            body = json.load(f)
        return cls(command=body["command"], parameters=body["parameters"],
                   inputs=body["inputs"], outputs=body["outputs"],
                   version=body["version"], duration_s=body["duration_s"])


def write_csv(path: str, header, rows, manifest_path: str | None = None,
              comments=()) -> None:
    """One header line, %.15g floats, trailing manifest pointer comment."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for c in comments:
            f.write(f"# {c}\n")
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(_format_value(v) for v in row) + "\n")
        if manifest_path is not None:
            f.write(f"# manifest: {manifest_path}\n")


@dataclass
class CsvData:
    """Parsed CSV: leading comments, header, typed rows, manifest pointer."""

    comments: list
    header: list
    rows: list
    manifest: str | None


def _parse_cell(cell: str):
    try:
        return float(cell)
    except ValueError:
        return cell


def read_csv(path: str) -> CsvData:
    """Read a CSV written by write_csv; floats are converted back."""
    comments, header, rows, manifest = [], None, [], None
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                text = line[1:].strip()
                if text.startswith("manifest:"):
                    manifest = text[len("manifest:"):].strip()
                else:
                    comments.append(text)
            elif header is None:
                header = line.split(",")
            else:
                rows.append([_parse_cell(c) for c in line.split(",")])
    if header is None:
        raise ValueError(f"{path} has no header line")
    return CsvData(comments=comments, header=header, rows=rows,
                   manifest=manifest)
