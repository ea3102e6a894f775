"""CSV/JSON serialization of run outputs plus the per-run manifest.

Data files are deterministic: numbers carry 12 significant digits, rows end
with LF, and rerunning a command yields byte-identical CSV/JSON payloads.
Only the manifest carries wall-clock information.
"""

from __future__ import annotations

import csv
import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

from .model import QuenchProtocol, SystemParams


def fmt(value: Any) -> str:
    """Render one CSV cell; floats get 12 significant digits."""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(cell) for cell in row])


def write_json(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2)
        handle.write("\n")


@dataclass
class RunManifest:
    """Record of one CLI invocation: inputs, outputs, and timing."""

    command: str
    tool_version: str
    params: dict
    protocol_segments: list[list[float]]
    dt_ns: float
    outputs: list[str] = field(default_factory=list)
    wall_clock_s: float = 0.0
    created_utc: str = ""

    @classmethod
    def for_run(
        cls,
        command: str,
        version: str,
        params: SystemParams,
        protocol: QuenchProtocol | None,
        dt_ns: float,
    ) -> "RunManifest":
        segments = [[d, g] for d, g in protocol.segments] if protocol is not None else []
        return cls(
            command=command,
            tool_version=version,
            params=dataclasses.asdict(params),
            protocol_segments=segments,
            dt_ns=dt_ns,
        )

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, payload: dict) -> "RunManifest":
        return cls(**payload)

    def write(self, path: Path) -> None:
        write_json(path, self.to_dict())
