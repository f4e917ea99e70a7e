"""JSON instance files.

Envelope files look like::

    {"bandwidth": 5, "streams": [{"id": "a", "peaks": [[h, s, e], ...]}, ...]}

Readers normalize peaks; writers emit normalized envelopes.  Malformed input
raises :class:`InstanceFileError` naming the offending field.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from .envelope import StreamEnvelope, normalize
from .reductions.coloring import Graph
from .reductions.scp import SCPInstance
from .reductions.stringpack import StringPackInstance


class InstanceFileError(ValueError):
    pass


@dataclass(frozen=True)
class EnvelopeFile:
    bandwidth: int
    streams: dict[str, StreamEnvelope]

    def to_json(self) -> dict:
        return {
            "bandwidth": self.bandwidth,
            "streams": [{"id": k, "peaks": v.to_list()} for k, v in self.streams.items()],
        }

    def __eq__(self, other) -> bool:
        if not isinstance(other, EnvelopeFile):
            return NotImplemented
        return self.bandwidth == other.bandwidth and list(self.streams.items()) == list(other.streams.items())


def _load(path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InstanceFileError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFileError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=None, separators=(", ", ": ")) + "\n"


def _write(path, obj: dict) -> None:
    Path(path).write_text(dumps(obj))


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
        raise InstanceFileError(f"{where}: expected an integer, got {value!r}")
    return int(value)


def _field(obj, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise InstanceFileError(f"{where}: missing field {key!r}")
    return obj[key]


def envelope_file_from_json(data, source: str = "<json>") -> EnvelopeFile:
    bw = _int(_field(data, "bandwidth", source), f"{source}: bandwidth")
    if bw <= 0:
        raise InstanceFileError(f"{source}: bandwidth must be positive")
    raw_streams = _field(data, "streams", source)
    if not isinstance(raw_streams, list):
        raise InstanceFileError(f"{source}: streams must be a list")
    streams: dict[str, StreamEnvelope] = {}
    for k, item in enumerate(raw_streams):
        where = f"{source}: streams[{k}]"
        sid = str(_field(item, "id", where))
        if sid in streams:
            raise InstanceFileError(f"{where}: duplicate id {sid!r}")
        peaks = _field(item, "peaks", where)
        if not isinstance(peaks, list):
            raise InstanceFileError(f"{where}.peaks: expected a list")
        triples = []
        for j, p in enumerate(peaks):
            if not isinstance(p, list) or len(p) != 3:
                raise InstanceFileError(f"{where}.peaks[{j}]: expected [height, start, end]")
            triples.append(tuple(_int(v, f"{where}.peaks[{j}]") for v in p))
        try:
            streams[sid] = normalize(triples)
        except ValueError as exc:
            raise InstanceFileError(f"{where}.peaks: {exc}") from exc
    return EnvelopeFile(bw, streams)


def read_envelope_file(path) -> EnvelopeFile:
    return envelope_file_from_json(_load(path), str(path))


def write_envelope_file(path, env_file: EnvelopeFile) -> None:
    _write(path, env_file.to_json())


def read_scp(path) -> SCPInstance:
    data = _load(path)
    try:
        pts = [_int(p, f"{path}: points") for p in _field(data, "points", str(path))]
        ivs = [[_int(v, f"{path}: intervals") for v in iv] for iv in _field(data, "intervals", str(path))]
        if any(len(iv) != 2 for iv in ivs):
            raise InstanceFileError(f"{path}: intervals must be [a, b] pairs")
        return SCPInstance.build(pts, ivs)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InstanceFileError):
            raise
        raise InstanceFileError(f"{path}: {exc}") from exc


def read_stringpack(path) -> StringPackInstance:
    data = _load(path)
    strings = _field(data, "strings", str(path))
    try:
        return StringPackInstance(tuple(str(s) for s in strings))
    except (TypeError, ValueError) as exc:
        raise InstanceFileError(f"{path}: {exc}") from exc


def read_graph(path) -> Graph:
    data = _load(path)
    n = _int(_field(data, "vertices", str(path)), f"{path}: vertices")
    try:
        edges = [tuple(_int(v, f"{path}: edges") for v in e) for e in _field(data, "edges", str(path))]
        return Graph(n, tuple(edges))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InstanceFileError):
            raise
        raise InstanceFileError(f"{path}: {exc}") from exc


def write_instance(path, instance) -> None:
    _write(path, instance.to_json())


def integer_scales(data: dict) -> tuple[int, int]:
    """Smallest time and rate multipliers that make every peak field an integer."""
    time_den, rate_den = 1, 1
    for item in data.get("streams", []):
        for h, s, e in item.get("peaks", []):
            rate_den = math.lcm(rate_den, Fraction(str(h)).denominator)
            for v in (s, e):
                time_den = math.lcm(time_den, Fraction(str(v)).denominator)
    bw = data.get("bandwidth", 1)
    rate_den = math.lcm(rate_den, Fraction(str(bw)).denominator)
    return time_den, rate_den


def scale_envelope_json(data: dict, time_factor: int | None = None, rate_factor: int | None = None) -> dict:
    """Multiply times and rates so a fractional envelope file becomes integral.

    Factors default to the least common denominators of the decimal values.
    Bandwidth scales with the rates.
    """
    auto_t, auto_r = integer_scales(data)
    tf = auto_t if time_factor is None else time_factor
    rf = auto_r if rate_factor is None else rate_factor

    def scaled(v, f, where):
        x = Fraction(str(v)) * f
        if x.denominator != 1:
            raise InstanceFileError(f"{where}: {v} * {f} is not an integer")
        return int(x)

    out = {"bandwidth": scaled(data["bandwidth"], rf, "bandwidth"), "streams": []}
    for k, item in enumerate(data["streams"]):
        peaks = [[scaled(h, rf, f"streams[{k}]"), scaled(s, tf, f"streams[{k}]"), scaled(e, tf, f"streams[{k}]")]
                 for h, s, e in item["peaks"]]
        out["streams"].append({"id": item["id"], "peaks": peaks})
    out["time_factor"] = tf
    out["rate_factor"] = rf
    return out
