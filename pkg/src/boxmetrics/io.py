"""Line-delimited box/pair file formats, cloud parsing, and report output."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .geometry import DEFAULT_TOL, OrientedBox
from .metrics import MetricReport, PointCloud, full_report

__all__ = [
    "ParseError",
    "InvalidBoxError",
    "BoxRecord",
    "PairJob",
    "ALL_METRICS",
    "parse_box_file",
    "parse_pairs_file",
    "parse_point_cloud",
    "serialize_box_record",
    "run_pair",
    "run_batch",
]

ALL_METRICS = ("iou", "v2v", "bbd", "position", "size", "rotation", "point_iou")

_ROTATION_KEYS = ("matrix", "quaternion", "euler_xyz")


class ParseError(ValueError):
    """Malformed input file; carries the offending location."""

    def __init__(self, path, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = str(path)
        self.line = line


class InvalidBoxError(ValueError):
    """Record that parses but does not describe a valid box."""

    def __init__(self, box_id: str, reason: str):
        super().__init__(f"box {box_id!r}: {reason}")
        self.box_id = box_id
        self.reason = reason


@dataclass(frozen=True)
class BoxRecord:
    """One serialized box: id, center, tagged rotation, dimensions."""

    box_id: str
    center: tuple[float, float, float]
    rotation: dict
    dimensions: tuple[float, float, float]

    def to_box(self) -> OrientedBox:
        key, value = next(iter(self.rotation.items()))
        try:
            if key == "matrix":
                return OrientedBox(self.center, np.reshape(value, (3, 3)), self.dimensions)
            if key == "quaternion":
                return OrientedBox.from_quaternion(self.center, value, self.dimensions)
            return OrientedBox.from_euler_xyz(self.center, value, self.dimensions)
        except ValueError as exc:
            raise InvalidBoxError(self.box_id, str(exc)) from exc


@dataclass(frozen=True)
class PairJob:
    """One unit of batch work: two box ids and an optional cloud path."""

    box_a: str
    box_b: str
    cloud_path: str | None = None


def _numbers(value, count: int, what: str) -> tuple[float, ...]:
    try:
        out = tuple(float(v) for v in value)
    except (TypeError, ValueError):
        raise ValueError(f"{what} must be a list of numbers")
    if len(out) != count:
        raise ValueError(f"{what} must have {count} entries, got {len(out)}")
    return out


def _record_from_obj(obj) -> BoxRecord:
    if not isinstance(obj, dict):
        raise ValueError("record must be an object")
    try:
        box_id = obj["id"]
        center = obj["center"]
        rotation = obj["rotation"]
        dimensions = obj["dimensions"]
    except KeyError as exc:
        raise ValueError(f"missing field {exc.args[0]!r}")
    if not isinstance(box_id, str) or not box_id:
        raise ValueError("id must be a non-empty string")
    if not isinstance(rotation, dict) or len(rotation) != 1:
        raise ValueError(f"rotation must carry exactly one of {_ROTATION_KEYS}")
    key, value = next(iter(rotation.items()))
    if key not in _ROTATION_KEYS:
        raise ValueError(f"unknown rotation form {key!r}")
    sizes = {"matrix": 9, "quaternion": 4, "euler_xyz": 3}
    rotation = {key: list(_numbers(value, sizes[key], f"rotation.{key}"))}
    return BoxRecord(
        box_id=box_id,
        center=_numbers(center, 3, "center"),
        rotation=rotation,
        dimensions=_numbers(dimensions, 3, "dimensions"),
    )


def parse_box_file(path) -> list[BoxRecord]:
    """Parse one JSON box record per line; duplicate ids are rejected.

    Raises ParseError for malformed lines and InvalidBoxError for records
    that do not construct a valid box.
    """
    records: list[BoxRecord] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, lineno, f"invalid JSON: {exc.msg}") from exc
            try:
                record = _record_from_obj(obj)
            except ValueError as exc:
                raise ParseError(path, lineno, str(exc)) from exc
            if record.box_id in seen:
                raise ParseError(path, lineno, f"duplicate id {record.box_id!r}")
            seen.add(record.box_id)
            record.to_box()  # validate now so errors carry the id
            records.append(record)
    return records


def serialize_box_record(record: BoxRecord) -> str:
    """One JSON line; parse_box_file round-trips it."""
    return json.dumps(
        {
            "id": record.box_id,
            "center": list(record.center),
            "rotation": record.rotation,
            "dimensions": list(record.dimensions),
        },
        separators=(",", ":"),
    )


def parse_pairs_file(path) -> list[PairJob]:
    """Parse one JSON pair job per line: boxA, boxB, optional cloud."""
    jobs: list[PairJob] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, lineno, f"invalid JSON: {exc.msg}") from exc
            if not isinstance(obj, dict) or "boxA" not in obj or "boxB" not in obj:
                raise ParseError(path, lineno, "pair job needs boxA and boxB")
            cloud = obj.get("cloud")
            if cloud is not None and not isinstance(cloud, str):
                raise ParseError(path, lineno, "cloud must be a path string")
            jobs.append(PairJob(str(obj["boxA"]), str(obj["boxB"]), cloud))
    return jobs


def parse_point_cloud(path) -> PointCloud:
    """Read a cloud from whitespace 'x y z' lines or an ascii PLY file."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if lines and lines[0].strip() == "ply":
        return _parse_ply(path, lines)
    points = []
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped:
            continue
        parts = stripped.split()
        if len(parts) != 3:
            raise ParseError(path, lineno, f"expected 3 coordinates, got {len(parts)}")
        try:
            points.append([float(p) for p in parts])
        except ValueError:
            raise ParseError(path, lineno, "coordinates must be numbers")
    return PointCloud(np.array(points).reshape(-1, 3))


def _parse_ply(path, lines: list[str]) -> PointCloud:
    vertex_count = None
    properties: list[str] = []
    in_vertex_element = False
    body_start = None
    for lineno, line in enumerate(lines[1:], start=2):
        tokens = line.split()
        if not tokens or tokens[0] == "comment":
            continue
        if tokens[0] == "format":
            if len(tokens) < 2 or tokens[1] != "ascii":
                raise ParseError(path, lineno, "only ascii PLY is supported")
        elif tokens[0] == "element":
            in_vertex_element = tokens[1] == "vertex"
            if in_vertex_element:
                vertex_count = int(tokens[2])
        elif tokens[0] == "property" and in_vertex_element:
            properties.append(tokens[-1])
        elif tokens[0] == "end_header":
            body_start = lineno
            break
    if body_start is None or vertex_count is None:
        raise ParseError(path, len(lines), "PLY header missing end_header or vertex element")
    try:
        cols = [properties.index(name) for name in ("x", "y", "z")]
    except ValueError:
        raise ParseError(path, body_start, "PLY vertex element must carry x, y, z")

    points = []
    body = lines[body_start : body_start + vertex_count]
    if len(body) < vertex_count:
        raise ParseError(path, len(lines), f"expected {vertex_count} vertices, file ended early")
    for offset, line in enumerate(body):
        parts = line.split()
        try:
            points.append([float(parts[c]) for c in cols])
        except (IndexError, ValueError):
            raise ParseError(path, body_start + 1 + offset, "malformed vertex line")
    return PointCloud(np.array(points).reshape(-1, 3))


def _round12(value: float) -> float:
    return float(f"{value:.12g}")


def _report_payload(report: MetricReport, metrics: tuple[str, ...]) -> dict:
    want = set(metrics)
    payload = {
        "iou": _round12(report.iou) if "iou" in want else None,
        "v2v": _round12(report.v2v) if "v2v" in want else None,
        "bbd": _round12(report.bbd) if "bbd" in want else None,
        "position_diff": (
            {"abs": _round12(report.position_diff_abs), "squared": _round12(report.position_diff_squared)}
            if "position" in want
            else None
        ),
        "size_diff": (
            {"abs": _round12(report.size_diff_abs), "squared": _round12(report.size_diff_squared)}
            if "size" in want
            else None
        ),
        "rotation": (
            {
                "euler_diff": [_round12(v) for v in report.euler_diff],
                "quaternion_distance": _round12(report.quaternion_distance),
                "matrix_geodesic": _round12(report.matrix_geodesic),
            }
            if "rotation" in want
            else None
        ),
        "point_iou": (
            _round12(report.point_iou)
            if "point_iou" in want and report.point_iou is not None
            else None
        ),
        "warnings": list(report.warnings),
    }
    return payload


def _resolve_metrics(metrics) -> tuple[str, ...]:
    if metrics is None:
        return ALL_METRICS
    unknown = set(metrics) - set(ALL_METRICS)
    if unknown:
        raise ValueError(f"unknown metrics: {sorted(unknown)}")
    chosen = set(metrics)
    if "bbd" in chosen:
        chosen |= {"iou", "v2v"}
    return tuple(m for m in ALL_METRICS if m in chosen)


def _pair_payload(record_a: BoxRecord, record_b: BoxRecord, cloud, tol, chosen) -> dict:
    report = full_report(record_a.to_box(), record_b.to_box(), cloud=cloud, tol=tol)
    payload = {"boxA": record_a.box_id, "boxB": record_b.box_id}
    payload.update(_report_payload(report, chosen))
    payload["tol"] = _round12(tol)
    payload["tool_version"] = __version__
    return payload


def run_pair(
    record_a: BoxRecord,
    record_b: BoxRecord,
    *,
    cloud: PointCloud | None = None,
    tol: float = DEFAULT_TOL,
    metrics=None,
) -> str:
    """Evaluate one pair and serialize the report as a JSON line."""
    payload = _pair_payload(record_a, record_b, cloud, tol, _resolve_metrics(metrics))
    return json.dumps(payload, separators=(",", ":"))


def run_batch(
    box_path,
    pairs_path,
    out,
    *,
    tol: float = DEFAULT_TOL,
    metrics=None,
    workers: int = 1,
) -> int:
    """Evaluate every pair job, streaming one report line per job plus a summary.

    Job failures become in-stream error records and the batch continues;
    the return value is the process exit status (0 clean, 1 any job error).
    Output order always matches job order, regardless of worker count.
    """
    records = {r.box_id: r for r in parse_box_file(box_path)}
    jobs = parse_pairs_file(pairs_path)
    chosen = _resolve_metrics(metrics)

    def evaluate(indexed_job: tuple[int, PairJob]) -> tuple[dict, bool]:
        index, job = indexed_job
        try:
            try:
                rec_a = records[job.box_a]
                rec_b = records[job.box_b]
            except KeyError as exc:
                raise ValueError(f"unknown box id {exc.args[0]!r}")
            cloud = parse_point_cloud(job.cloud_path) if job.cloud_path else None
            payload = _pair_payload(rec_a, rec_b, cloud, tol, chosen)
        except (ValueError, OSError) as exc:
            error = {"job": index, "boxA": job.box_a, "boxB": job.box_b, "error": str(exc)}
            return error, True
        return {"job": index, **payload}, False

    indexed = list(enumerate(jobs))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(evaluate, indexed))
    else:
        results = [evaluate(item) for item in indexed]

    ious: list[float] = []
    bbds: list[float] = []
    failures = 0
    for payload, failed in results:
        out.write(json.dumps(payload, separators=(",", ":")) + "\n")
        if failed:
            failures += 1
            continue
        if payload.get("iou") is not None:
            ious.append(payload["iou"])
        if payload.get("bbd") is not None:
            bbds.append(payload["bbd"])

    summary = {
        "summary": {
            "count": len(jobs),
            "errors": failures,
            "mean_iou": _round12(sum(ious) / len(ious)) if ious else None,
            "mean_bbd": _round12(sum(bbds) / len(bbds)) if bbds else None,
        }
    }
    out.write(json.dumps(summary, separators=(",", ":")) + "\n")
    return 1 if failures else 0
