# Input loaders and artifact writers
# JSON inputs: permutations {"image": [...]} and finite systems {"map": [...], "c": [...]}
# CSV artifacts go through pandas with "#" metadata lines on top

import json
import logging
import os
import sys

import pandas as pd

from config import Config
from omegalab.errors import ArgumentError
from omegalab.julia_moments import moment_frame
from omegalab.models import MomentTable, SampleCloud

logger = logging.getLogger(__name__)


def _read_json(path):
    if not os.path.exists(path):
        raise ArgumentError(f"File not found: {path}")
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except json.JSONDecodeError as exc:
        raise ArgumentError(f"{path} is not valid JSON: {exc}") from exc


def _int_list(values, field, path):
    if not isinstance(values, list) or not values:
        raise ArgumentError(f"{path}: field '{field}' must be a non-empty array")
    try:
        return [int(v) for v in values]
    except (TypeError, ValueError) as exc:
        raise ArgumentError(f"{path}: field '{field}' must hold integers") from exc


def load_permutation(path):
    """Image table of a permutation, from {"image": [...]} (0-based)"""
    data = _read_json(path)
    if not isinstance(data, dict) or "image" not in data:
        raise ArgumentError(f"{path}: expected an object with an 'image' array")
    image = _int_list(data["image"], "image", path)
    logger.info("Loaded permutation of %d points from %s", len(image), path)
    return image


def load_finite_system(path):
    """(map table, base potential) from {"map": [...], "c": [...]}; c defaults to zeros"""
    data = _read_json(path)
    if not isinstance(data, dict) or "map" not in data:
        raise ArgumentError(f"{path}: expected an object with a 'map' array")
    image = _int_list(data["map"], "map", path)
    c = data.get("c", [0.0] * len(image))
    try:
        c = [float(v) for v in c]
    except (TypeError, ValueError) as exc:
        raise ArgumentError(f"{path}: field 'c' must hold numbers") from exc
    if len(c) != len(image):
        raise ArgumentError(f"{path}: 'c' has {len(c)} values for {len(image)} states")
    logger.info("Loaded finite system of %d states from %s", len(image), path)
    return image, c


def render_csv(frame: pd.DataFrame, metadata=None):
    """CSV text preceded by one "# key: value" line per metadata entry"""
    header = "".join(
        f"# {key}: {json.dumps(value, sort_keys=True)}\n" for key, value in (metadata or {}).items()
    )
    body = frame.to_csv(index=False, float_format=Config.CSV_FLOAT_FORMAT, lineterminator="\n")
    return header + body


def render_json(payload):
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _write_text(text, path):
    """Write to path, or to standard output when path is None"""
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)
    logger.info("Wrote %s", path)


def write_csv(frame: pd.DataFrame, path=None, metadata=None):
    _write_text(render_csv(frame, metadata), path)


def read_csv(path):
    """Read a CSV artifact, skipping its metadata lines"""
    return pd.read_csv(path, comment="#")


def write_json(payload, path=None):
    _write_text(render_json(payload), path)


def export_moment_table(table: MomentTable, path, alpha=2, metadata=None):
    """CSV with columns k, coefficients, lambda (exact strings)"""
    write_csv(moment_frame(table, alpha), path, metadata)


def cloud_frame(cloud: SampleCloud) -> pd.DataFrame:
    return pd.DataFrame({"re": cloud.points.real, "im": cloud.points.imag})


def export_cloud(cloud: SampleCloud, csv_path, meta_path, metadata=None):
    """Points as CSV (re, im) plus a JSON sidecar with alpha, seed, burn-in and count"""
    meta = dict(metadata or {})
    meta.update(cloud.metadata())
    write_csv(cloud_frame(cloud), csv_path)
    write_json(meta, meta_path)
