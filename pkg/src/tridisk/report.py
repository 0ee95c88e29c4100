"""End-to-end verification pipeline and its JSON report."""
from __future__ import annotations

import hashlib
import json
import time
from pathlib import Path

import numpy as np

from . import bounds as bounds_mod
from .approximation import build_approximation_sequence, limit_disk
from .errors import ReflexQuadVertex, TridiskError
from .geometry import PolygonalQuadrilateral
from .geodesic import internal_side_distance
from .medial_axis import compute_medial_axis
from .modulus import estimate_modulus
from .sweep import brute_force_three_side_disk, find_three_side_disk

SCHEMA_VERSION = "1"


def _round_floats(obj, ndigits=12):
    if isinstance(obj, float):
        return round(obj, ndigits)
    if isinstance(obj, dict):
        return {k: _round_floats(v, ndigits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v, ndigits) for v in obj]
    return obj


def run_verification(
    q: PolygonalQuadrilateral,
    *,
    cells: int = 256,
    oracle: bool = False,
    timings: bool = False,
    input_path: str | None = None,
) -> dict:
    """Run geodesics, modulus, bounds and the disk sweep; return the report dict.

    Inputs with non-convex quad-vertices (or sampled smooth boundaries whose
    marks are almost straight) are routed through the inner-approximation
    pipeline before sweeping.
    """
    t_all = time.perf_counter()
    timing = {}

    t0 = time.perf_counter()
    s_a, wit_a = internal_side_distance(q, "a")
    s_b, wit_b = internal_side_distance(q, "b")
    timing["geodesic_s"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    h = q.diameter / cells
    mod = estimate_modulus(q, h)
    timing["modulus_s"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    via_approximation = False
    if q.quad_vertices_convex():
        disk, transcript = find_three_side_disk(q)
        transcript_json = transcript.to_json()
    else:
        via_approximation = True
        seq = build_approximation_sequence(q, 3)
        disks = [find_three_side_disk(lv)[0] for lv in seq.levels]
        disk = limit_disk(seq, disks)
        transcript_json = None
    timing["disk_s"] = time.perf_counter() - t0

    K = 1.05 * max(mod.value, 1.0 / mod.value)
    corollary = bounds_mod.verify_corollary(
        q, disk, K, modulus=mod.value, s_a=s_a, s_b=s_b
    )

    checks = dict(corollary["pass"])
    checks["three_labels"] = len(disk.label_set) >= 3
    # disk soundness: the sampled circle never leaves the closed polygon
    theta = np.linspace(0.0, 2.0 * np.pi, 1024, endpoint=False)
    ring = np.asarray(disk.center)[None, :] + disk.radius * np.column_stack(
        [np.cos(theta), np.sin(theta)]
    )
    checks["disk_inside"] = bool(q.contains(ring, tol=1e-9 * q.diameter).all())
    contact_res = max(
        (abs(np.hypot(c.point[0] - disk.center[0], c.point[1] - disk.center[1])
             - disk.radius) for c in disk.contacts),
        default=0.0,
    )
    checks["contact_residual"] = bool(contact_res <= q.tau_contact)

    oracle_json = None
    if oracle:
        t0 = time.perf_counter()
        odisk = brute_force_three_side_disk(q, 128)
        timing["oracle_s"] = time.perf_counter() - t0
        checks["oracle_radius"] = bool(
            disk.radius >= odisk.radius - 4.0 * q.diameter / 128.0
        )
        oracle_json = odisk.to_json()

    report = {
        "schema_version": SCHEMA_VERSION,
        "input": {
            "path": input_path,
            "sha256": hashlib.sha256(
                json.dumps(q.to_json_dict(), sort_keys=True).encode()
            ).hexdigest(),
            "n_vertices": q.n,
            "quad_vertices": list(q.quad_indices),
        },
        "s_a": s_a,
        "s_b": s_b,
        "modulus": mod.to_json(),
        "lv_lower": corollary["lv_lower"],
        "lv_upper": corollary["lv_upper"],
        "K": K,
        "L": corollary["L"],
        "delta": corollary["delta"],
        "disk": disk.to_json(),
        "via_approximation": via_approximation,
        "witness_a": wit_a.to_json(),
        "witness_b": wit_b.to_json(),
        "transcript": transcript_json,
        "oracle_disk": oracle_json,
        "pass": checks,
        "ok": all(checks.values()),
    }
    if timings:
        timing["total_s"] = time.perf_counter() - t_all
        report["timings"] = timing
    return _round_floats(report)


def report_to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def verify_file(path, **kw) -> dict:
    q = PolygonalQuadrilateral.from_file(path)
    return run_verification(q, input_path=str(path), **kw)


def schema_path() -> Path:
    return Path(__file__).parent / "schemas" / "report.schema.json"
