"""Serialization of weight specs, test functions, and structured reports.

Weight documents are JSON objects ``{"kind": str, "d": int, "params": {...}}``
with nested factor documents for products.  Reports embed the fully resolved
run configuration and the package version, carry no timestamps, and are
written with sorted keys, so replaying an embedded configuration reproduces
the report byte for byte.
"""

from __future__ import annotations

import json
from typing import Any

from . import __version__
from .errors import SpecValidationError
from .weights import (
    BumpDepression,
    Constant,
    Corridor,
    Cube,
    HalfLinePower,
    PiecewiseProfile,
    Power,
    Product,
    ProfileSegment,
    RadialProfile,
    WeightSpec,
)
from .witnesses import (
    TestFunction,
    bump_chain,
    constant_function,
    divergence_witness,
    hat_bump,
    loglog_function,
)

SCHEMA_VERSION = 1


def weight_to_dict(spec: WeightSpec) -> dict:
    return spec.descriptor()


def weight_from_dict(doc: dict) -> WeightSpec:
    try:
        kind = doc["kind"]
        d = int(doc["d"])
        params = doc.get("params", {})
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecValidationError(f"malformed weight document: {exc}") from exc
    if kind == "constant":
        return Constant(c=float(params["c"]), d=d)
    if kind == "power":
        return Power(alpha=float(params["alpha"]), d=d)
    if kind == "radial_profile":
        profile = PiecewiseProfile(
            breakpoints=tuple(float(b) for b in params["breakpoints"]),
            segments=tuple(
                ProfileSegment(coeff=float(s["coeff"]), power=float(s["power"]))
                for s in params["segments"]
            ),
        )
        return RadialProfile(profile=profile, d=d)
    if kind == "product":
        return Product(
            w1=weight_from_dict(params["w1"]),
            w2=weight_from_dict(params["w2"]),
            d=d,
        )
    if kind == "corridor":
        return Corridor(alpha=float(params["alpha"]), beta=float(params["beta"]), d=d)
    if kind == "bump_depression":
        return BumpDepression(
            centers=tuple(tuple(float(x) for x in c) for c in params["centers"]),
            alpha=float(params["alpha"]),
            d=d,
        )
    if kind == "half_line_power":
        return HalfLinePower(alpha=float(params["alpha"]), d=d)
    raise SpecValidationError(f"unknown weight kind '{kind}'")


def function_to_dict(fn: TestFunction) -> dict:
    return fn.descriptor()


def function_from_dict(doc: dict, seed: int = 0) -> TestFunction:
    """Rebuild a test function from its descriptor.

    Divergence witnesses are reconstructed from their embedded weight
    document and parameters, so a trace report is replayable on its own.
    """
    try:
        kind = doc["kind"]
        d = int(doc["d"])
        params = doc.get("params", {})
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecValidationError(f"malformed function document: {exc}") from exc
    if kind == "constant":
        return constant_function(d, float(params["value"]))
    if kind == "loglog":
        return loglog_function(d)
    if kind == "hat_bump":
        return hat_bump(Cube(tuple(params["center"]), float(params["edge"])))
    if kind == "bump_chain":
        cubes = [Cube(tuple(c["center"]), float(c["edge"])) for c in params["cubes"]]
        return bump_chain(cubes, [float(a) for a in params["amplitudes"]])
    if kind == "divergence_witness":
        from .weights import QuadratureConfig

        spec = weight_from_dict(params["weight"])
        quad = QuadratureConfig(seed=seed)
        witness = divergence_witness(
            spec,
            float(params["p"]),
            int(params["i_max"]),
            quad,
            i_min=int(params.get("i_min", 1)),
        )
        return witness.fn
    raise SpecValidationError(f"unknown function kind '{kind}'")


def make_report(command: str, config: dict, results: Any) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "wlimits", "version": __version__},
        "command": command,
        "config": config,
        "results": results,
    }


def dump_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def write_report(path: str, report: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_report(report))


def load_report(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def trace_csv(report) -> str:
    """CSV with a verdict header line and full round-trip float precision."""
    lines = [
        f"# kind={report.kind} base={','.join(repr(b) for b in report.base)} "
        f"verdict={report.verdict} c={report.c!r} residual={report.residual!r}",
        "t,u",
    ]
    for t, u in zip(report.times, report.values):
        lines.append(f"{t!r},{u!r}")
    return "\n".join(lines) + "\n"
