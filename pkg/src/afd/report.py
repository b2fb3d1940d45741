"""Command dispatch and deterministic report emission.

Running a command over a manifest produces a :class:`ReportDocument`; the
same manifest and command always serialize to byte-identical output (sorted
JSON keys, declaration-ordered results, no timestamps).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import __version__
from .curvature import (
    curvature_report,
    efe_residual,
    levi_civita,
)
from .errors import AfdError, ManifestValidationError
from .expr import parse_scalar, render_scalar
from .manifest import COMMANDS, CheckSpec
from .maps import geodesic_residual
from .tensors import lie_derivative, metric_inverse


@dataclass
class ReportDocument:
    """Inputs echo plus per-check results, ready for serialization."""

    command: str
    manifest_echo: dict
    results: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def summary(self):
        counts = {"pass": 0, "fail": 0, "info": 0, "error": 0}
        for result in self.results:
            counts[result["status"]] += 1
        return counts

    @property
    def exit_code(self):
        summary = self.summary
        return 2 if summary["fail"] or summary["error"] else 0

    def to_payload(self):
        return {
            "engine": {"name": "afd", "version": __version__},
            "command": self.command,
            "manifest": self.manifest_echo,
            "results": self.results,
            "summary": self.summary,
            "warnings": sorted(self.warnings),
        }


def emit_report(report, fmt="json"):
    """Serialize a report canonically; JSON keys sorted, stable ordering."""
    if fmt == "json":
        return json.dumps(report.to_payload(), sort_keys=True, indent=2) + "\n"
    if fmt == "text":
        return _to_text(report)
    raise ValueError(f"unknown report format {fmt!r}")


def _to_text(report):
    lines = [f"afd {__version__} command={report.command}"]
    for warning in sorted(report.warnings):
        lines.append(f"warning: {warning}")
    for result in report.results:
        status = result["status"]
        lines.append(f"[{status}] {result['name']} ({result['command']})")
        for key in sorted(result):
            if key in ("name", "command", "status"):
                continue
            lines.append(f"  {key}: {_text_value(result[key])}")
    summary = report.summary
    lines.append("summary: " + ", ".join(
        f"{summary[k]} {k}" for k in ("pass", "fail", "info", "error")))
    return "\n".join(lines) + "\n"


def _text_value(value):
    if isinstance(value, dict) and "components" in value:
        rank = value["rank"]
        comps = value["components"]
        if not comps:
            return f"rank ({rank[0]},{rank[1]}): 0"
        body = "; ".join(
            f"[{','.join(str(i) for i in c['index'])}] = {c['value']}"
            for c in comps)
        return f"rank ({rank[0]},{rank[1]}): {body}"
    if isinstance(value, list):
        return "(" + ", ".join(str(v) for v in value) + ")"
    return str(value)


def tensor_payload(tensor):
    """Sparse canonical serialization: sorted index -> rendered expression."""
    return {
        "rank": [tensor.r, tensor.s],
        "components": [
            {"index": list(idx), "value": render_scalar(value)}
            for idx, value in tensor.sorted_components()
        ],
    }


# ---------------------------------------------------------------------------
# Command execution
# ---------------------------------------------------------------------------

class _Runtime:
    """Caches expensive objects across the checks of one run."""

    def __init__(self, manifest):
        self.manifest = manifest
        self._metric = None
        self._curvature = None
        self._homs = {}

    @property
    def algebraifold(self):
        return self.manifest.algebraifold

    def metric(self):
        if self._metric is None:
            self._metric = metric_inverse(self.algebraifold,
                                          self.manifest.metric_tensor())
        return self._metric

    def curvature(self):
        if self._curvature is None:
            self._curvature = curvature_report(self.algebraifold, self.metric())
        return self._curvature

    def hom(self, curve_name):
        if curve_name not in self._homs:
            self._homs[curve_name] = self.manifest.curve_hom(curve_name)
        return self._homs[curve_name]


def _expect_status(expect, is_zero):
    if expect is None:
        return "info"
    if expect == "zero":
        return "pass" if is_zero else "fail"
    return "pass" if not is_zero else "fail"


def _run_check(runtime, spec):
    manifest = runtime.manifest
    A = runtime.algebraifold
    ctx = A.ctx
    result = {"name": spec.name, "command": spec.command}
    options = spec.options

    if spec.command == "dim":
        value = render_scalar(A.dimension())
        result["dimension"] = value
        expect = options.get("expect")
        if expect is None:
            result["status"] = "info"
        else:
            expected = render_scalar(parse_scalar(expect, ctx))
            result["expected"] = expected
            result["status"] = "pass" if value == expected else "fail"

    elif spec.command == "christoffel":
        connection = levi_civita(A, runtime.metric())
        result["christoffel"] = tensor_payload(connection.gamma)
        result["status"] = "info"

    elif spec.command == "curvature":
        report = runtime.curvature()
        result["riemann"] = tensor_payload(report.riemann)
        result["ricci"] = tensor_payload(report.ricci)
        result["ricci_scalar"] = render_scalar(report.scalar)
        result["einstein"] = tensor_payload(report.einstein)
        result["status"] = "info"

    elif spec.command == "efe":
        lam = parse_scalar(manifest.lambda_text, ctx)
        kappa = parse_scalar(manifest.kappa_text, ctx)
        residual = efe_residual(A, runtime.metric(), lam, kappa,
                                manifest.stress_tensor())
        result["lambda"] = render_scalar(lam)
        result["kappa"] = render_scalar(kappa)
        result["residual"] = tensor_payload(residual)
        result["status"] = _expect_status(options.get("expect", "zero"),
                                          residual.is_zero)

    elif spec.command == "geodesic":
        curve = options["curve"]
        hom = runtime.hom(curve)
        connection = levi_civita(A, runtime.metric())
        residual = geodesic_residual(manifest.line, hom, connection)
        result["curve"] = curve
        result["residual"] = [render_scalar(c) for c in residual.coeffs]
        result["status"] = _expect_status(options.get("expect"),
                                          residual.is_zero)

    elif spec.command == "lie":
        vector = A.derivation(*options["vector"])
        derivative = lie_derivative(A, vector, runtime.metric().g)
        result["vector"] = list(options["vector"])
        result["metric_derivative"] = tensor_payload(derivative)
        result["status"] = _expect_status(options.get("expect"),
                                          derivative.is_zero)

    elif spec.command == "bracket":
        u = A.derivation(*options["u"])
        v = A.derivation(*options["v"])
        w = A.bracket(u, v)
        result["u"] = list(options["u"])
        result["v"] = list(options["v"])
        result["bracket"] = [render_scalar(c) for c in w.coeffs]
        result["status"] = _expect_status(options.get("expect"), w.is_zero)

    elif spec.command == "pullback":
        curve = options["curve"]
        hom = runtime.hom(curve)
        xi = A.one_form(*options["one_form"])
        pulled = hom.pullback(xi)
        result["curve"] = curve
        result["one_form"] = list(options["one_form"])
        result["pulled"] = [render_scalar(c) for c in pulled.coeffs]
        result["status"] = "info"

    else:  # pragma: no cover - guarded by manifest validation
        raise ManifestValidationError(f"unknown command {spec.command!r}")
    return result


def _default_checks(manifest, command):
    if command == "dim":
        return [CheckSpec("dim", "dim", {})]
    if command in ("christoffel", "curvature", "efe"):
        if not manifest.metric_exprs:
            raise ManifestValidationError("manifest declares no metric")
        options = {"expect": "zero"} if command == "efe" else {}
        return [CheckSpec(command, command, options)]
    if command == "geodesic":
        if not manifest.metric_exprs or not manifest.curves:
            raise ManifestValidationError(
                "geodesic checks need a metric and at least one curve")
        return [CheckSpec(f"geodesic:{name}", "geodesic", {"curve": name})
                for name in sorted(manifest.curves)]
    raise ManifestValidationError(
        f"manifest declares no '{command}' checks")


def run_command(manifest, command, only=None):
    """Execute a command over a manifest and assemble the report.

    ``only`` optionally restricts execution to checks with the given names.
    Errors raised by individual checks are recorded as error results rather
    than skipped silently.
    """
    if command not in COMMANDS:
        raise ManifestValidationError(f"unknown command {command!r}")
    if command == "check":
        pool = list(manifest.checks)
    else:
        pool = [c for c in manifest.checks if c.command == command]
        if not pool:
            pool = _default_checks(manifest, command)
    if only:
        wanted = set(only)
        unknown = wanted - {c.name for c in pool}
        if unknown:
            raise ManifestValidationError(
                f"unknown check name(s): {', '.join(sorted(unknown))}")
        pool = [c for c in pool if c.name in wanted]

    report = ReportDocument(command=command, manifest_echo=manifest.raw)
    if not manifest.algebraifold.ctx.irreducibility_verified:
        report.warnings.append(
            "minimal relation of degree > 3 accepted without irreducibility"
            " verification")
    runtime = _Runtime(manifest)
    for spec in pool:
        try:
            result = _run_check(runtime, spec)
        except AfdError as exc:
            result = {
                "name": spec.name,
                "command": spec.command,
                "status": "error",
                "code": exc.code,
                "message": str(exc),
            }
        report.results.append(result)
    return report
