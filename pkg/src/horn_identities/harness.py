"""Case sampling, residual classification and report files."""

from __future__ import annotations

import csv
import dataclasses
import fnmatch
import io
import json
import math
import zlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import HornError, SamplingExhausted
from .registry import EXPECTED, REGISTRY, Identity, IdentityCase, lookup
from .series import DEFAULT_BOX, PARAM_TYPES, Point, Truncation

MAX_ATTEMPTS = 10_000
REPORT_COLUMNS = ("id", "seed", "case_index", "lhs", "rhs", "abs_residual",
                  "rel_residual", "verdict", "params_json")
T_RANGE = 0.2


@dataclass(frozen=True)
class DomainSpec:
    param_range: tuple[float, float] = (0.2, 3.5)
    integer_margin: float = 1e-3
    boxes: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_BOX))

    def sample_params(self, family: str, rng: np.random.Generator):
        cls = PARAM_TYPES[family]
        names = [f.name for f in dataclasses.fields(cls)]
        lo, hi = self.param_range
        vals = []
        for _ in names:
            while True:
                v = float(rng.uniform(lo, hi))
                if abs(v - round(v)) >= self.integer_margin:
                    break
            vals.append(v)
        return cls(*vals)

    def sample_point(self, family: str, rng: np.random.Generator) -> Point:
        r = self.boxes[family]
        while True:
            x, y = (float(v) for v in rng.uniform(-r, r, size=2))
            if family != "g1" or abs(x) + abs(y) <= r:
                return Point(x, y)


@dataclass(frozen=True)
class HarnessConfig:
    domain: DomainSpec = field(default_factory=DomainSpec)
    truncation: Truncation | None = None
    rtol: dict[str, float] = field(default_factory=dict)
    atol: float | None = None
    count: int | None = None

    def tolerances(self, entry: Identity) -> tuple[float, float]:
        rtol = entry.rtol
        for pattern, value in self.rtol.items():
            if entry.id == pattern or fnmatch.fnmatchcase(entry.id, pattern):
                rtol = value
        return rtol, entry.atol if self.atol is None else self.atol


def load_config(path: str | Path | None) -> HarnessConfig:
    """Read a JSON config; every key is optional."""
    if path is None:
        return HarnessConfig()
    raw = json.loads(Path(path).read_text())
    known = {"param_range", "integer_margin", "boxes", "truncation", "rtol", "atol", "count"}
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    d = DomainSpec()
    boxes = dict(d.boxes)
    boxes.update({k.lower(): float(v) for k, v in raw.get("boxes", {}).items()})
    domain = DomainSpec(
        tuple(raw.get("param_range", d.param_range)),
        float(raw.get("integer_margin", d.integer_margin)),
        boxes,
    )
    tr = raw.get("truncation")
    rtol = raw.get("rtol", {})
    if isinstance(rtol, (int, float)):
        rtol = {"*": float(rtol)}
    return HarnessConfig(
        domain=domain,
        truncation=Truncation(*tr) if tr is not None else None,
        rtol={k: float(v) for k, v in rtol.items()},
        atol=raw.get("atol"),
        count=raw.get("count"),
    )


# --------------------------------------------------------------------------
# sampling


def case_rng(identity_id: str, seed: int) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(identity_id.encode())])


def sample_cases(identity_id: str, spec: DomainSpec | None = None, count: int = 10,
                 seed: int = 0, config: HarnessConfig | None = None) -> list[IdentityCase]:
    entry = lookup(identity_id)
    config = config or HarnessConfig(domain=spec or DomainSpec())
    spec = spec or config.domain
    rtol, atol = config.tolerances(entry)
    rng = case_rng(identity_id, seed)
    out = []
    for _ in range(count):
        for _attempt in range(MAX_ATTEMPTS):
            try:
                params = spec.sample_params(entry.family, rng)
            except HornError:
                continue
            point = spec.sample_point(entry.family, rng)
            ell = int(rng.integers(entry.ell[0], entry.ell[1] + 1)) if entry.ell else None
            t = float(rng.uniform(-T_RANGE, T_RANGE)) if entry.uses_t else None
            case = IdentityCase(entry.id, entry.family, params, point, ell, t, entry.axis, rtol, atol)
            if entry.admissible(case):
                out.append(case)
                break
        else:
            raise SamplingExhausted(f"{identity_id}: no admissible case in {MAX_ATTEMPTS} draws")
    return out


# --------------------------------------------------------------------------
# evaluation


@dataclass(frozen=True)
class ResidualReport:
    id: str
    seed: int
    case_index: int
    lhs: float
    rhs: float
    abs_residual: float
    rel_residual: float
    verdict: str
    params_json: str

    def row(self) -> dict:
        return {k: getattr(self, k) for k in REPORT_COLUMNS}


def classify(lhs: float, rhs: float, rtol: float, atol: float) -> tuple[float, float, str]:
    """Residuals and verdict; the relative residual is taken against the
    larger side so that it is symmetric in lhs and rhs."""
    if not (math.isfinite(lhs) and math.isfinite(rhs)):
        return math.inf, math.inf, "FAIL"
    ab = abs(lhs - rhs)
    rel = ab / (max(abs(lhs), abs(rhs)) + 1e-30)
    return ab, rel, "PASS" if (rel <= rtol or ab <= atol) else "FAIL"


def evaluate_case(case: IdentityCase, seed: int, index: int,
                  truncation: Truncation | None = None) -> ResidualReport:
    entry = REGISTRY[case.id]
    echo = case.echo()
    try:
        lhs = float(entry.lhs(case, truncation))
        rhs = float(entry.rhs(case, truncation))
    except (HornError, ArithmeticError, ValueError) as exc:
        echo["reason"] = f"{type(exc).__name__}: {exc}"
        nan = math.nan
        return ResidualReport(case.id, seed, index, nan, nan, nan, nan, "EXCLUDED",
                              json.dumps(echo, sort_keys=True))
    ab, rel, verdict = classify(lhs, rhs, case.rtol, case.atol)
    return ResidualReport(case.id, seed, index, lhs, rhs, ab, rel, verdict,
                          json.dumps(echo, sort_keys=True))


def run_suite(entries=None, spec: DomainSpec | None = None, count: int | None = None,
              seed: int = 1, config: HarnessConfig | None = None) -> list[ResidualReport]:
    """One report per sampled case, sorted by (id, case_index).

    ``count`` overrides each entry's default case count."""
    config = config or HarnessConfig(domain=spec or DomainSpec())
    if spec is not None:
        config = dataclasses.replace(config, domain=spec)
    if entries is None:
        entries = list(REGISTRY.values())
    out = []
    for entry in entries:
        n = count if count is not None else (config.count or entry.count)
        for i, case in enumerate(sample_cases(entry.id, config.domain, n, seed, config)):
            out.append(evaluate_case(case, seed, i, config.truncation))
    return sorted(out, key=lambda r: (r.id, r.case_index))


def aggregate(reports: list[ResidualReport]) -> dict[str, str]:
    """Per-identity verdict: PASS iff every evaluated case passes; EXCLUDED
    when nothing could be evaluated."""
    seen: dict[str, list[str]] = {}
    for r in reports:
        seen.setdefault(r.id, []).append(r.verdict)
    out = {}
    for k, vs in sorted(seen.items()):
        live = [v for v in vs if v != "EXCLUDED"]
        if not live:
            out[k] = "EXCLUDED"
        else:
            out[k] = "PASS" if all(v == "PASS" for v in live) else "FAIL"
    return out


def mismatches(verdicts: dict[str, str], expected: dict[str, str] = EXPECTED) -> dict[str, tuple[str, str]]:
    return {
        k: (v, expected.get(k, "?"))
        for k, v in verdicts.items()
        if v != "EXCLUDED" and expected.get(k) != v
    }


# --------------------------------------------------------------------------
# report files


def fmt_float(v: float) -> str:
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return "%.17g" % v


def _json_value(v) -> str:
    if isinstance(v, float):
        return fmt_float(v) if math.isfinite(v) else "null"
    return json.dumps(v)


def render_csv(reports: list[ResidualReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_COLUMNS)
    for r in reports:
        w.writerow([fmt_float(v) if isinstance(v, float) else v for v in r.row().values()])
    return buf.getvalue()


def render_json(reports: list[ResidualReport]) -> str:
    items = []
    for r in reports:
        body = ", ".join(f"{json.dumps(k)}: {_json_value(v)}" for k, v in r.row().items())
        items.append("  {" + body + "}")
    return "[\n" + ",\n".join(items) + "\n]\n" if items else "[]\n"


def emit_report(reports: list[ResidualReport], fmt: str = "csv", destination=None) -> str:
    """Serialise reports; writes to ``destination`` when given and returns
    the text either way."""
    if fmt == "csv":
        text = render_csv(reports)
    elif fmt == "json":
        text = render_json(reports)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if destination is not None:
        Path(destination).write_text(text)
    return text
