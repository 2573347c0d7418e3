"""``crsing`` command line: certify a surface germ, run the full pipeline,
or call one of the numerical tools.  All input and output is JSON.

Exit codes: 0 success / certified, 1 negative verdict, 2 input or solver
error (nothing is written in that case).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field

import numpy as np

from . import demos
from .approx import approx_report, polar_disc_grid, sector_scan
from .complexcore import CircleGrid, Disc
from .hull import convexity_scan, graph_samples, hull_probe
from .kallin import average_over_roots, choose_C, epsilon_search, symmetrize
from .polys import BihomPoly
from .sheets import f0_unchecked, build_sheets, jacobian_sweep, verify_product
from .surface import CRSurface, SurfaceSchemaError, certify

COMMANDS = ("certify", "pipeline", "sector-scan", "approximate", "hull-probe", "sheets")
CIRCLE_N_BOUNDS = (64, 10**6)


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input_path: str | None = None
    demo: str | None = None
    samples: int | None = None
    out: str | None = None
    csv: str | None = None
    force_M: int | None = None
    force_C: float | None = None
    max_degree: int | None = None
    tolerances: dict = field(default_factory=lambda: {"hull": 1e-3, "product": 1e-9})

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if (self.input_path is None) == (self.demo is None):
            raise InputError("give exactly one of an input file or --demo")
        if self.demo is not None and self.demo not in demos.ALL:
            raise InputError(f"unknown demo {self.demo!r}; choose from {sorted(demos.ALL)}")
        if any(not t > 0 for t in self.tolerances.values()):
            raise InputError("tolerances must be positive")
        if self.samples is not None:
            lo, hi = CIRCLE_N_BOUNDS if self.command in ("certify", "pipeline", "sheets") else (8, 10**4)
            if not lo <= self.samples <= hi:
                raise InputError(f"--samples must lie in [{lo}, {hi}] for {self.command}")
        if self.max_degree is not None and not 1 <= self.max_degree <= 30:
            raise InputError("--max-degree must lie in [1, 30]")

    def load(self) -> dict:
        if self.demo is not None:
            return json.loads(json.dumps(demos.ALL[self.demo]))
        try:
            with open(self.input_path) as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"{self.input_path}: {exc.strerror}") from exc
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"{self.input_path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


# -- input helpers --------------------------------------------------------------


def _surface(data) -> CRSurface:
    try:
        return CRSurface.from_dict(data)
    except SurfaceSchemaError as exc:
        raise InputError(f"surface schema: {exc}") from exc
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _terms(records, where) -> BihomPoly:
    if not isinstance(records, list) or not records:
        raise InputError(f"'{where}' must be a non-empty list of terms")
    terms = {}
    for i, rec in enumerate(records):
        if not isinstance(rec, dict) or set(rec) - {"a", "b", "re", "im"} or not {"a", "b"} <= set(rec):
            raise InputError(f"{where}[{i}]: expected fields a, b, re, im")
        a, b = rec["a"], rec["b"]
        if not all(isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in (a, b)):
            raise InputError(f"{where}[{i}]: exponents must be non-negative integers")
        terms[(a, b)] = terms.get((a, b), 0j) + complex(float(rec.get("re", 0)), float(rec.get("im", 0)))
    return BihomPoly(terms)


FUNCTION_KEYS = {"function", "radius", "target", "probe", "exclude", "schedule"}


def _function_input(data):
    """Either a surface (graph function is the full right-hand side) or a function spec."""
    if not isinstance(data, dict):
        raise InputError("input must be a JSON object")
    if "k" in data:
        s = _surface(data)
        return {"F": s.phi, "radius": s.radius, "exclude": [0j], "target": None, "probe": None, "schedule": None}
    extra = set(data) - FUNCTION_KEYS
    if extra:
        raise InputError(f"unknown field(s) {sorted(extra)}")
    if "function" not in data:
        raise InputError("missing required field 'function'")
    radius = data.get("radius", 1.0)
    if not isinstance(radius, (int, float)) or not radius > 0:
        raise InputError("'radius' must be a positive number")
    probe = data.get("probe")
    if probe is not None:
        if not isinstance(probe, list) or len(probe) != 4:
            raise InputError("'probe' must be [z_re, z_im, w_re, w_im]")
        probe = (complex(probe[0], probe[1]), complex(probe[2], probe[3]))
    schedule = data.get("schedule")
    if schedule is not None:
        if not all(isinstance(s, list) and len(s) == 2 for s in schedule):
            raise InputError("'schedule' must be a list of [a_max, b_max] pairs")
        schedule = [tuple(s) for s in schedule]
    return {
        "F": _terms(data["function"], "function"),
        "radius": float(radius),
        "exclude": [complex(*e) for e in data.get("exclude", [])],
        "target": _terms(data["target"], "target") if "target" in data else None,
        "probe": probe,
        "schedule": schedule,
    }


def _grid(cfg: RunConfig):
    return CircleGrid(cfg.samples) if cfg.samples else None


def _clean(obj):
    """Make a report JSON-safe and deterministic."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def _write_atomic(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".crsing-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump(report: dict) -> str:
    return json.dumps(_clean(report), sort_keys=True, indent=2, allow_nan=False) + "\n"


# -- commands -------------------------------------------------------------------


def run_certify(cfg: RunConfig):
    s = _surface(cfg.load())
    try:
        cert = certify(s, _grid(cfg), force_M=cfg.force_M)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    report = {"command": "certify", "surface": s.to_dict(), "certificate": cert.to_dict()}
    return (0 if cert.passed else 1), report


def _sample_pairs(sys_, n=1000, seed=0):
    rng = np.random.default_rng(seed)
    r = sys_.validityRadius * np.sqrt(rng.uniform(0, 1, n))
    z = r * np.exp(2j * np.pi * rng.uniform(0, 1, n))
    w = (rng.normal(size=n) + 1j * rng.normal(size=n)) * max(sys_.validityRadius, 1e-3) ** sys_.exponent
    return z, w


def _step_one(s, cert, cfg):
    sys_ = build_sheets(s, cert)
    z, w = _sample_pairs(sys_)
    resid = verify_product(sys_, z, w)
    jmin = jacobian_sweep(sys_)
    ok = resid <= cfg.tolerances["product"] and jmin > 0
    return sys_, {
        "passed": ok,
        "sheets": sys_.to_dict(),
        "productResidual": resid,
        "jacobianMin": jmin,
    }


def run_sheets(cfg: RunConfig):
    s = _surface(cfg.load())
    cert = certify(s, _grid(cfg), force_M=cfg.force_M)
    if not cert.passed:
        return 1, {"command": "sheets", "certificate": cert.to_dict()}
    _, step = _step_one(s, cert, cfg)
    return (0 if step["passed"] else 1), {"command": "sheets", "certificate": cert.to_dict(), "sheets": step}


def run_pipeline(cfg: RunConfig):
    s = _surface(cfg.load())
    report = {"command": "pipeline", "surface": s.to_dict(), "passed": False, "steps": {}}
    steps = report["steps"]
    try:
        cert = certify(s, _grid(cfg), force_M=cfg.force_M)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    steps["0_certify"] = cert.to_dict()
    if not cert.passed:
        report["haltedAt"] = "0_certify"
        return 1, report

    sys_, step1 = _step_one(s, cert, cfg)
    steps["I_sheets"] = step1
    if not step1["passed"]:
        report["haltedAt"] = "I_sheets"
        return 1, report

    delta_r = sys_.validityRadius
    f0 = lambda x: f0_unchecked(sys_, x)  # noqa: E731
    scan = sector_scan(f0, Disc(0j, delta_r), n=33, exclude=(0j,))
    d = cfg.max_degree or 3
    dens = approx_report(
        f0, np.conj, [(i, i) for i in range(d + 1)], polar_disc_grid(Disc(0j, delta_r), 16, 64), max_iter=100
    )
    errs = dens.errors
    step2 = {
        "passed": scan.passed,
        "sectorScan": scan.to_dict(),
        "density": dens.to_dict(),
        "densityNonIncreasing": all(b <= a + 1e-12 for a, b in zip(errs, errs[1:])),
    }
    steps["II_density"] = step2
    if not step2["passed"]:
        report["haltedAt"] = "II_density"
        return 1, report

    try:
        C = cfg.force_C if cfg.force_C is not None else choose_C(cert.A, sys_.delta)
        kr = epsilon_search(sys_, C, A=cert.A)
    except (ValueError, RuntimeError) as exc:
        steps["III_kallin"] = {"passed": False, "error": str(exc)}
        report["haltedAt"] = "III_kallin"
        return 1, report
    g = dens.as_poly()
    rng = np.random.default_rng(1)
    zz = rng.normal(size=1000) + 1j * rng.normal(size=1000)
    ww = rng.normal(size=1000) + 1j * rng.normal(size=1000)
    P = symmetrize(g, sys_.delta)
    lhs = P(zz, ww**sys_.delta)
    rhs = average_over_roots(g, sys_.delta, zz, ww)
    sym_err = float(np.max(np.abs(lhs - rhs) / np.maximum(1.0, np.abs(rhs))))
    step3 = {
        "passed": bool(kr.wedgeDisjoint and all(m.positive for m in kr.containmentMargins) and sym_err <= 1e-12),
        "kallin": kr.to_dict(),
        "symmetrizeResidual": sym_err,
        "symmetrized": P.to_records(),
    }
    steps["III_kallin"] = step3
    if not step3["passed"]:
        report["haltedAt"] = "III_kallin"
        return 1, report

    hull = convexity_scan(s, kr.epsilon, n_probes=4, d_max=d, n_radii=24, n_angles=96, max_iter=100)
    steps["hull"] = hull.to_dict()
    report["epsilon"] = kr.epsilon
    report["passed"] = True
    return 0, report


def run_tool(cfg: RunConfig):
    spec = _function_input(cfg.load())
    F, radius = spec["F"], spec["radius"]
    disc = Disc(0j, radius)
    if cfg.command == "sector-scan":
        rep = sector_scan(F, disc, n=cfg.samples or 41, exclude=spec["exclude"])
        return (0 if rep.passed else 1), {"command": "sector-scan", "scan": rep.to_dict()}
    if cfg.command == "approximate":
        target = spec["target"] or BihomPoly({(0, 1): 1})
        d = cfg.max_degree or 6
        schedule = spec["schedule"] or [(i, i) for i in range(d + 1)]
        grid = polar_disc_grid(disc, 64, cfg.samples or 256)
        rep = approx_report(F, target, schedule, grid)
        if cfg.csv:
            _write_atomic(cfg.csv, rep.to_csv())
        return 0, {"command": "approximate", "report": rep.to_dict()}
    if cfg.command == "hull-probe":
        if spec["probe"] is None:
            raise InputError("hull-probe needs a 'probe' field")
        K = graph_samples(F, radius, 48, cfg.samples or 192)
        try:
            res = hull_probe(K, spec["probe"], d_max=cfg.max_degree or 8, threshold=cfg.tolerances["hull"])
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        return (0 if res.verdict == "OUTSIDE" else 1), {"command": "hull-probe", "result": res.to_dict()}
    raise InputError(f"{cfg.command} is not a tool command")


DISPATCH = {
    "certify": run_certify,
    "pipeline": run_pipeline,
    "sheets": run_sheets,
    "sector-scan": run_tool,
    "approximate": run_tool,
    "hull-probe": run_tool,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="crsing", description=__doc__.split("\n\n")[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", nargs="?", help="input JSON (surface or function spec)")
    p.add_argument("--demo", help=f"built-in input: {', '.join(sorted(demos.ALL))}")
    p.add_argument("--samples", type=int, help="grid size (circle samples, lattice side or angles)")
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument("--csv", help="also write the error curve as CSV (approximate)")
    p.add_argument("--force-M", dest="force_M", type=int)
    p.add_argument("--force-C", dest="force_C", type=float)
    p.add_argument("--max-degree", dest="max_degree", type=int)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            command=args.command,
            input_path=args.input,
            demo=args.demo,
            samples=args.samples,
            out=args.out,
            csv=args.csv,
            force_M=args.force_M,
            force_C=args.force_C,
            max_degree=args.max_degree,
        )
        code, report = DISPATCH[cfg.command](cfg)
        text = dump(report)
    except InputError as exc:
        print(f"crsing: error: {exc}", file=sys.stderr)
        return 2
    except (np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"crsing: solver error: {exc}", file=sys.stderr)
        return 2
    if cfg.out:
        _write_atomic(cfg.out, text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
