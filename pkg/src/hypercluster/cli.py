"""Command-line entry point: ``hypercluster --command {build,stabilizers,cnot,tomography,lhv}``."""
from __future__ import annotations

import argparse
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .data import load_json
from .export import SCHEMA_VERSION, dumps, parse_angle, records_to_csv
from .graphs import LABORATORY
from .he6 import basis_label, build_he6, build_lc6_tilde, cx_h_cz_identity_check, identity_checks
from .mbqc import PATTERNS, all_branches, cnot_io_matrix, pattern_bases, to_ab_order
from .nonlocality import BELL_RECIPES, bell_expression, ingest_stabilizer_table, lhv_optimum, stabilizer_report
from .tomo import (
    CALIBRATED_NOISE,
    NoiseModel,
    apply_noise,
    bar_chart_data,
    reconstruct,
    reference_rows,
    simulate_counts,
    standard_settings,
    bell_fidelity_report,
    target_state,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
COMMANDS = ("build", "stabilizers", "cnot", "tomography", "lhv")
TOL = 1e-10


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    seed: int = 0
    format: str = "json"
    out: str | None = None
    pattern: str = "I"
    alpha: float | None = None
    beta: float | None = None
    mode: str = "branches"
    noise_p_pi: float = 0.0
    noise_p_k: float = 0.0
    noise_p_c: float = 0.0
    noise_w: float = 0.0
    noise_preset: str | None = None
    counts_per_setting: float = 1e4
    seeds: int = 50
    dof: str | None = None
    branch: str | None = None
    ingest_paper_table: str | None = None

    def noise(self) -> NoiseModel:
        if self.noise_preset == "calibrated":
            return CALIBRATED_NOISE
        return NoiseModel(self.noise_p_pi, self.noise_p_k, self.noise_p_c, self.noise_w)

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("out")
        return d


def _amplitudes(psi: np.ndarray) -> list[dict]:
    return [{"index": int(i), "basis": basis_label(int(i)), "amplitude": complex(psi[i])}
            for i in np.flatnonzero(np.abs(psi) > 1e-12)]


def cmd_build(cfg: RunConfig):
    checks = identity_checks()
    passed = {k: v >= 1 - TOL for k, v in checks.items()}
    passed["cx_h_cz"] = cx_h_cz_identity_check()
    ok = all(passed.values())
    he6, lc6 = build_he6(), build_lc6_tilde()
    result = {
        "he6": _amplitudes(he6),
        "lc6_tilde": _amplitudes(lc6),
        "identity_overlaps": checks,
        "identity_passed": passed,
    }
    rows = [{"state": name, "index": r["index"], "basis": r["basis"],
             "re": r["amplitude"].real, "im": r["amplitude"].imag}
            for name in ("he6", "lc6_tilde") for r in result[name]]
    return ok, result, rows


def cmd_stabilizers(cfg: RunConfig):
    if cfg.ingest_paper_table is not None:
        path = None if cfg.ingest_paper_table == "bundled" else cfg.ingest_paper_table
        try:
            rep = ingest_stabilizer_table(path)
        except (OSError, ValueError) as e:
            raise UsageError(f"cannot ingest stabilizer table: {e}") from e
        ok = all(v["ok"] if isinstance(v, dict) else bool(v) for v in rep.checks.values())
        result = rep.to_dict()
        result["source"] = "ingested"
        return ok, result, rep.rows
    nm = cfg.noise()
    state = build_lc6_tilde() if nm == NoiseModel() else apply_noise(build_lc6_tilde(), nm)
    rep = stabilizer_report(state, LABORATORY)
    result = rep.to_dict()
    result["source"] = "simulated"
    return True, result, rep.rows


def _vec(psi: np.ndarray) -> list:
    return [complex(z) for z in psi]


def _reference_io(name: str) -> list | None:
    pats = load_json("cnot_io.json")["patterns"]
    return pats.get(name)


def cmd_cnot(cfg: RunConfig):
    name = cfg.pattern
    if cfg.mode == "variant":
        if name not in ("II", "II-variant"):
            raise UsageError("variant mode applies to pattern II only")
        name = "II-variant"
    if cfg.mode == "io-matrix":
        if name == "IV":
            raise UsageError("pattern IV produces entangled outputs and has no product-state I-O matrix; "
                             "verify it through two-qubit tomography of the output Bell states instead")
        if cfg.alpha is not None or cfg.beta is not None:
            raise UsageError("io-matrix mode runs at alpha = beta = 0")
        io = cnot_io_matrix(name)
        diag = io.diagonal_fidelities()
        ref = _reference_io(name) or []
        ref_rows = [{"input": r[0], "output": r[1], "fidelity": r[2], "uncertainty": r[3]} for r in ref]
        labels_match = [r["output"] for r in ref_rows] == io.expected
        ok = all(abs(f - 1) <= TOL for f in diag) and labels_match
        result = {**io.to_dict(), "diagonal_fidelities": diag, "reference": ref_rows,
                  "reference_outputs_match": labels_match}
        rows = [{"input": io.inputs[i], **{io.outputs[j]: io.matrix[i, j] for j in range(4)}} for i in range(4)]
        return ok, result, rows
    if cfg.mode != "branches" and cfg.mode != "variant":
        raise UsageError(f"unknown mode {cfg.mode!r}")
    try:
        pattern = pattern_bases(name, LABORATORY, cfg.alpha, cfg.beta)
    except ValueError as e:
        raise UsageError(str(e)) from e
    results = all_branches(pattern)
    branches = [{
        "outcomes": list(r.outcomes),
        "probability": r.probability,
        "fidelity": r.fidelity,
        "corrected_output_ab": _vec(to_ab_order(r.corrected_output)),
    } for r in results]
    ok = all(abs(b["fidelity"] - 1) <= TOL for b in branches)
    result = {
        "pattern": name,
        "alpha": pattern.alpha,
        "beta": pattern.beta,
        "bases": {str(q): lab for q, lab in pattern.labels().items()},
        "target_ab": _vec(to_ab_order(results[0].target)),
        "branches": branches,
    }
    if name == "II-variant":
        var = load_json("cnot_io.json")["variant_II"]
        result["reference"] = {"fidelity": var["fidelity"], "uncertainty": var["uncertainty"]}
    rows = [{"s1": b["outcomes"][0], "s3": b["outcomes"][1], "s4": b["outcomes"][2], "s6": b["outcomes"][3],
             "probability": b["probability"], "fidelity": b["fidelity"]} for b in branches]
    return ok, result, rows


def _parse_branch(text: str) -> dict:
    out = {}
    for part in text.split(","):
        k, _, v = part.partition("=")
        if not v:
            raise UsageError(f"branch entries look like 'c=EE', got {part!r}")
        out[k.strip()] = v.strip()
    return out


def cmd_tomography(cfg: RunConfig):
    nm = cfg.noise()
    seeds = [cfg.seed + i for i in range(cfg.seeds)]
    if cfg.dof is None:
        report = bell_fidelity_report(nm, cfg.counts_per_setting, seeds)
        rows = [r.to_dict() for r in report]
        flat = [{**r, "selector": ";".join(f"{k}={v}" for k, v in sorted(r["selector"].items()))} for r in rows]
        return True, {"noise": asdict(nm), "rows": rows}, flat
    dof = {"π": "pi"}.get(cfg.dof, cfg.dof)
    refs = [r for r in reference_rows() if r["output_dof"] == dof]
    if not refs:
        raise UsageError(f"unknown DOF {cfg.dof!r}")
    if cfg.branch is None:
        row = refs[0]
    else:
        sel = _parse_branch(cfg.branch)
        match = [r for r in refs if r["selector"] == sel]
        if not match:
            raise UsageError(f"branch {cfg.branch!r} is not a reference row for DOF {dof}")
        row = match[0]
    rho = apply_noise(build_lc6_tilde(), nm)
    settings = standard_settings()
    rng = np.random.default_rng(cfg.seed)
    counts = simulate_counts(rho, dof, row["selector"], rng, settings, cfg.counts_per_setting)
    rec = reconstruct(counts, settings)
    target = target_state(row)
    fid = float(np.vdot(target, rec.rho @ target).real)
    result = {
        "dof": dof,
        "branch": row["selector"],
        "target": row["target"],
        "fidelity": fid,
        "reference_fidelity": row["fidelity"],
        "reference_uncertainty": row["uncertainty"],
        "counts": [c.to_dict() for c in counts],
        "nll": rec.nll,
        "iterations": rec.iterations,
        "converged": rec.converged,
        "rho": bar_chart_data(rec.rho, dof),
        "noise": asdict(nm),
    }
    return rec.converged, result, result["rho"]


def cmd_lhv(cfg: RunConfig):
    bounds = load_json("aggregates.json")["lhv_bounds"]
    out, ok = {}, True
    for name in BELL_RECIPES:
        best, assignment = lhv_optimum(bell_expression(name))
        good = abs(best - bounds[name]) <= TOL
        ok &= good
        out[name] = {"maximum": best, "bound": bounds[name], "matches_bound": good, "assignment": assignment}
    rows = [{"expression": k, "maximum": v["maximum"], "bound": v["bound"]} for k, v in out.items()]
    return ok, out, rows


HANDLERS = {"build": cmd_build, "stabilizers": cmd_stabilizers, "cnot": cmd_cnot,
            "tomography": cmd_tomography, "lhv": cmd_lhv}


def _angle(text: str) -> float:
    try:
        return parse_angle(text)
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(f"bad angle {text!r}") from e


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hypercluster", description="Six-qubit hyperentangled cluster toolkit.")
    p.add_argument("--command", required=True, choices=COMMANDS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.add_argument("--pattern", choices=PATTERNS, default="I")
    p.add_argument("--alpha", type=_angle, default=None, help="radians; pi literals allowed, e.g. 3pi/2")
    p.add_argument("--beta", type=_angle, default=None)
    p.add_argument("--mode", choices=("branches", "io-matrix", "variant"), default="branches")
    p.add_argument("--noise-p-pi", type=float, default=0.0)
    p.add_argument("--noise-p-k", type=float, default=0.0)
    p.add_argument("--noise-p-c", type=float, default=0.0)
    p.add_argument("--noise-w", type=float, default=0.0)
    p.add_argument("--noise-preset", choices=("calibrated",), default=None)
    p.add_argument("--counts-per-setting", type=float, default=1e4)
    p.add_argument("--seeds", type=int, default=50, help="number of seeds for the nine-row report")
    p.add_argument("--dof", choices=("pi", "π", "k", "c"), default=None,
                   help="single-branch reconstruction of this DOF")
    p.add_argument("--branch", default=None, help="selector such as 'c=EE,k=rl'")
    p.add_argument("--ingest-paper-table", nargs="?", const="bundled", default=None,
                   help="recompute aggregates from a stabilizer table CSV (bundled copy if no path)")
    p.add_argument("--version", action="version", version=__version__)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    d = vars(ns).copy()
    return RunConfig(**d)


def render(cfg: RunConfig, ok: bool, result, rows) -> str:
    if cfg.format == "csv":
        return records_to_csv(rows)
    return dumps({
        "schema_version": SCHEMA_VERSION,
        "command": cfg.command,
        "config": cfg.echo(),
        "status": "pass" if ok else "fail",
        "result": result,
    })


def run(argv=None) -> tuple[int, str, str | None]:
    """Parse, execute and render; returns ``(exit code, text, output path)``."""
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return (EXIT_OK if e.code == 0 else EXIT_USAGE), "", None
    try:
        cfg = config_from_args(ns)
        if cfg.seeds < 1 or cfg.counts_per_setting <= 0:
            raise UsageError("--seeds and --counts-per-setting must be positive")
        try:
            cfg.noise()
        except ValueError as e:
            raise UsageError(str(e)) from e
        ok, result, rows = HANDLERS[cfg.command](cfg)
    except UsageError as e:
        print(f"hypercluster: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE, "", None
    if not ok:
        print(f"hypercluster: {cfg.command}: verification failed", file=sys.stderr)
    return (EXIT_OK if ok else EXIT_FAIL), render(cfg, ok, result, rows), cfg.out


def main(argv=None) -> int:
    code, text, out = run(argv)
    if text and out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    elif text:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
