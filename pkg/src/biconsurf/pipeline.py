"""Pipeline orchestration: initial data to CSV, meshes and reports.

Every pipeline is a pure function of its configuration: no clocks, no
randomness, fixed field orderings and 17-significant-digit floats, so
repeated runs produce byte-identical outputs.  The curved pipelines pad the
integration span by the finite-difference reach so the declared parameter
rectangle stays fully verifiable.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import defaults
from .curvature import prime_constant, solve_curvature
from .errors import UsageError
from .mesh import sample_mesh, write_obj, write_ply
from .profile import Branch, reconstruct_profile, revolution_profile
from .surfaces import build_h3, build_r3_revolution, build_s3
from .verify import FDScheme, fd_for_patch, verify_patch

__all__ = ["PipelineConfig", "cmd_solve", "cmd_profile", "cmd_surface", "cmd_sweep"]

_FMT = "{:.17g}"


def _fmt(x) -> str:
    return _FMT.format(float(x))


def _write_lines(path, lines) -> str:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")
    return str(path)


@dataclass(frozen=True)
class PipelineConfig:
    """Validated description of one pipeline run."""

    model: str = "s3"                      # r3 | s3 | h3
    branch: str = "auto"                   # auto | elliptic | parabolic
    k0: float = 1.0
    kp0: float = 1.0
    C: float = 1.0                         # r3 profile constant
    rho_range: tuple = defaults.DEFAULT_RHO_RANGE
    span: tuple = defaults.DEFAULT_SPAN
    nu: int = defaults.DEFAULT_GRID
    nv: int = defaults.DEFAULT_GRID
    v_range: tuple | None = None
    rel_tol: float = defaults.PIPELINE_RTOL
    abs_tol: float = defaults.PIPELINE_ATOL
    fd_step: float | None = None
    projection: str = "auto"
    tol_profile: str | None = None
    n_csv: int = 512

    def validate(self) -> "PipelineConfig":
        if self.model not in ("r3", "s3", "h3"):
            raise UsageError(f"unknown model '{self.model}'")
        if self.branch not in ("auto", "elliptic", "parabolic"):
            raise UsageError(f"unknown branch '{self.branch}'")
        if self.branch == "parabolic" and self.model != "h3":
            raise UsageError("the parabolic branch exists only for model h3")
        if self.branch == "elliptic" and self.model == "r3":
            raise UsageError("branch selection does not apply to model r3")
        if self.model != "r3" and self.k0 <= 0:
            raise UsageError("k0 must be positive")
        if self.model == "r3" and self.C <= 0:
            raise UsageError("the profile constant C must be positive")
        if self.nu < 2 or self.nv < 2:
            raise UsageError("grid must be at least 2 x 2")
        if self.tol_profile is not None and self.tol_profile not in defaults.TOL_PROFILES:
            raise UsageError(
                f"unknown tolerance profile '{self.tol_profile}' "
                f"(choose from {sorted(defaults.TOL_PROFILES)})"
            )
        return self

    @property
    def c(self) -> int:
        return {"r3": 0, "s3": 1, "h3": -1}[self.model]

    def resolved_branch(self) -> Branch:
        if self.model == "s3":
            return Branch.S2
        if self.model != "h3":
            raise UsageError("profile branches exist only for s3 and h3")
        if self.branch == "elliptic":
            return Branch.H2_ELLIPTIC
        if self.branch == "parabolic":
            return Branch.H2_PARABOLIC
        C = float(prime_constant(self.k0, self.kp0, -1))
        if C == 0:
            raise UsageError("degenerate initial data: the constant C vanishes")
        return Branch.H2_ELLIPTIC if C > 0 else Branch.H2_PARABOLIC

    def check_branch_consistency(self) -> None:
        if self.model != "h3" or self.branch == "auto":
            return
        auto = (
            Branch.H2_ELLIPTIC
            if float(prime_constant(self.k0, self.kp0, -1)) > 0
            else Branch.H2_PARABOLIC
        )
        asked = Branch.H2_ELLIPTIC if self.branch == "elliptic" else Branch.H2_PARABOLIC
        if asked is not auto:
            raise UsageError(
                f"branch '{self.branch}' contradicts the sign of the constant "
                f"of the supplied initial data (auto-resolves to {auto.value})"
            )


def _padded_span(cfg: PipelineConfig, fd_reach: float) -> tuple:
    pad = 1.2 * fd_reach + 0.01
    return (cfg.span[0] - pad, cfg.span[1] + pad)


def _default_v_range(cfg: PipelineConfig, branch: Branch | None) -> tuple:
    if cfg.v_range is not None:
        return tuple(cfg.v_range)
    if branch is Branch.H2_PARABOLIC:
        return defaults.V_PARABOLIC
    return defaults.V_FULL_TURN


def _estimate_fd(cfg: PipelineConfig, case: str, v_range) -> FDScheme:
    du = cfg.span[1] - cfg.span[0] if cfg.model != "r3" else cfg.rho_range[1] - cfg.rho_range[0]
    diag = float(np.hypot(du, v_range[1] - v_range[0]))
    inner = cfg.fd_step if cfg.fd_step is not None else defaults.FD_INNER_REL * diag
    ratio = defaults.FD_OUTER_REL.get(case, defaults.FD_OUTER_REL_DEFAULT) / defaults.FD_INNER_REL
    return FDScheme(inner_step=float(inner), outer_step=float(ratio * inner))


def build_pipeline_patch(cfg: PipelineConfig):
    """Run initial data through profile reconstruction to a trimmed patch."""
    cfg = cfg.validate()
    if cfg.model == "r3":
        prof = revolution_profile(cfg.C, cfg.rho_range[1] * 1.5)
        rect = (tuple(cfg.rho_range), _default_v_range(cfg, None))
        return build_r3_revolution(prof, rect), None

    cfg.check_branch_consistency()
    branch = cfg.resolved_branch()
    case = {"s3": "s3"}.get(cfg.model) or (
        "h3_elliptic" if branch is Branch.H2_ELLIPTIC else "h3_parabolic"
    )
    fd = _estimate_fd(cfg, case, _default_v_range(cfg, branch))
    sol = solve_curvature(
        cfg.c, cfg.k0, cfg.kp0, _padded_span(cfg, fd.reach),
        rel_tol=cfg.rel_tol, abs_tol=cfg.abs_tol,
    )
    prof = reconstruct_profile(sol, branch)
    v_range = _default_v_range(cfg, branch)
    patch = build_s3(prof, v_range) if cfg.model == "s3" else build_h3(prof, v_range)
    # declare the requested rectangle; the evaluators keep the padded span
    span = (max(cfg.span[0], prof.span[0]), min(cfg.span[1], prof.span[1]))
    patch = dataclasses.replace(patch, u_range=span)
    return patch, sol


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_solve(cfg: PipelineConfig, out) -> dict:
    """Integrate the curvature ODE and emit (u, k, k', C drift) as CSV."""
    cfg = cfg.validate()
    sol = solve_curvature(
        cfg.c, cfg.k0, cfg.kp0, tuple(cfg.span),
        rel_tol=cfg.rel_tol, abs_tol=cfg.abs_tol,
    )
    grid = np.linspace(sol.span[0], sol.span[1], cfg.n_csv)
    st = sol.state(grid)
    drift = prime_constant(st[..., 0], st[..., 1], cfg.c) - sol.C
    lines = [
        f"# model={cfg.model} c={cfg.c} k0={_fmt(cfg.k0)} kp0={_fmt(cfg.kp0)} "
        f"C={_fmt(sol.C)} span={_fmt(sol.span[0])}:{_fmt(sol.span[1])} "
        f"rel_tol={_fmt(sol.rel_tol)}",
        "u,k,kp,C_drift",
    ]
    for i, u in enumerate(grid):
        lines.append(
            ",".join([_fmt(u), _fmt(st[i, 0]), _fmt(st[i, 1]), _fmt(drift[i])])
        )
    path = _write_lines(out, lines)
    max_drift = float(np.max(np.abs(drift)))
    ok = max_drift <= 100.0 * sol.rel_tol * max(1.0, abs(sol.C))
    return {
        "csv": path,
        "C": sol.C,
        "max_drift": max_drift,
        "turning_points": sol.turning_points.tolist(),
        "truncated": sol.truncated,
        "ok": bool(ok),
    }


def cmd_profile(cfg: PipelineConfig, out) -> dict:
    """Emit the profile curve as CSV (closed form for r3, frame data else)."""
    cfg = cfg.validate()
    if cfg.model == "r3":
        prof = revolution_profile(cfg.C, cfg.rho_range[1] * 1.5)
        rho = np.linspace(cfg.rho_range[0], cfg.rho_range[1], cfg.n_csv)
        u = prof.u_of_rho(rho)
        lines = [f"# model=r3 C={_fmt(cfg.C)}", "rho,u"]
        lines += [",".join([_fmt(r), _fmt(h)]) for r, h in zip(rho, u)]
        return {"csv": _write_lines(out, lines), "ok": True}

    patch, sol = build_pipeline_patch(cfg)
    prof = patch.profile
    grid = np.linspace(patch.u_range[0], patch.u_range[1], cfg.n_csv)
    sig = prof.sigma(grid)
    res = prof.constraint_residuals(grid)
    lines = [
        f"# model={cfg.model} branch={prof.branch.value} C={_fmt(prof.C)} "
        f"k0={_fmt(cfg.k0)} kp0={_fmt(cfg.kp0)}",
        "u,x1,x2,x3,x4,res_c1,res_c2,res_model,res_speed",
    ]
    for i, u in enumerate(grid):
        row = [_fmt(u)] + [_fmt(x) for x in sig[i]]
        row += [
            _fmt(res["constraint_c1"][i]),
            _fmt(res["constraint_c2"][i]),
            _fmt(res["model_membership"][i]),
            _fmt(res["unit_speed"][i]),
        ]
        lines.append(",".join(row))
    worst = max(float(np.max(np.abs(r))) for r in res.values())
    ok = (
        float(np.max(np.abs(res["constraint_c1"]))) <= defaults.CONSTRAINT_TOL
        and float(np.max(np.abs(res["constraint_c2"]))) <= defaults.CONSTRAINT_TOL
        and float(np.max(np.abs(res["model_membership"]))) <= defaults.MEMBERSHIP_TOL
        and float(np.max(np.abs(res["unit_speed"]))) <= defaults.MEMBERSHIP_TOL
    )
    return {"csv": _write_lines(out, lines), "worst_residual": worst, "ok": bool(ok)}


def cmd_surface(
    cfg: PipelineConfig,
    out_dir,
    basename: str = "surface",
    write_meshes: bool = True,
    report_path=None,
) -> dict:
    """Full pipeline: build, verify, export meshes and the JSON report."""
    cfg = cfg.validate()
    patch, _ = build_pipeline_patch(cfg)
    fd = fd_for_patch(patch, inner_step=cfg.fd_step)
    tolerances = (
        defaults.TOL_PROFILES[cfg.tol_profile] if cfg.tol_profile else None
    )
    report = verify_patch(patch, cfg.nu, cfg.nv, fd=fd, tolerances=tolerances)

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = {}
    if write_meshes:
        channels = {
            "f": report.fields["f"],
            "K": report.fields["K"],
            "residual": report.fields["biconservative"],
        }
        # sample the mesh on the verified grid so channels align with vertices
        mesh_patch = dataclasses.replace(
            patch,
            u_range=(float(report.grid_u[0]), float(report.grid_u[-1])),
            v_range=(float(report.grid_v[0]), float(report.grid_v[-1])),
        )
        mesh = sample_mesh(
            mesh_patch, cfg.nu, cfg.nv, projection=cfg.projection, channels=channels
        )
        written["obj"] = write_obj(mesh, out_dir / f"{basename}.obj")
        written["ply"] = write_ply(mesh, out_dir / f"{basename}.ply")
    target = Path(report_path) if report_path else out_dir / f"{basename}.report.json"
    target.parent.mkdir(parents=True, exist_ok=True)
    saved = report.save(target)
    return {
        "report": saved,
        "written": written,
        "pass": report.passed,
        "case": report.case,
        "residuals": report.residuals,
    }


def cmd_sweep(cfg: PipelineConfig, values, out_dir, parameter: str = "auto") -> dict:
    """One pipeline per parameter value, plus a summary CSV.

    For r3 the swept parameter is the profile constant C (also emitting the
    u(rho) curve per value); for s3/h3 it is the initial curvature k0.
    Individual failures are recorded and the sweep continues.
    """
    cfg = cfg.validate()
    values = list(values)
    if not values:
        raise UsageError("sweep needs a nonempty list of parameter values")
    if parameter == "auto":
        parameter = "C" if cfg.model == "r3" else "k0"
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    rows = []
    results = []
    for i, value in enumerate(values):
        run = dataclasses.replace(cfg, **{parameter: float(value)})
        tag = f"run{i:03d}"
        entry = {"value": float(value), "tag": tag}
        try:
            if cfg.model == "r3":
                prof_out = cmd_profile(run, out_dir / f"{tag}.profile.csv")
                entry["profile_csv"] = prof_out["csv"]
            surf = cmd_surface(run, out_dir, basename=tag, write_meshes=False)
            entry["pass"] = surf["pass"]
            entry["max_biconservative"] = surf["residuals"]["biconservative"]["max"]
            entry["max_gauss"] = surf["residuals"]["gauss_identity"]["max"]
        except Exception as exc:  # keep sweeping; record the failure
            entry["pass"] = False
            entry["error"] = f"{type(exc).__name__}: {exc}"
        results.append(entry)
        rows.append(
            ",".join(
                [
                    _fmt(value),
                    "1" if entry.get("pass") else "0",
                    _fmt(entry.get("max_biconservative", float("nan"))),
                    _fmt(entry.get("max_gauss", float("nan"))),
                    entry.get("error", "").replace(",", ";"),
                ]
            )
        )
    header = f"{parameter},pass,max_biconservative,max_gauss,error"
    summary = _write_lines(out_dir / "summary.csv", [header] + rows)
    return {
        "summary": summary,
        "runs": results,
        "pass": all(r.get("pass") for r in results),
    }
