"""Command-line front end: profile | spectrum | reduced | evolve | all.

Every run resolves its configuration (config file merged with flags,
flags winning), writes a manifest.json echoing it together with a
sha256 hash, and emits deterministic artifacts: floats are serialized
with 17 significant digits, keys are sorted, and no timestamps are
embedded, so identical configurations produce byte-identical files.

Exit codes: 0 success, 2 validation error, 3 numerical failure.
"""

import argparse
import hashlib
import json
import os
import sys

import numpy as np

from . import __version__
from .fourier import FourierSeries
from .profile import (asymptotic_profile, newton_solve, solve_profile,
                      fit_speed_coefficients, NonConvergence, SingularJacobian)
from .bloch import (assemble, eigenvalues, scan, make_xi_grid,
                    collision_analysis, EigenFailure)
from .reduced import (reduced_matrix, appendix_derivative_checks,
                      paper_reduced_matrix, WrongRank, QuadratureStall,
                      NotAPerturbation)
from .evolve import (EvolutionState, integrate, perturbation_growth,
                     default_dt, BlowUp)

NUMERICAL_ERRORS = (NonConvergence, SingularJacobian, EigenFailure, WrongRank,
                    QuadratureStall, NotAPerturbation, BlowUp,
                    np.linalg.LinAlgError)


def _fmt(x):
    """17-significant-digit float formatting for exact regression diffs."""
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _json_text(obj, indent=0):
    pad = " " * indent
    if isinstance(obj, dict):
        items = sorted(obj.items())
        inner = ",\n".join(f'{pad}  "{k}": {_json_text(v, indent + 2).lstrip()}'
                           for k, v in items)
        return f"{pad}{{\n{inner}\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        inner = ", ".join(_json_text(v).lstrip() for v in obj)
        return f"{pad}[{inner}]"
    if isinstance(obj, bool):
        return pad + ("true" if obj else "false")
    if obj is None:
        return pad + "null"
    if isinstance(obj, (int, np.integer)):
        return pad + str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return pad + _fmt(float(obj))
    return pad + json.dumps(str(obj))


def _write_json(path, obj):
    with open(path, "w") as fh:
        fh.write(_json_text(obj) + "\n")


def _write_csv(path, header, rows, manifest_hash):
    with open(path, "w") as fh:
        fh.write(f"# manifest {manifest_hash}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(float(x)) for x in row) + "\n")


def _manifest(command, config, outdir):
    blob = _json_text({"command": command, "config": config})
    digest = hashlib.sha256(blob.encode()).hexdigest()
    _write_json(os.path.join(outdir, f"manifest_{command}.json"),
                {"command": command, "config": config,
                 "version": __version__, "manifest_hash": digest})
    return digest


def _resolve(args, defaults, config_file_section):
    """Defaults, then config-file values, then explicit flags."""
    resolved = dict(defaults)
    resolved.update(config_file_section)
    for key in defaults:
        val = getattr(args, key.replace("-", "_"), None)
        if val is not None:
            resolved[key] = val
    return resolved


def _load_config(path, command):
    if not path:
        return {}
    with open(path) as fh:
        data = json.load(fh)
    if command in data:
        return dict(data[command])
    return {k: v for k, v in data.items() if not isinstance(v, dict)}


def _parse_sweep(spec):
    start, stop, count = spec.split(":")
    return np.linspace(float(start), float(stop), int(count))


# -- subcommands ---------------------------------------------------------------


def cmd_profile(args):
    cfg = _resolve(args, {
        "a": 0.01, "k": 1.0, "order": 3, "N": 32, "tol": 1e-12,
        "sweep": None, "fit": False,
    }, _load_config(args.config, "profile"))
    outdir = args.out
    digest = _manifest("profile", cfg, outdir)
    prof = solve_profile(cfg["a"], cfg["k"], N=cfg["N"], tol=cfg["tol"])
    obj = prof.to_json()
    obj["manifest_hash"] = digest
    if args.emit_json:
        _write_json(os.path.join(outdir, "profile.json"), obj)
    amplitudes = (_parse_sweep(cfg["sweep"]) if cfg["sweep"]
                  else np.array([cfg["a"]]))
    rows = []
    samples = []
    for a in amplitudes:
        pn = solve_profile(float(a), cfg["k"], N=cfg["N"], tol=cfg["tol"])
        pa = asymptotic_profile(float(a), cfg["k"], order=3, N=cfg["N"])
        err = (pn.w - pa.w).sup_norm()
        rows.append((a, pn.c, pa.c, err))
        samples.append((float(a), pn.c))
    if args.emit_csv:
        _write_csv(os.path.join(outdir, "asym_vs_newton.csv"),
                   ["a", "c_newton", "c_asymptotic", "profile_sup_error"],
                   rows, digest)
    if cfg["fit"]:
        fit_pool = [s for s in samples if abs(s[0]) <= 0.02]
        if len({a for a, _ in fit_pool}) < 4:
            fit_pool = [(float(a), solve_profile(float(a), cfg["k"], N=cfg["N"],
                                                 tol=cfg["tol"]).c)
                        for a in np.linspace(0.001, 0.005, 8)]
        c0, c2, c4 = fit_speed_coefficients(fit_pool, cfg["k"])
        _write_json(os.path.join(outdir, "fit.json"),
                    {"c0": c0, "c2": c2, "c4": c4,
                     "n_samples": len(fit_pool), "manifest_hash": digest})
    return 0


def cmd_spectrum(args):
    cfg = _resolve(args, {
        "a": 0.02, "k": 1.0, "grid": 401, "xi": None, "N": 64, "tol": 1e-8,
        "profile-tol": 1e-13,
    }, _load_config(args.config, "spectrum"))
    outdir = args.out
    digest = _manifest("spectrum", cfg, outdir)
    prof = solve_profile(cfg["a"], cfg["k"], tol=cfg["profile-tol"])
    grid = (np.array([cfg["xi"]]) if cfg["xi"] is not None
            else make_xi_grid(cfg["grid"]))
    report, slices = scan(prof, grid, N=cfg["N"], tol=cfg["tol"])
    if args.emit_csv:
        rows = [(sl.xi, lam.real, lam.imag)
                for sl in slices for lam in sl.eigenvalues]
        _write_csv(os.path.join(outdir, "eigenvalues.csv"),
                   ["xi", "re_lambda", "im_lambda"], rows, digest)
    if args.emit_json:
        obj = report.to_json()
        obj["manifest_hash"] = digest
        _write_json(os.path.join(outdir, "stability.json"), obj)
    if args.emit_svg:
        _spectrum_svg(os.path.join(outdir, "spectrum.svg"), slices)
    return 0


def _spectrum_svg(path, slices):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    fig, ax = plt.subplots(figsize=(5, 5))
    lam = np.concatenate([sl.eigenvalues for sl in slices])
    ax.scatter(lam.real, lam.imag, s=2, lw=0)
    ax.set_xlabel("Re lambda")
    ax.set_ylabel("Im lambda")
    ax.set_title("Bloch spectrum")
    fig.tight_layout()
    fig.savefig(path, metadata={"Date": None})
    plt.close(fig)


def cmd_reduced(args):
    cfg = _resolve(args, {
        "a": 0.02, "k": 1.0, "xi": 0.05, "N": 16, "nodes": 64,
        "check-appendix": False, "sweep-order": False, "profile-tol": 1e-13,
    }, _load_config(args.config, "reduced"))
    outdir = args.out
    digest = _manifest("reduced", cfg, outdir)
    out = {}
    if cfg["a"] != 0.0 or cfg["xi"] != 0.0:
        prof = solve_profile(cfg["a"], cfg["k"], tol=cfg["profile-tol"])
        model = reduced_matrix(prof, cfg["xi"], N=cfg["N"], nodes=cfg["nodes"])
        out = model.to_json()
        if cfg["sweep-order"]:
            diffs = []
            scales = (1.0, 0.5, 0.25, 0.125)
            for s in scales:
                ps = solve_profile(s * cfg["a"], cfg["k"], tol=cfg["profile-tol"])
                ms = reduced_matrix(ps, s * cfg["xi"], N=cfg["N"],
                                    nodes=cfg["nodes"])
                diffs.append(float(np.linalg.norm(ms.B_num - ms.B_paper, 2)))
            slope = np.polyfit(np.log(scales), np.log(diffs), 1)[0]
            out["regression"] = {"scales": list(scales), "norm_diffs": diffs,
                                 "fitted_order": float(slope)}
    else:
        B = paper_reduced_matrix(0.0, 0.0, cfg["k"])
        out = {"B_paper": {"re": B.real.tolist(), "im": B.imag.tolist()},
               "note": "trivial point a=0, xi=0: reduction is the zero matrix"}
    if cfg["check-appendix"]:
        out["appendix_checks"] = appendix_derivative_checks(cfg["k"])
    out["manifest_hash"] = digest
    if args.emit_json:
        _write_json(os.path.join(outdir, "reduced.json"), out)
    return 0


def cmd_evolve(args):
    cfg = _resolve(args, {
        "a": 0.02, "k": 1.0, "T": 10.0, "dt": None, "N": 32,
        "epsilon": 1e-5, "seed": 7, "dt-study": False, "profile-tol": 1e-13,
    }, _load_config(args.config, "evolve"))
    outdir = args.out
    digest = _manifest("evolve", cfg, outdir)
    prof = solve_profile(cfg["a"], cfg["k"], tol=cfg["profile-tol"])
    rec = perturbation_growth(prof, seed=cfg["seed"], epsilon=cfg["epsilon"],
                              T=cfg["T"], dt=cfg["dt"], N=cfg["N"])
    if args.emit_csv:
        rows = list(zip(rec.times, rec.distances, rec.sup_norms))
        _write_csv(os.path.join(outdir, "growth.csv"),
                   ["t", "distance", "sup_norm"], rows, digest)
    obj = rec.to_json()
    obj["manifest_hash"] = digest
    if cfg["dt-study"]:
        w = prof.w.with_truncation(16)
        kicked = FourierSeries(2.5 * w.coeffs, is_real=True, parity="even")
        st = EvolutionState(u=kicked, t=0.0, c=prof.c, k=prof.k)
        base = default_dt(prof, 16) / 2.5
        ref, _ = integrate(st, 1.0, base / 16.0)
        errs = []
        for dt in (base, base / 2.0, base / 4.0):
            fin, _ = integrate(st, 1.0, dt)
            errs.append(float(np.max(np.abs(fin.u.coeffs - ref.u.coeffs))))
        obj["dt_study"] = {"dts": [base, base / 2.0, base / 4.0],
                           "errors": errs,
                           "ratios": [errs[i] / errs[i + 1]
                                      for i in range(len(errs) - 1)]}
    if args.emit_json:
        _write_json(os.path.join(outdir, "run.json"), obj)
    return 0


def cmd_all(args):
    for fn in (cmd_profile, cmd_spectrum, cmd_reduced, cmd_evolve):
        rc = fn(args)
        if rc != 0:
            return rc
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="cdgsk",
        description="Periodic traveling waves of the CDG-SK equation: "
                    "existence, Bloch-Floquet stability, reduced model, "
                    "and time evolution.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file (flags win)")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--json", dest="sel_json", action="store_true",
                       help="emit JSON outputs")
        p.add_argument("--csv", dest="sel_csv", action="store_true",
                       help="emit CSV outputs")
        p.add_argument("--svg", dest="sel_svg", action="store_true",
                       help="emit SVG outputs")
        p.add_argument("--a", type=float)
        p.add_argument("--k", type=float)

    p = sub.add_parser("profile", help="solve traveling-wave profiles")
    common(p)
    p.add_argument("--order", type=int)
    p.add_argument("--N", type=int, dest="N")
    p.add_argument("--tol", type=float)
    p.add_argument("--sweep", help="amplitude sweep start:stop:count")
    p.add_argument("--fit", action="store_true", default=None,
                   help="fit speed coefficients c0, c2, c4")

    p = sub.add_parser("spectrum", help="Bloch-Floquet stability scan")
    common(p)
    p.add_argument("--grid", type=int, help="number of Floquet grid points")
    p.add_argument("--xi", type=float, help="single Floquet slice")
    p.add_argument("--N", type=int, dest="N")
    p.add_argument("--tol", type=float)
    p.add_argument("--profile-tol", type=float, dest="profile_tol")

    p = sub.add_parser("reduced", help="rank-3 reduced model vs closed forms")
    common(p)
    p.add_argument("--xi", type=float)
    p.add_argument("--N", type=int, dest="N")
    p.add_argument("--nodes", type=int)
    p.add_argument("--check-appendix", action="store_true", default=None,
                   dest="check_appendix")
    p.add_argument("--sweep-order", action="store_true", default=None,
                   dest="sweep_order")
    p.add_argument("--profile-tol", type=float, dest="profile_tol")

    p = sub.add_parser("evolve", help="co-moving evolution cross-check")
    common(p)
    p.add_argument("--T", type=float, dest="T")
    p.add_argument("--dt", type=float)
    p.add_argument("--N", type=int, dest="N")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--dt-study", action="store_true", default=None,
                   dest="dt_study")
    p.add_argument("--profile-tol", type=float, dest="profile_tol")

    p = sub.add_parser("all", help="run every subcommand with its defaults")
    common(p)
    for flag, kw in (("--order", dict(type=int)), ("--N", dict(type=int, dest="N")),
                     ("--tol", dict(type=float)), ("--sweep", dict()),
                     ("--fit", dict(action="store_true", default=None)),
                     ("--grid", dict(type=int)), ("--xi", dict(type=float)),
                     ("--nodes", dict(type=int)),
                     ("--check-appendix", dict(action="store_true", default=None,
                                               dest="check_appendix")),
                     ("--sweep-order", dict(action="store_true", default=None,
                                            dest="sweep_order")),
                     ("--T", dict(type=float, dest="T")), ("--dt", dict(type=float)),
                     ("--epsilon", dict(type=float)), ("--seed", dict(type=int)),
                     ("--dt-study", dict(action="store_true", default=None,
                                         dest="dt_study")),
                     ("--profile-tol", dict(type=float, dest="profile_tol"))):
        p.add_argument(flag, **kw)
    return parser


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; pass that through
        return int(exc.code) if exc.code else 0
    # output selectors: default json+csv unless explicit flags given
    any_sel = args.sel_json or args.sel_csv or args.sel_svg
    args.emit_json = args.sel_json or not any_sel
    args.emit_csv = args.sel_csv or not any_sel
    args.emit_svg = args.sel_svg
    os.makedirs(args.out, exist_ok=True)
    handlers = {"profile": cmd_profile, "spectrum": cmd_spectrum,
                "reduced": cmd_reduced, "evolve": cmd_evolve, "all": cmd_all}
    try:
        return handlers[args.command](args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(json.dumps({"error": "validation", "message": str(exc)}))
        return 2
    except NUMERICAL_ERRORS as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}))
        return 3


if __name__ == "__main__":
    sys.exit(main())
