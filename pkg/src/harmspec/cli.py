"""Command-line entry point ``harmspec``.

Exit status: 0 on success, 1 when a verification fails (bound violation,
tolerance miss, invalid cover), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import ball as ball_mod
from .covers import (RelativeCover, efficiency, eigenvalue_bound, embedding_bound,
                     greedy_cover, natural_cover, validate_cover)
from .dims import degree_of_index, h_dim, n_dim
from .embedding import embedding_matrix, singular_values, verify_prop34
from .errors import DomainError, HarmspecError
from .expo import FiniteSpectrum, sequence_gauge
from .geometry import BallSpec, DomainUnion, Geometry, load_geometry
from .harmonic import orthonormal_basis
from . import composition as comp

log = logging.getLogger("harmspec")

SUBCOMMANDS = ("dims", "singvals", "gauge", "verify-embedding", "cover-bound",
               "halfplane-example", "compose")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    geometry: str | None = None
    fmt: str = "json"
    output: str | None = None


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _dump_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(x) if isinstance(x, float) else x for x in r])
    return buf.getvalue()


def _positive(name, value):
    if value is None or not value > 0:
        raise UsageError(f"--{name} must be positive, got {value!r}")


def _geometry(path) -> Geometry:
    if path is None:
        raise UsageError("--geometry is required")
    if str(path).startswith("builtin:"):
        text = resources.files("harmspec.data").joinpath(str(path)[8:] + ".json").read_text()
        return load_geometry(json.loads(text))
    if not Path(path).exists():
        raise UsageError(f"--geometry: no such file {path}")
    try:
        return load_geometry(path)
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise UsageError(f"--geometry: malformed file {path}: {exc!r}")


def _cover_for(geom: Geometry, p: dict) -> RelativeCover:
    if geom.cover:
        return RelativeCover(geom.cover, geom.cover_scalings, geom.outer, geom.inner)
    if p.get("greedy_radius") is not None:
        step = p.get("greedy_step") or p["greedy_radius"]
        return greedy_cover(geom.outer, geom.inner, p["greedy_radius"], step,
                            seed=p.get("seed", 0))
    return natural_cover(geom.outer, geom.inner)


# --- subcommands -----------------------------------------------------------

def cmd_dims(p, fmt):
    d, kmax = p["d"], p["kmax"]
    rows = [(k, n_dim(d, k), h_dim(d, k)) for k in range(kmax + 1)]
    if fmt == "csv":
        return _dump_csv(("k", "N_d", "h_d"), rows), 0
    return _dump_json({"d": d, "rows": [dict(k=k, N_d=n, h_d=h) for k, n, h in rows]}), 0


def cmd_singvals(p, fmt):
    _positive("count", p["count"])
    spec = ball_mod.ExactBallSpectrum(p["d"], p["gamma"])
    rows = []
    for n in range(1, p["count"] + 1):
        rows.append((n, degree_of_index(spec.d, n), ball_mod.exact_singular_value(spec, n)))
    g = ball_mod.exact_gauge(spec)
    summary = {"c": g.a, "alpha": g.alpha, "gauge": g.value,
               "log_rate": ball_mod.asymptotic_log_rate(spec)}
    if p.get("summary"):
        Path(p["summary"]).write_text(_dump_json(summary))
    if fmt == "csv":
        return _dump_csv(("n", "k", "s_n"), rows), 0
    return _dump_json({"rows": [dict(n=n, k=k, s_n=s) for n, k, s in rows],
                       "summary": summary}), 0


def _read_spectrum(path) -> FiniteSpectrum:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    vals = []
    for i, line in enumerate(text.splitlines()):
        line = line.strip()
        if not line:
            continue
        try:
            vals.append(float(line.split(",")[0]))
        except ValueError:
            if i == 0:
                continue  # header row
            raise UsageError(f"--input: line {i + 1} is not a number: {line!r}")
    return FiniteSpectrum.from_unsorted(vals)


def cmd_gauge(p, fmt):
    if p.get("input"):
        spec = _read_spectrum(p["input"])
        a, alpha = p["a"], p["alpha"]
        if a is None or alpha is None:
            raise UsageError("--a and --alpha are required with --input")
        g = sequence_gauge(spec, a, alpha)
    elif p.get("d") is not None and p.get("gamma") is not None:
        exact = ball_mod.ExactBallSpectrum(p["d"], p["gamma"])
        if p["a"] is None and p["alpha"] is None:
            g = ball_mod.exact_gauge(exact)
        else:
            g = sequence_gauge(exact.prefix(p["count"]), p["a"], p["alpha"])
    else:
        raise UsageError("give either --input FILE or --d and --gamma")
    return _dump_json(g.to_dict()), 0


def cmd_verify_embedding(p, fmt):
    tol, kmax = p["tol"], p["kmax"]
    _positive("tol", tol)
    if p.get("geometry") is None:
        if p.get("d") is None or p.get("gamma") is None:
            raise UsageError("give --d and --gamma, or --geometry")
        rep = verify_prop34(p["d"], p["gamma"], kmax, tol)
        spec = ball_mod.ExactBallSpectrum(p["d"], p["gamma"])
        unit = BallSpec((0.0,) * p["d"], 1.0)
        cover = RelativeCover((unit,), (p["gamma"],), DomainUnion((unit.dilate(p["gamma"]),)),
                              DomainUnion((unit,)))
        bound, _ = embedding_bound(cover, spec.d)
        sv = np.asarray(rep["singular_values"])
        check = _bound_check(sv, bound)
        out = {"singular_values": rep["singular_values"], "exact_values": rep["exact_values"],
               "compared": rep["compared"], "max_rel_error": rep["max_rel_error"],
               "passed": rep["passed"], "bound_check": check}
        ok = rep["passed"] and check["passed"]
        return _dump_json(out), 0 if ok else 1
    geom = _geometry(p["geometry"])
    if len(geom.outer.balls) != 1:
        raise UsageError("numerical verification needs a single outer ball")
    basis = orthonormal_basis(geom.outer.balls[0], kmax)
    sv = singular_values(embedding_matrix(basis, geom.inner, tol=tol))
    cover = _cover_for(geom, p)
    report = validate_cover(cover)
    bound, _ = embedding_bound(cover, geom.d)
    check = _bound_check(sv, bound)
    check["cover_valid"] = report.valid
    check["cover_violations"] = report.violations
    ok = check["passed"] and report.valid
    out = {"singular_values": sv.tolist(), "max_rel_error": None, "passed": ok,
           "bound_check": check}
    return _dump_json(out), 0 if ok else 1


def _bound_check(sv: np.ndarray, bound) -> dict:
    n = np.arange(1, len(sv) + 1)
    b = bound(n)
    slack = b - sv
    viol = [int(i) for i in n[sv > b * (1 + 1e-9)]]
    return {"prefactor": bound.prefactor, "rate": bound.rate, "alpha": bound.alpha,
            "min_slack": float(slack.min()), "violations": viol, "passed": not viol}


def cmd_cover_bound(p, fmt):
    geom = _geometry(p["geometry"])
    d = geom.d if p.get("d") is None else p["d"]
    if d != geom.d:
        raise UsageError(f"--d {d} does not match the geometry dimension {geom.d}")
    cover = _cover_for(geom, p)
    report = validate_cover(cover)
    eff = efficiency(cover, d - 1)
    emb, gauge = embedding_bound(cover, d)
    eig = eigenvalue_bound(cover, d, p["K"])
    ns = range(1, p["count"] + 1)
    out = {"N": cover.size, "Gamma": list(eff.gamma_logs), "norm_min": eff.norm_min,
           "norm_dminus1": eff.norm_k[d - 1], "c_embedding": gauge.a, "c_eigen": eig.rate,
           "prefactor": gauge.value, "eigen_prefactor": eig.prefactor,
           "cover": [dict(b.to_dict(), gamma=g) for b, g in zip(cover.balls, cover.scalings)],
           "cover_valid": report.valid, "cover_violations": report.violations,
           "bound_table": [[n, emb(n)] for n in ns],
           "eigen_bound_table": [[n, eig(n)] for n in ns]}
    return _dump_json(out), 0 if report.valid else 1


def _galerkin_report(phi, galerkin_ball, omega_prime, cover, kmax, p, inverse_derivative=None):
    op, ev, conv = comp.converged_eigenvalues(phi, galerkin_ball, kmax, rel_tol=p["conv_tol"],
                                              quad_tol=p["quad_tol"])
    K = comp.estimate_K(phi, omega_prime, galerkin_ball, n_samples=p["n_samples"],
                        seed=p["seed"], inverse_derivative=inverse_derivative)
    bound = eigenvalue_bound(cover, 2, K)
    rep = comp.decay_report(ev, bound, conv)
    out = {"K_estimate": K, "c": bound.rate, "prefactor": bound.prefactor,
           "eigenvalues": rep["eigenvalues"], "fitted_ratio": rep["fitted_ratio"],
           "violations": rep["violations"], "converged_count": int(conv.sum()),
           "quadrature": op.quadrature}
    return out, not rep["violations"]


def cmd_halfplane(p, fmt):
    gamma = p["gamma"]
    if not 1 < gamma < 2:
        raise UsageError("--gamma must lie in (1, 2)")
    centre = BallSpec((0.0, 2.0), 1.0)
    galerkin_ball = centre.dilate(gamma)
    cover = RelativeCover((centre,), (gamma,), DomainUnion((galerkin_ball,)),
                          DomainUnion((centre,)))
    out, ok = _galerkin_report(
        comp.halfplane_map(), galerkin_ball, comp.Semidisc(2j), cover, p["kmax"], p,
        inverse_derivative=lambda x: comp.example_psi_derivative(x - 2j))
    out["gamma"] = gamma
    out["reference_ratio"] = gamma ** -0.25
    return _dump_json(out), 0 if ok else 1


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise UsageError(f"not a complex number: {text!r}")


def _catalog(name: str, params):
    vals = [_parse_complex(v) for v in (params or [])]
    if name == "identity":
        return comp.identity_map()
    if name == "scaling":
        if len(vals) not in (1, 2):
            raise UsageError("scaling takes --param RHO [--param CENTER]")
        return comp.scaling_map(*vals)
    if name == "mobius":
        if len(vals) != 4:
            raise UsageError("mobius takes four --param values a b c d")
        return comp.mobius_map(*vals)
    if name == "halfplane":
        return comp.halfplane_map()
    raise UsageError(f"unknown map {name!r}")


def cmd_compose(p, fmt):
    phi = _catalog(p["map"], p.get("param"))
    geom = _geometry(p["geometry"])
    if geom.d != 2 or len(geom.outer.balls) != 1:
        raise UsageError("compose needs a planar geometry with a single outer disc")
    cover = _cover_for(geom, p)
    report = validate_cover(cover)
    out, ok = _galerkin_report(phi, geom.outer.balls[0], geom.inner, cover, p["kmax"], p)
    out["cover_valid"] = report.valid
    return _dump_json(out), 0 if (ok and report.valid) else 1


HANDLERS = {"dims": cmd_dims, "singvals": cmd_singvals, "gauge": cmd_gauge,
            "verify-embedding": cmd_verify_embedding, "cover-bound": cmd_cover_bound,
            "halfplane-example": cmd_halfplane, "compose": cmd_compose}


def run(config: RunConfig) -> int:
    """Execute one subcommand and write its artifact; returns the exit status."""
    if config.command not in HANDLERS:
        raise UsageError(f"unknown subcommand {config.command!r}")
    params = dict(config.params)
    params.setdefault("geometry", config.geometry)
    text, status = HANDLERS[config.command](params, config.fmt)
    if config.output:
        Path(config.output).write_text(text)
    else:
        sys.stdout.write(text)
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="harmspec", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, default_fmt="json"):
        sp.add_argument("--format", dest="fmt", choices=("json", "csv"), default=default_fmt)
        sp.add_argument("--output", "-o", default=None)
        return sp

    sp = common(sub.add_parser("dims", help="spherical harmonic dimension table"), "csv")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--kmax", type=int, required=True)

    sp = common(sub.add_parser("singvals", help="exact concentric-ball singular values"), "csv")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--gamma", type=float, required=True)
    sp.add_argument("--count", type=int, required=True)
    sp.add_argument("--summary", default=None, help="also write the JSON summary here")

    sp = common(sub.add_parser("gauge", help="(a, alpha)-gauge of a spectrum"))
    sp.add_argument("--input", default=None, help="CSV file, one value per line ('-' = stdin)")
    sp.add_argument("--d", type=int)
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--count", type=int, default=1000)
    sp.add_argument("--a", type=float)
    sp.add_argument("--alpha", type=float)

    sp = common(sub.add_parser("verify-embedding", help="numerical embedding singular values"))
    sp.add_argument("--d", type=int)
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--geometry", default=None)
    sp.add_argument("--kmax", type=int, default=6)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--greedy-radius", type=float, default=None)
    sp.add_argument("--greedy-step", type=float, default=None)

    sp = common(sub.add_parser("cover-bound", help="relative cover efficiency and bounds"))
    sp.add_argument("--geometry", required=True)
    sp.add_argument("--d", type=int, default=None)
    sp.add_argument("--K", type=float, default=1.0)
    sp.add_argument("--count", type=int, default=20)
    sp.add_argument("--greedy-radius", type=float, default=None)
    sp.add_argument("--greedy-step", type=float, default=None)
    sp.add_argument("--seed", type=int, default=0)

    for name, helptext in (("halfplane-example", "Galerkin study of psi^-1 + 2i"),
                           ("compose", "Galerkin study of a catalogue map")):
        sp = common(sub.add_parser(name, help=helptext))
        sp.add_argument("--kmax", type=int, default=25)
        sp.add_argument("--conv-tol", type=float, default=1e-6)
        sp.add_argument("--quad-tol", type=float, default=1e-10)
        sp.add_argument("--n-samples", type=int, default=4096)
        sp.add_argument("--seed", type=int, default=0)
        if name == "halfplane-example":
            sp.add_argument("--gamma", type=float, default=1.9)
        else:
            sp.add_argument("--map", required=True,
                            choices=("identity", "scaling", "mobius", "halfplane"))
            sp.add_argument("--param", action="append", help="map parameter (complex literal)")
            sp.add_argument("--geometry", required=True)
            sp.add_argument("--greedy-radius", type=float, default=None)
            sp.add_argument("--greedy-step", type=float, default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    params = {k: v for k, v in vars(args).items()
              if k not in ("command", "fmt", "output", "verbose", "geometry")}
    for key in ("conv_tol", "quad_tol", "tol"):
        if key in params and not params[key] > 0:
            parser.error(f"--{key.replace('_', '-')} must be positive")
    config = RunConfig(args.command, params, getattr(args, "geometry", None), args.fmt, args.output)
    try:
        return run(config)
    except (UsageError, DomainError) as exc:
        # out-of-range parameter values count as usage errors
        parser.error(str(exc))
    except HarmspecError as exc:
        print(f"harmspec: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
