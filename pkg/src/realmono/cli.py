"""Command-line front end.

Every subcommand writes one JSON report (stdout unless ``--out``) that
validates against ``report.schema.json``. Exit codes: 0 no violation found,
1 violation (or a hypothesis that does not hold), 2 usage or input error.
Two runs with the same configuration produce identical reports apart from
the ``timestamp`` field.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from . import BACKEND, __version__, zoo
from .errors import ConfigurationError, RealMonoError
from .free import FreeFunctionSpec, check_free_axioms, check_similarity_invariance, sample_point
from .hermitian import ginibre

NO_VIOLATION, VIOLATED, HYPOTHESIS_NOT_MET = "no_violation_found", "violated", "hypothesis_not_met"
SPEC_COMMANDS = ("check-monotone", "check-concave", "check-free-axioms", "check-similarity", "derivative-criterion",
                 "re-independence", "affine-fit", "lipschitz-probe", "hypograph-convexity")


class UsageError(Exception):
    pass


@dataclass
class ExperimentConfig:
    command: str
    spec: FreeFunctionSpec | None = None
    spec_source: str | None = None
    dims: list = field(default_factory=lambda: [1, 2, 3])
    trials: int = 100
    seed: int = 0
    tol: float | None = None
    out: str | None = None
    csv: str | None = None
    workers: int = 1
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.trials < 1:
            raise UsageError("--trials must be >= 1")
        if not self.dims or any(d < 1 for d in self.dims):
            raise UsageError("--dims must list positive integers")

    def summary(self) -> dict:
        out = {"seed": self.seed, "trials": self.trials, "dims": list(self.dims)}
        if self.spec_source is not None:
            out["spec"] = self.spec_source
        if self.tol is not None:
            out["tol"] = self.tol
        return out


# -- helpers ------------------------------------------------------------------------


def _clean(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to None."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def load_schema() -> dict:
    return json.loads(resources.files("realmono").joinpath("report.schema.json").read_text())


def _tol(cfg: ExperimentConfig, default: float) -> float:
    return default if cfg.tol is None else cfg.tol


def _cert(report, cfg: ExperimentConfig):
    if cfg.csv:
        report.write_csv(cfg.csv)
    return report.to_json(), report.outcome


# -- commands -----------------------------------------------------------------------


def cmd_check_monotone(cfg):
    from .certifiers import certify_monotone
    return _cert(certify_monotone(cfg.spec, cfg.dims, cfg.trials, cfg.seed, _tol(cfg, 1e-8),
                                  workers=cfg.workers), cfg)


def cmd_check_concave(cfg):
    from .certifiers import certify_concave
    return _cert(certify_concave(cfg.spec, cfg.dims, cfg.trials, cfg.seed, _tol(cfg, 1e-8),
                                 workers=cfg.workers), cfg)


def cmd_derivative_criterion(cfg):
    from .certifiers import derivative_criterion
    return _cert(derivative_criterion(cfg.spec, None, cfg.trials, cfg.seed, _tol(cfg, 1e-7), n_list=cfg.dims,
                                      workers=cfg.workers), cfg)


def cmd_re_independence(cfg):
    from .certifiers import re_independence_test
    return _cert(re_independence_test(cfg.spec, cfg.dims, cfg.trials, cfg.seed, _tol(cfg, 1e-8)), cfg)


def cmd_hypograph_convexity(cfg):
    from .hypograph import check_matrix_convexity
    return _cert(check_matrix_convexity(cfg.spec, cfg.dims, cfg.trials, cfg.seed, _tol(cfg, 1e-8),
                                        workers=cfg.workers), cfg)


def cmd_check_free_axioms(cfg):
    reps = []
    for n in cfg.dims:
        reps.extend(check_free_axioms(cfg.spec, n, cfg.trials, cfg.seed, _tol(cfg, 1e-9)))
    return [r.to_json() for r in reps], NO_VIOLATION if all(r.passed for r in reps) else VIOLATED


def cmd_check_similarity(cfg):
    reps = [check_similarity_invariance(cfg.spec, n, cfg.trials, cfg.seed, _tol(cfg, 1e-8)) for n in cfg.dims]
    ok = all(r.max_residual <= r.threshold for r in reps)
    return [r.to_json() for r in reps], NO_VIOLATION if ok else VIOLATED


def cmd_affine_fit(cfg):
    from .certifiers import affine_fit
    fit = affine_fit(cfg.spec, None, cfg.trials, cfg.seed)
    tol = _tol(cfg, 1e-8)
    ok = fit.residual <= tol and fit.scalar_base
    res = dict(fit.to_json(), kind="affine_fit", tol=tol, rigid=ok, spec=cfg.spec.name)
    return res, NO_VIOLATION if ok else VIOLATED


def cmd_lipschitz_probe(cfg):
    from .certifiers import lipschitz_probe
    F = cfg.spec
    n = cfg.dims[0]
    center = np.stack([cfg.options["center"] * np.eye(n, dtype=np.complex128)] * F.arity)
    rep = lipschitz_probe(F, center, cfg.options["radius"], cfg.trials, cfg.seed, _tol(cfg, 1e-8))
    out = rep.to_json()
    out["kind"] = out.pop("claim")
    return out, rep.outcome


def cmd_choi(cfg):
    from .certifiers import analyse_map, conjugation_map, identity_map, kraus_map, transpose_map
    n = cfg.options["n"]
    rng = np.random.default_rng([cfg.seed, 8, n])
    kind = cfg.options["map"]
    if kind == "identity":
        L = identity_map
    elif kind == "transpose":
        L = transpose_map
    elif kind == "conjugation":
        L = conjugation_map(ginibre(rng, n))
    else:
        L = kraus_map([ginibre(rng, n) for _ in range(cfg.options["kraus_count"])])
    rep = analyse_map(L, n, kind, cfg.seed)
    return rep.to_json(), NO_VIOLATION if rep.verdict.holds else VIOLATED


def cmd_block_construction(cfg):
    from .certifiers import block_concavity_construction
    rng = np.random.default_rng([cfg.seed, 6])
    rows, ok = [], True
    for t in range(cfg.trials):
        n = cfg.dims[t % len(cfg.dims)]
        k = cfg.options.get("arity", 1)
        A, B = sample_point("P_Re", n, k, rng), sample_point("P_Re", n, k, rng)
        lam, eps = float(rng.uniform(0.05, 0.95)), float(10.0 ** rng.uniform(-2, 0))
        lam = lam if cfg.options.get("lam") is None else cfg.options["lam"]
        eps = eps if cfg.options.get("eps") is None else cfg.options["eps"]
        rep = block_concavity_construction(A, B, lam, eps, _tol(cfg, 1e-10))
        ok &= rep.passed
        rows.append(dict(rep.to_json(), trial=t, dim=n))
    return rows, NO_VIOLATION if ok else VIOLATED


def cmd_agh_probe(cfg):
    from .means import agh_counterexample_search
    domain = cfg.options.get("domain", "P_Re")
    run, rep, worst = agh_counterexample_search(cfg.dims, cfg.trials, cfg.seed, cfg.tol, domain)
    out = {"kind": "agh_search", "domain": domain, "trials_run": run, "worst_margin": worst,
           "failure": rep.to_json() if rep is not None else None}
    return out, VIOLATED if rep is not None else NO_VIOLATION


def _field(cfg):
    from .pluriharmonic import ScalarField, bank_field
    src = cfg.options.get("field")
    if src is None:
        raise UsageError("--field is required")
    if src.endswith(".json") or os.path.sep in src:
        return ScalarField.from_json(json.loads(Path(src).read_text()))
    return bank_field(src)


def cmd_pluriharmonic(cfg):
    from .pluriharmonic import holomorphy_residual, pluriharmonic_residual, polydisc_points
    f = _field(cfg)
    pts = polydisc_points(f, cfg.trials, cfg.seed)
    tol = _tol(cfg, 1e-6)
    u = f.real_part()
    ph = max(pluriharmonic_residual(u, z) for z in pts)
    dbar = holomorphy_residual(f, pts) if f.cls == "holomorphic" else None
    ok = ph <= tol and (dbar is None or dbar <= tol)
    out = {"kind": "pluriharmonic", "field": f.name, "class": f.cls, "points": len(pts), "tol": tol,
           "pluriharmonic_residual": ph, "dbar_residual": dbar}
    return out, NO_VIOLATION if ok else VIOLATED


def cmd_linearity_test(cfg):
    from .pluriharmonic import linearity_test
    rep = linearity_test(_field(cfg), cfg.trials, _tol(cfg, 1e-6), cfg.seed)
    outcome = {"linear": NO_VIOLATION, "not_linear": VIOLATED}.get(rep.outcome, HYPOTHESIS_NOT_MET)
    out = rep.to_json()
    out["kind"] = out.pop("claim")
    return out, outcome


def cmd_verify_all(cfg):
    from .acceptance import run_all
    results = run_all(cfg.seed, cfg.options.get("only"))
    for r in results:
        print(r.line(), file=sys.stderr)
    return [r.to_json() for r in results], NO_VIOLATION if all(r.passed for r in results) else VIOLATED


COMMANDS = {
    "check-monotone": cmd_check_monotone,
    "check-concave": cmd_check_concave,
    "check-free-axioms": cmd_check_free_axioms,
    "check-similarity": cmd_check_similarity,
    "derivative-criterion": cmd_derivative_criterion,
    "choi": cmd_choi,
    "re-independence": cmd_re_independence,
    "affine-fit": cmd_affine_fit,
    "block-construction": cmd_block_construction,
    "lipschitz-probe": cmd_lipschitz_probe,
    "agh-probe": cmd_agh_probe,
    "hypograph-convexity": cmd_hypograph_convexity,
    "pluriharmonic": cmd_pluriharmonic,
    "linearity-test": cmd_linearity_test,
    "verify-all": cmd_verify_all,
}


def run(cfg: ExperimentConfig) -> tuple[dict, int]:
    """Dispatch, wrap in the report envelope, validate. Returns ``(report, exit_code)``."""
    result, outcome = COMMANDS[cfg.command](cfg)
    code = 0 if outcome == NO_VIOLATION else 1
    report = _clean({
        "command": cfg.command,
        "version": __version__,
        "backend": BACKEND,
        "config": cfg.summary(),
        "outcome": outcome,
        "exit_code": code,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "result": result,
    })
    jsonschema.validate(report, load_schema())
    return report, code


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"


# -- argument parsing -------------------------------------------------------------------


def _dims(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}") from None


def _seed_default() -> int:
    env = os.environ.get("REALMONO_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"REALMONO_SEED must be an integer, got {env!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="realmono", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"realmono {__version__} ({BACKEND} kernels)")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dims", type=_dims, default=None, help="comma-separated dimensions, e.g. 1,2,3")
    common.add_argument("--trials", type=int, default=None)
    common.add_argument("--seed", type=int, default=None, help="defaults to $REALMONO_SEED, else 0")
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--csv", help="write per-trial margins as CSV (certificate commands)")
    common.add_argument("--workers", type=int, default=1)

    speced = argparse.ArgumentParser(add_help=False)
    src = speced.add_mutually_exclusive_group(required=True)
    src.add_argument("--zoo", help=f"zoo member: {', '.join(zoo.ZOO)}")
    src.add_argument("--spec", help="path to a FreeFunctionSpec JSON file")

    helps = {
        "check-monotone": "sampled search for real monotonicity violations",
        "check-concave": "sampled search for real concavity violations",
        "check-free-axioms": "direct-sum and unitary invariance residuals",
        "check-similarity": "similarity invariance residuals",
        "derivative-criterion": "real positivity of the Frechet derivative along real-positive directions",
        "re-independence": "does Re F ignore Im X, and is R -> Re F(R) monotone",
        "affine-fit": "fit a0 I + sum a_j X_j and report the residual",
        "lipschitz-probe": "Lipschitz ratio of Re F on a ball against 2M/r",
        "hypograph-convexity": "sampled matrix convexity of the real hypograph",
    }
    subs = {}
    for name in COMMANDS:
        parents = [common, speced] if name in SPEC_COMMANDS else [common]
        subs[name] = sub.add_parser(name, parents=parents, help=helps.get(name))

    subs["lipschitz-probe"].add_argument("--center", type=float, default=2.0, help="center is CENTER * I")
    subs["lipschitz-probe"].add_argument("--radius", type=float, default=0.5)
    subs["choi"].add_argument("--map", choices=("identity", "transpose", "conjugation", "kraus"), required=True)
    subs["choi"].add_argument("--n", type=int, default=2)
    subs["choi"].add_argument("--kraus-count", type=int, default=2)
    subs["block-construction"].add_argument("--lam", type=float)
    subs["block-construction"].add_argument("--eps", type=float)
    subs["block-construction"].add_argument("--arity", type=int, default=1)
    subs["agh-probe"].add_argument("--domain", choices=("P_Re", "hermitian_PD"), default="P_Re")
    for name in ("pluriharmonic", "linearity-test"):
        subs[name].add_argument("--field", required=True, help="bank field name or ScalarField JSON path")
    subs["verify-all"].add_argument("--only", type=_dims, help="criterion numbers, e.g. 4,8")
    return p


DEFAULT_TRIALS = {"check-monotone": 1000, "check-concave": 1000, "check-free-axioms": 100,
                  "check-similarity": 100, "derivative-criterion": 200, "re-independence": 200,
                  "affine-fit": 20, "block-construction": 100, "lipschitz-probe": 200, "agh-probe": 10_000,
                  "hypograph-convexity": 300, "pluriharmonic": 20, "linearity-test": 64, "choi": 1,
                  "verify-all": 1}


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    spec, source = None, None
    if getattr(args, "zoo", None):
        spec, source = zoo.spec(args.zoo), args.zoo
    elif getattr(args, "spec", None):
        try:
            spec = FreeFunctionSpec.load(args.spec)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read spec file {args.spec}: {exc}") from None
        source = str(args.spec)
    seed = args.seed if args.seed is not None else _seed_default()
    if args.command == "verify-all" and args.seed is None and "REALMONO_SEED" not in os.environ:
        from .acceptance import SEED
        seed = SEED
    dims = args.dims or ([1, 2] if args.command == "agh-probe" else [1, 2, 3])
    if args.command == "lipschitz-probe" and args.dims is None:
        dims = [2]
    opts = {k: v for k, v in vars(args).items()
            if k in ("center", "radius", "map", "n", "kraus_count", "lam", "eps", "arity", "domain", "field",
                     "only")}
    if args.command == "lipschitz-probe":
        opts["center"], opts["radius"] = args.center, args.radius
    return ExperimentConfig(args.command, spec, source, dims, args.trials if args.trials is not None else DEFAULT_TRIALS[args.command], seed,
                            args.tol, args.out, args.csv, args.workers, opts)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    try:
        cfg = config_from_args(args)
        report, code = run(cfg)
    except (UsageError, ConfigurationError) as exc:
        print(f"realmono: error: {exc}", file=sys.stderr)
        return 2
    except RealMonoError as exc:
        print(f"realmono: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"realmono: error: {exc}", file=sys.stderr)
        return 2
    text = dumps(report)
    if cfg.out:
        try:
            Path(cfg.out).write_text(text)
        except OSError as exc:
            print(f"realmono: error: cannot write {cfg.out}: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
