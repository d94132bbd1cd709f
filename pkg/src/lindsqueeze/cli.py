"""
Command-line front end.

    lindsqueeze solve-squeeze --mu 3 --nu 1 --kappa-re 1
    lindsqueeze evolve --config run.json --methods exact,split --out run.csv
    lindsqueeze selftest --seed 7

Configuration is one JSON document (see ``RunConfig``); command-line flags
override file values. Exit codes: 0 success, 2 validation error, 3 numeric or
singularity error (including failed self-checks), 4 I/O error.
"""
import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, replace
from itertools import combinations

import numpy as np

from . import disentangle, evolve, fock, model, numkit, superop
from .errors import LindSqueezeError, NumericError, ValidationError

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


@dataclass(frozen=True)
class RunConfig:
    omega: float = 1.0
    mu: float = 1.0
    nu: float = 0.1
    kappa_re: float = 0.03
    kappa_im: float = 0.0
    dim: int = 24
    theta: float = 0.0
    state_kind: str = "coherent"
    state_param: complex = 0.5
    t_max: float = 2.0
    n_points: int = 21
    methods: tuple = ("exact", "split")
    rk4_dt: float = 1e-3
    route: str = "superop"
    out: str = None
    format: str = "csv"
    seed: int = 0

    @property
    def params(self):
        return model.ModelParams(self.omega, self.mu, self.nu, complex(self.kappa_re, self.kappa_im))

    def times(self):
        if self.t_max == 0:
            return np.array([0.0])
        return np.linspace(0.0, self.t_max, self.n_points)


def check_config(cfg):
    if int(cfg.dim) != cfg.dim or not 4 <= cfg.dim <= 64:
        raise ValidationError(f"dim must be an integer in [4, 64], got {cfg.dim!r}")
    if not (math.isfinite(cfg.t_max) and cfg.t_max >= 0):
        raise ValidationError(f"t_max must be >= 0, got {cfg.t_max!r}")
    if cfg.n_points < 2 and cfg.t_max > 0:
        raise ValidationError(f"n_points must be >= 2, got {cfg.n_points!r}")
    if not cfg.methods:
        raise ValidationError("at least one method is required")
    unknown = [m for m in cfg.methods if m not in evolve.METHODS]
    if unknown:
        raise ValidationError(f"unknown methods {unknown}; choose from {list(evolve.METHODS)}")
    if not cfg.rk4_dt > 0:
        raise ValidationError(f"rk4_dt must be positive, got {cfg.rk4_dt!r}")
    if cfg.format not in ("csv", "json"):
        raise ValidationError(f"format must be csv or json, got {cfg.format!r}")
    if cfg.state_kind not in ("fock", "coherent", "thermal"):
        raise ValidationError(f"state kind must be fock, coherent or thermal, got {cfg.state_kind!r}")
    if cfg.route not in ("superop", "operator"):
        raise ValidationError(f"route must be superop or operator, got {cfg.route!r}")
    model.validate(cfg.params)
    return cfg


def _complex_param(value):
    if isinstance(value, (list, tuple)):
        return complex(value[0], value[1])
    return complex(value)


def config_from_document(doc, base=None):
    """Fold a parsed JSON config document into a RunConfig."""
    cfg = base or RunConfig()
    updates = {}
    m = doc.get("model", {})
    for key in ("omega", "mu", "nu", "kappa_re", "kappa_im"):
        if key in m:
            updates[key] = float(m[key])
    for key in ("dim", "seed"):
        if key in doc:
            updates[key] = int(doc[key])
    for key in ("theta", "rk4_dt"):
        if key in doc:
            updates[key] = float(doc[key])
    if "route" in doc:
        updates["route"] = str(doc["route"])
    if "methods" in doc:
        updates["methods"] = tuple(doc["methods"])
    if "initial_state" in doc:
        st = doc["initial_state"]
        updates["state_kind"] = st.get("kind", cfg.state_kind)
        if "param" in st:
            updates["state_param"] = _complex_param(st["param"])
    if "time" in doc:
        if "t_max" in doc["time"]:
            updates["t_max"] = float(doc["time"]["t_max"])
        if "n_points" in doc["time"]:
            updates["n_points"] = int(doc["time"]["n_points"])
    if "output" in doc:
        if "path" in doc["output"]:
            updates["out"] = doc["output"]["path"]
        if "format" in doc["output"]:
            updates["format"] = doc["output"]["format"]
    return replace(cfg, **updates)


def _parse_state(text):
    kind, _, param = text.partition(":")
    if not param:
        return kind, None
    return kind, complex(param)


_FLAG_FIELDS = {
    "omega": "omega", "mu": "mu", "nu": "nu", "kappa_re": "kappa_re", "kappa_im": "kappa_im",
    "dim": "dim", "theta": "theta", "t_max": "t_max", "points": "n_points",
    "rk4_dt": "rk4_dt", "route": "route", "out": "out", "format": "format", "seed": "seed",
}


def build_config(args):
    cfg = RunConfig()
    if args.config:
        try:
            with open(args.config) as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config {args.config} is not valid JSON: {exc}") from exc
        cfg = config_from_document(doc, cfg)
    updates = {}
    for flag, fname in _FLAG_FIELDS.items():
        value = getattr(args, flag, None)
        if value is not None:
            updates[fname] = value
    if getattr(args, "methods", None):
        updates["methods"] = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    if getattr(args, "state", None):
        kind, param = _parse_state(args.state)
        updates["state_kind"] = kind
        if param is not None:
            updates["state_param"] = param
    return check_config(replace(cfg, **updates))


def _fmt(x):
    return format(float(x), ".17g")


def write_table(columns, rows, fmt, stream):
    if fmt == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    else:
        doc = {"columns": list(columns),
               "rows": [dict(zip(columns, (float(v) for v in row))) for row in rows]}
        json.dump(doc, stream, indent=1)
        stream.write("\n")


def read_csv_table(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        columns = next(reader)
        rows = [[float(v) for v in row] for row in reader]
    return columns, rows


def _emit(text, out):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- solve-squeeze -----------------------------------------------------------

def squeeze_report(p):
    p = model.validate(p)
    sol = model.solve_squeeze(p)
    tc = model.transformed_coeffs(p, sol)
    raw = model.bracket_coeffs(p, sol)
    return {
        "phi": sol.phi,
        "t_h": sol.t_h,
        "abs_eps": sol.abs_eps,
        "c": sol.c,
        "s": sol.s,
        "mu_p": tc.mu_p,
        "nu_p": tc.nu_p,
        "discriminant": model.discriminant(p),
        "residual_C": abs(raw.C),
        "residual_D": abs(raw.D),
    }


def cmd_solve_squeeze(cfg):
    report = squeeze_report(cfg.params)
    if cfg.format == "json":
        text = json.dumps(report, indent=1) + "\n"
    else:
        text = "".join(f"{k},{_fmt(v)}\n" for k, v in report.items())
    _emit(text, cfg.out)
    return report


# -- evolve ------------------------------------------------------------------

def _ordered_methods(methods):
    return [m for m in evolve.METHODS if m in methods]


def run_methods(cfg):
    """Evolve the configured initial state (squeezed frame) with every requested method."""
    p = cfg.params
    sol = model.solve_squeeze(p)
    tc = model.transformed_coeffs(p, sol)
    d = cfg.dim
    param = cfg.state_param
    if cfg.state_kind == "fock":
        param = int(round(param.real))
    elif cfg.state_kind == "thermal":
        param = param.real
    rho0 = fock.state(cfg.state_kind, d, param)
    times = cfg.times()
    results = {}
    L_S = None
    for m in _ordered_methods(cfg.methods):
        if m in ("exact", "rk4") and L_S is None:
            L_S = superop.liouvillian_transformed(p, sol, tc, d, cfg.theta).L_S
        if m == "exact":
            results[m] = evolve.evolve_exact(L_S, rho0, times)
        elif m == "rk4":
            results[m] = evolve.evolve_rk4(L_S, rho0, times, cfg.rk4_dt)
        elif m == "split":
            results[m] = evolve.evolve_split(p, sol, tc, rho0, times, cfg.theta)
        elif m == "factorized":
            results[m] = evolve.evolve_factorized(p, sol, tc, rho0, times, cfg.theta, cfg.route)
    return times, results


def evolution_table(cfg):
    times, results = run_methods(cfg)
    methods = list(results)
    N = fock.number(cfg.dim)
    columns = ["t"]
    for m in methods:
        columns += [f"{m}_{k}" for k in ("n_mean", "trace", "trace_defect", "herm_defect", "min_eig")]
    pairs = list(combinations(methods, 2))
    for m1, m2 in pairs:
        columns += [f"{m1}_vs_{m2}_frobenius_error", f"{m1}_vs_{m2}_trace_distance"]
    rows = []
    for i, t in enumerate(times):
        row = [t]
        for m in methods:
            rho = results[m].states[i]
            rep = evolve.compare(rho, rho)
            n_mean = evolve.observables(rho, [N])[0].real
            row += [n_mean, np.trace(rho).real, rep.trace_defect, rep.herm_defect, rep.min_eig]
        for m1, m2 in pairs:
            rep = evolve.compare(results[m1].states[i], results[m2].states[i])
            row += [rep.frobenius_error, rep.trace_distance]
        rows.append(row)
    return columns, rows


def cmd_evolve(cfg):
    columns, rows = evolution_table(cfg)
    buf = io.StringIO()
    write_table(columns, rows, cfg.format, buf)
    _emit(buf.getvalue(), cfg.out)
    return columns, rows


# -- selftest ----------------------------------------------------------------

def _interior_err(M, target, d, m):
    return float(np.abs(superop.project_interior(M - target, d, m)).max())


def _comm(X, Y):
    return X @ Y - Y @ X


def selftest_checks(seed=0, fault=None):
    """Run the invariant suite; returns a list of (name, passed, detail)."""
    rng = np.random.default_rng(seed)
    out = []

    def record(name, err, tol):
        out.append((name, bool(err <= tol), f"max error {err:.3e} (tol {tol:.0e})"))

    d = 12
    theta = float(rng.uniform(0, 2 * np.pi))
    for label, gens in (("K", superop.k_generators(d, theta)),
                        ("K~", superop.ktilde_generators(d, theta))):
        err = max(
            numkit.frobenius(_comm(gens.k3, gens.kp) - gens.kp),
            numkit.frobenius(_comm(gens.k3, gens.km) + gens.km),
            _interior_err(_comm(gens.kp, gens.km), -2 * gens.k3, d, d - 2),
        )
        record(f"su(1,1) relations {label}", err, 1e-10)

    K, Kt = superop.k_generators(d, theta), superop.ktilde_generators(d, theta)
    a = fock.annihilation(d, theta)
    ad = a.conj().T
    cross = [
        (_comm(K.k3, Kt.kp), 0 * K.k3), (_comm(K.k3, Kt.km), 0 * K.k3), (_comm(K.k3, Kt.k3), 0 * K.k3),
        (_comm(K.kp, Kt.kp), -superop.sandwich(ad, ad)),
        (_comm(K.kp, Kt.km), -superop.sandwich(ad, ad)),
        (_comm(K.kp, Kt.k3), -0.5 * (superop.left(ad @ ad) + superop.right(ad @ ad))),
        (_comm(K.km, Kt.kp), superop.sandwich(a, a)),
        (_comm(K.km, Kt.km), superop.sandwich(a, a)),
        (_comm(K.km, Kt.k3), 0.5 * (superop.left(a @ a) + superop.right(a @ a))),
    ]
    record("cross commutators", max(_interior_err(M, T, d, d - 2) for M, T in cross), 1e-10)

    err = 0.0
    for _ in range(20):
        A, X, B = (rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6)) for _ in range(3))
        err = max(err, float(np.abs(superop.vec(A @ X @ B) - superop.sandwich(A, B) @ superop.vec(X)).max()))
    record("vec(AXB) = (A x B^T) vec(X)", err, 1e-12)

    err = 0.0
    for _ in range(200):
        p = _random_params(rng)
        sol = model.solve_squeeze(p)
        if fault == "wrong-root" and p.k > 0:
            sol = model.squeeze_from_tanh(sol.phi, min(sol.t_h + 0.01, 0.999))
        err = max(err, model.anomalous_residual(p, sol) / (p.mu + p.nu))
    record("quadratic residual", err, 1e-10)

    err = 0.0
    for _ in range(50):
        ca, cb, cc = (complex(*rng.normal(size=2)) for _ in range(3))
        t = float(rng.uniform(0.0, 1.0))
        try:
            f = disentangle.gfe(ca, cb, cc, t)
        except NumericError:
            continue
        if abs(f.F) < 1e-3:
            continue
        err = max(err, two_by_two_defect(ca, cb, cc, t, f))
    record("2x2 disentangling identity", err, 1e-9)

    d = 24
    p = model.ModelParams(1.0, 3.0, 1.0, complex(np.exp(1j * rng.uniform(0, 2 * np.pi))))
    sol = model.solve_squeeze(p)
    tc = model.transformed_coeffs(p, sol)
    L = superop.liouvillian_original(p, d, theta)
    tl = superop.liouvillian_transformed(p, sol, tc, d, theta)
    S = fock.squeeze_operator(d, sol.eps, theta)
    S_inv = fock.squeeze_operator(d, -sol.eps, theta)
    record("frame conjugation", _interior_err(superop.frame_conjugate(L, S, S_inv), tl.L_S, d, d // 4), 1e-5)

    ones = superop.vec(np.eye(d))
    err = max(float(np.abs(ones @ L).max()), float(np.abs(ones @ tl.L_S).max()))
    record("trace preservation", err, 1e-10)
    return out


def _random_params(rng):
    mu = float(rng.uniform(0.1, 5.0))
    nu = float(rng.uniform(0.0, 0.99)) * mu
    k = float(rng.uniform(0.0, 1.0)) * math.sqrt(mu * nu)
    omega = float(rng.uniform(0.1, 5.0))
    return model.ModelParams(omega, mu, nu, k * complex(np.exp(1j * rng.uniform(-np.pi, np.pi))))


def two_by_two_defect(a, b, c, t, f):
    """Relative Frobenius gap of the disentangling identity in the defining 2x2 representation."""
    L3 = np.diag([0.5, -0.5]).astype(complex)
    Lp = np.array([[0, 1], [0, 0]], dtype=complex)
    Lm = np.array([[0, 0], [-1, 0]], dtype=complex)
    lhs = numkit.expm(2 * a * L3 + b * Lp + c * Lm, t)
    rhs = numkit.expm(Lp, f.G) @ numkit.expm(L3, -2 * f.log_f) @ numkit.expm(Lm, f.E)
    return numkit.frobenius(lhs - rhs) / max(1.0, numkit.frobenius(lhs))


def cmd_selftest(seed=0, fault=None, stream=None):
    stream = stream or sys.stdout
    checks = selftest_checks(seed, fault)
    for name, ok, detail in checks:
        stream.write(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}\n")
    n_fail = sum(not ok for _, ok, _ in checks)
    stream.write(f"{len(checks) - n_fail}/{len(checks)} checks passed (seed {seed})\n")
    return n_fail == 0


# -- argument parsing --------------------------------------------------------

def _common_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration file")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--dim", type=int, help="Fock truncation d")
    common.add_argument("--seed", type=int)
    common.add_argument("--omega", type=float)
    common.add_argument("--mu", type=float)
    common.add_argument("--nu", type=float)
    common.add_argument("--kappa-re", dest="kappa_re", type=float)
    common.add_argument("--kappa-im", dest="kappa_im", type=float)
    common.add_argument("--theta", type=float, help="phase of the annihilation operator")
    common.add_argument("--t-max", dest="t_max", type=float)
    common.add_argument("--points", type=int)
    return common


def make_parser():
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="lindsqueeze", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve-squeeze", parents=[common], help="solve for the removing squeeze")
    ev = sub.add_parser("evolve", parents=[common], help="run time evolution")
    ev.add_argument("--methods", help="comma-separated subset of exact,split,factorized,rk4")
    ev.add_argument("--state", help="initial state, e.g. coherent:0.5, fock:2, thermal:0.3")
    ev.add_argument("--rk4-dt", dest="rk4_dt", type=float)
    ev.add_argument("--route", choices=("superop", "operator"))
    st = sub.add_parser("selftest", parents=[common], help="run the invariant suite")
    st.add_argument("--inject-fault", dest="fault", choices=("wrong-root",), help=argparse.SUPPRESS)
    return parser


def main(argv=None):
    args = make_parser().parse_args(argv)
    try:
        if args.command == "selftest":
            seed = 0 if args.seed is None else args.seed
            return EXIT_OK if cmd_selftest(seed, args.fault) else EXIT_NUMERIC
        cfg = build_config(args)
        if args.command == "solve-squeeze":
            cmd_solve_squeeze(cfg)
        else:
            cmd_evolve(cfg)
        return EXIT_OK
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericError as exc:
        where = f" (t = {exc.t!r})" if getattr(exc, "t", None) is not None else ""
        print(f"numeric error{where}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except LindSqueezeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
