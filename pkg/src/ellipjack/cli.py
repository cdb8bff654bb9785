"""Command-line front end.

Subcommands: jack, f, alpha, energy, verify.  Output is deterministic JSON
(or ``--format text``).  Exit codes: 0 success, 1 verification failure,
2 degenerate spectrum or gap violation, 3 invalid input.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .arith import QSeries, as_rational, format_rational
from .errors import (EllipJackError, InvalidInput, NoUniqueLeading, SpectrumError,
                     VerificationFailure, ZeroConstantTerm)
from .jack import ModelParams, jack_by_recursion
from .kernel import EllipticParams, f_elliptic, f_numeric, f_trig
from .spectral import (alpha_elliptic, alpha_trig, eigenvalue_fixed_point,
                       eigenvalue_lagrange, eigenvalue_trig)
from .symfunc import as_vector, is_partition
from .verify import assemble_P, compare_with_jack, shift_poly, verification_report

EXIT_OK, EXIT_VERIFY, EXIT_SPECTRUM, EXIT_INPUT = 0, 1, 2, 3
MODES = ("trig", "elliptic-formal", "elliptic-numeric")

# flags that carry the semantics of a job (used for the cache key)
SEMANTIC = ("command", "N", "lam", "n", "m", "k_shift", "p", "mode", "K", "q", "a",
            "method", "terms", "suite", "seed", "z", "eps", "quad_points", "tolerance", "format")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="key=value file; explicit flags win")
    p.add_argument("--out", help="write the result here instead of stdout")
    p.add_argument("--format", choices=("json", "text"), default=None)
    p.add_argument("--cache", dest="cache_dir", help="cache directory")


def _model(p):
    p.add_argument("--N", type=int)
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--p", type=int, help="centre-of-mass momentum")


def _series(p):
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--K", type=int)
    p.add_argument("--q", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ellipjack", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("jack", help="assemble P_n and compare with the recursion oracle")
    _model(p)
    p.add_argument("--n")
    p.add_argument("--k-shift", dest="k_shift", type=int)
    _common(p)

    p = sub.add_parser("f", help="building block f_m")
    _model(p)
    _series(p)
    p.add_argument("--m")
    p.add_argument("--z", help="comma-separated angles x_j (z_j = exp(i x_j)) for quadrature")
    p.add_argument("--eps", type=float)
    p.add_argument("--quad-points", dest="quad_points", type=int)
    p.add_argument("--tolerance", type=float)
    _common(p)

    p = sub.add_parser("alpha", help="expansion coefficients alpha_n(m)")
    _model(p)
    _series(p)
    p.add_argument("--n")
    _common(p)

    p = sub.add_parser("energy", help="eigenvalue of P_n")
    _model(p)
    _series(p)
    p.add_argument("--n")
    p.add_argument("--method", choices=("fixed", "lagrange"))
    p.add_argument("--a")
    p.add_argument("--terms", type=int)
    _common(p)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", choices=("identities", "jack", "residuals", "all"))
    p.add_argument("--seed", type=int)
    _common(p)
    return parser


DEFAULTS = {"p": 0, "mode": "trig", "K": 0, "method": "fixed", "terms": 40,
            "suite": "all", "seed": 0, "k_shift": 0, "eps": None, "quad_points": 256,
            "format": "json"}

# config-file spellings that differ from the attribute names
ALIASES = {"lambda": "lam", "k-shift": "k_shift", "quad-points": "quad_points",
           "cache": "cache_dir", "output": "out"}


def read_config(path: str) -> dict:
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidInput(f"config line {raw!r} is not key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[ALIASES.get(key, key.replace("-", "_"))] = value
    return out


INT_KEYS = {"N", "p", "K", "terms", "seed", "k_shift", "quad_points"}
FLOAT_KEYS = {"q", "eps", "tolerance"}


def resolve(args: argparse.Namespace) -> dict:
    """Merge defaults < config file < explicit flags and coerce types."""
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        for k, v in read_config(args.config).items():
            try:
                cfg[k] = int(v) if k in INT_KEYS else float(v) if k in FLOAT_KEYS else v
            except ValueError as exc:
                raise InvalidInput(f"config value {k}={v!r}: {exc}") from None
    for k, v in vars(args).items():
        if v is not None and k != "config":
            cfg[k] = v
    return cfg


def _need(cfg, *keys):
    missing = [k for k in keys if cfg.get(k) is None]
    if missing:
        names = ["--lambda" if k == "lam" else "--" + k.replace("_", "-") for k in missing]
        raise InvalidInput("missing " + ", ".join(names))


def _params(cfg) -> ModelParams:
    _need(cfg, "N", "lam")
    try:
        lam = as_rational(str(cfg["lam"]))
    except (ValueError, ZeroDivisionError):
        raise InvalidInput(f"lambda {cfg['lam']!r} is not a rational p/q") from None
    if cfg["N"] < 1:
        raise InvalidInput("N must be positive")
    return ModelParams(int(cfg["N"]), lam, int(cfg.get("p") or 0))


def _vector(cfg, key, N) -> tuple:
    _need(cfg, key)
    try:
        v = as_vector(cfg[key])
    except (ValueError, TypeError):
        raise InvalidInput(f"--{key} must be comma-separated integers") from None
    if len(v) != N:
        raise InvalidInput(f"--{key} needs {N} entries, got {len(v)}")
    return v


def _ell(cfg):
    mode = cfg["mode"]
    if mode not in MODES:
        raise InvalidInput(f"unknown mode {mode!r}")
    if mode == "elliptic-numeric":
        if cfg.get("q") is None:
            raise InvalidInput("--q is required in elliptic-numeric mode")
    elif cfg.get("q") is not None and mode == "trig":
        raise InvalidInput("--q only applies to elliptic-numeric mode")
    if cfg["K"] < 0:
        raise InvalidInput("K must be >= 0")
    if mode == "trig":
        return None
    return EllipticParams(int(cfg["K"]), cfg.get("q") if mode == "elliptic-numeric" else None)


def _numeric_poly(P, q):
    return {"N": P.N, "terms": [{"partition": list(k), "coeff": repr(float(c))}
                                for k, c in sorted(P.evaluate_at_q(q).items(), reverse=True)]}


# commands ---------------------------------------------------------------------

def cmd_jack(cfg) -> tuple[dict, str]:
    params = _params(cfg)
    n = _vector(cfg, "n", params.N)
    if not is_partition(n):
        raise InvalidInput(f"{n} is not a partition")
    k = int(cfg["k_shift"])
    c = compare_with_jack(n, k, params)
    J = jack_by_recursion(n, params).poly
    lowered = tuple(x - k for x in n)
    P = shift_poly(assemble_P(lowered, params).P, k)
    out = {"n": list(n), "k": k, "lambda": format_rational(params.lam),
           "polynomial": P.normalize_leading().to_json_obj(), "normalization": format_rational(c),
           "oracle": J.to_json_obj(), "matches_oracle": True}
    return out, P.normalize_leading().render()


def cmd_f(cfg) -> tuple[dict, str]:
    params = _params(cfg)
    m = _vector(cfg, "m", params.N)
    ell = _ell(cfg)
    if cfg.get("z") is not None:
        try:
            xs = [float(t) for t in str(cfg["z"]).split(",")]
        except ValueError:
            raise InvalidInput("--z must be comma-separated real angles") from None
        if len(xs) != params.N:
            raise InvalidInput(f"--z needs {params.N} angles")
        z = np.exp(1j * np.array(xs))
        eps = cfg.get("eps")
        if eps is None:
            eps = 0.5 if ell is None or not ell.q else min(0.5, ell.beta / (2 * params.N))
        val = f_numeric(m, params, ell if ell is not None and ell.q else None, z, float(eps),
                        int(cfg["quad_points"]), cfg.get("tolerance"))
        out = {"m": list(m), "z_angles": xs, "eps": eps, "value": [repr(val.real), repr(val.imag)]}
        return out, f"{val}"
    if ell is None:
        P = f_trig(m, params)
        return {"m": list(m), "mode": "trig", "f": P.to_json_obj()}, P.render()
    P = f_elliptic(m, params, ell)
    if cfg["mode"] == "elliptic-numeric":
        obj = _numeric_poly(P, ell.q)
        text = " + ".join(f"{t['coeff']}*M{t['partition']}" for t in obj["terms"]) or "0"
        return {"m": list(m), "mode": cfg["mode"], "K": ell.K, "q": ell.q, "f": obj}, text
    return {"m": list(m), "mode": cfg["mode"], "K": ell.K, "f": P.to_json_obj()}, P.render()


def cmd_alpha(cfg) -> tuple[dict, str]:
    params = _params(cfg)
    n = _vector(cfg, "n", params.N)
    ell = _ell(cfg)
    if ell is None:
        table = alpha_trig(n, params)
    else:
        E = eigenvalue_fixed_point(n, params, EllipticParams(ell.K)).value
        table = alpha_elliptic(n, E, params, EllipticParams(ell.K))
    obj = table.to_json_obj()
    text = "\n".join(f"{r['m']}: {r['coeff']}" for r in obj["entries"])
    return obj, text


def cmd_energy(cfg) -> tuple[dict, str]:
    params = _params(cfg)
    n = _vector(cfg, "n", params.N)
    ell = _ell(cfg)
    if ell is None:
        res = eigenvalue_trig(n, params)
    else:
        formal = EllipticParams(ell.K)
        if cfg["method"] == "lagrange":
            a = cfg.get("a")
            if a is None:
                if params.lam.denominator != 1:
                    raise InvalidInput("--a is required for non-integer lambda")
                a = "1/2"
            try:
                a = as_rational(str(a))
            except (ValueError, ZeroDivisionError):
                raise InvalidInput(f"--a {a!r} is not a rational p/q") from None
            res = eigenvalue_lagrange(n, a, params, formal, int(cfg["terms"]))
        else:
            res = eigenvalue_fixed_point(n, params, formal)
    obj = res.to_json_obj()
    if ell is not None and ell.q is not None:
        obj["mode"] = "elliptic-numeric"
        obj["series"] = obj["value"]
        obj["q"] = ell.q
        obj["value"] = repr(res.value.evaluate(ell.q))
    v = obj["value"]
    return obj, " + ".join(f"{c}*q^{2 * d}" for d, c in enumerate(v)) if isinstance(v, list) else v


def cmd_verify(cfg) -> tuple[dict, str]:
    report = verification_report(cfg["suite"], int(cfg["seed"]))
    lines = [f"{'PASS' if c['passed'] else 'FAIL'} {c['name']}: {c['residual']:.3e} <= {c['tolerance']:.3e}"
             for c in report["checks"]]
    return report, "\n".join(lines)


COMMANDS = {"jack": cmd_jack, "f": cmd_f, "alpha": cmd_alpha, "energy": cmd_energy,
            "verify": cmd_verify}


def cache_key(cfg) -> str:
    sem = {k: (str(cfg[k]) if cfg.get(k) is not None else None) for k in SEMANTIC}
    sem["version"] = __version__
    return hashlib.sha256(json.dumps(sem, sort_keys=True).encode()).hexdigest()


def run(cfg) -> tuple[str, int]:
    """Execute a resolved config; return (rendered output, exit code)."""
    cache = Path(cfg["cache_dir"]) if cfg.get("cache_dir") else None
    if cache is not None:
        hit = cache / (cache_key(cfg) + ".out")
        meta = cache / (cache_key(cfg) + ".code")
        if hit.exists() and meta.exists():
            return hit.read_text(), int(meta.read_text())
    obj, text = COMMANDS[cfg["command"]](cfg)
    code = EXIT_OK
    if cfg["command"] == "verify" and not obj["passed"]:
        code = EXIT_VERIFY
    rendered = text if cfg["format"] == "text" else json.dumps(obj, sort_keys=True, indent=2)
    rendered += "\n"
    if cache is not None:
        cache.mkdir(parents=True, exist_ok=True)
        (cache / (cache_key(cfg) + ".out")).write_text(rendered)
        (cache / (cache_key(cfg) + ".code")).write_text(str(code))
    return rendered, code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        cfg = resolve(args)
        rendered, code = run(cfg)
    except VerificationFailure as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except SpectrumError as exc:
        print(f"degenerate spectrum: {exc}", file=sys.stderr)
        return EXIT_SPECTRUM
    except (InvalidInput, NoUniqueLeading, ZeroConstantTerm, OSError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EllipJackError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if cfg.get("out"):
        Path(cfg["out"]).write_text(rendered)
    else:
        sys.stdout.write(rendered)
    return code


if __name__ == "__main__":
    sys.exit(main())
