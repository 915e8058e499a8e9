"""Command-line front end.

Every subcommand prints records as JSON (sorted keys, 12 significant
digits) or CSV. Exit status: 0 success, 1 failed check, 2 usage error.
Defaults can come from a ``key = value`` config file given by ``--config``
or the DIRICHLET_FORGE_CONFIG environment variable; flags override it.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path
from typing import Any, Sequence

from . import arith, beurling, dirichlet, monotone, suite, zerofree
from .errors import ForgeError

CONFIG_ENV = "DIRICHLET_FORGE_CONFIG"
SIG_DIGITS = 12


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# ---------------------------------------------------------------- converters


def _bounded(kind, lo=None, hi=None, strict_lo=False):
    def convert(text):
        try:
            value = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid {kind.__name__} value: {text!r}") from None
        if isinstance(value, float) and not math.isfinite(value):
            raise argparse.ArgumentTypeError(f"value must be finite: {text!r}")
        if lo is not None and (value <= lo if strict_lo else value < lo):
            raise argparse.ArgumentTypeError(f"value must be {'>' if strict_lo else '>='} {lo}: {text!r}")
        if hi is not None and value > hi:
            raise argparse.ArgumentTypeError(f"value must be <= {hi}: {text!r}")
        return value

    convert.__name__ = kind.__name__
    return convert


def _character_spec(text: str) -> tuple[int, int]:
    try:
        q, index = (int(part) for part in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected q:index, got {text!r}") from None
    if q < 2 or not 0 <= index:
        raise argparse.ArgumentTypeError(f"need q >= 2 and index >= 0, got {text!r}")
    return q, index


def _int_list(text: str) -> tuple[int, ...]:
    if not text.strip():
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _flag(text: str) -> bool:
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


FLOAT = _bounded(float)
POS_FLOAT = _bounded(float, 0.0, strict_lo=True)
TERMS = _bounded(int, 1)
THREADS = _bounded(int, 1, 256)
GRID = _bounded(int, 100, 100_000)
KMAX = _bounded(int, 0, 40)
SIEVE = _bounded(int, 2, 10**8)
ORDER = _bounded(int, 1, 400)
SIZE = _bounded(int, 3, 64)


def parse_coefficient(text: str) -> arith.CoefficientFunction:
    """unit | liouville | character:q:index | twist:t0 | custom:path"""
    kind, _, rest = text.partition(":")
    try:
        if kind == "unit" and not rest:
            return arith.CoefficientFunction.unit()
        if kind == "liouville" and not rest:
            return arith.CoefficientFunction.liouville()
        if kind == "character":
            q, index = _character_spec(rest)
            return arith.CoefficientFunction.character(q, index)
        if kind == "twist":
            return arith.CoefficientFunction.vertical_twist(float(rest))
        if kind == "custom":
            return arith.load_prime_values(rest)
    except (ValueError, OSError, argparse.ArgumentTypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    raise argparse.ArgumentTypeError(f"unknown coefficient function {text!r}")


# ---------------------------------------------------------------- output


def _clean(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if hasattr(value, "item"):
        value = value.item()
    if isinstance(value, complex):
        return {"re": _clean(value.real), "im": _clean(value.imag)}
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            return str(value)
        return float(f"{value:.{SIG_DIGITS}g}")
    return str(value)


def _flatten(record: dict, prefix: str = "") -> dict:
    out = {}
    for key, value in record.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            out.update(_flatten(value, f"{name}."))
        elif isinstance(value, list):
            out[name] = ";".join(json.dumps(v, sort_keys=True) if isinstance(v, dict) else str(v) for v in value)
        else:
            out[name] = value
    return out


def render(records: list[dict], fmt: str) -> str:
    cleaned = [_clean(r) for r in records]
    if fmt == "json":
        body = cleaned[0] if len(cleaned) == 1 else cleaned
        return json.dumps(body, sort_keys=True) + "\n"
    rows = [_flatten(r) for r in cleaned]
    header = sorted({k for row in rows for k in row})
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------- commands


def _point(args) -> complex:
    return complex(args.sigma, args.t)


def _check_terms(args, n: int) -> int:
    if n > args.sieve_limit:
        raise UsageError(f"--terms {n} exceeds --sieve-limit {args.sieve_limit}")
    return n


def cmd_zeta(args):
    params = {"sigma": args.sigma, "t": args.t, "terms": args.terms}
    if args.x is not None:
        params["x"] = args.x
        val = dirichlet.hurwitz_zeta(_point(args), args.x, args.terms)
        return [val.to_record("hurwitz_zeta", params)], True
    val = dirichlet.zeta_euler_maclaurin(_point(args), args.terms)
    return [val.to_record("zeta", params)], True


def cmd_lfunction(args):
    q, index = args.character
    chi = arith.character(q, index)
    val = dirichlet.l_function(chi, _point(args), args.terms)
    params = {"q": q, "index": index, "sigma": args.sigma, "t": args.t, "terms": args.terms}
    return [val.to_record("l_function", params)], True


def cmd_dirichlet(args):
    system = beurling.parse_system(args.system)
    n = _check_terms(args, args.terms)
    val = dirichlet.eval_dirichlet_truncated(args.coeff, system, _point(args), n)
    params = {"coeff": args.coeff.label, "system": system.label, "sigma": args.sigma, "t": args.t, "terms": n}
    return [val.to_record("dirichlet", params)], True


def cmd_exp_identity(args):
    system = beurling.parse_system(args.system)
    n = _check_terms(args, args.terms)
    residual = dirichlet.exp_identity_residual(args.coeff, system, args.sigma, n)
    rec = {"op": "exp_identity", "params": {"coeff": args.coeff.label, "system": system.label,
                                             "sigma": args.sigma, "terms": n},
           "residual": residual, "tolerance": args.tolerance, "passed": residual <= args.tolerance}
    return [rec], rec["passed"]


_PROBE_FUNCTIONS = {
    "log-zeta": lambda s: math.log(dirichlet.zeta_euler_maclaurin(s).value.real),
    "zeta": lambda s: dirichlet.zeta_euler_maclaurin(s).value.real,
    "exp-neg": lambda x: math.exp(-x),
    "exp": math.exp,
    "geometric": lambda x: 1.0 / (1.0 - x),
    "linear": lambda x: x,
    "sin": math.sin,
}


def cmd_monotone(args):
    fn = _PROBE_FUNCTIONS[args.function]
    probe = monotone.absolutely_monotone_probe if args.absolute else monotone.completely_monotone_probe
    report = probe(fn, args.x0, args.x1, args.h, args.kmax)
    rec = {"op": "absolutely_monotone" if args.absolute else "completely_monotone",
           "params": {"function": args.function, "x0": args.x0, "x1": args.x1, "h": args.h, "kmax": args.kmax},
           "worst_violation": report.worst_violation, "tolerance": report.tolerance,
           "failed_order": report.failed_order, "passed": report.passed}
    expect = not args.expect_fail
    return [rec], report.passed == expect


def cmd_radius(args):
    if args.input:
        series = monotone.PowerSeries.from_csv(args.input)
        source = str(args.input)
    elif args.series:
        series = monotone.corpus()[args.series]
        source = args.series
    else:
        system = beurling.parse_system(args.system)
        n = _check_terms(args, args.terms)
        stream = dirichlet.log_coefficients(args.coeff, system, n)
        series = monotone.taylor_from_dirichlet(stream, args.center, args.order, tail_weight=args.tail_weight)
        source = f"log-stream:{args.coeff.label}@{args.center}"
    if args.export:
        series.to_csv(args.export)
    params = {"source": source, "order": series.order}
    if args.exp_check:
        check = monotone.radius_equality_check(series)
        rec = {"op": "radius_equality", "params": params, "radius_f": check.radius_f,
               "radius_exp_f": check.radius_exp_f, "passed": check.passed}
        return [rec], check.passed
    rec = {"op": "radius", "params": params, "radius": monotone.radius_estimate(series)}
    return [rec], True


def cmd_beurling(args):
    system = beurling.parse_system(args.system)
    n = _check_terms(args, args.terms)
    params = {"system": system.label, "sigma": args.sigma, "terms": n}
    if args.probe == "zeta":
        params["t"] = args.t
        return [beurling.zeta_system_eval(system, _point(args), n).to_record("zeta_system", params)], True
    if args.probe == "prime-sum":
        return [{"op": "prime_sum", "params": params, "value": beurling.prime_sum(system, args.sigma, n)}], True
    if args.probe == "divergence":
        probe = beurling.prime_sum_divergence_probe(system, args.sigmas, n)
        rec = {"op": "divergence_probe", "params": {**params, "sigmas": list(probe.sigmas)},
               "values": list(probe.values), "passed": probe.strictly_increasing}
        return [rec], probe.strictly_increasing
    worst = float(beurling.beur_mangoldt_identity_residuals(system, n)[1:].max())
    rec = {"op": "mangoldt_identity", "params": params, "max_residual": worst, "passed": worst <= 1e-10}
    return [rec], rec["passed"]


def cmd_zerofree(args):
    if args.check == "minimum":
        m = zerofree.min_re_w_plus_w2(args.grid, args.restrict)
        rec = {"op": "min_re_w_plus_w2", "params": {"grid": args.grid, "restrict": args.restrict},
               "minimum": m.value, "argmins": list(m.argmins)}
        return [rec], m.value >= zerofree.BOX_BOUND - 1e-9
    if args.check == "chain":
        if args.character is not None:
            coeff = arith.CoefficientFunction.character(*args.character)
        else:
            coeff = args.coeff
        system = beurling.parse_system(args.system)
        n = _check_terms(args, args.terms)
        c = zerofree.chain_bound_sum(coeff, system, args.sigma, n)
        rec = {"op": "prime_chain", "params": {"coeff": coeff.label, "system": system.label,
                                                "sigma": args.sigma, "terms": n},
               "lhs": c.lhs, "mid": c.mid, "rhs": c.rhs, "passed": c.passed}
        return [rec], c.passed
    n = _check_terms(args, args.terms)
    if args.check == "toy":
        r = zerofree.toy_factorization_check(args.t0, args.sigma, n)
        rec = {"op": "toy_factorization", "params": {"t0": args.t0, "sigma": args.sigma, "terms": n},
               "direct": r.direct, "via_exp": r.via_exp, "residual": r.residual,
               "passed": r.residual <= args.tolerance}
        return [rec], rec["passed"]
    r = zerofree.liouville_converse_check(args.sigma, n)
    rec = {"op": "liouville_converse", "params": {"sigma": args.sigma, "terms": n}, "target": r.target,
           "via_l": r.via_l, "via_exp": r.via_exp, "residual": r.residual, "passed": r.residual <= args.tolerance}
    return [rec], rec["passed"]


def cmd_pingpong(args):
    facts = [("A", k, True) for k in args.seed_a] + [("B", k, True) for k in args.seed_b]
    try:
        state = zerofree.PingPongState.seeded(facts, generator=args.generator, size=args.size)
    except ForgeError as exc:
        raise UsageError(str(exc)) from None
    params = {"seed_a": list(args.seed_a), "seed_b": list(args.seed_b), "size": args.size,
              "generator": args.generator, "disjoint": args.disjoint}
    if args.disjoint:
        res = zerofree.pingpong_disjoint_resolve(state)
        rec = {"op": "pingpong_resolve", "params": params, "contradiction": res.contradiction,
               "witness": res.witness, "A": list(res.a), "B": list(res.b)}
        return [rec], True
    closed = zerofree.pingpong_derive(state)
    rec = {"op": "pingpong_derive", "params": params, "A": list(closed.values("A")),
           "B": list(closed.values("B")), "applications": closed.applications,
           "contradiction": closed.contradiction}
    return [rec], True


def cmd_verify_all(args):
    results = suite.run_all(args.max_n, args.threads)
    failures = sum(1 for r in results if not r["passed"])
    rec = {"op": "verify_all", "params": {"max_n": args.max_n}, "checks": results,
           "failures": failures, "total": len(results)}
    if args.format == "csv":
        return results, failures == 0
    return [rec], failures == 0


# ---------------------------------------------------------------- parser


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", type=Path, default=None, help="write to this file instead of stdout")
    p.add_argument("--threads", type=THREADS, default=1)
    p.add_argument("--sieve-limit", type=SIEVE, default=arith.DEFAULT_SIEVE_LIMIT)
    p.add_argument("--config", type=Path, default=None, help="key = value defaults file")


def _add_point(p: argparse.ArgumentParser, sigma: float = 2.0) -> None:
    p.add_argument("--sigma", type=FLOAT, default=sigma)
    p.add_argument("--t", type=FLOAT, default=0.0)


def _add_coeff(p: argparse.ArgumentParser) -> None:
    p.add_argument("--coeff", type=parse_coefficient, default="unit",
                   help="unit | liouville | character:q:index | twist:t0 | custom:path")
    p.add_argument("--system", default="classical", help="classical | quadratic:<d> | custom:<path>")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dirichlet-forge", description="Dirichlet series, Beurling systems and monotonicity probes.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("zeta", help="Riemann or Hurwitz zeta by Euler-Maclaurin")
    _add_common(p)
    _add_point(p)
    p.add_argument("--terms", type=TERMS, default=dirichlet.EM_TERMS)
    p.add_argument("--x", type=POS_FLOAT, default=None, help="Hurwitz shift x > 0")
    p.set_defaults(run=cmd_zeta)

    p = sub.add_parser("lfunction", help="Dirichlet L-function of a character")
    _add_common(p)
    _add_point(p)
    p.add_argument("--character", type=_character_spec, default="4:1")
    p.add_argument("--terms", type=TERMS, default=dirichlet.EM_TERMS)
    p.set_defaults(run=cmd_lfunction)

    p = sub.add_parser("dirichlet", help="truncated generalized Dirichlet series")
    _add_common(p)
    _add_point(p)
    _add_coeff(p)
    p.add_argument("--terms", type=TERMS, default=100_000)
    p.set_defaults(run=cmd_dirichlet)

    p = sub.add_parser("exp-identity", help="L vs exp of its log series")
    _add_common(p)
    _add_point(p, sigma=3.0)
    _add_coeff(p)
    p.add_argument("--terms", type=TERMS, default=100_000)
    p.add_argument("--tolerance", type=POS_FLOAT, default=1e-5)
    p.set_defaults(run=cmd_exp_identity)

    p = sub.add_parser("monotone", help="finite-difference monotonicity probe")
    _add_common(p)
    p.add_argument("--function", choices=sorted(_PROBE_FUNCTIONS), default="log-zeta")
    p.add_argument("--x0", type=FLOAT, default=1.5)
    p.add_argument("--x1", type=FLOAT, default=5.0)
    p.add_argument("--h", type=POS_FLOAT, default=0.1)
    p.add_argument("--kmax", type=KMAX, default=6)
    p.add_argument("--absolute", type=_flag, nargs="?", const=True, default=False)
    p.add_argument("--expect-fail", type=_flag, nargs="?", const=True, default=False)
    p.set_defaults(run=cmd_monotone)

    p = sub.add_parser("radius", help="radius of convergence estimate")
    _add_common(p)
    _add_coeff(p)
    p.add_argument("--input", type=Path, default=None, help="CSV with index,coefficient rows")
    p.add_argument("--series", choices=sorted(monotone.corpus()), default=None)
    p.add_argument("--center", type=FLOAT, default=2.0)
    p.add_argument("--order", type=ORDER, default=60)
    p.add_argument("--terms", type=TERMS, default=1_000_000)
    p.add_argument("--tail-weight", type=FLOAT, default=1.0)
    p.add_argument("--exp-check", type=_flag, nargs="?", const=True, default=False)
    p.add_argument("--export", type=Path, default=None, help="write the series as CSV")
    p.set_defaults(run=cmd_radius)

    p = sub.add_parser("beurling", help="Beurling system evaluations")
    _add_common(p)
    _add_point(p)
    p.add_argument("--system", default="classical", help="classical | quadratic:<d> | custom:<path>")
    p.add_argument("--probe", choices=("zeta", "prime-sum", "divergence", "identity"), default="zeta")
    p.add_argument("--sigmas", type=lambda s: tuple(FLOAT(x) for x in s.split(",")), default="1.5,1.2,1.05")
    p.add_argument("--terms", type=TERMS, default=1_000_000)
    p.set_defaults(run=cmd_beurling)

    p = sub.add_parser("zerofree", help="zero-free consequence checks")
    _add_common(p)
    _add_coeff(p)
    p.add_argument("--check", choices=("minimum", "chain", "toy", "liouville"), default="minimum")
    p.add_argument("--grid", type=GRID, default=2001)
    p.add_argument("--restrict", choices=("disk", "real", "circle"), default="disk")
    p.add_argument("--character", type=_character_spec, default=None)
    p.add_argument("--sigma", type=FLOAT, default=1.5)
    p.add_argument("--t0", type=FLOAT, default=14.0)
    p.add_argument("--terms", type=TERMS, default=1_000_000)
    p.add_argument("--tolerance", type=POS_FLOAT, default=1e-3)
    p.set_defaults(run=cmd_zerofree)

    p = sub.add_parser("pingpong", help="midpoint-rule deduction on a grid")
    _add_common(p)
    p.add_argument("--seed-a", type=_int_list, default="", help="grid indices known to be in A (0 is implied)")
    p.add_argument("--seed-b", type=_int_list, default="", help="grid indices known to be in B")
    p.add_argument("--size", type=SIZE, default=8, help="grid half-width K")
    p.add_argument("--generator", type=FLOAT, default=1.0)
    p.add_argument("--disjoint", type=_flag, nargs="?", const=True, default=False)
    p.set_defaults(run=cmd_pingpong)

    p = sub.add_parser("verify-all", help="run every invariant suite")
    _add_common(p)
    p.add_argument("--max-n", type=_bounded(int, 100, 10**6), default=10_000)
    p.set_defaults(run=cmd_verify_all)
    return parser


def load_config(path: str | Path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment. Keys use flag names."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().lstrip("-").replace("-", "_")
        if not sep or not key or not key.replace("_", "").isalnum():
            raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        out[key] = value.strip()
    return out


def _config_path(argv: Sequence[str]) -> str | None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    return known.config or os.environ.get(CONFIG_ENV) or None


def _apply_config(parser: argparse.ArgumentParser, argv: Sequence[str], config: dict[str, str]) -> None:
    if not config:
        return
    sub_action = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    command = next((a for a in argv if a in sub_action.choices), None)
    known = {a.dest for p in sub_action.choices.values() for a in p._actions}
    unknown = sorted(set(config) - known)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    if command is None:
        return
    subparser = sub_action.choices[command]
    dests = {a.dest for a in subparser._actions}
    subparser.set_defaults(**{k: v for k, v in config.items() if k in dests and k != "config"})


def run(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        path = _config_path(argv)
        _apply_config(parser, argv, load_config(path) if path else {})
        args = parser.parse_args(argv)
        records, ok = args.run(args)
        text = render(records, args.format)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except (ForgeError, KeyError, OSError, argparse.ArgumentTypeError) as exc:
        print(f"dirichlet-forge: error: {exc}", file=sys.stderr)
        return 2
    if args.output is not None:
        args.output.write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
