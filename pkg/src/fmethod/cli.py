"""Command-line interface: solve, verify, compare, fourier, dump-setting.

Every run ends with one JSON status line on stdout and exits with
0 (success), 1 (verification or comparison failed), 2 (invalid input or
unsupported request) or 3 (no singular vectors found).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

from .algebra.parse import parse_polynomial
from .algebra.ratfunc import RatFunc
from .config import ConfigError, RunConfig, parse_weight_items
from .errors import FMethodError, ParseError, PoleError, UnsupportedError
from .lie.action import RepWeight, coordinate_space
from .lie.builtin import builtin_setting
from .solver import FSetting, candidate_degrees, solve_singular_vectors, step4_reduce
from .verify import (SCHEMA_VERSION, DiffOperator, compare_juhl, compare_rankin_cohen,
                     emit_operator, identity_operator, sample_assignments, specialize_operator,
                     target_weight, verify_equivariance)
from .weyl import fourier_hat, parse_weyl

log = logging.getLogger("fmethod")

EXIT_OK, EXIT_FAIL, EXIT_ERROR, EXIT_NONE = 0, 1, 2, 3


class Finished(Exception):
    def __init__(self, code, status):
        super().__init__(status.get("message", ""))
        self.code = code
        self.status = status


def _dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True)


# weights


def _parse_value(name, text, params):
    if text == "sym":
        return None
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        pass
    try:
        p = parse_polynomial(text, params)
    except ParseError as exc:
        raise ConfigError(f"weights.{name}", f"cannot read {text!r}: {exc}") from None
    return RatFunc.poly(p)


def resolve(config: RunConfig):
    """Build the FSetting described by ``config``."""
    config.validate()
    try:
        setting = builtin_setting(config.setting, config.n if config.setting == "juhl" else None)
    except FMethodError as exc:
        raise ConfigError("setting", str(exc)) from None
    weights = config.weight_map
    allowed = set(setting.params) | {"nu"}
    for k in weights:
        if k not in allowed:
            raise ConfigError(f"weights.{k}", f"unknown weight; expected one of {sorted(allowed)}")
    fixed = {}
    for p in setting.params:
        v = _parse_value(p, weights.get(p, "sym"), ())
        if v is not None and not isinstance(v, Fraction):
            raise ConfigError(f"weights.{p}", "source weights are 'sym' or a rational")
        fixed[p] = v
    lam = setting.lambda_weight(fixed)
    target = None
    if config.setting == "rankin_cohen" and config.n is not None:
        target = config.n
    if config.setting == "juhl" and config.delta is not None:
        target = config.delta
    degree_max = config.degree_max if config.degree_max is not None else 0
    if target is not None:
        degree_max = target if config.degree_max is None else max(degree_max, target)
    fs = FSetting(setting, lam, None, degree_max, config.parity)
    w = None
    if "nu" in weights:
        nu = _parse_value("nu", weights["nu"], lam.params)
        if nu is None:
            raise ConfigError("weights.nu", "the target weight must be a value, not 'sym'")
        tori = [n for n, _, torus in fs.levi_ops if torus]
        if len(tori) != 1:
            raise ConfigError("weights.nu", "setting has no single torus direction for nu")
        w = RepWeight(fs.sub_lie, {tori[0]: nu}, lam.params)
    elif target is not None:
        probe = FSetting(setting, lam, None, target)
        found = [c for c in candidate_degrees(probe) if c.degree == target]
        if len(found) != 1:
            raise ConfigError("delta", f"no unique weight at degree {target}")
        w = RepWeight(fs.sub_lie, dict(found[0].weight), lam.params)
    if w is not None:
        fs = FSetting(setting, lam, w, degree_max, config.parity)
    return fs, target


# solve


def _problem_config(config):
    # execution-only knobs stay out of artifacts so they are byte-identical
    return replace(config, jobs=1, out=None, format="json")


def run_solve(config: RunConfig):
    fs, target = resolve(config)
    vectors, reports = solve_singular_vectors(fs, jobs=config.jobs, with_reports=True)
    entries = []
    for sv in vectors:
        d = sv.to_json()
        d["operator"] = emit_operator(sv).to_json()
        entries.append(d)
    artifact = {
        "schema_version": SCHEMA_VERSION,
        "kind": "SolveResult",
        "config": _problem_config(config).to_ini(),
        "problem": fs.to_json(),
        "singular_vectors": entries,
        "multiplicity_reports": reports,
    }
    return fs, vectors, reports, artifact


def _solve_text(vectors, reports, latex=False):
    lines = []
    for r in reports:
        lines.append(f"degree {r['degree']}: ansatz {r['ansatz_dimension']},"
                     f" kernel {r['kernel_dimension']}" + ("  [multiplicity anomaly]" if r["anomaly"] else ""))
    for sv in vectors:
        D = emit_operator(sv)
        if latex:
            lines.append(f"% degree {sv.degree}\n{D.latex()}")
        else:
            lines.append(f"psi_{sv.degree} = {sv.psi}")
            lines.append(f"  D = {D.text()}")
    return "\n".join(lines)


def _emit(config, payload_json, payload_text, payload_latex=None):
    body = {"json": lambda: _dumps(payload_json), "text": lambda: payload_text,
            "latex": lambda: payload_latex if payload_latex is not None else payload_text}[config.format]()
    if config.out:
        Path(config.out).write_text(body + "\n")
    else:
        print(body)


def cmd_solve(config):
    fs, vectors, reports, artifact = run_solve(config)
    _emit(config, artifact, _solve_text(vectors, reports), _solve_text(vectors, reports, True))
    status = {"command": "solve", "solutions": len(vectors),
              "degrees": [sv.degree for sv in vectors],
              "anomalies": [r["degree"] for r in reports if r["anomaly"]]}
    if not vectors:
        raise Finished(EXIT_NONE, {**status, "status": "no_solutions"})
    return status


# verify


def _load_operators(spec, config):
    if spec in (None, "identity"):
        fs, _ = resolve(replace(config, weights=tuple(
            (k, v) for k, v in config.weights if k != "nu")))
        return [identity_operator(fs.setting, fs.lam)]
    path = Path(spec)
    if not path.exists():
        raise ConfigError("operator", f"no such file {spec!r}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError("operator", f"not valid JSON: {exc}") from None
    try:
        if data.get("kind") == "SolveResult":
            return [DiffOperator.from_json(e["operator"]) for e in data["singular_vectors"]]
        return [DiffOperator.from_json(data)]
    except (KeyError, TypeError) as exc:
        raise ConfigError("operator", f"malformed operator file: missing {exc}") from None


def _operator_from_expr(expr, config):
    fs, _ = resolve(replace(config, weights=tuple((k, v) for k, v in config.weights if k != "nu")))
    space = coordinate_space(fs.lie)
    try:
        op = parse_weyl(expr, space)
    except ParseError as exc:
        raise ConfigError("expr", str(exc)) from None
    return [DiffOperator(op, fs.setting, fs.lam, None, f"expr:{expr}")]


def verify_operators(operators, config):
    reports = []
    for D in operators:
        def check(a, D=D):
            Ds = specialize_operator(D, a)
            target_weight(Ds, Ds.lam)
        count = config.samples if D.params else 1
        points = sample_assignments(D.params, count, seed=config.seed, check=check)
        for a in points:
            reports.append(verify_equivariance(D, a, config.test_degree))
    return reports


def cmd_verify(config, operator=None, expr=None):
    ops = _operator_from_expr(expr, config) if expr else _load_operators(operator, config)
    reports = verify_operators(ops, config)
    payload = {"schema_version": SCHEMA_VERSION, "kind": "VerifyResult",
               "reports": [r.to_json() for r in reports]}
    _emit(config, payload, "\n".join(r.text() for r in reports))
    failing = sorted({f"{r.operator_id}:{g}" for r in reports for g in r.failing_generators})
    status = {"command": "verify", "operators": len(ops), "checks": len(reports),
              "failing": failing}
    if failing:
        raise Finished(EXIT_FAIL, {**status, "status": "fail"})
    return status


# compare


def cmd_compare(config):
    if config.setting == "rankin_cohen":
        if config.n is None:
            raise ConfigError("n", "compare rankin_cohen needs --n (the order)")
        degree = config.n
    else:
        if config.delta is None:
            raise ConfigError("delta", "compare juhl needs --delta (nu - lambda)")
        degree = config.delta
        if degree % 2:
            raise UnsupportedError(
                f"delta={degree} is odd: the product bound (nu - lambda)/2 - j is a"
                " half-integer, so the comparator is defined for even delta only"
                " (see README, open questions)")
    cfg = replace(config, degree_max=degree, parity=None)
    if any(cfg.weight_map.get(p, "sym") != "sym" for p in ("k1", "k2", "lam")):
        raise ConfigError("weights", "comparison needs symbolic source weights")
    fs, vectors, reports, _ = run_solve(cfg)
    found = [sv for sv in vectors if sv.degree == degree]
    if not found:
        raise Finished(EXIT_FAIL, {"command": "compare", "status": "fail",
                                   "message": f"no singular vector at degree {degree}"})
    if config.setting == "rankin_cohen":
        rep = compare_rankin_cohen(degree, found[0])
    else:
        rep = compare_juhl(config.n, degree, found[0])
    _emit(config, rep.to_json(), rep.text())
    status = {"command": "compare", "family": rep.family, "degree": degree,
              "proportional": rep.proportional, "scalar": rep.scalar,
              "kernel_dimension": len(found)}
    if not rep.proportional:
        raise Finished(EXIT_FAIL, {**status, "status": "fail"})
    return status


# fourier and dump-setting


def cmd_fourier(expression, fmt="text"):
    t = parse_weyl(expression)
    hat = fourier_hat(t)
    print(hat.latex() if fmt == "latex" else str(hat))
    return {"command": "fourier", "input": str(t), "result": str(hat)}


def cmd_dump_setting(config):
    fs, _ = resolve(config)
    lie = fs.lie
    space = coordinate_space(lie)
    data = {
        "schema_version": SCHEMA_VERSION,
        "kind": "Setting",
        "name": fs.setting.name,
        "size": dict(fs.setting.size),
        "params": list(fs.params),
        "algebra": lie.to_json(),
        "coordinates": list(space.positions),
        "dual_coordinates": list(space.dual_positions),
        "restriction": {k: str(v) for k, v in lie.restriction_map().items()},
        "dpi_hat_n_plus": {lie.names[i]: str(op) for i, op in
                           zip(lie.n_plus, [_hat(fs, i) for i in lie.n_plus])},
        "annihilators": {n: str(op) for n, op in fs.annihilators},
        "levi_prime": {n: {"operator": str(op), "torus": torus} for n, op, torus in fs.levi_ops},
        "reductions": [step4_reduce(fs, c.degree, c.weight).describe()
                       for c in candidate_degrees(fs)],
    }
    text = "\n".join([f"{lie!r}", f"coordinates {list(space.positions)}",
                      f"restriction {data['restriction']}"]
                     + [f"dpi_hat({k}) = {v}" for k, v in data["dpi_hat_n_plus"].items()])
    _emit(config, data, text)
    return {"command": "dump-setting", "dim": lie.dim}


def _hat(fs, i):
    from .lie.action import dpi_hat
    return dpi_hat(fs.lie, fs.lie.basis_vector(i), fs.mu)


# argument handling


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI config file; flags override it")
    common.add_argument("--setting", choices=("rankin_cohen", "juhl"))
    common.add_argument("--n", type=int, help="rankin_cohen: order; juhl: dimension")
    common.add_argument("--delta", type=int, help="juhl: nu - lambda")
    common.add_argument("--degree-max", type=int, dest="degree_max")
    common.add_argument("--weights", nargs="+", action="extend",
                        help="name=sym | name=p/q | nu=<expression>")
    common.add_argument("--parity", choices=("even", "odd"))
    common.add_argument("--jobs", type=int)
    common.add_argument("--format", choices=("json", "text", "latex"))
    common.add_argument("--out")
    common.add_argument("--test-degree", type=int, dest="test_degree")
    common.add_argument("--samples", type=int)
    common.add_argument("--seed", type=int)

    parser = argparse.ArgumentParser(prog="fmethod", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("solve", parents=[common], help="find singular vectors")
    p.add_argument("setting_pos", nargs="?", metavar="SETTING")
    p = sub.add_parser("verify", parents=[common], help="check equivariance of operators")
    p.add_argument("operator", nargs="?", help="operator or solve JSON file, or 'identity'")
    p.add_argument("--expr", help="constant-coefficient operator such as 'dx - dy'")
    p = sub.add_parser("compare", parents=[common], help="compare with the closed formulas")
    p.add_argument("setting_pos", nargs="?", metavar="SETTING")
    p = sub.add_parser("fourier", help="algebraic Fourier transform of a Weyl expression")
    p.add_argument("expression")
    p.add_argument("--format", choices=("text", "latex"), default="text")
    p = sub.add_parser("dump-setting", parents=[common], help="print a built-in setting")
    p.add_argument("setting_pos", nargs="?", metavar="SETTING")
    return parser


def config_from_args(args) -> RunConfig:
    config = RunConfig()
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.exists():
            raise ConfigError("config", f"no such file {args.config!r}")
        config = RunConfig.from_ini(path.read_text())
    setting = getattr(args, "setting", None) or getattr(args, "setting_pos", None)
    if setting is not None and setting not in ("rankin_cohen", "juhl"):
        raise ConfigError("setting", f"unknown setting {setting!r}")
    overrides = {name: getattr(args, name, None) for name in (
        "n", "delta", "degree_max", "parity", "jobs", "format", "out",
        "test_degree", "samples", "seed")}
    overrides["setting"] = setting
    if getattr(args, "weights", None):
        overrides["weights"] = parse_weight_items(args.weights)
    return config.merged(overrides).validate()


def _setup_logging():
    level = os.environ.get("FMETHOD_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = EXIT_OK if exc.code == 0 else EXIT_ERROR
        if code:
            print(json.dumps({"status": "error", "exit_code": code,
                              "message": "invalid command line"}, sort_keys=True))
        return code
    code = EXIT_OK
    try:
        if args.command == "fourier":
            status = cmd_fourier(args.expression, args.format)
        else:
            config = config_from_args(args)
            if args.command == "solve":
                status = cmd_solve(config)
            elif args.command == "verify":
                status = cmd_verify(config, args.operator, args.expr)
            elif args.command == "compare":
                status = cmd_compare(config)
            else:
                status = cmd_dump_setting(config)
        status = {**status, "status": "ok"}
    except Finished as fin:
        code, status = fin.code, fin.status
    except ConfigError as exc:
        code, status = EXIT_ERROR, {"status": "error", "field": exc.field, "message": str(exc)}
    except UnsupportedError as exc:
        code, status = EXIT_ERROR, {"status": "unsupported", "message": str(exc)}
    except PoleError as exc:
        code, status = EXIT_ERROR, {"status": "error", "message": str(exc)}
    except (FMethodError, OSError) as exc:
        code, status = EXIT_ERROR, {"status": "error", "message": str(exc)}
    if code and status.get("message"):
        print(f"error: {status['message']}", file=sys.stderr)
    status["exit_code"] = code
    print(json.dumps(status, sort_keys=True))
    return code


if __name__ == "__main__":
    sys.exit(main())
