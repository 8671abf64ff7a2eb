"""``distalreg`` command line.

Every subcommand reads one JSON input (a file, or a bundled demo), runs the
corresponding module and prints a certificate: the run configuration, the
input and the result, as canonical JSON with rationals written ``"num/den"``.
Exit status is 0 on success, 1 when an internal assertion fails and 2 for
bad input.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from importlib import resources

import jsonschema
from jsonschema.exceptions import best_match

from . import __version__, certify, oracle
from .exactnum import format_rational as fr, parse_rational
from .rng import MASK64, derive_rng, derive_seed, set_threads
from .structures import (FORMULA_SCHEMA, MEASURE_SCHEMA, NUMBER_SCHEMA, PARAMETERS_SCHEMA,
                         RELATION_SCHEMA, AtomicMeasure, HyperRelation, Relation, evaluate,
                         measure_from_json, parameters_from_json, relation_from_json)

CONFIG_ENV = "DISTALREG_CONFIG"
EXIT_OK, EXIT_ASSERT, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


# --------------------------------------------------------------------------
# configuration


@dataclass
class RunConfig:
    """Everything that determines a run's output, serialized into it."""

    command: str
    seed: int = 0
    beta: str = "1/4"
    epsilon: str | None = None
    net_constant: int = 16          # K in the cutting budget K r^2 log(2r)
    sample_constant: str = "1"      # scales net and approximation sample sizes
    degree_cap: int | None = None
    r: str | None = None
    max_rounds: int = 10_000
    budget: int = 2000              # finite-field search budget per strategy
    q: list | None = None
    verify: bool = False
    input: str | None = None
    demo: str | None = None
    output: str | None = None
    emit_csv: str | None = None
    backend: str | None = None

    def to_json(self) -> dict:
        return asdict(self)


_CONFIG_KEYS = {f for f in RunConfig.__dataclass_fields__ if f != "command"}


def _load_config_file(path: str | None) -> dict:
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"config {path}: {exc}")
    if not isinstance(data, dict):
        raise InputError(f"config {path}: expected a JSON object")
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise InputError(f"config {path}: unknown keys {sorted(unknown)}")
    return data


def _rational_text(x, what: str) -> str:
    try:
        return fr(parse_rational(x))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{what}: {exc}")


def make_config(args) -> RunConfig:
    cfg = RunConfig(args.command)
    explicit = {k: v for k, v in vars(args).items() if k in _CONFIG_KEYS and v is not None}
    for k, v in {**_load_config_file(args.config), **explicit}.items():
        setattr(cfg, k, v)
    cfg.verify = bool(cfg.verify)
    if not 0 <= int(cfg.seed) <= MASK64:
        raise InputError("--seed must be an unsigned 64-bit integer")
    cfg.seed = int(cfg.seed)
    cfg.beta = _rational_text(cfg.beta, "--beta")
    cfg.sample_constant = _rational_text(cfg.sample_constant, "--sample-constant")
    if cfg.epsilon is not None:
        cfg.epsilon = _rational_text(cfg.epsilon, "--epsilon")
    if cfg.r is not None:
        cfg.r = _rational_text(cfg.r, "--r")
    if int(cfg.net_constant) <= 0:
        raise InputError("--net-constant must be positive")
    return cfg


# --------------------------------------------------------------------------
# input schemas

_DEFS = {**FORMULA_SCHEMA["$defs"], **MEASURE_SCHEMA["$defs"]}
_REL = {k: v for k, v in RELATION_SCHEMA.items() if k != "$defs"}
_MEAS = {"$ref": "#/$defs/measure"}
_ATOMIC = {"allOf": [_MEAS, {"properties": {"kind": {"const": "atomic"}}}]}
_POS_INT = {"type": "integer", "minimum": 1}


def _one_of(*branches) -> dict:
    return {"$defs": _DEFS, "oneOf": list(branches)}


def _schema(required, **props) -> dict:
    return {"type": "object", "$defs": _DEFS, "required": list(required),
            "properties": props, "additionalProperties": False}


SCHEMAS = {
    "vc": _one_of(
        _schema(["relation", "ground", "parameters"], relation=_REL, ground=PARAMETERS_SCHEMA,
                parameters=PARAMETERS_SCHEMA, weights={"type": "array", "items": NUMBER_SCHEMA},
                epsilon=NUMBER_SCHEMA),
        _schema(["ground", "sets"], ground={"type": "array", "minItems": 1},
                sets={"type": "array", "items": {"type": "array",
                                                 "items": {"type": "integer", "minimum": 0}}},
                weights={"type": "array", "items": NUMBER_SCHEMA}, epsilon=NUMBER_SCHEMA)),
    "cutting": _schema(["relation", "parameters"], relation=_REL, parameters=PARAMETERS_SCHEMA,
                       weights={"type": "array", "items": NUMBER_SCHEMA}, r=NUMBER_SCHEMA),
    "eh-pair": _one_of(
        _schema(["relation", "A", "B"], relation=_REL, A=PARAMETERS_SCHEMA, B=PARAMETERS_SCHEMA),
        _schema(["relation", "mu", "nu"], relation=_REL, mu=_MEAS, nu=_ATOMIC)),
    "density": _schema(["relation", "mu", "nu"], relation=_REL, mu=_ATOMIC, nu=_ATOMIC,
                       alpha=NUMBER_SCHEMA),
    "eh-box": _schema(["relation", "measures"], relation=_REL,
                      measures={"type": "array", "minItems": 2, "items": _ATOMIC}),
    "regularity": _one_of(
        _schema(["relation", "measure"], relation=_REL, measure=_ATOMIC, epsilon=NUMBER_SCHEMA),
        _schema(["relation", "measures"], relation=_REL,
                measures={"type": "array", "minItems": 2, "items": _ATOMIC}, epsilon=NUMBER_SCHEMA)),
    "equipartition": _schema(["relation", "points"], relation=_REL, points=PARAMETERS_SCHEMA,
                             epsilon=NUMBER_SCHEMA, delta=NUMBER_SCHEMA),
    "ffield-demo": _schema([], q={"type": "array", "items": {"type": "integer", "minimum": 2}},
                           budget=_POS_INT, cs_samples={"type": "integer", "minimum": 0},
                           strategies={"type": "array", "items": {"type": "string"}}),
    "oracle": _one_of(
        {"type": "object", "required": ["command", "input", "result"]},
        _schema(["check", "relation", "A", "B"], check={"enum": ["homogeneous", "interval_pair"]},
                relation=_REL, A=PARAMETERS_SCHEMA, B=PARAMETERS_SCHEMA),
        _schema(["check", "relation", "A", "B", "size"], check={"const": "exists"},
                relation=_REL, A=PARAMETERS_SCHEMA, B=PARAMETERS_SCHEMA,
                size={"type": "integer", "minimum": 0}),
        _schema(["check", "relation", "sides"], check={"const": "box"}, relation=_REL,
                sides={"type": "array", "items": PARAMETERS_SCHEMA}),
        _schema(["check", "relation", "measures", "parts"], check={"const": "defect"},
                relation=_REL, measures={"type": "array", "items": _ATOMIC},
                parts={"type": "array", "items": {"type": "array", "items": {
                    "type": "array", "items": {"type": "integer", "minimum": 0}}}})),
}

DEMOS = {"vc": "vc_lt", "cutting": "cutting_parabola", "eh-pair": "eh_pair_lt",
         "density": "density_lt", "eh-box": "eh_box_sum", "regularity": "regularity_lt",
         "equipartition": "equipartition_lt", "ffield-demo": "ffield_small", "oracle": "oracle_lt"}


def demo_names() -> list[str]:
    return sorted(p.name[:-5] for p in resources.files("distalreg.data").iterdir()
                  if p.name.endswith(".json"))


def _read_input(cfg: RunConfig) -> dict:
    if cfg.input and cfg.demo:
        raise InputError("give either --input or --demo, not both")
    if cfg.input:
        try:
            with open(cfg.input) as fh:
                return json.load(fh)
        except OSError as exc:
            raise InputError(f"cannot read {cfg.input}: {exc}")
        except json.JSONDecodeError as exc:
            raise InputError(f"{cfg.input}: invalid JSON: {exc}")
    name = cfg.demo or DEMOS[cfg.command]
    if name not in demo_names():
        raise InputError(f"unknown demo {name!r}; available: {', '.join(demo_names())}")
    cfg.demo = name
    return json.loads(resources.files("distalreg.data").joinpath(name + ".json").read_text())


def _validate(command: str, data) -> None:
    validator = jsonschema.Draft202012Validator(SCHEMAS[command])
    err = best_match(validator.iter_errors(data))
    while err is not None and err.context:
        # descend into the alternative that got furthest
        err = max(err.context, key=lambda e: (len(e.absolute_path),
                                               e.validator not in ("required", "additionalProperties")))
    if err is not None:
        raise InputError(f"schema violation at {err.json_path}: {err.message}")


# --------------------------------------------------------------------------
# subcommands; each returns (result, csv rows)


def _relation(data, cfg):
    R = relation_from_json(data["relation"], cfg.degree_cap)
    backend = R.backend
    if cfg.backend is not None and cfg.backend != backend:
        raise InputError(f"relation backend {backend} does not match --backend {cfg.backend}")
    cfg.backend = backend
    return R


def _binary(R):
    if not isinstance(R, Relation):
        raise InputError("this subcommand needs a binary relation R(x; y)")
    return R


def _eps(cfg, data, default="1/4") -> Fraction:
    return parse_rational(cfg.epsilon or data.get("epsilon", default))


def _weights(data, n):
    if "weights" not in data:
        return None
    ws = [parse_rational(w) for w in data["weights"]]
    if len(ws) != n:
        raise InputError("weights must match the ground set in length")
    return ws


SHATTER_ENUM_CAP = 1 << 12


def run_vc(data, cfg):
    from .vc import (SetSystem, epsilon_approximation, epsilon_net, is_net, sauer_shelah_bound,
                     shatter_function, vc_dimension)

    if "sets" in data:
        n = len(data["ground"])
        system = SetSystem(range(n), data["sets"])
    else:
        R = _binary(_relation(data, cfg))
        ground = parameters_from_json(data["ground"])
        n = len(ground)
        system = SetSystem.from_relation(R, ground, parameters_from_json(data["parameters"]))
    d = vc_dimension(system)
    rows = []
    for m in range(n + 1):
        if math.comb(n, m) > SHATTER_ENUM_CAP:
            break
        t, b = shatter_function(system, m), sauer_shelah_bound(m, d)
        assert t <= b, f"shatter function exceeds the Sauer-Shelah bound at n={m}"
        rows.append({"n": m, "traces": t, "bound": b})
    mu = AtomicMeasure([(i,) for i in range(n)], _weights(data, n))
    eps = _eps(cfg, data)
    c = parse_rational(cfg.sample_constant)
    net = epsilon_net(mu, system, eps, seed=derive_seed(cfg.seed, "cli", "net"), constant=c)
    assert is_net(mu, system, eps, net.indices)
    approx = epsilon_approximation(mu, system, eps, seed=derive_seed(cfg.seed, "cli", "approx"),
                                   constant=c)
    result = {"vc_dimension": d, "shatter": rows, "epsilon": fr(eps), "sets": len(system),
              "distinct_sets": len(system.distinct()),
              "net": {"indices": list(net.indices), "method": net.method, "bound": net.bound,
                      "attempts": net.attempts},
              "approximation": {"sample": list(approx.sample), "size": approx.size,
                                "bound": approx.bound, "max_error": fr(approx.max_error),
                                "attempts": approx.attempts}}
    csv_rows = [{"n": r["n"], "traces": r["traces"], "sauer_shelah_bound": r["bound"]} for r in rows]
    return result, csv_rows


def run_cutting(data, cfg):
    from .cells import build_cutting

    R = _binary(_relation(data, cfg))
    B = parameters_from_json(data["parameters"])
    if not B:
        raise InputError("parameters must be nonempty")
    ws = _weights(data, len(B))
    nu = AtomicMeasure(B, ws) if ws else None
    r = parse_rational(cfg.r or data.get("r", "2"))
    cut = build_cutting(R, B, nu, r, cfg.seed, K=int(cfg.net_constant),
                        net_constant=parse_rational(cfg.sample_constant))
    result = cut.to_json()
    rows = [{"chamber": i, "crossing_count": len(cs), "crossing_mass": fr(m),
             "crossing_mass_approx": float(m)}
            for i, (cs, m) in enumerate(zip(cut.crossings, cut.crossing_mass))]
    return result, rows


def _knobs(cfg) -> dict:
    return {"beta": parse_rational(cfg.beta), "seed": cfg.seed, "K": int(cfg.net_constant),
            "net_constant": parse_rational(cfg.sample_constant)}


def run_eh_pair(data, cfg):
    from .ramsey import eh_pair, eh_pair_counting

    R = _binary(_relation(data, cfg))
    kn = _knobs(cfg)
    if "A" in data:
        A, B = parameters_from_json(data["A"]), parameters_from_json(data["B"])
        res = eh_pair_counting(R, A, B, kn.pop("beta"), kn.pop("seed"), **kn)
        out = res.to_json()
        out["verified"] = res.pair.verified
        rows = [{"side": "A", "size": len(res.A), "total": len(A)},
                {"side": "B", "size": len(res.B), "total": len(B)}]
        return out, rows
    mu, nu = measure_from_json(data["mu"]), measure_from_json(data["nu"])
    pair = eh_pair(R, mu, nu, kn["beta"], kn["seed"], kn["K"], kn["net_constant"])
    return pair.to_json(), []


def _omega(R, mu, nu) -> Fraction:
    return sum((wa * wb for a, wa in zip(mu.points, mu.weights)
                for b, wb in zip(nu.points, nu.weights) if evaluate(R, a, b)), Fraction(0))


def run_density(data, cfg):
    from .ramsey import density_pair

    R = _binary(_relation(data, cfg))
    mu, nu = measure_from_json(data["mu"]), measure_from_json(data["nu"])
    omega = _omega(R, mu, nu)
    alpha = parse_rational(data["alpha"]) if "alpha" in data else omega
    kn = _knobs(cfg)
    pair = density_pair(R, mu, nu, alpha, kn["beta"], kn["seed"], kn["K"], kn["net_constant"],
                        max_rounds=int(cfg.max_rounds))
    out = pair.to_json()
    out["omega"] = fr(omega)
    rows = [{"round": i, **{k: v for k, v in t.items() if not isinstance(v, (list, dict))}}
            for i, t in enumerate(pair.trace)]
    return out, rows


def run_eh_box(data, cfg):
    from .ramsey import eh_box

    H = _relation(data, cfg)
    if not isinstance(H, HyperRelation):
        raise InputError("eh-box needs a k-ary relation given by 'arity'")
    ms = [measure_from_json(m) for m in data["measures"]]
    if len(ms) != H.arity:
        raise InputError("one measure per coordinate is required")
    kn = _knobs(cfg)
    box = eh_box(H, ms, kn["beta"], kn["seed"], kn["K"], kn["net_constant"])
    rows = [{"coordinate": i, "size": len(s), "mass": fr(m), "mass_approx": float(m)}
            for i, (s, m) in enumerate(zip(box.sides, box.masses))]
    return box.to_json(), rows


def run_regularity(data, cfg):
    from .regularity import regularity_partition, vertex_partition

    R = _relation(data, cfg)
    eps = _eps(cfg, data)
    kn = _knobs(cfg)
    if "measure" in data:
        vp = vertex_partition(R, measure_from_json(data["measure"]), eps, kn["seed"], kn["beta"],
                              kn["K"], kn["net_constant"])
        P, out = vp.rect, {"vertex": vp.to_json()}
    else:
        ms = [measure_from_json(m) for m in data["measures"]]
        P = regularity_partition(R, ms, eps, kn["seed"], kn["beta"], kn["K"], kn["net_constant"],
                                 max_rounds=int(cfg.max_rounds))
        out = {}
    out.update(rect=P.to_json(), epsilon=fr(eps))
    rows = [{"round": i, **{k: v for k, v in t.items() if not isinstance(v, (list, dict))}}
            for i, t in enumerate(P.trace)]
    return out, rows


def run_equipartition(data, cfg):
    from .regularity import equipartition

    R = _relation(data, cfg)
    pts = parameters_from_json(data["points"])
    if not pts:
        raise InputError("points must be nonempty")
    eps = _eps(cfg, data)
    delta = parse_rational(data["delta"]) if "delta" in data else None
    kn = _knobs(cfg)
    eq = equipartition(R, AtomicMeasure(pts), eps, delta, kn["seed"], kn["beta"], kn["K"],
                       kn["net_constant"])
    out = eq.to_json()
    out["epsilon"] = fr(eps)
    rows = [{"part": i, "points": len(p), "mass": fr(m)} for i, (p, m) in
            enumerate(zip(eq.parts, eq.masses))]
    return out, rows


DEFAULT_Q = [2, 3, 4, 5, 7, 8, 9, 16]


def run_ffield(data, cfg):
    from .ffield import (DEFAULT_STRATEGIES, build_incidence, contradiction_threshold,
                         cs_bound_holds, max_homogeneous_fraction, prime_power)

    qs = sorted(set(cfg.q or data.get("q", DEFAULT_Q)))
    budget = int(data.get("budget", cfg.budget))
    samples = int(data.get("cs_samples", 100))
    strategies = tuple(data.get("strategies", DEFAULT_STRATEGIES))
    instances, rows = [], []
    for q in qs:
        inst = build_incidence(q)
        rng = derive_rng(cfg.seed, "cli", "cs", q)
        n = q * q
        margins = []
        for _ in range(samples):
            P0 = rng.sample(range(n), rng.randint(0, n))
            L1 = rng.sample(range(n), rng.randint(0, n))
            ck = cs_bound_holds(inst, P0, L1)
            assert ck.holds, f"counting bound fails at q={q}"
            margins.append(ck.margin)
        rep = max_homogeneous_fraction(inst, strategies, budget, derive_seed(cfg.seed, "ffield", q))
        instances.append({"q": q, "incidence": inst.to_json(), "cs_samples": samples,
                          "cs_min_margin": min(margins, default=None), "search": rep.to_json()})
        rows.append({"q": q, "delta_best": fr(rep.best.delta),
                     "delta_best_approx": float(rep.best.delta), "strategy": rep.best.strategy})
    thresholds = []
    for p in sorted({prime_power(q)[0] for q in qs}):
        thresholds.append({"p": p, "k": 1, "q": contradiction_threshold(p, 1)})
    return {"instances": instances, "thresholds": thresholds, "budget": budget}, rows


def run_oracle(data, cfg):
    if "command" in data:
        ck = certify.reverify(data)
        return ck.to_json(), [{"check": c["check"], "passed": c["passed"]} for c in ck.items]
    R = _relation(data, cfg)
    kind = data["check"]
    if kind == "box":
        rep = oracle.verify_box(R, [parameters_from_json(s) for s in data["sides"]])
        return rep.to_json(), []
    if kind == "defect":
        ms = [measure_from_json(m) for m in data["measures"]]
        dd = oracle.brute_defect(data["parts"], R, ms)
        return {"passed": True, "defect": fr(dd)}, []
    A, B = parameters_from_json(data["A"]), parameters_from_json(data["B"])
    if kind == "homogeneous":
        return oracle.verify_homogeneous(R, A, B).to_json(), []
    if kind == "interval_pair":
        ip = oracle.best_interval_pair(R, A, B)
        return {"passed": True, "delta": fr(ip.delta), "polarity": ip.polarity,
                "A": [[fr(v) for v in a] for a in ip.A], "B": [[fr(v) for v in b] for b in ip.B]}, []
    found, wit = oracle.exists_homogeneous_of_size(R, A, B, data["size"])
    out = {"passed": True, "found": found}
    if found:
        out["witness"] = {"A": [[fr(v) for v in a] for a in wit[0]],
                          "B": [[fr(v) for v in b] for b in wit[1]], "polarity": wit[2]}
    return out, []


RUNNERS = {"vc": run_vc, "cutting": run_cutting, "eh-pair": run_eh_pair, "density": run_density,
           "eh-box": run_eh_box, "regularity": run_regularity,
           "equipartition": run_equipartition, "ffield-demo": run_ffield, "oracle": run_oracle}


# --------------------------------------------------------------------------
# driver


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_json_default) + "\n"


def _json_default(x):
    if isinstance(x, Fraction):
        return fr(x)
    if isinstance(x, tuple):
        return list(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _write_csv(path: str, rows: list[dict]) -> None:
    cols = []
    for r in rows:
        cols += [k for k in r if k not in cols]
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=cols)
        w.writeheader()
        w.writerows(rows)


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute one subcommand; returns ``(exit status, certificate text)``."""
    data = _read_input(cfg)
    _validate(cfg.command, data)
    result, rows = RUNNERS[cfg.command](data, cfg)
    cert = {"command": cfg.command, "version": __version__, "input": data, "result": result}
    status = EXIT_OK
    if cfg.verify and cfg.command != "oracle":
        cert["config"] = cfg.to_json()
        checks = certify.reverify(json.loads(_dump(cert)))
        cert["oracle"] = checks.to_json()
        if not checks.passed:
            status = EXIT_ASSERT
    if cfg.command == "oracle" and not result.get("passed", False):
        status = EXIT_ASSERT
    cert["config"] = cfg.to_json()
    text = _dump(cert)
    if cfg.emit_csv:
        _write_csv(cfg.emit_csv, rows)
    return status, text


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("run configuration")
    g.add_argument("--input", "-i", help="input JSON file")
    g.add_argument("--demo", help="bundled demo input by name")
    g.add_argument("--output", "-o", help="write the certificate here instead of stdout")
    g.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})")
    g.add_argument("--seed", type=int)
    g.add_argument("--beta", help="parameter-side fraction, rational")
    g.add_argument("--epsilon", help="target error, rational")
    g.add_argument("--net-constant", dest="net_constant", type=int,
                   help="K in the cutting budget K r^2 log(2r) (default 16)")
    g.add_argument("--sample-constant", dest="sample_constant",
                   help="scale of net and approximation sample sizes (default 1)")
    g.add_argument("--degree-cap", dest="degree_cap", type=int)
    g.add_argument("--r", help="cutting parameter r > 1")
    g.add_argument("--max-rounds", dest="max_rounds", type=int)
    g.add_argument("--budget", type=int, help="finite-field search budget")
    g.add_argument("--q", type=int, nargs="+", help="field orders for ffield-demo")
    g.add_argument("--backend", choices=["SEMIALG_1D", "PLANE_LINES"])
    g.add_argument("--emit-csv", dest="emit_csv", help="also write plot data as CSV")
    g.add_argument("--verify", action="store_const", const=True,
                   help="re-check the result with the brute-force oracle")
    g.add_argument("--threads", type=int, default=1, help="worker threads (output unaffected)")
    p = argparse.ArgumentParser(prog="distalreg", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--list-demos", action="store_true")
    sub = p.add_subparsers(dest="command")
    for name in RUNNERS:
        sub.add_parser(name, parents=[common])
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.list_demos:
        print("\n".join(demo_names()))
        return EXIT_OK
    if not args.command:
        parser.print_help(sys.stderr)
        return EXIT_INPUT
    try:
        set_threads(args.threads)
        cfg = make_config(args)
        status, text = run(cfg)
    except AssertionError as exc:
        print(f"distalreg: internal assertion failed: {exc}", file=sys.stderr)
        return EXIT_ASSERT
    except (InputError, ValueError, ZeroDivisionError) as exc:
        print(f"distalreg: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    finally:
        set_threads(1)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
