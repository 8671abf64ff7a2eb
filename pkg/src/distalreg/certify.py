"""Re-verification of emitted certificates against the brute-force oracle.

A certificate is the JSON document written by a CLI subcommand: the input
it was run on, the run configuration and the result.  ``reverify`` rebuilds
the instance from the input and checks the result by enumeration only.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from fractions import Fraction

from . import oracle
from .exactnum import format_rational as fr, parse_rational
from .structures import (AtomicMeasure, HyperRelation, evaluate, measure_from_json,
                         parameters_from_json, relation_from_json)


class Checks:
    """Accumulates named pass/fail checks."""

    def __init__(self):
        self.items: list[dict] = []

    def add(self, name: str, ok: bool, **detail):
        self.items.append(dict(detail, check=name, passed=bool(ok)))

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.items)

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": self.items}


def _q(x) -> Fraction:
    return parse_rational(x)


def _relation(inp, cfg):
    return relation_from_json(inp["relation"], cfg.get("degree_cap"))


def _pair_ok(ck: Checks, R, A0, B0, polarity):
    rep = oracle.verify_homogeneous(R, A0, B0)
    ck.add("homogeneous", rep.polarity == polarity and not rep.vacuous,
           claimed=polarity, found=rep.polarity, pairs=rep.checked)


def _check_vc(inp, res, cfg, ck):
    if "sets" in inp:
        n = len(inp["ground"])
        sets = [frozenset(s) for s in inp["sets"]]
    else:
        R = _relation(inp, cfg)
        ground = parameters_from_json(inp["ground"])
        n = len(ground)
        sets = [frozenset(i for i, a in enumerate(ground) if evaluate(R, a, b))
                for b in parameters_from_json(inp["parameters"])]
    distinct = set(sets)
    for row in res["shatter"]:
        m = row["n"]
        best = max(len({s & frozenset(sub) for s in distinct})
                   for sub in itertools.combinations(range(n), m))
        ck.add("shatter", best == row["traces"] and best <= row["bound"], n=m, traces=best)
    d = res["vc_dimension"]
    shattered = lambda sub: len({s & frozenset(sub) for s in distinct}) == 2 ** len(sub)
    if math.comb(n, d) <= 1 << 16:
        ck.add("vc_witness", any(shattered(c) for c in itertools.combinations(range(n), d)), d=d)
    if d < n and math.comb(n, d + 1) <= 1 << 16:
        ck.add("vc_maximal", not any(shattered(c) for c in itertools.combinations(range(n), d + 1)))
    ws = [_q(w) for w in inp["weights"]] if "weights" in inp else [Fraction(1, n)] * n
    eps = _q(res["epsilon"])
    net = set(res["net"]["indices"])
    heavy = [s for s in distinct if sum((ws[i] for i in s), Fraction(0)) > eps]
    ck.add("net_hits_heavy_sets", all(s & net for s in heavy), heavy=len(heavy))
    sample = Counter(res["approximation"]["sample"])
    size = sum(sample.values())
    err = max(abs(sum((ws[i] for i in s), Fraction(0)) - Fraction(sum(sample[i] for i in s), size))
              for s in distinct)
    ck.add("approximation_error", err == _q(res["approximation"]["max_error"]) and err <= eps,
           error=fr(err))


def _check_cutting(inp, res, cfg, ck):
    from .cells import crosses, decompose

    R = _relation(inp, cfg)
    B = parameters_from_json(inp["parameters"])
    nu = AtomicMeasure(B, [_q(w) for w in inp["weights"]] if "weights" in inp else None)
    dec = decompose(R, [B[i] for i in res["S"]])
    ck.add("chamber_count", len(dec) == len(res["chambers"]), chambers=len(dec))
    r = _q(res["r"])
    worst = Fraction(0)
    agree = True
    for C, rep in zip(dec, res["chambers"]):
        cs = [j for j, b in enumerate(B) if crosses(C, R, b)]
        agree &= cs == rep["crossing"]
        worst = max(worst, nu.mass(cs))
    ck.add("crossing_sets", agree)
    ck.add("cutting_property", worst <= 1 / r, max_crossing_mass=fr(worst))
    ck.add("budget", len(res["S"]) <= res["budget_floor"], size_S=len(res["S"]))


def _check_eh_pair(inp, res, cfg, ck):
    R = _relation(inp, cfg)
    if "A" in inp:
        A, B = parameters_from_json(inp["A"]), parameters_from_json(inp["B"])
        A0, B0 = [A[i] for i in res["A"]], [B[j] for j in res["B"]]
        pair = res["pair"]
        _pair_ok(ck, R, A0, B0, pair["polarity"])
        ck.add("size_A", Fraction(len(A0), len(A)) >= _q(pair["guarantee_A"]), size=len(A0))
        ck.add("size_B", Fraction(len(B0), len(B)) >= _q(pair["guarantee_B"]), size=len(B0))
        return
    mu, nu = measure_from_json(inp["mu"]), measure_from_json(inp["nu"])
    B0 = [nu.points[j] for j in res["B"]]
    ck.add("mass_B", nu.mass(res["B"]) >= _q(res["guarantee_B"]))
    if isinstance(mu, AtomicMeasure):
        _pair_ok(ck, R, [mu.points[i] for i in res["A"]], B0, res["polarity"])
        ck.add("mass_A", mu.mass(res["A"]) >= _q(res["guarantee_A"]))
    else:
        ck.add("continuous_object_measure", True, note="pairs not enumerable; B side only")


def _check_density(inp, res, cfg, ck):
    R = _relation(inp, cfg)
    mu, nu = measure_from_json(inp["mu"]), measure_from_json(inp["nu"])
    _pair_ok(ck, R, [mu.points[i] for i in res["A"]], [nu.points[j] for j in res["B"]], "POSITIVE")
    eps = _q(res["epsilon"])
    ck.add("masses", mu.mass(res["A"]) >= eps and nu.mass(res["B"]) >= eps and eps > 0,
           epsilon=fr(eps))
    omega = sum((wa * wb for a, wa in zip(mu.points, mu.weights)
                 for b, wb in zip(nu.points, nu.weights) if evaluate(R, a, b)), Fraction(0))
    ck.add("alpha_at_most_density", _q(res["alpha"]) <= omega, omega=fr(omega))


def _check_eh_box(inp, res, cfg, ck):
    H = _relation(inp, cfg)
    ms = [measure_from_json(m) for m in inp["measures"]]
    rep = oracle.verify_box(H, [[ms[i].points[j] for j in s] for i, s in enumerate(res["sides"])])
    ck.add("homogeneous_box", rep.polarity == res["polarity"] and not rep.vacuous,
           tuples=rep.checked)
    eps = _q(res["epsilon"])
    ck.add("masses", all(ms[i].mass(s) >= eps for i, s in enumerate(res["sides"])) and eps > 0)


def _rect_cover(ck, parts, sizes):
    seen = Counter()
    for sides in parts:
        for t in itertools.product(*sides):
            seen[t] += 1
    ck.add("rect_partition", len(seen) == math.prod(sizes) and set(seen.values()) == {1},
           tuples=len(seen))


def _arity(R) -> int:
    return R.arity if isinstance(R, HyperRelation) else 2


def _nonhomog_mass(R, groups, weights, k) -> Fraction:
    total = Fraction(0)
    for combo in itertools.product(range(len(groups)), repeat=k):
        sides = [groups[c] for c in combo]
        if k == 2 and not isinstance(R, HyperRelation):
            rep = oracle.verify_homogeneous(R, sides[0], sides[1])
        else:
            rep = oracle.verify_box(R, sides)
        if rep.polarity == oracle.CROSSED:
            total += math.prod((weights[c] for c in combo), start=Fraction(1))
    return total


def _check_regularity(inp, res, cfg, ck):
    R = _relation(inp, cfg)
    k = _arity(R)
    shared = "measure" in inp
    ms = [measure_from_json(inp["measure"])] * k if shared else \
        [measure_from_json(m) for m in inp["measures"]]
    rect = res["rect"]
    parts = [p["sides"] for p in rect["parts"]]
    _rect_cover(ck, parts, [len(m) for m in ms])
    dd = oracle.brute_defect(parts, R, ms)
    eps = _q(res["epsilon"])
    ck.add("defect", dd == _q(rect["defect"]) and dd <= eps, defect=fr(dd))
    if shared:
        mu = ms[0]
        vparts = res["vertex"]["parts"]
        flat = sorted(i for p in vparts for i in p)
        ck.add("vertex_partition", flat == list(range(len(mu))))
        groups = [[mu.points[i] for i in p] for p in vparts]
        bad = _nonhomog_mass(R, groups, [mu.mass(p) for p in vparts], k)
        ck.add("vertex_nonhomogeneous_mass",
               bad == _q(res["vertex"]["nonhomogeneous_mass"]) and bad <= eps, mass=fr(bad))


def _check_equipartition(inp, res, cfg, ck):
    R = _relation(inp, cfg)
    k = _arity(R)
    pts = parameters_from_json(inp["points"])
    n = len(pts)
    g = res["subatoms_per_point"]
    N = n * g
    eps = _q(res["epsilon"])
    Kp = res["K_prime"]
    ck.add("K_prime", Kp == math.ceil(4 * 2 ** k * res["K"] / eps), K_prime=Kp)
    parts = res["parts"]
    ck.add("part_count", len(parts) == Kp)
    per_point = Counter()
    for p in parts:
        for i, c in p:
            per_point[i] += c
    ck.add("subatoms_cover", all(per_point[i] == g for i in range(n)) and len(per_point) == n)
    target, delta = Fraction(1, Kp), _q(res["delta"])
    masses = [Fraction(sum(c for _, c in p), N) for p in parts]
    ck.add("masses", all(abs(m - target) <= delta for m in masses))
    grouped = Counter(tuple(i for i, _ in p) for p in parts)
    keys = list(grouped)
    bad = _nonhomog_mass(R, [[pts[i] for i in key] for key in keys],
                         [Fraction(grouped[key], Kp) for key in keys], k)
    ck.add("nonhomogeneous_mass", bad == _q(res["nonhomogeneous_mass"]) and bad <= eps,
           mass=fr(bad))


def _check_ffield(inp, res, cfg, ck):
    from .ffield import Field

    for item in res["instances"]:
        q = item["q"]
        F = Field(q)
        best = item["search"]["best"]
        lines = [divmod(l, q) for l in best["L0"]]
        on = lambda pt, ab: int(F.add[F.mul[ab[0], pt // q], ab[1]]) == pt % q
        free = not any(on(pt, ab) for pt in best["P0"] for ab in lines)
        size = len(best["P0"])
        ck.add("incidence_free", free and size == len(best["L0"])
               and _q(best["delta"]) == Fraction(size, q * q), q=q)
    for t in res["thresholds"]:
        p, q = t["p"], t["q"]
        d = Fraction(1, p)
        holds = lambda x: (d * x ** 3) ** 2 > (1 - d) * x ** 2 * (d * x ** 3 + d * d * x ** 4)
        ck.add("threshold", holds(q) and (q == p or not holds(q // p)), p=p, q=q)


def _check_oracle(inp, res, cfg, ck):
    ck.add("oracle_result", res.get("passed", False))


CHECKERS = {"vc": _check_vc, "cutting": _check_cutting, "eh-pair": _check_eh_pair,
            "density": _check_density, "eh-box": _check_eh_box, "regularity": _check_regularity,
            "equipartition": _check_equipartition, "ffield-demo": _check_ffield,
            "oracle": _check_oracle}


def reverify(cert: dict) -> Checks:
    """Check a certificate's result against its own input by enumeration."""
    ck = Checks()
    try:
        fn = CHECKERS[cert["command"]]
    except KeyError:
        raise ValueError(f"not a certificate of a known subcommand: {cert.get('command')!r}")
    try:
        fn(cert["input"], cert["result"], cert.get("config", {}), ck)
    except (KeyError, IndexError, TypeError) as exc:
        ck.add("well_formed", False, error=f"{type(exc).__name__}: {exc}")
    return ck
