"""Definable relations and finite measures for the two concrete backends.

``SEMIALG_1D``: the object variable ``x`` is a single real, atoms are
polynomial sign conditions ``p(x; y) op 0``.

``PLANE_LINES``: ``x = (x1, x2)`` is a point of the plane and every atom is
linear in ``x`` once the parameters are substituted, so each parameter
contributes lines ``a*x1 + b*x2 + c = 0``.

Formulas are trees of atoms combined with AND / OR / NOT.  Variables are
ordered ``x..., y..., z...``; the optional ``z`` block is an extra
parameter bound to a fixed value.  Every formula is compiled once into a
Python function over exact numbers, which keeps brute-force verification
cheap without giving up exactness.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .exactnum import (DEFAULT_DEGREE_CAP, AlgebraicNumber, Poly, format_rational,
                       parse_rational, sign_at)

SEMIALG_1D = "SEMIALG_1D"
PLANE_LINES = "PLANE_LINES"
BACKENDS = (SEMIALG_1D, PLANE_LINES)

NEG, ZERO, POS = 1, 2, 4
# allowed sign bits for each comparison against zero
OP_MASK = {"<": NEG, "=": ZERO, ">": POS, "<=": NEG | ZERO, ">=": ZERO | POS, "!=": NEG | POS}
SIGN_BIT = {-1: NEG, 0: ZERO, 1: POS}


class DimensionError(ValueError):
    pass


class LocalizationError(ValueError):
    pass


def num(x):
    """Exact number in canonical Python form: ``int`` when integral, else ``Fraction``."""
    if isinstance(x, int) and not isinstance(x, bool):
        return x
    q = x if isinstance(x, Fraction) else parse_rational(x)
    return q.numerator if q.denominator == 1 else q


def as_point(p) -> tuple:
    if isinstance(p, (tuple, list)):
        return tuple(num(v) for v in p)
    return (num(p),)


# --------------------------------------------------------------------------
# multivariate polynomials


class MPoly:
    """Sparse polynomial over Q in ``nvars`` variables: ``{exponents: coeff}``."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms):
        self.nvars = nvars
        clean = {}
        for exps, c in dict(terms).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps} for {nvars} variables")
            c = Fraction(c)
            if c:
                clean[exps] = clean.get(exps, 0) + c
        self.terms = {e: c for e, c in sorted(clean.items()) if c}

    def __eq__(self, other):
        return isinstance(other, MPoly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, tuple(self.terms.items())))

    def __repr__(self):
        return f"MPoly({self.nvars}, {self.terms})"

    def is_zero(self) -> bool:
        return not self.terms

    def degree_in(self, var: int) -> int:
        return max((e[var] for e in self.terms), default=0)

    def total_degree_in(self, variables) -> int:
        return max((sum(e[v] for v in variables) for e in self.terms), default=0)

    def __call__(self, v):
        total = 0
        for exps, c in self.terms.items():
            t = c
            for x, e in zip(v, exps):
                if e:
                    t *= x ** e
            total += t
        return total

    def substitute(self, values: dict, keep: Sequence[int]) -> "MPoly":
        """Fix the variables in ``values``; the result has variables ``keep`` in that order."""
        out: dict = {}
        for exps, c in self.terms.items():
            t = Fraction(c)
            for i, val in values.items():
                if exps[i]:
                    t *= Fraction(val) ** exps[i]
            if t:
                key = tuple(exps[i] for i in keep)
                out[key] = out.get(key, 0) + t
        return MPoly(len(keep), out)

    def source(self, names: Callable[[int], str], consts: dict) -> str:
        """Python expression computing the polynomial; coefficients go into ``consts``."""
        parts = []
        for exps, c in self.terms.items():
            c = num(c)
            if isinstance(c, Fraction):
                key = f"_c{len(consts)}"
                consts[key] = c
                factors = [key]
            else:
                factors = [repr(c)]
            for i, e in enumerate(exps):
                if e == 1:
                    factors.append(names(i))
                elif e > 1:
                    factors.append(f"{names(i)}**{e}")
            parts.append("*".join(factors))
        return "(" + (" + ".join(parts) if parts else "0") + ")"

    def to_json(self):
        return [[format_rational(c), list(e)] for e, c in self.terms.items()]

    @classmethod
    def from_json(cls, nvars: int, data) -> "MPoly":
        return cls(nvars, {tuple(e): parse_rational(c) for c, e in data})


def parse_expr(text: str, names: Sequence[str], aliases: dict | None = None) -> MPoly:
    """Parse a polynomial expression with sympy; only exact rational coefficients are accepted."""
    import sympy

    symbols = [sympy.Symbol(n) for n in names]
    local = {n: s for n, s in zip(names, symbols)}
    for alias, target in (aliases or {}).items():
        local[alias] = local[target]
    expr = sympy.sympify(text, locals=local, rational=False)
    stray = expr.free_symbols - set(symbols)
    if stray:
        raise ValueError(f"unknown variables {sorted(map(str, stray))} in {text!r}")
    poly = sympy.Poly(sympy.expand(expr), *symbols) if symbols else None
    terms = {}
    for exps, c in poly.as_dict().items():
        if not c.is_Rational:
            raise ValueError(f"non-rational coefficient {c} in {text!r}")
        terms[tuple(exps)] = Fraction(int(c.p), int(c.q))
    return MPoly(len(names), terms)


# --------------------------------------------------------------------------
# formulas


@dataclass(frozen=True)
class Atom:
    poly: MPoly
    op: str

    def __post_init__(self):
        if self.op not in OP_MASK:
            raise ValueError(f"unknown comparison {self.op!r}")


@dataclass(frozen=True)
class And:
    args: tuple


@dataclass(frozen=True)
class Or:
    args: tuple


@dataclass(frozen=True)
class Not:
    arg: object


@dataclass(frozen=True)
class Const:
    value: bool


def atoms_of(f) -> list:
    """Atoms in first-occurrence order (duplicates collapsed)."""
    out: list = []
    seen: dict = {}

    def walk(g):
        if isinstance(g, Atom):
            if g not in seen:
                seen[g] = len(out)
                out.append(g)
        elif isinstance(g, (And, Or)):
            for a in g.args:
                walk(a)
        elif isinstance(g, Not):
            walk(g.arg)

    walk(f)
    return out


def _formula_source(f, atom_src: Callable[[int, Atom], str], index: dict) -> str:
    if isinstance(f, Atom):
        return atom_src(index[f], f)
    if isinstance(f, Const):
        return "True" if f.value else "False"
    if isinstance(f, Not):
        return f"(not {_formula_source(f.arg, atom_src, index)})"
    if isinstance(f, (And, Or)):
        if not f.args:
            return "True" if isinstance(f, And) else "False"
        glue = " and " if isinstance(f, And) else " or "
        return "(" + glue.join(_formula_source(a, atom_src, index) for a in f.args) + ")"
    raise TypeError(f"not a formula node: {f!r}")


_CMP = {"<": "< 0", "=": "== 0", ">": "> 0", "<=": "<= 0", ">=": ">= 0", "!=": "!= 0"}


def substitute_formula(f, values: dict, keep: Sequence[int]):
    if isinstance(f, Atom):
        return Atom(f.poly.substitute(values, keep), f.op)
    if isinstance(f, (And, Or)):
        return type(f)(tuple(substitute_formula(a, values, keep) for a in f.args))
    if isinstance(f, Not):
        return Not(substitute_formula(f.arg, values, keep))
    return f


def formula_to_json(f):
    if isinstance(f, Atom):
        return {"atom": {"terms": f.poly.to_json()}, "sign": f.op}
    if isinstance(f, Const):
        return {"const": bool(f.value)}
    if isinstance(f, Not):
        return {"not": formula_to_json(f.arg)}
    key = "and" if isinstance(f, And) else "or"
    return {key: [formula_to_json(a) for a in f.args]}


def formula_from_json(data, names: Sequence[str], aliases: dict | None = None):
    if "const" in data:
        return Const(bool(data["const"]))
    if "not" in data:
        return Not(formula_from_json(data["not"], names, aliases))
    if "and" in data:
        return And(tuple(formula_from_json(a, names, aliases) for a in data["and"]))
    if "or" in data:
        return Or(tuple(formula_from_json(a, names, aliases) for a in data["or"]))
    atom = data["atom"]
    if "expr" in atom:
        poly = parse_expr(atom["expr"], names, aliases)
    else:
        poly = MPoly.from_json(len(names), atom["terms"])
    return Atom(poly, data["sign"])


class CompiledFormula:
    """Fast exact evaluators for one formula over a fixed variable vector."""

    def __init__(self, formula, nvars: int):
        self.formula = formula
        self.atoms = atoms_of(formula)
        index = {a: i for i, a in enumerate(self.atoms)}
        consts: dict = {}
        name = lambda i: f"v[{i}]"
        value_src = _formula_source(
            formula, lambda i, a: f"({a.poly.source(name, consts)} {_CMP[a.op]})", index)
        sign_src = _formula_source(formula, lambda i, a: f"(s[{i}] {_CMP[a.op]})", index)
        self.truth = eval(f"lambda v: bool({value_src})", consts)
        self.truth_from_signs = eval(f"lambda s: bool({sign_src})", {})
        self.atom_values = [eval(f"lambda v: {a.poly.source(name, consts)}", consts) for a in self.atoms]
        self.nvars = nvars


def _sign(v) -> int:
    return (v > 0) - (v < 0)


# --------------------------------------------------------------------------
# relations


@dataclass(frozen=True, eq=False)
class Relation:
    """A definable relation ``R(x; y)`` (optionally ``phi(x, y, z)`` with ``z`` bound)."""

    backend: str
    x_arity: int
    y_arity: int
    formula: object
    z_arity: int = 0
    z_value: tuple = ()
    degree_cap: int = DEFAULT_DEGREE_CAP
    _compiled: CompiledFormula = field(init=False, repr=False)
    _cache: dict = field(init=False, repr=False)

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.backend == SEMIALG_1D and self.x_arity != 1:
            raise DimensionError("SEMIALG_1D relations have a one-dimensional object variable")
        if self.backend == PLANE_LINES and self.x_arity != 2:
            raise DimensionError("PLANE_LINES relations have a planar object variable")
        if len(self.z_value) != self.z_arity:
            raise DimensionError("bound parameter does not match z_arity")
        object.__setattr__(self, "z_value", tuple(num(v) for v in self.z_value))
        n = self.nvars
        xs = range(self.x_arity)
        for a in atoms_of(self.formula):
            if a.poly.nvars != n:
                raise DimensionError(f"atom over {a.poly.nvars} variables, expected {n}")
            if self.backend == SEMIALG_1D and a.poly.degree_in(0) > self.degree_cap:
                raise ValueError(f"atom degree {a.poly.degree_in(0)} exceeds cap {self.degree_cap}")
            if self.backend == PLANE_LINES and a.poly.total_degree_in(xs) > 1:
                raise ValueError("PLANE_LINES atoms must be linear in the point coordinates")
        object.__setattr__(self, "_compiled", CompiledFormula(self.formula, n))
        object.__setattr__(self, "_cache", {})

    @property
    def nvars(self) -> int:
        return self.x_arity + self.y_arity + self.z_arity

    @property
    def atoms(self) -> list:
        return self._compiled.atoms

    def var_names(self) -> list[str]:
        return ([f"x{i}" for i in range(self.x_arity)] + [f"y{i}" for i in range(self.y_arity)]
                + [f"z{i}" for i in range(self.z_arity)])

    def _vector(self, a, b) -> tuple:
        a, b = as_point(a), as_point(b)
        if len(a) != self.x_arity or len(b) != self.y_arity:
            raise DimensionError(f"expected point of arity {self.x_arity} and parameter of "
                                 f"arity {self.y_arity}, got {len(a)} and {len(b)}")
        return a + b + self.z_value

    def holds(self, a, b) -> bool:
        return self._compiled.truth(self._vector(a, b))

    def holds_vec(self, v: tuple) -> bool:
        """Unchecked evaluation on a ready variable vector ``x + y + z``."""
        return self._compiled.truth(v)

    def truth_from_signs(self, signs) -> bool:
        return self._compiled.truth_from_signs(signs)

    def negate(self) -> "Relation":
        return Relation(self.backend, self.x_arity, self.y_arity, Not(self.formula),
                        self.z_arity, self.z_value, self.degree_cap)

    def bind(self, z) -> "Relation":
        return Relation(self.backend, self.x_arity, self.y_arity, self.formula,
                        self.z_arity, tuple(as_point(z)), self.degree_cap)

    # --- specialisations at a fixed parameter ---------------------------

    def _fixed(self, b) -> dict:
        b = as_point(b)
        if len(b) != self.y_arity:
            raise DimensionError(f"parameter arity {len(b)} != {self.y_arity}")
        vals = {self.x_arity + i: v for i, v in enumerate(b)}
        for i, v in enumerate(self.z_value):
            vals[self.x_arity + self.y_arity + i] = v
        return vals

    def univariate_atoms(self, b) -> tuple:
        """SEMIALG_1D: the atom polynomials in ``x`` at parameter ``b``."""
        key = ("u", as_point(b))
        hit = self._cache.get(key)
        if hit is None:
            vals = self._fixed(b)
            hit = tuple(Poly(_dense(a.poly.substitute(vals, [0])))
                        for a in self.atoms)
            self._cache[key] = hit
        return hit

    def linear_forms(self, b) -> tuple:
        """PLANE_LINES: each atom at ``b`` as an integer form ``(a, b, c)`` of ``a*x1 + b*x2 + c``."""
        key = ("l", as_point(b))
        hit = self._cache.get(key)
        if hit is None:
            vals = self._fixed(b)
            forms = []
            for a in self.atoms:
                p = a.poly.substitute(vals, [0, 1])
                coeffs = [p.terms.get((1, 0), Fraction(0)), p.terms.get((0, 1), Fraction(0)),
                          p.terms.get((0, 0), Fraction(0))]
                forms.append(integer_form(coeffs))
            hit = tuple(forms)
            self._cache[key] = hit
        return hit

    def truth_at_algebraic(self, x: AlgebraicNumber, b) -> bool:
        """SEMIALG_1D truth at a (possibly irrational) real algebraic point."""
        if x.is_rational:
            return self.holds(x.value, b)
        return self.truth_from_signs([sign_at(p, x) if not p.is_zero() else 0
                                      for p in self.univariate_atoms(b)])

    # --- io --------------------------------------------------------------

    def to_json(self) -> dict:
        out = {"backend": self.backend, "x_arity": self.x_arity, "y_arity": self.y_arity,
               "formula": formula_to_json(self.formula)}
        if self.z_arity:
            out["z_arity"] = self.z_arity
            out["z_value"] = [format_rational(v) for v in self.z_value]
        if self.degree_cap != DEFAULT_DEGREE_CAP:
            out["degree_cap"] = self.degree_cap
        return out

    @classmethod
    def from_json(cls, data: dict, degree_cap: int | None = None) -> "Relation":
        backend = data["backend"]
        nx = data.get("x_arity", 1 if backend == SEMIALG_1D else 2)
        ny = data["y_arity"]
        nz = data.get("z_arity", 0)
        names = ([f"x{i}" for i in range(nx)] + [f"y{i}" for i in range(ny)]
                 + [f"z{i}" for i in range(nz)])
        aliases = {}
        for letter, n in (("x", nx), ("y", ny), ("z", nz)):
            if n == 1:
                aliases[letter] = f"{letter}0"
        formula = formula_from_json(data["formula"], names, aliases)
        cap = degree_cap or data.get("degree_cap", DEFAULT_DEGREE_CAP)
        z = tuple(parse_rational(v) for v in data.get("z_value", ()))
        return cls(backend, nx, ny, formula, nz, z, cap)


def _dense(p: MPoly) -> list:
    deg = max((e[0] for e in p.terms), default=0)
    out = [Fraction(0)] * (deg + 1)
    for (e,), c in p.terms.items():
        out[e] += c
    return out


def integer_form(coeffs) -> tuple:
    """Scale rational coefficients to coprime integers with the same sign pattern."""
    qs = [Fraction(c) for c in coeffs]
    den = 1
    for q in qs:
        den = den * q.denominator // math.gcd(den, q.denominator)
    ints = [int(q * den) for q in qs]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return tuple(v // g for v in ints) if g else tuple(ints)


class HyperRelation:
    """A k-ary relation ``R(x0, ..., x_{k-1})`` on the real line.

    Binary views treat ``x0`` as the object variable and the remaining
    coordinates as a single parameter tuple.
    """

    backend = SEMIALG_1D

    def __init__(self, arity: int, formula, degree_cap: int = DEFAULT_DEGREE_CAP):
        if arity < 1:
            raise ValueError("arity must be positive")
        self.arity = arity
        self.formula = formula
        self.degree_cap = degree_cap
        self._compiled = CompiledFormula(formula, arity)
        for a in self._compiled.atoms:
            if a.poly.nvars != arity:
                raise DimensionError(f"atom over {a.poly.nvars} variables, expected {arity}")
        self._binary = None

    def holds(self, t) -> bool:
        t = as_point(t)
        if len(t) != self.arity:
            raise DimensionError(f"expected a {self.arity}-tuple")
        return self._compiled.truth(t)

    def holds_vec(self, t: tuple) -> bool:
        return self._compiled.truth(t)

    def binary(self) -> Relation:
        if self._binary is None:
            if self.arity < 2:
                raise DimensionError("binary view needs arity >= 2")
            self._binary = Relation(SEMIALG_1D, 1, self.arity - 1, self.formula,
                                    degree_cap=self.degree_cap)
        return self._binary

    def negate(self) -> "HyperRelation":
        return HyperRelation(self.arity, Not(self.formula), self.degree_cap)

    def fix_first(self, values: Iterable) -> "HyperRelation":
        """``R'(x1, ...) = AND over a in values of R(a, x1, ...)``."""
        keep = list(range(1, self.arity))
        parts = tuple(substitute_formula(self.formula, {0: v}, keep) for v in values)
        return HyperRelation(self.arity - 1, And(parts), self.degree_cap)

    def truth_tensor(self, supports: Sequence[Sequence]) -> np.ndarray:
        """Boolean array of ``R`` over the product of 1D supports."""
        shape = tuple(len(s) for s in supports)
        out = np.zeros(shape, dtype=bool)
        f = self._compiled.truth
        vals = [[num(v[0]) if isinstance(v, tuple) else num(v) for v in s] for s in supports]
        for idx in itertools.product(*(range(n) for n in shape)):
            out[idx] = f(tuple(vals[i][j] for i, j in enumerate(idx)))
        return out

    def to_json(self) -> dict:
        out = {"backend": SEMIALG_1D, "arity": self.arity, "formula": formula_to_json(self.formula)}
        if self.degree_cap != DEFAULT_DEGREE_CAP:
            out["degree_cap"] = self.degree_cap
        return out

    @classmethod
    def from_json(cls, data: dict, degree_cap: int | None = None) -> "HyperRelation":
        k = data["arity"]
        names = [f"x{i}" for i in range(k)]
        aliases = {"x": "x0", "y": "x1"} if k == 2 else {}
        formula = formula_from_json(data["formula"], names, aliases)
        return cls(k, formula, degree_cap or data.get("degree_cap", DEFAULT_DEGREE_CAP))


def evaluate(R, a, b=None) -> bool:
    """Truth of ``R`` at ``(a, b)``; for a hyperrelation pass the full tuple as ``a``."""
    if isinstance(R, HyperRelation):
        return R.holds(a if b is None else as_point(a) + as_point(b))
    return R.holds(a, b)


# --------------------------------------------------------------------------
# measures


class AtomicMeasure:
    """Finitely many distinct points with positive rational weights summing to 1."""

    __slots__ = ("points", "weights", "dim", "_intw")

    def __init__(self, points, weights=None):
        pts = tuple(as_point(p) for p in points)
        if not pts:
            raise ValueError("an atomic measure needs at least one point")
        dims = {len(p) for p in pts}
        if len(dims) != 1:
            raise DimensionError("support points of different dimensions")
        if weights is None:
            w = Fraction(1, len(pts))
            ws = tuple(w for _ in pts)
        else:
            ws = tuple(Fraction(parse_rational(w) if isinstance(w, str) else w) for w in weights)
            if len(ws) != len(pts):
                raise ValueError("points and weights differ in length")
        if any(w <= 0 for w in ws):
            raise ValueError("weights must be positive")
        if sum(ws) != 1:
            raise ValueError(f"weights sum to {sum(ws)}, not 1")
        if len(set(pts)) != len(pts):
            raise ValueError("support points must be pairwise distinct")
        self.points = pts
        self.weights = ws
        self.dim = dims.pop()
        self._intw = None

    @classmethod
    def uniform(cls, points) -> "AtomicMeasure":
        return cls(points)

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        return (isinstance(other, AtomicMeasure) and self.points == other.points
                and self.weights == other.weights)

    def __repr__(self):
        return f"AtomicMeasure({len(self.points)} points, dim={self.dim})"

    def mass(self, indices) -> Fraction:
        w = self.weights
        return sum((w[i] for i in indices), Fraction(0))

    def int_weights(self):
        """Weights as integer numerators over one common denominator."""
        if self._intw is None:
            den = 1
            for w in self.weights:
                den = den * w.denominator // math.gcd(den, w.denominator)
            nums = [int(w * den) for w in self.weights]
            self._intw = (nums, den)
        return self._intw

    def restrict(self, indices: Sequence[int]) -> "AtomicMeasure":
        """Localization to the given support indices, in that order."""
        indices = list(indices)
        total = self.mass(indices)
        if total == 0:
            raise LocalizationError("cannot localize to a set of measure zero")
        return AtomicMeasure([self.points[i] for i in indices],
                             [self.weights[i] / total for i in indices])

    def indices_in(self, region) -> list[int]:
        return [i for i, p in enumerate(self.points) if _member(region, p, i)]

    def product(self, other: "AtomicMeasure") -> "AtomicMeasure":
        pts, ws = [], []
        for p, w in zip(self.points, self.weights):
            for q, v in zip(other.points, other.weights):
                pts.append(p + q)
                ws.append(w * v)
        return AtomicMeasure(pts, ws)

    def to_json(self) -> dict:
        return {"kind": "atomic",
                "points": [[format_rational(v) for v in p] for p in self.points],
                "weights": [format_rational(w) for w in self.weights]}


def _member(region, p: tuple, i: int) -> bool:
    if hasattr(region, "contains"):
        return region.contains(p if len(p) > 1 else p[0])
    if callable(region):
        return bool(region(p if len(p) > 1 else p[0]))
    raise TypeError("region must be a chamber, a predicate or an index set")


class PiecewiseUniform1D:
    """A density on the line, constant between consecutive rational breakpoints."""

    dim = 1

    def __init__(self, breakpoints, densities):
        bps = tuple(Fraction(parse_rational(b) if isinstance(b, str) else b) for b in breakpoints)
        ds = tuple(Fraction(parse_rational(d) if isinstance(d, str) else d) for d in densities)
        if len(bps) != len(ds) + 1 or not ds:
            raise ValueError("need one more breakpoint than densities")
        if any(bps[i] >= bps[i + 1] for i in range(len(ds))):
            raise ValueError("breakpoints must increase")
        if any(d < 0 for d in ds):
            raise ValueError("densities must be nonnegative")
        total = sum(d * (bps[i + 1] - bps[i]) for i, d in enumerate(ds))
        if total != 1:
            raise ValueError(f"total mass {total}, not 1")
        self.breakpoints = bps
        self.densities = ds

    @classmethod
    def uniform(cls, lo, hi) -> "PiecewiseUniform1D":
        lo, hi = Fraction(lo), Fraction(hi)
        return cls([lo, hi], [1 / (hi - lo)])

    def cdf(self, t: Fraction) -> Fraction:
        total = Fraction(0)
        for i, d in enumerate(self.densities):
            a, b = self.breakpoints[i], self.breakpoints[i + 1]
            if t <= a:
                break
            total += d * (min(t, b) - a)
        return total

    def interval_mass(self, lo, hi) -> Fraction:
        """Mass of the interval between rational (or infinite) endpoints."""
        lo_c = Fraction(0) if lo is None else self.cdf(Fraction(lo))
        hi_c = Fraction(1) if hi is None else self.cdf(Fraction(hi))
        return max(hi_c - lo_c, Fraction(0))

    def _cdf_bounds(self, a: AlgebraicNumber, side: str):
        if a.kind == AlgebraicNumber.NEG_INF:
            return Fraction(0), Fraction(0)
        if a.kind == AlgebraicNumber.POS_INF:
            return Fraction(1), Fraction(1)
        if a.is_rational:
            c = self.cdf(a.value)
            return c, c
        return self.cdf(a.lo), self.cdf(a.hi)

    def mass_bounds(self, lo: AlgebraicNumber, hi: AlgebraicNumber, width=Fraction(1, 2**40)):
        """Rational enclosure of the mass of the open interval ``(lo, hi)``."""
        while True:
            l0, l1 = self._cdf_bounds(lo, "lo")
            h0, h1 = self._cdf_bounds(hi, "hi")
            low, high = max(h0 - l1, Fraction(0)), max(h1 - l0, Fraction(0))
            if high - low <= width:
                return low, high
            for a in (lo, hi):
                if a.kind == AlgebraicNumber.ALGEBRAIC:
                    a.refine()

    def to_json(self) -> dict:
        return {"kind": "piecewise_uniform",
                "breakpoints": [format_rational(b) for b in self.breakpoints],
                "densities": [format_rational(d) for d in self.densities]}


class ProductMeasure:
    """Product of coordinate measures; rectangles get the product of their masses."""

    def __init__(self, factors: Sequence):
        self.factors = tuple(factors)
        if not self.factors:
            raise ValueError("empty product")

    @property
    def arity(self) -> int:
        return len(self.factors)

    def rectangle_mass(self, sides) -> Fraction:
        if len(sides) != len(self.factors):
            raise DimensionError("rectangle arity differs from the product")
        out = Fraction(1)
        for m, s in zip(self.factors, sides):
            out *= measure_of(m, s)
        return out

    def as_atomic(self) -> AtomicMeasure:
        acc = self.factors[0]
        for m in self.factors[1:]:
            acc = acc.product(m)
        return acc

    def to_json(self) -> dict:
        return {"kind": "product", "factors": [m.to_json() for m in self.factors]}


def measure_of(m, region) -> Fraction:
    """Exact mass of a chamber, a point predicate, or a set of support indices."""
    if isinstance(m, AtomicMeasure):
        if isinstance(region, (set, frozenset, list, tuple, range)) and not hasattr(region, "contains"):
            idx = list(region)
            if any(not isinstance(i, (int, np.integer)) or not 0 <= i < len(m) for i in idx):
                raise DimensionError("index set does not refer to the support")
            return m.mass(set(int(i) for i in idx))
        dim = getattr(region, "dim_space", None)
        if dim is not None and dim != m.dim:
            raise DimensionError(f"chamber lives in dimension {dim}, measure in {m.dim}")
        return m.mass(m.indices_in(region))
    if isinstance(m, PiecewiseUniform1D):
        dim = getattr(region, "dim_space", None)
        if dim is not None and dim != 1:
            raise DimensionError("piecewise-uniform measures are one-dimensional")
        if getattr(region, "is_point", False):
            return Fraction(0)
        lo, hi = region.lo, region.hi
        ends = []
        for a in (lo, hi):
            if a.kind in (AlgebraicNumber.NEG_INF, AlgebraicNumber.POS_INF):
                ends.append(None)
            elif a.is_rational:
                ends.append(a.value)
            else:
                raise ValueError("irrational chamber endpoint: use mass_bounds for an enclosure")
        return m.interval_mass(*ends)
    if isinstance(m, ProductMeasure):
        return m.rectangle_mass(region)
    raise TypeError(f"unsupported measure {type(m).__name__}")


def localize(m: AtomicMeasure, region) -> AtomicMeasure:
    """Renormalized restriction of ``m`` to ``region`` (chamber, predicate or index set)."""
    if isinstance(region, (set, frozenset, list, tuple, range)) and not hasattr(region, "contains"):
        idx = sorted(int(i) for i in region)
    else:
        idx = m.indices_in(region)
    return m.restrict(idx)


def measure_from_json(data: dict):
    kind = data["kind"]
    if kind == "atomic":
        pts = [tuple(parse_rational(v) for v in p) for p in data["points"]]
        ws = data.get("weights")
        return AtomicMeasure(pts, None if ws is None else [parse_rational(w) for w in ws])
    if kind == "piecewise_uniform":
        return PiecewiseUniform1D([parse_rational(b) for b in data["breakpoints"]],
                                  [parse_rational(d) for d in data["densities"]])
    if kind == "product":
        return ProductMeasure([measure_from_json(f) for f in data["factors"]])
    raise ValueError(f"unknown measure kind {kind!r}")


def parameters_from_json(data) -> list[tuple]:
    return [tuple(num(parse_rational(v)) for v in p) if isinstance(p, list) else (num(parse_rational(p)),)
            for p in data]


def relation_from_json(data: dict, degree_cap: int | None = None):
    if "arity" in data:
        return HyperRelation.from_json(data, degree_cap)
    return Relation.from_json(data, degree_cap)


# --------------------------------------------------------------------------
# JSON schemas

NUMBER_SCHEMA = {"oneOf": [{"type": "integer"},
                           {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"}]}

FORMULA_SCHEMA = {
    "$defs": {
        "formula": {
            "oneOf": [
                {"type": "object", "required": ["atom", "sign"], "additionalProperties": False,
                 "properties": {
                     "sign": {"enum": sorted(OP_MASK)},
                     "atom": {"oneOf": [
                         {"type": "object", "required": ["expr"], "additionalProperties": False,
                          "properties": {"expr": {"type": "string"}}},
                         {"type": "object", "required": ["terms"], "additionalProperties": False,
                          "properties": {"terms": {"type": "array", "items": {
                              "type": "array", "minItems": 2, "maxItems": 2,
                              "prefixItems": [NUMBER_SCHEMA,
                                              {"type": "array", "items": {"type": "integer", "minimum": 0}}]}}}},
                     ]}}},
                {"type": "object", "required": ["and"], "additionalProperties": False,
                 "properties": {"and": {"type": "array", "items": {"$ref": "#/$defs/formula"}}}},
                {"type": "object", "required": ["or"], "additionalProperties": False,
                 "properties": {"or": {"type": "array", "items": {"$ref": "#/$defs/formula"}}}},
                {"type": "object", "required": ["not"], "additionalProperties": False,
                 "properties": {"not": {"$ref": "#/$defs/formula"}}},
                {"type": "object", "required": ["const"], "additionalProperties": False,
                 "properties": {"const": {"type": "boolean"}}},
            ]
        }
    }
}

RELATION_SCHEMA = {
    "type": "object",
    "$defs": FORMULA_SCHEMA["$defs"],
    "oneOf": [
        {"required": ["backend", "y_arity", "formula"],
         "properties": {
             "backend": {"enum": list(BACKENDS)},
             "x_arity": {"type": "integer", "minimum": 1, "maximum": 2},
             "y_arity": {"type": "integer", "minimum": 0},
             "z_arity": {"type": "integer", "minimum": 0},
             "z_value": {"type": "array", "items": NUMBER_SCHEMA},
             "degree_cap": {"type": "integer", "minimum": 1},
             "formula": {"$ref": "#/$defs/formula"}},
         "additionalProperties": False},
        {"required": ["backend", "arity", "formula"],
         "properties": {
             "backend": {"const": SEMIALG_1D},
             "arity": {"type": "integer", "minimum": 1},
             "degree_cap": {"type": "integer", "minimum": 1},
             "formula": {"$ref": "#/$defs/formula"}},
         "additionalProperties": False},
    ],
}

MEASURE_SCHEMA = {
    "$defs": {
        "measure": {
            "oneOf": [
                {"type": "object", "required": ["kind", "points"], "additionalProperties": False,
                 "properties": {"kind": {"const": "atomic"},
                                "points": {"type": "array", "minItems": 1,
                                           "items": {"type": "array", "minItems": 1, "items": NUMBER_SCHEMA}},
                                "weights": {"type": "array", "items": NUMBER_SCHEMA}}},
                {"type": "object", "required": ["kind", "breakpoints", "densities"],
                 "additionalProperties": False,
                 "properties": {"kind": {"const": "piecewise_uniform"},
                                "breakpoints": {"type": "array", "minItems": 2, "items": NUMBER_SCHEMA},
                                "densities": {"type": "array", "minItems": 1, "items": NUMBER_SCHEMA}}},
                {"type": "object", "required": ["kind", "factors"], "additionalProperties": False,
                 "properties": {"kind": {"const": "product"},
                                "factors": {"type": "array", "minItems": 1,
                                            "items": {"$ref": "#/$defs/measure"}}}},
            ]
        }
    },
    "$ref": "#/$defs/measure",
}

PARAMETERS_SCHEMA = {"type": "array", "items": {"oneOf": [NUMBER_SCHEMA,
                                                          {"type": "array", "items": NUMBER_SCHEMA}]}}
