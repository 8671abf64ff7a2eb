"""Relation and measure builders shared by the tests."""
import random
from fractions import Fraction

from distalreg.structures import AtomicMeasure, relation_from_json


def rel1d(expr, sign="<", **kw):
    return relation_from_json({"backend": "SEMIALG_1D", "x_arity": 1, "y_arity": 1,
                               "formula": {"atom": {"expr": expr}, "sign": sign}, **kw})


def plane(expr, sign=">", y_arity=2):
    return relation_from_json({"backend": "PLANE_LINES", "x_arity": 2, "y_arity": y_arity,
                               "formula": {"atom": {"expr": expr}, "sign": sign}})


def hyper(k, expr, sign="<"):
    return relation_from_json({"backend": "SEMIALG_1D", "arity": k,
                               "formula": {"atom": {"expr": expr}, "sign": sign}})


def formula_rel(formula, backend="SEMIALG_1D", y_arity=1):
    x = 1 if backend == "SEMIALG_1D" else 2
    return relation_from_json({"backend": backend, "x_arity": x, "y_arity": y_arity,
                               "formula": formula})


def uniform(values):
    return AtomicMeasure([(Fraction(v),) for v in values])


def random_points(rng: random.Random, n, lo=-60, hi=60, den=1):
    return [Fraction(v, den) for v in rng.sample(range(lo * den, hi * den), n)]


def random_deg2(rng: random.Random, symmetric=False):
    """A random sign condition on a polynomial of degree <= 2 in each variable."""
    c = [rng.randint(-3, 3) for _ in range(6)]
    if symmetric:
        expr = f"{c[0]}*(x**2 + y**2) + {c[1]}*x*y + {c[2]}*(x + y) + {c[3]}"
        return hyper(2, expr, rng.choice(["<", ">"]))
    expr = f"{c[0]}*x**2 + {c[1]}*x*y + {c[2]}*y**2 + {c[3]}*x + {c[4]}*y + {c[5]}"
    return rel1d(expr, rng.choice(["<", ">"]))
