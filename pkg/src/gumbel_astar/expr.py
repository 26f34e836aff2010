"""Symbolic expression trees with point and interval evaluation.

Trees are built from ``Const``, ``Var`` and ``Op`` nodes, either with the
Python operators or from a prefix text format such as::

    (add (mul a (exp (neg (mul b (pow (abs (sub x c)) d))))) e)

Point evaluation is vectorized through numpy, so a data variable may be bound
to an array. Interval evaluation compiles the tree into nested closures over
outward-rounded intervals.
"""

import math

import numpy as np

from .intervals import Interval, as_interval, icos, iexp, ilog, ipow, isin, isqrt

UNARY = ("neg", "exp", "log", "sin", "cos", "abs", "sqrt")
BINARY = ("add", "sub", "mul", "div", "pow")


class Expr:
    def __add__(self, other):
        return Op("add", (self, wrap(other)))

    def __radd__(self, other):
        return Op("add", (wrap(other), self))

    def __sub__(self, other):
        return Op("sub", (self, wrap(other)))

    def __rsub__(self, other):
        return Op("sub", (wrap(other), self))

    def __mul__(self, other):
        return Op("mul", (self, wrap(other)))

    def __rmul__(self, other):
        return Op("mul", (wrap(other), self))

    def __truediv__(self, other):
        return Op("div", (self, wrap(other)))

    def __rtruediv__(self, other):
        return Op("div", (wrap(other), self))

    def __pow__(self, other):
        return Op("pow", (self, wrap(other)))

    def __neg__(self):
        return Op("neg", (self,))

    def __abs__(self):
        return Op("abs", (self,))


class Const(Expr):
    def __init__(self, value):
        self.value = float(value)

    def variables(self):
        return set()

    def to_text(self):
        return repr(self.value)

    def __repr__(self):
        return f"Const({self.value!r})"


class Var(Expr):
    def __init__(self, name):
        self.name = name

    def variables(self):
        return {self.name}

    def to_text(self):
        return self.name

    def __repr__(self):
        return f"Var({self.name!r})"


class Op(Expr):
    def __init__(self, op, args):
        if op in UNARY:
            arity = 1
        elif op in BINARY:
            arity = 2
        else:
            raise ValueError(f"unknown operator {op!r}")
        if len(args) != arity:
            raise ValueError(f"{op} takes {arity} argument(s), got {len(args)}")
        self.op = op
        self.args = tuple(args)

    def variables(self):
        out = set()
        for a in self.args:
            out |= a.variables()
        return out

    def to_text(self):
        return "(" + " ".join([self.op] + [a.to_text() for a in self.args]) + ")"

    def __repr__(self):
        return f"Op({self.op!r}, {self.args!r})"


def wrap(value):
    return value if isinstance(value, Expr) else Const(value)


def exp(e):
    return Op("exp", (wrap(e),))


def log(e):
    return Op("log", (wrap(e),))


def sin(e):
    return Op("sin", (wrap(e),))


def cos(e):
    return Op("cos", (wrap(e),))


def sqrt(e):
    return Op("sqrt", (wrap(e),))


def parse(text):
    """Parse the prefix text format into an expression tree."""
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def read():
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("unexpected end of expression")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            if pos >= len(tokens):
                raise ValueError("unexpected end of expression")
            op = tokens[pos]
            pos += 1
            args = []
            while pos < len(tokens) and tokens[pos] != ")":
                args.append(read())
            if pos >= len(tokens):
                raise ValueError("missing ')'")
            pos += 1
            return Op(op, args)
        if tok == ")":
            raise ValueError("unexpected ')'")
        try:
            return Const(float(tok))
        except ValueError:
            pass
        if tok == "pi":
            return Const(math.pi)
        return Var(tok)

    expr = read()
    if pos != len(tokens):
        raise ValueError("trailing tokens after expression")
    return expr


def substitute(expr, values):
    """Replace variables named in ``values`` by constants."""
    if isinstance(expr, Var):
        if expr.name in values:
            return Const(values[expr.name])
        return expr
    if isinstance(expr, Op):
        return Op(expr.op, [substitute(a, values) for a in expr.args])
    return expr


_NP = {
    "neg": np.negative, "exp": np.exp, "log": np.log, "sin": np.sin,
    "cos": np.cos, "abs": np.abs, "sqrt": np.sqrt, "add": np.add,
    "sub": np.subtract, "mul": np.multiply, "div": np.divide, "pow": np.power,
}


def evaluate(expr, env):
    """Point evaluation; ``env`` maps variable names to floats or arrays."""
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Var):
        try:
            return env[expr.name]
        except KeyError:
            raise ValueError(f"unbound variable {expr.name!r}") from None
    args = [evaluate(a, env) for a in expr.args]
    with np.errstate(all="ignore"):
        return _NP[expr.op](*args)


_IV = {
    "neg": lambda a: -a,
    "exp": iexp,
    "log": ilog,
    "sin": isin,
    "cos": icos,
    "abs": abs,
    "sqrt": isqrt,
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
    "pow": ipow,
}


def compile_interval(expr, names):
    """Compile ``expr`` to a function ``f(region) -> Interval``.

    ``names`` maps variable names to region dimensions; every variable in the
    tree must appear there (bind data constants with :func:`substitute`).
    """
    index = {name: d for d, name in enumerate(names)} if not isinstance(names, dict) else names
    missing = expr.variables() - set(index)
    if missing:
        raise ValueError(f"unbound variables {sorted(missing)}")

    def build(e):
        if isinstance(e, Const):
            iv = Interval.point(e.value)
            return lambda lo, hi: iv
        if isinstance(e, Var):
            d = index[e.name]
            return lambda lo, hi: Interval(lo[d], hi[d])
        fn = _IV[e.op]
        if e.op == "pow" and isinstance(e.args[1], Const):
            base = build(e.args[0])
            p = e.args[1].value
            return lambda lo, hi: ipow(base(lo, hi), p)
        if len(e.args) == 1:
            a = build(e.args[0])
            return lambda lo, hi: fn(a(lo, hi))
        a, b = build(e.args[0]), build(e.args[1])
        return lambda lo, hi: fn(a(lo, hi), b(lo, hi))

    f = build(expr)
    return lambda region: f(region.lower, region.upper)


def default_names(dim):
    return ["x"] if dim == 1 else [f"x{d}" for d in range(dim)]


def interval_eval(expr, region, names=None):
    """Sound enclosure of ``{expr(x) : x in region}``."""
    if names is None:
        names = default_names(region.dim)
    return compile_interval(expr, names)(region)


__all__ = [
    "Expr", "Const", "Var", "Op", "parse", "substitute", "evaluate",
    "compile_interval", "interval_eval", "exp", "log", "sin", "cos", "sqrt",
    "as_interval",
]
