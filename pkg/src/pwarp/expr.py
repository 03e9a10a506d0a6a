"""Scalar expressions over chart coordinates and named parameters.

Expressions are immutable trees built from hash-consed nodes, so structurally
equal subtrees are the same object.  This keeps evaluation caches and the
derivative memo cheap: a Christoffel table and its derivatives share most of
their subexpressions.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?          # right associative
    atom   := number | name | func '(' expr ')' | '(' expr ')'
"""

from __future__ import annotations

import math
import re
import weakref
from typing import Callable, Iterable, Mapping, Sequence

__all__ = [
    "Expr", "Const", "Var", "Param", "Neg", "Add", "Sub", "Mul", "Div", "Pow", "Call",
    "FUNCTIONS", "ExprError", "ExprSyntaxError", "UnknownIdentifierError",
    "DomainError", "NonFiniteError", "parse", "evaluate", "Evaluator",
    "differentiate", "to_text", "const", "var", "param", "neg", "add", "sub",
    "mul", "div", "power", "call", "sum_of", "free_names", "depends_on", "ZERO", "ONE",
]


class ExprError(ValueError):
    """Base class for expression errors."""


class ExprSyntaxError(ExprError):
    def __init__(self, message: str, offset: int, source: str = ""):
        self.offset = offset
        self.source = source
        super().__init__(f"{message} at offset {offset}")


class UnknownIdentifierError(ExprError):
    def __init__(self, name: str, offset: int):
        self.name = name
        self.offset = offset
        super().__init__(f"unknown identifier {name!r} at offset {offset}")


class DomainError(ExprError):
    """A function was applied outside its real domain."""


class NonFiniteError(ExprError):
    """Evaluation produced an infinite or undefined value."""


# ---------------------------------------------------------------------------
# nodes

_table: "weakref.WeakValueDictionary[tuple, Expr]" = weakref.WeakValueDictionary()


class Expr:
    """Base node.  Instances are interned; compare with ``is`` or ``==``."""

    __slots__ = ("_key", "_hash", "__weakref__")
    prec = 100

    def __new__(cls, *args):
        key = (cls.__name__,) + tuple(a if not isinstance(a, Expr) else id(a) for a in args)
        node = _table.get(key)
        if node is not None:
            return node
        node = object.__new__(cls)
        node._init(*args)
        node._key = key
        node._hash = hash(key)
        _table[key] = node
        return node

    def _init(self, *args):
        raise NotImplementedError

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other

    def __ne__(self, other):
        return self is not other

    def __reduce__(self):
        return (type(self), self._args())

    def _args(self) -> tuple:
        raise NotImplementedError

    def children(self) -> tuple["Expr", ...]:
        return ()

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"Expr({to_text(self)!r})"

    # operator sugar, building through the folding constructors
    def __add__(self, o):
        return add(self, _lift(o))

    def __radd__(self, o):
        return add(_lift(o), self)

    def __sub__(self, o):
        return sub(self, _lift(o))

    def __rsub__(self, o):
        return sub(_lift(o), self)

    def __mul__(self, o):
        return mul(self, _lift(o))

    def __rmul__(self, o):
        return mul(_lift(o), self)

    def __truediv__(self, o):
        return div(self, _lift(o))

    def __rtruediv__(self, o):
        return div(_lift(o), self)

    def __pow__(self, o):
        return power(self, _lift(o))

    def __neg__(self):
        return neg(self)


def _lift(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, float)):
        return const(float(x))
    return NotImplemented


class Const(Expr):
    __slots__ = ("value",)

    def _init(self, value):
        self.value = float(value)

    def _args(self):
        return (self.value,)


class Var(Expr):
    """Reference to a chart coordinate."""

    __slots__ = ("name",)

    def _init(self, name):
        self.name = name

    def _args(self):
        return (self.name,)


class Param(Expr):
    """Reference to a named parameter (a constant for differentiation)."""

    __slots__ = ("name",)

    def _init(self, name):
        self.name = name

    def _args(self):
        return (self.name,)


class Neg(Expr):
    __slots__ = ("arg",)
    prec = 3

    def _init(self, arg):
        self.arg = arg

    def _args(self):
        return (self.arg,)

    def children(self):
        return (self.arg,)


class _Binary(Expr):
    __slots__ = ("left", "right")
    symbol = "?"

    def _init(self, left, right):
        self.left = left
        self.right = right

    def _args(self):
        return (self.left, self.right)

    def children(self):
        return (self.left, self.right)


class Add(_Binary):
    __slots__ = ()
    symbol, prec = "+", 1


class Sub(_Binary):
    __slots__ = ()
    symbol, prec = "-", 1


class Mul(_Binary):
    __slots__ = ()
    symbol, prec = "*", 2


class Div(_Binary):
    __slots__ = ()
    symbol, prec = "/", 2


class Pow(_Binary):
    __slots__ = ()
    symbol, prec = "^", 4


class Call(Expr):
    __slots__ = ("func", "arg")

    def _init(self, func, arg):
        if func not in FUNCTIONS:
            raise ExprError(f"unknown function {func!r}")
        self.func = func
        self.arg = arg

    def _args(self):
        return (self.func, self.arg)

    def children(self):
        return (self.arg,)


def _cot(x):
    s = math.sin(x)
    if s == 0.0:
        raise ZeroDivisionError
    return math.cos(x) / s


def _ln(x):
    if x <= 0.0:
        raise DomainError(f"ln of non-positive value {x!r}")
    return math.log(x)


def _sqrt(x):
    if x < 0.0:
        raise DomainError(f"sqrt of negative value {x!r}")
    return math.sqrt(x)


FUNCTIONS: dict[str, Callable[[float], float]] = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "cot": _cot,
    "sinh": math.sinh,
    "cosh": math.cosh,
    "exp": math.exp,
    "ln": _ln,
    "sqrt": _sqrt,
    "abs": abs,
}


# ---------------------------------------------------------------------------
# folding constructors

def const(v: float) -> Const:
    v = float(v)
    if v == 0.0:
        v = 0.0  # drop the sign of negative zero
    return Const(v)


ZERO = const(0.0)
ONE = const(1.0)


def var(name: str) -> Var:
    return Var(name)


def param(name: str) -> Param:
    return Param(name)


def _is(e: Expr, v: float) -> bool:
    return isinstance(e, Const) and e.value == v


def _fold(fn, *vals):
    try:
        r = fn(*vals)
    except (ArithmeticError, ValueError):
        return None
    if not math.isfinite(r):
        return None
    return const(r)


def neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def add(a: Expr, b: Expr) -> Expr:
    if _is(a, 0.0):
        return b
    if _is(b, 0.0):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        r = _fold(lambda x, y: x + y, a.value, b.value)
        if r is not None:
            return r
    if isinstance(b, Neg):
        return sub(a, b.arg)
    if isinstance(a, Neg):
        return sub(b, a.arg)
    return Add(a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if _is(b, 0.0):
        return a
    if _is(a, 0.0):
        return neg(b)
    if a is b:
        return ZERO
    if isinstance(a, Const) and isinstance(b, Const):
        r = _fold(lambda x, y: x - y, a.value, b.value)
        if r is not None:
            return r
    if isinstance(b, Neg):
        return add(a, b.arg)
    return Sub(a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if _is(a, 0.0) or _is(b, 0.0):
        return ZERO
    if _is(a, 1.0):
        return b
    if _is(b, 1.0):
        return a
    if _is(a, -1.0):
        return neg(b)
    if _is(b, -1.0):
        return neg(a)
    if isinstance(a, Const) and isinstance(b, Const):
        r = _fold(lambda x, y: x * y, a.value, b.value)
        if r is not None:
            return r
    if isinstance(a, Neg) and isinstance(b, Neg):
        return mul(a.arg, b.arg)
    if isinstance(a, Neg):
        return neg(mul(a.arg, b))
    if isinstance(b, Neg):
        return neg(mul(a, b.arg))
    return Mul(a, b)


def div(a: Expr, b: Expr) -> Expr:
    if _is(b, 1.0):
        return a
    if _is(a, 0.0) and not _is(b, 0.0):
        return ZERO
    if isinstance(a, Const) and isinstance(b, Const):
        r = _fold(lambda x, y: x / y, a.value, b.value)
        if r is not None:
            return r
    if isinstance(a, Neg):
        return neg(div(a.arg, b))
    if isinstance(b, Neg):
        return neg(div(a, b.arg))
    return Div(a, b)


def power(a: Expr, b: Expr) -> Expr:
    if _is(b, 0.0):
        return ONE
    if _is(b, 1.0):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        r = _fold(_pow, a.value, b.value)
        if r is not None:
            return r
    return Pow(a, b)


def call(func: str, a: Expr) -> Expr:
    if isinstance(a, Const):
        r = _fold(FUNCTIONS[func], a.value)
        if r is not None:
            return r
    return Call(func, a)


def sum_of(terms: Iterable[Expr]) -> Expr:
    out = ZERO
    for t in terms:
        out = add(out, t)
    return out


def _pow(x: float, y: float) -> float:
    if x == 0.0 and y < 0.0:
        raise ZeroDivisionError
    if x < 0.0 and not float(y).is_integer():
        raise DomainError(f"non-integer power {y!r} of negative value {x!r}")
    try:
        return math.pow(x, y)
    except OverflowError:
        raise NonFiniteError(f"overflow in {x!r}^{y!r}") from None


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    n = len(src)
    while True:
        while pos < n and src[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(src, pos)
        if m is None or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", pos, src)
        kind = m.lastgroup
        toks.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, src, variables, params):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0
        self.variables = set(variables)
        self.params = set(params)

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ExprSyntaxError(msg, tok[2], self.src)

    def expect(self, text):
        t = self.peek()
        if t[1] != text or t[0] != "op":
            self.fail(f"expected {text!r}")
        return self.take()

    def parse(self):
        e = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return e

    def expr(self):
        e = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            r = self.term()
            e = Add(e, r) if op == "+" else Sub(e, r)
        return e

    def term(self):
        e = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            r = self.unary()
            e = Mul(e, r) if op == "*" else Div(e, r)
        return e

    def unary(self):
        t = self.peek()
        if t[0] == "op" and t[1] == "-":
            self.take()
            a = self.unary()
            return const(-a.value) if isinstance(a, Const) else Neg(a)
        return self.power()

    def power(self):
        base = self.atom()
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.take()
            return Pow(base, self.unary())
        return base

    def atom(self):
        t = self.take()
        kind, text, pos = t
        if kind == "num":
            return const(float(text))
        if kind == "name":
            nxt = self.peek()
            if text in FUNCTIONS:
                if not (nxt[0] == "op" and nxt[1] == "("):
                    self.fail(f"function {text!r} needs an argument in parentheses", nxt)
                self.take()
                a = self.expr()
                self.expect(")")
                return Call(text, a)
            if nxt[0] == "op" and nxt[1] == "(":
                raise UnknownIdentifierError(text, pos)
            if text in self.variables:
                return Var(text)
            if text in self.params:
                return Param(text)
            raise UnknownIdentifierError(text, pos)
        if kind == "op" and text == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "end":
            self.fail("unexpected end of input", t)
        self.fail(f"unexpected {text!r}", t)


def parse(source: str, variables: Sequence[str] = (), params: Sequence[str] = ()) -> Expr:
    """Parse ``source`` into an expression tree.

    Names must appear in ``variables`` (coordinates) or ``params``; anything
    else raises :class:`UnknownIdentifierError`.  The tree is kept as written
    (no folding beyond negative literals) so that printing reflects the input.
    """
    if not source or not source.strip():
        raise ExprSyntaxError("empty expression", 0, source)
    clash = set(variables) & set(params)
    if clash:
        raise ExprError(f"names declared both as coordinate and parameter: {sorted(clash)}")
    return _Parser(source, variables, params).parse()


# ---------------------------------------------------------------------------
# evaluation

class Evaluator:
    """Evaluates many expressions at one point, sharing a value cache.

    ``env`` maps every coordinate and parameter name to its value.  The
    cache is keyed by node identity and keeps each node alive, so an id is
    never reused while the evaluator exists.
    """

    __slots__ = ("env", "cache")

    def __init__(self, env: Mapping[str, float]):
        self.env = env
        self.cache: dict[int, tuple[Expr, float]] = {}

    def __call__(self, e: Expr) -> float:
        cache = self.cache
        hit = cache.get(id(e))
        if hit is None:
            v = self._eval(e)
            cache[id(e)] = (e, v)
            return v
        return hit[1]

    def _eval(self, e: Expr) -> float:
        t = type(e)
        try:
            if t is Const:
                return e.value
            if t is Var or t is Param:
                try:
                    return float(self.env[e.name])
                except KeyError:
                    raise UnknownIdentifierError(e.name, -1) from None
            if t is Add:
                r = self(e.left) + self(e.right)
            elif t is Sub:
                r = self(e.left) - self(e.right)
            elif t is Mul:
                r = self(e.left) * self(e.right)
            elif t is Div:
                d = self(e.right)
                n = self(e.left)
                if d == 0.0:
                    raise NonFiniteError(f"division by zero in {to_text(e)}")
                r = n / d
            elif t is Neg:
                r = -self(e.arg)
            elif t is Pow:
                r = _pow(self(e.left), self(e.right))
            elif t is Call:
                r = FUNCTIONS[e.func](self(e.arg))
            else:
                raise TypeError(f"not an expression node: {e!r}")
        except ZeroDivisionError:
            raise NonFiniteError(f"division by zero in {to_text(e)}") from None
        except OverflowError:
            raise NonFiniteError(f"overflow in {to_text(e)}") from None
        except ValueError as exc:
            if isinstance(exc, ExprError):
                raise
            raise DomainError(f"{exc} in {to_text(e)}") from None
        if not math.isfinite(r):
            raise NonFiniteError(f"non-finite value in {to_text(e)}")
        return r


def evaluate(e: Expr, env: Mapping[str, float]) -> float:
    """Evaluate ``e`` with the name bindings in ``env``."""
    return Evaluator(env)(e)


# ---------------------------------------------------------------------------
# differentiation

_dep_memo: "weakref.WeakKeyDictionary[Expr, frozenset]" = weakref.WeakKeyDictionary()
_diff_memo: dict[tuple[int, str], tuple[Expr, Expr]] = {}


def free_names(e: Expr) -> frozenset:
    """Coordinate names (not parameters) appearing in ``e``."""
    r = _dep_memo.get(e)
    if r is None:
        if isinstance(e, Var):
            r = frozenset((e.name,))
        else:
            r = frozenset().union(*(free_names(c) for c in e.children()))
        _dep_memo[e] = r
    return r


def depends_on(e: Expr, name: str) -> bool:
    return name in free_names(e)


def differentiate(e: Expr, name: str) -> Expr:
    """Exact partial derivative of ``e`` with respect to coordinate ``name``."""
    if not depends_on(e, name):
        return ZERO
    key = (id(e), name)
    hit = _diff_memo.get(key)
    if hit is not None and hit[0] is e:
        return hit[1]
    d = _diff(e, name)
    _diff_memo[key] = (e, d)
    return d


def _diff(e: Expr, x: str) -> Expr:
    D = differentiate
    t = type(e)
    if t is Var:
        return ONE if e.name == x else ZERO
    if t is Neg:
        return neg(D(e.arg, x))
    if t is Add:
        return add(D(e.left, x), D(e.right, x))
    if t is Sub:
        return sub(D(e.left, x), D(e.right, x))
    if t is Mul:
        a, b = e.left, e.right
        return add(mul(D(a, x), b), mul(a, D(b, x)))
    if t is Div:
        a, b = e.left, e.right
        da, db = D(a, x), D(b, x)
        if db is ZERO:
            return div(da, b)
        return sub(div(da, b), div(mul(a, db), power(b, const(2))))
    if t is Pow:
        a, b = e.left, e.right
        if not depends_on(b, x):
            # b * a^(b-1) * a'
            if isinstance(b, Const):
                lower = power(a, const(b.value - 1.0))
            else:
                lower = power(a, sub(b, ONE))
            return mul(mul(b, lower), D(a, x))
        # a^b * (b' ln a + b a'/a)
        return mul(e, add(mul(D(b, x), call("ln", a)), div(mul(b, D(a, x)), a)))
    if t is Call:
        a = e.arg
        da = D(a, x)
        f = e.func
        if f == "sin":
            outer = call("cos", a)
        elif f == "cos":
            outer = neg(call("sin", a))
        elif f == "tan":
            outer = add(ONE, power(e, const(2)))
        elif f == "cot":
            outer = neg(add(ONE, power(e, const(2))))
        elif f == "sinh":
            outer = call("cosh", a)
        elif f == "cosh":
            outer = call("sinh", a)
        elif f == "exp":
            outer = e
        elif f == "ln":
            return div(da, a)
        elif f == "sqrt":
            return div(da, mul(const(2), e))
        elif f == "abs":
            outer = div(a, e)
        else:  # pragma: no cover - FUNCTIONS is closed
            raise ExprError(f"no derivative rule for {f}")
        return mul(outer, da)
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# printing

def _num(v: float) -> str:
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def to_text(e: Expr) -> str:
    """Render ``e`` as text that :func:`parse` reads back to an equal value."""
    t = type(e)
    if t is Const:
        s = _num(e.value)
        return f"({s})" if e.value < 0 else s
    if t is Var or t is Param:
        return e.name
    if t is Call:
        return f"{e.func}({to_text(e.arg)})"
    if t is Neg:
        inner = to_text(e.arg)
        if e.arg.prec <= Neg.prec:
            inner = f"({inner})"
        return "-" + inner
    if isinstance(e, _Binary):
        l, r = to_text(e.left), to_text(e.right)
        if t is Pow:
            # right associative: parenthesize a left operand of equal or lower
            # precedence, and a right operand of lower
            if e.left.prec <= Pow.prec:
                l = f"({l})"
            if e.right.prec < Neg.prec:
                r = f"({r})"
        else:
            if e.left.prec < e.prec:
                l = f"({l})"
            if e.right.prec <= e.prec:
                r = f"({r})"
        return f"{l}{e.symbol}{r}" if t is Pow else f"{l} {e.symbol} {r}"
    raise TypeError(f"not an expression node: {e!r}")
