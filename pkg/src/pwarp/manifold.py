"""Chart-level pseudo-Riemannian Poisson manifolds and pointwise primitives.

A :class:`ManifoldSpec` holds the cometric ``g~^{ij}`` and the bivector
``Pi^{ij}`` as expression tables in one chart.  Numeric covectors are plain
``numpy`` arrays of coefficients in the coordinate coframe ``dx_i``; covector
fields are tuples of expressions.

Index conventions used throughout the package::

    anchor:   (#w)^l  = w_i Pi^{il}
    J:        (Jw)_m  = w_i Pi^{ij} g_{jm}      with g = inverse cometric
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.stats import qmc

from . import expr as ex
from .errors import SignatureError, SingularCometricError, SpecError
from .expr import Expr

Field = tuple  # tuple[Expr, ...]; components of a covector field

__all__ = [
    "ManifoldSpec", "CausalType", "PoissonReport", "Field", "cometric_at",
    "metric_at", "bivector_at", "anchor", "j_endomorphism", "inner",
    "causal_type", "signature_at", "check_signature", "validate_poisson",
    "is_casimir", "koszul_bracket", "coordinate_form", "constant_field",
    "differential", "field_at", "sample_points", "symbolic_inverse",
    "field_apply", "derivation", "field_inner", "field_j", "field_anchor",
    "field_poisson", "jacobiator",
]

SINGULAR_RTOL = 1e-12


def _to_expr(v, coords, params) -> Expr:
    if isinstance(v, Expr):
        return v
    if isinstance(v, (int, float)):
        return ex.const(v)
    return ex.parse(str(v), coords, params)


@dataclass(frozen=True, eq=False)
class ManifoldSpec:
    """One chart of a pseudo-Riemannian Poisson manifold.

    ``cometric`` and ``bivector`` are full ``k x k`` tables.  Use
    :meth:`build` to construct one from upper-triangular entries.
    """

    name: str
    coords: tuple[str, ...]
    index: int
    cometric: tuple[tuple[Expr, ...], ...]
    bivector: tuple[tuple[Expr, ...], ...]
    params: Mapping[str, float] = field(default_factory=dict)
    box: tuple[tuple[float, float], ...] | None = None

    @classmethod
    def build(
        cls,
        name: str,
        coords: Sequence[str],
        index: int,
        cometric: Mapping[tuple[int, int], object],
        bivector: Mapping[tuple[int, int], object] | None = None,
        params: Mapping[str, float] | None = None,
        box: Sequence[tuple[float, float]] | None = None,
    ) -> "ManifoldSpec":
        """Build from 0-based upper-triangular entries.

        ``cometric`` takes keys ``(i, j)`` with ``i <= j`` and ``bivector``
        keys with ``i < j``.  Values are expressions or expression text.
        Missing off-diagonal entries are zero; a missing cometric diagonal
        entry is an error.
        """
        coords = tuple(coords)
        params = dict(params or {})
        k = len(coords)
        if k == 0:
            raise SpecError("a manifold needs at least one coordinate")
        if len(set(coords)) != k:
            raise SpecError(f"duplicate coordinate names in {coords}")
        if not 0 <= index <= k:
            raise SpecError(f"index {index} outside 0..{k}")
        for pname, pval in params.items():
            if not np.isfinite(pval):
                raise SpecError(f"parameter {pname} is not finite")
        pnames = tuple(params)
        g = [[ex.ZERO] * k for _ in range(k)]
        for (i, j), v in cometric.items():
            if not (0 <= i <= j < k):
                raise SpecError(f"cometric entry ({i + 1},{j + 1}) must satisfy i <= j <= {k}")
            g[i][j] = g[j][i] = _to_expr(v, coords, pnames)
        for i in range(k):
            if (i, i) not in cometric:
                raise SpecError(f"missing diagonal cometric entry g{i + 1}{i + 1}")
        P = [[ex.ZERO] * k for _ in range(k)]
        for (i, j), v in (bivector or {}).items():
            if not (0 <= i < j < k):
                raise SpecError(f"bivector entry ({i + 1},{j + 1}) must satisfy i < j <= {k}")
            e = _to_expr(v, coords, pnames)
            P[i][j] = e
            P[j][i] = ex.neg(e)
        if box is not None:
            box = tuple((float(a), float(b)) for a, b in box)
            if len(box) != k:
                raise SpecError(f"box has {len(box)} intervals for {k} coordinates")
            for a, b in box:
                if not a < b:
                    raise SpecError(f"empty box interval [{a}, {b}]")
        return cls(
            name=name,
            coords=coords,
            index=int(index),
            cometric=tuple(map(tuple, g)),
            bivector=tuple(map(tuple, P)),
            params=MappingProxyType(params),
            box=box,
        )

    @property
    def dim(self) -> int:
        return len(self.coords)

    def parse(self, text: str) -> Expr:
        """Parse an expression over this chart's coordinates and parameters."""
        return ex.parse(text, self.coords, tuple(self.params))

    def env(self, p: Sequence[float]) -> dict[str, float]:
        p = np.asarray(p, dtype=float).ravel()
        if p.shape[0] != self.dim:
            raise ValueError(f"point has {p.shape[0]} coordinates, {self.name} needs {self.dim}")
        env = dict(self.params)
        env.update(zip(self.coords, map(float, p)))
        return env

    def evaluator(self, p: Sequence[float]) -> ex.Evaluator:
        return ex.Evaluator(self.env(p))

    # symbolic derived data, computed once

    @cached_property
    def d_cometric(self) -> tuple:
        """``d_cometric[l][i][j]`` = d g~^{ij} / dx_l."""
        return tuple(
            tuple(tuple(ex.differentiate(g, x) for g in row) for row in self.cometric)
            for x in self.coords
        )

    @cached_property
    def d_bivector(self) -> tuple:
        """``d_bivector[l][i][j]`` = d Pi^{ij} / dx_l."""
        return tuple(
            tuple(tuple(ex.differentiate(P, x) for P in row) for row in self.bivector)
            for x in self.coords
        )

    @cached_property
    def metric(self) -> tuple:
        """Symbolic inverse of the cometric, ``metric[i][j]`` = g~_{ij}."""
        return symbolic_inverse(self.cometric)

    @cached_property
    def is_zero_bivector(self) -> bool:
        return all(P is ex.ZERO for row in self.bivector for P in row)

    def __repr__(self):
        return f"ManifoldSpec({self.name!r}, coords={self.coords}, index={self.index})"


class CausalType(enum.Enum):
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"


# ---------------------------------------------------------------------------
# symbolic linear algebra

def _blocks(m: Sequence[Sequence[Expr]]) -> list[list[int]]:
    k = len(m)
    seen = [False] * k
    out = []
    for s in range(k):
        if seen[s]:
            continue
        stack, comp = [s], []
        seen[s] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(k):
                if not seen[j] and (m[i][j] is not ex.ZERO or m[j][i] is not ex.ZERO):
                    seen[j] = True
                    stack.append(j)
        out.append(sorted(comp))
    return out


def _det(m, rows: tuple[int, ...], cols: tuple[int, ...], memo) -> Expr:
    key = (rows, cols)
    if key in memo:
        return memo[key]
    if len(rows) == 1:
        d = m[rows[0]][cols[0]]
    else:
        r0, rest = rows[0], rows[1:]
        d = ex.ZERO
        for n, c in enumerate(cols):
            a = m[r0][c]
            if a is ex.ZERO:
                continue
            minor = _det(m, rest, cols[:n] + cols[n + 1:], memo)
            term = ex.mul(a, minor)
            d = ex.add(d, term) if n % 2 == 0 else ex.sub(d, term)
    memo[key] = d
    return d


def symbolic_inverse(m: Sequence[Sequence[Expr]]) -> tuple:
    """Inverse of a symmetric expression matrix by blockwise adjugates.

    Structurally zero entries split the matrix into independent blocks, so a
    diagonal cometric gives ``1/g~^{ii}`` entries directly.
    """
    k = len(m)
    inv = [[ex.ZERO] * k for _ in range(k)]
    for blk in _blocks(m):
        if len(blk) == 1:
            i = blk[0]
            inv[i][i] = ex.div(ex.ONE, m[i][i])
            continue
        memo: dict = {}
        rows = tuple(blk)
        det = _det(m, rows, rows, memo)
        for a, i in enumerate(blk):
            for b, j in enumerate(blk):
                # inverse_{ij} = cofactor_{ji} / det
                r = tuple(x for x in blk if x != j)
                c = tuple(x for x in blk if x != i)
                cof = _det(m, r, c, memo)
                if (a + b) % 2:
                    cof = ex.neg(cof)
                inv[i][j] = ex.div(cof, det)
    return tuple(map(tuple, inv))


# ---------------------------------------------------------------------------
# evaluation helpers

def _eval_table(ev: ex.Evaluator, table) -> np.ndarray:
    arr = np.asarray(table, dtype=object)
    flat = np.fromiter((ev(e) for e in arr.ravel()), dtype=float, count=arr.size)
    return flat.reshape(arr.shape)


def cometric_at(spec: ManifoldSpec, p: Sequence[float], ev: ex.Evaluator | None = None) -> np.ndarray:
    ev = ev or spec.evaluator(p)
    return _eval_table(ev, spec.cometric)


def bivector_at(spec: ManifoldSpec, p: Sequence[float], ev: ex.Evaluator | None = None) -> np.ndarray:
    ev = ev or spec.evaluator(p)
    k = spec.dim
    P = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            P[i, j] = ev(spec.bivector[i][j])
            P[j, i] = -P[i, j]
    return P


def _check_invertible(G: np.ndarray) -> None:
    scale = float(np.prod(np.max(np.abs(G), axis=1)))
    if abs(np.linalg.det(G)) <= SINGULAR_RTOL * scale:
        raise SingularCometricError(f"cometric is singular (det {np.linalg.det(G):.3e})")


def metric_at(spec: ManifoldSpec, p: Sequence[float], ev: ex.Evaluator | None = None) -> np.ndarray:
    """Inverse of the cometric at ``p``; raises SingularCometricError."""
    G = cometric_at(spec, p, ev)
    _check_invertible(G)
    M = np.linalg.inv(G)
    return 0.5 * (M + M.T)


def anchor(spec: ManifoldSpec, p, omega) -> np.ndarray:
    """Tangent components of the anchor of ``omega``."""
    return np.asarray(omega, dtype=float) @ bivector_at(spec, p)


def j_endomorphism(spec: ManifoldSpec, p, omega) -> np.ndarray:
    ev = spec.evaluator(p)
    return np.asarray(omega, dtype=float) @ bivector_at(spec, p, ev) @ metric_at(spec, p, ev)


def inner(spec: ManifoldSpec, p, omega, eta) -> float:
    """Cometric pairing g~(omega, eta)."""
    return float(np.asarray(omega, dtype=float) @ cometric_at(spec, p) @ np.asarray(eta, dtype=float))


def causal_type(spec: ManifoldSpec, p, omega, tol: float = 1e-10) -> CausalType:
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = inner(spec, p, omega, omega)
    if abs(n) <= tol:
        return CausalType.LIGHTLIKE
    return CausalType.SPACELIKE if n > 0 else CausalType.TIMELIKE


def signature_at(spec: ManifoldSpec, p) -> tuple[int, int]:
    """(negative, positive) eigenvalue counts of the cometric at ``p``."""
    G = cometric_at(spec, p)
    _check_invertible(G)
    w = np.linalg.eigvalsh(G)
    neg = int(np.sum(w < 0))
    return neg, len(w) - neg


def check_signature(spec: ManifoldSpec, p) -> None:
    neg, pos = signature_at(spec, p)
    if neg != spec.index:
        raise SignatureError(
            f"{spec.name}: cometric at {list(np.round(p, 6))} has {neg} negative eigenvalues, "
            f"declared index is {spec.index}"
        )


# ---------------------------------------------------------------------------
# Poisson checks

@dataclass(frozen=True)
class PoissonReport:
    passed: bool
    residual: float
    point: tuple[float, ...] | None = None
    triple: tuple[int, int, int] | None = None


def jacobiator(spec: ManifoldSpec) -> dict[tuple[int, int, int], Expr]:
    """Cyclic sums sum_l (P^{il} d_l P^{jk} + P^{jl} d_l P^{ki} + P^{kl} d_l P^{ij}), i<j<k."""
    k = spec.dim
    P, dP = spec.bivector, spec.d_bivector
    out = {}
    for i, j, m in itertools.combinations(range(k), 3):
        terms = []
        for a, b, c in ((i, j, m), (j, m, i), (m, i, j)):
            for l in range(k):
                terms.append(ex.mul(P[a][l], dP[l][b][c]))
        out[(i, j, m)] = ex.sum_of(terms)
    return out


def validate_poisson(spec: ManifoldSpec, sample_points: Iterable, tol: float = 1e-10) -> PoissonReport:
    """Sample-based Jacobi identity check; passes iff every residual is within ``tol``."""
    pts = [np.asarray(p, dtype=float) for p in sample_points]
    if not pts:
        raise ValueError("validate_poisson needs at least one sample point")
    jac = jacobiator(spec)
    worst, where, trip = 0.0, None, None
    for p in pts:
        ev = spec.evaluator(p)
        for t, e in jac.items():
            r = abs(ev(e))
            if where is None or r > worst:
                worst, where, trip = r, tuple(p), t
    return PoissonReport(worst <= tol, worst, where, trip if jac else None)


def is_casimir(spec: ManifoldSpec, f: Expr, sample_points: Iterable, tol: float = 1e-10) -> bool:
    df = differential(spec, f)
    for p in sample_points:
        if np.linalg.norm(j_endomorphism(spec, p, field_at(spec, df, p))) > tol:
            return False
    return True


# ---------------------------------------------------------------------------
# covector fields

def coordinate_form(spec: ManifoldSpec, i: int) -> Field:
    return tuple(ex.ONE if j == i else ex.ZERO for j in range(spec.dim))


def constant_field(values: Sequence[float]) -> Field:
    return tuple(ex.const(v) for v in values)


def differential(spec: ManifoldSpec, f: Expr) -> Field:
    return tuple(ex.differentiate(f, x) for x in spec.coords)


def field_at(spec: ManifoldSpec, omega: Field, p, ev: ex.Evaluator | None = None) -> np.ndarray:
    ev = ev or spec.evaluator(p)
    return np.array([ev(e) for e in omega], dtype=float)


def field_apply(omega: Field, X: Sequence[Expr]) -> Expr:
    """Pairing omega(X) of a covector field with vector components ``X``."""
    return ex.sum_of(ex.mul(a, b) for a, b in zip(omega, X))


def field_anchor(spec: ManifoldSpec, omega: Field) -> tuple[Expr, ...]:
    k = spec.dim
    P = spec.bivector
    return tuple(ex.sum_of(ex.mul(omega[i], P[i][l]) for i in range(k)) for l in range(k))


def derivation(spec: ManifoldSpec, X: Sequence[Expr], u: Expr) -> Expr:
    """Vector field with components ``X`` applied to the function ``u``."""
    return ex.sum_of(ex.mul(X[l], ex.differentiate(u, x)) for l, x in enumerate(spec.coords))


def field_inner(spec: ManifoldSpec, omega: Field, eta: Field) -> Expr:
    k = spec.dim
    g = spec.cometric
    return ex.sum_of(ex.mul(ex.mul(omega[i], g[i][j]), eta[j]) for i in range(k) for j in range(k))


def field_j(spec: ManifoldSpec, omega: Field) -> Field:
    X = field_anchor(spec, omega)
    G = spec.metric
    k = spec.dim
    return tuple(ex.sum_of(ex.mul(X[j], G[j][m]) for j in range(k)) for m in range(k))


def field_poisson(spec: ManifoldSpec, omega: Field, eta: Field) -> Expr:
    """Pi(omega, eta) as an expression."""
    return field_apply(eta, field_anchor(spec, omega))


def koszul_bracket(spec: ManifoldSpec, omega: Field, eta: Field) -> Field:
    """Koszul bracket  L_{#w} eta - L_{#eta} w - d(Pi(w, eta)), in components."""
    k = spec.dim
    xs = spec.coords
    X = field_anchor(spec, omega)
    Y = field_anchor(spec, eta)
    piw = field_apply(eta, X)
    d = ex.differentiate
    out = []
    for m in range(k):
        xm = xs[m]
        terms = []
        for l in range(k):
            terms.append(ex.mul(X[l], d(eta[m], xs[l])))
            terms.append(ex.mul(eta[l], d(X[l], xm)))
            terms.append(ex.neg(ex.mul(Y[l], d(omega[m], xs[l]))))
            terms.append(ex.neg(ex.mul(omega[l], d(Y[l], xm))))
        terms.append(ex.neg(d(piw, xm)))
        out.append(ex.sum_of(terms))
    return tuple(out)


# ---------------------------------------------------------------------------
# sampling

def sample_points(box: Sequence[tuple[float, float]], n: int, seed: int = 0) -> np.ndarray:
    """``n`` scrambled Halton points mapped into ``box`` (one interval per coordinate)."""
    if n < 1:
        raise ValueError("need at least one sample point")
    if box is None:
        raise SpecError("no sampling box declared")
    lo = np.array([a for a, _ in box], dtype=float)
    hi = np.array([b for _, b in box], dtype=float)
    u = qmc.Halton(d=len(box), scramble=True, seed=seed).random(n)
    return qmc.scale(u, lo, hi) if len(box) else u
