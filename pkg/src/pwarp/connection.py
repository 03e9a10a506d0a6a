"""Contravariant Levi-Civita connection of a single chart.

Christoffel symbols are built once per spec as expressions::

    G_k^{ij} = 1/2 sum_{l,m} g_{mk} ( P^{il} d_l g^{jm} + P^{jl} d_l g^{im} - P^{ml} d_l g^{ij}
                                      - g^{li} d_l P^{jm} - g^{lj} d_l P^{im} ) + 1/2 d_k P^{ij}

with ``D_{dx_i} dx_j = G_k^{ij} dx_k``.  Tables are indexed ``[k][i][j]``.
"""

from __future__ import annotations

import weakref
from functools import wraps
from typing import Sequence, Union

import numpy as np

from . import expr as ex
from .expr import Expr
from .manifold import (
    Field, ManifoldSpec, _eval_table, bivector_at, cometric_at, constant_field,
    coordinate_form, derivation, field_anchor, field_at, field_inner, koszul_bracket,
    metric_at,
)

__all__ = [
    "christoffel", "christoffel_exprs", "d_christoffel_exprs", "contravariant_derivative",
    "second_derivative", "hessian", "hessian_exprs", "laplacian", "derivative_at",
    "scalar_derivative", "torsion_residual", "compatibility_residual",
]

HALF = ex.const(0.5)


def per_spec(fn):
    """Memoize a one-argument function of a spec for the spec's lifetime."""
    memo: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()

    @wraps(fn)
    def wrapper(spec):
        try:
            return memo[spec]
        except KeyError:
            r = memo[spec] = fn(spec)
            return r

    return wrapper


@per_spec
def christoffel_exprs(spec: ManifoldSpec) -> tuple:
    k = spec.dim
    g, P = spec.cometric, spec.bivector
    dg, dP = spec.d_cometric, spec.d_bivector
    G = spec.metric
    mul = ex.mul
    # A[m][i][j]: the bracket summed over l, before lowering with g_{mk}
    A = [[[None] * k for _ in range(k)] for _ in range(k)]
    for m in range(k):
        for i in range(k):
            for j in range(k):
                terms = []
                for l in range(k):
                    terms.append(mul(P[i][l], dg[l][j][m]))
                    terms.append(mul(P[j][l], dg[l][i][m]))
                    terms.append(ex.neg(mul(P[m][l], dg[l][i][j])))
                    terms.append(ex.neg(mul(g[l][i], dP[l][j][m])))
                    terms.append(ex.neg(mul(g[l][j], dP[l][i][m])))
                A[m][i][j] = ex.sum_of(terms)
    out = []
    for kk in range(k):
        rows = []
        for i in range(k):
            row = []
            for j in range(k):
                s = ex.sum_of(mul(G[m][kk], A[m][i][j]) for m in range(k))
                row.append(ex.add(mul(HALF, s), mul(HALF, dP[kk][i][j])))
            rows.append(tuple(row))
        out.append(tuple(rows))
    return tuple(out)


@per_spec
def d_christoffel_exprs(spec: ManifoldSpec) -> tuple:
    """``[l][k][i][j]`` = d G_k^{ij} / dx_l, by symbolic differentiation."""
    gam = christoffel_exprs(spec)
    return tuple(
        tuple(tuple(tuple(ex.differentiate(e, x) for e in row) for row in plane) for plane in gam)
        for x in spec.coords
    )


def christoffel(spec: ManifoldSpec, p: Sequence[float], ev: ex.Evaluator | None = None) -> np.ndarray:
    """Christoffel table at ``p``, ``out[k, i, j]`` = G_k^{ij}."""
    ev = ev or spec.evaluator(p)
    metric_at(spec, p, ev)  # SingularCometricError check
    return _eval_table(ev, christoffel_exprs(spec))


def scalar_derivative(spec: ManifoldSpec, omega: Field, u: Expr) -> Expr:
    """D_omega u = #(omega)(u)."""
    return derivation(spec, field_anchor(spec, omega), u)


def contravariant_derivative(spec: ManifoldSpec, omega: Field, eta: Field) -> Field:
    """(D_w eta)_m = w_i eta_j G_m^{ij} + w_i P^{il} d_l eta_m, as an expression field."""
    k = spec.dim
    gam = christoffel_exprs(spec)
    X = field_anchor(spec, omega)
    out = []
    for m in range(k):
        terms = [
            ex.mul(ex.mul(omega[i], eta[j]), gam[m][i][j])
            for i in range(k) for j in range(k)
            if omega[i] is not ex.ZERO and eta[j] is not ex.ZERO
        ]
        terms.append(derivation(spec, X, eta[m]))
        out.append(ex.sum_of(terms))
    return tuple(out)


def derivative_at(spec: ManifoldSpec, p, omega, eta: Field, ev: ex.Evaluator | None = None) -> np.ndarray:
    """D_omega eta at ``p`` for a numeric covector ``omega`` and a field ``eta``."""
    ev = ev or spec.evaluator(p)
    omega = np.asarray(omega, dtype=float)
    gam = christoffel(spec, p, ev)
    e = np.array([ev(c) for c in eta])
    de = np.array([[ev(ex.differentiate(c, x)) for x in spec.coords] for c in eta])  # [m][l]
    X = omega @ bivector_at(spec, p, ev)
    return np.einsum("i,j,mij->m", omega, e, gam) + de @ X


Tensor = Union[Expr, tuple]


def second_derivative(spec: ManifoldSpec, omega: Field, eta: Field, T: Tensor) -> Tensor:
    """D^2_{w,eta} T = D_w(D_eta T) - D_{D_w eta} T for a function or covector field."""
    Dwe = contravariant_derivative(spec, omega, eta)
    if isinstance(T, Expr):
        return ex.sub(
            scalar_derivative(spec, omega, scalar_derivative(spec, eta, T)),
            scalar_derivative(spec, Dwe, T),
        )
    inner = contravariant_derivative(spec, eta, T)
    a = contravariant_derivative(spec, omega, inner)
    b = contravariant_derivative(spec, Dwe, T)
    return tuple(ex.sub(x, y) for x, y in zip(a, b))


_hess_memo: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def hessian_exprs(spec: ManifoldSpec, phi: Expr) -> tuple:
    """Hessian H(dx_i, dx_j) = D^2_{dx_i, dx_j} phi as an expression table."""
    per = _hess_memo.setdefault(spec, {})
    hit = per.get(phi)
    if hit is not None:
        return hit
    k = spec.dim
    P = spec.bivector
    gam = christoffel_exprs(spec)
    # #dx_j (phi) = P^{jm} d_m phi
    s = [derivation(spec, P[j], phi) for j in range(k)]
    H = tuple(
        tuple(
            ex.sub(
                derivation(spec, P[i], s[j]),
                ex.sum_of(ex.mul(gam[kk][i][j], s[kk]) for kk in range(k)),
            )
            for j in range(k)
        )
        for i in range(k)
    )
    per[phi] = H
    return H


def hessian(spec: ManifoldSpec, phi: Expr, p, ev: ex.Evaluator | None = None) -> np.ndarray:
    ev = ev or spec.evaluator(p)
    metric_at(spec, p, ev)
    return _eval_table(ev, hessian_exprs(spec, phi))


def laplacian(spec: ManifoldSpec, u: Expr, p, ev: ex.Evaluator | None = None) -> float:
    """-sum_a D^2_{th_a, th_a} u over the orthonormal coframe (unsigned sum).

    Pointwise values suffice because D^2 is tensorial in both slots.
    """
    from .curvature import orthonormal_coframe

    fr = orthonormal_coframe(spec, p)
    H = hessian(spec, u, p, ev)
    return float(-sum(th @ H @ th for th in fr.rows))


# ---------------------------------------------------------------------------
# axiom residuals

def torsion_residual(spec: ManifoldSpec, p) -> float:
    """max |D_{dx_i}dx_j - D_{dx_j}dx_i - [dx_i, dx_j]| at ``p``.

    With ``[dx_i, dx_j] = dP^{ij}`` this is ``G_m^{ij} - G_m^{ji} - d_m P^{ij}``.
    """
    ev = spec.evaluator(p)
    gam = christoffel(spec, p, ev)
    k = spec.dim
    worst = 0.0
    for i in range(k):
        for j in range(i + 1, k):
            br = field_at(spec, koszul_bracket(spec, coordinate_form(spec, i), coordinate_form(spec, j)), p, ev)
            worst = max(worst, float(np.max(np.abs(gam[:, i, j] - gam[:, j, i] - br))))
    return worst


def compatibility_residual(spec: ManifoldSpec, p, omega, eta, gamma) -> float:
    """|#w(g(eta, gamma)) - g(D_w eta, gamma) - g(eta, D_w gamma)| for constant-coefficient forms."""
    ev = spec.evaluator(p)
    w, e, c = (constant_field(v) for v in (omega, eta, gamma))
    lhs = ev(scalar_derivative(spec, w, field_inner(spec, e, c)))
    De = field_at(spec, contravariant_derivative(spec, w, e), p, ev)
    Dc = field_at(spec, contravariant_derivative(spec, w, c), p, ev)
    G = cometric_at(spec, p, ev)
    return abs(lhs - De @ G @ np.asarray(gamma, float) - np.asarray(eta, float) @ G @ Dc)
