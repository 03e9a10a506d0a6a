"""Curvature of the contravariant connection and the scalars derived from it.

``R[i, j, k, m]`` is the ``m``-th component of ``R(dx_i, dx_j) dx_k``::

    R(dx_i, dx_j) dx_k = [ P^{il} d_l G_m^{jk} - P^{jl} d_l G_m^{ik}
                           + G_n^{jk} G_m^{in} - G_n^{ik} G_m^{jn}
                           - (d_l P^{ij}) G_m^{lk} ] dx_m

which is the coordinate form of ``D_i D_j - D_j D_i - D_{[dx_i, dx_j]}`` with
``[dx_i, dx_j] = dP^{ij}``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from . import expr as ex
from .connection import christoffel_exprs, d_christoffel_exprs, per_spec
from .errors import (
    CoframeConstructionError, DegenerateDirectionError, DegeneratePlaneError,
    EmptySignatureRangeWarning, NotNullError,
)
from .manifold import ManifoldSpec, _check_invertible, _eval_table

__all__ = [
    "PointGeometry", "at", "OrthonormalCoframe", "NullForm", "curvature_at", "curvature_exprs",
    "apply_curvature", "sectional", "ricci", "scalar_curvature", "orthonormal_coframe",
    "qualar", "null_forms", "null_sectional", "qualar_via_null_forms",
    "DEGENERATE_RTOL", "NULL_TOL",
]

DEGENERATE_RTOL = 1e-10
NULL_TOL = 1e-10


@dataclass(frozen=True)
class OrthonormalCoframe:
    """Rows ``theta^a`` with ``g~(theta^a, theta^b) = signs[a] delta_ab``, timelike first."""

    rows: np.ndarray
    signs: tuple[int, ...]


@dataclass(frozen=True)
class NullForm:
    """``xi = (th_i + th_s)/sqrt2`` and its partner ``xibar = (-th_i + th_s)/sqrt2``."""

    xi: np.ndarray
    xibar: np.ndarray
    i: int
    s: int


def apply_curvature(R: np.ndarray, omega, eta, gamma) -> np.ndarray:
    """R(omega, eta) gamma from the coordinate table."""
    return np.einsum("i,j,k,ijkm->m", omega, eta, gamma, R)


class PointGeometry:
    """Pointwise tensors of one spec at one point, computed on demand.

    Every module-level function in this module builds one of these; reuse an
    instance (``at(spec, p)``) when asking many questions at the same point.
    """

    def __init__(self, spec: ManifoldSpec, p: Sequence[float]):
        self.spec = spec
        self.p = np.asarray(p, dtype=float)
        self.ev = spec.evaluator(self.p)

    @cached_property
    def cometric(self) -> np.ndarray:
        return _eval_table(self.ev, self.spec.cometric)

    @cached_property
    def metric(self) -> np.ndarray:
        _check_invertible(self.cometric)
        M = np.linalg.inv(self.cometric)
        return 0.5 * (M + M.T)

    @cached_property
    def bivector(self) -> np.ndarray:
        P = _eval_table(self.ev, self.spec.bivector)
        return 0.5 * (P - P.T)

    @cached_property
    def d_bivector(self) -> np.ndarray:
        return _eval_table(self.ev, self.spec.d_bivector)

    @cached_property
    def christoffel(self) -> np.ndarray:
        self.metric  # singularity check
        return _eval_table(self.ev, christoffel_exprs(self.spec))

    @cached_property
    def d_christoffel(self) -> np.ndarray:
        return _eval_table(self.ev, d_christoffel_exprs(self.spec))

    @cached_property
    def curvature(self) -> np.ndarray:
        P, dP = self.bivector, self.d_bivector
        G, dG = self.christoffel, self.d_christoffel  # G[m,i,j], dG[l,m,i,j]
        R = np.einsum("il,lmjk->ijkm", P, dG)
        R -= np.einsum("jl,lmik->ijkm", P, dG)
        R += np.einsum("njk,min->ijkm", G, G)
        R -= np.einsum("nik,mjn->ijkm", G, G)
        R -= np.einsum("lij,mlk->ijkm", dP, G)
        return R

    @cached_property
    def coframe(self) -> OrthonormalCoframe:
        return _coframe(self.spec, self.cometric)

    # pairings

    def inner(self, a, b) -> float:
        return float(np.asarray(a, float) @ self.cometric @ np.asarray(b, float))

    def R(self, omega, eta, gamma) -> np.ndarray:
        return apply_curvature(self.curvature, omega, eta, gamma)

    def anchor(self, omega) -> np.ndarray:
        return np.asarray(omega, float) @ self.bivector

    def J(self, omega) -> np.ndarray:
        return np.asarray(omega, float) @ self.bivector @ self.metric

    def poisson(self, omega, eta) -> float:
        return float(np.asarray(omega, float) @ self.bivector @ np.asarray(eta, float))

    def _gnorm2(self, a) -> float:
        a = np.abs(np.asarray(a, float))
        return float(a @ np.abs(self.cometric) @ a)

    def sectional(self, omega, eta) -> float:
        omega = np.asarray(omega, float)
        eta = np.asarray(eta, float)
        den = self.inner(omega, omega) * self.inner(eta, eta) - self.inner(omega, eta) ** 2
        scale = self._gnorm2(omega) * self._gnorm2(eta)
        if not abs(den) > DEGENERATE_RTOL * scale:
            raise DegeneratePlaneError("plane is degenerate (null or linearly dependent pair)")
        return self.inner(self.R(omega, eta, eta), omega) / den

    def ricci(self, omega, eta) -> float:
        return float(sum(self.inner(self.R(omega, th, th), eta) for th in self.coframe.rows))

    def scalar_curvature(self) -> float:
        return float(sum(self.ricci(th, th) for th in self.coframe.rows))

    def _signature_pairs(self):
        q, k = self.spec.index, self.spec.dim
        if q == 0 or q == k:
            warnings.warn(
                f"{self.spec.name}: index {q} of {k} leaves no timelike/spacelike pairs; returning 0",
                EmptySignatureRangeWarning,
                stacklevel=3,
            )
            return []
        return [(i, s) for i in range(q) for s in range(q, k)]

    def qualar(self) -> float:
        pairs = self._signature_pairs()
        rows = self.coframe.rows if pairs else None
        return 2.0 * sum(self.sectional(rows[i], rows[s]) for i, s in pairs)

    def null_forms(self) -> list[NullForm]:
        q, k = self.spec.index, self.spec.dim
        rows = self.coframe.rows
        r2 = math.sqrt(2.0)
        return [
            NullForm((rows[i] + rows[s]) / r2, (rows[s] - rows[i]) / r2, i, s)
            for i in range(q) for s in range(q, k)
        ]

    def null_sectional(self, xi, theta) -> float:
        xi = np.asarray(xi, float)
        theta = np.asarray(theta, float)
        if abs(self.inner(xi, xi)) > NULL_TOL * max(self._gnorm2(xi), 1.0):
            raise NotNullError(f"g~(xi, xi) = {self.inner(xi, xi):.3e} is not zero")
        tt = self.inner(theta, theta)
        if abs(tt) <= NULL_TOL * max(self._gnorm2(theta), 1e-300):
            raise DegenerateDirectionError("theta_l is null")
        sv = np.linalg.svd(np.vstack([xi, theta]), compute_uv=False)
        if sv[-1] <= NULL_TOL * sv[0]:
            raise DegenerateDirectionError("theta_l is parallel to xi")
        return self.inner(self.R(xi, theta, theta), xi) / tt

    def qualar_via_null_forms(self) -> float:
        pairs = self._signature_pairs()
        if not pairs:
            return 0.0
        return 2.0 * sum(self.sectional(n.xi, n.xibar) for n in self.null_forms())


def at(spec: ManifoldSpec, p: Sequence[float]) -> PointGeometry:
    return PointGeometry(spec, p)


def _coframe(spec: ManifoldSpec, G: np.ndarray) -> OrthonormalCoframe:
    """Signature-aware Gram-Schmidt over the coordinate coframe with pivoting."""
    k = spec.dim
    _check_invertible(G)
    cands = list(range(k))
    chosen: list[tuple[int, np.ndarray, int]] = []
    scale = float(np.max(np.abs(G)))
    for _ in range(k):
        best = None
        for c in cands:
            v = np.zeros(k)
            v[c] = 1.0
            for _, th, eps in chosen:
                v = v - eps * (v @ G @ th) * th
            n = float(v @ G @ v)
            if best is None or abs(n) > abs(best[1]):
                best = (c, n, v)
        c, n, v = best
        if abs(n) <= 1e-14 * scale:
            raise CoframeConstructionError(f"{spec.name}: no non-null direction left in Gram-Schmidt")
        chosen.append((c, v / math.sqrt(abs(n)), 1 if n > 0 else -1))
        cands.remove(c)
    nneg = sum(1 for *_, e in chosen if e < 0)
    if nneg != spec.index:
        raise CoframeConstructionError(
            f"{spec.name}: cometric has {nneg} timelike directions at this point, declared index {spec.index}"
        )
    chosen.sort(key=lambda t: (t[2], t[0]))
    rows = np.array([th for _, th, _ in chosen])
    signs = tuple(e for *_, e in chosen)
    gram = rows @ G @ rows.T
    if np.max(np.abs(gram - np.diag(signs))) > 1e-10:
        raise CoframeConstructionError(f"{spec.name}: Gram-Schmidt lost orthonormality")
    return OrthonormalCoframe(rows, signs)


@per_spec
def curvature_exprs(spec: ManifoldSpec) -> tuple:
    """Symbolic ``R[i][j][k][m]``, same formula as the numeric table.

    Used for printed reports; numeric work goes through :class:`PointGeometry`.
    """
    k = spec.dim
    P, dP = spec.bivector, spec.d_bivector
    G, dG = christoffel_exprs(spec), d_christoffel_exprs(spec)
    mul, rng = ex.mul, range(k)

    def entry(i, j, kk, m):
        terms = [mul(P[i][l], dG[l][m][j][kk]) for l in rng]
        terms += [ex.neg(mul(P[j][l], dG[l][m][i][kk])) for l in rng]
        terms += [mul(G[n][j][kk], G[m][i][n]) for n in rng]
        terms += [ex.neg(mul(G[n][i][kk], G[m][j][n])) for n in rng]
        terms += [ex.neg(mul(dP[l][i][j], G[m][l][kk])) for l in rng]
        return ex.sum_of(terms)

    return tuple(
        tuple(tuple(tuple(entry(i, j, kk, m) for m in rng) for kk in rng) for j in rng)
        for i in rng
    )


# module-level operations, one point at a time

def curvature_at(spec: ManifoldSpec, p) -> np.ndarray:
    return at(spec, p).curvature


def sectional(spec: ManifoldSpec, p, omega, eta) -> float:
    return at(spec, p).sectional(omega, eta)


def ricci(spec: ManifoldSpec, p, omega, eta) -> float:
    return at(spec, p).ricci(omega, eta)


def scalar_curvature(spec: ManifoldSpec, p) -> float:
    return at(spec, p).scalar_curvature()


def orthonormal_coframe(spec: ManifoldSpec, p) -> OrthonormalCoframe:
    return at(spec, p).coframe


def qualar(spec: ManifoldSpec, p) -> float:
    return at(spec, p).qualar()


def null_forms(spec: ManifoldSpec, p) -> list[NullForm]:
    return at(spec, p).null_forms()


def null_sectional(spec: ManifoldSpec, p, xi, theta) -> float:
    return at(spec, p).null_sectional(xi, theta)


def qualar_via_null_forms(spec: ManifoldSpec, p) -> float:
    return at(spec, p).qualar_via_null_forms()
