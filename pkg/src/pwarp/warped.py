"""Contravariant warped products ``M1 x_f M2`` with bivector ``Pi1 + nu Pi2``.

:func:`assemble` turns a :class:`WarpedSpec` into an ordinary
:class:`~pwarp.manifold.ManifoldSpec` on the product chart (base coordinates
first).  The ``*_closed_form`` functions evaluate the product formulas from
factor-level data only, so they can be compared against the generic pipeline
run on the assembled chart.

Pointwise closed forms take a product point ``p`` (base coordinates, then
fiber coordinates) and numeric factor covectors, read as constant-coefficient
fields in the factor chart.  They return product-chart arrays.

Where a published formula was found to disagree with direct computation the
literal transcription stays the default (``variant="published"``) and a
``variant="corrected"`` reading is offered next to it.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

from . import expr as ex
from .connection import (
    compatibility_residual, contravariant_derivative, derivative_at, hessian, laplacian,
    per_spec, torsion_residual,
)
from .curvature import PointGeometry, at
from .errors import (
    DegeneratePlaneError, EmptySignatureRangeWarning, IndexRangeError,
    NameCollisionError, NonPositiveWarpError, SpecError,
)
from .expr import Expr
from .manifold import (
    Field, ManifoldSpec, constant_field, differential, field_at, field_inner, field_j,
    field_poisson, is_casimir, koszul_bracket, sample_points, validate_poisson,
)

__all__ = [
    "WarpedSpec", "Part", "LiftedForm", "assemble", "lift", "split_point",
    "connection_closed_form", "curvature_closed_form", "sectional_closed_form",
    "laplacian_split", "qualar_closed_form", "qualar_fiber_independent",
    "qualar_display_h2xe2", "qualar_display_h2xs2", "NullRelation",
    "null_sectional_relations", "admissible_null_triples", "SignReport",
    "StatementCheck", "sign_property_check", "SUITES", "CheckResult", "CrossCheck",
    "cross_check", "relative_residual", "probe_fields", "probe_function", "default_points",
]

VARIANTS = ("published", "corrected")


# ---------------------------------------------------------------------------
# data

@dataclass(frozen=True, eq=False)
class WarpedSpec:
    """Base, fiber, warping function ``f`` and coupling ``nu`` (both on the base)."""

    base: ManifoldSpec
    fiber: ManifoldSpec
    f: Expr
    nu: Expr
    name: str = "warped"
    params: Mapping[str, float] = field(default_factory=dict)

    @classmethod
    def build(
        cls,
        base: ManifoldSpec,
        fiber: ManifoldSpec,
        f: Expr | str | float,
        nu: Expr | str | float = 1.0,
        name: str | None = None,
        check_points: int = 50,
        seed: int = 0,
    ) -> "WarpedSpec":
        """Validate and build.

        ``f`` must be positive at ``check_points`` quasi-random points of the
        base box (skipped when the base declares no box).
        """
        clash = set(base.coords) & set(fiber.coords)
        if clash:
            raise NameCollisionError(f"coordinate names shared by base and fiber: {sorted(clash)}")
        for a, b in ((base, fiber), (fiber, base)):
            bad = set(a.params) & set(b.coords)
            if bad:
                raise NameCollisionError(f"{a.name} parameter names {sorted(bad)} are coordinates of {b.name}")
        params = dict(base.params)
        for k, v in fiber.params.items():
            if k in params and params[k] != v:
                raise NameCollisionError(f"parameter {k} is {params[k]} on the base and {v} on the fiber")
            params[k] = v
        f = _base_expr(base, f, "f")
        nu = _base_expr(base, nu, "nu")
        w = cls(base, fiber, f, nu, name or f"{base.name}x{fiber.name}", MappingProxyType(params))
        if base.box is not None and check_points > 0:
            for q in sample_points(base.box, check_points, seed):
                val = base.evaluator(q)(f)
                if not val > 0:
                    raise NonPositiveWarpError(
                        f"warping function is {val:.6g} at base point {list(np.round(q, 6))}; it must be positive"
                    )
        return w

    @property
    def k1(self) -> int:
        return self.base.dim

    @property
    def k2(self) -> int:
        return self.fiber.dim

    @property
    def q1(self) -> int:
        return self.base.index

    @property
    def q2(self) -> int:
        return self.fiber.index

    @property
    def dim(self) -> int:
        return self.k1 + self.k2

    # symbolic base fields reused by the closed forms

    @cached_property
    def df(self) -> Field:
        return differential(self.base, self.f)

    @cached_property
    def dnu(self) -> Field:
        return differential(self.base, self.nu)

    @cached_property
    def Jdf(self) -> Field:
        return field_j(self.base, self.df)

    @cached_property
    def Jdf_over_f(self) -> Field:
        return tuple(ex.div(c, self.f) for c in self.Jdf)

    @cached_property
    def half_f2_dnu(self) -> Field:
        w = ex.mul(ex.const(0.5), ex.power(self.f, ex.const(2)))
        return tuple(ex.mul(w, c) for c in self.dnu)

    def __repr__(self):
        return f"WarpedSpec({self.name!r}, base={self.base.name!r}, fiber={self.fiber.name!r})"


def _base_expr(base: ManifoldSpec, v, what: str) -> Expr:
    if isinstance(v, Expr):
        extra = ex.free_names(v) - set(base.coords) - set(base.params)
        if extra:
            raise SpecError(f"{what} may only use base coordinates and parameters, found {sorted(extra)}")
        return v
    if isinstance(v, (int, float)):
        return ex.const(float(v))
    try:
        return base.parse(str(v))
    except ex.UnknownIdentifierError as e:
        raise SpecError(f"{what} may only use base coordinates and parameters: {e}") from e


def split_point(w: WarpedSpec, p) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(p, dtype=float).ravel()
    if p.shape[0] != w.dim:
        raise ValueError(f"product point needs {w.dim} coordinates, got {p.shape[0]}")
    return p[: w.k1], p[w.k1:]


@per_spec
def assemble(w: WarpedSpec) -> ManifoldSpec:
    """The product chart: cometric ``g1 (+) g2/f^2``, bivector ``Pi1 (+) nu Pi2``."""
    k1, k = w.k1, w.dim
    f2 = ex.power(w.f, ex.const(2))
    g = {}
    P = {}
    for i in range(k1):
        for j in range(i, k1):
            if i == j or w.base.cometric[i][j] is not ex.ZERO:
                g[(i, j)] = w.base.cometric[i][j]
            if i < j and w.base.bivector[i][j] is not ex.ZERO:
                P[(i, j)] = w.base.bivector[i][j]
    for a in range(w.k2):
        for b in range(a, w.k2):
            ga = w.fiber.cometric[a][b]
            if a == b or ga is not ex.ZERO:
                g[(k1 + a, k1 + b)] = ex.div(ga, f2)
            pa = w.fiber.bivector[a][b]
            if a < b and pa is not ex.ZERO:
                P[(k1 + a, k1 + b)] = ex.mul(w.nu, pa)
    box = None
    if w.base.box is not None and w.fiber.box is not None:
        box = w.base.box + w.fiber.box
    return ManifoldSpec.build(
        w.name, w.base.coords + w.fiber.coords, w.q1 + w.q2, g, P, dict(w.params), box,
    )


# ---------------------------------------------------------------------------
# lifts

class Part(enum.Enum):
    HORIZONTAL = "h"
    VERTICAL = "v"


@dataclass(frozen=True)
class LiftedForm:
    """A factor covector (field) placed in the product chart.

    ``components`` holds the product-chart coefficients: numbers for a
    covector, expressions for a field.
    """

    part: Part
    factor: tuple
    components: object

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.components, dtype=dtype or float)


def lift(w: WarpedSpec, obj, part: Part | str):
    """Horizontal or vertical lift of a function, covector or covector field.

    Factor coordinate names are kept in the product chart, so a function
    lifts to the same expression.
    """
    part = Part(part) if not isinstance(part, Part) else part
    factor = w.base if part is Part.HORIZONTAL else w.fiber
    if isinstance(obj, Expr):
        extra = ex.free_names(obj) - set(factor.coords) - set(factor.params)
        if extra:
            raise SpecError(f"function uses names outside {factor.name}: {sorted(extra)}")
        return obj
    comps = tuple(obj)
    if len(comps) != factor.dim:
        raise ValueError(f"{factor.name} forms have {factor.dim} components, got {len(comps)}")
    symbolic = any(isinstance(c, Expr) for c in comps)
    if symbolic:
        comps = tuple(c if isinstance(c, Expr) else ex.const(float(c)) for c in comps)
        pad_h, pad_v = (ex.ZERO,) * w.k1, (ex.ZERO,) * w.k2
        full = comps + pad_v if part is Part.HORIZONTAL else pad_h + comps
    else:
        arr = np.asarray(comps, dtype=float)
        full = np.zeros(w.dim)
        if part is Part.HORIZONTAL:
            full[: w.k1] = arr
        else:
            full[w.k1:] = arr
    return LiftedForm(part, comps, full)


def _h(w: WarpedSpec, a) -> np.ndarray:
    out = np.zeros(w.dim)
    out[: w.k1] = a
    return out


def _v(w: WarpedSpec, a) -> np.ndarray:
    out = np.zeros(w.dim)
    out[w.k1:] = a
    return out


def _hf(w: WarpedSpec, a: Field) -> Field:
    return tuple(a) + (ex.ZERO,) * w.k2


def _vf(w: WarpedSpec, a: Field) -> Field:
    return (ex.ZERO,) * w.k1 + tuple(a)


def _scale(s: Expr, a: Field) -> Field:
    return tuple(ex.mul(s, c) for c in a)


def _plus(*fields: Field) -> Field:
    return tuple(ex.sum_of(cs) for cs in zip(*fields))


# ---------------------------------------------------------------------------
# connection, symbolic

def connection_closed_form(w: WarpedSpec, case: int, omega: Field, gamma: Field) -> Field:
    """Product derivative of lifted factor fields, from factor data.

    case 1: ``D_{w1^h} g1^h``; case 2: ``D_{w2^v} g2^v``; case 3:
    ``D_{w1^h} g2^v`` (equal to ``D_{g2^v} w1^h``).  ``omega`` and
    ``gamma`` are expression fields on the factor named by the case.
    """
    omega, gamma = tuple(omega), tuple(gamma)
    if case == 1:
        return _hf(w, contravariant_derivative(w.base, omega, gamma))
    if case == 2:
        D2 = contravariant_derivative(w.fiber, omega, gamma)
        pi = field_poisson(w.fiber, omega, gamma)
        g2 = field_inner(w.fiber, omega, gamma)
        c_nu = ex.mul(ex.const(0.5), pi)
        c_j = ex.neg(ex.div(g2, ex.power(w.f, ex.const(3))))
        return _plus(
            _vf(w, _scale(w.nu, D2)),
            _hf(w, _scale(c_nu, w.dnu)),
            _hf(w, _scale(c_j, w.Jdf)),
        )
    if case == 3:
        J2g = field_j(w.fiber, gamma)
        a = ex.div(field_inner(w.base, w.Jdf, omega), w.f)
        b = ex.mul(
            ex.const(-0.5),
            ex.mul(ex.power(w.f, ex.const(2)), field_inner(w.base, w.dnu, omega)),
        )
        return _plus(_vf(w, _scale(a, gamma)), _vf(w, _scale(b, J2g)))
    raise ValueError(f"connection case must be 1, 2 or 3, got {case!r}")


# ---------------------------------------------------------------------------
# pointwise factor data

class _At:
    """Factor geometry and base scalars at one product point."""

    def __init__(self, w: WarpedSpec, p):
        self.w = w
        self.p1, self.p2 = split_point(w, p)
        self.M1: PointGeometry = at(w.base, self.p1)
        self.M2: PointGeometry = at(w.fiber, self.p2)
        ev = self.M1.ev
        self.f = ev(w.f)
        self.nu = ev(w.nu)
        self.df = np.array([ev(c) for c in w.df])
        self.dnu = np.array([ev(c) for c in w.dnu])
        self.Jdf = self.M1.J(self.df)

    # factor-1 helpers; covectors are numeric arrays

    def g1(self, a, b) -> float:
        return self.M1.inner(a, b)

    def g2(self, a, b) -> float:
        return self.M2.inner(a, b)

    def D1(self, omega, fld: Field) -> np.ndarray:
        """D^{M1}_omega of a base field."""
        return derivative_at(self.w.base, self.p1, omega, fld, self.M1.ev)

    def D1c(self, omega, gamma) -> np.ndarray:
        """D^{M1}_omega of a constant-coefficient base form."""
        return np.einsum("i,j,mij->m", omega, gamma, self.M1.christoffel)

    def D2c(self, omega, gamma) -> np.ndarray:
        return np.einsum("i,j,mij->m", omega, gamma, self.M2.christoffel)

    def sharp1(self, omega, u_grad) -> float:
        """#_{Pi1}(omega) applied to a function with gradient ``u_grad``."""
        return float(self.M1.anchor(omega) @ u_grad)

    def D1_Jdf(self, omega) -> np.ndarray:
        return self.D1(omega, self.w.Jdf)

    def hess_prime(self, theta) -> float:
        """g1(D_theta J1 df, theta), the Hessian entry as it enters the qualar sum."""
        return self.g1(self.D1_Jdf(theta), theta)

    def norm_Jdf(self) -> float:
        return self.g1(self.Jdf, self.Jdf)

    def norm_dnu(self) -> float:
        return self.g1(self.dnu, self.dnu)

    # fiber Poisson pieces on constant forms

    def DPi2(self, omega, eta, gamma) -> float:
        """(D_omega Pi2)(eta, gamma) = #w(Pi2(eta, gamma)) - Pi2(D_w eta, gamma) - Pi2(eta, D_w gamma)."""
        fib = self.w.fiber
        pi = field_poisson(fib, constant_field(eta), constant_field(gamma))
        grad = np.array([self.M2.ev(ex.differentiate(pi, x)) for x in fib.coords])
        return (
            float(self.M2.anchor(omega) @ grad)
            - self.M2.poisson(self.D2c(omega, eta), gamma)
            - self.M2.poisson(eta, self.D2c(omega, gamma))
        )


def _vec(a, n) -> np.ndarray:
    a = np.asarray(a, dtype=float).ravel()
    if a.shape[0] != n:
        raise ValueError(f"expected a covector with {n} components, got {a.shape[0]}")
    return a


# ---------------------------------------------------------------------------
# curvature, pointwise

def curvature_closed_form(w: WarpedSpec, p, case: int, *inputs) -> np.ndarray:
    """Product curvature of lifted factor forms, from factor data.

    ===== ========================== ==========================
    case  inputs                     value
    ===== ========================== ==========================
    1     w1, e1, g1, g2             R(w1^h, e1^h)(g1^h + g2^v)
    2     w1, e2, g1                 R(w1^h, e2^v) g1^h
    3     w1, e2, g2                 R(w1^h, e2^v) g2^v
    4     w2, e2, g1                 R(w2^v, e2^v) g1^h
    5     w2, e2, g2                 R(w2^v, e2^v) g2^v
    ===== ========================== ==========================
    """
    A = _At(w, p)
    k1, k2 = w.k1, w.k2
    if case == 1:
        w1, e1, c1, c2 = inputs
        w1, e1, c1, c2 = _vec(w1, k1), _vec(e1, k1), _vec(c1, k1), _vec(c2, k2)
        return _case1(A, w1, e1, c1, c2)
    if case == 2:
        w1, e2, c1 = inputs
        return _case2(A, _vec(w1, k1), _vec(e2, k2), _vec(c1, k1))
    if case == 3:
        w1, e2, c2 = inputs
        return _case3(A, _vec(w1, k1), _vec(e2, k2), _vec(c2, k2))
    if case == 4:
        w2, e2, c1 = inputs
        return _case4(A, _vec(w2, k2), _vec(e2, k2), _vec(c1, k1))
    if case == 5:
        w2, e2, c2 = inputs
        return _case5(A, _vec(w2, k2), _vec(e2, k2), _vec(c2, k2))
    raise ValueError(f"curvature case must be 1..5, got {case!r}")


def _case1(A: _At, w1, e1, c1, c2):
    w = A.w
    f = A.f
    J2c = A.M2.J(c2)
    out = _h(w, A.M1.R(w1, e1, c1))
    a = (A.g1(A.D1_Jdf(w1), e1) - A.g1(A.D1_Jdf(e1), w1)) / f
    a += (A.sharp1(e1, A.df) * A.g1(A.Jdf, w1) - A.sharp1(w1, A.df) * A.g1(A.Jdf, e1)) / f**2
    b = f**2 / 2 * (A.g1(A.D1(e1, w.dnu), w1) - A.g1(A.D1(w1, w.dnu), e1))
    b += f * (A.sharp1(e1, A.df) * A.g1(A.dnu, w1) - A.sharp1(w1, A.df) * A.g1(A.dnu, e1))
    return out + a * _v(w, c2) + b * _v(w, J2c)


def _case2(A: _At, w1, e2, c1):
    w = A.w
    f = A.f
    J2e = A.M2.J(e2)
    a = A.g1(A.Jdf, w1) * A.g1(A.Jdf, c1) / f**2 + A.g1(A.D1(w1, w.Jdf_over_f), c1)
    b = -f / 2 * (A.g1(A.dnu, w1) * A.g1(A.Jdf, c1) + A.g1(A.Jdf, w1) * A.g1(A.dnu, c1))
    b -= A.g1(A.D1(w1, w.half_f2_dnu), c1)
    c = f**4 / 4 * A.g1(A.dnu, w1) * A.g1(A.dnu, c1)
    return a * _v(w, e2) + b * _v(w, J2e) + c * _v(w, A.M2.J(J2e))


def _case3(A: _At, w1, e2, c2):
    w = A.w
    f, nu = A.f, A.nu
    fib = w.fiber
    J2c = A.M2.J(c2)
    gdw = A.g1(A.dnu, w1)
    gJw = A.g1(A.Jdf, w1)
    g2ec = A.g2(e2, c2)
    pi2ec = A.M2.poisson(e2, c2)
    D2ec = A.D2c(e2, c2)
    # D_{e2} J2 c2 - J2 D_{e2} c2, with c2 a constant field of the fiber chart
    DJ = derivative_at(fib, A.p2, e2, field_j(fib, constant_field(c2)), A.M2.ev) - A.M2.J(D2ec)
    out = -(1 / f**3) * g2ec * _h(w, A.D1_Jdf(w1))
    out = out - A.M1.poisson(A.dnu, w1) * _v(w, D2ec)
    out = out - (f**3 * gdw * A.g2(J2c, e2) + 4 * gJw * g2ec) / (2 * f**4) * _h(w, A.Jdf)
    out = out + 0.5 * (nu * f**2 * gdw * _v(w, DJ) + pi2ec * _h(w, A.D1(w1, w.dnu)))
    out = out + (f**3 * gdw * A.M2.poisson(e2, J2c) - 2 * gJw * pi2ec) / (4 * f) * _h(w, A.dnu)
    return out


def _case4(A: _At, w2, e2, c1):
    w = A.w
    f, nu = A.f, A.nu
    fib = w.fiber
    hpart = A.g1(A.Jdf, c1) * A.dnu - A.g1(A.dnu, c1) * A.Jdf - f * A.D1c(A.dnu, c1)
    out = A.M2.poisson(w2, e2) / f * _h(w, hpart)
    Jw = field_j(fib, constant_field(w2))
    Je = field_j(fib, constant_field(e2))
    br = koszul_bracket(fib, constant_field(w2), constant_field(e2))
    br_at = np.array([A.M2.ev(c) for c in br])
    vpart = (
        derivative_at(fib, A.p2, e2, Jw, A.M2.ev)
        - derivative_at(fib, A.p2, w2, Je, A.M2.ev)
        + A.M2.J(br_at)
    )
    return out + f**2 * nu * A.g1(A.dnu, c1) / 2 * _v(w, vpart)


def _case5(A: _At, w2, e2, c2):
    w = A.w
    f, nu = A.f, A.nu
    M2 = A.M2
    pi = M2.poisson
    out = nu**2 * _v(w, M2.R(w2, e2, c2))
    out = out + nu / 2 * (A.DPi2(w2, e2, c2) - A.DPi2(e2, w2, c2)) * _h(w, A.dnu)
    out = out + f**2 * A.norm_dnu() / 4 * _v(w, M2.J(pi(w2, c2) * e2 - pi(e2, c2) * w2 + 2 * pi(w2, e2) * c2))
    out = out + A.norm_Jdf() / f**4 * _v(w, A.g2(w2, c2) * e2 - A.g2(e2, c2) * w2)
    s = A.g1(A.dnu, A.Jdf) / (2 * f)
    out = out + s * _v(w, pi(e2, c2) * w2 - pi(w2, c2) * e2 - 2 * pi(w2, e2) * c2)
    out = out + s * _v(w, M2.J(A.g2(e2, c2) * w2 - A.g2(w2, c2) * e2))
    return out


# ---------------------------------------------------------------------------
# sectional curvature, pointwise

def _nondegenerate(den: float, scale: float) -> None:
    if not abs(den) > 1e-10 * max(scale, 1e-300):
        raise DegeneratePlaneError("plane is degenerate (null or linearly dependent pair)")


def sectional_closed_form(w: WarpedSpec, p, case: str, a, b) -> float:
    """Sectional curvature of a lifted plane from factor data.

    ``case`` is ``"hh"`` (a, b on the base), ``"hv"`` (a on the base, b on
    the fiber) or ``"vv"`` (both on the fiber).
    """
    A = _At(w, p)
    f, nu = A.f, A.nu
    if case == "hh":
        return A.M1.sectional(_vec(a, w.k1), _vec(b, w.k1))
    if case == "hv":
        w1, e2 = _vec(a, w.k1), _vec(b, w.k2)
        g11, g22 = A.g1(w1, w1), A.g2(e2, e2)
        _nondegenerate(g11 * g22, A.M1._gnorm2(w1) * A.M2._gnorm2(e2))
        J2e = A.M2.J(e2)
        return (
            -A.g1(A.D1_Jdf(w1), w1) / (f * g11)
            - 2 * A.g1(A.Jdf, w1) ** 2 / (f**2 * g11)
            + A.g2(J2e, J2e) * (f**2 * A.g1(A.dnu, w1)) ** 2 / (4 * g11 * g22)
        )
    if case == "vv":
        w2, e2 = _vec(a, w.k2), _vec(b, w.k2)
        den = A.g2(w2, w2) * A.g2(e2, e2) - A.g2(w2, e2) ** 2
        _nondegenerate(den, A.M2._gnorm2(w2) * A.M2._gnorm2(e2))
        K2 = A.M2.sectional(w2, e2)
        gJ = A.g2(A.M2.J(w2), e2)
        corr = 3 * f**4 * A.norm_dnu() * gJ**2 + 4 * f * A.g1(A.dnu, A.Jdf) * A.g2(w2, e2) * gJ
        return nu**2 * f**2 * K2 - A.norm_Jdf() / f**2 - corr / (4 * den)
    raise ValueError(f"sectional case must be 'hh', 'hv' or 'vv', got {case!r}")


# ---------------------------------------------------------------------------
# Laplacian and qualar curvature

def _check_variant(variant: str) -> None:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")


def laplacian_split(w: WarpedSpec, u1: Expr, u2: Expr, p, variant: str = "published") -> float:
    """Laplacian of ``u1^h + u2^v`` from factor Laplacians.

    ``variant="published"`` pairs ``J1 df`` with ``du1`` in the middle term, as
    stated; ``"corrected"`` pairs it with ``J1 du1``, which is what the
    expansion of the product Laplacian produces.
    """
    _check_variant(variant)
    A = _At(w, p)
    u1 = lift(w, u1, Part.HORIZONTAL)
    u2 = lift(w, u2, Part.VERTICAL)
    L1 = laplacian(w.base, u1, A.p1, A.M1.ev)
    L2 = laplacian(w.fiber, u2, A.p2, A.M2.ev)
    du1 = np.array([A.M1.ev(c) for c in differential(w.base, u1)])
    other = du1 if variant == "published" else A.M1.J(du1)
    weight = w.k2 - 2 * w.q2
    return L1 + weight / A.f * A.g1(A.Jdf, other) + (A.nu * A.f) ** 2 * L2


def _pairs(q: int, k: int):
    return [(i, s) for i in range(q) for s in range(q, k)]


def _qual_sum(G: PointGeometry) -> float:
    rows = G.coframe.rows
    return 2.0 * sum(G.sectional(rows[i], rows[s]) for i, s in _pairs(G.spec.index, G.spec.dim))


def _warn_if_empty(w: WarpedSpec) -> bool:
    q, k = w.q1 + w.q2, w.dim
    if q == 0 or q == k:
        warnings.warn(
            f"{w.name}: index {q} of {k} leaves no timelike/spacelike pairs; returning 0",
            EmptySignatureRangeWarning,
            stacklevel=3,
        )
        return True
    return False


def qualar_closed_form(w: WarpedSpec, p, variant: str = "published") -> float:
    """Qualar curvature of the product from factor data.

    Sums run over the factor orthonormal coframes, timelike first.  The
    ``"published"`` variant squares ``||J1 df||^2`` in the sixth group and
    weights the base pairing sum by ``4 k2``; ``"corrected"`` uses
    ``||J1 df||^2`` and ``4 (k2 - 2 q2)``.  They agree when the fiber is
    Riemannian.
    """
    _check_variant(variant)
    if _warn_if_empty(w):
        return 0.0
    A = _At(w, p)
    f, nu = A.f, A.nu
    q1, k1, q2, k2 = w.q1, w.k1, w.q2, w.k2
    th1 = A.M1.coframe.rows
    th2 = A.M2.coframe.rows
    nJ = A.norm_Jdf()
    fib_pairs = _pairs(q2, k2)

    total = _qual_sum(A.M1)
    total += 2 * f**2 * nu**2 * sum(A.M2.sectional(th2[i], th2[s]) for i, s in fib_pairs)
    total += 1.5 * f**4 * A.norm_dnu() * sum(A.g2(A.M2.J(th2[i]), th2[s]) ** 2 for i, s in fib_pairs)
    lap_f = -float(sum(th @ _hessian_at(A) @ th for th in th1))
    total += -2 * q2 / f * lap_f
    total += 2 * k2 / f * sum(A.hess_prime(th1[i]) for i in range(q1))
    gJ2 = sum(A.g1(A.Jdf, th1[i]) ** 2 for i in range(q1))
    if variant == "published":
        total += -4 * q2 / f**2 * nJ**2 + 4 * k2 / f**2 * gJ2
    else:
        total += -4 * q2 / f**2 * nJ + 4 * (k2 - 2 * q2) / f**2 * gJ2
    J2n = [A.g2(A.M2.J(t), A.M2.J(t)) for t in th2]
    total -= sum(f**4 / 2 * A.g1(A.dnu, th1[i]) ** 2 * J2n[s] for i in range(q1) for s in range(q2, k2))
    total -= 2 * q2 * (k2 - q2) * nJ / f**2
    total -= sum(f**4 / 2 * A.g1(A.dnu, th1[i]) ** 2 * J2n[s] for s in range(q2) for i in range(q1, k1))
    return float(total)


def _hessian_at(A: _At) -> np.ndarray:
    return hessian(A.w.base, A.w.f, A.p1, A.M1.ev)


def qualar_fiber_independent(w: WarpedSpec, p) -> float:
    """Three-term qualar expression for constant ``nu`` and a Riemannian fiber."""
    if _warn_if_empty(w):
        return 0.0
    A = _At(w, p)
    f = A.f
    th1 = A.M1.coframe.rows
    q1, k2 = w.q1, w.k2
    return float(
        _qual_sum(A.M1)
        + 2 * k2 / f * sum(A.hess_prime(th1[i]) for i in range(q1))
        + 4 * k2 / f**2 * sum(A.g1(A.Jdf, th1[i]) ** 2 for i in range(q1))
    )


# displayed example formulas, transcribed as printed

def _planar(spec: ManifoldSpec, what: str):
    if spec.dim != 2:
        raise ValueError(f"{what} needs a 2-dimensional {spec.name}")
    P = spec.bivector[0][1]
    x, y = spec.coords
    d = ex.differentiate
    return P, d(P, x), d(P, y), d(d(P, x), x), d(d(P, y), y)


def qualar_display_h2xe2(w: WarpedSpec, p) -> float:
    """The printed qualar expression for a Lorentzian plane warped with a negative-definite plane.

    Only the bivector component of each factor and ``f`` enter; the metric
    is implicitly ``diag(-1, 1)`` and ``diag(-1, -1)``.
    """
    p1, p2 = split_point(w, p)
    ev1, ev2 = w.base.evaluator(p1), w.fiber.evaluator(p2)
    P, P1, P2, P11, P22 = (ev1(e) for e in _planar(w.base, "the display"))
    Q, Q1, Q2, Q11, Q22 = (ev2(e) for e in _planar(w.fiber, "the display"))
    x1, x2 = w.base.coords
    d = ex.differentiate
    f = ev1(w.f)
    f1, f2 = ev1(d(w.f, x1)), ev1(d(w.f, x2))
    f11, f22 = ev1(d(d(w.f, x1), x1)), ev1(d(d(w.f, x2), x2))
    return (
        2 * (P * (P11 - P22) - P1**2 + P2**2)
        + 2 * f**2 * (Q1**2 + Q2**2 - Q * (Q11 + Q22))
        + 2 * P / f**2 * (5 * f1**2 - f2**2 + f * (f11 - f22))
        - 4 / f**2 * (P**4 * (f11 - f22) ** 2)
    )


def qualar_display_h2xs2(w: WarpedSpec, p) -> float:
    """The printed qualar expression for a Lorentzian plane warped with a round sphere."""
    p1, _ = split_point(w, p)
    ev1 = w.base.evaluator(p1)
    P, P1, P2, P11, P22 = (ev1(e) for e in _planar(w.base, "the display"))
    x1, x2 = w.base.coords
    d = ex.differentiate
    f = ev1(w.f)
    f1, f2 = ev1(d(w.f, x1)), ev1(d(w.f, x2))
    f22 = ev1(d(d(w.f, x2), x2))
    return (
        2 * (P * (P11 - P22) - P1**2 + P2**2)
        - 4 * P / f * (P1 * f1 + P2 * f2 + P * f22)
        + 8 * P**2 / f**2 * f2**2
    )


# ---------------------------------------------------------------------------
# null sectional relations

@dataclass(frozen=True)
class NullRelation:
    case: int
    i: int
    s: int
    l: int
    eta_part: Part
    lhs: float
    rhs: float

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)


# (timelike factor, spacelike factor) of the null form, per case
_NULL_CASES = {1: ("h", "h"), 2: ("h", "v"), 3: ("v", "h"), 4: ("v", "v")}


def _index_ranges(w: WarpedSpec, case: int):
    t, s = _NULL_CASES[case]
    i_rng = range(w.q1) if t == "h" else range(w.q2)
    s_rng = range(w.q1, w.k1) if s == "h" else range(w.q2, w.k2)
    return i_rng, s_rng


def admissible_null_triples(w: WarpedSpec, case: int):
    """All ``(i, s, l, part)`` index choices of one case, 0-based within each factor."""
    if case not in _NULL_CASES:
        raise IndexRangeError(f"null relation case must be 1..4, got {case!r}")
    t, s = _NULL_CASES[case]
    i_rng, s_rng = _index_ranges(w, case)
    out = []
    for i in i_rng:
        for sv in s_rng:
            for part, k in ((Part.HORIZONTAL, w.k1), (Part.VERTICAL, w.k2)):
                for l in range(k):
                    taken = [i] if t == part.value else []
                    taken += [sv] if s == part.value else []
                    if l not in taken:
                        out.append((i, sv, l, part))
    return out


def null_sectional_relations(w: WarpedSpec, p, case: int, i: int, s: int, l: int, part: Part | str):
    """Direct null sectional curvature of a product null plane and its decomposition.

    ``i`` indexes the timelike element and ``s`` the spacelike element of the
    null form, each within its own factor's orthonormal coframe (0-based);
    ``l`` picks ``eta = theta1_l^h`` (``part="h"``) or ``f theta2_l^v``
    (``part="v"``).  Both sides are evaluated on the assembled chart.
    Case 3 is read with the timelike element on the fiber (``f dy_i``) and
    the spacelike one on the base (``dx_s``).
    """
    part = Part(part) if not isinstance(part, Part) else part
    if case not in _NULL_CASES:
        raise IndexRangeError(f"null relation case must be 1..4, got {case!r}")
    if (i, s, l, part) not in admissible_null_triples(w, case):
        i_rng, s_rng = _index_ranges(w, case)
        raise IndexRangeError(
            f"case {case}: need i in {list(i_rng)}, s in {list(s_rng)} and l distinct from them "
            f"in its factor, got i={i}, s={s}, l={l}{part.value}"
        )
    M = at(assemble(w), p)
    p1, p2 = split_point(w, p)
    th1 = at(w.base, p1).coframe
    th2 = at(w.fiber, p2).coframe
    f = M.ev(w.f)

    def elem(factor: str, idx: int):
        if factor == "h":
            return _h(w, th1.rows[idx]), th1.signs[idx], 0
        return f * _v(w, th2.rows[idx]), th2.signs[idx], 1

    t_part, s_part = _NULL_CASES[case]
    a, _, na = elem(t_part, i)
    b, _, nb = elem(s_part, s)
    eta, eps, ne = elem(part.value, l)
    xi = (a + b) / math.sqrt(2.0)
    lhs = M.null_sectional(xi, eta)
    # the f-power multiplying the curvature term counts the vertical slots
    a_raw = a / f if na else a
    b_raw = b / f if nb else b
    eta_raw = eta / f if ne else eta
    weight = f ** (na + nb + 2 * ne)
    rhs = (
        -0.5 * M.sectional(a_raw, eta_raw)
        + 0.5 * M.sectional(b_raw, eta_raw)
        + eps * weight * M.inner(M.R(a_raw, eta_raw, eta_raw), b_raw)
    )
    return NullRelation(case, i, s, l, part, float(lhs), float(rhs))


# ---------------------------------------------------------------------------
# sign statements

@dataclass(frozen=True)
class StatementCheck:
    name: str
    statement: str
    applicable: bool
    notes: tuple[str, ...]
    hypothesis: bool | None = None
    conclusion: bool | None = None
    passed: bool = True


@dataclass(frozen=True)
class SignReport:
    regime: Mapping[str, bool]
    planes: int
    ranges: Mapping[str, tuple[float, float]]
    obstruction: Mapping[str, float]
    checks: tuple[StatementCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _random_plane(rng, M: PointGeometry, k: int, tries: int = 20):
    for _ in range(tries):
        a, b = rng.normal(size=k), rng.normal(size=k)
        try:
            return a, b, M.sectional(a, b)
        except DegeneratePlaneError:
            continue
    return None


def sign_property_check(
    w: WarpedSpec,
    sample_points: Sequence,
    planes: int = 200,
    seed: int = 0,
    tol: float = 1e-9,
) -> SignReport:
    """Empirical check of the sign statements for warped sectional curvature.

    At each sample point random planes of each lifted type (base-base,
    base-fiber, fiber-fiber) are drawn; their curvatures are computed on the
    assembled chart, and factor curvatures on the factors.  Each statement is
    checked only as an implication between sampled signs.
    """
    pts = [np.asarray(q, dtype=float) for q in sample_points]
    if not pts:
        raise ValueError("need at least one sample point")
    rng = np.random.default_rng(seed)
    P = assemble(w)
    k1, k2 = w.k1, w.k2
    base_pts = [split_point(w, q)[0] for q in pts]
    regime = {
        "base_riemannian": w.q1 == 0,
        "fiber_riemannian": w.q2 == 0,
        "f_casimir": is_casimir(w.base, w.f, base_pts, tol=1e-10),
        "nu_constant": all(
            np.max(np.abs([w.base.evaluator(q)(c) for c in w.dnu]), initial=0.0) <= 1e-12 for q in base_pts
        ),
    }
    regime["product_riemannian"] = regime["base_riemannian"] and regime["fiber_riemannian"]

    vals: dict[str, list[float]] = {"hh": [], "hv": [], "vv": [], "K1": [], "K2": []}
    obstruction = {"max_abs_g1_DJdf": 0.0, "max_abs_g1_Jdf": 0.0}
    per_point = max(1, -(-planes // len(pts)))
    for q in pts:
        M = at(P, q)
        p1, p2 = split_point(w, q)
        G1, G2 = at(w.base, p1), at(w.fiber, p2)
        A = _At(w, q)
        for _ in range(per_point):
            if k1 >= 2:
                pl = _random_plane(rng, G1, k1)
                if pl:
                    a, b, K1 = pl
                    vals["K1"].append(K1)
                    vals["hh"].append(M.sectional(_h(w, a), _h(w, b)))
            if k2 >= 2:
                pl = _random_plane(rng, G2, k2)
                if pl:
                    a, b, K2 = pl
                    vals["K2"].append(K2)
                    vals["vv"].append(M.sectional(_v(w, a), _v(w, b)))
            a, b = rng.normal(size=k1), rng.normal(size=k2)
            try:
                vals["hv"].append(M.sectional(_h(w, a), _v(w, b)))
            except DegeneratePlaneError:
                pass
            obstruction["max_abs_g1_DJdf"] = max(obstruction["max_abs_g1_DJdf"], abs(A.hess_prime(a)))
            obstruction["max_abs_g1_Jdf"] = max(obstruction["max_abs_g1_Jdf"], abs(A.g1(A.Jdf, a)))

    def rng_of(key):
        v = vals[key]
        return (float(min(v)), float(max(v))) if v else (math.nan, math.nan)

    ranges = {k: rng_of(k) for k in vals}
    prod = vals["hh"] + vals["hv"] + vals["vv"]

    def all_ge(v, sign):
        return all(sign * x >= -tol for x in v)

    def all_gt(v):
        return bool(v) and all(x > tol for x in v)

    checks = []

    # positive product curvature forces positive factor curvature
    notes = []
    ok = regime["product_riemannian"] and regime["f_casimir"]
    if not regime["product_riemannian"]:
        notes.append("product is not Riemannian")
    if not regime["f_casimir"]:
        notes.append("f is not a Casimir function of the base")
    if ok:
        hyp = all_gt(prod)
        con = all_gt(vals["K1"]) and all_gt(vals["K2"])
        if not hyp:
            notes.append("sampled product curvature is not everywhere positive; implication is vacuous")
        checks.append(StatementCheck(
            "positive_product_positive_factors",
            "Riemannian product, Casimir f: K_M > 0 implies K_M1 > 0 and K_M2 > 0",
            True, tuple(notes), hyp, con, (not hyp) or con,
        ))
    else:
        checks.append(StatementCheck(
            "positive_product_positive_factors",
            "Riemannian product, Casimir f: K_M > 0 implies K_M1 > 0 and K_M2 > 0",
            False, tuple(notes),
        ))

    # sign equivalence with constant nu and Casimir f
    ok = regime["product_riemannian"] and regime["f_casimir"] and regime["nu_constant"]
    notes = [] if ok else ["needs a Riemannian product, Casimir f and constant nu"]
    for label, sign in (("nonnegative", 1), ("nonpositive", -1)):
        if ok:
            hyp = all_ge(prod, sign)
            con = all_ge(vals["K1"], sign) and all_ge(vals["K2"], sign)
            checks.append(StatementCheck(
                f"{label}_iff_factors",
                f"Riemannian product, constant nu, Casimir f: product {label} iff both factors {label}",
                True, (), hyp, con, hyp == con,
            ))
        else:
            checks.append(StatementCheck(
                f"{label}_iff_factors",
                f"Riemannian product, constant nu, Casimir f: product {label} iff both factors {label}",
                False, tuple(notes),
            ))

    # Riemannian base, constant nu
    ok = regime["base_riemannian"] and regime["nu_constant"]
    notes = []
    if ok:
        hyp = all_ge(prod, 1)
        con = all_ge(vals["K1"], 1) and all_ge(vals["K2"], 1) and regime["f_casimir"]
        if not regime["f_casimir"]:
            notes.append(
                "f is not Casimir; base-fiber obstruction terms max|g1(D J1df, w)| = "
                f"{obstruction['max_abs_g1_DJdf']:.6g}, max|g1(J1df, w)| = {obstruction['max_abs_g1_Jdf']:.6g}"
            )
        checks.append(StatementCheck(
            "riemannian_base_nonnegative_iff",
            "Riemannian base, constant nu: product nonnegative iff factors nonnegative and f Casimir",
            True, tuple(notes), hyp, con, hyp == con,
        ))
    else:
        checks.append(StatementCheck(
            "riemannian_base_nonnegative_iff",
            "Riemannian base, constant nu: product nonnegative iff factors nonnegative and f Casimir",
            False, ("needs a Riemannian base and constant nu",),
        ))

    # nonnegatively curved Riemannian base of dimension >= 2
    ok = (
        regime["base_riemannian"] and regime["nu_constant"] and regime["f_casimir"]
        and k1 >= 2 and all_ge(vals["K1"], 1)
    )
    if ok:
        hyp = all_ge(prod, 1)
        con = all_ge(vals["K2"], 1)
        checks.append(StatementCheck(
            "nonnegative_base_fiber_iff",
            "nonnegatively curved Riemannian base, constant nu: product nonnegative iff fiber nonnegative",
            True, ("base curvature sign is sampled, not assumed",), hyp, con, hyp == con,
        ))
    else:
        checks.append(StatementCheck(
            "nonnegative_base_fiber_iff",
            "nonnegatively curved Riemannian base, constant nu: product nonnegative iff fiber nonnegative",
            False, ("needs a Riemannian base of dimension >= 2 with sampled K >= 0, constant nu, Casimir f",),
        ))

    return SignReport(
        MappingProxyType(regime), len(prod), MappingProxyType(ranges),
        MappingProxyType(obstruction), tuple(checks),
    )


# ---------------------------------------------------------------------------
# cross-check harness: closed forms against the assembled chart

SUITES = ("connection", "curvature", "sectional", "laplacian", "qualar", "nullsec")
DEFAULT_TOL = 1e-7
AXIOM_TOL = 1e-9


@dataclass(frozen=True)
class CheckResult:
    suite: str
    case: str
    residual: float
    tol: float
    samples: int

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol


@dataclass(frozen=True)
class CrossCheck:
    results: tuple[CheckResult, ...]
    notes: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


def relative_residual(a, b) -> float:
    """``max|a - b| / max(1, max|b|)``: absolute near zero, relative otherwise."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b), initial=0.0) / max(1.0, float(np.max(np.abs(b), initial=0.0))))


def probe_fields(spec: ManifoldSpec) -> list[Field]:
    """Coordinate forms plus one field with non-constant coefficients."""
    k, c = spec.dim, spec.coords
    basis = [tuple(ex.ONE if i == j else ex.ZERO for i in range(k)) for j in range(k)]
    bent = tuple(spec.parse(f"{j + 1} + 0.5*{c[(j + 1) % k]}^2 - 0.3*{c[j]}") for j in range(k))
    return basis + [bent]


def probe_function(spec: ManifoldSpec, which: int = 0) -> Expr:
    c = spec.coords
    if len(c) == 1:
        return spec.parse(f"{c[0]} + {c[0]}^3")
    trig = "sin" if which == 0 else "cos"
    return spec.parse(f"{c[0]} + {trig}({c[1]})*{c[0]}^2 + 0.5*{c[-1]}*{c[0]}")


def default_points(w: WarpedSpec, n: int, seed: int = 0) -> np.ndarray:
    P = assemble(w)
    if P.box is None:
        raise SpecError(f"{w.name}: base and fiber both need a sampling box")
    return sample_points(P.box, n, seed)


def cross_check(
    w: WarpedSpec,
    points: Sequence,
    suites: Sequence[str] = SUITES,
    variant: str = "published",
    tol: float | None = None,
    seed: int = 0,
) -> CrossCheck:
    """Compare every closed form with the generic pipeline on ``assemble(w)``.

    Residuals are :func:`relative_residual` maxima over the points; each case
    passes at ``tol`` (default 1e-7, 1e-9 for the torsion and compatibility
    axioms).
    """
    _check_variant(variant)
    unknown = set(suites) - set(SUITES)
    if unknown:
        raise ValueError(f"unknown suites {sorted(unknown)}; choose from {SUITES}")
    pts = [np.asarray(q, dtype=float) for q in points]
    if not pts:
        raise ValueError("need at least one point")
    P = assemble(w)
    notes = []
    rep = validate_poisson(P, pts)
    if not rep.passed:
        notes.append(
            f"product bivector fails the Jacobi identity (max residual {rep.residual:.6g}); "
            "results that assume a Poisson product may disagree"
        )
    rng = np.random.default_rng(seed)
    acc: dict[tuple[str, str], list] = {}

    def record(suite, case, a, b, case_tol=None):
        key = (suite, case)
        slot = acc.setdefault(key, [0.0, 0, case_tol])
        slot[0] = max(slot[0], relative_residual(a, b))
        slot[1] += 1

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EmptySignatureRangeWarning)
        for name in SUITES:
            if name in suites:
                _SUITE_RUNNERS[name](w, P, pts, rng, variant, record)
    if (w.q1 + w.q2) in (0, w.dim) and "qualar" in suites:
        notes.append("product index leaves no timelike/spacelike pairs; qualar sums are empty")
    results = tuple(
        CheckResult(s, c, r, tol if tol is not None else (t or DEFAULT_TOL), n)
        for (s, c), (r, n, t) in acc.items()
    )
    return CrossCheck(results, tuple(notes))


def _suite_connection(w, P, pts, rng, variant, record):
    F1, F2 = probe_fields(w.base), probe_fields(w.fiber)
    pairs = []
    for o in F1:
        for g in F1:
            pairs.append(("D(h,h)", 1, _hf(w, o), _hf(w, g), o, g))
    for o in F2:
        for g in F2:
            pairs.append(("D(v,v)", 2, _vf(w, o), _vf(w, g), o, g))
    for o in F1:
        for g in F2:
            pairs.append(("D(h,v)", 3, _hf(w, o), _vf(w, g), o, g))
            pairs.append(("D(v,h)", 3, _vf(w, g), _hf(w, o), o, g))
    built = [
        (case, contravariant_derivative(P, O, G), connection_closed_form(w, n, o, g))
        for case, n, O, G, o, g in pairs
    ]
    for q in pts:
        ev = P.evaluator(q)
        for case, direct, closed in built:
            record("connection", case, field_at(P, direct, q, ev), field_at(P, closed, q, ev))
        record("connection", "torsion", torsion_residual(P, q), 0.0, AXIOM_TOL)
        a, b, c = rng.normal(size=(3, P.dim))
        record("connection", "compatibility", compatibility_residual(P, q, a, b, c), 0.0, AXIOM_TOL)


def _suite_curvature(w, P, pts, rng, variant, record):
    E1, E2 = np.eye(w.k1), np.eye(w.k2)
    for q in pts:
        M = at(P, q)
        h = lambda a: _h(w, a)
        v = lambda a: _v(w, a)
        r1, r2 = rng.normal(size=(3, w.k1)), rng.normal(size=(3, w.k2))
        for a in E1:
            for b in E1:
                for c in E1:
                    record("curvature", "R(h,h)h", M.R(h(a), h(b), h(c)),
                           curvature_closed_form(w, q, 1, a, b, c, np.zeros(w.k2)))
                for d in E2:
                    record("curvature", "R(h,h)v", M.R(h(a), h(b), v(d)),
                           curvature_closed_form(w, q, 1, a, b, np.zeros(w.k1), d))
        for a in E1:
            for b in E2:
                for c in E1:
                    record("curvature", "R(h,v)h", M.R(h(a), v(b), h(c)), curvature_closed_form(w, q, 2, a, b, c))
                for c in E2:
                    record("curvature", "R(h,v)v", M.R(h(a), v(b), v(c)), curvature_closed_form(w, q, 3, a, b, c))
        for a in E2:
            for b in E2:
                for c in E1:
                    record("curvature", "R(v,v)h", M.R(v(a), v(b), h(c)), curvature_closed_form(w, q, 4, a, b, c))
                for c in E2:
                    record("curvature", "R(v,v)v", M.R(v(a), v(b), v(c)), curvature_closed_form(w, q, 5, a, b, c))
        record("curvature", "R(h,h)(h+v)", M.R(h(r1[0]), h(r1[1]), h(r1[2]) + v(r2[0])),
               curvature_closed_form(w, q, 1, r1[0], r1[1], r1[2], r2[0]))


def _suite_sectional(w, P, pts, rng, variant, record):
    for q in pts:
        M = at(P, q)
        for case, ka, kb, la, lb in (
            ("hh", w.k1, w.k1, _h, _h), ("hv", w.k1, w.k2, _h, _v), ("vv", w.k2, w.k2, _v, _v),
        ):
            if case != "hv" and ka < 2:
                continue
            for _ in range(3):
                a, b = rng.normal(size=ka), rng.normal(size=kb)
                try:
                    direct = M.sectional(la(w, a), lb(w, b))
                except DegeneratePlaneError:
                    continue
                record("sectional", case, direct, sectional_closed_form(w, q, case, a, b))


def _suite_laplacian(w, P, pts, rng, variant, record):
    u1, u2 = probe_function(w.base, 0), probe_function(w.fiber, 1)
    u = ex.add(u1, u2)
    for q in pts:
        record("laplacian", f"split[{variant}]", laplacian(P, u, q), laplacian_split(w, u1, u2, q, variant))


def _suite_qualar(w, P, pts, rng, variant, record):
    fiber_free = w.q2 == 0 and all(c is ex.ZERO for c in w.dnu)
    for q in pts:
        M = at(P, q)
        direct = M.qualar()
        record("qualar", "null_forms", M.qualar_via_null_forms(), direct)
        record("qualar", f"closed_form[{variant}]", qualar_closed_form(w, q, variant), direct)
        if fiber_free:
            record("qualar", "fiber_independent", qualar_fiber_independent(w, q), direct)


def _suite_nullsec(w, P, pts, rng, variant, record):
    for case in sorted(_NULL_CASES):
        triples = admissible_null_triples(w, case)
        for q in pts:
            for t in triples:
                r = null_sectional_relations(w, q, case, *t)
                record("nullsec", f"case{case}", r.lhs, r.rhs)


_SUITE_RUNNERS = {
    "connection": _suite_connection,
    "curvature": _suite_curvature,
    "sectional": _suite_sectional,
    "laplacian": _suite_laplacian,
    "qualar": _suite_qualar,
    "nullsec": _suite_nullsec,
}
