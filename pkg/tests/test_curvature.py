import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pwarp import curvature as cv, expr as ex
from pwarp.errors import (
    DegenerateDirectionError, DegeneratePlaneError, EmptySignatureRangeWarning, NotNullError,
)
from pwarp.manifold import sample_points

import golden
from conftest import SPECS, cubic, load_manifold, planar


@pytest.fixture(scope="module")
def specs():
    return {p.name: load_manifold(p) for p in sorted(SPECS.glob("*.spec"))}


POISSON = ["H2_1.spec", "E2_2.spec", "S2_0.spec", "E2_0.spec", "so3.spec", "H2_1_fiber.spec"]


def _pi(spec, ev):
    P = spec.bivector[0][1]
    a, b = spec.coords
    d = ex.differentiate
    return tuple(ev(e) for e in (P, d(P, a), d(P, b), d(d(P, a), a), d(d(P, b), b)))


# constant-curvature examples

@pytest.mark.parametrize("c", [0.5, 1.0, 2.0])
def test_linear_bivector_planes(c):
    H = planar("H", ["x1", "x2"], 1, ("-1", "1"), "c*x1", {"c": c})
    E = planar("E", ["y1", "y2"], 2, ("-1", "-1"), "c*y1", {"c": c})
    for p in sample_points([(0.3, 3.0), (-2, 2)], 20, 1):
        assert cv.sectional(H, p, [1, 0], [0, 1]) == pytest.approx(-c * c, abs=1e-9)
        assert cv.sectional(E, p, [1, 0], [0, 1]) == pytest.approx(c * c, abs=1e-9)


def test_shipped_constant_curvatures(specs):
    for p in sample_points([(-1, 1)] * 2, 10, 3):
        assert cv.sectional(specs["E2_0.spec"], p, [1, 0], [0, 1]) == pytest.approx(4.0, rel=1e-12)
    rng = np.random.default_rng(0)
    for p in sample_points([(-1, 1)] * 3, 10, 3):
        a, b = rng.normal(size=(2, 3))
        assert cv.sectional(specs["so3.spec"], p, a, b) == pytest.approx(0.25, rel=1e-12)


def test_h2_scalars(specs):
    M = cv.at(specs["H2_1.spec"], [1.5, 0.2])
    assert M.sectional([1, 0], [0, 1]) == pytest.approx(-4.0)
    assert M.qualar() == pytest.approx(-8.0)
    assert M.qualar_via_null_forms() == pytest.approx(-8.0)
    assert M.scalar_curvature() == pytest.approx(8.0)


# planar displays

@pytest.mark.parametrize("kind", ["H", "E", "S"])
def test_planar_displays(kind, rng):
    setup = {
        "H": (["x1", "x2"], 1, ("-1", "1"), lambda pi, p: golden.sectional_h2(pi)),
        "E": (["y1", "y2"], 2, ("-1", "-1"), lambda pi, p: golden.sectional_e2(pi)),
        "S": (["th", "ph"], 0, ("1", "1/sin(th)^2"), lambda pi, p: golden.sectional_s2(pi, p[0])),
    }
    coords, index, g, ref = setup[kind]
    for _ in range(3):
        spec = planar(kind, coords, index, g, cubic(rng, *coords))
        for p in sample_points([(0.4, 1.4), (-1, 1)], 10, int(rng.integers(1000))):
            M = cv.at(spec, p)
            want = ref(_pi(spec, M.ev), p)
            assert M.sectional([1, 0], [0, 1]) == pytest.approx(want, rel=1e-8, abs=1e-8)


def test_sphere_display_as_printed_disagrees(rng):
    spec = planar("S", ["th", "ph"], 0, ("1", "1/sin(th)^2"), "1 + 0.5*cos(th)*ph + 0.2*ph^2")
    p = [1.1, 0.3]
    M = cv.at(spec, p)
    pi = _pi(spec, M.ev)
    direct = M.sectional([1, 0], [0, 1])
    assert abs(direct - golden.sectional_s2_printed(pi, p[0])) > 1e-2
    assert direct == pytest.approx(golden.sectional_s2(pi, p[0]), rel=1e-12)


# algebraic properties

def _lowered(M):
    return np.einsum("ijkm,mn->ijkn", M.curvature, M.cometric)


@pytest.mark.parametrize("name", POISSON + ["nonjacobi3.spec"])
def test_curvature_symmetries(specs, name):
    spec = specs[name]
    for p in sample_points(spec.box, 5, 8):
        M = cv.at(spec, p)
        R = M.curvature
        assert np.allclose(R, -R.transpose(1, 0, 2, 3), atol=1e-12)
        L = _lowered(M)
        assert np.allclose(L, -L.transpose(0, 1, 3, 2), atol=1e-10)  # metric compatibility
        bianchi = R + R.transpose(1, 2, 0, 3) + R.transpose(2, 0, 1, 3)
        pair = L - L.transpose(2, 3, 0, 1)
        if name == "nonjacobi3.spec":
            continue
        assert np.max(np.abs(bianchi)) <= 1e-10
        assert np.max(np.abs(pair)) <= 1e-10


def test_symmetries_need_jacobi():
    # a product with non-constant coupling is not Poisson and loses both identities
    from pwarp.cli import load_warped
    from pwarp.manifold import validate_poisson
    from pwarp.warped import assemble
    spec = assemble(load_warped(SPECS / "h2xs2_generic.warp"))
    p = [1.5, 0.2, 1.1, 0.3]
    assert not validate_poisson(spec, [p]).passed
    M = cv.at(spec, p)
    R, L = M.curvature, _lowered(M)
    assert np.max(np.abs(R + R.transpose(1, 2, 0, 3) + R.transpose(2, 0, 1, 3))) > 1e-2
    assert np.max(np.abs(L - L.transpose(2, 3, 0, 1))) > 1e-2


@pytest.mark.parametrize("name", POISSON)
def test_symbolic_curvature_matches_numeric(specs, name):
    spec = specs[name]
    table = cv.curvature_exprs(spec)
    p = sample_points(spec.box, 1, 4)[0]
    M = cv.at(spec, p)
    sym = np.array([[[[M.ev(e) for e in a] for a in b] for b in c] for c in table])
    assert np.allclose(sym, M.curvature, atol=1e-11)


@given(st.integers(0, 2**31), st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
def test_sectional_depends_only_on_the_plane(seed, a, b, c, d):
    spec = load_manifold(SPECS / "so3.spec")
    rng = np.random.default_rng(seed)
    p = rng.uniform(-1, 1, 3)
    M = cv.at(spec, p)
    w, e = rng.normal(size=(2, 3))
    if abs(a * d - b * c) < 1e-2:
        return
    K = M.sectional(w, e)
    assert M.sectional(a * w + b * e, c * w + d * e) == pytest.approx(K, rel=1e-7, abs=1e-9)


@given(st.integers(0, 2**31))
def test_ricci_is_symmetric(seed):
    spec = load_manifold(SPECS / "H2_1_fiber.spec")
    rng = np.random.default_rng(seed)
    p = rng.uniform([0.5, -1], [2, 1])
    M = cv.at(spec, p)
    a, b = rng.normal(size=(2, 2))
    assert M.ricci(a, b) == pytest.approx(M.ricci(b, a), rel=1e-9, abs=1e-9)


def test_scalar_is_coframe_trace_of_ricci(specs):
    M = cv.at(specs["so3.spec"], [0.3, 0.2, -0.6])
    assert M.scalar_curvature() == pytest.approx(sum(M.ricci(t, t) for t in M.coframe.rows))


# coframes and null forms

@pytest.mark.parametrize("name", POISSON)
def test_coframe_is_orthonormal_timelike_first(specs, name):
    spec = specs[name]
    for p in sample_points(spec.box, 5, 2):
        fr = cv.orthonormal_coframe(spec, p)
        gram = fr.rows @ cv.at(spec, p).cometric @ fr.rows.T
        assert np.allclose(gram, np.diag(fr.signs), atol=1e-12)
        assert list(fr.signs) == sorted(fr.signs)
        assert sum(1 for s in fr.signs if s < 0) == spec.index


def test_coframe_on_a_non_diagonal_cometric():
    from pwarp import ManifoldSpec
    spec = ManifoldSpec.build("m", ["x", "y", "z"], 1, {
        (0, 0): "0.5", (0, 1): "1.2", (1, 1): "0.3", (2, 2): "2", (1, 2): "0.1",
    })
    fr = cv.orthonormal_coframe(spec, [0, 0, 0])
    G = cv.at(spec, [0, 0, 0]).cometric
    assert np.allclose(fr.rows @ G @ fr.rows.T, np.diag(fr.signs), atol=1e-12)
    assert fr.signs == (-1, 1, 1)


def test_null_forms(specs):
    spec = specs["H2_1_fiber.spec"]
    M = cv.at(spec, [1.2, 0.3])
    (n,) = M.null_forms()
    assert M.inner(n.xi, n.xi) == pytest.approx(0, abs=1e-14)
    assert M.inner(n.xibar, n.xibar) == pytest.approx(0, abs=1e-14)
    assert M.inner(n.xi, n.xibar) == pytest.approx(1.0)


def test_null_sectional_errors(specs):
    M = cv.at(specs["H2_1.spec"], [1.0, 0.1])
    xi = np.array([1.0, 1.0]) / np.sqrt(2)
    with pytest.raises(NotNullError):
        M.null_sectional([1.0, 0.0], [0.0, 1.0])
    with pytest.raises(DegenerateDirectionError):
        M.null_sectional(xi, [1.0, -1.0])  # theta null
    with pytest.raises(DegenerateDirectionError):
        M.null_sectional(xi, 2 * xi + [1e-15, 0])


def test_null_sectional_on_a_four_dimensional_product(specs):
    from pwarp.cli import load_warped
    from pwarp.warped import assemble
    spec = assemble(load_warped(SPECS / "h2xh2.warp"))
    M = cv.at(spec, [1.1, 0.2, 1.3, -0.4])
    for n in M.null_forms():
        for l in range(4):
            if l not in (n.i, n.s):
                val = M.null_sectional(n.xi, M.coframe.rows[l])
                assert np.isfinite(val)


def test_degenerate_planes(specs):
    M = cv.at(specs["H2_1.spec"], [1.0, 0.1])
    with pytest.raises(DegeneratePlaneError):
        M.sectional([1, 0], [1, 0])
    # a lightlike plane in three dimensions
    N = cv.at(specs["nonjacobi3.spec"], [0.1, 0.2, 0.3])
    with pytest.raises(DegeneratePlaneError):
        N.sectional([1, 1, 0], [0, 0, 1])
