import numpy as np
import pytest
from hypothesis import given, strategies as st

from pwarp import ManifoldSpec, expr as ex
from pwarp.errors import SignatureError, SingularCometricError, SpecError
from pwarp.manifold import (
    CausalType, bivector_at, causal_type, check_signature, cometric_at, derivation,
    field_anchor, field_at, field_j, field_poisson, is_casimir, j_endomorphism,
    koszul_bracket, metric_at, sample_points, signature_at, validate_poisson,
)

from conftest import SPECS, load_manifold, planar

SPEC_FILES = sorted(p.name for p in SPECS.glob("*.spec"))


@pytest.fixture(scope="module")
def specs():
    return {n: load_manifold(SPECS / n) for n in SPEC_FILES}


def bent_field(spec, shift):
    c = spec.coords
    k = spec.dim
    return tuple(spec.parse(f"{shift + j} + 0.4*{c[(j + 1) % k]}^2 - 0.2*{c[j]}*{c[0]}") for j in range(k))


# construction

def test_missing_diagonal_is_an_error():
    with pytest.raises(SpecError, match="g22"):
        ManifoldSpec.build("m", ["x", "y"], 0, {(0, 0): "1"})


@pytest.mark.parametrize("key", [(1, 0), (0, 0)])
def test_bivector_accepts_upper_triangle_only(key):
    with pytest.raises(SpecError):
        ManifoldSpec.build("m", ["x", "y"], 0, {(0, 0): "1", (1, 1): "1"}, {key: "x"})


@pytest.mark.parametrize("kwargs,msg", [
    (dict(coords=["x", "x"]), "duplicate"),
    (dict(index=3), "index"),
    (dict(box=[(0, 1)]), "box"),
    (dict(box=[(0, 1), (2, 2)]), "empty"),
])
def test_bad_builds(kwargs, msg):
    args = dict(name="m", coords=["x", "y"], index=0, cometric={(0, 0): "1", (1, 1): "1"})
    args.update(kwargs)
    with pytest.raises(SpecError, match=msg):
        ManifoldSpec.build(**args)


def test_bivector_is_antisymmetric_by_construction(specs):
    for spec in specs.values():
        for i in range(spec.dim):
            assert spec.bivector[i][i] is ex.ZERO
            for j in range(spec.dim):
                if spec.bivector[i][j] is not ex.ZERO:
                    assert spec.bivector[j][i] is ex.neg(spec.bivector[i][j])


# pointwise linear algebra

def test_metric_inverts_cometric(specs):
    for spec in specs.values():
        for p in sample_points(spec.box, 20, 1):
            G = cometric_at(spec, p)
            assert np.allclose(metric_at(spec, p) @ G, np.eye(spec.dim), atol=1e-10)


def test_symbolic_metric_matches_numeric_inverse():
    spec = ManifoldSpec.build(
        "m", ["x", "y", "z"], 1,
        {(0, 0): "-1 - x^2", (0, 1): "0.3*y", (1, 1): "2 + sin(z)", (1, 2): "0.1", (2, 2): "1 + y^2"},
    )
    for p in sample_points([(-1, 1)] * 3, 10, 2):
        ev = spec.evaluator(p)
        sym = np.array([[ev(e) for e in row] for row in spec.metric])
        assert np.allclose(sym, metric_at(spec, p), atol=1e-12)


def test_signature_counts_match_declared_index(specs):
    for spec in specs.values():
        for p in sample_points(spec.box, 20, 3):
            assert signature_at(spec, p)[0] == spec.index
            check_signature(spec, p)


def test_signature_flip_is_reported():
    spec = planar("flip", ["x", "y"], 0, ("x", "1"), "1")
    check_signature(spec, [0.5, 0.0])
    with pytest.raises(SignatureError):
        check_signature(spec, [-0.5, 0.0])


def test_singular_cometric_is_reported():
    spec = planar("sing", ["x", "y"], 0, ("x", "1"), "1")
    with pytest.raises(SingularCometricError):
        metric_at(spec, [0.0, 0.3])


def test_causal_types(h2):
    p = [1.0, 0.0]
    assert causal_type(h2, p, [1, 0]) is CausalType.TIMELIKE
    assert causal_type(h2, p, [0, 1]) is CausalType.SPACELIKE
    assert causal_type(h2, p, [1, 1]) is CausalType.LIGHTLIKE
    with pytest.raises(ValueError):
        causal_type(h2, p, [1, 0], tol=0)


def test_j_is_skew_for_the_cometric(specs, rng):
    for spec in specs.values():
        p = sample_points(spec.box, 1, 4)[0]
        G = cometric_at(spec, p)
        a, b = rng.normal(size=(2, spec.dim))
        Ja, Jb = j_endomorphism(spec, p, a), j_endomorphism(spec, p, b)
        Pab = a @ bivector_at(spec, p) @ b
        # Pi(a, b) = g~(Ja, b) and J is g~-skew
        assert Ja @ G @ b == pytest.approx(Pab, abs=1e-10)
        assert Ja @ G @ b == pytest.approx(-(a @ G @ Jb), abs=1e-10)


# Poisson structure

def test_two_dimensional_specs_are_poisson(specs):
    for name, spec in specs.items():
        pts = sample_points(spec.box, 50, 0)
        rep = validate_poisson(spec, pts)
        if spec.dim == 2 or name == "so3.spec":
            assert rep.passed, name


def test_non_jacobi_residual_is_exactly_one(specs):
    rep = validate_poisson(specs["nonjacobi3.spec"], sample_points(specs["nonjacobi3.spec"].box, 50, 0))
    assert not rep.passed
    assert rep.residual == pytest.approx(1.0, abs=1e-12)
    assert rep.triple == (0, 1, 2)


def test_casimir(specs):
    so3 = specs["so3.spec"]
    pts = sample_points(so3.box, 20, 5)
    assert is_casimir(so3, so3.parse("1 + a1^2 + a2^2 + a3^2"), pts)
    assert not is_casimir(so3, so3.parse("a1"), pts)


def test_koszul_bracket_of_coordinate_forms_is_d_pi(specs):
    for spec in specs.values():
        p = sample_points(spec.box, 1, 6)[0]
        ev = spec.evaluator(p)
        E = [tuple(ex.ONE if i == j else ex.ZERO for i in range(spec.dim)) for j in range(spec.dim)]
        for i in range(spec.dim):
            for j in range(spec.dim):
                br = field_at(spec, koszul_bracket(spec, E[i], E[j]), p, ev)
                dP = [ev(ex.differentiate(spec.bivector[i][j], x)) for x in spec.coords]
                assert np.allclose(br, dP, atol=1e-12)


def _lie(spec, X, Y):
    return tuple(
        ex.sub(derivation(spec, X, Y[l]), derivation(spec, Y, X[l])) for l in range(spec.dim)
    )


@pytest.mark.parametrize("name", [n for n in SPEC_FILES])
def test_anchor_is_a_bracket_morphism(specs, name):
    spec = specs[name]
    w, e = bent_field(spec, 1), bent_field(spec, 2)
    lhs = field_anchor(spec, koszul_bracket(spec, w, e))
    rhs = _lie(spec, field_anchor(spec, w), field_anchor(spec, e))
    worst = 0.0
    for p in sample_points(spec.box, 10, 7):
        ev = spec.evaluator(p)
        worst = max(worst, float(np.max(np.abs(field_at(spec, lhs, p, ev) - field_at(spec, rhs, p, ev)))))
    if validate_poisson(spec, sample_points(spec.box, 10, 7)).passed:
        assert worst <= 1e-9
    else:
        assert worst > 1e-3  # the morphism property needs the Jacobi identity


@given(st.integers(0, 10_000))
def test_koszul_bracket_is_antisymmetric(seed):
    rng = np.random.default_rng(seed)
    spec = load_manifold(SPECS / "so3.spec")
    a, b = bent_field(spec, rng.integers(1, 5)), bent_field(spec, rng.integers(5, 9))
    p = rng.uniform(-1, 1, size=3)
    ev = spec.evaluator(p)
    ab = field_at(spec, koszul_bracket(spec, a, b), p, ev)
    ba = field_at(spec, koszul_bracket(spec, b, a), p, ev)
    assert np.allclose(ab, -ba, atol=1e-12)


def test_field_poisson_and_j_agree(specs):
    spec = specs["S2_0.spec"]
    a, b = bent_field(spec, 1), bent_field(spec, 3)
    p = [1.2, 0.4]
    ev = spec.evaluator(p)
    Ja = field_at(spec, field_j(spec, a), p, ev)
    assert ev(field_poisson(spec, a, b)) == pytest.approx(Ja @ cometric_at(spec, p) @ field_at(spec, b, p, ev))


def test_sample_points_are_reproducible_and_inside():
    box = [(0.5, 2.0), (-1.0, 1.0), (3.0, 4.0)]
    a = sample_points(box, 40, 9)
    assert np.array_equal(a, sample_points(box, 40, 9))
    assert not np.array_equal(a, sample_points(box, 40, 10))
    lo, hi = np.array(box).T
    assert np.all((a >= lo) & (a <= hi))
    with pytest.raises(ValueError):
        sample_points(box, 0)
