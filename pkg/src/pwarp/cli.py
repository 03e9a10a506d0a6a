"""Command line front end and the spec-file loader.

Manifold files::

    # hyperbolic plane with a linear bivector
    [manifold]
    name = H2_1
    dim = 2
    index = 1
    coords = x1, x2
    box = 0.5:2.5, -1:1

    [cometric]
    g11 = "-1"
    g22 = "1"

    [bivector]
    p12 = "c*x1"

    [params]
    c = 2

Cometric keys are ``g<i><j>`` with ``i <= j`` and bivector keys ``p<i><j>``
with ``i < j`` (1-based; write ``g1_10`` when an index has two digits).
Warped files have one ``[warped]`` section with ``base`` and ``fiber`` paths
(relative to the file), ``f`` and ``nu``, plus an optional ``name``.
"""

from __future__ import annotations

import argparse
import math
import re
import sys
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import curvature as cv
from . import expr as ex
from .connection import christoffel_exprs, laplacian
from .errors import (
    CoframeConstructionError, DegenerateDirectionError, DegeneratePlaneError, DomainError,
    EmptySignatureRangeWarning, ExprError, IndexRangeError, NonFiniteError, NotNullError,
    SignatureError, SingularCometricError, SpecError,
)
from .manifold import ManifoldSpec, check_signature, sample_points, validate_poisson
from .warped import (
    SUITES, WarpedSpec, admissible_null_triples, assemble, cross_check, null_sectional_relations,
    qualar_closed_form, qualar_display_h2xe2, qualar_display_h2xs2,
)

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_DOMAIN, EXIT_DEGENERATE = 0, 1, 2, 3, 4


# ---------------------------------------------------------------------------
# file format

@dataclass
class _Entry:
    value: str
    line: int
    quoted: bool


@dataclass
class _Parsed:
    path: str
    sections: dict[str, dict[str, _Entry]] = field(default_factory=dict)
    headers: dict[str, int] = field(default_factory=dict)


_SECTION = re.compile(r"^\[([A-Za-z_]+)\]$")
_KEYVAL = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*)$")


def _strip_comment(s: str) -> str:
    out, quote = [], None
    for ch in s:
        if quote:
            out.append(ch)
            if ch == quote:
                quote = None
        elif ch in "\"'":
            quote = ch
            out.append(ch)
        elif ch == "#":
            break
        else:
            out.append(ch)
    return "".join(out).strip()


def _read_sections(path: str, allowed: dict[str, bool]) -> _Parsed:
    """Split a file into sections of ``key = value`` entries.

    ``allowed`` maps section names to whether their keys are free-form.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecError(f"cannot read file: {exc.strerror}", path=path) from None
    except UnicodeDecodeError:
        raise SpecError("file is not UTF-8", path=path) from None
    out = _Parsed(path)
    current = None
    for n, raw in enumerate(text.splitlines(), 1):
        s = _strip_comment(raw)
        if not s:
            continue
        m = _SECTION.match(s)
        if m:
            current = m.group(1).lower()
            if current not in allowed:
                raise SpecError(f"unknown section [{current}]", n, path)
            if current in out.sections:
                raise SpecError(f"section [{current}] appears twice", n, path)
            out.sections[current] = {}
            out.headers[current] = n
            continue
        m = _KEYVAL.match(s)
        if not m:
            raise SpecError(f"expected '[section]' or 'key = value', got {s!r}", n, path)
        if current is None:
            raise SpecError("entry before any [section] header", n, path)
        key, val = m.group(1), m.group(2).strip()
        quoted = len(val) >= 2 and val[0] == val[-1] and val[0] in "\"'"
        if quoted:
            val = val[1:-1]
        elif val[:1] in ("\"", "'"):
            raise SpecError(f"unterminated string for {key}", n, path)
        if not val:
            raise SpecError(f"empty value for {key}", n, path)
        if key in out.sections[current]:
            raise SpecError(f"duplicate key {key} in [{current}]", n, path)
        out.sections[current][key] = _Entry(val, n, quoted)
    return out


def _index_key(key: str, prefix: str, k: int, line: int, path: str) -> tuple[int, int]:
    body = key[len(prefix):]
    if "_" in body:
        a, _, b = body.partition("_")
    elif len(body) == 2:
        a, b = body[0], body[1]
    else:
        raise SpecError(f"cannot read indices from {key!r}; use {prefix}<i><j> or {prefix}<i>_<j>", line, path)
    if not (a.isdigit() and b.isdigit()):
        raise SpecError(f"cannot read indices from {key!r}", line, path)
    i, j = int(a), int(b)
    if not (1 <= i <= k and 1 <= j <= k):
        raise SpecError(f"{key}: indices must lie in 1..{k}", line, path)
    return i - 1, j - 1


def _number(e: _Entry, what: str, path: str) -> float:
    try:
        v = float(e.value)
    except ValueError:
        raise SpecError(f"{what} must be a number, got {e.value!r}", e.line, path) from None
    if not math.isfinite(v):
        raise SpecError(f"{what} must be finite", e.line, path)
    return v


def _expression(e: _Entry, coords, params, what: str, path: str) -> ex.Expr:
    try:
        return ex.parse(e.value, coords, params)
    except ExprError as exc:
        raise SpecError(f"{what}: {exc}", e.line, path) from None


def load_manifold(path: str | Path) -> ManifoldSpec:
    """Read a manifold spec file; errors carry the file and line."""
    path = str(path)
    doc = _read_sections(path, {"manifold": False, "cometric": False, "bivector": False, "params": True})
    head = doc.sections.get("manifold")
    if head is None:
        raise SpecError("missing [manifold] section", path=path)
    hl = doc.headers["manifold"]
    for k in head:
        if k not in ("name", "dim", "index", "coords", "box"):
            raise SpecError(f"unknown key {k!r} in [manifold]", head[k].line, path)
    for k in ("name", "dim", "index", "coords"):
        if k not in head:
            raise SpecError(f"[manifold] needs {k}", hl, path)
    coords = tuple(c.strip() for c in head["coords"].value.split(","))
    for c in coords:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", c):
            raise SpecError(f"bad coordinate name {c!r}", head["coords"].line, path)
    dim = head["dim"]
    if not dim.value.isdigit() or int(dim.value) != len(coords):
        raise SpecError(f"dim = {dim.value} but {len(coords)} coordinates are listed", dim.line, path)
    idx = head["index"]
    if not idx.value.isdigit():
        raise SpecError(f"index must be a non-negative integer, got {idx.value!r}", idx.line, path)
    box = None
    if "box" in head:
        b = head["box"]
        box = []
        for part in b.value.split(","):
            lo, sep, hi = part.partition(":")
            try:
                if not sep:
                    raise ValueError
                box.append((float(lo), float(hi)))
            except ValueError:
                raise SpecError(f"box intervals are lo:hi, got {part.strip()!r}", b.line, path) from None

    params = {}
    for k, e in doc.sections.get("params", {}).items():
        if k in coords:
            raise SpecError(f"parameter {k} shadows a coordinate", e.line, path)
        params[k] = _number(e, f"parameter {k}", path)
    pnames = tuple(params)

    k = len(coords)
    g = {}
    for key, e in doc.sections.get("cometric", {}).items():
        if not key.startswith("g"):
            raise SpecError(f"cometric keys are g<i><j>, got {key!r}", e.line, path)
        i, j = _index_key(key, "g", k, e.line, path)
        if i > j:
            raise SpecError(f"{key}: only entries with i <= j are accepted (write g{j + 1}{i + 1})", e.line, path)
        g[(i, j)] = _expression(e, coords, pnames, key, path)
    for i in range(k):
        if (i, i) not in g:
            line = doc.headers.get("cometric", hl)
            raise SpecError(f"missing diagonal cometric entry g{i + 1}{i + 1}", line, path)
    P = {}
    for key, e in doc.sections.get("bivector", {}).items():
        if not key.startswith("p"):
            raise SpecError(f"bivector keys are p<i><j>, got {key!r}", e.line, path)
        i, j = _index_key(key, "p", k, e.line, path)
        if i >= j:
            raise SpecError(
                f"{key}: only entries with i < j are accepted; the rest follows by antisymmetry", e.line, path
            )
        P[(i, j)] = _expression(e, coords, pnames, key, path)
    try:
        return ManifoldSpec.build(head["name"].value, coords, int(idx.value), g, P, params, box)
    except SpecError as exc:
        raise SpecError(str(exc), hl, path) from None


def load_warped(path: str | Path, check_points: int = 50, seed: int = 0) -> WarpedSpec:
    """Read a warped file and the factor files it names."""
    path = str(path)
    doc = _read_sections(path, {"warped": False})
    sec = doc.sections.get("warped")
    if sec is None:
        raise SpecError("missing [warped] section", path=path)
    hl = doc.headers["warped"]
    for k in sec:
        if k not in ("name", "base", "fiber", "f", "nu"):
            raise SpecError(f"unknown key {k!r} in [warped]", sec[k].line, path)
    for k in ("base", "fiber", "f"):
        if k not in sec:
            raise SpecError(f"[warped] needs {k}", hl, path)
    here = Path(path).parent
    base = load_manifold(here / sec["base"].value)
    fiber = load_manifold(here / sec["fiber"].value)
    parsed = {}
    for k in ("f", "nu"):
        if k in sec:
            parsed[k] = _expression(sec[k], base.coords, tuple(base.params), k, path)
    try:
        return WarpedSpec.build(
            base, fiber, parsed["f"], parsed.get("nu", 1.0),
            name=sec["name"].value if "name" in sec else None,
            check_points=check_points, seed=seed,
        )
    except SpecError as exc:
        line = sec["f"].line if "warping function" in str(exc) else hl
        raise type(exc)(str(exc), line, path) from None


def load(path: str | Path):
    """A :class:`ManifoldSpec` or :class:`WarpedSpec`, by the file's first section."""
    text = _read_sections(str(path), {"manifold": False, "cometric": False, "bivector": False,
                                      "params": True, "warped": False})
    if "warped" in text.sections:
        return load_warped(path)
    return load_manifold(path)


# ---------------------------------------------------------------------------
# reports

class Report:
    """Human lines plus ordered ``key=value`` pairs for ``--json``."""

    def __init__(self, command: str):
        self.command = command
        self.lines: list[str] = []
        self.pairs: list[tuple[str, str]] = []
        self.ok = True

    def kv(self, key: str, value) -> None:
        self.pairs.append((key, _fmt(value)))

    def say(self, text: str = "") -> None:
        self.lines.append(text)

    def both(self, key: str, label: str, value) -> None:
        self.kv(key, value)
        self.say(f"{label} = {_fmt(value)}")

    def check(self, key: str, passed: bool, residual: float | None = None, tol: float | None = None) -> None:
        self.ok = self.ok and passed
        self.kv(f"{key}.passed", passed)
        extra = ""
        if residual is not None:
            self.kv(f"{key}.residual", residual)
            extra = f"  residual {_fmt(residual)}"
        if tol is not None:
            self.kv(f"{key}.tol", tol)
            extra += f"  tol {_fmt(tol)}"
        self.say(f"{'PASS' if passed else 'FAIL'}  {key}{extra}")

    def render(self, json_mode: bool, elapsed: float) -> str:
        if json_mode:
            body = [f"command={self.command}"] + [f"{k}={v}" for k, v in self.pairs]
            body.append(f"passed={_fmt(self.ok)}")
            return "\n".join(body) + "\n"
        return "\n".join([f"$ pwarp {self.command}", *self.lines, f"wall time {elapsed:.3f} s"]) + "\n"


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (list, tuple, np.ndarray)):
        return ",".join(_fmt(x) for x in v)
    return str(v)


# ---------------------------------------------------------------------------
# argument helpers

class UsageError(Exception):
    pass


def _chart(obj) -> ManifoldSpec:
    return assemble(obj) if isinstance(obj, WarpedSpec) else obj


def _point(spec: ManifoldSpec, text: str | None) -> np.ndarray:
    if text is None:
        raise UsageError("--at is required for this command")
    try:
        p = np.array([float(t) for t in text.split(",")])
    except ValueError:
        raise UsageError(f"--at takes comma-separated numbers, got {text!r}") from None
    if p.shape[0] != spec.dim:
        raise UsageError(f"{spec.name} has {spec.dim} coordinates, --at gave {p.shape[0]}")
    if spec.box is not None:
        for x, c, (lo, hi) in zip(p, spec.coords, spec.box):
            if not lo <= x <= hi:
                raise UsageError(f"{c} = {x} lies outside the declared box [{lo}, {hi}]")
    return p


def _covector(spec: ManifoldSpec, text: str) -> np.ndarray:
    if text.startswith("d") and text[1:] in spec.coords:
        v = np.zeros(spec.dim)
        v[spec.coords.index(text[1:])] = 1.0
        return v
    try:
        v = np.array([float(t) for t in text.split(",")])
    except ValueError:
        names = ", ".join("d" + c for c in spec.coords)
        raise UsageError(f"covector {text!r} is neither one of {names} nor a number list") from None
    if v.shape[0] != spec.dim:
        raise UsageError(f"covector {text!r} needs {spec.dim} components")
    return v


def _plane(spec: ManifoldSpec, args, required: bool = True):
    if args.plane is None:
        if required:
            raise UsageError("--plane A B is required for this command")
        return None
    return _covector(spec, args.plane[0]), _covector(spec, args.plane[1])


def _point_text(spec: ManifoldSpec, p) -> str:
    return " ".join(f"{c}={_fmt(x)}" for c, x in zip(spec.coords, p))


def _header(rep: Report, obj, spec: ManifoldSpec, p=None) -> None:
    rep.kv("spec.name", spec.name)
    rep.kv("spec.dim", spec.dim)
    rep.kv("spec.index", spec.index)
    rep.say(f"spec   {spec.name} (dim {spec.dim}, index {spec.index})")
    if isinstance(obj, WarpedSpec):
        rep.kv("warped.f", ex.to_text(obj.f))
        rep.kv("warped.nu", ex.to_text(obj.nu))
        rep.say(f"warped {obj.base.name} x_f {obj.fiber.name}, f = {ex.to_text(obj.f)}, nu = {ex.to_text(obj.nu)}")
    if p is not None:
        rep.kv("point", p)
        rep.say(f"point  {_point_text(spec, p)}")


# ---------------------------------------------------------------------------
# commands

def _validate_manifold(rep: Report, spec: ManifoldSpec, pts, tol: float, prefix: str) -> None:
    bad = None
    for q in pts:
        try:
            check_signature(spec, q)
        except (SignatureError, SingularCometricError) as exc:
            bad = exc
            break
    rep.check(f"{prefix}.signature", bad is None)
    if bad is not None:
        rep.say(f"      {bad}")
        return
    r = validate_poisson(spec, pts, tol)
    rep.check(f"{prefix}.poisson", r.passed, r.residual, tol)
    if not r.passed and r.point is not None:
        rep.say(f"      worst triple {tuple(i + 1 for i in r.triple)} at {_point_text(spec, r.point)}")


def cmd_validate(obj, args, rep: Report) -> None:
    spec = _chart(obj)
    _header(rep, obj, spec)
    tol = args.tol if args.tol is not None else 1e-10
    if isinstance(obj, WarpedSpec):
        for part, m in (("base", obj.base), ("fiber", obj.fiber)):
            _validate_manifold(rep, m, _box_points(m, args), tol, part)
        fvals = [obj.base.evaluator(q)(obj.f) for q in _box_points(obj.base, args)]
        rep.check("warped.f_positive", min(fvals) > 0, None)
        rep.kv("warped.f_min", min(fvals))
        rep.say(f"      min f = {_fmt(min(fvals))}")
        _validate_manifold(rep, spec, _box_points(spec, args), tol, "product")
    else:
        _validate_manifold(rep, spec, _box_points(spec, args), tol, "manifold")


def _box_points(spec: ManifoldSpec, args) -> np.ndarray:
    if spec.box is None:
        raise UsageError(f"{spec.name} declares no box to sample from")
    return sample_points(spec.box, args.points if args.points is not None else 50, args.seed)


def _index_name(spec: ManifoldSpec, i: int) -> str:
    return spec.coords[i]


def cmd_christoffel(obj, args, rep: Report) -> None:
    spec = _chart(obj)
    p = _point(spec, args.at)
    _header(rep, obj, spec, p)
    exprs = christoffel_exprs(spec)
    G = cv.at(spec, p).christoffel
    rep.say("G_k^{ij} with D_{dx_i} dx_j = G_k^{ij} dx_k; zero entries omitted")
    for kk in range(spec.dim):
        for i in range(spec.dim):
            for j in range(spec.dim):
                e = exprs[kk][i][j]
                if e is ex.ZERO:
                    continue
                a, b, c = (_index_name(spec, t) for t in (kk, i, j))
                key = f"christoffel.{a}.{b}.{c}"
                rep.kv(f"{key}.expr", ex.to_text(e))
                rep.kv(f"{key}.value", G[kk, i, j])
                rep.say(f"G_{a}^{{{b} {c}}} = {ex.to_text(e)}   = {_fmt(G[kk, i, j])}")


def cmd_curvature(obj, args, rep: Report) -> None:
    spec = _chart(obj)
    p = _point(spec, args.at)
    _header(rep, obj, spec, p)
    R = cv.at(spec, p).curvature
    exprs = cv.curvature_exprs(spec)
    rep.say("R(dx_i, dx_j) dx_k = R_{ijk}^m dx_m for i < j; zero entries omitted")
    k = spec.dim
    for i in range(k):
        for j in range(i + 1, k):
            for kk in range(k):
                for m in range(k):
                    e = exprs[i][j][kk][m]
                    if e is ex.ZERO:
                        continue
                    names = [_index_name(spec, t) for t in (i, j, kk, m)]
                    key = "curvature." + ".".join(names)
                    rep.kv(f"{key}.expr", ex.to_text(e))
                    rep.kv(f"{key}.value", R[i, j, kk, m])
                    rep.say(f"R_{{{names[0]} {names[1]} {names[2]}}}^{names[3]} = {ex.to_text(e)}   = {_fmt(R[i, j, kk, m])}")


def cmd_sectional(obj, args, rep: Report) -> None:
    spec = _chart(obj)
    p = _point(spec, args.at)
    a, b = _plane(spec, args)
    _header(rep, obj, spec, p)
    rep.both("sectional.value", f"K({args.plane[0]}, {args.plane[1]})", cv.at(spec, p).sectional(a, b))


def cmd_ricci(obj, args, rep: Report) -> None:
    spec = _chart(obj)
    p = _point(spec, args.at)
    pl = _plane(spec, args, required=False)
    _header(rep, obj, spec, p)
    G = cv.at(spec, p)
    if pl is not None:
        rep.both("ricci.value", f"Ric({args.plane[0]}, {args.plane[1]})", G.ricci(*pl))
        return
    E = np.eye(spec.dim)
    for i in range(spec.dim):
        for j in range(i, spec.dim):
            a, b = spec.coords[i], spec.coords[j]
            rep.both(f"ricci.{a}.{b}", f"Ric(d{a}, d{b})", G.ricci(E[i], E[j]))


def cmd_scalar(obj, args, rep: Report) -> None:
    spec = _chart(obj)
    p = _point(spec, args.at)
    _header(rep, obj, spec, p)
    rep.both("scalar.value", "S", cv.at(spec, p).scalar_curvature())


def cmd_qualar(obj, args, rep: Report) -> None:
    spec = _chart(obj)
    p = _point(spec, args.at)
    _header(rep, obj, spec, p)
    G = cv.at(spec, p)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", EmptySignatureRangeWarning)
        rep.both("qualar.direct", "Q (coframe pairs)", G.qualar())
        rep.both("qualar.null_forms", "Q (null forms)", G.qualar_via_null_forms())
        if isinstance(obj, WarpedSpec):
            for variant in ("published", "corrected"):
                rep.both(f"qualar.closed_form.{variant}", f"Q (closed form, {variant})",
                         qualar_closed_form(obj, p, variant))
            display = _display_for(obj)
            if display is not None:
                rep.both("qualar.display", "Q (printed two-plane display)", display(obj, p))
    for wmsg in {str(w.message) for w in caught}:
        rep.say(f"note: {wmsg}")


def _display_for(w: WarpedSpec):
    if w.k1 != 2 or w.q1 != 1 or w.k2 != 2:
        return None
    return {2: qualar_display_h2xe2, 0: qualar_display_h2xs2}.get(w.q2)


def cmd_nullsec(obj, args, rep: Report) -> None:
    spec = _chart(obj)
    p = _point(spec, args.at)
    pl = _plane(spec, args, required=False)
    _header(rep, obj, spec, p)
    G = cv.at(spec, p)
    if pl is not None:
        rep.both("nullsec.value", f"K_null({args.plane[0]}, {args.plane[1]})", G.null_sectional(*pl))
        return
    rows = G.coframe.rows
    if not G.null_forms():
        rep.say("no null forms: the index leaves no timelike/spacelike pairs")
    for n in G.null_forms():
        for l in range(spec.dim):
            if l in (n.i, n.s):
                continue
            rep.both(f"nullsec.{n.i + 1}.{n.s + 1}.{l + 1}", f"K_null(xi_{n.i + 1}{n.s + 1}, theta_{l + 1})",
                     G.null_sectional(n.xi, rows[l]))
    if isinstance(obj, WarpedSpec):
        rep.say("product decomposition (lhs direct, rhs from the lifted pieces)")
        for case in (1, 2, 3, 4):
            for t in admissible_null_triples(obj, case):
                r = null_sectional_relations(obj, p, case, *t)
                i, s, l, part = t
                key = f"nullsec.case{case}.{i + 1}.{s + 1}.{l + 1}{part.value}"
                rep.kv(f"{key}.lhs", r.lhs)
                rep.kv(f"{key}.rhs", r.rhs)
                rep.say(f"case {case} i={i + 1} s={s + 1} l={l + 1}{part.value}: {_fmt(r.lhs)} vs {_fmt(r.rhs)}")


def cmd_laplacian(obj, args, rep: Report) -> None:
    spec = _chart(obj)
    p = _point(spec, args.at)
    if args.fn is None:
        raise UsageError("--fn EXPR is required for laplacian")
    try:
        u = spec.parse(args.fn)
    except ExprError as exc:
        raise SpecError(f"--fn: {exc}") from None
    _header(rep, obj, spec, p)
    rep.kv("laplacian.fn", ex.to_text(u))
    rep.both("laplacian.value", f"Laplacian({ex.to_text(u)})", laplacian(spec, u, p))


def cmd_verify(obj, args, rep: Report) -> None:
    if not isinstance(obj, WarpedSpec):
        raise UsageError("verify needs a warped file")
    spec = assemble(obj)
    _header(rep, obj, spec)
    n = args.points if args.points is not None else 20
    suites = SUITES if args.suite == "all" else (args.suite,)
    pts = _box_points_n(spec, n, args.seed)
    rep.kv("verify.points", n)
    rep.kv("verify.seed", args.seed)
    rep.kv("verify.variant", args.variant)
    rep.say(f"points {n}, seed {args.seed}, variant {args.variant}")
    cc = cross_check(obj, pts, suites, args.variant, args.tol, args.seed)
    for note in cc.notes:
        rep.say(f"note: {note}")
    for i, note in enumerate(cc.notes):
        rep.kv(f"verify.note.{i}", note)
    for r in cc.results:
        rep.check(f"{r.suite}.{r.case}", r.passed, r.residual, r.tol)
    if "qualar" in suites:
        q = pts[0]
        G = cv.at(spec, q)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", EmptySignatureRangeWarning)
            rep.say(f"at {_point_text(spec, q)}:")
            rep.both("qualar.sample.direct", "  Q direct", G.qualar())
            rep.both("qualar.sample.closed_form", f"  Q closed form ({args.variant})",
                     qualar_closed_form(obj, q, args.variant))
            display = _display_for(obj)
            if display is not None:
                rep.both("qualar.sample.display", "  Q printed display", display(obj, q))


def _box_points_n(spec: ManifoldSpec, n: int, seed: int) -> np.ndarray:
    if spec.box is None:
        raise UsageError(f"{spec.name} declares no box to sample from")
    return sample_points(spec.box, n, seed)


COMMANDS = {
    "validate": cmd_validate,
    "christoffel": cmd_christoffel,
    "curvature": cmd_curvature,
    "sectional": cmd_sectional,
    "ricci": cmd_ricci,
    "scalar": cmd_scalar,
    "qualar": cmd_qualar,
    "nullsec": cmd_nullsec,
    "laplacian": cmd_laplacian,
    "verify": cmd_verify,
}


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pwarp",
        description="Contravariant curvature of pseudo-Riemannian Poisson manifolds and their warped products.",
    )
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("file", help="manifold (.spec) or warped (.warp) file")
    ap.add_argument("--at", help="point, comma-separated chart coordinates")
    ap.add_argument("--plane", nargs=2, metavar=("A", "B"),
                    help="two covectors: dx-style names (dx1) or comma-separated components")
    ap.add_argument("--fn", help="function expression for laplacian")
    ap.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    ap.add_argument("--variant", choices=("published", "corrected"), default="published",
                    help="formula reading used by verify (default: as published)")
    ap.add_argument("--points", type=_positive_int, help="sample points (validate: 50, verify: 20)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tol", type=_positive_float, help="override every tolerance")
    ap.add_argument("--json", action="store_true", help="key=value lines, byte-stable")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    echo = " ".join([args.command, args.file] + _echo_opts(args))
    rep = Report(echo)
    try:
        obj = load(args.file)
        COMMANDS[args.command](obj, args, rep)
    except UsageError as exc:
        print(f"pwarp: usage error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (SpecError, ExprError, IndexRangeError) as exc:
        if isinstance(exc, (DomainError, NonFiniteError)):
            print(f"pwarp: math-domain error: {exc}", file=sys.stderr)
            return EXIT_DOMAIN
        print(f"pwarp: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (SingularCometricError, SignatureError, CoframeConstructionError) as exc:
        print(f"pwarp: math-domain error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (DegeneratePlaneError, NotNullError, DegenerateDirectionError) as exc:
        print(f"pwarp: degenerate input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    sys.stdout.write(rep.render(args.json, time.perf_counter() - start))
    return EXIT_OK if rep.ok else EXIT_FAIL


def _echo_opts(args) -> list[str]:
    out = []
    for name in ("at", "fn", "points", "tol"):
        v = getattr(args, name)
        if v is not None:
            out += [f"--{name}", str(v)]
    if args.plane:
        out += ["--plane", *args.plane]
    if args.command == "verify":
        out += ["--suite", args.suite, "--variant", args.variant, "--seed", str(args.seed)]
    elif args.command == "validate":
        out += ["--seed", str(args.seed)]
    return out


if __name__ == "__main__":
    raise SystemExit(main())
