"""Command-line interface: build, decompose, search, orbit, selftest.

Exit codes: 0 success, 2 invalid input, 3 certification failure
(non-periodic direction or inconclusive orbits present), 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
import time
from fractions import Fraction

from wardsurf import serialize, svgout
from wardsurf.affine import RotationMap, TwistMap, orbit, shear_modulus, veech_matrices
from wardsurf.exactfield import FieldContext, FieldElement, FieldError
from wardsurf.flows import CylinderDecomposition, Direction, FlowError, NotPeriodicError
from wardsurf.periodic import search_periodic
from wardsurf.surface import LocationError, Surface, build_ward, square_torus

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_CERTIFICATION = 3
EXIT_IO = 4


class PointSyntaxError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(\d+|[a-z]+|[-+*/(),])")


def _tokenize(text: str) -> list[str]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise PointSyntaxError(f"bad character at: {text[pos:]!r}")
            break
        out.append(m.group(1))
        pos = m.end()
    return out


class _ExprParser:
    """Tiny expression grammar over the field: rationals, cos(a/b pi),
    sin(a/b pi), + - * / and parentheses."""

    def __init__(self, ctx: FieldContext, tokens: list[str]):
        self.ctx = ctx
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None:
            raise PointSyntaxError("unexpected end of expression")
        if expected is not None and tok != expected:
            raise PointSyntaxError(f"expected {expected!r}, got {tok!r}")
        self.pos += 1
        return tok

    def expr(self) -> FieldElement:
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> FieldElement:
        value = self.factor()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.factor()
            value = value * rhs if op == "*" else value / rhs
        return value

    def factor(self) -> FieldElement:
        if self.peek() == "-":
            self.take()
            return -self.factor()
        if self.peek() == "+":
            self.take()
            return self.factor()
        return self.atom()

    def atom(self) -> FieldElement:
        tok = self.take()
        if tok.isdigit():
            return self.ctx.rational(int(tok))
        if tok in ("cos", "sin"):
            self.take("(")
            k, d = self.angle()
            self.take(")")
            fn = self.ctx.cos_pi if tok == "cos" else self.ctx.sin_pi
            return fn(k, d)
        if tok == "(":
            value = self.expr()
            self.take(")")
            return value
        raise PointSyntaxError(f"unexpected token {tok!r}")

    def angle(self) -> tuple[int, int]:
        """a/b pi | a pi | pi | pi/b -> (numerator, denominator) of pi."""
        num, den = 1, 1
        tok = self.peek()
        if tok and tok.isdigit():
            num = int(self.take())
            if self.peek() == "/":
                self.take()
                den = int(self.take())
        self.take("pi")
        if self.peek() == "/":
            self.take()
            den = int(self.take())
        return num, den


def parse_field_expr(ctx: FieldContext, text: str) -> FieldElement:
    parser = _ExprParser(ctx, _tokenize(text))
    value = parser.expr()
    if parser.peek() is not None:
        raise PointSyntaxError(f"trailing input at {parser.peek()!r}")
    return value


def parse_point(ctx: FieldContext, text: str) -> tuple[FieldElement, FieldElement]:
    """Parse "(expr, expr)" or "expr, expr" into exact coordinates."""
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    depth = 0
    split = None
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            split = i
            break
    if split is None:
        raise PointSyntaxError("point must be two comma-separated expressions")
    return (
        parse_field_expr(ctx, text[:split]),
        parse_field_expr(ctx, text[split + 1 :]),
    )


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise _IOFailure(str(exc)) from exc


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _IOFailure(str(exc)) from exc


class _IOFailure(Exception):
    pass


def _load_surface(path: str) -> Surface:
    return serialize.surface_from_json(_read(path))


def _parse_direction(surface: Surface, spec: str) -> Direction:
    ctx = surface.ctx
    spec = spec.strip().lower()
    if spec in ("horizontal", "h"):
        return Direction.horizontal(ctx)
    if spec in ("vertical", "v"):
        return Direction.vertical(ctx)
    m = re.fullmatch(r"rot\s*(-?\d+)", spec)
    if m:
        return Direction.rotation(ctx, int(m.group(1)))
    raise PointSyntaxError(
        f"direction must be horizontal, vertical, or 'rot K', got {spec!r}"
    )


def cmd_build(args) -> int:
    if args.torus:
        surface = square_torus()
    else:
        surface = build_ward(args.n, normalized=not args.unnormalized)
    text = serialize.surface_to_json(surface)
    _write(args.out, text)
    if args.svg:
        _write(args.svg, svgout.render_surface(surface, title=f"surface n={args.n}"))
    if args.out not in (None, "-"):
        sings = surface.singularities()
        print(
            f"wrote {args.out}: genus {surface.genus}, "
            f"{len(surface.polygons)} polygons, {len(sings)} singularities"
        )
    return EXIT_OK


def cmd_decompose(args) -> int:
    surface = _load_surface(args.surface)
    direction = _parse_direction(surface, args.direction)
    try:
        dec = CylinderDecomposition(surface, direction, cap=args.cap)
    except NotPeriodicError as exc:
        print(f"certification failure: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATION
    report = serialize.decomposition_report(dec, args.direction)
    _write(args.out, serialize.dumps(report))
    if args.svg:
        _write(
            args.svg,
            svgout.render_surface(surface, decomposition=dec,
                                  title=f"cylinders {args.direction}"),
        )
    if args.out not in (None, "-"):
        for cyl in dec.cylinders:
            print(
                f"cylinder {cyl.index}: width {cyl.width.decimal(10)} (approx), "
                f"height {cyl.height.decimal(10)} (approx), "
                f"modulus {cyl.modulus.decimal(10)} (approx)"
            )
    return EXIT_OK


def cmd_search(args) -> int:
    surface = _load_surface(args.surface)
    t0 = time.perf_counter()
    cls = search_periodic(surface, D=args.denominator_bound, cap=args.cap)
    elapsed = time.perf_counter() - t0
    report = serialize.classification_report(cls, timing_seconds=elapsed)
    _write(args.out, serialize.dumps(report))
    if args.svg:
        marks = []
        for s in cls.survivors:
            kind = "singularity" if s.label == "singularity" else "center"
            marks.append((s.point, kind))
        _write(
            args.svg,
            svgout.render_surface(surface, marks=marks, title="periodic points"),
        )
    print(cls.summary())
    if cls.inconclusive:
        return EXIT_CERTIFICATION
    return EXIT_OK


def cmd_orbit(args) -> int:
    surface = _load_surface(args.surface)
    ctx = surface.ctx
    x, y = parse_point(ctx, args.point)
    point = surface.locate(args.polygon, x, y)
    dec_h = CylinderDecomposition(surface, Direction.horizontal(ctx))
    phi = TwistMap(dec_h)
    psi = RotationMap(surface)
    maps = {
        "phi": phi,
        "phi^-1": phi.inverse(),
        "psi": psi,
        "psi^-1": psi.inverse(),
    }
    if args.word:
        p = point
        print(f"start: {p}")
        for step in args.word.split(","):
            step = step.strip()
            if step not in maps:
                print(f"unknown generator {step!r}", file=sys.stderr)
                return EXIT_INVALID
            p = maps[step].apply(p)
            print(f"{step}: {p}")
        return EXIT_OK
    checks = (
        dec_h,
        CylinderDecomposition(surface, Direction.rotation(ctx, 1)),
        CylinderDecomposition(surface, Direction.rotation(ctx, 2)),
    )
    verdict = orbit(point, [phi, psi], cap=args.cap, check_decomps=checks)
    print(f"verdict: {verdict.status} (visited {verdict.visited}, cap {verdict.cap})")
    if verdict.is_finite():
        for q in sorted(verdict.points, key=lambda q: (q.polygon, q.x.approx(), q.y.approx())):
            print(f"  {q}")
    if verdict.is_infinite():
        w = verdict.witness
        print(
            f"  witness: word={'.'.join(w.word) or '(identity)'} "
            f"decomposition={w.decomposition_index} cylinder={w.cylinder_index} "
            f"ratio={w.ratio.decimal(10)} (approx, irrational)"
        )
    if verdict.status == "inconclusive":
        return EXIT_CERTIFICATION
    return EXIT_OK


def cmd_selftest(args) -> int:
    rng = random.Random(args.seed)
    failures = 0

    def check(name: str, ok: bool):
        nonlocal failures
        print(f"[{'PASS' if ok else 'FAIL'}] {name}")
        if not ok:
            failures += 1

    ctx = FieldContext(args.n)
    els = []
    for _ in range(20):
        k = rng.randrange(0, 4 * ctx.n)
        q = Fraction(rng.randrange(-9, 10), rng.randrange(1, 10))
        els.append(ctx.cos_pi(k, ctx.n) * q + ctx.sin_pi(k, 2 * ctx.n))
    a, b, c = els[0], els[1], els[2]
    check("field associativity", (a + b) + c == a + (b + c))
    check("field distributivity", a * (b + c) == a * b + a * c)
    check("exact cancellation", (a + b) - b == a)
    nonzero = [e for e in els if e.sign() != 0]
    check("inverses", all((e * e.inverse()) == 1 for e in nonzero[:5]))
    k = rng.randrange(0, 2 * ctx.n)
    check(
        "pythagorean identity",
        ctx.cos_pi(k, ctx.n) ** 2 + ctx.sin_pi(k, ctx.n) ** 2 == 1,
    )
    check(
        "sign vs numeric",
        all((e.sign() > 0) == (e.approx() > 0) for e in nonzero),
    )

    surface = build_ward(args.n)
    alpha = shear_modulus(ctx)
    dec = CylinderDecomposition(surface, Direction.horizontal(ctx))
    check("all horizontal moduli equal", all(c.modulus == alpha for c in dec.cylinders))
    psi = RotationMap(surface)
    pt = None
    for _ in range(5):
        # random rational point inside the 2n-gon near the center
        x = ctx.rational(Fraction(rng.randrange(-10, 11), 40))
        y = ctx.rational(Fraction(rng.randrange(-10, 11), 40))
        pt = surface.locate(0, x, y)
        q = pt
        for _ in range(2 * args.n):
            q = psi.apply(q)
        if q != pt:
            check("rotation has order 2n", False)
            break
    else:
        check("rotation has order 2n", True)
    mats = veech_matrices(ctx)
    check("shear is the twist derivative", mats["shear"].b == alpha)
    print(f"{'OK' if failures == 0 else 'FAILED'}: {failures} failures")
    return EXIT_OK if failures == 0 else EXIT_CERTIFICATION


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="wardsurf",
        description="Exact cylinder decompositions and periodic points of Ward surfaces",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="construct a surface and write its JSON")
    p_build.add_argument("--n", type=int, default=4)
    p_build.add_argument("--torus", action="store_true", help="build the square torus fixture")
    p_build.add_argument("--unnormalized", action="store_true",
                         help="keep Hooper's sin(pi/3) side length")
    p_build.add_argument("--out", default="-")
    p_build.add_argument("--svg")
    p_build.set_defaults(func=cmd_build)

    p_dec = sub.add_parser("decompose", help="cylinder decomposition in a direction")
    p_dec.add_argument("surface")
    p_dec.add_argument("--direction", default="horizontal",
                       help="horizontal | vertical | 'rot K'")
    p_dec.add_argument("--cap", type=int, default=None)
    p_dec.add_argument("--out", default="-")
    p_dec.add_argument("--svg")
    p_dec.set_defaults(func=cmd_decompose)

    p_search = sub.add_parser("search", help="classify periodic points")
    p_search.add_argument("surface")
    p_search.add_argument("--denominator-bound", type=int, default=8)
    p_search.add_argument("--cap", type=int, default=10_000)
    p_search.add_argument("--out", default="-")
    p_search.add_argument("--svg")
    p_search.set_defaults(func=cmd_search)

    p_orbit = sub.add_parser("orbit", help="explore one point's affine orbit")
    p_orbit.add_argument("surface")
    p_orbit.add_argument("--point", required=True,
                         help="e.g. '(1/3, 1/3)' or '(cos(1/5 pi)/2, 0)'")
    p_orbit.add_argument("--polygon", type=int, default=0)
    p_orbit.add_argument("--word", help="comma-separated generators to apply instead "
                                        "of exploring (phi, phi^-1, psi, psi^-1)")
    p_orbit.add_argument("--cap", type=int, default=10_000)
    p_orbit.set_defaults(func=cmd_orbit)

    p_self = sub.add_parser("selftest", help="run the randomized invariant battery")
    p_self.add_argument("--seed", type=int, default=0)
    p_self.add_argument("--n", type=int, default=5)
    p_self.set_defaults(func=cmd_selftest)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (PointSyntaxError, FieldError, LocationError, FlowError, ValueError,
            ZeroDivisionError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NotPeriodicError as exc:
        print(f"certification failure: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATION
    except _IOFailure as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except json.JSONDecodeError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
