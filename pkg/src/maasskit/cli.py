"""Command line: ``maasskit <group> <command> [options]``.

Exit status: 0 all checks pass, 1 a check failed, 2 invalid input,
3 numerical failure. MAASSKIT_THREADS sets the worker pool size.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from . import corpus, hyperbolic, lseries, maassform, quotient, specfun
from .characters import character_group, primitive_characters
from .errors import MaassKitError, ValidationError
from .report import CheckReport, merge

DEFAULT_POINTS = {
    "involution": "0.8j,1j,1.25j,0.3+0.9j,-0.2+0.7j,0.45+0.6j,0.1+1.5j,-0.35+1.1j,0.5+0.5j,0.05+2j",
    "twist-transform": "0.5j,0.05+0.3j,0.2+0.6j",
    "difference": "1j,0.1+0.8j,0.25+0.7j",
    "circle-integral": "1j,2j,0.5+1j",
}


def threads():
    raw = os.environ.get("MAASSKIT_THREADS", "")
    if not raw:
        return min(4, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        raise ValidationError(f"MAASSKIT_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise ValidationError("MAASSKIT_THREADS must be positive")
    return n


def parse_complex(text):
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise ValidationError(f"not a complex number: {text!r}") from None


def parse_points(text):
    """Either re:im_start:im_end:count (a vertical segment) or a comma-separated list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 4:
            raise ValidationError("grid descriptor must be re:im_start:im_end:count")
        try:
            re_, lo, hi, count = float(parts[0]), float(parts[1]), float(parts[2]), int(parts[3])
        except ValueError:
            raise ValidationError(f"bad grid descriptor {text!r}") from None
        if count < 1:
            raise ValidationError("grid count must be at least 1")
        return [complex(re_, t) for t in np.linspace(lo, hi, count)]
    pts = [parse_complex(p) for p in text.split(",") if p.strip()]
    if not pts:
        raise ValidationError("empty point list")
    return pts


def parse_fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"not a rational number: {text!r}") from None


def map_points(fn, points):
    """Evaluate fn on each point in the worker pool, keeping order."""
    n = threads()
    if n == 1 or len(points) == 1:
        return [fn(p) for p in points]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, points))


def combine(reports):
    """Join single-point reports of one check into a single report."""
    first = reports[0]
    return CheckReport(
        first.check_name, first.params,
        [g for r in reports for g in r.grid], [v for r in reports for v in r.lhs],
        [v for r in reports for v in r.rhs], first.tolerance, first.paper_anchor,
        criterion=first.criterion, runtime_ms=sum(r.runtime_ms for r in reports),
        extra=first.extra)


# ---- output --------------------------------------------------------------------

def emit(payload, args):
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    out = getattr(args, "out", None)
    if out and out != "-":
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def emit_reports(reports, args):
    payloads = []
    for r in reports:
        obj = r.to_json() if isinstance(r, CheckReport) else r
        obj.setdefault("params", {})["seed"] = args.seed
        payloads.append(obj)
    if getattr(args, "csv", None):
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["check", "point", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual"])
            for r in reports:
                if isinstance(r, CheckReport):
                    for row in r.residual_rows():
                        w.writerow([r.check_name] + row)
    emit(payloads[0] if len(payloads) == 1 else merge(payloads), args)
    ok = all(p.get("pass", False) for p in payloads)
    return 0 if ok else 1


# ---- corpus ----------------------------------------------------------------------

def cmd_gen_eisenstein(args):
    spec = corpus.eisenstein_spec(parse_complex(args.nu), args.n_max, args.kappa)
    path = maassform.save(spec, args.out)
    sys.stdout.write(json.dumps({"spec": path, "n_max": args.n_max}, sort_keys=True) + "\n")
    return 0


def cmd_load_hecke(args):
    data = corpus.load_hecke(args.file, args.level)
    emit({"level": data.level, "primes": data.primes, "source": data.source}, args)
    return 0


def _write_coeffs(path, seq):
    if path and path != "-":
        maassform.write_coeff_csv(path, seq.values)
    else:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["n", "re", "im"])
        for n, v in enumerate(seq.values, start=1):
            w.writerow([n, repr(float(v.real)), repr(float(v.imag))])


def cmd_sym2(args):
    data = corpus.load_hecke(args.hecke, args.level)
    _write_coeffs(args.out, corpus.sym2_coeffs(data, args.n_max))
    return 0


def cmd_deconvolve(args):
    vals = maassform.read_coeff_csv(args.coeffs)
    seq = lseries.CoeffSeq.fit(vals, args.sigma)
    _write_coeffs(args.out, corpus.moebius_deconvolve(seq))
    return 0


# ---- checks ---------------------------------------------------------------------

def _spec(args):
    if not args.spec:
        raise ValidationError("--spec is required")
    if not os.path.exists(args.spec):
        raise ValidationError(f"spec file {args.spec} does not exist")
    return maassform.load(args.spec)


def _points_arg(args, name):
    text = args.points
    if text in (None, "default"):
        text = DEFAULT_POINTS[name]
    return parse_points(text)


def cmd_involution(args):
    spec = _spec(args)
    pts = _points_arg(args, "involution")
    reps = map_points(lambda z: maassform.involution_residual(spec, z, args.tol), pts)
    return emit_reports([combine(reps)], args)


def _characters(q, primitive_only=False):
    chars = primitive_characters(q) if primitive_only else character_group(q).characters()[1:]
    if not chars:
        raise ValidationError(f"no suitable characters mod {q}")
    return chars


def cmd_twist_transform(args):
    spec = _spec(args)
    pts = _points_arg(args, "twist-transform")
    reports = []
    for psi in _characters(args.modulus):
        reps = map_points(lambda z: maassform.twist_transform_residual(spec, psi, z, args.tol), pts)
        reports.append(combine(reps))
    return emit_reports(reports, args)


def cmd_difference(args):
    spec = _spec(args)
    pts = _points_arg(args, "difference")
    reps = map_points(lambda z: maassform.difference_identity_residual(spec, args.modulus, args.a, args.b, z, args.tol), pts)
    return emit_reports([combine(reps)], args)


def cmd_mellin(args):
    spec = _spec(args)
    s_grid = parse_points(args.s_grid)
    pairs = [(float(w), parse_fraction(a)) for w in args.w.split(",") for a in args.alpha.split(",")]
    return emit_reports(lseries.mellin_identity_reports(spec, pairs, s_grid, tol=args.tol), args)


def cmd_circle(args):
    spec = _spec(args)
    pts = _points_arg(args, "circle-integral")
    reps = map_points(lambda z: lseries.circle_integral_residual(spec, z, radius=args.radius, tol=args.tol), pts)
    return emit_reports(reps, args)


def cmd_additive_fe(args):
    s_grid = parse_points(args.s_grid)
    alpha = parse_fraction(args.alpha)
    return emit_reports([lseries.additive_fe_residual(parse_complex(args.nu), alpha, args.k, s_grid, tol=args.tol)], args)


def cmd_fe_eisenstein(args):
    nu = parse_complex(args.nu) if args.nu else _spec(args).nu.nu
    s_grid = parse_points(args.s_grid)
    reports = [lseries.eisenstein_fe_residual(nu, psi, s_grid, tol=args.tol)
               for psi in _characters(args.modulus, primitive_only=True)]
    return emit_reports(reports, args)


def cmd_dirichlet_fe(args):
    s_grid = parse_points(args.s_grid)
    reports = [quotient.dirichlet_fe_residual(psi, s_grid, args.convention, args.tol)
               for psi in _characters(args.modulus, primitive_only=True)]
    return emit_reports(reports, args)


def cmd_quotient_gamma(args):
    s_grid = parse_points(args.s_grid)
    return emit_reports([quotient.quotient_gamma_residual(args.eps, parse_complex(args.nu), s_grid, args.tol)], args)


def cmd_quotient_epsilon(args):
    s_grid = parse_points(args.s_grid)
    reports = [quotient.quotient_fe_epsilon_residual(psi, args.M, s_grid, args.variant, args.tol)
               for psi in _characters(args.modulus, primitive_only=True)]
    return emit_reports(reports, args)


def cmd_two_circles(args):
    m1, m2 = hyperbolic.default_pair()
    c1, c2 = hyperbolic.classify(m1), hyperbolic.classify(m2)
    h = hyperbolic.sample_family(args.family, c1.fixed_point)
    res = hyperbolic.two_circles_test(h, c1, c2, eps=args.eps, lipschitz=args.lipschitz)
    payload = res.to_json()
    payload.update({"check_name": "two-circles", "family": args.family, "pass": res.passed,
                    "paper_anchor": "a continuous function invariant under two infinite order elliptic matrices with distinct fixed points is constant"})
    return emit_reports([payload], args)


def cmd_ellipticity(args):
    m = hyperbolic.build_m(args.q, args.s, parse_fraction(args.r), parse_fraction(args.rtilde), args.N)
    cert = hyperbolic.classify(m)
    payload = {"check_name": "ellipticity", "matrix": m.to_json(), "det": str(m.det), "trace": str(m.trace),
               "elliptic": cert.elliptic,
               "paper_anchor": "M(q,s,r) = (1, 2r/q; -2N rtilde/s, -3+4/(qs)) is elliptic of infinite order"}
    if cert.elliptic:
        z = cert.fixed_point
        mz = hyperbolic.act(m, z)
        payload.update(cert.to_json())
        payload["fixed_point_defect"] = abs(mz - z)
        closed = hyperbolic.fixed_point_closed_form(args.q, args.s, parse_fraction(args.r), parse_fraction(args.rtilde), args.N)
        payload["closed_form_corrected"] = {"re": closed.real, "im": closed.imag}
        payload["pass"] = bool(m.det == 1 and payload["fixed_point_defect"] < 1e-12 and cert.infinite_order)
    else:
        payload["pass"] = False
    return emit_reports([payload], args)


def cmd_selftest(args):
    rng = random.Random(args.seed)
    lhs, rhs, grid = [], [], []
    for _ in range(100):
        a, b = complex(rng.uniform(-2, 2), rng.uniform(-2, 2)), complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        c = complex(rng.uniform(0.5, 3), rng.uniform(-2, 2))
        z = 0.7 * rng.random() * np.exp(2j * np.pi * rng.random())
        grid.append({"a": a, "b": b, "c": c, "z": z})
        lhs.append(specfun.hyp2f1(a, b, c, z))
        rhs.append((1 - z) ** (c - a - b) * specfun.hyp2f1(c - a, c - b, c, z))
    euler = CheckReport("selftest-euler", {}, grid, lhs, rhs, 1e-10,
                        "2F1(a,b;c;z) = (1-z)^(c-a-b) 2F1(c-a,c-b;c;z)", criterion="relative")
    us = np.linspace(0.1, 20, 50)
    k_half = CheckReport("selftest-khalf", {}, list(us), [specfun.bessel_k(0.5, u) for u in us],
                         [np.sqrt(np.pi / (2 * u)) * np.exp(-u) for u in us], 1e-10,
                         "K_(1/2)(u) = sqrt(pi/(2u)) e^(-u)", criterion="relative")
    return emit_reports([euler, k_half], args)


def cmd_merge(args):
    payloads = []
    for path in args.files:
        try:
            with open(path, encoding="utf-8") as fh:
                payloads.append(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read report {path}: {exc}") from exc
    flat = []
    for p in payloads:
        flat.extend(p["reports"] if p.get("check_name") == "merged" else [p])
    result = merge(flat)
    emit(result, args)
    return 0 if result["pass"] else 1


# ---- parser ----------------------------------------------------------------------

def _common(p, tol):
    p.add_argument("--out", default=None, help="report path (default stdout)")
    p.add_argument("--csv", default=None, help="optional CSV of per-point residuals")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=tol)


def build_parser():
    parser = argparse.ArgumentParser(prog="maasskit", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True)

    cg = groups.add_parser("corpus").add_subparsers(dest="command", required=True)
    p = cg.add_parser("gen-eisenstein")
    p.add_argument("--nu", required=True)
    p.add_argument("--n-max", type=int, default=2000)
    p.add_argument("--kappa", type=float, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_eisenstein)
    p = cg.add_parser("load-hecke")
    p.add_argument("--file", required=True)
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_load_hecke)
    p = cg.add_parser("sym2")
    p.add_argument("--hecke", required=True)
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--n-max", type=int, default=1000)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sym2)
    p = cg.add_parser("deconvolve")
    p.add_argument("--coeffs", required=True)
    p.add_argument("--sigma", type=float, default=0.5)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_deconvolve)

    ch = groups.add_parser("check").add_subparsers(dest="command", required=True)
    p = ch.add_parser("involution")
    p.add_argument("--spec")
    p.add_argument("--points", default="default")
    _common(p, 1e-7)
    p.set_defaults(func=cmd_involution)
    p = ch.add_parser("twist-transform")
    p.add_argument("--spec")
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--points", default="default")
    _common(p, 1e-6)
    p.set_defaults(func=cmd_twist_transform)
    p = ch.add_parser("difference")
    p.add_argument("--spec")
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--points", default="default")
    _common(p, 1e-6)
    p.set_defaults(func=cmd_difference)
    p = ch.add_parser("mellin")
    p.add_argument("--spec")
    p.add_argument("--w", default="0,0.5")
    p.add_argument("--alpha", default="0,1/5")
    p.add_argument("--s-grid", default="2.5:-5:5:11")
    _common(p, 1e-6)
    p.set_defaults(func=cmd_mellin)
    p = ch.add_parser("circle-integral")
    p.add_argument("--spec")
    p.add_argument("--points", default="default")
    p.add_argument("--radius", type=float, default=1.25)
    _common(p, 1e-7)
    p.set_defaults(func=cmd_circle)
    p = ch.add_parser("additive-fe")
    p.add_argument("--nu", default="0.25")
    p.add_argument("--alpha", default="1/5")
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--s-grid", default="2,2+2j,2.5-1j,1.5+1j,0.5+3j")
    _common(p, 1e-7)
    p.set_defaults(func=cmd_additive_fe)
    p = ch.add_parser("fe-eisenstein")
    p.add_argument("--spec")
    p.add_argument("--nu", default=None)
    p.add_argument("--modulus", type=int, default=5)
    p.add_argument("--s-grid", default="0.5:-10:10:21")
    _common(p, 1e-7)
    p.set_defaults(func=cmd_fe_eisenstein)
    p = ch.add_parser("dirichlet-fe")
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--convention", choices=sorted(quotient.CONVENTIONS), default="standard")
    p.add_argument("--s-grid", default="0.3:-2:2:5")
    _common(p, 1e-8)
    p.set_defaults(func=cmd_dirichlet_fe)
    p = ch.add_parser("quotient-gamma")
    p.add_argument("--eps", type=int, choices=(0, 1), default=0)
    p.add_argument("--nu", default="0.25")
    p.add_argument("--s-grid", default="1.5:-5:5:11")
    _common(p, 1e-10)
    p.set_defaults(func=cmd_quotient_gamma)
    p = ch.add_parser("quotient-epsilon")
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--M", type=int, default=1)
    p.add_argument("--variant", choices=("algebraic", "printed"), default="algebraic")
    p.add_argument("--s-grid", default="0.7,0.3+1j,0.5,-0.2+2j,1.5-0.5j")
    _common(p, 1e-12)
    p.set_defaults(func=cmd_quotient_epsilon)
    p = ch.add_parser("two-circles")
    p.add_argument("--family", choices=("constant", "radial", "imag"), default="radial")
    p.add_argument("--eps", type=float, default=1e-9)
    p.add_argument("--lipschitz", type=float, default=1.0)
    _common(p, 1e-9)
    p.set_defaults(func=cmd_two_circles)
    p = ch.add_parser("ellipticity")
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--s", type=int, default=5)
    p.add_argument("--r", default="2")
    p.add_argument("--rtilde", default="7")
    p.add_argument("--N", type=int, default=1)
    _common(p, 1e-12)
    p.set_defaults(func=cmd_ellipticity)

    sf = groups.add_parser("specfun").add_subparsers(dest="command", required=True)
    p = sf.add_parser("selftest")
    _common(p, 1e-10)
    p.set_defaults(func=cmd_selftest)

    rp = groups.add_parser("report").add_subparsers(dest="command", required=True)
    p = rp.add_parser("merge")
    p.add_argument("files", nargs="+")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_merge)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MaassKitError as exc:
        sys.stderr.write(f"maasskit: {type(exc).__name__}: {exc}\n")
        return exc.exit_code
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"maasskit: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
