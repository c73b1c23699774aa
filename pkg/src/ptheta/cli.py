"""Command-line front end.

Subcommands:
    eval      -- evaluate theta / a truncation / the bilateral or product
                 form / the negative-index tail at one (q, x)
    verify    -- run a certificate pipeline and write its JSON document
    spectrum  -- scan a region for truncation spectral values
    plot      -- render a catalog JSON to an SVG scatter

Exit codes: 0 success/pass, 1 a verification failed, 2 usage error.
Outputs are canonically serialised, so identical seeds and flags give
byte-identical files; every output embeds the hash of its run manifest.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import re
import sys
import time

from . import __version__
from .errors import ThetaError
from .figure import render_catalog_svg
from .series import DEFAULT_CONFIG, EvalConfig, bilateral_series, g_tail, theta, theta_trunc, triple_product
from .spectra import RegionSpec, refine_to_full_theta, scan_truncation_spectrum
from .verify import (
    GridSpec,
    canonical_json,
    certify_separation_direct,
    run_k1_chain,
    run_k2_grid,
    run_sector2,
)

_COMPLEX_RE = re.compile(
    r"^\s*(?P<re>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?"
    r"(?P<im>[+-](?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)?[iIjJ]?\s*$"
)


def parse_complex(text: str) -> complex:
    """Parse 'a+bi' style complex literals ('0.5', '-0.7+0.1i', '1i', '-i')."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty complex literal")
    if s[-1] in "iIjJ":
        body = s[:-1]
        m = re.match(
            r"^(?P<re>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?"
            r"(?P<im>[+-](?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?|[+-]?)?$",
            body,
        )
        if not m:
            raise ValueError(f"cannot parse complex literal {text!r}")
        re_part, im_part = m.group("re"), m.group("im")
        if im_part is None or im_part == "":
            # pure imaginary like '1i', '-0.5i', 'i'
            if re_part is None:
                return complex(0.0, 1.0)
            return complex(0.0, float(re_part))
        if im_part in "+-":
            im_part += "1"
        return complex(float(re_part or 0.0), float(im_part))
    return complex(float(s), 0.0)


def parse_angle(text: str) -> float:
    """Angles as plain floats or simple pi fractions: 'pi/4', '3pi/2', '2pi'."""
    s = text.strip().lower().replace(" ", "")
    m = re.match(r"^(?P<num>[+-]?\d*\.?\d*)\*?pi(?:/(?P<den>\d+\.?\d*))?$", s)
    if m:
        num = float(m.group("num")) if m.group("num") not in ("", "+", "-") else (
            -1.0 if m.group("num") == "-" else 1.0
        )
        den = float(m.group("den")) if m.group("den") else 1.0
        return num * math.pi / den
    return float(s)


def parse_region(text: str) -> tuple:
    parts = text.split(":")
    if len(parts) != 4:
        raise ValueError("region must be re_min:re_max:im_min:im_max")
    vals = [float(p) for p in parts]
    return (vals[0], vals[1]), (vals[2], vals[3])


def _manifest(args: argparse.Namespace, seed: int) -> dict:
    payload = {
        "command": args.command,
        "args": {
            k: v
            for k, v in sorted(vars(args).items())
            if k not in ("command", "func") and v is not None
        },
        "seed": seed,
        "version": __version__,
    }
    digest = hashlib.sha256(
        canonical_json(payload).encode()
    ).hexdigest()[:16]
    payload["hash"] = digest
    return payload


def _seed_from(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("THETA_SPECTRUM_SEED")
    return int(env) if env else 0


def _write(path: str | None, text: str):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_eval(args) -> int:
    q = args.q_polar if args.q_polar is not None else args.q
    if q is None:
        print("eval: one of --q / --q-polar is required", file=sys.stderr)
        return 2
    cfg = EvalConfig(tail_tol=args.tail_tol, max_terms=DEFAULT_CONFIG.max_terms)
    forms = {
        "theta": lambda: theta(q, args.x, cfg),
        "bilateral": lambda: bilateral_series(q, args.x, cfg),
        "product": lambda: triple_product(q, args.x, cfg),
        "g": lambda: g_tail(q, args.x, cfg),
    }
    if args.form == "trunc":
        if args.k is None:
            print("eval: --k is required for --form trunc", file=sys.stderr)
            return 2
        value, tail, terms = theta_trunc(q, args.x, args.k), 0.0, args.k + 1
    else:
        ev = forms[args.form]()
        value, tail, terms = ev.value, ev.tail_bound, ev.terms_used
    if args.json:
        doc = {
            "schema": 1,
            "form": args.form,
            "q": [q.real, q.imag],
            "x": [args.x.real, args.x.imag],
            "value": [value.real, value.imag],
            "tail_bound": tail,
            "terms_used": terms,
        }
        sys.stdout.write(canonical_json(doc))
    else:
        print(f"value     = {value.real:+.15g} {value.imag:+.15g}i")
        print(f"|value|   = {abs(value):.15g}")
        print(f"tail      <= {tail:.3g}  ({terms} terms)")
    return 0


def cmd_verify(args) -> int:
    seed = _seed_from(args)
    manifest = _manifest(args, seed)
    if args.pipeline == "k1-chain":
        try:
            report = run_k1_chain(seed=seed, threads=args.threads)
        except ThetaError as exc:
            report = getattr(exc, "report", None)
            if report is None:
                raise
        doc = report.to_json_dict()
        doc["manifest"] = manifest
        _write(args.out, canonical_json(doc))
        print(f"rows: {len(report.rows)}  overall margin: {report.overall_margin:.6f}")
        for name, margin in report.margins.items():
            print(f"  margin {name:<14} {margin:+.6f}")
        return 0 if report.passed else 1
    if args.pipeline in ("k2-grid", "sector2"):
        if args.pipeline == "k2-grid":
            grid = GridSpec(args.r_start, args.step, args.count)
            b_range = (parse_angle(args.b_lo), parse_angle(args.b_hi))
            cert = run_k2_grid(grid, b_range, seed=seed, threads=args.threads)
        else:
            cert = run_sector2(seed=seed, threads=args.threads)
        doc = cert.to_json_dict()
        doc["manifest"] = manifest
        _write(args.out, canonical_json(doc))
        worst = min(
            (r.eta if cert.mode == "eta" else r.rho) for r in cert.rows
        )
        print(
            f"{cert.pipeline}: {len(cert.rows)} rows, "
            f"mu in [{min(cert.mu_values):.8f}, {max(cert.mu_values):.8f}], "
            f"worst {cert.mode} = {worst:+.6f}"
        )
        return 0 if cert.overall_pass else 1
    # direct
    if args.q is None:
        print("verify direct: --q is required", file=sys.stderr)
        return 2
    zero_set = certify_separation_direct(args.q, kmax=args.kmax)
    doc = {
        "schema": 1,
        "pipeline": "direct",
        "q": [zero_set.q.real, zero_set.q.imag],
        "kmax": args.kmax,
        "zeros": [[z.real, z.imag] for z in zero_set.zeros],
        "annulus_index": list(zero_set.annulus_index),
        "separated": zero_set.separated,
        "manifest": manifest,
    }
    _write(args.out, canonical_json(doc))
    print(f"separated: {zero_set.separated}  ({len(zero_set.zeros)} zeros listed)")
    return 0 if zero_set.separated else 1


def cmd_spectrum(args) -> int:
    seed = _seed_from(args)
    manifest = _manifest(args, seed)
    (re_range, im_range) = args.region
    region = RegionSpec(re_range, im_range, grid_n=args.grid_n)
    values = scan_truncation_spectrum(args.k, region, seed=seed)
    if args.refine_full:
        refined = []
        for sv in values:
            try:
                refined.append(refine_to_full_theta(sv))
            except ThetaError:
                continue
        values = refined
    doc = {
        "schema": 1,
        "k": args.k,
        "region": [*re_range, *im_range],
        "grid_n": args.grid_n,
        "catalog": [sv.as_dict() for sv in values],
        "manifest": manifest,
    }
    _write(args.out, canonical_json(doc))
    if args.csv:
        lines = ["source,q_re,q_im,x_re,x_im,pair_lo,pair_hi,residual,would_be"]
        for sv in values:
            lines.append(
                f"{sv.source},{sv.q_star.real!r},{sv.q_star.imag!r},"
                f"{sv.x_star.real!r},{sv.x_star.imag!r},"
                f"{sv.pair[0]},{sv.pair[1]},{sv.residual!r},{sv.would_be}"
            )
        with open(args.csv, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    print(f"found {len(values)} spectral values")
    return 0


def cmd_plot(args) -> int:
    with open(args.catalog) as fh:
        doc = json.load(fh)
    entries = doc.get("catalog", doc if isinstance(doc, list) else [])
    svg = render_catalog_svg(entries)
    _write(args.out, svg)
    print(f"plotted {len(entries)} points")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ptheta",
        description="Partial theta function: evaluation, separation certificates, spectra.",
    )
    ap.add_argument("--threads", type=int, default=None, help="cap internal parallelism")
    sub = ap.add_subparsers(dest="command", required=True)

    def complex_arg(text):
        try:
            return parse_complex(text)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc))

    def polar_arg(text):
        try:
            r_s, _, th_s = text.partition(":")
            r, th = float(r_s), parse_angle(th_s)
            return complex(r * math.cos(th), r * math.sin(th))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc))

    def region_arg(text):
        try:
            return parse_region(text)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc))

    p = sub.add_parser("eval", help="evaluate one of the series/product forms")
    p.add_argument("--q", type=complex_arg)
    p.add_argument("--q-polar", type=polar_arg, metavar="R:THETA")
    p.add_argument("--x", type=complex_arg, required=True)
    p.add_argument("--form", choices=["theta", "trunc", "bilateral", "product", "g"],
                   default="theta")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--tail-tol", type=float, default=DEFAULT_CONFIG.tail_tol)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="run a separation certificate pipeline")
    p.add_argument("pipeline", choices=["k1-chain", "k2-grid", "sector2", "direct"])
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="certificate JSON path")
    p.add_argument("--q", type=complex_arg, help="parameter for the direct pipeline")
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--r-start", type=float, default=0.2025)
    p.add_argument("--step", type=float, default=0.0025)
    p.add_argument("--count", type=int, default=160)
    p.add_argument("--b-lo", default="pi/4")
    p.add_argument("--b-hi", default="pi/2")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("spectrum", help="scan for truncation spectral values")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--region", type=region_arg, required=True,
                   metavar="RE_MIN:RE_MAX:IM_MIN:IM_MAX")
    p.add_argument("--grid-n", type=int, default=161)
    p.add_argument("--refine-full", action="store_true")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("plot", help="render a catalog JSON to SVG")
    p.add_argument("--catalog", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_plot)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads is not None and args.threads < 1:
        print("--threads must be positive", file=sys.stderr)
        return 2
    t0 = time.perf_counter()
    try:
        code = args.func(args)
    except ThetaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    print(f"[{time.perf_counter() - t0:.2f}s]", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
