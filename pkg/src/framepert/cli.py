"""Command line front end: ``framepert {bounds,certify,gallery,gap}``.

Reports go to stdout as JSON, diagnostics to stderr.  Exit codes:
0 success, 1 hypothesis fails, 2 invalid input, 3 enclosure or internal
check failed (a soundness bug).
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import certificates as cert
from . import gallery, schauder
from .errors import DimensionMismatch, FrameError, UnknownGallery, UnknownTheorem, ZeroFamily
from .fileformat import FamilyFile, dump_family_file, load_family_file
from .hilbert import (
    VectorFamily,
    excess,
    frame_bounds,
    frame_sequence_bounds,
    gap_details,
    riesz_bounds,
)
from . import numerics as nx

log = logging.getLogger("framepert")

EXIT_OK, EXIT_HYPOTHESIS, EXIT_INPUT, EXIT_UNSOUND = 0, 1, 2, 3

THEOREMS = ("pw", "christensen", "thm21", "fz", "qc", "nearriesz", "gap", "riesz", "thm31", "thm33", "thm34")
GALLERIES = ("ex21", "remark22", "ex22", "ex31", "dichotomy")


def _emit(obj, stream=None):
    stream = stream or sys.stdout
    json.dump(obj, stream, indent=2, allow_nan=False, default=_fallback)
    stream.write("\n")


def _fallback(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    raise TypeError(f"not serialisable: {type(obj)}")


def bounds_summary(ff: FamilyFile) -> dict:
    fam = ff.family()
    fb, is_frame = frame_bounds(fam)
    rb, is_riesz = riesz_bounds(fam)
    try:
        seq = frame_sequence_bounds(fam).as_list()
    except ZeroFamily:
        seq = None
    return {
        "frame_bounds": fb.as_list(),
        "is_frame": is_frame,
        "riesz_bounds": rb.as_list(),
        "is_riesz": is_riesz,
        "sequence_bounds": seq,
        "excess": excess(fam),
        "rank": nx.rank(fam.vectors),
    }


def cmd_bounds(args):
    _emit(bounds_summary(load_family_file(args.file)))
    return EXIT_OK


def _json_report(report):
    d = report.to_dict()
    # bulky arrays are not part of the report contract
    for key in ("g_functionals", "y_vectors"):
        d["extras"].pop(key, None)
    return d


def run_certificate(theorem, base: FamilyFile, pert: FamilyFile, lam=None, mu=None, seed=0, p=None):
    if theorem not in THEOREMS:
        raise UnknownTheorem(theorem)
    if base.dimension != pert.dimension:
        raise DimensionMismatch(f"base has dimension {base.dimension}, perturbed {pert.dimension}")
    if len(base.vectors) != len(pert.vectors):
        raise DimensionMismatch(f"base has {len(base.vectors)} vectors, perturbed {len(pert.vectors)}")
    f, h = base.family(), pert.family()
    if theorem == "pw":
        return cert.paley_wiener_certificate(f, h)
    if theorem == "christensen":
        if lam is None and mu is None:
            lam, mu = 0.0, cert.christensen_exact_mu(f, h)
        return cert.christensen_certificate(f, h, lam or 0.0, mu or 0.0, seed=seed)
    if theorem == "thm21":
        return cert.thm21_certificate(f, h, base.dual_family())
    if theorem == "fz":
        return cert.favier_zalik_certificate(f, h)
    if theorem == "qc":
        return cert.quadratic_closeness_check(f, h)
    if theorem == "nearriesz":
        return cert.near_riesz_excess_certificate(f, h)
    if theorem == "gap":
        return cert.gap_certificate(f, h, base.dual_family())
    if theorem == "riesz":
        return cert.riesz_sequence_certificate(f, h)
    pair = base.pair(p)
    if theorem == "thm31":
        return schauder.thm31_certificate(pair, pert.vectors, seed=seed)
    if theorem == "thm33":
        return schauder.thm33_certificate(pair, pert.vectors, seed=seed)
    g = pert.functionals if pert.functionals is not None else pert.vectors
    return schauder.thm34_certificate(pair, g)


def exit_code_for(report) -> int:
    if not report.hypothesis_ok:
        return EXIT_HYPOTHESIS
    if report.enclosed is False or not all(report.checks.values()):
        return EXIT_UNSOUND
    return EXIT_OK


def cmd_certify(args):
    log.info("certifying %s: %s -> %s", args.theorem, args.base, args.perturbed)
    report = run_certificate(
        args.theorem,
        load_family_file(args.base),
        load_family_file(args.perturbed),
        lam=args.lam,
        mu=args.mu,
        seed=args.seed,
        p=_parse_p(args.p),
    )
    _emit(_json_report(report))
    code = exit_code_for(report)
    if code == EXIT_UNSOUND:
        log.error("prediction does not enclose the computed bounds or a check failed")
    return code


def _parse_p(p):
    if p is None:
        return None
    return math.inf if p == "inf" else int(p)


def _hilbert_gallery(ex, out: Path, name, depth):
    f_file = FamilyFile(ex.f.dimension, ex.f.vectors.copy(), dual=ex.g.vectors.copy())
    h_file = FamilyFile(ex.h.dimension, ex.h.vectors.copy())
    dump_family_file(out / "f.json", f_file)
    dump_family_file(out / "h.json", h_file)
    report = cert.thm21_certificate(ex.f, ex.h, ex.g)
    qc = cert.quadratic_closeness_check(ex.f, ex.h)
    return {
        "name": name,
        "depth": depth,
        "offset_N": ex.offset,
        "vector_count": len(ex.f),
        "f": bounds_summary(f_file),
        "h": bounds_summary(h_file),
        "traces": {k: t.to_dict() for k, t in ex.traces.items()},
        "thm21": {"hypothesis_ok": report.hypothesis_ok, "enclosed": report.enclosed,
                  "exit_code": exit_code_for(report)},
        "qc": {"applicable": qc.hypothesis_ok, "lambda": qc.hypothesis_values["lambda"]},
        "files": ["f.json", "h.json"],
    }


def build_gallery(name, depth, out) -> dict:
    if name not in GALLERIES:
        raise UnknownGallery(name)
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    if name == "ex21":
        summary = _hilbert_gallery(gallery.example21(depth), out, name, depth)
    elif name == "remark22":
        summary = _hilbert_gallery(gallery.example_remark22(depth), out, name, depth)
    elif name == "ex22":
        ex = gallery.example22(depth)
        f_file = FamilyFile(ex.f.dimension, ex.f.vectors.copy())
        g_file = FamilyFile(ex.g.dimension, ex.g.vectors.copy())
        dump_family_file(out / "f.json", f_file)
        dump_family_file(out / "g.json", g_file)
        summary = {
            "name": name,
            "depth": depth,
            "ratios": ex.ratios,
            "expected_ratios": [1.0 / (2 * n - 1) ** 2 for n in range(1, depth + 1)],
            "f_nonzero_is_riesz": ex.f_nonzero_is_riesz,
            "f": bounds_summary(f_file),
            "g": bounds_summary(g_file),
            "traces": {k: t.to_dict() for k, t in ex.traces.items()},
            "files": ["f.json", "g.json"],
        }
    elif name == "ex31":
        ex = gallery.example31(depth)
        pair_file = FamilyFile(ex.pair.dimension, np.array(ex.pair.x), functionals=np.array(ex.pair.f))
        y_file = FamilyFile(ex.pair.dimension, ex.y.copy())
        dump_family_file(out / "pair.json", pair_file)
        dump_family_file(out / "perturbed.json", y_file)
        summary = {
            "name": name,
            "depth": depth,
            "offset_N": ex.offset,
            "vector_count": len(ex.pair),
            "reconstruction_residual": schauder.reconstruction_residual(ex.pair),
            "traces": {k: t.to_dict() for k, t in ex.traces.items()},
            "files": ["pair.json", "perturbed.json"],
        }
    else:
        d = 1 + 2 * depth
        f = np.zeros((1, d))
        f[0, 0] = 1.0
        rep = cert.frame_extension_dichotomy(VectorFamily(f), d)
        dump_family_file(out / "f.json", FamilyFile(d, f))
        dump_family_file(out / "g.json", FamilyFile(d, rep.g.vectors.copy()))
        dump_family_file(out / "h.json", FamilyFile(d, rep.h.vectors.copy()))
        summary = {"name": name, "depth": depth, **rep.to_dict(), "files": ["f.json", "g.json", "h.json"]}
    with open(out / "summary.json", "w", encoding="utf-8") as fh:
        _emit(summary, fh)
    log.info("wrote %s and summary.json to %s", ", ".join(summary["files"]), out)
    return summary


def cmd_gallery(args):
    summary = build_gallery(args.name, args.depth, args.out)
    _emit(summary)
    return EXIT_OK


def gap_summary(k_file: FamilyFile, l_file: FamilyFile) -> dict:
    if k_file.dimension != l_file.dimension:
        raise DimensionMismatch(f"K has dimension {k_file.dimension}, L {l_file.dimension}")
    delta, uk, ul = gap_details(k_file.family(), l_file.family())
    dim_k, dim_l = uk.shape[1], ul.shape[1]
    if dim_k == 0 or dim_l == 0 or dim_k > dim_l:
        sigma = 0.0
    else:
        sigma = float(nx.singular_values(ul.T @ uk)[dim_k - 1])
    return {"delta": delta, "dim_K": dim_k, "dim_L": dim_l, "sigma_min_projection": sigma}


def cmd_gap(args):
    _emit(gap_summary(load_family_file(args.k), load_family_file(args.l)))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="framepert", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="frame, Riesz and frame-sequence bounds of a family file")
    p.add_argument("file")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("certify", help="run a perturbation certificate")
    p.add_argument("theorem", help="one of " + ", ".join(THEOREMS))
    p.add_argument("base")
    p.add_argument("perturbed")
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p", choices=("1", "2", "inf"), default=None)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("gallery", help="write a worked example to disk")
    p.add_argument("name", help="one of " + ", ".join(GALLERIES))
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_gallery)

    p = sub.add_parser("gap", help="gap from span(K) to span(L)")
    p.add_argument("k")
    p.add_argument("l")
    p.set_defaults(func=cmd_gap)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    # a handler bound to the current stderr, so embedding callers see diagnostics too
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.INFO if args.verbose else logging.WARNING)
    propagate, log.propagate = log.propagate, False
    try:
        return args.func(args)
    except (UnknownTheorem, UnknownGallery) as exc:
        log.error("unknown name %s", exc)
        return EXIT_INPUT
    except (FrameError, ValueError) as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return EXIT_INPUT
    finally:
        log.removeHandler(handler)
        log.propagate = propagate


if __name__ == "__main__":
    sys.exit(main())
