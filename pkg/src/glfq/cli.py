"""Command-line driver: character tables, identity verification, Jacquet
decompositions and Fourier spectra as reproducible batch commands.

Exit codes: 0 success, 1 identity failure, 2 invalid parameters,
3 enumeration/size budget exceeded.  All files are written atomically
(temp + rename); timestamps only ever appear in report headers, value
files are byte-identical across reruns and thread counts.
"""

import argparse
import csv
import io
import json
import os
import sys
import time
from pathlib import Path

from . import fourier, gf, glchar, matgrp, oracle
from .classfun import decompose, twisted_jacquet

EXIT_OK = 0
EXIT_IDENTITY = 1
EXIT_INVALID = 2
EXIT_BUDGET = 3


class InvalidParams(ValueError):
    pass


def _atomic_write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)
    return path


def write_json(path, obj):
    return _atomic_write(path, json.dumps(obj, indent=1, sort_keys=True) + "\n")


def write_csv(path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(row)
    return _atomic_write(path, buf.getvalue())


def _check_prime_power(q):
    try:
        return gf.prime_power(q)
    except gf.FieldError as e:
        raise InvalidParams(str(e))


def _default_theta0(n, q):
    exps = glchar.admissible_exponents(n, q)
    if not exps:
        raise InvalidParams(f"no admissible theta0 for (n={n}, q={q})")
    return exps[0]


# ---------------------------------------------------------------------------
# Commands

def cmd_table(cfg):
    q = cfg["q"]
    outdir = Path(cfg["out"])
    fmt = cfg["format"]
    if cfg.get("classes"):
        n = cfg["n"]
        if n is None or n < 1:
            raise InvalidParams("--classes needs --n")
        _check_prime_power(q)
        kind = cfg.get("kind") or matgrp.GL_CLASS
        classes = matgrp.enumerate_classes(n, q, kind)
        rows = [(str(c.label), c.size,
                 " ".join(str(x) for row in matgrp.mat_space(n, q).decode(c.rep)
                          for x in row))
                for c in classes]
        return [write_csv(outdir / f"classes-{kind}-n{n}-q{q}.csv",
                          ["label", "class_size", "representative"], rows)]
    if cfg.get("oracle"):
        n = cfg["n"]
        if n is None:
            raise InvalidParams("--oracle needs --n")
        _check_prime_power(q)
        g = oracle.enumerate_group(n, q)
        table = oracle.character_table(g)
        tag = f"oracle-n{n}-q{q}"
    else:
        if q not in (2, 3, 4, 5, 7):
            raise InvalidParams(f"gl2 table supports q in 2,3,4,5,7 (got {q})")
        table = glchar.gl2_table(q).table
        tag = f"gl2-q{q}"
    if fmt == "json":
        obj = {"table": tag, "rows": [chi.to_json() for chi in table]}
        return [write_json(outdir / f"table-{tag}.json", obj)]
    group = table[0].group
    rows = []
    for chi in table:
        for lab in group.labels:
            v = chi.values[lab]
            rows.append((chi.name, str(lab), repr(v.real), repr(v.imag)))
    return [write_csv(outdir / f"table-{tag}.csv",
                      ["irreducible", "class", "re", "im"], rows)]


def cmd_verify(cfg):
    n, q = cfg["n"], cfg["q"]
    if n is None or n < 1:
        raise InvalidParams("verify needs --n >= 1")
    _check_prime_power(q)
    if 2 * n > 4:
        raise InvalidParams(f"verify supports n <= 2 (GL_{2*n} requested)")
    outdir = Path(cfg["out"])
    theta0 = cfg.get("theta0")
    report_path = outdir / f"verify-n{n}-q{q}.json"
    exps = glchar.admissible_exponents(n, q)
    if theta0 is None:
        if not exps:
            report = {"n": n, "q": q, "admissible": False,
                      "reason": "no admissible theta0",
                      "generated_at": time.strftime("%Y-%m-%dT%H:%M:%S")}
            write_json(report_path, report)
            return EXIT_INVALID, [report_path]
        theta0 = exps[0]
    report = glchar.verify_identities(n, q, theta0)
    report["generated_at"] = time.strftime("%Y-%m-%dT%H:%M:%S")
    write_json(report_path, report)
    if not report.get("admissible"):
        return EXIT_INVALID, [report_path]
    ok = all(i["pass"] for i in report["identities"])
    return (EXIT_OK if ok else EXIT_IDENTITY), [report_path]


def cmd_jacquet(cfg):
    n, q = cfg["n"], cfg["q"]
    if n is None or n not in (1, 2):
        raise InvalidParams("jacquet needs --n in {1, 2} (table-backed sizes)")
    _check_prime_power(q)
    outdir = Path(cfg["out"])
    theta0 = cfg.get("theta0")
    if theta0 is None:
        theta0 = _default_theta0(n, q)
    if not glchar.admissible_theta0(n, q, theta0):
        raise InvalidParams(f"theta0 exponent {theta0} is degenerate for (n={n}, q={q})")
    chi_pp = glchar.principal_series_pi_pi(n, q, theta0)
    st, sp = glchar.st2_sp2(n, q, theta0)
    table = glchar.gl_table(n, q)
    decomps = []
    for chi in (chi_pp, st, sp):
        j = twisted_jacquet(chi)
        dec = decompose(j, table)
        decomps.append((chi.name, dec))
    fmt = cfg["format"]
    paths = []
    if fmt == "json":
        obj = {"n": n, "q": q, "theta0_exponent": theta0,
               "tower": glchar.standard_tower(n, q).to_config(),
               "basis": [chi.name for chi in table],
               "decompositions": {name: dec.multiplicities
                                  for name, dec in decomps}}
        paths.append(write_json(outdir / f"jacquet-n{n}-q{q}-t{theta0}.json", obj))
    else:
        rows = []
        for name, dec in decomps:
            for irr, mult in zip(dec.basis, dec.multiplicities):
                rows.append((name, irr, mult))
        paths.append(write_csv(outdir / f"jacquet-n{n}-q{q}-t{theta0}.csv",
                               ["function", "irreducible", "multiplicity"], rows))
    return paths


def _parse_orbit_spec(spec, n, q):
    kind, _, rest = spec.partition(":")
    if kind != "nilpotent" or not rest.startswith("[") or not rest.endswith("]"):
        raise InvalidParams(f"orbit spec {spec!r}: expected nilpotent:[parts]")
    try:
        parts = tuple(sorted((int(x) for x in rest[1:-1].split(",")), reverse=True))
    except ValueError:
        raise InvalidParams(f"orbit spec {spec!r}: bad partition")
    if sum(parts) != n:
        raise InvalidParams(f"partition {list(parts)} does not sum to n={n}")
    lab = matgrp.ClassLabel(matgrp.MSD_ORBIT, (((0, 1), parts),))
    return lab


def cmd_fourier(cfg):
    n, q = cfg["n"], cfg["q"]
    if n is None or n < 1:
        raise InvalidParams("fourier needs --n")
    _check_prime_power(q)
    if q ** (n * n) > fourier.DENSE_BUDGET:
        raise matgrp.BudgetError(f"q^(n^2) = {q ** (n * n)} beyond the dense budget")
    outdir = Path(cfg["out"])
    threads = cfg.get("threads") or 1
    ctx = fourier.orbit_context(n, q)
    targets = []
    if cfg.get("orbit"):
        lab = _parse_orbit_spec(cfg["orbit"], n, q)
        targets.append((f"nilpotent:{list(lab.pairs[0][1])}",
                        fourier.orbit_indicator(n, q, lab)))
    elif cfg.get("cone"):
        targets.append(("cone", fourier.cone_indicator(n, q)))
    else:
        for i in ctx.nilpotent_indices():
            targets.append((f"nilpotent:{str(ctx.labels[i])}",
                            fourier.orbit_indicator(n, q, ctx.labels[i])))
        for i in ctx.semisimple_indices():
            targets.append((f"semisimple:{str(ctx.labels[i])}",
                            fourier.orbit_indicator(n, q, ctx.labels[i])))
        targets.append(("cone", fourier.cone_indicator(n, q)))
    spec_rows = []
    parseval_rows = []
    for name, fn in targets:
        spectrum = fourier.invariant_spectrum(fn, threads=threads)
        for lab, coeff, size in spectrum:
            spec_rows.append((name, str(lab), repr(coeff.real), repr(coeff.imag),
                              size))
        lhs, rhs = fourier.parseval_check(fn)
        parseval_rows.append((name, repr(lhs), repr(rhs),
                              "pass" if abs(lhs - rhs) <= 1e-8 * max(1.0, abs(rhs))
                              else "fail"))
    paths = []
    if cfg["format"] == "json":
        obj = {"n": n, "q": q,
               "spectra": [{"function": f, "orbit": l, "re": float(re),
                            "im": float(im), "orbit_size": s}
                           for f, l, re, im, s in spec_rows],
               "parseval": [{"function": f, "lhs": float(a), "rhs": float(b),
                             "status": st}
                            for f, a, b, st in parseval_rows]}
        paths.append(write_json(outdir / f"spectra-n{n}-q{q}.json", obj))
    else:
        paths.append(write_csv(outdir / f"spectra-n{n}-q{q}.csv",
                               ["function", "orbit", "re", "im", "orbit_size"],
                               spec_rows))
        paths.append(write_csv(outdir / f"parseval-n{n}-q{q}.csv",
                               ["function", "lhs", "rhs", "status"],
                               parseval_rows))
    return paths


# ---------------------------------------------------------------------------
# Argument handling

def build_parser():
    ap = argparse.ArgumentParser(
        prog="glfq",
        description="Characters of GL_n(F_q), twisted Jacquet modules and "
                    "Fourier transforms on M_n(F_q).")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--q", type=int, help="field size (prime power)")
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--out", default=None, help="output directory (default: out)")
        p.add_argument("--format", choices=("json", "csv"), default=None)
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads (results are thread-count independent)")
        p.add_argument("--config", default=None,
                       help="JSON config file; explicit flags override it")

    p = sub.add_parser("table", help="character or class tables")
    common(p)
    p.add_argument("--gl2", action="store_true", help="explicit GL_2 table")
    p.add_argument("--oracle", action="store_true", help="Dixon-Schneider table")
    p.add_argument("--classes", action="store_true", help="conjugacy class CSV")
    p.add_argument("--kind", choices=(matgrp.GL_CLASS, matgrp.MSD_ORBIT),
                   default=None)

    p = sub.add_parser("verify", help="section-3 identity suite")
    common(p)
    p.add_argument("--theta0", type=int, default=None,
                   help="exponent of theta0 against the canonical generator")

    p = sub.add_parser("jacquet", help="twisted Jacquet decompositions")
    common(p)
    p.add_argument("--theta0", type=int, default=None)

    p = sub.add_parser("fourier", help="orbit-indicator Fourier spectra")
    common(p)
    p.add_argument("--orbit", default=None, help="e.g. nilpotent:[2]")
    p.add_argument("--cone", action="store_true")
    return ap


def load_config(args):
    cfg = {}
    if args.config:
        with open(args.config) as fh:
            cfg.update(json.load(fh))
    for key in ("q", "n", "out", "format", "threads", "theta0", "orbit",
                "cone", "gl2", "oracle", "classes", "kind"):
        v = getattr(args, key, None)
        if v not in (None, False):
            cfg[key] = v
    cfg.setdefault("out", "out")
    cfg.setdefault("format", "json")
    if cfg.get("threads") is None:
        cfg["threads"] = os.cpu_count() or 1
    if cfg.get("q") is None:
        raise InvalidParams("--q is required")
    if cfg["q"] < 2:
        raise InvalidParams(f"q={cfg['q']} is not a prime power")
    return cfg


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        if args.command == "table":
            cmd_table(cfg)
            return EXIT_OK
        if args.command == "verify":
            code, _ = cmd_verify(cfg)
            return code
        if args.command == "jacquet":
            cmd_jacquet(cfg)
            return EXIT_OK
        if args.command == "fourier":
            cmd_fourier(cfg)
            return EXIT_OK
        raise InvalidParams(f"unknown command {args.command}")
    except InvalidParams as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (gf.FieldError, glchar.NoAdmissibleTheta, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except matgrp.BudgetError as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
