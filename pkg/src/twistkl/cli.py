"""Command-line front end: ``twistkl involutions|tables|verify``.

Exit codes: 0 pass, 1 verified-property failure, 2 usage error,
3 internal consistency failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .cells import Cells
from .coxeter import Group, parse_group_spec, parse_star
from .errors import InternalConsistencyError, TwistKLError, UsageError, VerificationFailure
from .exactpoly import LaurentPoly, substitute_power
from .hecke import HeckeAlgebra
from .invmod import InvolutionModule

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    type_name: str | None = None
    matrix_path: str | None = None
    star: str | None = None
    max_length: int | None = None
    fmt: str = "json"
    out: str | None = None
    threads: int = 1
    kind: str | None = None
    suite: str | None = None

    def build_group(self) -> Group:
        matrix_text = None
        if self.matrix_path is not None:
            try:
                with open(self.matrix_path) as fh:
                    matrix_text = fh.read()
            except OSError as exc:
                raise UsageError(f"cannot read matrix file: {exc}") from exc
        mat = parse_group_spec(self.type_name, matrix_text)
        g = Group(mat, parse_star(self.star, mat.rank))
        if not g.is_finite and self.max_length is None:
            raise UsageError("infinite group: --max-length is required")
        if self.threads < 1:
            raise UsageError("--threads must be positive")
        if self.max_length is not None and self.max_length < 0:
            raise UsageError("--max-length must be nonnegative")
        # fix element ids before any parallel work
        g.elements_up_to(self.max_length)
        return g


def _group_label(cfg: RunConfig, g: Group):
    return cfg.type_name if cfg.type_name is not None else g.matrix.to_json()


def _sorted(g: Group, ws):
    return sorted(ws, key=lambda w: (g.length(w), g.word(w)))


def _involutions(cfg: RunConfig, g: Group):
    return _sorted(g, g.twisted_involutions_up_to(cfg.max_length))


def _elements(cfg: RunConfig, g: Group):
    return _sorted(g, g.elements_up_to(cfg.max_length))


def _emit(cfg: RunConfig, g: Group, kind: str, rows: list[dict], extra: dict | None = None) -> None:
    if cfg.fmt == "csv":
        buf = io.StringIO()
        fields = list(rows[0].keys()) if rows else ["w", "y", "poly"]
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in r.items()})
        text = buf.getvalue()
    else:
        doc = {"group": _group_label(cfg, g), "star": [i + 1 for i in g.star_perm], "kind": kind}
        if extra:
            doc.update(extra)
        doc["rows"] = rows
        text = json.dumps(doc, indent=1) + "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def cmd_involutions(cfg: RunConfig) -> int:
    g = cfg.build_group()
    rows = []
    for w in _involutions(cfg, g):
        rows.append(
            {
                "id": w,
                "length": g.length(w),
                "word": g.word_str(w),
                "eps": g.parity(w),
                "classes": [g.classify_case(s, w).value for s in range(g.rank)],
            }
        )
    _emit(cfg, g, "involutions", rows, {"count": len(rows)})
    return EXIT_OK


def cmd_tables(cfg: RunConfig) -> int:
    g = cfg.build_group()
    kind = cfg.kind
    rows = []
    if kind == "kl":
        H = HeckeAlgebra(g)
        ws = _elements(cfg, g)
        H.compute_columns(ws, cfg.threads)
        for w in ws:
            for y in _sorted(g, g.interval_set(w)):
                P = H.kl_polynomial(y, w)
                rows.append({"w": g.word_str(w), "y": g.word_str(y), "poly": str(substitute_power(P, 4)),
                             "coeffs": list(P.coeffs)})
        extra = {"variable": "q = v^4"}
    else:
        M = InvolutionModule(g)
        ws = _involutions(cfg, g)
        extra = {}
        if kind in ("skl", "mu"):
            M.compute_columns(ws, cfg.threads)
            extra = {"variable": "u = v^2"}
        for w in ws:
            if kind == "bar":
                col = M.bar_a(w)
                for y in _sorted(g, col):
                    rows.append({"w": g.word_str(w), "y": g.word_str(y), "poly": str(col[y])})
                continue
            for y in _sorted(g, [y for y in g.interval_set(w) if g.is_twisted_involution(y)]):
                S = M.sigma_polynomial(y, w)
                row = {"w": g.word_str(w), "y": g.word_str(y), "poly": str(substitute_power(S, 2))}
                if kind == "skl":
                    row["coeffs"] = list(S.coeffs)
                else:
                    m1, m2 = M.mu_primes(y, w)
                    row["mu_prime"] = m1
                    row["mu_dprime"] = m2
                rows.append(row)
    _emit(cfg, g, kind, rows, extra)
    return EXIT_OK


def _pmap(cfg: RunConfig, fn, items):
    if cfg.threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=cfg.threads) as ex:
        return list(ex.map(fn, items))


def _require_finite(g: Group, suite: str) -> None:
    if not g.is_finite:
        raise UsageError(f"verify {suite} needs a finite group")


def cmd_verify(cfg: RunConfig) -> int:
    g = cfg.build_group()
    suite = cfg.suite
    M = InvolutionModule(g)
    report: dict = {"group": _group_label(cfg, g), "star": [i + 1 for i in g.star_perm], "suite": suite}

    if suite == "relations":
        basis = _involutions(cfg, g) if cfg.max_length is not None else None
        report.update(M.verify_module_relations(basis))
    elif suite == "positivity-point":
        ws = _involutions(cfg, g)
        M.compute_columns(ws, cfg.threads)
        M.hecke.compute_columns(ws, cfg.threads)
        pairs = [(y, w) for w in ws for y in _sorted(g, [y for y in g.interval_set(w) if g.is_twisted_involution(y)])]
        _pmap(cfg, lambda p: M.positivity_pointwise(*p), pairs)
        report.update({"checked": len(pairs), "ok": True})
    elif suite == "positivity-module":
        _require_finite(g, suite)
        M.hecke.product_table()
        I = _involutions(cfg, g)
        elems = _elements(cfg, g)
        M.compute_columns(I)

        def run(z):
            out = []
            for w in I:
                b = M.b_const(z, w)
                out.extend(M.positivity_module(z, w, w2, b) for w2 in I)
            return out

        reps = [r for chunk in _pmap(cfg, run, elems) for r in chunk]
        odd = [r for r in reps if r.b_has_odd_degree]
        for r in reps:
            if not r.ok:
                raise VerificationFailure(
                    "(h~ +- b)/2 not in N[u,u^-1]",
                    z=g.word_str(r.z), w=g.word_str(r.w), w2=g.word_str(r.w2),
                    h_tilde=str(r.h_tilde), b=str(r.b),
                )
        report.update(
            {
                "checked": len(reps),
                "ok": True,
                "odd_degree_b": len(odd),
                "odd_degree_examples": [
                    {"z": g.word_str(r.z), "w": g.word_str(r.w), "w2": g.word_str(r.w2), "b": str(r.b)}
                    for r in odd[:5]
                ],
            }
        )
    elif suite in ("cells-72", "parity"):
        _require_finite(g, suite)
        C = Cells(M)
        d = C.two_sided_cells()
        fn = C.verify_72 if suite == "cells-72" else C.parity_split
        results = [fn(c) for c in range(len(d.cells))]
        report.update({"cells": results, "ok": True})
    else:  # argparse restricts choices
        raise UsageError(f"unknown suite {suite}")
    sys.stdout.write(json.dumps(report, indent=1) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--type", dest="type_name", help='named type, e.g. A3, B3, H3, I2(7), A2~, A1xA1')
    grp.add_argument("--matrix", dest="matrix_path", help='JSON file {"rank": n, "m": [[...]]}')
    p.add_argument("--star", help="diagram involution as a 1-based permutation, e.g. 3,2,1")
    p.add_argument("--max-length", type=int, dest="max_length")
    p.add_argument("--format", choices=["json", "csv"], default="json", dest="fmt")
    p.add_argument("--out")
    p.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twistkl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("involutions", help="list twisted involutions")
    _add_common(p)
    p = sub.add_parser("tables", help="KL / sigma-KL / mu / bar tables")
    p.add_argument("kind", choices=["kl", "skl", "mu", "bar"])
    _add_common(p)
    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=["relations", "positivity-point", "positivity-module", "cells-72", "parity"])
    _add_common(p)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(args).items()})
    handler = {"involutions": cmd_involutions, "tables": cmd_tables, "verify": cmd_verify}[cfg.command]
    try:
        return handler(cfg)
    except UsageError as exc:
        print(f"twistkl: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except VerificationFailure as exc:
        sys.stdout.write(json.dumps({"ok": False, "error": type(exc).__name__, "message": str(exc),
                                     "group": cfg.type_name or cfg.matrix_path, "star": cfg.star,
                                     "suite": cfg.suite, "tuple": exc.payload}, indent=1, default=str) + "\n")
        return EXIT_FAIL
    except InternalConsistencyError as exc:
        sys.stderr.write(json.dumps({"ok": False, "error": type(exc).__name__, "message": str(exc),
                                     "group": cfg.type_name or cfg.matrix_path, "star": cfg.star,
                                     "payload": exc.payload}, indent=1, default=str) + "\n")
        return EXIT_INTERNAL
    except TwistKLError as exc:
        print(f"twistkl: error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
