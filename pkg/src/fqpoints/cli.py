"""Command-line front end: ``fqpoints <subcommand> [flags]``.

Exit codes: 0 success, 1 a verify check failed, 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import bounds, codes, varieties, verify
from .errors import FqPointsError, ParseError
from .gf import GF, field_create, field_from_q
from .poly import parse_poly
from .varieties import DEFAULT_SEED

BOUND_CHOICES = ("schwarz_zippel", "serre", "tb", "zanella", "couvreur", "couvreur_equidim",
                 "ci", "tb_lower", "homma", "zanella_set")
PRM_ACTIONS = ("matrix", "weights", "closed-forms", "plotkin", "geometric")


class UsageError(Exception):
    """Validation failure reported with exit code 2."""


def _common(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("parameters")
    for name in ("q", "p", "k", "d", "m", "r", "s", "a", "n", "deg"):
        g.add_argument(f"--{name}", type=int)
    g.add_argument("--components", help="component data as 'n:deg,n:deg,...'")
    g.add_argument("--mode", choices=("exhaustive", "randomized"), default="exhaustive")
    g.add_argument("--budget", type=int, default=10_000)
    g.add_argument("--seed", type=int, default=DEFAULT_SEED)
    g.add_argument("--threads", type=int, default=1)
    g.add_argument("--format", choices=("table", "json", "csv"), default="table")
    g.add_argument("--out", type=Path)
    g.add_argument("--timing", action="store_true", help="include wall-clock times in output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fqpoints",
                                     description="Point counts of varieties over finite fields.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="evaluate a closed-form bound")
    p.add_argument("name", choices=BOUND_CHOICES)
    _common(p)

    p = sub.add_parser("count", help="count common projective zeros of the forms in FILE")
    p.add_argument("file", type=Path)
    _common(p)

    p = sub.add_parser("search", help="maximum point count over r-dim spaces of forms")
    _common(p)

    p = sub.add_parser("census", help="TB value vs Zanella bound for every r (quadrics)")
    _common(p)

    p = sub.add_parser("prm", help="projective Reed-Muller code computations")
    p.add_argument("action", choices=PRM_ACTIONS)
    _common(p)

    p = sub.add_parser("verify", help="re-derive the headline numerical results")
    p.add_argument("suite", choices=("fast", "full"))
    _common(p)
    return parser


# -- argument helpers ---------------------------------------------------------

def _need(args, *names: str) -> list[int]:
    out = []
    for name in names:
        v = getattr(args, name)
        if v is None:
            raise UsageError(f"missing required parameter --{name}")
        out.append(v)
    return out


def _positive(args, *names: str) -> None:
    for name in names:
        v = getattr(args, name)
        if v is not None and v < 1:
            raise UsageError(f"--{name} must be >= 1, got {v}")


def _field(args) -> GF:
    if args.q is not None:
        if args.p is not None or args.k is not None:
            raise UsageError("give either --q or --p/--k, not both")
        try:
            return field_from_q(args.q)
        except FqPointsError as err:
            raise UsageError(f"--q: {err}") from None
    if args.p is None:
        raise UsageError("missing required parameter --q (or --p with optional --k)")
    try:
        return field_create(args.p, 1 if args.k is None else args.k)
    except FqPointsError as err:
        raise UsageError(f"--p/--k: {err}") from None


def _q(args) -> int:
    return _field(args).q


def _parse_components(text: str | None) -> list[tuple[int, int]]:
    if not text:
        raise UsageError("missing required parameter --components")
    out = []
    for item in text.split(","):
        try:
            n, deg = item.split(":")
            out.append((int(n), int(deg)))
        except ValueError:
            raise UsageError(f"--components: bad item {item!r}, expected n:deg") from None
    return out


# -- rendering ----------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "-"
    if isinstance(v, (list, tuple)):
        return " ".join(_fmt(x) for x in v)
    return str(v)


def _kv_table(pairs: dict) -> str:
    width = max(len(k) for k in pairs)
    return "".join(f"{k.ljust(width)}  {_fmt(v)}\n" for k, v in pairs.items())


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _no_csv(args, what: str) -> None:
    if args.format == "csv":
        raise UsageError(f"--format csv is not available for {what}")


# -- subcommands --------------------------------------------------------------

def cmd_bound(args) -> str:
    name = args.name
    _positive(args, "d", "m", "r")
    if name == "schwarz_zippel":
        d, m = _need(args, "d", "m")
        res = bounds.schwarz_zippel_bound(d, m, _q(args))
    elif name == "serre":
        d, m = _need(args, "d", "m")
        res = bounds.serre_bound(d, m, _q(args))
    elif name == "tb":
        d, m, r = _need(args, "d", "m", "r")
        res = bounds.tb_bound(d, m, r, _q(args))
    elif name == "zanella":
        m, r = _need(args, "m", "r")
        res = bounds.zanella_quadric_bound(m, r, _q(args))
    elif name == "couvreur":
        (m,) = _need(args, "m")
        res = bounds.couvreur_bound(m, _q(args), _parse_components(args.components))
    elif name == "couvreur_equidim":
        m, n, deg = _need(args, "m", "n", "deg")
        res = bounds.couvreur_equidim_bound(m, _q(args), n, deg)
    elif name == "ci":
        d, m, r = _need(args, "d", "m", "r")
        cmp = bounds.ci_compare(d, m, r, _q(args))
        _no_csv(args, "bound ci")
        if args.format == "json":
            return _json(cmp.to_dict())
        return _kv_table({"T_r": cmp.T.value, "C_r": cmp.C.value, "relation": cmp.relation,
                          "hypothesis_ok": cmp.T.hypothesis_ok, "note": cmp.T.note or "-"})
    elif name == "tb_lower":
        d, m, r = _need(args, "d", "m", "r")
        value = bounds.tb_lower_bound_ci(d, m, r, _q(args))
        _no_csv(args, "bound tb_lower")
        if args.format == "json":
            return _json({"name": "tb_lower", "value": value,
                          "params": {"d": d, "m": m, "r": r, "q": args.q}})
        return _kv_table({"bound": "tb_lower", "value": value})
    elif name == "homma":
        a, m = _need(args, "a", "m")
        res = bounds.homma_bound(a, m, _q(args))
    else:  # zanella_set
        (a,) = _need(args, "a")
        res = bounds.zanella_set(a, _q(args))
    _no_csv(args, "bound")
    if args.format == "json":
        return _json(res.to_dict())
    return _kv_table({"bound": res.name, "value": res.value,
                      "hypothesis_ok": res.hypothesis_ok, "note": res.note or "-"})


def read_poly_file(path: Path, F: GF, m: int | None) -> list:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err.strerror}") from None
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if body.strip():
            lines.append((lineno, body))
    if not lines:
        raise UsageError(f"{path}: no polynomials")
    if m is None:
        # one ambient space for the whole file: the largest variable index used
        polys = [parse_poly(body, F, line=n) for n, body in lines]
        m = max(f.m for f in polys)
    return [parse_poly(body, F, m, line=n) for n, body in lines]


def cmd_count(args) -> str:
    _positive(args, "m")
    F = _field(args)
    family = read_poly_file(args.file, F, args.m)
    m = family[0].m
    count = varieties.count_projective_zeros(family, m, F)
    _no_csv(args, "count")
    out = {"count": count, "m": m, "q": F.q, "polynomials": len(family)}
    return _json(out) if args.format == "json" else _kv_table(out)


def cmd_search(args) -> str:
    d, m, r = _need(args, "d", "m", "r")
    _positive(args, "d", "m", "r", "threads")
    F = _field(args)
    rep = varieties.search_max_points(d, m, r, F, mode=args.mode, budget=args.budget,
                                      seed=args.seed, threads=args.threads)
    _no_csv(args, "search")
    out = rep.to_dict(timing=args.timing)
    if args.mode == "exhaustive":
        out["seed"] = None
    if args.format == "json":
        return _json(out)
    if not args.timing:
        del out["elapsed_ms"]
    out["witness"] = "; ".join(out["witness"])
    return _kv_table(out)


def cmd_census(args) -> str:
    (m,) = _need(args, "m")
    q = _q(args)
    try:
        rows = bounds.tb_zanella_census(m, q)
    except FqPointsError as err:
        raise UsageError(f"--m: {err}") from None
    failing = bounds.census_failing(rows)
    floor = math.comb(m - 1, 2)
    summary = f"{len(failing)} failing rows (C(m-1,2) = {floor}) for m={m}, q={q}"
    if args.format == "json":
        return _json({"m": m, "q": q, "failing": len(failing), "expected_min": floor,
                      "rows": [{c: getattr(row, c) for c in bounds.CENSUS_COLUMNS}
                               | {"label": row.label} for row in rows]})
    if args.format == "csv":
        return bounds.census_csv(rows) + f"# {summary}\n"
    header = bounds.CENSUS_COLUMNS + ("label",)
    body = [[str(getattr(row, c)) for c in header] for row in rows]
    widths = [max(len(h), *(len(b[i]) for b in body)) for i, h in enumerate(header)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths)).rstrip()]
    lines += ["  ".join(v.rjust(w) for v, w in zip(b, widths)).rstrip() for b in body]
    return "\n".join(lines) + f"\n{summary}\n"


def _hierarchy_out(args, h: codes.WeightHierarchy) -> str:
    if args.format == "json":
        return h.to_json() + "\n"
    if args.format == "csv":
        return h.to_csv()
    return _fmt(h.as_list()) + "\n"


def cmd_prm(args) -> str:
    d, m = _need(args, "d", "m")
    _positive(args, "d", "m", "threads")
    F = _field(args)
    action = args.action
    if action == "closed-forms":
        if d != 2:
            raise UsageError(f"--d: closed forms are known only for d = 2, got {d}")
        return _hierarchy_out(args, codes.prm_quadric_closed_forms(m, F.q))
    if action == "geometric":
        return _hierarchy_out(args, codes.geometric_hierarchy(d, m, F, threads=args.threads))
    C = codes.prm_code(d, m, F)
    if action == "matrix":
        _no_csv(args, "prm matrix")
        if args.format == "json":
            return _json(C.to_dict())
        return codes.generator_matrix_text(C)
    if action == "weights":
        if args.r is not None:
            if not 1 <= args.r <= C.k:
                raise UsageError(f"--r must lie in [1, {C.k}], got {args.r}")
            h = codes.WeightHierarchy({args.r: codes.higher_weight(C, args.r, args.threads)},
                                      "subspace_search", C.label)
        else:
            h = codes.weight_hierarchy(C, threads=args.threads)
        return _hierarchy_out(args, h)
    # plotkin
    _no_csv(args, "prm plotkin")
    rep = codes.plotkin_check(C)
    out = rep.to_dict()
    return _json(out) if args.format == "json" else _kv_table(out)


def cmd_verify(args) -> tuple[str, int]:
    _no_csv(args, "verify")

    def progress(res: verify.CheckResult) -> None:
        print(f"{res.name}: {res.elapsed_s:.2f} s", file=sys.stderr)

    results = verify.run_suite(args.suite, seed=args.seed, on_result=progress)
    failed = [r for r in results if not r.ok]
    if args.format == "json":
        text = _json({"suite": args.suite, "passed": not failed, "checks": [
            {"name": r.name, "ok": r.ok,
             "mismatches": [{"case": str(c), "expected": str(e), "observed": str(o)}
                            for c, e, o in r.mismatches]}
            for r in results]})
    else:
        lines = []
        for r in results:
            lines.append(f"{'PASS' if r.ok else 'FAIL'} {r.name}")
            if not r.ok:
                lines.append(r.diff())
        lines.append(f"{len(results) - len(failed)}/{len(results)} checks passed")
        text = "\n".join(lines) + "\n"
    return text, 1 if failed else 0


COMMANDS = {"bound": cmd_bound, "count": cmd_count, "search": cmd_search,
            "census": cmd_census, "prm": cmd_prm}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            text, code = cmd_verify(args)
        else:
            text, code = COMMANDS[args.command](args), 0
    except UsageError as err:
        print(f"fqpoints {args.command}: error: {err}", file=sys.stderr)
        return 2
    except ParseError as err:
        print(f"fqpoints {args.command}: parse error: {err}", file=sys.stderr)
        return 2
    except FqPointsError as err:
        print(f"fqpoints {args.command}: error: {type(err).__name__}: {err}", file=sys.stderr)
        return 2
    if args.out is not None:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
