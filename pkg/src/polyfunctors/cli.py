"""Command-line surface.

    polyfunctors ext poly "twist(1,id)" "twist(1,id)" --p 2 --n 2 --max-degree 5
    polyfunctors ext coherent f.json g.json --p 3 --group S2
    polyfunctors verify recollement --p 2 --n 3

Exit codes: 0 ok, 2 parse error, 3 resource guard, 4 verification failure.
"""
import argparse
import csv
import io
import json
import re
import sys
from dataclasses import asdict, dataclass

from . import coherent as co
from . import grouprep as gr
from . import schur as sc
from . import suites as su

SCHEMA_VERSION = 1
EXIT_OK, EXIT_PARSE, EXIT_RESOURCE, EXIT_VERIFY = 0, 2, 3, 4


class ParseError(ValueError):
    pass


@dataclass
class RunConfig:
    p: int = 2
    n: int = None
    D: int = None
    max_degree: int = 3
    seed: int = 0
    group: str = "S2"
    r: int = 1
    d: int = 2
    max_entries: int = sc.MAX_AMBIENT
    max_width: int = sc.MAX_WIDTH
    slow: bool = False
    fmt: str = "json"

    def validate(self):
        if self.p < 2 or any(self.p % q == 0 for q in range(2, int(self.p ** 0.5) + 1)):
            raise ParseError(f"p = {self.p} is not prime")
        if self.max_degree < 0:
            raise ParseError("max degree must be non-negative")
        if self.D is not None and self.n is not None and self.D < self.n:
            raise ParseError("need D >= n for Schur computations")
        if self.fmt not in ("json", "csv", "pretty"):
            raise ParseError(f"unknown format {self.fmt!r}")
        return self


def _group(text):
    m = re.fullmatch(r"S(\d+)", text.strip())
    if not m or int(m.group(1)) < 1:
        raise ParseError(f"unknown group {text!r}; expected S<n>")
    return gr.symmetric_group(int(m.group(1)))


BUILTIN = {
    "hK": lambda G, p: co.h_of(gr.trivial_module(G, p)),
    "tK": lambda G, p: co.t_of(gr.trivial_module(G, p)),
    "hR": lambda G, p: co.h_of(gr.regular_module(G, p)),
    "tR": lambda G, p: co.t_of(gr.regular_module(G, p)),
    "H0": lambda G, p: co.hat_tate(G, p, 0),
    "H-1": lambda G, p: co.hat_tate(G, p, -1),
}


def load_presentation(arg, cfg):
    """A presentation file, or one of the built-in names over --group."""
    G = _group(cfg.group)
    if arg in BUILTIN:
        return BUILTIN[arg](G, cfg.p)
    try:
        with open(arg) as fh:
            f = co.presentation_from_json(json.load(fh))
    except OSError as e:
        raise ParseError(f"cannot read {arg}: {e.strerror}") from None
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"malformed presentation in {arg}: {e}") from None
    if f.p != cfg.p:
        raise ParseError(f"{arg} is over F_{f.p}, not F_{cfg.p}")
    if f.group.degree != G.degree:
        raise ParseError(f"{arg} is over S_{f.group.degree}, not {cfg.group}")
    return f


def cmd_ext(kind, lhs, rhs, cfg):
    if kind == "poly":
        try:
            F, G = sc.parse_expr(lhs), sc.parse_expr(rhs)
        except ValueError as e:
            raise ParseError(str(e)) from None
        n = F.degree(cfg.p)
        if G.degree(cfg.p) != n:
            raise ParseError("expressions have different degrees")
        D = cfg.D or max(n, cfg.n or 0)
        if D < n:
            raise ParseError(f"need D >= {n} for degree-{n} functors")
        dims = sc.ext_poly(F, G, D=D, max_degree=cfg.max_degree, p=cfg.p)
        meta = {"kind": "poly", "lhs": str(F), "rhs": str(G), "p": cfg.p, "n": n, "D": D}
    else:
        f, g = load_presentation(lhs, cfg), load_presentation(rhs, cfg)
        dims = co.ext_coherent_resolution(f, g, cfg.max_degree)
        meta = {"kind": "coherent", "lhs": lhs, "rhs": rhs, "p": cfg.p, "group": cfg.group}
    rows = [{"degree": k, "dim": int(v)} for k, v in enumerate(dims)]
    return {"schema_version": SCHEMA_VERSION, "command": "ext", **meta, "rows": rows}, EXIT_OK


def cmd_verify(suite, cfg):
    if suite == "recollement":
        ns = (cfg.n,) if cfg.n else (2, 3)
        checks = []
        for n in ns:
            checks += su.recollement_t(n, cfg.p, cfg.seed)
            checks += su.recollement_j(n, cfg.p, cfg.seed)
    elif suite == "products":
        checks = su.products_suite(cfg.p, cfg.seed)
    elif suite == "composition":
        checks = su.composition_suite(cfg.p, cfg.seed)
    else:
        checks = su.chal_suite(cfg.p, cfg.r, cfg.d)
    rows = [c.to_json() for c in checks]
    failed = sum(not c.ok for c in checks)
    out = {"schema_version": SCHEMA_VERSION, "command": "verify", "suite": suite, "p": cfg.p,
           "seed": cfg.seed, "passed": len(checks) - failed, "failed": failed, "rows": rows}
    return out, (EXIT_VERIFY if failed else EXIT_OK)


def render(report, fmt):
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    rows = report["rows"]
    keys = list(rows[0]) if rows else []
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    head = {k: v for k, v in report.items() if k != "rows"}
    lines = [" ".join(f"{k}={head[k]}" for k in sorted(head))]
    widths = {k: max(len(k), *(len(str(r[k])) for r in rows)) for k in keys}
    lines.append("  ".join(k.ljust(widths[k]) for k in keys))
    for r in rows:
        lines.append("  ".join(str(r[k]).ljust(widths[k]) for k in keys))
    return "\n".join(lines) + "\n"


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=2)
    common.add_argument("--n", type=int)
    common.add_argument("--dim", type=int, dest="D", help="D for Schur algebra computations")
    common.add_argument("--max-degree", type=int, default=3)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--group", default="S2")
    common.add_argument("--r", type=int, default=1)
    common.add_argument("--d", type=int, default=2)
    common.add_argument("--slow", action="store_true")
    common.add_argument("--format", dest="fmt", default="json", choices=["json", "csv", "pretty"])
    common.add_argument("--out", help="write the report here instead of stdout")

    ap = argparse.ArgumentParser(prog="polyfunctors", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)
    e = sub.add_parser("ext", parents=[common], help="graded Ext dimensions")
    e.add_argument("kind", choices=["poly", "coherent"])
    e.add_argument("lhs")
    e.add_argument("rhs")
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=["recollement", "products", "composition", "chal"])
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_PARSE
    keep = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    try:
        cfg = RunConfig(**keep).validate()
        sc.MAX_AMBIENT, sc.MAX_WIDTH = cfg.max_entries, cfg.max_width
        if args.command == "ext":
            report, code = cmd_ext(args.kind, args.lhs, args.rhs, cfg)
        else:
            report, code = cmd_verify(args.suite, cfg)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except sc.ResourceError as e:
        print(f"resource guard: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    report["config"] = {k: v for k, v in asdict(cfg).items() if k != "fmt"}
    text = render(report, cfg.fmt)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
