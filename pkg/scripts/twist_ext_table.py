"""Ext between Frobenius twists F^(1), two ways: directly over the Schur
algebra and through the pairing with B_1.  Prints one row per pair."""
import argparse
import json
import time
from dataclasses import asdict, dataclass

from polyfunctors import schur as sc
from polyfunctors import twistext as tw


@dataclass
class TableConfig:
    p: int = 2
    d: int = 2
    max_degree: int = 4
    sources: tuple = ("gamma(2)", "gamma(1,1)", "s(2)")
    targets: tuple = ("gamma(2)", "s(2)", "lambda(2)", "T(2)")


def run(cfg):
    A = tw.compute_A_r(1, cfg.p)
    D = cfg.d * cfg.p
    rows = []
    for G in cfg.sources:
        for F in cfg.targets:
            t0 = time.time()
            direct = sc.ext_poly(f"compose({G},twist(1,id))", f"compose({F},twist(1,id))",
                                 D=D, max_degree=cfg.max_degree, p=cfg.p)
            via = tw.ext_via_pairing(G, F, 1, cfg.p, A=A)
            rows.append({"source": G, "target": F, "direct": direct,
                         "pairing": via.as_list(cfg.max_degree), "conjectural": via.conjectural,
                         "seconds": round(time.time() - t0, 2)})
    return {"config": asdict(cfg), "A_1": A.as_list(), "rows": rows}


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--max-degree", type=int, default=4)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    out = run(TableConfig(p=args.p, max_degree=args.max_degree))
    if args.json:
        print(json.dumps(out, indent=2))
        return
    print("A_1 =", out["A_1"])
    for r in out["rows"]:
        flag = "  (conjectural)" if r["conjectural"] else ""
        same = "==" if r["direct"] == r["pairing"] else "!="
        print(f"{r['source']:>11} -> {r['target']:<10} {r['direct']} {same} {r['pairing']}{flag}")


if __name__ == "__main__":
    main()
