"""R^k j_* of S^2 twisted once (n = 4, p = 2) against the cohomology of the
subset complex tensored down, over a list of test modules."""
import argparse
import json
from dataclasses import asdict, dataclass

from polyfunctors import coherent as co
from polyfunctors import grouprep as gr
from polyfunctors import schur as sc


@dataclass
class ScanConfig:
    expr: str = "compose(s(2),twist(1,id))"
    n: int = 4
    p: int = 2
    top: int = 3
    seed: int = 0


def test_modules(n, p, seed):
    G = gr.symmetric_group(n)
    mods = {f"probe#{k}": X for k, X in enumerate(co.probe_family(G, p, seed))}
    for lam in [(n - 1, 1), (n - 2, 2)]:
        mods[f"cosyzygy M{lam}"] = gr.syzygy(gr.permutation_module(n, lam, p))[1].target
    if n == 4:
        D8 = gr.PermGroup(4, ((1, 2, 3, 0), (1, 0, 3, 2)), "custom")
        mods["K[G/D8]"] = gr.induce(G, D8, gr.trivial_module(D8, p))
    return mods


def run(cfg):
    F = sc.eval_expr(cfg.expr, cfg.n, cfg.p)
    R = [sc.derived_j_star(F, k) for k in range(cfg.top + 1)]
    B = gr.subset_complex(cfg.n, cfg.p)
    objs = [co.t_of(M) for M in B.terms]
    cx = co.CoherentComplex(objs, [co.t_map(d, objs[k], objs[k + 1]) for k, d in enumerate(B.maps)])
    H = [cx.cohomology(k) for k in range(cfg.top + 1)]
    rows = []
    for name, X in test_modules(cfg.n, cfg.p, cfg.seed).items():
        rows.append({"module": name, "dim": X.dim,
                     "R": [co.eval_dim(r, X) for r in R], "H": [co.eval_dim(h, X) for h in H]})
    zero = [co.is_zero_object(r) for r in R]
    return {"config": asdict(cfg), "R_is_zero": zero, "rows": rows}


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--top", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    out = run(ScanConfig(top=args.top))
    if args.json:
        print(json.dumps(out, indent=2))
        return
    print("R^k zero:", out["R_is_zero"])
    for r in out["rows"]:
        print(f"{r['module']:<18} dim {r['dim']:>3}  R {r['R']}  H {r['H']}")


if __name__ == "__main__":
    main()
