"""Verification suites: recollement axioms, products, composition, and the
twisted-Ext consistency check.  Each suite returns a list of Check rows."""
from dataclasses import dataclass

import numpy as np

from . import coherent as co
from . import grouprep as gr
from . import schur as sc
from . import twistext as tw


@dataclass
class Check:
    suite: str
    name: str
    ok: bool
    detail: str = ""

    def to_json(self):
        return {"suite": self.suite, "name": self.name, "status": "pass" if self.ok else "fail",
                "detail": self.detail}


def _hom_dim(f, g):
    return len(co.hom_coherent(f, g))


def coherent_corpus(G, p, seed=0, n_random=3):
    """h's and t's of small modules, Tate functors and seeded random presentations."""
    rng = np.random.default_rng(seed)
    K, R = gr.trivial_module(G, p), gr.regular_module(G, p)
    out = [co.h_of(K), co.t_of(K), co.h_of(R), co.hat_tate(G, p, 0), co.hat_tate(G, p, -1)]
    out += [co.random_presentation(G, p, rng) for _ in range(n_random)]
    return out


def poly_corpus(n, p):
    """Expressions of degree n: divided, symmetric, exterior and tensor powers, plus twists."""
    out = []
    for lam in co._partitions(n):
        a = ",".join(map(str, lam))
        out += [f"gamma({a})", f"s({a})", f"lambda({a})"]
    out.append(f"T({n})")
    if n == p:
        out += [f"ker(norm({n}))", f"coker(norm({n}))"]
    return out


# ------------------------------------------------------------ recollements

def recollement_t(n, p, seed=0, n_random=3):
    """C^0(G) / C(G) / G-modules via t^* = evaluation at K[G]."""
    G = gr.symmetric_group(n)
    tag = f"[t, n={n}, p={p}]"
    fs = coherent_corpus(G, p, seed, n_random)
    ms = co.probe_family(G, p, seed, n_random=1)
    out = []
    ok = True
    for M in ms:
        for f in fs:
            tf = co.t_star(f)
            ok &= _hom_dim(co.t_bang(M), f) == gr.hom_dim(M, tf)
            ok &= _hom_dim(f, co.t_lowerstar(M)) == gr.hom_dim(tf, M)
    out.append(Check("recollement", f"(i) adjunction dims {tag}", bool(ok)))
    ok = all(co.are_isomorphic(co.h_of(co.t_star(co.t_bang(M))), co.h_of(M))
             and co.are_isomorphic(co.h_of(co.t_star(co.t_lowerstar(M))), co.h_of(M)) for M in ms)
    out.append(Check("recollement", f"(ii) t*t_! = Id = t*t_* {tag}", ok))
    kernel = [co.r_star(f) for f in fs] + [co.r_shriek(f) for f in fs]
    kernel = [g for g in kernel if co.t_star(g).dim == 0]
    ok = len(kernel) == 2 * len(fs)
    for f in fs:
        a, b = co.r_star(f), co.r_shriek(f)
        for g in kernel[:4]:
            ok &= _hom_dim(a, g) == _hom_dim(f, g)
            ok &= _hom_dim(g, b) == _hom_dim(g, f)
    out.append(Check("recollement", f"(iii) i* -| i_* -| i^! dims {tag}", bool(ok)))
    ok = all(co.are_isomorphic(co.r_star(g), g) and co.are_isomorphic(co.r_shriek(g), g) for g in kernel)
    out.append(Check("recollement", f"(iv) i*i_* = Id = i^!i_* {tag}", ok))
    ok = all((co.t_star(f).dim == 0) == co.are_isomorphic(co.r_star(f), f) for f in fs + kernel)
    out.append(Check("recollement", f"(v) Ker t* = C^0 {tag}", ok))
    return out


def recollement_j(n, p, seed=0, n_random=3, D=None):
    """C_n^Y / C_n / P_n via j^*."""
    G = gr.symmetric_group(n)
    tag = f"[j, n={n}, p={p}]"
    fs = coherent_corpus(G, p, seed, n_random)
    fs += [co.h_of(Y) for Y in sc.young_modules(n, p)]
    Fs = [sc.eval_expr(e, D or n, p) for e in poly_corpus(n, p)]
    out = []
    ok = True
    for F in Fs:
        for f in fs:
            jf = sc.j_star(f, F.D)
            ok &= _hom_dim(sc.j_bang(F), f) == len(sc.hom_poly_modules(F, jf))
            ok &= _hom_dim(f, sc.j_lowerstar(F)) == len(sc.hom_poly_modules(jf, F))
    out.append(Check("recollement", f"(i) adjunction dims {tag}", bool(ok)))
    ok = all(sc.schur_isomorphic(sc.j_star(sc.j_bang(F), F.D), F)
             and sc.schur_isomorphic(sc.j_star(sc.j_lowerstar(F), F.D), F) for F in Fs)
    out.append(Check("recollement", f"(ii) j*j_! = Id = j*j_* {tag}", ok))
    stars = [sc.i_upper_star(f) for f in fs]
    shrieks = [sc.i_upper_shriek(f) for f in fs]
    kernel = stars + shrieks
    ok = all(sc.vanishes_on_young(g) for g in kernel)
    for f, a, b in zip(fs, stars, shrieks):
        for g in kernel[:4]:
            ok &= _hom_dim(a, g) == _hom_dim(f, g)
            ok &= _hom_dim(g, b) == _hom_dim(g, f)
    out.append(Check("recollement", f"(iii) i* -| i_* -| i^! dims {tag}", bool(ok)))
    ok = all(co.are_isomorphic(sc.i_upper_star(g), g) and co.are_isomorphic(sc.i_upper_shriek(g), g)
             for g in kernel)
    out.append(Check("recollement", f"(iv) i*i_* = Id = i^!i_* {tag}", ok))
    ok = all(sc.vanishes_on_young(f) == (sc.j_star(f).dim == 0) for f in fs + kernel)
    out.append(Check("recollement", f"(v) Ker j* = C^Y {tag}", ok))
    nonzero = sum(not co.is_zero_object(g) for g in kernel)
    out.append(Check("recollement", f"C^Y objects met {tag}", True, f"{nonzero} nonzero of {len(kernel)}"))
    return out


def recollement_suite(p=2, ns=(2, 3), seed=0):
    out = []
    for n in ns:
        out += recollement_t(n, p, seed)
        out += recollement_j(n, p, seed)
    return out


# ------------------------------------------------------------ products

def products_suite(p=2, seed=0):
    out = []
    S1, S2 = gr.symmetric_group(1), gr.symmetric_group(2)
    mods = [gr.trivial_module(S2, p), gr.regular_module(S2, p)]
    if p != 2:
        mods.append(gr.sign_module(S2, p))
    for i, M in enumerate(mods):
        for j, N in enumerate(mods):
            tag = f"[M#{i}, N#{j}, p={p}]"
            box = gr.external_box(M, N)
            out.append(Check("products", f"h_M . h_N = h(M x N) {tag}",
                             co.are_isomorphic(co.odot(co.h_of(M), co.h_of(N)), co.h_of(box))))
            out.append(Check("products", f"h_M [x]l h_N = h(M x N) {tag}",
                             co.are_isomorphic(co.box_l(co.h_of(M), co.h_of(N)), co.h_of(box))))
            out.append(Check("products", f"t_M [x]r t_N = t(M x N) {tag}",
                             co.are_isomorphic(co.box_r(co.t_of(M), co.t_of(N)), co.t_of(box))))
    H0 = co.hat_tate(S2, p, 0)
    K, R = mods[0], mods[1]
    c, _, _ = co.comparison_box_l_odot(H0, co.h_of(R))
    out.append(Check("products", f"[x]l -> . iso, g projective [p={p}]", co.is_isomorphism(c)))
    c, _, _ = co.comparison_odot_box_r(H0, co.t_of(K))
    out.append(Check("products", f". -> [x]r iso, g injective [p={p}]", co.is_isomorphism(c)))
    K1 = gr.trivial_module(S1, p)
    out.append(Check("products", f"h_K (x)l h_K = h(K[S_2]) [p={p}]",
                     co.are_isomorphic(co.tensor_l(co.h_of(K1), co.h_of(K1)), co.h_of(gr.regular_module(S2, p)))))
    for i, M in enumerate(mods[:2]):
        for j, N in enumerate(mods[:2]):
            ind = gr.induce(gr.symmetric_group(4), gr.product_group(S2, S2), gr.external_box(M, N))
            out.append(Check("products", f"h_M (x)l h_N = h(Ind(M x N)) [M#{i}, N#{j}, p={p}]",
                             co.are_isomorphic(co.tensor_l(co.h_of(M), co.h_of(N)), co.h_of(ind))))
    out.append(Check("products", f"h_K o h_K = h(K . K) [p={p}]",
                     co.are_isomorphic(co.bullet_compose(co.h_of(K), co.h_of(K)),
                                       co.h_of(gr.wreath_induce(K, K)))))
    rng = np.random.default_rng(seed)
    pairs = [(co.h_of(K1), co.h_of(K1)), (co.random_presentation(S1, p, rng), H0),
             (H0, co.t_of(K1)), (co.random_presentation(S2, p, rng), co.random_presentation(S1, p, rng))]
    for k, (f, g) in enumerate(pairs):
        D = f.group.degree + g.group.degree
        ok = sc.schur_isomorphic(sc.j_star(co.tensor_l(f, g), D),
                                 sc.tensor_modules(sc.j_star(f, D), sc.j_star(g, D)))
        out.append(Check("products", f"j*(f (x)l g) = j*f (x) j*g [pair#{k}, p={p}]", ok))
    for F, G in [("gamma(1)", "gamma(1)"), ("gamma(2)", "s(1)"), ("gamma(1,1)", "gamma(1)"), ("T(2)", "s(1)")]:
        e = sc.PolyFunctorExpr("tensor", (sc.parse_expr(F), sc.parse_expr(G)))
        ok = co.are_isomorphic(co.tensor_l(sc.j_bang(F, p=p), sc.j_bang(G, p=p)), sc.j_bang(e, p=p))
        out.append(Check("products", f"j_!F (x)l j_!G = j_!(F (x) G) [{F}, {G}, p={p}]", ok))
    for k in range(2):
        f, g = co.random_presentation(S2, p, rng), co.random_presentation(S2, p, rng)
        ok = co.are_isomorphic(co.twist(co.box_l(f, g), S2, S2), co.box_l(g, f))
        out.append(Check("products", f"Tw(f [x]l g) = g [x]l f [random#{k}, p={p}]", ok))
    return out


def composition_suite(p=2, seed=0, n_random=3):
    out = []
    rng = np.random.default_rng(seed)
    S1, S2 = gr.symmetric_group(1), gr.symmetric_group(2)
    K, R = gr.trivial_module(S2, p), gr.regular_module(S2, p)
    fs = [co.hat_tate(S2, p, 0), co.hat_tate(S2, p, -1), co.t_of(K)]
    fs += [co.random_presentation(S2, p, rng, max_dim=3) for _ in range(n_random)]
    for i, f in enumerate(fs):
        for name, g in [("h_K", co.h_of(K)), ("h_R", co.h_of(R))]:
            ok = co.are_isomorphic(co.bullet_compose(f, g), co.compose_bar(f, g))
            out.append(Check("composition", f"f o g two routes [f#{i}, {name}, p={p}]", ok))
    K1 = gr.trivial_module(S1, p)
    pairs = [(co.h_of(K1), co.hat_tate(S2, p, 0)), (co.hat_tate(S2, p, 0), co.h_of(K1)),
             (co.h_of(K), co.h_of(K))]
    for k, (f, g) in enumerate(pairs):
        D = f.group.degree * g.group.degree
        G = sc.j_star(g, D)
        if G.dim == 0:
            ok = sc.j_star(co.bullet_compose(f, g), D).dim == 0
        else:
            ok = sc.schur_isomorphic(sc.compose_modules(sc.j_star(f, G.dim), G),
                                     sc.j_star(co.bullet_compose(f, g), D))
        out.append(Check("composition", f"j*f o j*g = j*(f o g) [pair#{k}, p={p}]", ok))
    return out


# ------------------------------------------------------------ twisted Ext

def chal_suite(p=2, r=1, d=2):
    out = []
    A = tw.compute_A_r(r, p)
    q = p ** r
    want = [1 if (k % 2 == 0 and k < 2 * q) else 0 for k in range(2 * q + 1)]
    out.append(Check("chal", f"A_{r} pattern [p={p}]", A.as_list(2 * q) == want, str(A.as_list(2 * q))))
    for F in [f"gamma({d})", f"s({d})", f"lambda({d})", f"T({d})"]:
        a = tw.ext_via_pairing(f"gamma({d})", F, r, p, A=A)
        b = tw.F_of_graded(F, A, p)
        top = max(max(a.dims, default=0), max(b.dims, default=0))
        out.append(Check("chal", f"pairing = F(A_{r}) [{F}, p={p}]", a.as_list(top) == b.as_list(top),
                         f"{a.as_list(top)} vs {b.as_list(top)}"))
    return out


SUITES = {"recollement": recollement_suite, "products": products_suite,
          "composition": composition_suite, "chal": chal_suite}
