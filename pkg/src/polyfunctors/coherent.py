"""Coherent functors on finite-dimensional G-modules, by presentations.

A presentation `alpha: M -> N` stands for the functor

    f(X) = coker( Hom_G(N, X) --(- o alpha)--> Hom_G(M, X) ).

A morphism f -> g between f = pres(M_f -> N_f) and g = pres(M_g -> N_g)
is stored as a pair (mu: M_g -> M_f, nu: N_g -> N_f) with
alpha_f mu = nu alpha_g; it acts by a |-> a o mu.  Two pairs give the
same natural transformation when their mu's differ by rho o alpha_g.

Objects are never normalised: equality is decided by exhibiting an
isomorphism (`find_isomorphism`) or by comparing evaluations.
"""
from dataclasses import dataclass, field
import json

import numpy as np

from . import linalg as la
from . import grouprep as gr
from .grouprep import GroupModule, ModuleMap


# ------------------------------------------------------------ hom spaces

class HomSpace:
    """Hom_G(M, X) with an RREF basis, so coordinates are read at pivots."""

    def __init__(self, M, X):
        self.M, self.X, self.p = M, X, M.p
        raw = gr.hom_basis(M, X)
        flat = raw.reshape(raw.shape[0], X.dim * M.dim)
        red, r, piv = la.rref(flat, self.p) if flat.size else (flat, 0, [])
        self.flat = red[:r]
        self.piv = list(piv)
        self.dim = r

    @property
    def basis(self):
        return self.flat.reshape(self.dim, self.X.dim, self.M.dim)

    def coords(self, mats):
        mats = np.asarray(mats, dtype=np.int64)
        lead = mats.shape[0] if mats.ndim == 3 else 1
        mats = mats.reshape(lead, self.X.dim * self.M.dim)
        return mats[:, self.piv] % self.p

    def combine(self, coeffs):
        coeffs = np.asarray(coeffs, dtype=np.int64)
        lead = coeffs.shape[0] if coeffs.ndim == 2 else 1
        coeffs = coeffs.reshape(lead, self.dim)
        if self.dim == 0:
            return np.zeros((lead, self.X.dim, self.M.dim), dtype=np.int64)
        return la.matmul(coeffs, self.flat, self.p).reshape(lead, self.X.dim, self.M.dim)


def hom_space(M, X):
    key = ("homspace", id(X))
    hit = M._cache.get(key)
    if hit is not None and hit[0] is X:
        return hit[1]
    hs = HomSpace(M, X)
    M._cache[key] = (X, hs)
    return hs


def solve_maps(unknowns, equations, p, homogeneous=False):
    """Solve linear equations in G-maps.

    `unknowns` is a list of (source, target) modules.  Each equation is
    (terms, const) with terms [(L, u, R), ...] meaning
    sum L @ X_u @ R = const; L or R may be None for the identity and
    const may be None for zero.  Returns one solution as a list of
    matrices (or None), or with `homogeneous` a list of solution tuples
    spanning the solution space.
    """
    spaces = [hom_space(s, t) for s, t in unknowns]
    offsets = np.cumsum([0] + [hs.dim for hs in spaces])
    ncols = int(offsets[-1])
    blocks, rhs = [], []
    for terms, const in equations:
        shape = None
        cols = None
        for L, u, R in terms:
            B = spaces[u].basis
            if L is not None:
                B = np.einsum("ab,kbc->kac", L, B) % p
            if R is not None:
                B = np.einsum("kab,bc->kac", B, R) % p
            if shape is None:
                shape = B.shape[1:]
                cols = la.zeros(int(np.prod(shape)), ncols)
            cols[:, offsets[u]:offsets[u + 1]] = (cols[:, offsets[u]:offsets[u + 1]]
                                                   + B.reshape(B.shape[0], cols.shape[0]).T) % p
        if shape is None:
            continue
        blocks.append(cols)
        rhs.append(la.zeros(cols.shape[0], 1) if const is None else np.asarray(const).reshape(-1, 1) % p)
    A = np.vstack(blocks) if blocks else la.zeros(0, ncols)

    def unpack(x):
        return [spaces[u].combine(x[offsets[u]:offsets[u + 1]])[0] for u in range(len(spaces))]

    if homogeneous:
        return [unpack(row) for row in la.kernel_basis(A, p)]
    b = np.vstack(rhs) if rhs else la.zeros(0, 1)
    x = la.solve_linear(A, b[:, 0], p)
    if x is None:
        return None
    return unpack(x)


# ------------------------------------------------------------ objects

def zero_module(G, p):
    return gr.direct_sum([], G=G, p=p)


@dataclass(eq=False)
class Presentation:
    """The coherent functor coker(h_N -> h_M) of alpha: M -> N."""
    alpha: ModuleMap
    meta: dict = field(default_factory=dict, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def M(self):
        return self.alpha.source

    @property
    def N(self):
        return self.alpha.target

    @property
    def group(self):
        return self.M.group

    @property
    def p(self):
        return self.M.p

    def __repr__(self):
        return f"Presentation({self.group.name}, p={self.p}, {self.M.dim}->{self.N.dim})"


def pres(alpha):
    return Presentation(alpha)


def h_of(M):
    """Hom_G(M, -)."""
    return Presentation(gr.zero_map(M, zero_module(M.group, M.p)))


def free_presentation(M):
    """F1 --d--> F0 --cov--> M -> 0 with F0, F1 free."""
    key = "freepres"
    if key not in M._cache:
        cov = gr.free_cover(M)
        K, inc = gr.kernel_module(cov)
        if K.dim:
            c2 = gr.free_cover(K)
            d = inc @ c2
        else:
            d = gr.zero_map(gr.free_module(M.group, M.p, 0), cov.source)
        M._cache[key] = (cov, d)
    return M._cache[key]


def t_of(M):
    """M (x)_G -, presented through t_F = h_{F^du} on a free presentation."""
    cov, d = free_presentation(M)
    f = Presentation(gr.dual_map(d))
    f.meta["t_of"] = (M, cov, d)
    return f


def presentation_from_json(obj):
    if isinstance(obj, str):
        obj = json.loads(obj)
    M = gr.module_from_json(obj["module_M"])
    N = gr.module_from_json(obj["module_N"])
    N = GroupModule(M.group, N.p, N.dim, N.action)
    return Presentation(ModuleMap(M, N, np.array(obj["alpha"], dtype=np.int64).reshape(N.dim, M.dim)))


def presentation_to_json(f):
    return {"module_M": gr.module_to_json(f.M), "module_N": gr.module_to_json(f.N),
            "alpha": f.alpha.matrix.tolist()}


# ------------------------------------------------------------ evaluation

class Value:
    """f(X) as a quotient of Hom_G(M, X)."""

    def __init__(self, f, X):
        if X.group != f.group or X.p != f.p:
            raise ValueError("module and functor live over different groups or fields")
        self.f, self.X, self.p = f, X, f.p
        self.hom = hom_space(f.M, X)
        rel = hom_space(f.N, X).basis
        if rel.shape[0]:
            imgs = np.einsum("kab,bc->kac", rel, f.alpha.matrix) % self.p
            rel_coords = self.hom.coords(imgs)
        else:
            rel_coords = la.zeros(0, self.hom.dim)
        self.sq = la.subquotient(la.eye(self.hom.dim), rel_coords, self.hom.dim, self.p)

    @property
    def dim(self):
        return self.sq.dim

    def lifts(self):
        """Representative maps M -> X of the basis of f(X)."""
        return self.hom.combine(self.sq.basis)

    def coords(self, mats):
        c = self.hom.coords(mats)
        if self.sq.dim == 0:
            return la.zeros(c.shape[0], 0)
        return self.sq.coords(c)


def evaluate(f, X):
    key = id(X)
    hit = f._cache.get(key)
    if hit is not None and hit[0] is X:
        return hit[1]
    v = Value(f, X)
    f._cache[key] = (X, v)
    return v


def eval_dim(f, X):
    return evaluate(f, X).dim


def eval_map(f, phi):
    """f(phi): f(X) -> f(Y) for a module map phi: X -> Y."""
    vx, vy = evaluate(f, phi.source), evaluate(f, phi.target)
    if vx.dim == 0 or vy.dim == 0:
        return la.zeros(vy.dim, vx.dim)
    imgs = np.einsum("ab,kbc->kac", phi.matrix, vx.lifts()) % f.p
    return vy.coords(imgs).T.copy()


# ------------------------------------------------------------ morphisms

@dataclass(eq=False)
class Morphism:
    source: Presentation
    target: Presentation
    mu: np.ndarray
    nu: np.ndarray
    check: bool = True

    def __post_init__(self):
        p = self.source.p
        self.mu = la.asmat(self.mu, p, self.source.M.dim, self.target.M.dim)
        self.nu = la.asmat(self.nu, p, self.source.N.dim, self.target.N.dim)
        if self.check:
            lhs = la.matmul(self.source.alpha.matrix, self.mu, p)
            rhs = la.matmul(self.nu, self.target.alpha.matrix, p)
            if not np.array_equal(lhs, rhs):
                raise ValueError("lifting square does not commute")

    @property
    def p(self):
        return self.source.p

    def at(self, X):
        """Matrix of the natural transformation at X."""
        vs, vt = evaluate(self.source, X), evaluate(self.target, X)
        if vs.dim == 0 or vt.dim == 0:
            return la.zeros(vt.dim, vs.dim)
        imgs = np.einsum("kab,bc->kac", vs.lifts(), self.mu) % self.p
        return vt.coords(imgs).T.copy()

    def then(self, other):
        """other o self."""
        p = self.p
        return Morphism(self.source, other.target, la.matmul(self.mu, other.mu, p),
                        la.matmul(self.nu, other.nu, p), check=False)

    def __add__(self, other):
        return Morphism(self.source, self.target, (self.mu + other.mu) % self.p,
                        (self.nu + other.nu) % self.p, check=False)

    def __sub__(self, other):
        return Morphism(self.source, self.target, (self.mu - other.mu) % self.p,
                        (self.nu - other.nu) % self.p, check=False)

    def scale(self, c):
        return Morphism(self.source, self.target, (c * self.mu) % self.p, (c * self.nu) % self.p, check=False)


def identity_morphism(f):
    return Morphism(f, f, la.eye(f.M.dim), la.eye(f.N.dim), check=False)


def zero_morphism(f, g):
    return Morphism(f, g, la.zeros(f.M.dim, g.M.dim), la.zeros(f.N.dim, g.N.dim), check=False)


def morphism_from_mu(source, target, mu):
    """Complete mu: M_target -> M_source to a morphism by solving for nu."""
    p = source.p
    const = la.matmul(source.alpha.matrix, mu, p)
    sol = solve_maps([(target.N, source.N)], [([(None, 0, target.alpha.matrix)], const)], p)
    if sol is None:
        raise ValueError("mu does not define a morphism")
    return Morphism(source, target, mu, sol[0], check=False)


def h_map(phi):
    """h_phi: h_N -> h_M for phi: M -> N."""
    return Morphism(h_of(phi.target), h_of(phi.source), phi.matrix, la.zeros(0, 0), check=False)


def h_morphism(phi, src, tgt):
    """h_phi between given h-presentations src = h_N, tgt = h_M."""
    return Morphism(src, tgt, phi.matrix, la.zeros(src.N.dim, tgt.N.dim), check=False)


def is_zero_morphism(phi):
    """mu factors as rho o alpha_target."""
    p = phi.p
    sol = solve_maps([(phi.target.N, phi.source.M)],
                     [([(None, 0, phi.target.alpha.matrix)], phi.mu)], p)
    return sol is not None


def morphisms_equal(a, b):
    return is_zero_morphism(a - b)


def hom_coherent(f, g):
    """Basis of Hom(f, g) as Morphism representatives."""
    p = f.p
    Hmu = hom_space(g.M, f.M)
    Hnu = hom_space(g.N, f.N)
    # pairs (a, b) with alpha_f (sum a mu) = (sum b nu) alpha_g
    cols = []
    for B in Hmu.basis:
        cols.append(la.matmul(f.alpha.matrix, B, p).reshape(-1))
    for B in Hnu.basis:
        cols.append((-la.matmul(B, g.alpha.matrix, p)).reshape(-1) % p)
    if not cols:
        return []
    A = np.array(cols, dtype=np.int64).T
    ker = la.kernel_basis(A, p)
    if ker.shape[0] == 0:
        return []
    zero = []
    for rho in hom_space(g.N, f.M).basis:
        zmu = Hmu.coords(la.matmul(rho, g.alpha.matrix, p))[0]
        znu = Hnu.coords(la.matmul(f.alpha.matrix, rho, p))[0]
        zero.append(np.concatenate([zmu, znu]))
    # nu's with nu alpha_g = 0 also give the zero transformation
    if Hnu.dim:
        na = np.array([la.matmul(B, g.alpha.matrix, p).reshape(-1) for B in Hnu.basis], dtype=np.int64)
        for c in la.left_kernel_basis(na, p):
            zero.append(np.concatenate([np.zeros(Hmu.dim, dtype=np.int64), c]))
    zero = la.as_rows(np.array(zero, dtype=np.int64), ker.shape[1])
    sq = la.subquotient(ker, zero, ker.shape[1], p)
    out = []
    for row in sq.basis:
        mu = Hmu.combine(row[:Hmu.dim])[0]
        nu = Hnu.combine(row[Hmu.dim:])[0]
        out.append(Morphism(f, g, mu, nu, check=False))
    return out


def combine_morphisms(f, g, basis, coeffs):
    p = f.p
    mu = la.zeros(f.M.dim, g.M.dim)
    nu = la.zeros(f.N.dim, g.N.dim)
    for c, phi in zip(coeffs, basis):
        mu = (mu + c * phi.mu) % p
        nu = (nu + c * phi.nu) % p
    return Morphism(f, g, mu, nu, check=False)


# ------------------------------------------------------------ kernels, cokernels

def pushout(f, g):
    """Pushout of f: A -> B and g: A -> C; returns (P, iB, iC, lift P -> B+C)."""
    B, C = f.target, g.target
    S = gr.direct_sum([B, C], G=B.group, p=B.p)
    m = np.vstack([f.matrix, (-g.matrix) % f.p])
    P, sq = gr.quotient_module(S, m.T)
    proj = sq.coords(la.eye(S.dim)).T if sq.dim else la.zeros(0, S.dim)
    iB = ModuleMap(B, P, proj[:, :B.dim], check=False)
    iC = ModuleMap(C, P, proj[:, B.dim:], check=False)
    return P, iB, iC, sq.basis.T.copy()


def kernel_c(phi):
    """Kernel of phi: f -> g with its mono into f.

    M_k is the pushout of M_f <-mu- M_g -alpha_g-> N_g, and N_k the
    pushout of M_k <-i- M_f -alpha_f-> N_f.
    """
    f, g = phi.source, phi.target
    mu = ModuleMap(g.M, f.M, phi.mu, check=False)
    P, i, iN, liftP = pushout(mu, g.alpha)
    P2, j, jN, liftP2 = pushout(i, f.alpha)
    k = Presentation(j)
    k.meta["kernel"] = dict(i=i, iN=iN, liftP=liftP, jN=jN, liftP2=liftP2)
    mono = Morphism(k, f, i.matrix, jN.matrix, check=False)
    return k, mono


def kernel_induced(phi, phi2, a, b, k=None, k2=None):
    """Map ker(phi) -> ker(phi2) induced by a: A -> A2, b: B -> B2.

    Requires the square to commute on representatives:
    mu_a mu_phi2 = mu_phi mu_b and nu_a nu_phi2 = nu_phi nu_b.
    """
    p = phi.p
    k = k or kernel_c(phi)[0]
    k2 = k2 or kernel_c(phi2)[0]
    d, d2 = k.meta["kernel"], k2.meta["kernel"]
    # mu: M_k2 (pushout of M_A2, N_B2) -> M_k
    comp = np.hstack([la.matmul(d["i"].matrix, a.mu, p), la.matmul(d["iN"].matrix, b.nu, p)])
    mu = la.matmul(comp, d2["liftP"], p)
    comp2 = np.hstack([la.matmul(k.alpha.matrix, mu, p), la.matmul(d["jN"].matrix, a.nu, p)])
    nu = la.matmul(comp2, d2["liftP2"], p)
    return Morphism(k, k2, mu, nu)


def cokernel_c(phi):
    """Cokernel of phi: f -> g: pres((alpha_g; mu): M_g -> N_g + M_f)."""
    f, g = phi.source, phi.target
    p = phi.p
    T = gr.direct_sum([g.N, f.M], G=g.group, p=p)
    alpha = ModuleMap(g.M, T, np.vstack([g.alpha.matrix, phi.mu]), check=False)
    c = Presentation(alpha)
    proj = np.hstack([la.eye(g.N.dim), la.zeros(g.N.dim, f.M.dim)])
    epi = Morphism(g, c, la.eye(g.M.dim), proj, check=False)
    return c, epi


def image_c(phi):
    """Image of phi as the kernel of g -> coker(phi); returns (image, mono into g)."""
    _, epi = cokernel_c(phi)
    return kernel_c(epi)


def is_zero_object(f):
    return eval_dim(f, f.M) == 0


def is_isomorphism(phi):
    k, _ = kernel_c(phi)
    if not is_zero_object(k):
        return False
    c, _ = cokernel_c(phi)
    return is_zero_object(c)


def find_isomorphism(f, g, tries=48, seed=0, probes=None):
    """Search Hom(f, g) for an isomorphism; returns it or None.

    Tries the basis elements, then seeded random combinations.  A
    candidate is first screened by invertibility at a few modules.
    """
    screen = [f.M, g.M] + list(probes or [])
    dims_f = [eval_dim(f, X) for X in screen]
    dims_g = [eval_dim(g, X) for X in screen]
    if dims_f != dims_g:
        return None
    basis = hom_coherent(f, g)
    if not basis:
        return zero_morphism(f, g) if is_zero_object(f) and is_zero_object(g) else None
    rng = np.random.default_rng(seed)
    cands = list(basis)
    for _ in range(tries):
        cands.append(combine_morphisms(f, g, basis, rng.integers(0, f.p, len(basis))))
    for phi in cands:
        ok = True
        for X, d in zip(screen, dims_f):
            if d and la.rank(phi.at(X), f.p) < d:
                ok = False
                break
        if ok and is_isomorphism(phi):
            return phi
    return None


def are_isomorphic(f, g, **kw):
    return find_isomorphism(f, g, **kw) is not None


# ------------------------------------------------------------ duality

def lift_free(F, pi, phi):
    """psi: F -> E with pi o psi = phi, for F free from `free_module`."""
    G, p = F.group, F.p
    order = G.order
    k = F.dim // order if order else 0
    E = gr.element_array(pi.source)
    cols = []
    for i in range(k):
        x = la.solve_linear(pi.matrix, phi.matrix[:, i * order], p)
        if x is None:
            raise ValueError("map does not lift")
        cols.append(x)
    if not cols:
        return gr.zero_map(F, pi.source)
    X = np.array(cols, dtype=np.int64)
    mat = np.einsum("gab,kb->akg", E, X).reshape(pi.source.dim, F.dim) % p
    return ModuleMap(F, pi.source, mat, check=False)


def lift_presentations(phi):
    """Chain map between the free presentations of phi's source and target."""
    covM, dM = free_presentation(phi.source)
    covN, dN = free_presentation(phi.target)
    l0 = lift_free(covM.source, covN, phi @ covM)
    if dM.source.dim:
        l1 = lift_free(dM.source, dN, l0 @ dM) if dN.source.dim else gr.zero_map(dM.source, dN.source)
    else:
        l1 = gr.zero_map(dM.source, dN.source)
    return l0, l1


def t_map(phi, src=None, tgt=None):
    """t_phi: t_M -> t_N for phi: M -> N."""
    src = src or t_of(phi.source)
    tgt = tgt or t_of(phi.target)
    l0, l1 = lift_presentations(phi)
    return Morphism(src, tgt, l0.matrix.T.copy(), l1.matrix.T.copy())


def dualize(f):
    """Df = ker(t_alpha: t_M -> t_N)."""
    k, _ = kernel_c(t_map(f.alpha))
    return k


# ------------------------------------------------------------ recollement t

def t_star(f):
    """f(K[G]) with G acting through right multiplications."""
    G, p = f.group, f.p
    R = regular_of(f)
    idx = G.index_of
    acts = []
    for s in G.generators:
        sinv = gr.inverse_perm(s)
        m = la.zeros(G.order, G.order)
        for i, g in enumerate(G.elements):
            m[idx[gr.compose(g, sinv)], i] = 1
        acts.append(eval_map(f, ModuleMap(R, R, m, check=False)))
    return GroupModule(G, p, eval_dim(f, R), acts, check=False)


def t_star_map(phi):
    return phi.at(regular_of(phi.source))


def regular_of(f):
    return f.meta.setdefault("regular", gr.regular_module(f.group, f.p))


def _tau_identification(f, post=None):
    """Matrix f(K[G]) -> X for f = coker(h_B -> h_{X^du}): a -> tau o a."""
    R = regular_of(f)
    v = evaluate(f, R)
    if v.dim == 0:
        return la.zeros(f.M.dim if post is None else post.shape[0], 0)
    rows = v.lifts()[:, 0, :]  # tau reads the identity coefficient
    m = rows.T.copy()
    if post is not None:
        m = la.matmul(post, m, f.p)
    return m


def t_bang(M):
    return t_of(M)


def t_lowerstar(M):
    return h_of(gr.dual_g(M))


def t_bang_identification(c):
    """Iso t_star(t_of(M)) -> M."""
    M, cov, d = c.meta["t_of"]
    return _tau_identification(c, cov.matrix)


def t_lowerstar_identification(h):
    """Iso t_star(h_of(M^du)) -> M."""
    return _tau_identification(h)


def _solve_morphism(f, g, condition):
    """Morphism phi: f -> g with t_star(phi) = condition."""
    basis = hom_coherent(f, g)
    R = regular_of(f)
    g.meta["regular"] = R
    p = f.p
    if not basis:
        if condition.size and condition.any():
            raise ValueError("no morphism with the required t_star image")
        return zero_morphism(f, g)
    mats = np.array([phi.at(R).reshape(-1) for phi in basis], dtype=np.int64)
    x = la.solve_linear(mats.T, condition.reshape(-1) % p, p)
    if x is None:
        raise ValueError("no morphism with the required t_star image")
    return combine_morphisms(f, g, basis, x)


def counit_t(f):
    """t_!(t*(f)) -> f, the morphism whose t_star image is the identity."""
    M = t_star(f)
    c = t_bang(M)
    c.meta["regular"] = regular_of(f)
    iota = t_bang_identification(c)
    return _solve_morphism(c, f, iota)


def unit_t(f):
    """f -> t_*(t*(f)), the morphism whose t_star image is the identity."""
    M = t_star(f)
    h = t_lowerstar(M)
    h.meta["regular"] = regular_of(f)
    iota = t_lowerstar_identification(h)
    return _solve_morphism(f, h, la.inverse(iota, f.p) if iota.size else iota)


def r_star(f):
    return cokernel_c(counit_t(f))[0]


def r_shriek(f):
    return kernel_c(unit_t(f))[0]


# ------------------------------------------------------------ Ext and classification

def ext_coherent(f, g, max_degree):
    """dims of Ext^i(f, g), i = 0..max_degree, from
    0 -> h_C -> h_N -> h_M -> f -> 0 with C = coker(alpha)."""
    p = f.p
    C, pi = gr.cokernel_module(f.alpha)
    ga = eval_map(g, f.alpha)
    gp = eval_map(g, pi)
    dM, dN, dC = eval_dim(g, f.M), eval_dim(g, f.N), eval_dim(g, C)
    ra, rp = la.rank(ga, p), la.rank(gp, p)
    ext = [dM - ra, dN - rp - ra, dC - rp]
    return [ext[i] if i < 3 else 0 for i in range(max_degree + 1)]


def projective_resolution_coherent(f, length):
    """Modules M_0, M_1, ... and maps psi_i: M_{i-1} -> M_i with
    ... -> h_{M_1} -> h_{M_0} -> f -> 0 exact; each step covers a kernel
    by the Yoneda epi of its presentation (not minimal)."""
    G, p = f.group, f.p
    mods = [f.M]
    maps = []
    eps = Morphism(h_of(f.M), f, la.eye(f.M.dim), la.zeros(f.N.dim, 0), check=False)
    for _ in range(length):
        k, mono = kernel_c(eps)
        cover = Morphism(h_of(k.M), k, la.eye(k.M.dim), la.zeros(k.N.dim, 0), check=False)
        down = cover.then(mono)
        maps.append(ModuleMap(mods[-1], k.M, down.mu, check=False))
        mods.append(k.M)
        eps = Morphism(h_of(k.M), h_of(mods[-2]), down.mu, la.zeros(0, 0), check=False)
    return mods, maps


def ext_coherent_resolution(f, g, max_degree):
    """Ext^i(f, g) as cohomology of g(M_0) -> g(M_1) -> ... (second route)."""
    p = f.p
    mods, maps = projective_resolution_coherent(f, max_degree + 1)
    ranks = [la.rank(eval_map(g, m), p) for m in maps]
    out = []
    for i in range(max_degree + 1):
        d = eval_dim(g, mods[i])
        out.append(d - ranks[i] - (ranks[i - 1] if i else 0))
    return out


def _is_von_neumann_regular(alpha):
    """exists rho with alpha rho alpha = alpha."""
    p = alpha.p
    sol = solve_maps([(alpha.target, alpha.source)],
                     [([(alpha.matrix, 0, alpha.matrix)], alpha.matrix)], p)
    return sol is not None


def _cokernel_splits(alpha):
    C, pi = gr.cokernel_module(alpha)
    if C.dim == 0:
        return True
    sol = solve_maps([(C, alpha.target)], [([(pi.matrix, 0, None)], la.eye(C.dim))], alpha.p)
    return sol is not None


def classify_coherent(f):
    proj = _is_von_neumann_regular(f.alpha)
    pd1 = proj or _cokernel_splits(f.alpha)
    Df = dualize(f)
    inj = _is_von_neumann_regular(Df.alpha)
    id1 = inj or _cokernel_splits(Df.alpha)
    return {"projective": proj, "injective": inj, "pd<=1": pd1, "id<=1": id1}


# ------------------------------------------------------------ induction

def transport(direction, G, H, f):
    """Induction (up) from H to G or restriction (down) from G to H."""
    if direction == "up":
        return Presentation(gr.induce_map(G, H, f.alpha))
    if direction == "down":
        return Presentation(gr.restrict_map(G, H, f.alpha))
    raise ValueError("direction must be 'up' or 'down'")




# ------------------------------------------------------------ exact-in-first-variable extension

def factor_through_kernel(psi, phi, k):
    """theta: Z -> ker(phi) with mono o theta = psi, when phi o psi = 0 on
    representatives (mu_psi mu_phi = 0)."""
    d = k.meta["kernel"]
    p = psi.p
    Z = psi.source
    zN = la.zeros(Z.M.dim, phi.target.N.dim)
    mu = la.matmul(np.hstack([psi.mu, zN]), d["liftP"], p)
    nu = la.matmul(np.hstack([la.matmul(Z.alpha.matrix, mu, p), psi.nu]), d["liftP2"], p)
    return Morphism(Z, k, mu, nu)


class FirstVariableExtension:
    """Extend T from free modules to f = coker(h_N -> h_M), exactly in f.

    T_free(F) is the value on h_F for a free module F; T_map(d, TA, TB)
    is the morphism TB -> TA induced by d: A -> B between free modules
    (or, for `T_module`, arbitrary modules).  h_M is recovered as
    ker(T h_F0 -> T h_F1) from a free presentation F1 -> F0 -> M.
    """

    def __init__(self, f, T_free, T_map):
        self.f, self.T_free, self.T_map = f, T_free, T_map
        alpha = f.alpha
        self.covM, self.dM = free_presentation(alpha.source)
        self.covN, self.dN = free_presentation(alpha.target)
        a0 = lift_free(self.covM.source, self.covN, alpha @ self.covM)
        a1 = (lift_free(self.dM.source, self.dN, a0 @ self.dM)
              if self.dM.source.dim and self.dN.source.dim
              else gr.zero_map(self.dM.source, self.dN.source))
        self.TF0, self.TF1 = T_free(self.covM.source), T_free(self.dM.source)
        self.TE0, self.TE1 = T_free(self.covN.source), T_free(self.dN.source)
        self.phiM = T_map(self.dM, self.TF1, self.TF0)
        self.phiN = T_map(self.dN, self.TE1, self.TE0)
        self.kM, self.monoM = kernel_c(self.phiM)
        self.kN, self.monoN = kernel_c(self.phiN)
        self.theta = kernel_induced(self.phiN, self.phiM, T_map(a0, self.TF0, self.TE0),
                                    T_map(a1, self.TF1, self.TE1), self.kN, self.kM)
        self.value, self.epi = cokernel_c(self.theta)


def extend_first_variable(f, T_free, T_map):
    return FirstVariableExtension(f, T_free, T_map).value


# ------------------------------------------------------------ external products

def _box_T(beta):
    """h_F |-> pres(F [x] beta) and its functoriality in F."""
    def T(F):
        return Presentation(gr.external_box_maps(gr.identity_map(F), beta))

    def T_map(d, TA, TB):
        p = d.p
        return Morphism(TB, TA, la.kron(d.matrix, la.eye(beta.source.dim), p),
                        la.kron(d.matrix, la.eye(beta.target.dim), p), check=False)
    return T, T_map


def box_l(f, g):
    """f [x]_l g = pres(M[x]P -> (M[x]Q) + (N[x]P)).

    Built as the cokernel of h_N [x]_l g -> h_M [x]_l g, which is the
    standard tensor product of presentations.
    """
    return _box_l_data(f, g)[0]


def _box_l_data(f, g):
    T, T_map = _box_T(g.alpha)
    hM, hN = T(f.M), T(f.N)
    a = T_map(f.alpha, hM, hN)
    c, epi = cokernel_c(a)
    return c, epi, a, hM, hN


def box_r(f, g):
    return dualize(box_l(dualize(f), dualize(g)))


def odot(f, g):
    """(f . g)(X) = f(g(Res X)) over G x H, exact in f."""
    T, T_map = _box_T(g.alpha)
    return extend_first_variable(f, T, T_map)


def comparison_box_l_odot(f, g):
    """The natural map f [x]_l g -> f . g; returns (map, box_l, odot)."""
    T, T_map = _box_T(g.alpha)
    ext = FirstVariableExtension(f, T, T_map)
    L, _, _, hM, _ = _box_l_data(f, g)
    # h_M [x]_l g -> T(h_F0) factors through h_M . g = ker(T h_F0 -> T h_F1)
    psi = T_map(ext.covM, ext.TF0, hM)
    c = factor_through_kernel(psi, ext.phiM, ext.kM)
    return morphism_from_mu(L, ext.value, c.mu), L, ext.value


def kernel_induced_general(phi, phi2, a, k=None, k2=None):
    """Map ker(phi) -> ker(phi2) induced by a: A -> A2, for any
    square that commutes as natural transformations."""
    p = phi.p
    if k is None:
        k, mono = kernel_c(phi)
    else:
        mono = None
    if k2 is None:
        k2, mono2 = kernel_c(phi2)
    d, d2 = k.meta["kernel"], k2.meta["kernel"]
    A2 = phi2.source
    sol = solve_maps(
        [(k2.M, k.M), (k2.N, k.N), (A2.N, k.M)],
        [([(k.alpha.matrix, 0, None), (None, 1, (-k2.alpha.matrix) % p)], None),
         ([(None, 0, d2["i"].matrix), (None, 2, (-A2.alpha.matrix) % p)],
          la.matmul(d["i"].matrix, a.mu, p))],
        p)
    if sol is None:
        raise ValueError("square does not induce a map on kernels")
    return Morphism(k, k2, sol[0], sol[1])


def dualize_morphism(phi, Df=None, Dg=None):
    """D(phi): Dg -> Df for phi: f -> g."""
    f, g = phi.source, phi.target
    tf = t_map(f.alpha)
    tg = t_map(g.alpha)
    mu = ModuleMap(g.M, f.M, phi.mu, check=False)
    a = t_map(mu, tg.source, tf.source)
    return kernel_induced_general(tg, tf, a, Dg, Df)


def comparison_odot_box_r(f, g):
    """The natural map f . g -> f [x]^r g, realised on the model
    D(Df . Dg) of f . g; returns (map, source model, box_r)."""
    c, _, _ = comparison_box_l_odot(dualize(f), dualize(g))
    Dsrc = dualize(c.target)
    Dtgt = dualize(c.source)
    return dualize_morphism(c, Dtgt, Dsrc), Dsrc, Dtgt


def twist(f, G, H):
    """Tw: a presentation over G x H read over H x G."""
    GH = gr.product_group(H, G)
    ng = len(G.generators)

    def swap(X):
        return GroupModule(GH, X.p, X.dim, list(X.action[ng:]) + list(X.action[:ng]), check=False)
    return Presentation(ModuleMap(swap(f.M), swap(f.N), f.alpha.matrix, check=False))


def tensor_l(f, g):
    """f (x)_l g = Ind_{S_m x S_n}^{S_{m+n}} (f [x]_l g)."""
    m, n = f.group.degree, g.group.degree
    return transport("up", gr.symmetric_group(m + n), gr.product_group(f.group, g.group), box_l(f, g))


def dot_product(f, g):
    m, n = f.group.degree, g.group.degree
    return transport("up", gr.symmetric_group(m + n), gr.product_group(f.group, g.group), odot(f, g))


def comparison_tensor_l_dot(f, g):
    """Induced image of the comparison f [x]_l g -> f . g."""
    c, _, _ = comparison_box_l_odot(f, g)
    m, n = f.group.degree, g.group.degree
    G, H = gr.symmetric_group(m + n), gr.product_group(f.group, g.group)
    src, tgt = transport("up", G, H, c.source), transport("up", G, H, c.target)
    k = len(gr.coset_table(G, H)[0])
    p = f.p
    return Morphism(src, tgt, la.kron(la.eye(k), c.mu, p), la.kron(la.eye(k), c.nu, p))


# ------------------------------------------------------------ pairing

def pairing_graded(f, A):
    """<f, A> for a graded G-module A = {degree: GroupModule}: degreewise eval."""
    return {d: evaluate(f, X) for d, X in sorted(A.items())}


def pairing_graded_dims(f, A):
    return {d: v.dim for d, v in pairing_graded(f, A).items()}


def _factor_module(X, H, offset, count):
    return GroupModule(H, X.p, X.dim, list(X.action[offset:offset + count]), check=False)


def pairing_host(f, A, H):
    """<f, A> in C(H), where A is a presentation over G x H whose G-part
    is the strict G-action on the object A of C(H)."""
    G = f.group
    p = f.p
    ng = len(G.generators)
    nh = len(H.generators)
    MA = _factor_module(A.M, H, ng, nh)
    NA = _factor_module(A.N, H, ng, nh)
    embed = lambda g: tuple(g) + tuple(range(G.degree, G.degree + H.degree))
    ginv = [embed(gr.inverse_perm(g)) for g in G.elements]
    RM = np.array([A.M.matrix(h) for h in ginv], dtype=np.int64).reshape(len(ginv), MA.dim, MA.dim)
    RN = np.array([A.N.matrix(h) for h in ginv], dtype=np.int64).reshape(len(ginv), NA.dim, NA.dim)
    order = G.order

    def T(F):
        k = F.dim // order
        M = gr.direct_sum([MA] * k, G=H, p=p)
        N = gr.direct_sum([NA] * k, G=H, p=p)
        return Presentation(ModuleMap(M, N, la.kron(la.eye(k), A.alpha.matrix, p), check=False))

    def blocks(d, R):
        k_src, k_tgt = d.source.dim // order, d.target.dim // order
        c = d.matrix.reshape(k_tgt, order, k_src, order)[:, :, :, 0]  # c[i, g, j]
        out = np.einsum("igj,gab->iajb", c, R) % p
        dim = R.shape[1]
        return out.reshape(k_tgt * dim, k_src * dim)

    def T_map(d, TA, TB):
        return Morphism(TB, TA, blocks(d, RM), blocks(d, RN), check=False)

    return extend_first_variable(f, T, T_map)


def pairing(f, A, host=None):
    """Dispatch on the host: a dict of modules is a graded G-module,
    a presentation over G x H is an object of C(H) with G-action."""
    if isinstance(A, dict):
        return pairing_graded(f, A)
    if isinstance(A, Presentation):
        if host is None:
            raise ValueError("the C(H) host needs the group H")
        return pairing_host(f, A, host)
    raise TypeError("unsupported host for the pairing")


# ------------------------------------------------------------ composition

def _bullet_h(M, g):
    """h_M composed with g = pres(beta: P -> Q): coker of
    h_{M.(P+Q)} -> h_{M.P} along M.d1 - M.d2, d1 = (1, beta), d2 = (1, 0)."""
    beta = g.alpha
    P, Q = beta.source, beta.target
    p = M.p
    S = gr.direct_sum([P, Q])
    d1 = ModuleMap(P, S, np.vstack([la.eye(P.dim), beta.matrix]), check=False)
    d2 = ModuleMap(P, S, np.vstack([la.eye(P.dim), la.zeros(Q.dim, P.dim)]), check=False)
    idM = gr.identity_map(M)
    m1 = gr.wreath_induce_map(idM, d1)
    m2 = gr.wreath_induce_map(idM, d2)
    gamma = ModuleMap(m1.source, m1.target, (m1.matrix - m2.matrix) % p, check=False)
    return Presentation(gamma), S


def bullet_compose(f, g):
    """f composed with g in C_{mn}, exact in f and preserving reflexive
    coequalizers in g."""
    hM, S = _bullet_h(f.M, g)
    hN, _ = _bullet_h(f.N, g)
    P = g.alpha.source
    mu = gr.wreath_induce_map(f.alpha, gr.identity_map(P)).matrix
    nu = gr.wreath_induce_map(f.alpha, gr.identity_map(S)).matrix
    return cokernel_c(Morphism(hN, hM, mu, nu, check=False))[0]


def power_box_l(g, m):
    """g^{[x]_l m} = pres(P^m -> (+)_i P..Q_i..P) over S_m wr S_n."""
    beta = g.alpha
    P, Q = beta.source, beta.target
    p = g.p
    n = g.group.degree
    W = gr.wreath_group(m, n)
    Sm = gr.symmetric_group(m)
    Mpow = gr.wreath_module(gr.trivial_module(Sm, p), P)
    dims = [[Q.dim if j == i else P.dim for j in range(m)] for i in range(m)]
    sizes = [int(np.prod(d)) for d in dims]
    offs = np.cumsum([0] + sizes)
    total = int(offs[-1])
    acts = []
    for s in range(len(g.group.generators)):
        a = la.zeros(total, total)
        for i in range(m):
            first = Q.action[s] if i == 0 else P.action[s]
            rest = sizes[i] // first.shape[0] if first.shape[0] else 0
            a[offs[i]:offs[i + 1], offs[i]:offs[i + 1]] = la.kron(first, la.eye(rest), p)
        acts.append(a)
    for b in range(m - 1):
        a = la.zeros(total, total)
        for i in range(m):
            j = b + 1 if i == b else (b if i == b + 1 else i)
            a[offs[j]:offs[j + 1], offs[i]:offs[i + 1]] = gr.tensor_swap(dims[i], b)
        acts.append(a)
    Npow = GroupModule(W, p, total, acts, check=False)
    rows = []
    for i in range(m):
        blk = la.eye(1)
        for j in range(m):
            blk = la.kron(blk, beta.matrix if j == i else la.eye(P.dim), p)
        rows.append(blk)
    alpha = ModuleMap(Mpow, Npow, np.vstack(rows) if rows else la.zeros(0, Mpow.dim), check=False)
    return Presentation(alpha)


def equivariant_power(g, m):
    """g^{(x)_l m} in C_{mn} with its S_m-action, as a presentation over S_m x S_mn."""
    n = g.group.degree
    N = m * n
    box = power_box_l(g, m)
    W = box.group
    Sm = gr.symmetric_group(m)
    ambient = gr.product_group(Sm, gr.symmetric_group(N))
    gens = []
    nb = n - 1 if m else 0
    for k, s in enumerate(W.generators):
        if k < nb:
            head = tuple(range(m))
        else:
            head = gr.transposition(m, k - nb, k - nb + 1)
        gens.append(tuple(head) + tuple(m + x for x in s))
    D = gr.PermGroup(m + N, tuple(gens), "diagonal-wreath")
    relabel = lambda X: GroupModule(D, X.p, X.dim, X.action, check=False)
    a = ModuleMap(relabel(box.M), relabel(box.N), box.alpha.matrix, check=False)
    return Presentation(gr.induce_map(ambient, D, a))


def compose_bar(f, g):
    """<f, g^{(x)_l m}> with host C_{mn}."""
    m, n = f.group.degree, g.group.degree
    A = equivariant_power(g, m)
    return pairing_host(f, A, gr.symmetric_group(m * n))


# ------------------------------------------------------------ complexes and group cohomology

@dataclass(eq=False)
class CoherentComplex:
    """objects[i] --maps[i]--> objects[i+1]."""
    objects: list
    maps: list

    def __post_init__(self):
        if len(self.maps) != max(len(self.objects) - 1, 0):
            raise ValueError("need one map between consecutive objects")
        for a, b in zip(self.maps, self.maps[1:]):
            if not is_zero_morphism(a.then(b)):
                raise ValueError("consecutive maps do not compose to zero")

    def cohomology(self, i):
        C = self.objects[i]
        if i < len(self.maps):
            Z, mono = kernel_c(self.maps[i])
        else:
            Z, mono = C, identity_morphism(C)
        if i == 0:
            return Z
        d = self.maps[i - 1]
        theta = factor_through_mono(d, mono)
        return cokernel_c(theta)[0]


def factor_through_mono(d, mono):
    """theta with mono o theta = d (as natural transformations)."""
    p = d.p
    S, Z, C = d.source, mono.source, mono.target
    sol = solve_maps(
        [(Z.M, S.M), (Z.N, S.N), (C.N, S.M)],
        [([(S.alpha.matrix, 0, None), (None, 1, (-Z.alpha.matrix) % p)], None),
         ([(None, 0, mono.mu), (None, 2, (-C.alpha.matrix) % p)], d.mu)],
        p)
    if sol is None:
        raise ValueError("map does not factor through the mono")
    return Morphism(S, Z, sol[0], sol[1])


def resolution_complex(G, p, length):
    """h_{P_0} -> h_{P_1} -> ... for a free resolution P_* of K."""
    res = gr.free_resolution(gr.trivial_module(G, p), length)
    terms = res.terms[:-1][::-1]      # P_0, P_1, ..., P_L
    dmaps = res.maps[:-1][::-1]       # P_{i+1} -> P_i
    objs = [h_of(P) for P in terms]
    maps = [h_morphism(d, objs[i], objs[i + 1]) for i, d in enumerate(dmaps)]
    return CoherentComplex(objs, maps)


def cohomology_functor(G, p, i):
    """H^i(G, -) as the i-th cohomology of h_{P_*}."""
    if i < 0:
        raise ValueError("cohomological degree must be >= 0")
    return resolution_complex(G, p, i + 1).cohomology(i)


def norm_morphism(G, p):
    """t_K -> h_K, the norm; mu is the cover L -> K read as a vector of L^du."""
    K = gr.trivial_module(G, p)
    t = t_of(K)
    cov = t.meta["t_of"][1]
    h = h_of(K)
    return Morphism(t, h, cov.matrix.T.copy(), la.zeros(t.N.dim, 0))


def hat_tate(G, p, i):
    """Tate cohomology functors: i = 0 cokernel, i = -1 kernel of the norm."""
    nm = norm_morphism(G, p)
    if i == 0:
        return cokernel_c(nm)[0]
    if i == -1:
        return kernel_c(nm)[0]
    raise ValueError("only degrees -1 and 0 are provided")


# ------------------------------------------------------------ probes and random inputs

def _partitions(n, maxpart=None):
    maxpart = maxpart or n
    if n == 0:
        yield ()
        return
    for k in range(min(n, maxpart), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def random_module(G, p, rng, max_dim=6, tries=40):
    """A cyclic submodule or quotient of a permutation or regular module."""
    sources = [gr.regular_module(G, p)]
    if G.name == "symmetric":
        sources += [gr.permutation_module(G.degree, lam, p) for lam in _partitions(G.degree)]
    for _ in range(tries):
        X = sources[int(rng.integers(len(sources)))]
        if X.dim == 0:
            continue
        v = rng.integers(0, p, (1, X.dim))
        if not v.any():
            continue
        E = gr.element_array(X)
        orbit = np.einsum("gab,b->ga", E, v[0]) % p
        S, inc = gr.submodule(X, orbit)
        if 0 < S.dim <= max_dim and rng.integers(2) == 0:
            return S
        Q, _ = gr.quotient_module(X, orbit)
        if 0 < Q.dim <= max_dim:
            return Q
        if 0 < S.dim <= max_dim:
            return S
    return gr.trivial_module(G, p)


def probe_family(G, p, seed=0, n_random=3):
    """K, sign (p odd), K[G], the permutation modules, seeded random modules,
    then the cosyzygies of K and sign, which carry the non-permutation
    uniserials when p divides the order."""
    out = [gr.trivial_module(G, p)]
    if p != 2 and G.name == "symmetric" and G.degree > 1:
        out.append(gr.sign_module(G, p))
    out.append(gr.regular_module(G, p))
    if G.name == "symmetric":
        for lam in _partitions(G.degree):
            if lam != (G.degree,) and lam != (1,) * G.degree:
                out.append(gr.permutation_module(G.degree, lam, p))
    rng = np.random.default_rng(seed)
    out += [random_module(G, p, rng) for _ in range(n_random)]
    if G.order % p == 0:
        out += [gr.syzygy(X)[1].target for X in out[:2] if X.dim == 1]
    return out


def random_map(M, N, rng):
    hs = hom_space(M, N)
    if hs.dim == 0:
        return gr.zero_map(M, N)
    c = rng.integers(0, M.p, hs.dim)
    return ModuleMap(M, N, hs.combine(c)[0], check=False)


def random_presentation(G, p, rng, max_dim=4):
    M = random_module(G, p, rng, max_dim)
    N = random_module(G, p, rng, max_dim)
    return Presentation(random_map(M, N, rng))


def graded_to_json(A):
    return {"degrees": {str(d): gr.module_to_json(X) for d, X in sorted(A.items())}}


def graded_from_json(obj):
    if isinstance(obj, str):
        obj = json.loads(obj)
    return {int(d): gr.module_from_json(X) for d, X in obj["degrees"].items()}
