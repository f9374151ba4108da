"""Representations of permutation groups over F_p.

Conventions
-----------
* A permutation is a tuple `g` with `g[i]` the image of `i` (0-based).
  Products compose right to left: `(g*h)[i] = g[h[i]]`.
* Modules are left modules; an action matrix acts on column vectors.
* A module map `f: M -> N` has a `dim N x dim M` matrix.
* Tensor bases are lexicographic (see `linalg`).
* Group elements are listed in breadth-first order from the identity
  over the generator list; the regular module and every coset
  transversal use that order, so induced matrices are reproducible.
* For the coinvariant tensor M (x)_G N, M is made a right module by
  m.g = g^{-1} m, which turns M (x)_G N into the coinvariants of the
  diagonal action on M (x) N.
"""
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
import json
import random

import numpy as np

from . import linalg as la


# ------------------------------------------------------------ permutations

def compose(g, h):
    return tuple(g[i] for i in h)


def inverse_perm(g):
    out = [0] * len(g)
    for i, j in enumerate(g):
        out[j] = i
    return tuple(out)


def identity_perm(n):
    return tuple(range(n))


def transposition(n, i, j):
    g = list(range(n))
    g[i], g[j] = g[j], g[i]
    return tuple(g)


def perm_sign(g):
    seen = [False] * len(g)
    s = 1
    for i in range(len(g)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = g[j]
            length += 1
        if length % 2 == 0:
            s = -s
    return s


@dataclass(frozen=True, eq=False)
class PermGroup:
    degree: int
    generators: tuple
    name: str = "custom"

    def __post_init__(self):
        gens = tuple(tuple(int(x) for x in g) for g in self.generators)
        for g in gens:
            if sorted(g) != list(range(self.degree)):
                raise ValueError(f"invalid permutation {g}")
        object.__setattr__(self, "generators", gens)
        if self.name == "symmetric":
            check_braid_relations(gens, self.degree)

    def __eq__(self, other):
        return (isinstance(other, PermGroup) and self.degree == other.degree
                and self.generators == other.generators)

    def __hash__(self):
        return hash((self.degree, self.generators))

    def __repr__(self):
        return f"PermGroup({self.name}, degree={self.degree}, order={self.order})"

    @cached_property
    def _bfs(self):
        e = identity_perm(self.degree)
        elems = [e]
        parent = {e: None}
        i = 0
        while i < len(elems):
            x = elems[i]
            for k, s in enumerate(self.generators):
                y = compose(s, x)
                if y not in parent:
                    parent[y] = (k, x)
                    elems.append(y)
            i += 1
        return elems, parent

    @property
    def elements(self):
        return self._bfs[0]

    @cached_property
    def index_of(self):
        return {g: i for i, g in enumerate(self.elements)}

    @property
    def order(self):
        return len(self.elements)

    def word(self, g):
        """Generator indices w with g = s_{w[0]} ... s_{w[-1]}."""
        parent = self._bfs[1]
        if g not in parent:
            raise ValueError(f"{g} is not in the group")
        out = []
        while parent[g] is not None:
            k, g = parent[g]
            out.append(k)
        return out

    def contains(self, g):
        return tuple(g) in self._bfs[1]

    def is_subgroup_of(self, other):
        return self.degree == other.degree and all(other.contains(s) for s in self.generators)


def check_braid_relations(gens, n):
    if len(gens) != max(n - 1, 0):
        raise ValueError("symmetric group needs n-1 adjacent transpositions")
    e = identity_perm(n)
    for i, s in enumerate(gens):
        if s != transposition(n, i, i + 1):
            raise ValueError("generators are not adjacent transpositions")
    for i in range(len(gens)):
        for j in range(i, len(gens)):
            order = 1 if i == j else (3 if j == i + 1 else 2)
            st = gens[i] if i == j else compose(gens[i], gens[j])
            x = e
            for _ in range(2 if i == j else order):
                x = compose(st, x)
            if x != e:
                raise ValueError("braid relation fails")


def symmetric_group(n):
    return PermGroup(n, tuple(transposition(n, i, i + 1) for i in range(n - 1)), "symmetric")


def _check_partition(lam):
    lam = tuple(int(x) for x in lam)
    if any(x <= 0 for x in lam):
        raise ValueError(f"{lam} is not a partition")
    return lam


def young_subgroup(lam):
    """S_lam = S_{lam_1} x S_{lam_2} x ... inside S_{|lam|}, consecutive blocks."""
    lam = _check_partition(lam)
    n = sum(lam)
    gens = []
    start = 0
    for part in lam:
        gens += [transposition(n, i, i + 1) for i in range(start, start + part - 1)]
        start += part
    return PermGroup(n, tuple(gens), "young" + str(lam))


def product_group(g, h):
    """G x H acting on degree(G) + degree(H) points, G on the first block."""
    n = g.degree + h.degree
    gens = [tuple(s) + tuple(range(g.degree, n)) for s in g.generators]
    gens += [tuple(range(g.degree)) + tuple(g.degree + x for x in s) for s in h.generators]
    return PermGroup(n, tuple(gens), "product")


def wreath_group(m, n):
    """S_m wr S_n in S_{mn}: block b is {b*n, ..., b*n + n - 1}.

    Generators: the adjacent transpositions inside block 0, then the
    block swaps (b, b+1) exchanging the i-th points of both blocks.
    """
    N = m * n
    gens = [transposition(N, i, i + 1) for i in range(n - 1)] if m else []
    for b in range(m - 1):
        g = list(range(N))
        for i in range(n):
            g[b * n + i], g[(b + 1) * n + i] = (b + 1) * n + i, b * n + i
        gens.append(tuple(g))
    return PermGroup(N, tuple(gens), f"wreath({m},{n})")


def coset_table(G, H):
    """Left cosets gH of H in G.

    Returns (transversal, table) with table[k][i] = (j, h) meaning
    s_k * g_i = g_j * h for the k-th generator of G.
    """
    if not H.is_subgroup_of(G):
        raise ValueError("not a subgroup")
    Helems = H.elements

    def canon(g):
        return min(compose(g, h) for h in Helems)

    e = identity_perm(G.degree)
    reps = [e]
    keys = {canon(e): 0}
    table = [[] for _ in G.generators]
    i = 0
    while i < len(reps):
        gi = reps[i]
        for k, s in enumerate(G.generators):
            x = compose(s, gi)
            c = canon(x)
            if c not in keys:
                keys[c] = len(reps)
                reps.append(x)
            j = keys[c]
            h = compose(inverse_perm(reps[j]), x)
            table[k].append((j, h))
        i += 1
    return reps, table


# ------------------------------------------------------------ modules

@dataclass(eq=False)
class GroupModule:
    group: PermGroup
    p: int
    dim: int
    action: list
    check: bool = True
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.action = [la.asmat(a, self.p, self.dim, self.dim) for a in self.action]
        if len(self.action) != len(self.group.generators):
            raise ValueError("one action matrix per generator required")
        if self.check:
            validate_module(self)

    def __repr__(self):
        return f"GroupModule({self.group.name}, p={self.p}, dim={self.dim})"

    def matrix(self, g):
        """Action matrix of an arbitrary group element."""
        g = tuple(g)
        if g in self._cache:
            return self._cache[g]
        out = la.eye(self.dim)
        for k in reversed(self.group.word(g)):
            out = la.matmul(self.action[k], out, self.p)
        self._cache[g] = out
        return out

    def all_matrices(self):
        return [self.matrix(g) for g in self.group.elements]


def validate_module(M, words=32, seed=0):
    p, d = M.p, M.dim
    for a in M.action:
        if la.rank(a, p) != d:
            raise ValueError("action matrix is not invertible")
    G = M.group
    gens = G.generators
    I = la.eye(d)
    if G.name == "symmetric":
        for i in range(len(gens)):
            for j in range(i, len(gens)):
                a, b = M.action[i], M.action[j]
                if i == j:
                    rel = la.matmul(a, a, p)
                else:
                    ab = la.matmul(a, b, p)
                    rel = la.mul(p, *([ab] * (3 if j == i + 1 else 2)))
                if not np.array_equal(rel, I):
                    raise ValueError("action violates a braid relation")
        return
    if not gens:
        return
    rng = random.Random(seed)
    for _ in range(words):
        w = [rng.randrange(len(gens)) for _ in range(rng.randint(1, 8))]
        g = identity_perm(G.degree)
        mat = I
        for k in w:
            g = compose(gens[k], g)
            mat = la.matmul(M.action[k], mat, p)
        # close the word with the stored word of g^{-1}
        for k in reversed(G.word(inverse_perm(g))):
            mat = la.matmul(M.action[k], mat, p)
        if not np.array_equal(mat, I):
            raise ValueError("action violates a group relation")


@dataclass(eq=False)
class ModuleMap:
    source: GroupModule
    target: GroupModule
    matrix: np.ndarray
    check: bool = True

    def __post_init__(self):
        p = self.source.p
        self.matrix = la.asmat(self.matrix, p, self.target.dim, self.source.dim)
        if self.check:
            for a, b in zip(self.source.action, self.target.action):
                if not np.array_equal(la.matmul(self.matrix, a, p), la.matmul(b, self.matrix, p)):
                    raise ValueError("matrix does not intertwine the actions")

    @property
    def p(self):
        return self.source.p

    def __matmul__(self, other):
        return ModuleMap(other.source, self.target,
                         la.matmul(self.matrix, other.matrix, self.p), check=False)

    def __add__(self, other):
        return ModuleMap(self.source, self.target, (self.matrix + other.matrix) % self.p, check=False)

    def __sub__(self, other):
        return ModuleMap(self.source, self.target, (self.matrix - other.matrix) % self.p, check=False)

    def scale(self, c):
        return ModuleMap(self.source, self.target, (c * self.matrix) % self.p, check=False)


def identity_map(M):
    return ModuleMap(M, M, la.eye(M.dim), check=False)


def zero_map(M, N):
    return ModuleMap(M, N, la.zeros(N.dim, M.dim), check=False)


@dataclass
class ModuleComplex:
    """Terms with maps d[i]: terms[i] -> terms[i+1]."""
    terms: list
    maps: list

    def __post_init__(self):
        if len(self.maps) != len(self.terms) - 1:
            raise ValueError("need one map between consecutive terms")
        for a, b in zip(self.maps, self.maps[1:]):
            if np.any(la.matmul(b.matrix, a.matrix, a.p)):
                raise ValueError("d^2 != 0")

    def homology_dims(self):
        """Dimension of homology at each term (ends included)."""
        out = []
        p = self.terms[0].p if self.terms else 2
        ranks = [la.rank(d.matrix, p) for d in self.maps]
        for i, T in enumerate(self.terms):
            r_out = ranks[i] if i < len(ranks) else 0
            r_in = ranks[i - 1] if i > 0 else 0
            out.append(T.dim - r_out - r_in)
        return out

    def is_exact(self):
        return all(h == 0 for h in self.homology_dims())


# ------------------------------------------------------------ constructions

def trivial_module(G, p):
    return GroupModule(G, p, 1, [la.eye(1) for _ in G.generators])


def sign_module(G, p):
    return GroupModule(G, p, 1, [la.asmat([[perm_sign(s) % p]], p) for s in G.generators])


def _perm_matrix(images, n):
    m = la.zeros(n, n)
    for i, j in enumerate(images):
        m[j, i] = 1
    return m


def regular_module(G, p):
    """K[G] with basis the elements of G in breadth-first order."""
    idx = G.index_of
    acts = [_perm_matrix([idx[compose(s, g)] for g in G.elements], G.order) for s in G.generators]
    return GroupModule(G, p, G.order, acts, check=False)


def free_module(G, p, rank):
    return direct_sum([regular_module(G, p)] * rank, G=G, p=p)


def permutation_module(n, lam, p):
    """K[S_n / S_lam] on left cosets of the Young subgroup."""
    G = symmetric_group(n)
    H = young_subgroup(lam)
    if H.degree != n:
        raise ValueError("partition size differs from n")
    return induce(G, H, trivial_module(H, p))


def direct_sum(mods, G=None, p=None):
    mods = list(mods)
    if not mods:
        return GroupModule(G, p, 0, [la.zeros(0, 0) for _ in G.generators], check=False)
    G, p = mods[0].group, mods[0].p
    dim = sum(M.dim for M in mods)
    acts = []
    for k in range(len(G.generators)):
        a = la.zeros(dim, dim)
        o = 0
        for M in mods:
            a[o:o + M.dim, o:o + M.dim] = M.action[k]
            o += M.dim
        acts.append(a)
    return GroupModule(G, p, dim, acts, check=False)


def block_map(source_mods, target_mods, blocks, source=None, target=None):
    """Map between direct sums from a grid blocks[i][j]: source j -> target i (None = 0)."""
    src = source or direct_sum(source_mods)
    tgt = target or direct_sum(target_mods)
    m = la.zeros(tgt.dim, src.dim)
    ro = 0
    for i, T in enumerate(target_mods):
        co = 0
        for j, S in enumerate(source_mods):
            b = blocks[i][j]
            if b is not None:
                m[ro:ro + T.dim, co:co + S.dim] = b.matrix if isinstance(b, ModuleMap) else b
            co += S.dim
        ro += T.dim
    return ModuleMap(src, tgt, m, check=False)


def tensor_g(M, N):
    """M (x) N with diagonal action."""
    _same(M, N)
    p = M.p
    return GroupModule(M.group, p, M.dim * N.dim,
                       [la.kron(a, b, p) for a, b in zip(M.action, N.action)], check=False)


def tensor_maps(f, g):
    return ModuleMap(tensor_g(f.source, g.source), tensor_g(f.target, g.target),
                     la.kron(f.matrix, g.matrix, f.p), check=False)


def dual_g(M):
    """Contragredient: g acts on M^du by the transpose of g^{-1}."""
    p = M.p
    return GroupModule(M.group, p, M.dim, [la.inverse(a, p).T.copy() for a in M.action], check=False)


def dual_map(f):
    return ModuleMap(dual_g(f.target), dual_g(f.source), f.matrix.T.copy(), check=False)


def _same(M, N):
    if M.group != N.group:
        raise ValueError("modules over different groups")
    if M.p != N.p:
        raise ValueError("modules over different fields")


def _cover_data(M):
    """Generators of M, pivot columns of the free cover and the relation space.

    Cached on the module: (gens k x dim, pivot cols, inverse of the cover
    restricted to the pivots, relation rows in K[G]^k coordinates).
    """
    if "cover" in M._cache:
        return M._cache["cover"]
    p = M.p
    gens = la.as_rows(np.array(module_generators(M), dtype=np.int64), M.dim)
    E = element_array(M)
    # column (i, g) of the cover is g . v_i
    cover = np.einsum("gab,kb->akg", E, gens).reshape(M.dim, gens.shape[0] * M.group.order) % p
    _, _, piv = la.rref(cover, p)
    inv = la.inverse(cover[:, piv], p)
    rel = la.kernel_basis(cover, p)
    out = (gens, piv, inv, rel)
    M._cache["cover"] = out
    return out


def element_array(M):
    """Action matrices of all group elements, shape (|G|, dim, dim)."""
    if "elements" not in M._cache:
        mats = M.all_matrices()
        M._cache["elements"] = np.array(mats, dtype=np.int64).reshape(len(mats), M.dim, M.dim)
    return M._cache["elements"]


def _tdot(a, b, axes, p):
    """tensordot mod p, through float64 when the sums stay exact."""
    inner = int(np.prod([a.shape[i] for i in axes[0]]))
    if (p - 1) ** 2 * inner < 2 ** 53:
        out = np.tensordot(a.astype(np.float64), b.astype(np.float64), axes)
        return out.astype(np.int64) % p
    return np.tensordot(a, b, axes) % p


def hom_basis(M, N, chunk=64):
    """Basis of Hom_G(M, N) as an array of shape (k, dim N, dim M).

    A map is fixed by the images n_i of generators v_i of M; the n_i must
    satisfy every relation sum_{i,g} r[i,g] g n_i = 0 of the free cover.
    """
    _same(M, N)
    p, m, n = M.p, M.dim, N.dim
    if m == 0 or n == 0:
        return np.zeros((0, n, m), dtype=np.int64)
    gens, piv, inv, rel = _cover_data(M)
    k = gens.shape[0]
    order = M.group.order
    E = element_array(N)
    sol = la.eye(k * n)
    rel = rel.reshape(-1, k, order)
    for start in range(0, rel.shape[0], chunk):
        if sol.shape[0] == 0:
            break
        r = rel[start:start + chunk]
        # T[r, a, i, b] = sum_g r[i, g] E[g, a, b]
        T = _tdot(r, E, ([2], [0]), p).transpose(0, 2, 1, 3)
        T = T.reshape(-1, k * n)
        imgs = la.matmul(T, sol.T, p)
        coeffs = la.kernel_basis(imgs, p)
        sol = la.row_basis(la.matmul(coeffs, sol, p), p) if coeffs.shape[0] else la.zeros(0, k * n)
    if sol.shape[0] == 0:
        return np.zeros((0, n, m), dtype=np.int64)
    Y = sol.reshape(-1, k, n)
    # columns (i, g) -> E[g] n_i, keep the pivot columns only
    C = _tdot(Y, E, ([2], [2]), p).transpose(0, 3, 1, 2).reshape(len(Y), n, k * order)
    A = _tdot(C[:, :, piv], inv, ([2], [0]), p)
    return A


def hom_dim(M, N):
    return hom_basis(M, N).shape[0]


def hom_g(M, N):
    return [ModuleMap(M, N, A, check=False) for A in hom_basis(M, N)]


def fixed_points(M):
    """Basis rows of M^G."""
    p = M.p
    if not M.action:
        return la.eye(M.dim)
    stack = np.vstack([(a - la.eye(M.dim)) % p for a in M.action])
    return la.kernel_basis(stack, p)


def coinvariant_relations(M):
    """Rows spanning span{g v - v}."""
    if not M.action:
        return la.zeros(0, M.dim)
    return np.vstack([((a - la.eye(M.dim)) % M.p).T for a in M.action])


def coinvariant_space(M):
    """M_G as a Subquotient of M."""
    return la.subquotient(la.eye(M.dim), coinvariant_relations(M), M.dim, M.p)


def coinvariant_tensor(M, N):
    """M (x)_G N, returned as a Subquotient of M (x) N."""
    _same(M, N)
    return coinvariant_space(tensor_g(M, N))


def regular_dual_iso(X, R=None):
    """Matrix of tau_X: Hom_G(X, K[G]) -> X^du, f -> tau o f.

    Columns are indexed by the `hom_basis(X, K[G])` basis; rows by the
    dual basis of X.  tau reads off the coefficient of the identity.
    """
    R = R or regular_module(X.group, X.p)
    basis = hom_basis(X, R)
    # identity sits at index 0 of the breadth-first element order
    return basis[:, 0, :].T.copy(), basis


def induce(G, H, M):
    """Ind_H^G M = (+)_i g_i (x) M over the fixed transversal of G/H."""
    if M.group != H:
        raise ValueError("module is not over the subgroup")
    reps, table = coset_table(G, H)
    k, d, p = len(reps), M.dim, M.p
    acts = []
    for rows in table:
        a = la.zeros(k * d, k * d)
        for i, (j, h) in enumerate(rows):
            a[j * d:(j + 1) * d, i * d:(i + 1) * d] = M.matrix(h)
        acts.append(a)
    return GroupModule(G, p, k * d, acts, check=False)


def induce_map(G, H, f):
    reps, _ = coset_table(G, H)
    m = la.kron(la.eye(len(reps)), f.matrix, f.p)
    return ModuleMap(induce(G, H, f.source), induce(G, H, f.target), m, check=False)


def restrict(G, H, M):
    if M.group != G:
        raise ValueError("module is not over the ambient group")
    if not H.is_subgroup_of(G):
        raise ValueError("not a subgroup")
    return GroupModule(H, M.p, M.dim, [M.matrix(s) for s in H.generators], check=False)


def restrict_map(G, H, f):
    return ModuleMap(restrict(G, H, f.source), restrict(G, H, f.target), f.matrix, check=False)


def external_box(M, N):
    """M [x] N over G x H."""
    if M.p != N.p:
        raise ValueError("field mismatch")
    GH = product_group(M.group, N.group)
    p = M.p
    acts = [la.kron(a, la.eye(N.dim), p) for a in M.action]
    acts += [la.kron(la.eye(M.dim), b, p) for b in N.action]
    return GroupModule(GH, p, M.dim * N.dim, acts, check=False)


def external_box_maps(f, g):
    return ModuleMap(external_box(f.source, g.source), external_box(f.target, g.target),
                     la.kron(f.matrix, g.matrix, f.p), check=False)


def tensor_swap(dims, i):
    """Permutation matrix exchanging tensor factors i and i+1."""
    shape = list(dims)
    total = int(np.prod(shape)) if shape else 1
    idx = np.arange(total).reshape(shape)
    perm_axes = list(range(len(shape)))
    perm_axes[i], perm_axes[i + 1] = perm_axes[i + 1], perm_axes[i]
    # new position of old basis vector
    swapped = np.transpose(idx, perm_axes).reshape(-1)
    m = la.zeros(total, total)
    m[np.arange(total), swapped] = 1
    return m


def wreath_module(M, N):
    """M (x) N^{(x)m} as a module over S_m wr S_n."""
    m, n, p = M.group.degree, N.group.degree, M.p
    W = wreath_group(m, n)
    dn = N.dim
    acts = []
    for b in N.action:
        acts.append(la.kron(la.eye(M.dim), la.kron(b, la.eye(dn ** (m - 1)), p), p))
    for b in range(m - 1):
        sw = tensor_swap([dn] * m, b)
        acts.append(la.kron(M.action[b], sw, p))
    return GroupModule(W, p, M.dim * dn ** m, acts, check=False)


def wreath_induce(M, N):
    """M . N = Ind_{S_m wr S_n}^{S_mn}(M (x) N^{(x)m})."""
    m, n = M.group.degree, N.group.degree
    W = wreath_module(M, N)
    return induce(symmetric_group(m * n), W.group, W)


def wreath_induce_map(f, g):
    """Functoriality of M . N in both variables."""
    m = f.source.group.degree
    mat = f.matrix
    for _ in range(m):
        mat = la.kron(mat, g.matrix, f.p)
    src = wreath_module(f.source, g.source)
    tgt = wreath_module(f.target, g.target)
    G = symmetric_group(m * g.source.group.degree)
    return induce_map(G, src.group, ModuleMap(src, tgt, mat, check=False))


# ------------------------------------------------------------ sub/quotients

def submodule(M, rows):
    """Submodule spanned by the rows (must be G-stable); returns (S, inclusion)."""
    B = la.row_basis(la.as_rows(rows, M.dim), M.p)
    sq = la.Subquotient(M.p, M.dim, B, la.zeros(0, M.dim))
    acts = [sq.coords(la.matmul(a, B.T, M.p).T).T for a in M.action]
    S = GroupModule(M.group, M.p, B.shape[0], acts, check=False)
    return S, ModuleMap(S, M, B.T.copy(), check=False)


def quotient_module(M, rows):
    """M / span(rows); returns (Q, projection)."""
    sq = la.subquotient(la.eye(M.dim), rows, M.dim, M.p)
    return subquotient_module(M, sq)


def subquotient_module(M, sq):
    """Module structure on a G-stable Subquotient of M; returns (Q, projection from the upper space)."""
    p = M.p
    acts = [sq.coords(la.matmul(a, sq.basis.T, p).T).T if sq.dim else la.zeros(0, 0) for a in M.action]
    Q = GroupModule(M.group, p, sq.dim, acts, check=False)
    return Q, sq


def kernel_module(f):
    rows = la.kernel_basis(f.matrix, f.p)
    return submodule(f.source, rows)


def image_module(f):
    return submodule(f.target, f.matrix.T)


def cokernel_module(f):
    Q, sq = quotient_module(f.target, f.matrix.T)
    proj = sq.coords(la.eye(f.target.dim)).T
    return Q, ModuleMap(f.target, Q, proj, check=False)


# ------------------------------------------------------------ homological

def module_generators(M):
    """Greedy generating set: standard basis vectors not yet in the
    submodule generated by the earlier choices."""
    p = M.p
    E = element_array(M)
    gens = []
    span = la.zeros(0, M.dim)
    piv = []
    for i in range(M.dim):
        v = la.eye(M.dim)[i:i + 1]
        if la.reduce_mod(v, span, piv, p).any():
            gens.append(v[0])
            orbit = E[:, :, i] % p
            span, _, piv = la.rref(np.vstack([span, orbit]), p)
            span = span[:len(piv)]
            if len(piv) == M.dim:
                break
    return gens


def free_cover(M):
    """Surjection K[G]^k -> M, e_(i,g) -> g m_i."""
    gens = _cover_data(M)[0]
    F = free_module(M.group, M.p, gens.shape[0])
    E = element_array(M)
    mat = np.einsum("gab,kb->akg", E, gens).reshape(M.dim, F.dim) % M.p
    return ModuleMap(F, M, mat, check=False)


def free_rank(M):
    return M.dim // M.group.order


def syzygy(M):
    """0 -> M -> P -> Sigma M -> 0 with P free.

    The embedding stacks maps M -> K[G] (the duals of a free cover of
    M^du, read through tau) until their joint kernel vanishes.
    Returns (embedding M -> P, projection P -> Sigma M).
    """
    p = M.p
    R = regular_module(M.group, p)
    basis = hom_basis(M, R)
    chosen = []
    stack = la.zeros(0, M.dim)
    for A in basis:
        if la.rank(stack, p) == M.dim:
            break
        trial = np.vstack([stack, A])
        if la.rank(trial, p) > la.rank(stack, p):
            chosen.append(A)
            stack = trial
    P = free_module(M.group, p, len(chosen))
    emb = ModuleMap(M, P, stack, check=False)
    S, proj = cokernel_module(emb)
    return emb, proj


def free_resolution(M, length):
    """Complex P_length -> ... -> P_0 -> M of free modules, exact."""
    eps = free_cover(M)
    maps = [eps]
    terms = [M, eps.source]
    cur = eps
    for _ in range(length):
        K, inc = kernel_module(cur)
        if K.dim == 0:
            break
        cov = free_cover(K)
        d = inc @ cov
        maps.append(d)
        terms.append(cov.source)
        cur = d
    return ModuleComplex(terms[::-1], maps[::-1])


def coinvariant_functor_map(X, f):
    """X (x)_G f as a matrix between coinvariant tensors."""
    src = coinvariant_tensor(X, f.source)
    tgt = coinvariant_tensor(X, f.target)
    mat = la.kron(la.eye(X.dim), f.matrix, f.p)
    if src.dim == 0:
        return src, tgt, la.zeros(tgt.dim, 0)
    return src, tgt, tgt.coords(la.matmul(mat, src.basis.T, f.p).T).T


def tor1(X, M):
    """dim Tor_1^G(X, M) from a free resolution of M."""
    res = free_resolution(M, 2)
    # terms: [P2, P1, P0, M] (shorter if M has small projective dimension)
    if len(res.terms) < 3:
        return 0
    d1 = res.maps[-2]
    _, _, a = coinvariant_functor_map(X, d1)
    ker = a.shape[1] - la.rank(a, X.p)
    if len(res.terms) < 4:
        return ker
    d2 = res.maps[-3]
    _, _, b = coinvariant_functor_map(X, d2)
    return ker - la.rank(b, X.p)


def subset_complex(n, p=2):
    """B_0 -> B_1 -> ... -> B_n, B_k spanned by k-subsets, d(X) = sum of Y > X."""
    if p != 2:
        raise ValueError("the subset complex is defined for p = 2")
    G = symmetric_group(n)
    subsets = [list(combinations(range(n), k)) for k in range(n + 1)]
    index = [{s: i for i, s in enumerate(ss)} for ss in subsets]
    terms = []
    for k, ss in enumerate(subsets):
        acts = []
        for s in G.generators:
            imgs = [index[k][tuple(sorted(s[x] for x in X))] for X in ss]
            acts.append(_perm_matrix(imgs, len(ss)))
        terms.append(GroupModule(G, 2, len(ss), acts, check=False))
    maps = []
    for k in range(n):
        d = la.zeros(len(subsets[k + 1]), len(subsets[k]))
        for i, X in enumerate(subsets[k]):
            for y in range(n):
                if y not in X:
                    d[index[k + 1][tuple(sorted(X + (y,)))], i] = 1
        maps.append(ModuleMap(terms[k], terms[k + 1], d))
    return ModuleComplex(terms, maps)


# ------------------------------------------------------------ JSON

def module_to_json(M):
    return {
        "p": M.p,
        "degree": M.group.degree,
        "generators": [list(g) for g in M.group.generators],
        "dim": M.dim,
        "action": [a.tolist() for a in M.action],
    }


def module_from_json(obj, name=None):
    """Parse a module file; rejects malformed or non-invertible actions."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    p, deg, dim = int(obj["p"]), int(obj["degree"]), int(obj["dim"])
    la.Field(p)
    gens = [tuple(g) for g in obj["generators"]]
    sym = symmetric_group(deg)
    tag = name or ("symmetric" if tuple(gens) == sym.generators else "custom")
    G = PermGroup(deg, tuple(gens), tag)
    acts = []
    for a in obj["action"]:
        arr = np.array(a, dtype=np.int64)
        if dim == 0 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.shape != (dim, dim):
            raise ValueError("action matrix has the wrong shape")
        if arr.size and (arr.min() < 0 or arr.max() >= p):
            raise ValueError("entries must lie in 0..p-1")
        acts.append(arr)
    return GroupModule(G, p, dim, acts)
