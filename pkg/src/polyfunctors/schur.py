"""Strict polynomial functors as modules over Schur algebras S(D, N).

A functor value at K^D is stored as a weight-graded subquotient of the
ambient space (K^D)^{(x)N} (x) K^c.  Ambient index of (tensor t, slot k)
is t * c + k with t read in base D (np.kron order).  Inside one weight
the local index is (position of t among the tensors of that weight) * c + k.

The Schur algebra acts through the orbit elements xi_(i,j): the sum of
E_{i'j'} over the distinct simultaneous rearrangements (i', j') of the
pair word.  Operators act on the tensor factor and leave the slots alone.
"""
import itertools
import math
import re
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import coherent as co
from . import grouprep as gr
from . import linalg as la

MAX_AMBIENT = 400_000
MAX_WIDTH = 2048
MAX_ALGEBRA = 200_000


class ResourceError(RuntimeError):
    """Raised when a computation would exceed a configured size guard."""


# ------------------------------------------------------------ tensors

def compositions(N, D):
    """Compositions of N into D parts, (N, 0, ...) first."""
    if D == 1:
        return [(N,)]
    return [(a,) + rest for a in range(N, -1, -1) for rest in compositions(N - a, D - 1)]


def multiset_perms(seq):
    """Distinct permutations of `seq` in lexicographic order."""
    a = sorted(seq)
    n = len(a)
    out = [tuple(a)]
    while True:
        i = n - 2
        while i >= 0 and a[i] >= a[i + 1]:
            i -= 1
        if i < 0:
            return out
        j = n - 1
        while a[j] <= a[i]:
            j -= 1
        a[i], a[j] = a[j], a[i]
        a[i + 1:] = reversed(a[i + 1:])
        out.append(tuple(a))


def word_of(wt):
    """The sorted tensor j_wt = (0,..,0,1,..) of weight wt."""
    return tuple(x for a, m in enumerate(wt) for x in [a] * m)


def content(t, D):
    w = [0] * D
    for x in t:
        w[x] += 1
    return tuple(w)


def blocks_of(comp):
    """Position blocks of a composition (zero parts skipped)."""
    out, start = [], 0
    for m in comp:
        if m:
            out.append(range(start, start + m))
        start += m
    return out


def canon(t, comp):
    """Representative of t under the Young subgroup of `comp`: sort each block."""
    out = []
    for b in blocks_of(comp):
        out += sorted(t[i] for i in b)
    return tuple(out)


class TensorSpace:
    def __init__(self, D, N):
        self.D, self.N = D, N
        self.weights = compositions(N, D)
        self.tensors = {w: multiset_perms(word_of(w)) for w in self.weights}
        self.local = {w: {t: k for k, t in enumerate(ts)} for w, ts in self.tensors.items()}
        pw = D ** np.arange(N - 1, -1, -1) if N else np.zeros(0, dtype=np.int64)
        self.glob = {w: np.array([int(np.dot(t, pw)) for t in ts], dtype=np.int64).reshape(-1)
                     for w, ts in self.tensors.items()}
        self.total = D ** N

    def size(self, w):
        return len(self.tensors[w])

    def positions(self, w, c):
        g = self.glob[w]
        return (g[:, None] * c + np.arange(c)[None, :]).reshape(-1)


@lru_cache(maxsize=None)
def tensor_space(D, N):
    if D ** N > MAX_AMBIENT:
        raise ResourceError(f"(K^{D})^(x){N} exceeds the ambient guard")
    if math.comb(D * D + N - 1, N) > MAX_ALGEBRA:
        raise ResourceError(f"S({D},{N}) exceeds the algebra-size guard")
    return TensorSpace(D, N)


@lru_cache(maxsize=None)
def pair_operator(D, N, i, j):
    """xi_(i,j) as a 0/1 matrix from the weight block of j to that of i."""
    sp = tensor_space(D, N)
    wi, wj = content(i, D), content(j, D)
    O = la.zeros(sp.size(wi), sp.size(wj))
    li, lj = sp.local[wi], sp.local[wj]
    for word in multiset_perms(list(zip(i, j))):
        O[li[tuple(a for a, _ in word)], lj[tuple(b for _, b in word)]] = 1
    O.setflags(write=False)
    return O


@lru_cache(maxsize=None)
def orbit_reps(D, comp, wt):
    """Representatives (canonical forms) of Young(comp)-orbits of tensors of weight wt."""
    sp = tensor_space(D, sum(wt))
    seen = {}
    for t in sp.tensors[wt]:
        seen.setdefault(canon(t, comp), None)
    return tuple(seen)


# ------------------------------------------------------------ the algebra

@dataclass(frozen=True)
class SchurAlgebra:
    """S(D, N) = End_{S_N}((K^D)^{(x)N}) with its orbit basis xi_(i,j)."""
    D: int
    N: int
    p: int

    def __post_init__(self):
        if self.D < 1 or self.N < 0:
            raise ValueError("need D >= 1 and N >= 0")
        tensor_space(self.D, self.N)

    @property
    def dim(self):
        return math.comb(self.D * self.D + self.N - 1, self.N)

    def basis(self):
        """Orbit representatives (i, j), one per multiset of index pairs."""
        D = self.D
        out = []
        for combo in itertools.combinations_with_replacement(range(D * D), self.N):
            out.append((tuple(x // D for x in combo), tuple(x % D for x in combo)))
        return out

    def weights(self):
        return tensor_space(self.D, self.N).weights

    def idempotent(self, wt):
        j = word_of(wt)
        return (j, j)

    def generators(self):
        """Divided powers E_a^(k) 1_w and F_a^(k) 1_w, as (name, i, j)."""
        out = []
        for w in self.weights():
            j = word_of(w)
            for a in range(self.D - 1):
                for k in range(1, w[a + 1] + 1):
                    i, left = list(j), k
                    for pos, x in enumerate(j):
                        if x == a + 1 and left:
                            i[pos], left = a, left - 1
                    out.append((f"E{a}^({k})1{w}", tuple(i), j))
                for k in range(1, w[a] + 1):
                    i, left = list(j), k
                    for pos in range(len(j) - 1, -1, -1):
                        if j[pos] == a and left:
                            i[pos], left = a + 1, left - 1
                    out.append((f"F{a}^({k})1{w}", tuple(i), j))
        return out

    def operator(self, i, j):
        """Full D^N x D^N matrix of xi_(i,j) on the tensor space."""
        sp = tensor_space(self.D, self.N)
        O = pair_operator(self.D, self.N, tuple(i), tuple(j))
        m = la.zeros(sp.total, sp.total)
        wi, wj = content(i, self.D), content(j, self.D)
        m[np.ix_(sp.glob[wi], sp.glob[wj])] = O
        return m % self.p

    def unit(self):
        m = 0
        for w in self.weights():
            m = m + self.operator(*self.idempotent(w))
        return np.asarray(m, dtype=np.int64) % self.p

    def check_structure(self, samples=64, seed=0):
        """Spot-check that products of basis elements stay in the span."""
        rng = np.random.default_rng(seed)
        basis = self.basis()
        flat = np.array([self.operator(i, j).reshape(-1) for i, j in basis], dtype=np.int64)
        r = la.rank(flat, self.p)
        if r != len(basis):
            return False
        for _ in range(samples):
            a, b = rng.integers(len(basis), size=2)
            prod = la.matmul(self.operator(*basis[a]), self.operator(*basis[b]), self.p)
            if la.rank(np.vstack([flat, prod.reshape(1, -1)]), self.p) != r:
                return False
        return True

    def generated_dim(self):
        """Dimension of the subalgebra generated by generators and idempotents."""
        mats = [self.operator(i, j) for _, i, j in self.generators()]
        mats += [self.operator(*self.idempotent(w)) for w in self.weights()]
        span = la.row_basis(np.array([m.reshape(-1) for m in mats]), self.p)
        frontier = list(mats)
        while frontier:
            new = []
            for a in frontier:
                for g in mats:
                    prod = la.matmul(g, a, self.p)
                    test = np.vstack([span, prod.reshape(1, -1)])
                    if la.rank(test, self.p) > span.shape[0]:
                        span = la.row_basis(test, self.p)
                        new.append(prod)
            frontier = new
        return span.shape[0]


def schur_algebra(D, N, p):
    return SchurAlgebra(D, N, p)


# ------------------------------------------------------------ modules

class SchurModule:
    """Weight-graded subquotient of (K^D)^{(x)N} (x) K^c."""

    def __init__(self, D, N, p, c, blocks):
        self.D, self.N, self.p, self.c = D, N, p, c
        self.space = tensor_space(D, N)
        if D ** N * c > MAX_AMBIENT:
            raise ResourceError("module ambient exceeds the guard")
        self.blocks = {w: sq for w, sq in blocks.items() if sq.dim > 0}
        self.weights = [w for w in self.space.weights if w in self.blocks]
        self._cache = {}

    @property
    def algebra(self):
        return SchurAlgebra(self.D, self.N, self.p)

    @property
    def dim(self):
        return sum(sq.dim for sq in self.blocks.values())

    def wdim(self, w):
        sq = self.blocks.get(w)
        return sq.dim if sq is not None else 0

    def weight_dims(self):
        return {w: self.wdim(w) for w in self.weights}

    def local_size(self, w):
        return self.space.size(w) * self.c

    def lifts(self, w):
        sq = self.blocks.get(w)
        return sq.basis if sq is not None else la.zeros(0, self.local_size(w))

    def _coord_data(self, w):
        key = ("coord", w)
        if key not in self._cache:
            sq = self.blocks[w]
            stack = np.vstack([sq.basis, sq.sub])
            _, r, piv = la.rref(stack, self.p)
            piv = list(piv)[:r]
            self._cache[key] = (piv, la.inverse(stack[:, piv], self.p)[:, :sq.dim])
        return self._cache[key]

    def coords(self, w, vecs):
        """Module coordinates of local vectors of weight w (assumed in U)."""
        sq = self.blocks.get(w)
        vecs = la.as_rows(vecs, self.local_size(w))
        if sq is None:
            if np.any(vecs % self.p):
                raise ValueError("vector outside the module")
            return la.zeros(vecs.shape[0], 0)
        piv, C = self._coord_data(w)
        return la.matmul(vecs[:, piv], C, self.p)

    def checked_coords(self, w, vecs):
        """As coords, but raises when a vector leaves U."""
        sq = self.blocks.get(w)
        if sq is None:
            return self.coords(w, vecs)
        return sq.coords(vecs)

    def apply(self, i, j, vecs):
        """xi_(i,j) on local vectors of weight content(j)."""
        wi, wj = content(i, self.D), content(j, self.D)
        vecs = la.as_rows(vecs, self.local_size(wj))
        O = pair_operator(self.D, self.N, tuple(i), tuple(j))
        v = vecs.reshape(vecs.shape[0], self.space.size(wj), self.c)
        out = np.einsum("ab,rbk->rak", O, v) % self.p
        return out.reshape(vecs.shape[0], self.local_size(wi))

    def act(self, i, j):
        """Matrix of xi_(i,j): module coords of weight j -> weight i."""
        key = ("act", i, j)
        if key not in self._cache:
            wi, wj = content(i, self.D), content(j, self.D)
            if self.wdim(wi) == 0 or self.wdim(wj) == 0:
                m = la.zeros(self.wdim(wi), self.wdim(wj))
            else:
                m = self.coords(wi, self.apply(i, j, self.lifts(wj))).T.copy()
            self._cache[key] = m
        return self._cache[key]

    def generator_actions(self):
        key = "gens"
        if key not in self._cache:
            out = []
            for name, i, j in self.algebra.generators():
                wi, wj = content(i, self.D), content(j, self.D)
                if self.wdim(wi) and self.wdim(wj):
                    out.append((wj, wi, self.act(i, j)))
            self._cache[key] = out
        return self._cache[key]

    def full_action(self, i, j):
        """xi_(i,j) on the whole module (block matrix in weight order)."""
        off = self.offsets()
        m = la.zeros(self.dim, self.dim)
        wi, wj = content(i, self.D), content(j, self.D)
        if wi in off and wj in off:
            a = self.act(i, j)
            m[off[wi]:off[wi] + a.shape[0], off[wj]:off[wj] + a.shape[1]] = a
        return m

    def offsets(self):
        off, k = {}, 0
        for w in self.weights:
            off[w] = k
            k += self.wdim(w)
        return off

    def check_structure(self, samples=64, seed=0):
        """Spot-check that the action is an algebra map on random basis pairs."""
        alg = self.algebra
        basis = alg.basis()
        rng = np.random.default_rng(seed)
        ops = [alg.operator(i, j).reshape(-1) for i, j in basis]
        A = np.array(ops, dtype=np.int64).T
        for _ in range(samples):
            a, b = rng.integers(len(basis), size=2)
            prod = la.matmul(alg.operator(*basis[a]), alg.operator(*basis[b]), self.p)
            x = la.solve_linear(A, prod.reshape(-1), self.p)
            lhs = la.matmul(self.full_action(*basis[a]), self.full_action(*basis[b]), self.p)
            rhs = la.zeros(self.dim, self.dim)
            for k in np.nonzero(x)[0]:
                rhs = (rhs + int(x[k]) * self.full_action(*basis[k])) % self.p
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def to_ambient(self, w, vecs):
        vecs = la.as_rows(vecs, self.local_size(w))
        out = la.zeros(vecs.shape[0], self.space.total * self.c)
        out[:, self.space.positions(w, self.c)] = vecs
        return out

    def __repr__(self):
        return f"SchurModule(D={self.D}, N={self.N}, p={self.p}, dims={self.weight_dims()})"


def zero_schur(D, N, p):
    return SchurModule(D, N, p, 1, {})


def from_ambient(D, N, p, c, upper, lower):
    """Module U/W from full ambient row spans (both stable under S(D, N))."""
    sp = tensor_space(D, N)
    n = sp.total * c
    upper, lower = la.as_rows(upper, n), la.as_rows(lower, n)
    blocks = {}
    for w in sp.weights:
        pos = sp.positions(w, c)
        U = upper[:, pos]
        U = U[np.any(U % p, axis=1)]
        if U.shape[0] == 0:
            continue
        L = lower[:, pos]
        L = L[np.any(L % p, axis=1)]
        blocks[w] = la.subquotient(U, L, len(pos), p)
    return SchurModule(D, N, p, c, blocks)


def _sq(rows, n, p):
    rows = la.as_rows(rows, n)
    return la.Subquotient(p, n, rows % p, la.zeros(0, n))


def tensor_power(D, N, p):
    sp = tensor_space(D, N)
    return SchurModule(D, N, p, 1, {w: _sq(la.eye(sp.size(w)), sp.size(w), p) for w in sp.weights})


def gamma_module(D, comp, p):
    """Gamma^comp: invariants of the Young subgroup, basis = orbit sums."""
    N = sum(comp)
    sp = tensor_space(D, N)
    blocks = {}
    for w in sp.weights:
        reps = orbit_reps(D, tuple(comp), w)
        rows = la.zeros(len(reps), sp.size(w))
        idx = {r: k for k, r in enumerate(reps)}
        for t, pos in sp.local[w].items():
            rows[idx[canon(t, comp)], pos] = 1
        blocks[w] = _sq(rows, sp.size(w), p)
    return SchurModule(D, N, p, 1, blocks)


def sym_module(D, comp, p):
    """S^comp: coinvariants of the Young subgroup."""
    N = sum(comp)
    sp = tensor_space(D, N)
    blocks = {}
    for w in sp.weights:
        n = sp.size(w)
        rel = []
        for t, pos in sp.local[w].items():
            r = canon(t, comp)
            if r != t:
                row = np.zeros(n, dtype=np.int64)
                row[pos] += 1
                row[sp.local[w][r]] -= 1
                rel.append(row % p)
        blocks[w] = la.subquotient(la.eye(n), np.array(rel).reshape(-1, n), n, p)
    return SchurModule(D, N, p, 1, blocks)


def exterior_module(D, comp, p):
    """Lambda^comp: T^N modulo the submodule generated by v (x) v in a block.

    Spanned by basis tensors with a repeated letter inside one block and
    e_t + e_{tau t} for transpositions tau of two positions in a block.
    """
    N = sum(comp)
    sp = tensor_space(D, N)
    blocks = {}
    for w in sp.weights:
        n = sp.size(w)
        rel = []
        for t, pos in sp.local[w].items():
            for b in blocks_of(comp):
                for x, y in itertools.combinations(b, 2):
                    row = np.zeros(n, dtype=np.int64)
                    row[pos] = 1
                    if t[x] != t[y]:
                        s = list(t)
                        s[x], s[y] = s[y], s[x]
                        row[sp.local[w][tuple(s)]] += 1
                    rel.append(row % p)
        blocks[w] = la.subquotient(la.eye(n), np.array(rel).reshape(-1, n), n, p)
    return SchurModule(D, N, p, 1, blocks)


def tensor_modules(A, B):
    """A (x) B: weights add, tensors concatenate, slots multiply."""
    if A.D != B.D or A.p != B.p:
        raise ValueError("tensor factors must share D and p")
    D, p = A.D, A.p
    N = A.N + B.N
    c = A.c * B.c
    sp = tensor_space(D, N)
    ups, lows = {}, {}
    for wa in A.space.weights:
        sqa = A.blocks.get(wa)
        if sqa is None:
            continue
        for wb in B.space.weights:
            sqb = B.blocks.get(wb)
            if sqb is None:
                continue
            w = tuple(x + y for x, y in zip(wa, wb))
            ta, tb = A.space.tensors[wa], B.space.tensors[wb]
            loc = sp.local[w]
            # index map from kron(local_a, local_b) to local of w
            sa = np.array([loc[s + u] for s in ta for u in tb], dtype=np.int64).reshape(len(ta), len(tb))
            ka, kb = np.arange(A.c), np.arange(B.c)
            target = (sa[:, None, :, None] * c + ka[None, :, None, None] * B.c + kb[None, None, None, :])
            target = target.reshape(-1)
            full_a = np.vstack([sqa.basis, sqa.sub])
            full_b = np.vstack([sqb.basis, sqb.sub])
            n = sp.size(w) * c

            def place(X, Y):
                if X.shape[0] == 0 or Y.shape[0] == 0:
                    return la.zeros(0, n)
                kr = np.einsum("ra,sb->rsab", X, Y).reshape(X.shape[0] * Y.shape[0], -1) % p
                out = la.zeros(kr.shape[0], n)
                out[:, target] = kr
                return out

            ups.setdefault(w, []).append(place(full_a, full_b))
            lows.setdefault(w, []).append(place(sqa.sub, full_b))
            lows.setdefault(w, []).append(place(full_a, sqb.sub))
    blocks = {}
    for w, us in ups.items():
        n = sp.size(w) * c
        blocks[w] = la.subquotient(la.row_basis(np.vstack(us), p), np.vstack(lows[w]), n, p)
    return SchurModule(D, N, p, c, blocks)


def dual_module(A):
    """DA = W^perp / U^perp in the same ambient (xi_(i,j) transposes to xi_(j,i))."""
    blocks = {}
    for w in A.weights:
        sq = A.blocks[w]
        n = sq.n
        full = np.vstack([sq.basis, sq.sub])
        blocks[w] = la.subquotient(la.kernel_basis(sq.sub, p=A.p) if sq.sub.shape[0] else la.eye(n),
                                   la.kernel_basis(full, A.p), n, A.p)
    return SchurModule(A.D, A.N, A.p, A.c, blocks)


def _full_ambient_rows(A):
    """(upper, lower) of A as full ambient row spans."""
    ups, lows = [], []
    for w in A.weights:
        sq = A.blocks[w]
        ups.append(A.to_ambient(w, np.vstack([sq.basis, sq.sub])))
        lows.append(A.to_ambient(w, sq.sub))
    n = A.space.total * A.c
    up = np.vstack(ups) if ups else la.zeros(0, n)
    lo = np.vstack(lows) if lows else la.zeros(0, n)
    return up, lo


def compose_modules(F_at_E, G):
    """F o G, with F evaluated at E = dim G(K^D)."""
    p = G.p
    E, k, cF = F_at_E.D, F_at_E.N, F_at_E.c
    if E != G.dim:
        raise ValueError("outer functor must be evaluated at the inner dimension")
    D, m, cG = G.D, G.N, G.c
    N = m * k
    tensor_space(D, N)
    nG = G.space.total * cG
    # lifts of a basis of G(K^D) into its ambient, in weight order
    gl = np.vstack([G.to_ambient(w, G.lifts(w)) for w in G.weights]) if G.weights else la.zeros(0, nG)
    Gup, Glo = _full_ambient_rows(G)
    Gfull = la.row_basis(Gup, p)
    Dm = D ** m
    c = cG ** k * cF
    n = D ** N * c

    def reorder(X):
        # axes (r, t1, g1, t2, g2, ..., f) -> (r, t1..tk, g1..gk, f)
        r = X.shape[0]
        X = X.reshape((r,) + (Dm, cG) * k + (cF,))
        axes = [0] + [1 + 2 * a for a in range(k)] + [2 + 2 * a for a in range(k)] + [1 + 2 * k]
        return np.transpose(X, axes).reshape(r, n)

    def lift(rows):
        rows = la.as_rows(rows, E ** k * cF)
        X = rows.reshape((rows.shape[0],) + (E,) * k + (cF,))
        for _ in range(k):
            # contracts the leading E axis; the new axis goes to the end
            X = np.tensordot(X, gl, axes=([1], [0])) % p
        X = np.moveaxis(X, 1, -1)
        return reorder(X.reshape(rows.shape[0], nG ** k * cF))

    Fup, Flo = _full_ambient_rows(F_at_E)
    wtot = []
    for q in range(k):
        parts = [Gfull] * q + [la.as_rows(Glo, nG)] + [Gfull] * (k - q - 1)
        if any(P.shape[0] == 0 for P in parts):
            continue
        X = parts[0]
        for P in parts[1:]:
            X = np.einsum("ra,sb->rsab", X, P).reshape(X.shape[0] * P.shape[0], -1) % p
        X = np.einsum("ra,sb->rsab", X, la.eye(cF)).reshape(X.shape[0] * cF, -1)
        wtot.append(reorder(X))
    Wtot = np.vstack(wtot) if wtot else la.zeros(0, n)
    up = np.vstack([lift(Fup), Wtot])
    lo = np.vstack([lift(Flo), Wtot])
    return from_ambient(D, N, p, c, up, lo)


# ------------------------------------------------------------ maps

class SchurMap:
    """Module map given by one matrix per weight (module coordinates)."""

    def __init__(self, source, target, blocks):
        self.source, self.target = source, target
        self.blocks = {}
        for w in set(source.weights) & set(target.weights):
            b = blocks.get(w)
            self.blocks[w] = (la.zeros(target.wdim(w), source.wdim(w)) if b is None
                              else np.asarray(b, dtype=np.int64) % source.p)

    def block(self, w):
        return self.blocks.get(w, la.zeros(self.target.wdim(w), self.source.wdim(w)))

    def matrix(self):
        so, to = self.source.offsets(), self.target.offsets()
        m = la.zeros(self.target.dim, self.source.dim)
        for w, b in self.blocks.items():
            m[to[w]:to[w] + b.shape[0], so[w]:so[w] + b.shape[1]] = b
        return m

    def then(self, other):
        return SchurMap(self.source, other.target,
                        {w: la.matmul(other.block(w), self.block(w), self.source.p)
                         for w in self.source.weights})

    def rank(self):
        return sum(la.rank(b, self.source.p) for b in self.blocks.values())

    def is_iso(self):
        if self.source.weight_dims() != self.target.weight_dims():
            return False
        return all(la.rank(self.block(w), self.source.p) == self.source.wdim(w)
                   for w in self.source.weights)

    def is_equivariant(self):
        A, B = self.source, self.target
        for name, i, j in A.algebra.generators():
            wi, wj = content(i, A.D), content(j, A.D)
            lhs = la.matmul(B.act(i, j), self.block(wj), A.p)
            rhs = la.matmul(self.block(wi), A.act(i, j), A.p)
            if not np.array_equal(lhs, rhs):
                return False
        return True


def map_from_local(A, B, fn):
    """Map induced by an ambient operator; fn(w, rows of A's local w) -> rows of B's local w."""
    blocks = {}
    for w in A.weights:
        if B.wdim(w) == 0:
            continue
        blocks[w] = B.coords(w, fn(w, A.lifts(w))).T.copy()
    return SchurMap(A, B, blocks)


def kernel_schur(phi):
    A, p = phi.source, phi.source.p
    blocks = {}
    for w in A.weights:
        sq = A.blocks[w]
        x = la.kernel_basis(phi.block(w), p)
        up = np.vstack([la.matmul(x, sq.basis, p), sq.sub])
        blocks[w] = la.subquotient(up, sq.sub, sq.n, p)
    return SchurModule(A.D, A.N, p, A.c, blocks)


def cokernel_schur(phi):
    B, p = phi.target, phi.target.p
    blocks = {}
    for w in B.weights:
        sq = B.blocks[w]
        img = la.matmul(phi.block(w).T, sq.basis, p)
        blocks[w] = la.subquotient(np.vstack([sq.basis, sq.sub]), np.vstack([sq.sub, img]), sq.n, p)
    return SchurModule(B.D, B.N, p, B.c, blocks)


def image_schur(phi):
    B, p = phi.target, phi.target.p
    blocks = {}
    for w in B.weights:
        sq = B.blocks[w]
        img = la.matmul(phi.block(w).T, sq.basis, p)
        blocks[w] = la.subquotient(np.vstack([img, sq.sub]), sq.sub, sq.n, p)
    return SchurModule(B.D, B.N, p, B.c, blocks)


def _stab_size(wt):
    out = 1
    for m in wt:
        out *= math.factorial(m)
    return out


def norm_map(N, D, p):
    """S^N -> Gamma^N induced by the sum over all place permutations."""
    S = sym_module(D, (N,), p)
    G = gamma_module(D, (N,), p)

    def fn(w, rows):
        # each weight space of T^N is a single orbit
        tot = rows.sum(axis=1, keepdims=True) * _stab_size(w)
        return np.repeat(tot, rows.shape[1], axis=1) % p

    return map_from_local(S, G, fn)


# ------------------------------------------------------------ hom and ext

def hom_poly_modules(A, B):
    """Basis of Hom_{S(D,N)}(A, B) as SchurMaps."""
    if (A.D, A.N, A.p) != (B.D, B.N, B.p):
        raise ValueError("degree or field mismatch")
    p = A.p
    common = [w for w in A.weights if B.wdim(w)]
    off, k = {}, 0
    for w in common:
        off[w] = k
        k += B.wdim(w) * A.wdim(w)
    if k == 0:
        return []
    rows = []
    for name, i, j in A.algebra.generators():
        wi, wj = content(i, A.D), content(j, A.D)
        # B_g X_wj - X_wi A_g = 0, shape dB(wi) x dA(wj)
        r, s = B.wdim(wi), A.wdim(wj)
        if r == 0 or s == 0:
            continue
        eq = la.zeros(r * s, k)
        if wj in off:
            Bg = B.act(i, j)
            eq[:, off[wj]:off[wj] + B.wdim(wj) * s] += np.kron(Bg, la.eye(s))
        if wi in off:
            Ag = A.act(i, j)
            eq[:, off[wi]:off[wi] + r * A.wdim(wi)] -= np.kron(la.eye(r), Ag.T)
        rows.append(eq % p)
    system = np.vstack(rows) if rows else la.zeros(0, k)
    out = []
    for x in la.kernel_basis(system, p):
        blocks = {w: x[off[w]:off[w] + B.wdim(w) * A.wdim(w)].reshape(B.wdim(w), A.wdim(w))
                  for w in common}
        out.append(SchurMap(A, B, blocks))
    return out


def find_schur_iso(A, B, tries=32, seed=0):
    """An isomorphism A -> B from Hom(A, B), or None."""
    if A.weight_dims() != B.weight_dims():
        return None
    if A.dim == 0:
        return SchurMap(A, B, {})
    basis = hom_poly_modules(A, B)
    if not basis:
        return None
    for phi in basis:
        if phi.is_iso():
            return phi
    rng = np.random.default_rng(seed)
    for _ in range(tries):
        cs = rng.integers(A.p, size=len(basis))
        blocks = {w: sum(int(c) * phi.block(w) for c, phi in zip(cs, basis)) % A.p for w in A.weights}
        phi = SchurMap(A, B, blocks)
        if phi.is_iso():
            return phi
    return None


def schur_isomorphic(A, B, **kw):
    return find_schur_iso(A, B, **kw) is not None


class FreeGamma:
    """P = (+)_g Gamma^{wt_g} with slots g; basis = orbit sums per slot."""

    def __init__(self, D, N, p, wts):
        self.wts = list(wts)
        self.D, self.N, self.p = D, N, p
        c = max(len(self.wts), 1)
        sp = tensor_space(D, N)
        blocks, self.rows = {}, {}
        for w in sp.weights:
            n = sp.size(w) * c
            rows, meta = [], []
            for g, lam in enumerate(self.wts):
                for rep in orbit_reps(D, tuple(lam), w):
                    row = np.zeros(n, dtype=np.int64)
                    for t, pos in sp.local[w].items():
                        if canon(t, lam) == rep:
                            row[pos * c + g] = 1
                    rows.append(row)
                    meta.append((g, rep))
            if rows:
                blocks[w] = _sq(np.array(rows), n, p)
                self.rows[w] = meta
        self.module = SchurModule(D, N, p, c, blocks)

    def coefficients(self, w, vec):
        """Coefficient of each orbit-sum row of weight w in the local vector vec."""
        sp = self.module.space
        c = self.module.c
        return [int(vec[sp.local[w][rep] * c + g]) for g, rep in self.rows.get(w, [])]


def gamma_image(F, lam, v):
    """Per weight mu: matrix whose columns are xi_(i, j_lam) v over orbit reps i."""
    j = word_of(lam)
    out = {}
    for w in F.weights:
        reps = orbit_reps(F.D, tuple(lam), w)
        if not reps:
            continue
        cols = F.coords(w, np.vstack([F.apply(i, j, v) for i in reps]))
        out[w] = cols.T
    return out


def projective_cover(F):
    """Generators [(weight, local vector)] of F by weight vectors: greedy
    from the dominant end, then pruned until no generator is redundant."""
    p = F.p
    span = {w: la.zeros(0, F.wdim(w)) for w in F.weights}
    gens, images = [], []
    for lam in F.weights:
        if all(span[w].shape[0] == F.wdim(w) for w in F.weights):
            break
        lifts = F.lifts(lam)
        for b in range(F.wdim(lam)):
            e = la.zeros(1, F.wdim(lam))
            e[0, b] = 1
            if la.rank(np.vstack([span[lam], e]), p) == span[lam].shape[0]:
                continue
            v = lifts[b:b + 1]
            img = gamma_image(F, lam, v)
            gens.append((lam, v[0]))
            images.append(img)
            for w, cols in img.items():
                span[w] = la.row_basis(np.vstack([span[w], cols.T]), p)
            if all(span[w].shape[0] == F.wdim(w) for w in F.weights):
                break

    def covers(keep):
        for w in F.weights:
            cols = [images[k][w] for k in keep if w in images[k]]
            if not cols or la.rank(np.hstack(cols), p) < F.wdim(w):
                return False
        return True

    keep = list(range(len(gens)))
    for k in list(keep):
        rest = [x for x in keep if x != k]
        if covers(rest):
            keep = rest
    return [gens[k] for k in keep]


@dataclass
class GammaStage:
    wts: list          # weights of the generators of this term
    vecs: list         # each generator as a local vector in the previous term
    free: FreeGamma = field(repr=False, default=None)
    kernel: SchurModule = field(repr=False, default=None)


def gamma_resolution(F, length):
    """Terms P_0, ..., P_length of a (non-minimal) Gamma resolution of F."""
    stages = []
    prev = F
    for _ in range(length + 1):
        gens = projective_cover(prev)
        if len(gens) > MAX_WIDTH:
            raise ResourceError("resolution width guard exceeded")
        wts = [g[0] for g in gens]
        st = GammaStage(wts, [g[1] for g in gens])
        if not gens:
            stages.append(st)
            break
        st.free = FreeGamma(F.D, F.N, F.p, wts)
        P = st.free.module
        blocks = {}
        for w in P.weights:
            cols = [gamma_image(prev, lam, v.reshape(1, -1)).get(w, la.zeros(prev.wdim(w), len(orbit_reps(F.D, tuple(lam), w))))
                    for lam, v in zip(wts, st.vecs)]
            M = np.hstack(cols) if cols else la.zeros(prev.wdim(w), 0)
            x = la.kernel_basis(M, F.p)
            lifted = la.matmul(x, P.blocks[w].basis, F.p)
            blocks[w] = _sq(lifted, P.local_size(w), F.p)
        st.kernel = SchurModule(F.D, F.N, F.p, P.c, blocks)
        stages.append(st)
        prev = st.kernel
    return stages


def _stage_differential(G, prev_stage, stage):
    """Hom(P_k, G) -> Hom(P_{k+1}, G) as a block matrix."""
    p = G.p
    src = [G.wdim(lam) for lam in prev_stage.wts]
    tgt = [G.wdim(mu) for mu in stage.wts]
    m = la.zeros(sum(tgt), sum(src))
    so = np.cumsum([0] + src)
    to = np.cumsum([0] + tgt)
    free = prev_stage.free
    for l, (mu, v) in enumerate(zip(stage.wts, stage.vecs)):
        coeffs = free.coefficients(mu, v)
        for (g, rep), cval in zip(free.rows.get(mu, []), coeffs):
            if cval % p == 0:
                continue
            lam = prev_stage.wts[g]
            if src[g] == 0 or tgt[l] == 0:
                continue
            blk = G.act(rep, word_of(lam))
            m[to[l]:to[l + 1], so[g]:so[g + 1]] = (m[to[l]:to[l + 1], so[g]:so[g + 1]] + cval * blk) % p
    return m


def ext_poly_modules(A, B, max_degree):
    """dim Ext^q(A, B) for q = 0..max_degree."""
    if (A.D, A.N, A.p) != (B.D, B.N, B.p):
        raise ValueError("degree or field mismatch")
    stages = gamma_resolution(A, max_degree + 1)
    dims = [sum(B.wdim(lam) for lam in st.wts) for st in stages]
    ranks = []
    for k in range(len(stages) - 1):
        ranks.append(la.rank(_stage_differential(B, stages[k], stages[k + 1]), A.p))
    out = []
    for q in range(max_degree + 1):
        if q >= len(stages):
            out.append(0)
            continue
        rq = ranks[q] if q < len(ranks) else 0
        rprev = ranks[q - 1] if q >= 1 else 0
        out.append(dims[q] - rq - rprev)
    return out


# ------------------------------------------------------------ expressions

@dataclass(frozen=True)
class PolyFunctorExpr:
    op: str
    args: tuple = ()

    def degree(self, p):
        o, a = self.op, self.args
        if o in ("gamma", "s", "lambda"):
            return sum(a)
        if o == "T":
            return a[0]
        if o == "id":
            return 1
        if o == "twist":
            return p ** a[0] * a[1].degree(p)
        if o == "tensor":
            return sum(x.degree(p) for x in a)
        if o == "compose":
            return a[0].degree(p) * a[1].degree(p)
        if o == "dual":
            return a[0].degree(p)
        if o in ("ker_norm", "coker_norm"):
            return a[0]
        raise ValueError(f"unknown node {o}")

    def __str__(self):
        o, a = self.op, self.args
        if o == "id":
            return "id"
        if o in ("ker_norm", "coker_norm"):
            return f"{o.split('_')[0]}(norm({a[0]}))"
        return f"{o}({','.join(str(x) for x in a)})"


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(.))")


def parse_expr(text):
    """Parse gamma(2), s(1,1), lambda(2), T(2), id, twist(1, id), tensor(a, b),
    compose(a, b), dual(a), ker(norm(2)), coker(norm(2))."""
    toks = [(m.group(1), m.group(2), m.group(3)) for m in _TOKEN.finditer(text) if m.group(0).strip()]
    pos = [0]

    def peek():
        return toks[pos[0]] if pos[0] < len(toks) else (None, None, None)

    def take(sym=None):
        t = peek()
        if sym is not None and t[2] != sym:
            raise ValueError(f"expected {sym!r} in {text!r}")
        pos[0] += 1
        return t

    def ints():
        out = []
        take("(")
        while True:
            num = take()[0]
            if num is None:
                raise ValueError(f"expected an integer in {text!r}")
            out.append(int(num))
            if peek()[2] == ",":
                take(",")
                continue
            take(")")
            return tuple(out)

    def expr():
        _, name, _ = take()
        if name is None:
            raise ValueError(f"bad expression {text!r}")
        if name == "id":
            return PolyFunctorExpr("id")
        if name in ("gamma", "s", "lambda"):
            return PolyFunctorExpr(name, ints())
        if name == "T":
            return PolyFunctorExpr("T", ints()[:1])
        if name == "twist":
            take("(")
            r = int(take()[0])
            take(",")
            inner = expr()
            take(")")
            return PolyFunctorExpr("twist", (r, inner))
        if name in ("tensor", "compose"):
            take("(")
            args = [expr()]
            while peek()[2] == ",":
                take(",")
                args.append(expr())
            take(")")
            if name == "compose" and len(args) != 2:
                raise ValueError("compose takes two arguments")
            return PolyFunctorExpr(name, tuple(args))
        if name == "dual":
            take("(")
            a = expr()
            take(")")
            return PolyFunctorExpr("dual", (a,))
        if name in ("ker", "coker"):
            take("(")
            if take()[1] != "norm":
                raise ValueError("only norm maps are named")
            n = ints()[0]
            take(")")
            return PolyFunctorExpr(f"{name}_norm", (n,))
        raise ValueError(f"unknown functor {name!r}")

    out = expr()
    if pos[0] != len(toks):
        raise ValueError(f"trailing input in {text!r}")
    return out


def as_expr(F):
    if isinstance(F, PolyFunctorExpr):
        return F
    if isinstance(F, str):
        return parse_expr(F)
    raise TypeError("expected an expression")


def _frobenius(r, p):
    e = PolyFunctorExpr("ker_norm", (p,))
    for _ in range(r - 1):
        e = PolyFunctorExpr("compose", (PolyFunctorExpr("ker_norm", (p,)), e))
    return e


@lru_cache(maxsize=256)
def _eval(e, D, p):
    o, a = e.op, e.args
    if o == "gamma":
        return gamma_module(D, a, p)
    if o == "s":
        return sym_module(D, a, p)
    if o == "lambda":
        return exterior_module(D, a, p)
    if o == "T":
        return tensor_power(D, a[0], p)
    if o == "id":
        return tensor_power(D, 1, p)
    if o == "tensor":
        out = _eval(a[0], D, p)
        for x in a[1:]:
            out = tensor_modules(out, _eval(x, D, p))
        return out
    if o == "dual":
        return dual_module(_eval(a[0], D, p))
    if o == "ker_norm":
        return kernel_schur(norm_map(a[0], D, p))
    if o == "coker_norm":
        return cokernel_schur(norm_map(a[0], D, p))
    if o == "twist":
        return _eval(PolyFunctorExpr("compose", (a[1], _frobenius(a[0], p))), D, p)
    if o == "compose":
        outer, inner = a
        G = _eval(inner, D, p)
        if outer.op == "id" or (outer.op == "T" and outer.args[0] == 1):
            return G
        if G.dim == 0:
            return zero_schur(D, e.degree(p), p)
        return compose_modules(_eval(outer, G.dim, p), G)
    raise ValueError(f"unknown node {o}")


def eval_expr(F, D=None, p=2):
    """Value of the expression F at K^D as an S(D, deg F)-module."""
    e = as_expr(F)
    n = e.degree(p)
    D = n if D is None else D
    if D < n:
        raise ValueError(f"need D >= deg = {n}")
    return _eval(e, D, p)


def _module(F, D, p):
    return F if isinstance(F, SchurModule) else eval_expr(F, D, p)


def hom_poly(F, G, D=None, p=2):
    return hom_poly_modules(_module(F, D, p), _module(G, D, p))


def ext_poly(F, G, D=None, max_degree=3, p=2):
    return ext_poly_modules(_module(F, D, p), _module(G, D, p), max_degree)


# ------------------------------------------------------------ c and d recollement

@lru_cache(maxsize=None)
def tensor_module(D, n, p):
    """(K^D)^{(x)n} as an S_n-module by place permutations."""
    Sn = gr.symmetric_group(n)
    acts = [gr.tensor_swap([D] * n, k) for k in range(n - 1)]
    return gr.GroupModule(Sn, p, D ** n, acts, check=False)


def _multilinear(D, n):
    if D < n:
        raise ValueError("need D >= n")
    return tuple(range(n)), tuple([1] * n + [0] * (D - n))


def c_star(F, D=None, p=2):
    """Hom(T^n, F) = F at the weight (1^n) with S_n acting by place permutation."""
    A = _module(F, D, p)
    n = A.N
    j, w = _multilinear(A.D, n)
    Sn = gr.symmetric_group(n)
    acts = []
    for s in Sn.generators:
        t = tuple(j[s[k]] for k in range(n))
        acts.append(A.act(t, j) if A.wdim(w) else la.zeros(0, 0))
    return gr.GroupModule(Sn, A.p, A.wdim(w), acts, check=False)


def j_star(f, D=None):
    """j*(f)(V) = f(V^{(x)n}) as a subquotient of Hom-spaces into the tensor space."""
    n = f.group.degree
    D = n if D is None else D
    p = f.p
    T = tensor_module(D, n, p)
    M, N = f.M, f.N
    if M.dim == 0:
        return zero_schur(D, n, p)
    up = co.hom_space(M, T).basis.reshape(-1, T.dim * M.dim)
    Hn = co.hom_space(N, T).basis
    lo = (np.einsum("kab,bc->kac", Hn, f.alpha.matrix) % p).reshape(-1, T.dim * M.dim)
    return from_ambient(D, n, p, M.dim, up, lo)


def j_star_map(phi, A=None, B=None, D=None):
    """j*(phi) for a coherent morphism phi: f -> g (acts by a -> a mu)."""
    f, g = phi.source, phi.target
    A = A or j_star(f, D)
    B = B or j_star(g, D)

    def fn(w, rows):
        r = rows.shape[0]
        x = rows.reshape(r, A.space.size(w), f.M.dim)
        y = np.einsum("rtm,mk->rtk", x, phi.mu) % A.p
        return y.reshape(r, -1)

    return map_from_local(A, B, fn)


def c_bang(M, D=None):
    return j_star(co.t_of(M), D)


def c_lowerstar(M, D=None):
    return j_star(co.h_of(gr.dual_g(M)), D)


def _generated_by_multilinear(A):
    """Submodule of A generated by its (1^n) weight space: the image of c_! c^*."""
    n = A.N
    j, w = _multilinear(A.D, n)
    sub = {u: la.zeros(0, A.wdim(u)) for u in A.weights}
    if A.wdim(w):
        for u, cols in gamma_image(A, w, A.lifts(w)).items():
            sub[u] = cols.T
    return sub


def d_star(F, D=None, p=2):
    """Coker of the counit c_! c^* F -> F."""
    A = _module(F, D, p)
    sub = _generated_by_multilinear(A)
    blocks = {}
    for u in A.weights:
        sq = A.blocks[u]
        img = la.matmul(sub[u], sq.basis, A.p) if sub[u].shape[0] else la.zeros(0, sq.n)
        blocks[u] = la.subquotient(np.vstack([sq.basis, sq.sub]), np.vstack([sq.sub, img]), sq.n, A.p)
    return SchurModule(A.D, A.N, A.p, A.c, blocks)


def d_shriek(F, D=None, p=2):
    """Ker of the unit F -> c_* c^* F, computed as D d_star D."""
    A = _module(F, D, p)
    return dual_module(d_star(dual_module(A)))


# ------------------------------------------------------------ j_! and j_*

@lru_cache(maxsize=None)
def young_module(n, comp, p):
    """K[S_n / S_comp] for the nonzero parts of comp (consecutive blocks)."""
    parts = tuple(m for m in comp if m)
    Sn = gr.symmetric_group(n)
    H = gr.young_subgroup(parts)
    return gr.induce(Sn, H, gr.trivial_module(H, p))


def _young_vectors(D, n, p, comp_src, comp_tgt):
    """For each basis psi of Hom(Y_src, Y_tgt): the tensor j*(h_psi) sends
    the generator of Gamma^src to, as a full tensor vector."""
    Ysrc, Ytgt = young_module(n, comp_src, p), young_module(n, comp_tgt, p)
    T = tensor_module(D, n, p)
    parts = tuple(m for m in comp_tgt if m)
    Sn = gr.symmetric_group(n)
    reps, _ = gr.coset_table(Sn, gr.young_subgroup(parts))
    sp = tensor_space(D, n)
    jt = word_of(comp_tgt)
    start = int(np.dot(jt, D ** np.arange(n - 1, -1, -1)))
    e = np.zeros(T.dim, dtype=np.int64)
    e[start] = 1
    moved = np.array([T.matrix(g) @ e % p for g in reps])      # rho_T(g_c) e_j
    basis = co.hom_space(Ysrc, Ytgt).basis                   # (k, dim Ytgt, dim Ysrc)
    # Y_src generator is e_0 (identity coset); psi(e_0) = sum_c psi[c, 0] g_c e_0
    vecs = np.einsum("kc,ct->kt", basis[:, :, 0], moved) % p if basis.shape[0] else la.zeros(0, T.dim)
    return basis, vecs


def _translate(D, n, p, src, tgt):
    """S_n-map (+)Y_src -> (+)Y_tgt realizing the Gamma-map P_tgt -> P_src.

    tgt.vecs[l] is the l-th generator of P_tgt as a local vector in the
    free module of the stage `src`.
    """
    sp = tensor_space(D, n)
    Sn = gr.symmetric_group(n)
    Ys = [young_module(n, tuple(w), p) for w in src.wts]
    Yt = [young_module(n, tuple(w), p) for w in tgt.wts]
    c_src = src.free.module.c
    blocks = [[None] * len(Ys) for _ in Yt]
    for l, (mu, v) in enumerate(zip(tgt.wts, tgt.vecs)):
        loc = np.asarray(v).reshape(sp.size(mu), c_src)
        for k, lam in enumerate(src.wts):
            target = np.zeros(sp.total, dtype=np.int64)
            target[sp.glob[mu]] = loc[:, k]
            basis, cand = _young_vectors(D, n, p, tuple(lam), tuple(mu))
            if basis.shape[0] == 0:
                if np.any(target % p):
                    raise ValueError("relation not realized by a Young-module map")
                continue
            x = la.solve_linear(cand.T, target % p, p)
            if x is None:
                raise ValueError("relation not realized by a Young-module map")
            blocks[l][k] = np.einsum("k,kab->ab", x, basis) % p
    return gr.block_map(Ys, Yt, blocks, source=gr.direct_sum(Ys, G=Sn, p=p),
                        target=gr.direct_sum(Yt, G=Sn, p=p))


def gamma_presentation(F, D=None, p=2):
    """(P_0 weights, P_1 stage) of a presentation of F by sums of Gamma's."""
    return gamma_resolution(_module(F, D, p), 1)[:2]


def s_copresentation(F, D=None, p=2):
    """Copresentation of F by sums of S^lam: the dual of DF's Gamma presentation."""
    return gamma_presentation(dual_module(_module(F, D, p)))


def j_bang(F, D=None, p=2):
    """j_!(F) = pres of the Young-module map realizing a Gamma presentation."""
    A = _module(F, D, p)
    n = A.N
    Sn = gr.symmetric_group(n)
    st = gamma_resolution(A, 1)
    if not st[0].wts:
        return co.h_of(co.zero_module(Sn, A.p))
    if len(st) < 2 or not st[1].wts:
        return co.h_of(gr.direct_sum([young_module(n, tuple(w), A.p) for w in st[0].wts]))
    return co.pres(_translate(A.D, n, A.p, st[0], st[1]))


def j_lowerstar(F, D=None, p=2):
    """j_*(F) = D j_!(DF)."""
    A = _module(F, D, p)
    return co.dualize(j_bang(dual_module(A)))


def _rank_at(phi, X):
    k, _ = co.kernel_c(phi)
    return co.eval_dim(phi.source, X) - co.eval_dim(k, X)


def invertible_at(a, b, X, tries=48, seed=0):
    """A morphism a -> b whose value at X is invertible (basis first, then random)."""
    want = co.eval_dim(a, X)
    if want != co.eval_dim(b, X):
        return None
    basis = co.hom_coherent(a, b)
    if want == 0:
        return co.zero_morphism(a, b)
    for phi in basis:
        if _rank_at(phi, X) == want:
            return phi
    rng = np.random.default_rng(seed)
    for _ in range(tries if basis else 0):
        phi = co.combine_morphisms(a, b, basis, rng.integers(a.p, size=len(basis)))
        if _rank_at(phi, X) == want:
            return phi
    return None


def norm_transformation(F, D=None, p=2):
    """j_!F -> j_*F, invertible on the tensor space.

    Hom(j_!F, j_*F) = End(F), and a morphism is invertible on the tensor
    space exactly when it comes from an automorphism of F, so the image
    does not depend on the choice.
    """
    A = _module(F, D, p)
    phi = invertible_at(j_bang(A), j_lowerstar(A), tensor_module(A.D, A.N, A.p))
    if phi is None:
        raise ValueError("no norm transformation found")
    return phi


def counit_j(f, D=None):
    """j_! j^* f -> f (up to an automorphism of j^* f)."""
    n = f.group.degree
    A = j_star(f, D)
    phi = invertible_at(j_bang(A), f, tensor_module(A.D, n, f.p))
    if phi is None:
        raise ValueError("no counit found")
    return phi


def unit_j(f, D=None):
    """f -> j_* j^* f (up to an automorphism of j^* f)."""
    n = f.group.degree
    A = j_star(f, D)
    phi = invertible_at(f, j_lowerstar(A), tensor_module(A.D, n, f.p))
    if phi is None:
        raise ValueError("no unit found")
    return phi


def i_upper_star(f, D=None):
    """Largest quotient of f vanishing on Young modules."""
    return co.cokernel_c(counit_j(f, D))[0]


def i_upper_shriek(f, D=None):
    """Largest subfunctor of f vanishing on Young modules."""
    return co.kernel_c(unit_j(f, D))[0]


def young_modules(n, p):
    return [young_module(n, lam, p) for lam in co._partitions(n)]


def vanishes_on_young(f):
    n = f.group.degree
    return all(co.eval_dim(f, Y) == 0 for Y in young_modules(n, f.p))


def j_bangstar(F, D=None, p=2):
    """Intermediate extension: the image of the norm transformation."""
    return co.image_c(norm_transformation(F, D, p))[0]


def injective_complex(F, length, D=None, p=2):
    """t_{Z_0} -> t_{Z_1} -> ... : j_* applied to an S-resolution of F."""
    A = _module(F, D, p)
    n = A.N
    Sn = gr.symmetric_group(n)
    stages = [st for st in gamma_resolution(dual_module(A), length) if st.wts]
    if not stages:
        z = co.t_of(co.zero_module(Sn, A.p))
        return co.CoherentComplex([z], [])
    psis = [_translate(A.D, n, A.p, stages[k], stages[k + 1]) for k in range(len(stages) - 1)]
    Z = [psi.source for psi in psis] + [psis[-1].target if psis else
                                        gr.direct_sum([young_module(n, tuple(w), A.p) for w in stages[0].wts])]
    objs = [co.t_of(z) for z in Z]
    maps = [co.t_map(psi, objs[k], objs[k + 1]) for k, psi in enumerate(psis)]
    return co.CoherentComplex(objs, maps)


def derived_j_star(F, q, D=None, p=2):
    """R^q j_*(F) as the cohomology of the complex of t's."""
    cx = injective_complex(F, q + 1, D, p)
    if q >= len(cx.objects):
        return co.t_of(co.zero_module(cx.objects[0].group, cx.objects[0].p))
    return cx.cohomology(q)


# ------------------------------------------------------------ diagram checks

def _module_iso(M, N):
    return M.dim == N.dim and co.are_isomorphic(co.h_of(M), co.h_of(N))


def commuting_diagram_checks(ns=(2, 3), p=2, seed=0, n_random=2):
    """c* j* = t*, j_! c_! = t_!, j_* c_* = t_* on random modules.

    Returns a list of (name, ok) pairs.
    """
    rng = np.random.default_rng(seed)
    out = []
    for n in ns:
        Sn = gr.symmetric_group(n)
        mods = [gr.regular_module(Sn, p), gr.trivial_module(Sn, p)]
        mods += [co.random_module(Sn, p, rng, max_dim=4) for _ in range(n_random)]
        for k, M in enumerate(mods):
            tag = f"n={n} M#{k}"
            out.append((f"c*j*h_M = M^du [{tag}]", _module_iso(c_star(j_star(co.h_of(M))), gr.dual_g(M))))
            f = co.t_of(M)
            out.append((f"c*j* = t* [{tag}]", _module_iso(c_star(j_star(f)), co.t_star(f))))
            out.append((f"j_!c_! = t_! [{tag}]", co.are_isomorphic(j_bang(c_bang(M)), co.t_bang(M))))
            out.append((f"j_*c_* = t_* [{tag}]", co.are_isomorphic(j_lowerstar(c_lowerstar(M)), co.t_lowerstar(M))))
    return out
