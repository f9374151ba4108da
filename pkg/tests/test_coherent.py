import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polyfunctors import coherent as co
from polyfunctors import grouprep as gr
from polyfunctors import linalg as la

S1, S2, S3 = (gr.symmetric_group(n) for n in (1, 2, 3))


def norm_matrix(X):
    return sum(X.matrix(g) for g in X.group.elements) % X.p


def tate0_dim(X):
    """dim X^G / N X, computed straight from the group action."""
    return gr.fixed_points(X).shape[0] - la.rank(norm_matrix(X), X.p)


def tate_minus1_dim(X):
    """dim ker N / I X."""
    p = X.p
    aug = [(X.matrix(g) - la.eye(X.dim)) % p for g in X.group.elements]
    IX = la.rank(np.hstack(aug), p)
    return X.dim - la.rank(norm_matrix(X), p) - IX


def padded(g):
    """Same functor, presented with an extra cancelling copy of K."""
    R = gr.trivial_module(g.group, g.p)
    M = gr.direct_sum([g.M, R], g.group, g.p)
    N = gr.direct_sum([g.N, R], g.group, g.p)
    a = la.zeros(N.dim, M.dim)
    a[:g.N.dim, :g.M.dim] = g.alpha.matrix
    a[g.N.dim:, g.M.dim:] = la.eye(R.dim)
    return co.Presentation(gr.ModuleMap(M, N, a, check=False))


def random_morphism(f, g, rng):
    basis = co.hom_coherent(f, g)
    if not basis:
        return co.zero_morphism(f, g)
    return co.combine_morphisms(f, g, basis, rng.integers(0, f.p, len(basis)))


pres_s2 = st.tuples(st.sampled_from([2, 3]), st.integers(0, 10_000)).map(
    lambda a: co.random_presentation(S2, a[0], np.random.default_rng(a[1])))
pres_s3_p2 = st.integers(0, 10_000).map(lambda s: co.random_presentation(S3, 2, np.random.default_rng(s)))


def test_h_and_t_evaluations():
    K, R = gr.trivial_module(S2, 2), gr.regular_module(S2, 2)
    assert co.eval_dim(co.h_of(K), R) == 1
    assert co.eval_dim(co.t_of(K), R) == 1
    for X in co.probe_family(S3, 3, seed=1):
        assert co.eval_dim(co.h_of(gr.regular_module(S3, 3)), X) == X.dim


@pytest.mark.parametrize("p,G", [(2, S2), (3, S3), (2, S3)])
def test_t_of_is_coinvariant_tensor(p, G):
    for M in co.probe_family(G, p, seed=2, n_random=2):
        t = co.t_of(M)
        for X in co.probe_family(G, p, seed=3, n_random=2):
            assert co.eval_dim(t, X) == gr.coinvariant_tensor(M, X).dim


@pytest.mark.parametrize("p,G", [(2, S2), (3, S3), (2, S3)])
def test_tate_functors_against_direct_formula(p, G):
    H0, Hm = co.hat_tate(G, p, 0), co.hat_tate(G, p, -1)
    for X in co.probe_family(G, p, seed=4):
        assert co.eval_dim(H0, X) == tate0_dim(X)
        assert co.eval_dim(Hm, X) == tate_minus1_dim(X)


def test_tate_at_listed_points():
    K, R = gr.trivial_module(S2, 2), gr.regular_module(S2, 2)
    H0 = co.hat_tate(S2, 2, 0)
    assert (co.eval_dim(H0, R), co.eval_dim(H0, K)) == (0, 1)
    k, _ = co.kernel_c(co.norm_morphism(S2, 2))
    assert co.eval_dim(k, K) == 1
    assert co.are_isomorphic(k, co.hat_tate(S2, 2, -1))


def test_group_cohomology_functors():
    K = gr.trivial_module(S2, 2)
    assert co.are_isomorphic(co.cohomology_functor(S2, 2, 0), co.h_of(K))
    assert co.eval_dim(co.cohomology_functor(S2, 2, 1), K) == 1


def test_listed_hom_dims():
    K, R = gr.trivial_module(S2, 2), gr.regular_module(S2, 2)
    assert len(co.hom_coherent(co.h_of(K), co.h_of(R))) == gr.hom_dim(R, K) == 1
    H0 = co.hat_tate(S2, 2, 0)
    assert len(co.hom_coherent(H0, H0)) == 1


def test_cokernel_of_identity_is_zero():
    f = co.hat_tate(S3, 2, 0)
    c, _ = co.cokernel_c(co.identity_morphism(f))
    assert co.is_zero_object(c)


def test_duality_examples():
    for p in (2, 3):
        for M in co.probe_family(S2, p, seed=5, n_random=2):
            assert co.are_isomorphic(co.dualize(co.h_of(M)), co.t_of(M))
    H0, Hm = co.hat_tate(S2, 2, 0), co.hat_tate(S2, 2, -1)
    D0 = co.dualize(H0)
    for X in co.probe_family(S2, 2):
        assert co.eval_dim(D0, X) == co.eval_dim(Hm, X)


def test_t_recollement_examples():
    K, R = gr.trivial_module(S2, 2), gr.regular_module(S2, 2)
    H0 = co.hat_tate(S2, 2, 0)
    assert co.t_star(H0).dim == 0
    rng = np.random.default_rng(0)
    for _ in range(4):
        M = co.random_module(S3, 3, rng, 4)
        assert gr.hom_dim(co.t_star(co.h_of(M)), gr.dual_g(M)) > 0
        assert co.t_star(co.h_of(M)).dim == M.dim
        tM = co.t_star(co.t_bang(M))
        assert co.are_isomorphic(co.h_of(tM), co.h_of(M))
    assert co.is_zero_object(co.r_star(co.h_of(gr.regular_module(S2, 2))))
    rs = co.r_shriek(co.t_of(K))
    assert co.eval_dim(rs, K) == gr.tor1(K, K) == 1
    assert co.are_isomorphic(co.r_star(H0), H0)
    assert R.dim == 2


def test_ext_examples():
    K, R = gr.trivial_module(S2, 2), gr.regular_module(S2, 2)
    H0 = co.hat_tate(S2, 2, 0)
    assert co.ext_coherent(co.h_of(K), H0, 2)[1:] == [0, 0]
    assert co.ext_coherent_resolution(H0, H0, 3) == [1, 0, 1, 0]
    for f in [co.h_of(K), co.t_of(K), co.hat_tate(S2, 3, 0)]:
        assert co.ext_coherent_resolution(f, f, 3)[3] == 0


def test_classify_examples():
    K = gr.trivial_module(S2, 2)
    assert co.classify_coherent(co.h_of(K))["projective"]
    c = co.classify_coherent(co.t_of(K))
    assert c["injective"] and not c["projective"]
    c = co.classify_coherent(co.hat_tate(S2, 2, 0))
    assert not any(c.values())


def test_transport_examples():
    H = gr.young_subgroup((2, 1))
    M = gr.trivial_module(H, 3)
    up = co.transport("up", S3, H, co.h_of(M))
    assert co.are_isomorphic(up, co.h_of(gr.induce(S3, H, M)))


def test_transport_adjunction():
    H = gr.young_subgroup((2, 1))
    rng = np.random.default_rng(11)
    for _ in range(10):
        f, g = co.random_presentation(H, 3, rng), co.random_presentation(S3, 3, rng)
        up, down = co.transport("up", S3, H, f), co.transport("down", S3, H, g)
        assert len(co.hom_coherent(up, g)) == len(co.hom_coherent(f, down))


def test_odot_examples():
    K, R = gr.trivial_module(S2, 2), gr.regular_module(S2, 2)
    hK, H0 = co.h_of(K), co.hat_tate(S2, 2, 0)
    assert co.are_isomorphic(co.odot(hK, hK), co.h_of(gr.external_box(K, K)))
    a, b = co.odot(H0, hK), co.odot(hK, H0)
    # f . h_K (X) = f(X^H) while h_K . f (X) = f(X)^H
    X = gr.external_box(R, K)
    assert (co.eval_dim(a, X), co.eval_dim(b, X)) == (0, 1)
    X = gr.external_box(K, R)
    assert (co.eval_dim(a, X), co.eval_dim(b, X)) == (1, 0)


def test_box_examples():
    G2 = gr.product_group(S2, S2)
    K, R = gr.trivial_module(S2, 3), gr.regular_module(S2, 3)
    E = gr.sign_module(S2, 3)
    for M in (K, R, E):
        for N in (K, E):
            box = gr.external_box(M, N)
            assert co.are_isomorphic(co.box_l(co.h_of(M), co.h_of(N)), co.h_of(box))
            assert co.are_isomorphic(co.box_r(co.t_of(M), co.t_of(N)), co.t_of(box))
    assert G2.order == 4


def test_tensor_l_examples():
    K1 = gr.trivial_module(S1, 2)
    h = co.h_of(K1)
    assert co.are_isomorphic(co.tensor_l(h, h), co.h_of(gr.regular_module(S2, 2)))
    a = co.tensor_l(co.tensor_l(h, h), h)
    b = co.tensor_l(h, co.tensor_l(h, h))
    assert co.are_isomorphic(a, b)


def test_pairing_examples():
    K, R = gr.trivial_module(S2, 2), gr.regular_module(S2, 2)
    assert co.pairing_graded_dims(co.t_of(K), {5: R}) == {5: 1}
    A = {0: K, 3: R}
    assert co.pairing_graded_dims(co.h_of(K), A) == {0: 1, 3: 1}
    for X in co.probe_family(S2, 2):
        assert co.pairing(co.hat_tate(S2, 2, 0), {0: X})[0].dim == co.eval_dim(co.hat_tate(S2, 2, 0), X)


def test_bullet_compose_examples():
    K = gr.trivial_module(S2, 2)
    hh = co.bullet_compose(co.h_of(K), co.h_of(K))
    assert hh.M.dim == 3
    assert co.are_isomorphic(hh, co.h_of(gr.wreath_induce(K, K)))
    g = co.hat_tate(S2, 2, 0)
    assert co.are_isomorphic(co.compose_bar(co.h_of(gr.trivial_module(S1, 2)), g), g)
    # h_{K[S_2]} o g forgets the action on g^{(x)_l 2}
    S4 = gr.symmetric_group(4)
    g = co.h_of(gr.trivial_module(S2, 3))
    cb = co.compose_bar(co.h_of(gr.regular_module(S2, 3)), g)
    gg = co.tensor_l(g, g)
    for X in co.probe_family(S4, 3, seed=1, n_random=1):
        assert co.eval_dim(cb, X) == co.eval_dim(gg, X)


@pytest.mark.parametrize("seed", range(10))
def test_bullet_and_compose_bar_agree(seed):
    rng = np.random.default_rng(seed)
    p = 2 + seed % 2
    f = co.random_presentation(S2, p, rng, max_dim=3)
    N = co.random_module(S2, p, rng, 3)
    assert co.are_isomorphic(co.bullet_compose(f, co.h_of(N)), co.compose_bar(f, co.h_of(N)))


@given(pres_s2)
def test_yoneda(f):
    for M in co.probe_family(f.group, f.p, seed=0, n_random=1):
        assert len(co.hom_coherent(co.h_of(M), f)) == co.eval_dim(f, M)


@given(pres_s2)
def test_dual_evaluates_at_dual_module(f):
    Df = co.dualize(f)
    for X in co.probe_family(f.group, f.p, seed=1, n_random=1):
        assert co.eval_dim(Df, X) == co.eval_dim(f, gr.dual_g(X))
    assert co.are_isomorphic(co.dualize(Df), f)


@given(pres_s2, pres_s2, st.integers(0, 1000))
def test_pointwise_exactness(f, g, seed):
    if f.p != g.p:
        g = co.random_presentation(S2, f.p, np.random.default_rng(seed))
    phi = random_morphism(f, g, np.random.default_rng(seed))
    k, _ = co.kernel_c(phi)
    c, _ = co.cokernel_c(phi)
    i, _ = co.image_c(phi)
    for X in co.probe_family(S2, f.p, seed=seed, n_random=1):
        r = la.rank(phi.at(X), f.p)
        assert co.eval_dim(k, X) == co.eval_dim(f, X) - r
        assert co.eval_dim(c, X) == co.eval_dim(g, X) - r
        assert co.eval_dim(i, X) == r


@given(pres_s2)
def test_t_recollement_properties(f):
    G, p = f.group, f.p
    R = gr.regular_module(G, p)
    assert co.eval_dim(co.r_star(f), R) == 0
    assert co.eval_dim(co.r_shriek(f), R) == 0
    M = co.t_star(f)
    for X in co.probe_family(G, p, seed=2, n_random=1):
        assert len(co.hom_coherent(co.t_bang(X), f)) == gr.hom_dim(X, M)
        assert len(co.hom_coherent(f, co.t_lowerstar(X))) == gr.hom_dim(M, X)


@given(st.tuples(st.sampled_from([S2, S3]), st.sampled_from([2, 3]), st.integers(0, 10_000)))
def test_global_dimension_two(a):
    G, p, seed = a
    rng = np.random.default_rng(seed)
    f, g = co.random_presentation(G, p, rng), co.random_presentation(G, p, rng)
    ext = co.ext_coherent_resolution(f, g, 3)
    assert ext[3] == 0
    assert ext[:3] == co.ext_coherent(f, g, 2)
    if p == 3 and G is S2:
        assert ext[1:] == [0, 0, 0]


@given(pres_s2)
def test_projectives_have_no_higher_ext(g):
    M = co.random_module(S2, g.p, np.random.default_rng(0), 3)
    assert co.ext_coherent_resolution(co.h_of(M), g, 2)[1:] == [0, 0]


@given(st.integers(0, 10_000))
def test_box_l_symmetric(seed):
    rng = np.random.default_rng(seed)
    f, g = co.random_presentation(S2, 2, rng, 3), co.random_presentation(S2, 2, rng, 3)
    assert co.are_isomorphic(co.twist(co.box_l(f, g), S2, S2), co.box_l(g, f))


@given(st.integers(0, 10_000))
def test_box_r_is_dual_of_box_l(seed):
    rng = np.random.default_rng(seed)
    f, g = co.random_presentation(S2, 3, rng, 3), co.random_presentation(S2, 3, rng, 3)
    a = co.box_r(f, g)
    b = co.dualize(co.box_l(co.dualize(f), co.dualize(g)))
    G2 = gr.product_group(S2, S2)
    for X in co.probe_family(G2, 3, seed=seed, n_random=1):
        assert co.eval_dim(a, X) == co.eval_dim(b, X)


@given(st.integers(0, 10_000))
def test_odot_commutes_with_duality(seed):
    rng = np.random.default_rng(seed)
    f, g = co.random_presentation(S2, 2, rng, 3), co.random_presentation(S2, 2, rng, 3)
    a = co.dualize(co.odot(f, g))
    b = co.odot(co.dualize(f), co.dualize(g))
    G2 = gr.product_group(S2, S2)
    for X in co.probe_family(G2, 2, seed=seed, n_random=1):
        assert co.eval_dim(a, X) == co.eval_dim(b, X)


@given(st.integers(0, 10_000))
def test_comparison_chain_degenerates(seed):
    rng = np.random.default_rng(seed)
    p = 2
    f = co.random_presentation(S2, p, rng, 3)
    P = co.h_of(co.random_module(S2, p, rng, 3))
    I = co.t_of(co.random_module(S2, p, rng, 3))
    assert co.is_isomorphism(co.comparison_box_l_odot(f, P)[0])
    assert co.is_isomorphism(co.comparison_odot_box_r(f, I)[0])


@settings(max_examples=8)
@given(st.integers(0, 10_000))
def test_bullet_compose_independent_of_presentation(seed):
    rng = np.random.default_rng(seed)
    f, g = co.random_presentation(S2, 2, rng, 2), co.random_presentation(S2, 2, rng, 1)
    assert co.are_isomorphic(co.bullet_compose(f, g), co.bullet_compose(f, padded(g)))


@settings(max_examples=8)
@given(st.integers(0, 10_000))
def test_bullet_compose_presentation_free_on_probes(seed):
    rng = np.random.default_rng(seed)
    f, g = co.random_presentation(S2, 2, rng, 2), co.random_presentation(S2, 2, rng, 2)
    a, b = co.bullet_compose(f, g), co.bullet_compose(f, padded(g))
    for X in co.probe_family(gr.symmetric_group(4), 2, seed=seed, n_random=1):
        assert co.eval_dim(a, X) == co.eval_dim(b, X)


@given(st.integers(0, 10_000))
def test_induced_presentation_evaluates_on_restriction(seed):
    rng = np.random.default_rng(seed)
    H = gr.young_subgroup((2, 1))
    f = co.random_presentation(H, 2, rng)
    up = co.transport("up", S3, H, f)
    for X in co.probe_family(S3, 2, seed=seed, n_random=1):
        assert co.eval_dim(up, X) == co.eval_dim(f, gr.restrict(S3, H, X))
