"""Twisted functor cohomology: the graded algebras A_r, the bimodules B_r,
and two routes to Ext between Frobenius twists.

A_r = Ext(I^(r), I^(r)) is computed directly over a Schur algebra.  Only
graded dimensions are used; products are never formed.  Every A_r met
here sits in even degrees, so permuting tensor slots carries no signs.
"""
import itertools
from dataclasses import dataclass, field

import numpy as np

from . import coherent as co
from . import grouprep as gr
from . import linalg as la
from . import schur as sc


@dataclass
class GradedSpace:
    dims: dict
    modules: dict = field(default_factory=dict, repr=False)
    conjectural: bool = False

    def as_list(self, top=None):
        top = max(self.dims, default=-1) if top is None else top
        return [self.dims.get(k, 0) for k in range(top + 1)]

    def support(self):
        return sorted(k for k, v in self.dims.items() if v)

    def total(self):
        return sum(self.dims.values())

    def to_json(self):
        out = {"dims": {str(k): v for k, v in sorted(self.dims.items()) if v}}
        if self.conjectural:
            out["flag"] = "conjectural input"
        return out


@dataclass
class GradedBimodule:
    """Degree -> GroupModule over S_d x S_d (left factor listed first)."""
    d: int
    group: gr.PermGroup
    pieces: dict

    def dims(self):
        return {k: M.dim for k, M in sorted(self.pieces.items())}

    def total(self):
        return sum(M.dim for M in self.pieces.values())


def compute_A_r(r=1, p=2, max_degree=None):
    """Graded dims of Ext(I^(r), I^(r)) in the smallest faithful dimension."""
    q = p ** r
    top = 2 * q if max_degree is None else max_degree
    if q ** q > sc.MAX_AMBIENT:
        raise sc.ResourceError(f"p^r = {q} is beyond the ambient guard")
    dims = sc.ext_poly(f"twist({r},id)", f"twist({r},id)", D=q, max_degree=top, p=p)
    return GradedSpace({k: v for k, v in enumerate(dims)})


def _labels(A, d, k):
    """Tensor-slot labels of degree k: tuples of (degree, index) pairs."""
    pieces = [(deg, b) for deg in A.support() for b in range(A.dims[deg])]
    return [x for x in itertools.product(pieces, repeat=d) if sum(deg for deg, _ in x) == k]


def _degrees(A, d):
    supp = A.support()
    return sorted({sum(c) for c in itertools.product(supp, repeat=d)})


def _slot_action(s, x):
    """tau x with (tau x)[tau(i)] = x[i]."""
    out = [None] * len(x)
    for i, v in enumerate(x):
        out[s[i]] = v
    return tuple(out)


def tensor_power_graded(A, d, p):
    """A^{(x)d} as a graded S_d-module, S_d permuting slots."""
    Sd = gr.symmetric_group(d)
    out = {}
    for k in _degrees(A, d):
        labels = _labels(A, d, k)
        idx = {x: i for i, x in enumerate(labels)}
        acts = []
        for s in Sd.generators:
            m = la.zeros(len(labels), len(labels))
            for i, x in enumerate(labels):
                m[idx[_slot_action(s, x)], i] = 1
            acts.append(m)
        out[k] = gr.GroupModule(Sd, p, len(labels), acts, check=False)
    return out


def build_B(A, d, p):
    """B = A^{(x)d} (x) K[S_d]: left tau (x, s) = (tau x, tau s), right pi (x, s) = (x, s pi^-1)."""
    Sd = gr.symmetric_group(d)
    G = gr.product_group(Sd, Sd)
    elems = list(Sd.elements)
    pieces = {}
    for k in _degrees(A, d):
        labels = _labels(A, d, k)
        basis = [(x, s) for x in labels for s in elems]
        idx = {b: i for i, b in enumerate(basis)}
        acts = []
        for t in Sd.generators:
            m = la.zeros(len(basis), len(basis))
            for i, (x, s) in enumerate(basis):
                m[idx[(_slot_action(t, x), gr.compose(t, s))], i] = 1
            acts.append(m)
        for t in Sd.generators:
            ti = gr.inverse_perm(t)
            m = la.zeros(len(basis), len(basis))
            for i, (x, s) in enumerate(basis):
                m[idx[(x, gr.compose(s, ti))], i] = 1
            acts.append(m)
        pieces[k] = gr.GroupModule(G, p, len(basis), acts, check=False)
    return GradedBimodule(d, G, pieces)


def build_B_r(r, d, p):
    return build_B(compute_A_r(r, p), d, p)


def _is_divided_tensor(e):
    if e.op == "gamma":
        return True
    if e.op == "tensor":
        return all(_is_divided_tensor(x) for x in e.args)
    return False


def ext_via_pairing(G, F, r=1, p=2, A=None):
    """Ext(G^(r), F^(r)) as <j_*F . j_*DG, B_r>, degreewise.

    Outside tensors of divided powers the identity is not established;
    the result is still computed and flagged.
    """
    eg, ef = sc.as_expr(G), sc.as_expr(F)
    d = ef.degree(p)
    if eg.degree(p) != d:
        raise ValueError("degrees differ")
    Fm = sc.eval_expr(ef, d, p)
    Gm = sc.eval_expr(eg, d, p)
    jF = sc.j_lowerstar(Fm)
    jDG = sc.j_lowerstar(sc.dual_module(Gm))
    prod = co.odot(jF, jDG)
    B = build_B(A if A is not None else compute_A_r(r, p), d, p)
    dims = {k: co.eval_dim(prod, X) for k, X in B.pieces.items()}
    return GradedSpace(dims, conjectural=not _is_divided_tensor(eg))


def F_of_graded(F, A, p=2):
    """F(A) for a graded space A, as <j_*F, A^{(x)d}> degreewise."""
    e = sc.as_expr(F)
    d = e.degree(p)
    jF = sc.j_lowerstar(sc.eval_expr(e, d, p))
    return GradedSpace({k: co.eval_dim(jF, X) for k, X in tensor_power_graded(A, d, p).items()})
