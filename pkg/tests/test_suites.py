import pytest

from polyfunctors import grouprep as gr
from polyfunctors import suites as su


def failures(checks):
    return [(c.name, c.detail) for c in checks if not c.ok]


def test_check_json():
    c = su.Check("s", "n", True, "d")
    assert c.to_json() == {"suite": "s", "name": "n", "status": "pass", "detail": "d"}
    assert su.Check("s", "n", False).to_json()["status"] == "fail"


def test_corpora_are_seeded():
    G = gr.symmetric_group(2)
    a = su.coherent_corpus(G, 2, seed=5)
    b = su.coherent_corpus(G, 2, seed=5)
    assert [f.alpha.matrix.tolist() for f in a] == [f.alpha.matrix.tolist() for f in b]
    assert len(su.poly_corpus(2, 2)) > 0


@pytest.mark.parametrize("n,p", [(2, 2), (3, 2), (2, 3)])
def test_recollement_t(n, p):
    checks = su.recollement_t(n, p)
    assert checks and not failures(checks)


@pytest.mark.parametrize("n,p", [(2, 2), (3, 2), (3, 3)])
def test_recollement_j(n, p):
    checks = su.recollement_j(n, p)
    assert checks and not failures(checks)


@pytest.mark.parametrize("p", [2, 3])
def test_products(p):
    checks = su.products_suite(p)
    assert checks and not failures(checks)


@pytest.mark.parametrize("p", [2, 3])
def test_composition(p):
    checks = su.composition_suite(p)
    assert checks and not failures(checks)


def test_chal():
    checks = su.chal_suite(2)
    assert len(checks) == 5 and not failures(checks)


def test_registry():
    assert set(su.SUITES) == {"recollement", "products", "composition", "chal"}
