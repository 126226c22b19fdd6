import itertools
import json
import math
import random

import pytest

from corpus import example1, example1_tree, exhaustive_small_trees, random_tree_like, rs_pit_corpus
from qmonomial.algebra import AlgElem, GroupAlgebraRing, make_field
from qmonomial.circuit import CircuitBuilder, expand, expand_general, q_monomial_oracle
from qmonomial.derand import (
    PerfectHashFamily, build_phf, circuit_to_abp, coloring_constants, dtm_test, phf_size_bound,
    rs_pit, symbolic_zero_oracle, verify_phf,
)
from qmonomial.derand.abp import abp_polynomial, row_basis
from qmonomial.errors import BudgetError, InputFormatError, ParameterError, StructureError
from qmonomial.transform import transform_full


def brute_is_perfect(N, k, colorings):
    size = min(N, k)
    return all(any(len({h[i] for i in W}) == size for h in colorings)
               for W in itertools.combinations(range(N), size))


# -- perfect hash families ------------------------------------------------------


def test_certificate_n4_k2():
    F = PerfectHashFamily(4, 2, ((1, 2, 1, 2), (1, 1, 2, 2)))
    assert verify_phf(F)
    assert brute_is_perfect(4, 2, F.colorings)


def test_degenerate_families():
    assert not verify_phf(PerfectHashFamily(4, 2, ((1, 1, 1, 1),)))
    assert not verify_phf(PerfectHashFamily(4, 2, ()))
    assert build_phf(5, 5).colorings == ((1, 2, 3, 4, 5),)
    assert build_phf(5, 1).colorings == ((1,) * 5,)
    assert build_phf(3, 6).colorings == ((1, 2, 3),)


@pytest.mark.parametrize("N", range(1, 15))
def test_build_phf_small(N):
    for k in range(1, 5):
        F = build_phf(N, k)
        assert verify_phf(F)
        assert brute_is_perfect(N, k, F.colorings)
        assert all(len(h) == N and set(h) <= set(range(1, k + 1)) for h in F.colorings)


def test_build_phf_deterministic_and_sized():
    assert build_phf(10, 3) == build_phf(10, 3)
    for N in (6, 10, 14):
        assert len(build_phf(N, 4)) <= phf_size_bound(N, 4)


def test_phf_serialization_round_trip():
    F = build_phf(7, 3)
    text = F.dumps()
    assert text.splitlines()[0] == f"7 3 {len(F)}"
    assert PerfectHashFamily.loads(text) == F
    with pytest.raises(InputFormatError):
        PerfectHashFamily.loads("3 2 1\n1 2\n")
    with pytest.raises(InputFormatError):
        PerfectHashFamily.loads("3 2 2\n1 2 1\n")
    with pytest.raises(InputFormatError):
        PerfectHashFamily.loads("3 2 1\n1 2 5\n")


def test_phf_errors():
    with pytest.raises(ParameterError):
        build_phf(0, 2)
    with pytest.raises(BudgetError):
        build_phf(40, 8, budget=1000)


# -- ABP construction -------------------------------------------------------------


def test_single_z_abp():
    f = make_field(3)
    b = CircuitBuilder()
    abp = circuit_to_abp(b.build(b.var("z1")), {}, f, 1)
    assert len(abp.layers) == 2 and len(abp.edges) == 1
    assert abp.edges[0][2].terms[0][0] == "z1"
    assert not rs_pit(abp)


def test_parallel_two_path_abp():
    f = make_field(3)
    c_val = AlgElem.shifted_basis(f, 2, 1)
    b = CircuitBuilder()
    c = b.build(b.add(b.mul(b.var("z1"), b.var("c")), b.mul(b.var("z2"), b.var("c", fresh=True))))
    abp = circuit_to_abp(c, {"c": c_val}, f, 2)
    abp.check()
    assert len(abp.layers) == 2 and len(abp.edges) == 2
    assert sorted(abp.z_vars()) == ["z1", "z2"]


def test_annihilated_product_is_zero():
    f = make_field(3)
    y = AlgElem.shifted_basis(f, 2, 3)
    b = CircuitBuilder()
    c = b.build(b.mul(b.mul(b.var("c1"), b.var("z1")), b.mul(b.var("c2"), b.var("z2"))))
    consts = {"c1": y, "c2": y}
    assert rs_pit(circuit_to_abp(c, consts, f, 2))
    assert symbolic_zero_oracle(c, consts, f, 2)
    b = CircuitBuilder()
    assert not rs_pit(circuit_to_abp(b.build(b.add(b.var("z1"), b.var("z2"))), {}, f, 2))


def test_abp_rejects_bad_input():
    f = make_field(3)
    with pytest.raises(StructureError):
        circuit_to_abp(example1(), {}, f, 1)
    b = CircuitBuilder()
    z = b.var("z")
    with pytest.raises(StructureError):
        circuit_to_abp(b.build(b.mul(z, z)), {}, f, 1)


def test_abp_polynomial_matches_expansion():
    f = make_field(4)
    T = transform_full(example1_tree(), 2)
    rng = random.Random(0)
    coloring = [rng.randint(1, 3) for _ in range(T.vars.universe())]
    consts = coloring_constants(T, coloring, f, 3)
    abp = circuit_to_abp(T.circuit, consts, f, 3)
    abp.check()
    sym = expand_general(T.circuit, GroupAlgebraRing(f, 3), consts)
    via_abp = abp_polynomial(abp)
    assert {tuple(v for v, _ in m): c for m, c in sym.items()} == via_abp


def test_row_basis_rank():
    f = make_field(4)
    m = [[1, 2, 3], [2, 4, 6], [0, 0, 0], [0, 1, 1]]
    # row 2 is 2 * row 1 over GF(16)
    assert f.mul(2, 2) == 4 and f.mul(2, 3) == 6
    assert len(row_basis(f, m)) == 2


# -- rs_pit versus symbolic expansion ---------------------------------------------


def test_rs_pit_matches_symbolic_oracle():
    corpus = rs_pit_corpus()
    zeros = 0
    for c, consts, f, k in corpus:
        expected = symbolic_zero_oracle(c, consts, f, k)
        assert rs_pit(circuit_to_abp(c, consts, f, k)) == expected
        zeros += expected
    assert len(corpus) >= 400
    assert 50 <= zeros <= len(corpus) - 50


# -- DTM ---------------------------------------------------------------------------


@pytest.mark.parametrize("q, k, answer", [(3, 3, "yes"), (2, 3, "no"), (6, 5, "yes"), (2, 5, "no")])
def test_dtm_example1_tree(q, k, answer):
    r = dtm_test(example1_tree(), q, k)
    assert r.answer == answer
    assert r.mode == "deterministic" and r.seed is None


def test_dtm_product():
    b = CircuitBuilder()
    assert dtm_test(b.build(b.mul(b.var("x1"), b.var("x2"))), 2, 2).yes


def test_dtm_matches_oracle_on_small_trees():
    for c in exhaustive_small_trees(5, 3)[::3]:
        poly = expand(c)
        for q in (2, 3, 4):
            for k in (1, 2, 3, 4):
                assert dtm_test(c, q, k).yes == q_monomial_oracle(poly, q, k)


def test_dtm_matches_oracle_on_random_trees_n4():
    rng = random.Random(8)
    for _ in range(60):
        c = random_tree_like(rng, rng.randint(3, 4), depth=rng.randint(2, 4))
        q, k = rng.choice((2, 3, 4)), rng.randint(1, 4)
        assert dtm_test(c, q, k).yes == q_monomial_oracle(expand(c), q, k)


def test_dtm_report_is_schedule_independent():
    c = example1_tree()
    one = dtm_test(c, 3, 3, workers=1).to_dict(timings=False)
    eight = dtm_test(c, 3, 3, workers=8).to_dict(timings=False)
    assert json.dumps(one, sort_keys=True) == json.dumps(eight, sort_keys=True)
    assert one["extra"]["witness_coloring"] is not None
    assert one["trials_run"] == one["extra"]["witness_coloring"] + 1


def test_dtm_errors():
    with pytest.raises(StructureError):
        dtm_test(example1(), 3, 3)
    with pytest.raises(ParameterError):
        dtm_test(example1_tree(), 3, 3, family=build_phf(3, 3))
    with pytest.raises(ParameterError):
        dtm_test(example1_tree(), 1, 3)


def test_dtm_with_supplied_family():
    T = transform_full(example1_tree(), 3)
    F = build_phf(T.vars.universe(), 3)
    assert dtm_test(example1_tree(), 3, 3, family=F).extra["family_size"] == len(F)
    assert math.isfinite(phf_size_bound(4, 3))
