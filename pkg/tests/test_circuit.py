import json
import random
from collections import Counter
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import example1, example1_tree, random_dag, random_tree_like
from qmonomial.circuit import (
    Circuit, CircuitBuilder, Gate, IntModRing, IntRing, circuit_stats, evaluate, evaluate_monomials,
    expand, format_monomial, is_q_monomial, monomial, parse_circuit, q_monomial_oracle,
)
from qmonomial.errors import CircuitFormatError, ExpansionTooLarge, ParameterError

EXAMPLE1 = {
    monomial(x1=5): 16,
    monomial(x1=3, x2=1): 32,
    monomial(x1=2, x2=1): 2,
    monomial(x1=1, x2=2): 16,
    monomial(x2=2): 2,
}


def brute_parse_trees(c: Circuit) -> Counter:
    """Expansion by enumerating parse trees recursively (exponential, tiny circuits only)."""

    def walk(gid):
        g = c.gate(gid)
        if g.op == "var":
            return [Counter({g.name: 1})]
        if g.op == "add":
            return [m for i in g.inputs for m in walk(i)]
        return [a + b for a in walk(g.inputs[0]) for b in walk(g.inputs[1])]

    return Counter(tuple(sorted(m.items())) for m in walk(c.root))


def test_example1_expansion():
    assert expand(example1()) == EXAMPLE1
    assert expand(example1_tree()) == EXAMPLE1


def test_example1_shapes():
    st_dag = circuit_stats(example1())
    assert (st_dag.s, st_dag.t, st_dag.n, st_dag.tree_like) == (12, 7, 2, False)
    assert circuit_stats(example1_tree()).tree_like


def test_builder_shares_terminals():
    b = CircuitBuilder()
    x = b.var("x")
    assert b.var("x") == x
    twin = b.var("x", fresh=True)
    assert twin != x
    c = b.build(b.mul(b.mul(x, twin), b.var("y")))
    assert expand(c) == {monomial(x=2, y=1): 1}
    assert circuit_stats(c).n == 2


@settings(max_examples=80, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), shared=st.booleans())
def test_expand_matches_parse_tree_enumeration(seed, shared):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    c = random_dag(rng, n, rng.randint(1, 5)) if shared else random_tree_like(rng, n, depth=3)
    assert expand(c) == brute_parse_trees(c)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_evaluate_agrees_with_expansion_mod_p(seed):
    rng = random.Random(seed)
    c = random_dag(rng, 4, rng.randint(1, 8))
    p = 1_000_003
    point = {v: rng.randrange(p) for v in c.variables()}
    assert evaluate(c, point, IntModRing(p)) == evaluate_monomials(expand(c), point, p)


def test_evaluate_over_integers_and_callable():
    c = example1()
    poly = expand(c)
    for x1, x2 in product(range(-2, 3), repeat=2):
        want = sum(coef * x1 ** dict(m).get("x1", 0) * x2 ** dict(m).get("x2", 0)
                   for m, coef in poly.items())
        assert evaluate(c, {"x1": x1, "x2": x2}, IntRing()) == want
    assert evaluate(c, lambda name: 1, IntRing()) == sum(poly.values())


def test_evaluate_missing_variable():
    with pytest.raises(ParameterError, match="x2"):
        evaluate(example1(), {"x1": 1}, IntRing())


def test_round_trip_is_canonical():
    c = example1()
    text = c.dumps()
    again = parse_circuit(text)
    assert again == c
    assert again.dumps() == text
    assert json.loads(text)["root"] == c.root


@pytest.mark.parametrize("doc, fragment", [
    ("not json", "syntax"),
    ('{"gates": []}', "'gates' and 'root'"),
    ('{"gates": [{"id": 0, "op": "pow", "in": []}], "root": 0}', "unknown op"),
    ('{"gates": [{"id": 0, "op": "var"}], "root": 0}', "name"),
    ('{"gates": [{"id": 0, "op": "var", "name": "x"}, {"id": 1, "op": "mul", "in": [0]}], "root": 1}',
     "exactly 2"),
    ('{"gates": [{"id": 0, "op": "add", "in": [1]}, {"id": 1, "op": "add", "in": [0]}], "root": 0}',
     "cycle"),
    ('{"gates": [{"id": 0, "op": "var", "name": "x"}, {"id": 0, "op": "var", "name": "y"}], "root": 0}',
     "duplicate"),
    ('{"gates": [{"id": 0, "op": "add", "in": [5]}], "root": 0}', "does not exist"),
    ('{"gates": [{"id": 0, "op": "var", "name": "x"}, {"id": 1, "op": "var", "name": "y"}], "root": 0}',
     "unreachable"),
    ('{"gates": [{"id": 0, "op": "var", "name": "x"}], "root": 3}', "root"),
])
def test_malformed_circuits(doc, fragment):
    with pytest.raises(CircuitFormatError, match=fragment):
        parse_circuit(doc)


def test_error_names_the_gate():
    with pytest.raises(CircuitFormatError) as info:
        parse_circuit('{"gates": [{"id": 7, "op": "mul", "in": []}], "root": 7}')
    assert info.value.gate_id == 7
    assert str(info.value).startswith("gate 7:")


def test_deep_circuit_does_not_recurse():
    gates = [Gate(0, "var", "x")] + [Gate(i, "add", None, (i - 1,)) for i in range(1, 20000)]
    c = Circuit(gates, 19999)
    assert circuit_stats(c).t == 19999
    assert expand(c) == {monomial(x=1): 1}


def test_expansion_cap():
    b = CircuitBuilder()
    acc = b.add(*(b.var(f"x{i}") for i in range(6)))
    for _ in range(5):
        acc = b.mul(acc, b.add(*(b.var(f"x{i}") for i in range(6))))
    with pytest.raises(ExpansionTooLarge):
        expand(b.build(acc), cap=100)


def test_q_monomial_predicates():
    assert is_q_monomial(monomial(x=2, y=1), 3)
    assert not is_q_monomial(monomial(x=2, y=1), 2)
    assert format_monomial(monomial(x1=3, x2=1)) == "x1^3*x2"
    assert format_monomial(()) == "1"
    poly = expand(example1())
    # degree <= k semantics on Example 1
    assert q_monomial_oracle(poly, 3, 3)       # x1^2 x2
    assert not q_monomial_oracle(poly, 2, 5)   # nothing multilinear
    assert q_monomial_oracle(poly, 6, 5)       # x1^5
    assert q_monomial_oracle(poly, 3, 2)       # x2^2
    assert not q_monomial_oracle(poly, 2, 3)
    assert not q_monomial_oracle({monomial(x=1): 0}, 2, 1)
    with pytest.raises(ParameterError):
        q_monomial_oracle(poly, 1, 3)
