import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import transformations
from tvariants.constructions import (
    InversePair,
    build_scaffold,
    canonical_inverse,
    group_criterion,
    idempotent_normalizer,
    inverse_count,
    inverse_pair_bijections,
    inverses_of,
    lamb_sandwich_witnesses,
    local_as_variant,
    local_submonoid_check,
    random_inverse,
    restriction_witness,
    sandwich_monoids,
    sandwich_targets,
    transport_variant,
    variant_as_local,
    variant_embedding,
)
from tvariants.oracle import are_isomorphic
from tvariants.semigroup import full_tn, local_subsemigroup, sandwich_set, variant
from tvariants.transformation import Transformation, enumerate_all, is_idempotent
from tvariants.witness import IsoWitness, verify_embedding, verify_witness

T = Transformation.parse


def brute_inverses(f):
    return [g for g in enumerate_all(f.degree) if f * g * f == f and g * f * g == g]


# -- inverses ---------------------------------------------------------------

def test_inverses_of_example():
    got = inverses_of(T("[1,1,2]"))
    assert got == [T("[1,3,1]"), T("[1,3,3]"), T("[2,3,2]"), T("[2,3,3]")]
    assert canonical_inverse(T("[1,1,2]")).b == T("[1,3,1]")


@pytest.mark.parametrize("n", [1, 2, 3])
def test_inverses_match_naive_search(n):
    for f in enumerate_all(n):
        assert inverses_of(f) == brute_inverses(f)


@given(transformations(max_degree=6))
def test_random_inverse_is_an_inverse(f):
    pair = random_inverse(f, random.Random(str(f)))
    assert f * pair.b * f == f and pair.b * f * pair.b == pair.b
    assert canonical_inverse(f).b.rank == f.rank


def test_inverse_pair_rejects_non_inverses():
    with pytest.raises(ValueError):
        InversePair(T("[1,1,2]"), T("[1,2,3]"))
    with pytest.raises(ValueError):
        InversePair(T("[1,1]"), T("[1,1,1]"))


def test_inverse_pair_idempotents():
    pair = canonical_inverse(T("[2,2,4,4]"))
    assert is_idempotent(pair.e) and is_idempotent(pair.f)
    assert pair.swapped().a == pair.b


def test_idempotent_normalizer_examples():
    a = T("[2,2,1]")
    p = idempotent_normalizer(a)
    assert p == T("[3,1,2]")
    assert is_idempotent(p * a)
    # other permutations can do the job too
    assert is_idempotent(T("[3,2,1]") * a)


@given(transformations(max_degree=7))
def test_idempotent_normalizer_property(a):
    p = idempotent_normalizer(a)
    assert p.is_permutation()
    assert is_idempotent(p * a)
    assert (p * a).image == a.image


# -- sandwich sets -----------------------------------------------------------

@settings(max_examples=30)
@given(st.data())
def test_sandwich_set_lemmas_on_random_pairs(data):
    n = data.draw(st.integers(1, 4))
    a = data.draw(transformations(n))
    pair = random_inverse(a, random.Random(data.draw(st.integers(0, 10 ** 6))))
    assert all(c.passed for c in inverse_pair_bijections(pair))
    assert local_submonoid_check(pair)
    sandwich_monoids(pair)
    assert group_criterion(pair).consistent
    lamb_sandwich_witnesses(pair)


def test_sandwich_products_agree_on_asb():
    # on aSb the products with sandwich aab and with sandwich a coincide
    S = full_tn(3)
    for a in enumerate_all(3):
        pair = canonical_inverse(a)
        b = pair.b
        rows = [Transformation.from_array(r) for r in sandwich_set(S, a, b)]
        for x in rows:
            for y in rows:
                assert x * (a * a * b) * y == x * a * y


def test_group_criterion_examples():
    perm = canonical_inverse(T("[2,3,1]"))
    assert group_criterion(perm) == group_criterion(perm).__class__(True, True, True)
    g = group_criterion(InversePair(T("[1,1,2]"), T("[1,3,1]")))
    assert g.consistent and not g.group_inverses


def test_sandwich_monoid_identities():
    pair = canonical_inverse(T("[1,1,2]"))
    m = sandwich_monoids(pair)
    assert m.identities == {"aSa*b": pair.a, "bSb*a": pair.b, "aSb": pair.e, "bSa": pair.f}
    sizes = {k: len(v) for k, v in m.semigroups.items()}
    assert len(set(sizes.values())) == 1


# -- restriction and transport ------------------------------------------------

def test_restriction_example():
    res = restriction_witness(T("[1,2,2,4]"))
    assert res.points == (1, 2, 4)
    assert len(res.witness.source) == 27
    assert verify_witness(res.witness)


def test_restriction_rejects_non_idempotent():
    with pytest.raises(ValueError):
        restriction_witness(T("[2,1]"))


@given(st.data())
def test_restriction_inverse_ignores_extension(data):
    n = data.draw(st.integers(1, 5))
    a = data.draw(transformations(n))
    e = idempotent_normalizer(a) * a
    res = restriction_witness(e)
    r = len(res.points)
    g = data.draw(transformations(r))
    fill = data.draw(st.lists(st.integers(1, n), min_size=n - r, max_size=n - r))
    assert res.back(g) == res.back(g, fill)
    assert res.witness(res.back(g)) == g
    assert res.back(g).rank == g.rank


def test_transport_identity_witness():
    S = local_subsemigroup(full_tn(3), T("[1,1,2]"))
    w = transport_variant(IsoWitness.identity(S), T("[2,2,1]"))
    assert w.source.rule.sandwich == T("[2,2,1]")
    with pytest.raises(ValueError):
        transport_variant(IsoWitness.identity(S), T("[3,2,1]"))


# -- local subsemigroup as a variant -----------------------------------------

def test_local_as_variant_example():
    r = local_as_variant(T("[1,1,2]"))
    assert r.b == T("[1,3,1]")
    assert r.c == T("[1,1]")
    assert len(r.steps) == 3
    assert verify_witness(r.witness).passed


@settings(max_examples=25)
@given(transformations(max_degree=5))
def test_local_as_variant_rank(a):
    r = local_as_variant(a, verify_steps=False)
    assert r.c.degree == a.rank
    assert r.c.rank == (a * a).rank


def test_local_as_variant_with_each_inverse():
    a = T("[2,2,4,4]")
    for b in inverses_of(a):
        r = local_as_variant(a, b)
        assert r.c.rank == (a * a).rank


def test_choice_of_inverse_changes_c_but_not_the_variant():
    # the sandwich element depends on the chosen inverse for some a, but all
    # resulting variants are isomorphic
    split = [a for a in enumerate_all(3) if len(sandwich_targets(a)) > 1]
    assert split
    for a in split:
        cs = list(sandwich_targets(a))
        assert len({c.rank for c in cs}) == 1
        base = variant(full_tn(a.rank), cs[0])
        for c in cs[1:]:
            assert are_isomorphic(base, variant(full_tn(a.rank), c)).status == "isomorphic"


# -- variant as a local subsemigroup -----------------------------------------

def test_scaffold_example():
    s = build_scaffold(T("[1,2,2]"))
    assert s.degree == 4
    assert s.b == T("[1,2,4,2]")
    assert s.c == T("[1,2,2,3]")
    assert s.e == T("[1,2,3,2]")
    assert s.to_json()["Y"] == [[1], [2, 4]]


def test_scaffold_rejects_bad_input():
    with pytest.raises(ValueError):
        build_scaffold(T("[2,2,1]"))
    with pytest.raises(ValueError):
        build_scaffold(T("[1,1,3]"))
    with pytest.raises(ValueError):
        build_scaffold(T("[1,1,1]"), [4, 4])


def test_variant_as_local_example():
    r = variant_as_local(T("[1,2,2]"))
    assert len(r.witness.target) == 27
    assert r.scaffold.b.rank == 3
    assert verify_witness(r.witness).passed


@settings(max_examples=20)
@given(transformations(max_degree=4), st.integers(0, 10 ** 6))
def test_variant_as_local_with_random_spares(a, seed):
    r = variant_as_local(a, rng=random.Random(seed), verify_steps=False)
    s = r.scaffold
    assert s.degree == 2 * a.degree - a.rank
    assert s.b.rank == a.degree
    rng = random.Random(seed)
    for f in random.Random(seed).sample(list(enumerate_all(a.degree)), min(10, a.degree ** a.degree)):
        fill = [rng.randint(1, s.degree) for _ in range(s.degree - a.degree)]
        assert r.forward(f) == r.forward(f, fill) == r.witness(f)


def test_variant_embedding_degree():
    for a in (T("[1,1,1]"), T("[2,3,1]"), T("[1,1,2]")):
        emb = variant_embedding(a)
        assert emb.degree == 6 - a.rank
        assert verify_embedding(emb)


def test_corrupted_witness_is_caught():
    w = variant_as_local(T("[1,1,2]")).witness
    v = verify_witness(w.corrupted(0, 5))
    assert not v.passed
    assert v.counterexample


# -- worked examples -------------------------------------------------------------

def test_inverse_counts_for_special_shapes():
    assert inverses_of(T("[3,1,2]")) == [T("[2,3,1]")]
    assert len(inverses_of(T("[2,2,2]"))) == inverse_count(T("[2,2,2]")) == 3
    assert canonical_inverse(Transformation.identity(4)).b == Transformation.identity(4)
    e = T("[1,1,3]")
    pair = canonical_inverse(e)
    assert e * pair.b * e == e and pair.b * e * pair.b == pair.b


def test_normalizer_for_permutation():
    a = T("[3,1,2]")
    assert (idempotent_normalizer(a) * a) == Transformation.identity(3)
    assert is_idempotent(a.inverse() * a)


def test_inverse_pair_example_sets():
    pair = InversePair(T("[1,1,2]"), T("[1,3,1]"))
    assert (pair.e, pair.f) == (T("[1,1,3]"), T("[1,2,1]"))
    assert [c.size for c in inverse_pair_bijections(pair)] == [4, 4, 4]
    assert local_submonoid_check(pair)
    g = group_criterion(pair)
    assert (g.b_in_aSa, g.a_in_bSb, g.group_inverses) == (False, False, False)
    m = sandwich_monoids(pair)
    assert all(len(S) == 4 for S in m.semigroups.values())
    w1, w2 = lamb_sandwich_witnesses(pair)
    assert len(w1.source) == 4 and verify_witness(w1) and verify_witness(w2)


def test_self_inverse_idempotent_gives_identity_maps():
    e = T("[1,1,3]")
    pair = InversePair(e, e)
    m = sandwich_monoids(pair)
    for w in m.witnesses.values():
        assert np.array_equal(w.forward, np.arange(len(w.source)))
    w1, _ = lamb_sandwich_witnesses(pair)
    assert w1.target.rule.sandwich == e
    assert np.array_equal(w1.forward, np.arange(len(w1.source)))


def test_restriction_examples():
    res = restriction_witness(T("[1,1,3]"))
    assert len(res.witness.source) == len(res.witness.target) == 4
    ident = restriction_witness(Transformation.identity(3))
    assert np.array_equal(ident.witness.forward, np.arange(27))
    big = restriction_witness(T("[1,2,3,4,4]"))
    assert len(big.witness.source) == 256
    assert verify_witness(big.witness).pairs_checked == 256 ** 2


def test_transport_along_restriction_and_search_witnesses():
    res = restriction_witness(T("[1,2,3,3]"))
    for c in list(res.witness.source)[::5]:
        assert verify_witness(transport_variant(res.witness, c))
    # an isomorphism found by search, transported along every element
    from tvariants.semigroup import closure
    S = closure([T("[2,1,3]"), T("[1,1,3]")])
    U = closure([T("[1,3,2]"), T("[1,2,2]")])
    found = are_isomorphic(S, U)
    assert found
    for c in S:
        assert verify_witness(transport_variant(found.witness, c))


def test_idempotent_local_as_variant_gives_permutation():
    for e in enumerate_all(3):
        if is_idempotent(e):
            r = local_as_variant(e)
            assert r.c.is_permutation()


def test_permutation_variant_scaffold_is_degenerate():
    r = variant_as_local(T("[2,3,1]"))
    assert r.scaffold.degree == 3
    assert r.scaffold.b.is_permutation()
    assert sum(r.scaffold.sizes) == 0
