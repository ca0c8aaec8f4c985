import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import permutations, same_degree, transformations
from tvariants.transformation import (
    DegreeMismatch,
    TabularForm,
    Transformation,
    all_images,
    compose,
    compose_rows,
    conjugate,
    enumerate_all,
    from_tabular,
    is_idempotent,
    keys_of,
    relabelling,
    sample,
    to_tabular,
)

T = Transformation.parse


def test_composition_is_left_to_right():
    f, g = T("[2,3,1]"), T("[1,1,2]")
    # x -> f -> g
    assert compose(f, g) == T("[1,2,1]")
    assert f * g == T("[1,2,1]")
    assert g * f == T("[2,2,3]")


def test_parse_and_print_roundtrip():
    assert str(T(" [ 3, 1 ,2 ] ")) == "[3,1,2]"
    with pytest.raises(ValueError):
        T("[0,1]")
    with pytest.raises(ValueError):
        T("[1,4,2]")
    with pytest.raises(ValueError):
        T("1,2")
    with pytest.raises(ValueError):
        Transformation([])


def test_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        T("[1,2]") * T("[1,1,1]")


def test_rank_image_kernel():
    f = T("[2,2,4,4,1]")
    assert f.rank == 3
    assert f.image == {1, 2, 4}
    assert f.kernel == ({1, 2}, {3, 4}, {5})


def test_tabular_form_example():
    tab = to_tabular(T("[3,3,1,3]"))
    assert tab.blocks == (frozenset({1, 2, 4}), frozenset({3}))
    assert tab.points == (3, 1)
    assert from_tabular(tab) == T("[3,3,1,3]")


def test_tabular_form_validation():
    with pytest.raises(ValueError):
        TabularForm(({1}, {1, 2}), (1, 2))
    with pytest.raises(ValueError):
        TabularForm(({1}, {2}), (1, 1))
    with pytest.raises(ValueError):
        TabularForm(({1}, {3}), (1, 2))


def test_tabular_normalized_orders_blocks_by_minimum():
    tab = TabularForm(({3}, {1, 2}), (1, 2)).normalized()
    assert tab.blocks[0] == {1, 2}
    assert tab.points == (2, 1)


@given(transformations())
def test_tabular_roundtrip(f):
    tab = to_tabular(f)
    assert from_tabular(tab) == f
    assert tab.rank == f.rank
    assert [min(b) for b in tab.blocks] == sorted(min(b) for b in tab.blocks)


@given(transformations())
def test_idempotent_criterion_matches_square(f):
    assert is_idempotent(f) == (f * f == f)


@given(same_degree(3))
def test_associativity(fgh):
    f, g, h = fgh
    assert (f * g) * h == f * (g * h)


@given(same_degree(2))
def test_rank_bounded_by_factors(fg):
    f, g = fg
    assert (f * g).rank <= min(f.rank, g.rank)


@given(st.data())
def test_conjugation_by_permutation(data):
    n = data.draw(st.integers(1, 6))
    f = data.draw(transformations(n))
    g = data.draw(transformations(n))
    q = data.draw(permutations(n))
    assert conjugate(f, q) == q.inverse() * f * q
    assert conjugate(f * g, q) == conjugate(f, q) * conjugate(g, q)
    assert conjugate(f, q).rank == f.rank
    # renaming points: q^-1 f q sends q(x) to q(f(x))
    h = conjugate(f, q)
    assert all(h(q(x)) == q(f(x)) for x in range(1, n + 1))


def test_conjugation_rejects_non_permutation():
    with pytest.raises(ValueError):
        conjugate(T("[1,2]"), T("[1,1]"))


def test_powers():
    f = T("[2,3,1]")
    assert f ** 3 == Transformation.identity(3)
    assert f ** 1 == f
    with pytest.raises(ValueError):
        f ** 0


def test_inverse_of_permutation():
    f = T("[3,1,2]")
    assert f * f.inverse() == Transformation.identity(3)
    with pytest.raises(ValueError):
        T("[1,1,2]").inverse()


def test_restrict_and_extend():
    f = T("[2,2,5,5,5]")
    assert f.restrict([2, 5]) == T("[1,2]")
    with pytest.raises(ValueError):
        f.restrict([1, 3])
    assert T("[2,1]").extend(4) == T("[2,1,3,4]")
    assert T("[2,1]").extend(4, [1, 1]) == T("[2,1,1,1]")
    with pytest.raises(ValueError):
        T("[2,1]").extend(4, [1])


def test_relabelling():
    q = relabelling(5, [4, 2])
    assert q(4) == 1 and q(2) == 2
    assert [q(x) for x in (1, 3, 5)] == [3, 4, 5]
    assert q.is_permutation()


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_enumeration_is_complete_and_lexicographic(n):
    got = list(enumerate_all(n))
    assert len(got) == n ** n
    assert got == [Transformation(p) for p in itertools.product(range(1, n + 1), repeat=n)]


def test_enumeration_bound():
    with pytest.raises(ValueError):
        list(enumerate_all(8))
    with pytest.raises(ValueError):
        list(enumerate_all(3, bound=2))


def test_keys_preserve_lexicographic_order():
    rows = all_images(4)
    keys = keys_of(rows, 4)
    assert np.all(np.diff(keys) > 0)


@given(same_degree(2))
def test_bulk_composition_matches_scalar(fg):
    f, g = fg
    got = compose_rows(f.array()[None, :], g.array()[None, :])[0]
    assert Transformation.from_array(got) == f * g


def test_sample_is_seeded():
    assert sample(6, 3) == sample(6, 3)
    assert sample(6, 3).degree == 6


def test_hash_and_order():
    assert len({T("[1,2]"), T("[1,2]"), T("[2,1]")}) == 2
    assert sorted([T("[2,1]"), T("[1,1]"), T("[1,2,3]")]) == [T("[1,1]"), T("[2,1]"), T("[1,2,3]")]


# -- exhaustive sweeps over small degrees --------------------------------------

def test_examples_from_direct_evaluation():
    assert Transformation.identity(3) * T("[3,1,2]") == T("[3,1,2]")
    assert T("[1,1,2]") * T("[1,1,2]") == T("[1,1,1]")
    c = T("[2,2,2]")
    assert (c.rank, c.image, c.kernel) == (1, {2}, ({1, 2, 3},))
    assert T("[1,1,3]").is_idempotent() and not T("[2,1]").is_idempotent()
    assert from_tabular(TabularForm(({1}, {2}, {3}), (2, 3, 1))) == T("[2,3,1]")
    assert conjugate(T("[1,1,2]"), T("[2,1,3]")) == T("[2,2,1]")
    assert conjugate(T("[1,1,2]"), Transformation.identity(3)) == T("[1,1,2]")


def test_associativity_exhaustive_n3():
    els = list(enumerate_all(3))
    index = {f: i for i, f in enumerate(els)}
    tab = np.array([[index[f * g] for g in els] for f in els])
    # tab[tab][i,j,k] = (ij)k and tab[:, tab][i,j,k] = i(jk)
    assert np.array_equal(tab[tab], tab[:, tab])


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_rank_inequality_all_pairs(n):
    rows = all_images(n)
    ranks = np.array([len(set(r)) for r in rows.tolist()])
    for i, x in enumerate(rows):
        prods = rows[:, x]                     # row j is x * rows[j]
        pr = np.array([len(set(r)) for r in prods.tolist()])
        assert np.all(pr <= np.minimum(ranks[i], ranks))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_idempotent_definitions_agree_exhaustively(n):
    for f in enumerate_all(n):
        tab = to_tabular(f)
        by_blocks = all(p in b for b, p in zip(tab.blocks, tab.points))
        assert is_idempotent(f) == (f * f == f) == by_blocks


def test_tabular_roundtrip_on_t4():
    assert all(from_tabular(to_tabular(f)) == f for f in enumerate_all(4))


def test_conjugation_preserves_rank_at_n5():
    import random
    rng = random.Random(5)
    for _ in range(100):
        f = sample(5, rng)
        q = Transformation(rng.sample(range(1, 6), 5))
        g = conjugate(f, q)
        assert g.rank == f.rank
        assert is_idempotent(g) == is_idempotent(f)
