import json
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from repcert.words import (
    QUADRILATERAL_IMAGES,
    QUADRILATERAL_PRESENTATION,
    CoverError,
    FiniteGroup,
    FinitePresentation,
    SurfacePresentation,
    WordError,
    abelianization_image,
    amalgam_syllables,
    commutator,
    count_words,
    cyclic_reduce,
    enumerate_words,
    format_word,
    free_reduce,
    inverse,
    parse_word,
    schreier_cover,
    semidirect_z3_klein,
    survival_hypotheses,
    trivial_group,
)

G2 = SurfacePresentation(2)
letters = st.sampled_from([1, -1, 2, -2, 3, -3, 4, -4])
words = st.lists(letters, max_size=14).map(tuple)


def test_free_reduce_examples():
    assert free_reduce(parse_word("x1 x2 x2^-1")) == (1,)
    assert free_reduce(()) == ()
    assert free_reduce(G2.relator + inverse(G2.relator)) == ()
    with pytest.raises(WordError):
        free_reduce((1, 7), 4)


def test_parse_and_format():
    w = parse_word("x1 x3^-1 x2^2")
    assert w == (1, -3, 2, 2)
    assert parse_word(format_word(w)) == w
    with pytest.raises(WordError) as exc:
        parse_word("x1 y2")
    assert exc.value.token == "y2"
    with pytest.raises(WordError) as exc:
        parse_word("x1 x5", 4)
    assert exc.value.token == "x5"


def test_presentation():
    assert G2.relator == (1, 2, -1, -2, 3, 4, -3, -4)
    assert G2.boundary_word == (1, 2, -1, -2)
    assert G2.a_generators == (1, 2) and G2.b_generators == (3, 4)


def test_syllable_examples():
    w = amalgam_syllables(parse_word("x1 x3"), G2)
    assert [s.letters for s in w.syllables] == [(1,), (3,)]
    assert not any(s.in_c or s.in_commutator for s in w.syllables)
    w = amalgam_syllables((1,) + commutator((3,), (4,)), G2)
    assert w.syllables[1].in_commutator
    w = amalgam_syllables(G2.boundary_word * 3, G2)
    assert len(w.syllables) == 1 and w.syllables[0].in_c
    assert amalgam_syllables((), G2).syllables == ()


def test_survival_examples():
    assert survival_hypotheses(amalgam_syllables(parse_word("x1 x3"), G2)).passed
    v = survival_hypotheses(amalgam_syllables((1,) + commutator((3,), (4,)), G2))
    assert not v.passed and "b_1" in v.diagnoses[0]
    v = survival_hypotheses(amalgam_syllables(G2.boundary_word + (3,), G2))
    assert not v.passed and "a_1" in v.diagnoses[0]
    # a conjugate of the boundary word is also in C up to conjugacy
    v = survival_hypotheses(amalgam_syllables((2, -1, -2, 1, 3), G2))
    assert not v.passed
    assert not survival_hypotheses(amalgam_syllables((3, 1), G2)).passed


def test_abelianization():
    assert abelianization_image(commutator((3,), (4,)), (3, 4)) == (0, 0)
    assert abelianization_image(parse_word("x3^2 x4^-1"), (3, 4)) == (2, -1)
    assert abelianization_image((), (3, 4)) == (0, 0)
    with pytest.raises(WordError):
        abelianization_image((1,), (3, 4))


def test_enumerate_small():
    got = [w.word for w in enumerate_words(G2, 1)]
    assert len(got) == 16
    assert {(1, 3), (1, 4), (2, 3), (2, 4), (-1, -3)} <= set(got)
    assert list(enumerate_words(G2, 0)) == []
    # chunking by index gives the same stream
    full = [w.word for w in enumerate_words(G2, 2)]
    parts = [w.word for a in range(0, len(full), 37) for w in enumerate_words(G2, 2, 1, a, a + 37)]
    assert parts == full


def _brute_alternating(max_pairs, syl_len):
    """Oracle: DFS over freely reduced letter strings, pruned by run lengths."""
    letters = [1, -1, 2, -2, 3, -3, 4, -4]
    out = set()

    def runs(w):
        r = []
        for a in w:
            side = "A" if abs(a) <= 2 else "B"
            if r and r[-1][0] == side:
                r[-1][1] += 1
            else:
                r.append([side, 1])
        return r

    def dfs(w):
        r = runs(w)
        if r and (r[0][0] != "A" or len(r) > 2 * max_pairs or any(n > syl_len for _, n in r)):
            return
        if r and r[-1][0] == "B":
            out.add(w)
        for a in letters:
            if not w or w[-1] != -a:
                dfs(w + (a,))

    dfs(())
    return out


@pytest.mark.parametrize("pairs,length", [(1, 2), (2, 1), (2, 2)])
def test_enumeration_matches_bruteforce(pairs, length):
    got = [w.word for w in enumerate_words(G2, pairs, length)]
    assert len(got) == len(set(got)) == count_words(G2, pairs, length)
    assert set(got) == _brute_alternating(pairs, length)


@given(words)
@settings(max_examples=300)
def test_decomposition_roundtrip(w):
    red = free_reduce(w)
    aw = amalgam_syllables(w, G2)
    assert free_reduce(aw.word) == red
    sides = [s.side for s in aw.syllables]
    assert all(a != b for a, b in zip(sides, sides[1:]))


@given(words)
@settings(max_examples=200)
def test_cyclic_reduce_is_conjugate(w):
    c = cyclic_reduce(w)
    red = free_reduce(w)
    k = (len(red) - len(c)) // 2
    assert red[k:len(red) - k] == c
    assert free_reduce(red[:k] + c + red[len(red) - k:]) == red


# -- covers ------------------------------------------------------------------

def test_semidirect_product():
    Q = semidirect_z3_klein()
    assert len(Q.elements) == 12
    x, y, z = (QUADRILATERAL_IMAGES[i] for i in (1, 2, 3))
    assert Q.multiply(Q.multiply(x, y), z) == (1, (0, 0))
    assert Q.order_of(Q.multiply(Q.multiply(x, y), z)) == 3
    # the action: (1,0) and (0,1) negate, (1,1) fixes
    assert Q.multiply((0, (1, 0)), (1, (0, 0))) == (2, (1, 0))
    assert Q.multiply((0, (1, 1)), (1, (0, 0))) == (1, (1, 1))
    for a in Q.elements:
        for b in Q.elements:
            for c in Q.elements:
                assert Q.multiply(Q.multiply(a, b), c) == Q.multiply(a, Q.multiply(b, c))


def test_quadrilateral_cover_counts():
    cover = schreier_cover(QUADRILATERAL_PRESENTATION, semidirect_z3_klein(), QUADRILATERAL_IMAGES)
    assert (cover.n_vertices, cover.n_edges, cover.n_cells) == (12, 36, 22)
    assert cover.euler_characteristic == -2
    assert cover.is_closed_surface() and cover.orientable and cover.genus == 2
    per_relator = Counter(o[0] for o in cover.cell_origins)
    assert per_relator == {0: 6, 1: 6, 2: 6, 3: 4}
    assert len(cover.schreier) == 36 - 12 + 1
    doc = json.loads(json.dumps(cover.to_json()))
    assert doc["F"] == 22 and doc["genus"] == 2


def test_edge_words_lie_in_kernel():
    Q = semidirect_z3_klein()
    cover = schreier_cover(QUADRILATERAL_PRESENTATION, Q, QUADRILATERAL_IMAGES)
    for e in cover.edges:
        assert Q.evaluate(QUADRILATERAL_IMAGES, cover.edge_word(e)) == Q.identity
    tree = [e for e in cover.edges if e in cover.tree_edges]
    assert len(tree) == 11 and all(cover.edge_word(e) == () for e in tree)


def test_trivial_quotient_cover():
    pres = G2.to_finite()
    cover = schreier_cover(pres, trivial_group(), {i: 0 for i in range(1, 5)})
    assert cover.n_vertices == 1 and cover.n_cells == 1
    assert cover.cell_word(0) == G2.relator
    assert cover.genus == 2


def test_cover_from_table_and_errors():
    z2 = FiniteGroup.from_table([[0, 1], [1, 0]])
    pres = FinitePresentation(1, ((1, 1),))
    cover = schreier_cover(pres, z2, {1: 1})
    assert cover.n_vertices == 2 and cover.n_cells == 1
    with pytest.raises(CoverError):
        schreier_cover(pres, z2, {1: 0})   # does not generate
    with pytest.raises(CoverError):
        schreier_cover(FinitePresentation(1, ((1,),)), z2, {1: 1})  # relator not killed
