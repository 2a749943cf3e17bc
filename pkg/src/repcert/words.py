"""Words in surface groups, the A *_C B splitting, and Schreier covers.

Words are tuples of nonzero ints: ``i`` is the generator x_i and ``-i`` its
inverse.  The surface group of genus g has generators x_1..x_{2g} and the
relator [x_1,x_2]...[x_{2g-1},x_{2g}]; A is generated by x_1..x_{2g-2}, B by
x_{2g-1}, x_{2g}, and C by the boundary word [x_1,x_2]...[x_{2g-3},x_{2g-2}].
"""
from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterator, Mapping, Sequence

Word = tuple


class WordError(ValueError):
    def __init__(self, message, token=None):
        super().__init__(message)
        self.token = token


class CoverError(ValueError):
    pass


_LETTER = re.compile(r"x(\d+)(?:\^(-?\d+))?")


def parse_word(text: str, n_generators: int | None = None) -> Word:
    """Parse ``"x1 x3^-1 x2^2"`` (spaces or ``*`` between letters); ``"1"`` is the empty word."""
    out = []
    for tok in re.split(r"[\s*]+", text.strip()):
        if not tok or tok == "1":
            continue
        pos = 0
        while pos < len(tok):
            m = _LETTER.match(tok, pos)
            if m is None:
                raise WordError(f"malformed token {tok[pos:]!r} in word {text!r}", tok[pos:])
            i = int(m.group(1))
            k = int(m.group(2)) if m.group(2) is not None else 1
            if i == 0 or (n_generators is not None and i > n_generators):
                raise WordError(f"unknown generator {m.group(0)!r}", m.group(0))
            out.extend([i if k > 0 else -i] * abs(k))
            pos = m.end()
    return tuple(out)


def format_word(word: Sequence[int]) -> str:
    if not word:
        return "1"
    return " ".join(f"x{a}" if a > 0 else f"x{-a}^-1" for a in word)


def inverse(word: Sequence[int]) -> Word:
    return tuple(-a for a in reversed(word))


def free_reduce(word: Sequence[int], n_generators: int | None = None) -> Word:
    out = []
    for a in word:
        if a == 0 or (n_generators is not None and abs(a) > n_generators):
            raise WordError(f"unknown generator symbol {a!r}", a)
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def cyclic_reduce(word: Sequence[int]) -> Word:
    w = free_reduce(word)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def commutator(u: Sequence[int], v: Sequence[int]) -> Word:
    """[u, v] = u v u^-1 v^-1."""
    return free_reduce(tuple(u) + tuple(v) + inverse(u) + inverse(v))


def power(word: Sequence[int], k: int) -> Word:
    base = tuple(word) if k >= 0 else inverse(word)
    return free_reduce(base * abs(k))


def is_conjugate_into_cyclic(word: Sequence[int], gen: Sequence[int]) -> bool:
    """Whether ``word`` is conjugate to gen^k for some k != 0 (free group).

    Both are cyclically reduced; ``word`` must then be a cyclic rotation of
    a literal power of the cyclically reduced generator (or its inverse).
    """
    w = cyclic_reduce(word)
    g = cyclic_reduce(gen)
    if not w or not g or len(w) % len(g):
        return False
    k = len(w) // len(g)
    doubled = w + w
    for cand in (g * k, inverse(g) * k):
        for s in range(len(w)):
            if doubled[s:s + len(w)] == cand:
                return True
    return False


def abelianization_image(word: Sequence[int], basis: Sequence[int]) -> tuple:
    """Exponent-sum vector of ``word`` with respect to ``basis`` generators."""
    pos = {g: i for i, g in enumerate(basis)}
    out = [0] * len(basis)
    for a in word:
        if abs(a) not in pos:
            raise WordError(f"letter x{abs(a)} is not in the subgroup basis", a)
        out[pos[abs(a)]] += 1 if a > 0 else -1
    return tuple(out)


# ---------------------------------------------------------------------------
# surface presentations and the amalgam

@dataclass(frozen=True)
class SurfacePresentation:
    genus: int

    def __post_init__(self):
        if self.genus < 1:
            raise ValueError("genus must be >= 1")

    @property
    def n_generators(self):
        return 2 * self.genus

    @property
    def generators(self):
        return tuple(range(1, 2 * self.genus + 1))

    @property
    def relator(self) -> Word:
        w = ()
        for i in range(1, 2 * self.genus, 2):
            w += commutator((i,), (i + 1,))
        return w

    @property
    def a_generators(self):
        return tuple(range(1, 2 * self.genus - 1))

    @property
    def b_generators(self):
        return (2 * self.genus - 1, 2 * self.genus)

    @property
    def boundary_word(self) -> Word:
        """[x1,x2]...[x_{2g-3},x_{2g-2}], which equals [x_{2g-1},x_{2g}]^-1."""
        w = ()
        for i in range(1, 2 * self.genus - 2, 2):
            w += commutator((i,), (i + 1,))
        return w

    def side(self, letter):
        return "A" if abs(letter) <= 2 * self.genus - 2 else "B"

    def to_finite(self) -> "FinitePresentation":
        return FinitePresentation(self.n_generators, (self.relator,))


@dataclass(frozen=True)
class Syllable:
    side: str
    letters: Word
    in_c: bool
    in_commutator: bool = False

    def to_json(self):
        d = {"side": self.side, "word": format_word(self.letters), "in_C": self.in_c}
        if self.side == "B":
            d["in_commutator"] = self.in_commutator
        return d


@dataclass(frozen=True)
class AmalgamWord:
    """Alternating A/B syllables of a freely reduced word."""

    syllables: tuple
    genus: int

    @property
    def word(self) -> Word:
        return tuple(a for s in self.syllables for a in s.letters)

    @property
    def leading_b(self):
        return bool(self.syllables) and self.syllables[0].side == "B"

    @property
    def trailing_a(self):
        return bool(self.syllables) and self.syllables[-1].side == "A"

    @property
    def is_standard(self):
        """Of the form a_1 b_1 ... a_l b_l."""
        return bool(self.syllables) and not self.leading_b and not self.trailing_a

    @property
    def pairs(self):
        if not self.is_standard:
            raise ValueError("word is not of the form a_1 b_1 ... a_l b_l")
        s = self.syllables
        return [(s[i], s[i + 1]) for i in range(0, len(s), 2)]

    @property
    def length(self):
        """Number of (a_i, b_i) pairs when in standard form."""
        return len(self.syllables) // 2 if self.is_standard else None

    def __str__(self):
        return " | ".join(format_word(s.letters) for s in self.syllables)

    def to_json(self):
        return {"word": format_word(self.word),
                "syllables": [s.to_json() for s in self.syllables]}


def _make_syllable(pres: SurfacePresentation, side, letters):
    if side == "A":
        return Syllable("A", letters, is_conjugate_into_cyclic(letters, pres.boundary_word))
    b_boundary = commutator((pres.b_generators[0],), (pres.b_generators[1],))
    ab = abelianization_image(letters, pres.b_generators)
    return Syllable("B", letters, is_conjugate_into_cyclic(letters, b_boundary),
                    ab == (0, 0))


def amalgam_syllables(word: Sequence[int], pres: SurfacePresentation) -> AmalgamWord:
    w = free_reduce(word, pres.n_generators)
    sylls = []
    for side, grp in itertools.groupby(w, key=pres.side):
        sylls.append(_make_syllable(pres, side, tuple(grp)))
    return AmalgamWord(tuple(sylls), pres.genus)


@dataclass(frozen=True)
class SurvivalVerdict:
    passed: bool
    diagnoses: tuple = ()

    def to_json(self):
        return {"passed": self.passed, "diagnoses": list(self.diagnoses)}


def survival_hypotheses(w: AmalgamWord) -> SurvivalVerdict:
    """Combinatorial hypotheses under which the bending degree argument applies.

    Every a_i must avoid C (checked up to conjugacy) and every b_i must have
    nonzero image in the abelianization of B; the word must read a_1 b_1 ... a_l b_l.
    """
    diag = []
    if not w.syllables:
        return SurvivalVerdict(False, ("trivial word",))
    if w.leading_b:
        diag.append("word starts with a B-syllable")
    if w.trailing_a:
        diag.append("word ends with an A-syllable")
    ai = bi = 0
    for s in w.syllables:
        if s.side == "A":
            ai += 1
            if s.in_c:
                diag.append(f"a_{ai} = {format_word(s.letters)} is conjugate into C")
        else:
            bi += 1
            if s.in_commutator:
                diag.append(f"b_{bi} = {format_word(s.letters)} lies in [B,B]")
    return SurvivalVerdict(not diag, tuple(diag))


def reduced_words(gens: Sequence[int], max_length: int) -> list:
    """All nonempty freely reduced words over ``gens`` of length <= max_length,
    ordered by length, then lexicographically in the letter order g1, g1^-1, g2, ..."""
    letters = [s * g for g in gens for s in (1, -1)]
    out = []
    layer = [()]
    for _ in range(max_length):
        layer = [w + (a,) for w in layer for a in letters if not w or w[-1] != -a]
        out.extend(layer)
    return out


def enumerate_words(pres: SurfacePresentation, max_syllables: int, syllable_length: int = 1,
                    start: int = 0, stop: int | None = None) -> Iterator[AmalgamWord]:
    """Alternating words a_1 b_1 ... a_l b_l, 1 <= l <= max_syllables.

    Syllables are drawn from freely reduced words of length <= syllable_length;
    the order is deterministic, so ``start``/``stop`` index a stable stream that
    can be chunked across workers.
    """
    if max_syllables < 1:
        return iter(())
    a_sylls = [_make_syllable(pres, "A", w) for w in reduced_words(pres.a_generators, syllable_length)]
    b_sylls = [_make_syllable(pres, "B", w) for w in reduced_words(pres.b_generators, syllable_length)]

    radix = [len(a_sylls), len(b_sylls)]

    def block(n, first):
        # mixed-radix counter over 2n syllable slots, last slot fastest
        sizes = radix * n
        digits = []
        for size in reversed(sizes):
            first, d = divmod(first, size)
            digits.append(d)
        digits.reverse()
        pools = [a_sylls, b_sylls] * n
        while True:
            yield AmalgamWord(tuple(pool[d] for pool, d in zip(pools, digits)), pres.genus)
            i = len(digits) - 1
            while i >= 0 and digits[i] == sizes[i] - 1:
                digits[i] = 0
                i -= 1
            if i < 0:
                return
            digits[i] += 1

    def gen():
        skip = start
        for n in range(1, max_syllables + 1):
            size = (radix[0] * radix[1]) ** n
            if skip >= size:
                skip -= size
                continue
            yield from block(n, skip)
            skip = 0

    return itertools.islice(gen(), 0, None if stop is None else max(0, stop - start))


def count_words(pres: SurfacePresentation, max_syllables: int, syllable_length: int = 1) -> int:
    na = len(reduced_words(pres.a_generators, syllable_length))
    nb = len(reduced_words(pres.b_generators, syllable_length))
    return sum((na * nb) ** n for n in range(1, max_syllables + 1))


# ---------------------------------------------------------------------------
# finite quotients and Schreier covers

@dataclass(frozen=True)
class FinitePresentation:
    n_generators: int
    relators: tuple
    names: tuple = ()

    def name(self, i):
        return self.names[i - 1] if self.names else f"x{i}"


@dataclass
class FiniteGroup:
    """A finite group given by its elements and a multiplication function."""

    elements: tuple
    multiply: Callable
    identity: Hashable

    @classmethod
    def from_table(cls, table: Sequence[Sequence[int]], identity: int = 0) -> "FiniteGroup":
        tab = tuple(tuple(row) for row in table)
        return cls(tuple(range(len(tab))), lambda a, b: tab[a][b], identity)

    def order_of(self, g):
        k, h = 1, g
        while h != self.identity:
            h = self.multiply(h, g)
            k += 1
            if k > len(self.elements):
                raise ValueError("element order exceeds group order")
        return k

    def evaluate(self, images: Mapping[int, Hashable], word: Sequence[int]):
        out = self.identity
        for a in word:
            g = images[abs(a)]
            if a < 0:
                g = self.inverse(g)
            out = self.multiply(out, g)
        return out

    def inverse(self, g):
        h = g
        prev = self.identity
        while h != self.identity:
            prev = h
            h = self.multiply(h, g)
        return prev


def trivial_group() -> FiniteGroup:
    return FiniteGroup((0,), lambda a, b: 0, 0)


def semidirect_z3_klein() -> FiniteGroup:
    """Z_3 x| (Z_2 + Z_2) with (1,0) and (0,1) acting on Z_3 by negation."""

    def mul(p, q):
        a, (u1, u2) = p
        b, (v1, v2) = q
        acts = (u1 + u2) % 2 == 1
        return ((a + (-b if acts else b)) % 3, ((u1 + v1) % 2, (u2 + v2) % 2))

    elems = tuple((a, (u1, u2)) for u1 in (0, 1) for u2 in (0, 1) for a in range(3))
    return FiniteGroup(elems, mul, (0, (0, 0)))


# x, y, z are the pi-rotations about B, C, D
QUADRILATERAL_PRESENTATION = FinitePresentation(
    3, ((1, 1), (2, 2), (3, 3), (1, 2, 3) * 3), ("x", "y", "z"))
QUADRILATERAL_IMAGES = {1: (1, (1, 0)), 2: (0, (0, 1)), 3: (0, (1, 1))}


def _primitive_root(word):
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word[:d] * (n // d) == tuple(word):
            return tuple(word[:d]), n // d
    return tuple(word), 1


@dataclass(frozen=True)
class CoverPresentation:
    """Cell structure of the cover of a presentation complex given by a finite quotient."""

    n_generators: int
    cosets: tuple
    table: tuple
    coset_words: tuple
    tree_edges: frozenset
    edges: tuple
    schreier: tuple
    cells: tuple
    cell_origins: tuple
    orientable: bool

    @property
    def n_vertices(self):
        return len(self.cosets)

    @property
    def n_edges(self):
        return len(self.edges)

    @property
    def n_cells(self):
        return len(self.cells)

    @property
    def euler_characteristic(self):
        return self.n_vertices - self.n_edges + self.n_cells

    @property
    def genus(self):
        if not (self.is_closed_surface() and self.orientable):
            return None
        return (2 - self.euler_characteristic) // 2

    def edge_word(self, edge) -> Word:
        """rep(g) s rep(g s)^-1 for the edge (g, s)."""
        g, s = edge
        h = self.table[g][s - 1]
        return free_reduce(self.coset_words[g] + (s,) + inverse(self.coset_words[h]))

    @property
    def schreier_words(self):
        return tuple(self.edge_word(e) for e in self.schreier)

    def is_closed_surface(self):
        """Every edge occurs exactly twice, once in each direction, across all cells."""
        counts = {e: [0, 0] for e in range(len(self.edges))}
        for cell in self.cells:
            for e, s in cell:
                counts[e][0 if s > 0 else 1] += 1
        return all(c == [1, 1] for c in counts.values())

    def cell_generator_word(self, i) -> Word:
        """Boundary of cell i as a word in Schreier generators (tree edges dropped)."""
        idx = {e: j + 1 for j, e in enumerate(self.schreier)}
        out = []
        for e, s in self.cells[i]:
            j = idx.get(self.edges[e])
            if j is not None:
                out.append(j if s > 0 else -j)
        return tuple(out)

    def cell_word(self, i) -> Word:
        """Boundary of cell i as a word in the base generators."""
        return tuple(self.edges[e][1] * s for e, s in self.cells[i])

    def to_json(self):
        return {
            "cosets": [str(c) for c in self.cosets],
            "coset_table": [list(row) for row in self.table],
            "coset_words": [format_word(w) for w in self.coset_words],
            "tree_edges": sorted([list(e) for e in self.tree_edges]),
            "schreier_generators": [{"edge": list(e), "word": format_word(self.edge_word(e))}
                                    for e in self.schreier],
            "cells": [[[e, s] for e, s in c] for c in self.cells],
            "cell_words": [format_word(self.cell_word(i)) for i in range(len(self.cells))],
            "V": self.n_vertices, "E": self.n_edges, "F": self.n_cells,
            "euler_characteristic": self.euler_characteristic,
            "closed_surface": self.is_closed_surface(),
            "orientable": self.orientable,
            "genus": self.genus,
        }


def schreier_cover(presentation: FinitePresentation, quotient: FiniteGroup,
                   images: Mapping[int, Hashable]) -> CoverPresentation:
    """Cover of the presentation complex for the kernel of ``images``.

    Cosets are the quotient elements reached by breadth-first search from the
    identity (generators in order, forward edges before backward ones).  A
    relator u^n whose root u has image of order m lifts to |Q|/m cells.  Cells
    are then oriented coherently, keeping the first cell as given.
    """
    n = presentation.n_generators
    ident = quotient.identity
    index = {ident: 0}
    cosets = [ident]
    words = [()]
    tree = set()
    queue = deque([0])
    gen_img = [images[s] for s in range(1, n + 1)]
    gen_inv = [quotient.inverse(g) for g in gen_img]
    while queue:
        c = queue.popleft()
        for s in range(1, n + 1):
            for sgn, img in ((1, gen_img[s - 1]), (-1, gen_inv[s - 1])):
                h = quotient.multiply(cosets[c], img)
                if h not in index:
                    index[h] = len(cosets)
                    cosets.append(h)
                    words.append(words[c] + (sgn * s,))
                    queue.append(index[h])
                    tree.add((c, s) if sgn > 0 else (index[h], s))
    if len(cosets) != len(quotient.elements):
        raise CoverError(
            f"generator images do not generate the quotient ({len(cosets)} of "
            f"{len(quotient.elements)} elements reached)")
    table = tuple(tuple(index[quotient.multiply(g, gen_img[s])] for s in range(n)) for g in cosets)
    pred = [[None] * n for _ in cosets]
    for g in range(len(cosets)):
        for s in range(n):
            pred[table[g][s]][s] = g
    edges = tuple((g, s) for g in range(len(cosets)) for s in range(1, n + 1))
    edge_index = {e: i for i, e in enumerate(edges)}
    schreier = tuple(e for e in edges if e not in tree)

    cells = []
    origins = []
    for ri, rel in enumerate(presentation.relators):
        if quotient.evaluate(images, rel) != ident:
            raise CoverError(f"relator {format_word(rel)} does not map to the identity")
        root, _ = _primitive_root(free_reduce(rel))
        covered = set()
        for g in range(len(cosets)):
            if g in covered:
                continue
            c = g
            boundary = []
            for pos, a in enumerate(rel):
                if pos % len(root) == 0:
                    covered.add(c)
                s = abs(a)
                if a > 0:
                    boundary.append((edge_index[(c, s)], 1))
                    c = table[c][s - 1]
                else:
                    c = pred[c][s - 1]
                    boundary.append((edge_index[(c, s)], -1))
            if c != g:
                raise CoverError("lifted relator does not close up")
            cells.append(tuple(boundary))
            origins.append((ri, g))
    cells, orientable = _orient_cells(cells, len(edges))
    return CoverPresentation(n, tuple(cosets), table, tuple(words), frozenset(tree), edges,
                             schreier, tuple(c for c, _ in cells),
                             tuple(o + (s,) for o, (_, s) in zip(origins, cells)), orientable)


def _flip(cell):
    return tuple((e, -s) for e, s in reversed(cell))


def _orient_cells(cells, n_edges):
    """Flip cells so that every edge is traversed once in each direction."""
    occurrences = [[] for _ in range(n_edges)]
    for ci, cell in enumerate(cells):
        for e, s in cell:
            occurrences[e].append((ci, s))
    orient = [0] * len(cells)
    orientable = True
    for start in range(len(cells)):
        if orient[start]:
            continue
        orient[start] = 1
        queue = deque([start])
        while queue:
            ci = queue.popleft()
            for e, _ in cells[ci]:
                occ = occurrences[e]
                if len(occ) != 2:
                    orientable = False
                    continue
                (c1, s1), (c2, s2) = occ
                if c1 == c2:
                    if s1 == s2:
                        orientable = False
                    continue
                other, so, sm = (c2, s2, s1) if c1 == ci else (c1, s1, s2)
                want = -orient[ci] * sm * so
                if orient[other] == 0:
                    orient[other] = want
                    queue.append(other)
                elif orient[other] != want:
                    orientable = False
    out = [(cell if o > 0 else _flip(cell), o) for cell, o in zip(cells, orient)]
    return out, orientable
