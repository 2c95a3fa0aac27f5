"""A branched masure: apartments glued along true half-apartments.

Every apartment other than the root is a word of folding letters (beta, k, sheet). The
child parent.(beta, k, j) shares the closed half {beta + k >= 0} with its parent, in
identical coordinates, and owns the new half {beta + k < 0}. All letters of one word use
the same root (wall-parallel chains), so each chain is a tree of half-apartments times
the wall hyperplane and every chart towards a germ of the root apartment has at most two
pieces.
"""
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction as Frac

from . import linalg as la
from .apartment import AffineMap, identity_map, wall_reflection
from .errors import (
    ChartExit,
    CrossingWall,
    DepthExceeded,
    GermContained,
    MixedSigns,
    NotAnAutomorphism,
    NotTrueWall,
    RegistryFrozen,
    RootOutsideTable,
    SheetOutOfRange,
    UnregisteredApartment,
    WallImageOutsideTable,
)
from .rootsys import (
    SectorGermId,
    enumerate_real_roots,
    germ_side,
    reduce_matrix,
    weyl_inverse,
    weyl_mul,
)


@dataclass(frozen=True)
class MasureConfig:
    realization: object
    table: object
    thickness: int = 2
    max_depth: int = 6

    def __post_init__(self):
        if self.thickness < 2:
            raise ValueError("thickness must be >= 2")
        if self.max_depth < 0:
            raise ValueError("depth bound must be >= 0")


def make_config(realization, height_bound=20, thickness=2, max_depth=6):
    table = enumerate_real_roots(realization, height_bound)
    return MasureConfig(realization, table, thickness, max_depth)


@dataclass(frozen=True, order=True)
class FoldingLetter:
    root: int  # index into the table's positive roots
    k: int
    sheet: int


@dataclass(frozen=True)
class MasurePoint:
    word: tuple
    b: tuple


@dataclass(frozen=True)
class Constraint:
    """covector(c) + k >= 0, or > 0 when strict."""

    covector: tuple
    k: Frac
    strict: bool = False

    def holds(self, c):
        v = la.dot(self.covector, c) + self.k
        return v > 0 if self.strict else v >= 0


@dataclass(frozen=True)
class Piece:
    region: tuple  # of Constraint
    host: tuple  # ApartmentId
    map: AffineMap  # chart coordinates -> host coordinates

    def contains(self, c):
        return all(con.holds(c) for con in self.region)


@dataclass(frozen=True)
class UnfoldedChart:
    germ: SectorGermId
    pieces: tuple

    def locate(self, c):
        for p in self.pieces:
            if p.contains(c):
                return p
        raise ChartExit(f"chart point {c} lies in no piece")


@dataclass(frozen=True)
class SplitPiece:
    region: tuple  # constraints in the coordinates of the split apartment
    chart: UnfoldedChart  # an apartment containing the piece and the germ
    host: tuple  # registered apartment holding the piece's points


class Masure:
    """Registry of apartments plus all point-level operations."""

    def __init__(self, config):
        self.config = config
        self.real = config.realization
        self.table = config.table
        self._registry = {()}
        self.frozen = False

    # --- registry ---------------------------------------------------------

    @property
    def apartments(self):
        return sorted(self._registry, key=lambda w: (len(w), w))

    def freeze(self):
        self.frozen = True
        return self

    def is_registered(self, word):
        return tuple(word) in self._registry

    def root_of(self, letter):
        return self.table.positive[letter.root]

    def chain_root(self, word):
        return self.root_of(word[0]) if word else None

    def branch(self, parent, root, k, sheet=1):
        """Register parent.(root, k, sheet); root is a Root or a positive-root index."""
        if self.frozen:
            raise RegistryFrozen("the apartment registry is frozen")
        parent = tuple(parent)
        if parent not in self._registry:
            raise UnregisteredApartment(f"parent {parent} is not registered")
        if len(parent) >= self.config.max_depth:
            raise DepthExceeded(f"depth bound {self.config.max_depth} reached")
        k = Frac(k)
        if k.denominator != 1:
            raise NotTrueWall(f"level {k} is not an integer (ghost wall)")
        if not 1 <= sheet <= self.config.thickness - 1:
            raise SheetOutOfRange(f"sheet {sheet} outside 1..{self.config.thickness - 1}")
        idx = root if isinstance(root, int) else self._positive_index(root)
        if not 0 <= idx < len(self.table.positive):
            raise RootOutsideTable(f"positive root index {idx} outside the table")
        if parent and parent[0].root != idx:
            raise CrossingWall(
                f"letters of one word must share a root; chain uses index {parent[0].root}, got {idx}"
            )
        word = parent + (FoldingLetter(idx, int(k), sheet),)
        self._registry.add(word)
        return word

    def _positive_index(self, root):
        if not root.positive:
            raise RootOutsideTable("branch walls use positive roots")
        try:
            return self.table.positive_index(root)
        except KeyError:
            raise RootOutsideTable(f"root {root.coords} not in table") from None

    def register(self, word):
        """Register a whole word (and its prefixes)."""
        word = tuple(word)
        for i in range(len(word)):
            if word[: i + 1] not in self._registry:
                l = word[i]
                self.branch(word[:i], l.root, l.k, l.sheet)
        return word

    # --- points -------------------------------------------------------------

    def _canon(self, word, b):
        word = tuple(word)
        while word:
            l = word[-1]
            if self.root_of(l)(b) + l.k >= 0:
                word = word[:-1]
            else:
                break
        return MasurePoint(word, b)

    def canonicalize(self, word, b):
        word = tuple(word)
        if word not in self._registry:
            raise UnregisteredApartment(f"apartment {word} is not registered")
        b = la.vec(b)
        if len(b) != self.real.d:
            raise ValueError(f"coordinates have dimension {len(b)}, expected {self.real.d}")
        return self._canon(word, b)

    def point(self, word, b):
        return self.canonicalize(word, b)

    def points_equal(self, p, q):
        return self._canon(p.word, p.b) == self._canon(q.word, q.b)

    def fold_level(self, word):
        """The least level k among the letters: its wall bounds the shared root part."""
        return min(l.k for l in word)

    # --- charts ------------------------------------------------------------

    def chart(self, word, g):
        word = tuple(word)
        d = self.real.d
        if not word:
            return UnfoldedChart(g, (Piece((), (), identity_map(d)),))
        beta = self.chain_root(word)
        if germ_side(self.table, beta, g) > 0:
            return UnfoldedChart(g, (Piece((), word, identity_map(d)),))
        ks = Frac(self.fold_level(word))
        neg = tuple(-x for x in beta.covector)
        return UnfoldedChart(
            g,
            (
                Piece((Constraint(neg, -ks),), (), identity_map(d)),
                Piece((Constraint(beta.covector, ks, strict=True),), word, wall_reflection(beta, ks)),
            ),
        )

    def unfold(self, x, g):
        """Chart of the apartment containing x and the germ g."""
        return self.chart(x.word, g)

    def retract(self, x, g):
        """Retraction onto the root apartment centred at g."""
        chart = self.chart(x.word, g)
        last = chart.pieces[-1]
        # piece maps are identities or wall reflections, hence involutions
        return last.map(x.b)

    def point_at(self, chart, c):
        p = chart.locate(c)
        return self._canon(p.host, p.map(c))

    # --- splitting -----------------------------------------------------------

    def germ_in(self, word, g):
        return not word or germ_side(self.table, self.chain_root(word), g) > 0

    def sundial_split(self, word, g):
        word = tuple(word)
        if self.germ_in(word, g):
            raise GermContained(f"germ {g.literal()} already lies in apartment {word}")
        beta = self.chain_root(word)
        ks = Frac(self.fold_level(word))
        neg = tuple(-x for x in beta.covector)
        d1 = SplitPiece((Constraint(beta.covector, ks),), self.chart((), g), ())
        d2 = SplitPiece((Constraint(neg, -ks),), self.chart(word, g), word)
        return d1, d2

    def split_apartment(self, word, g):
        word = tuple(word)
        if self.germ_in(word, g):
            return [SplitPiece((), self.chart(word, g), word)]
        return list(self.sundial_split(word, g))

    def split_segment(self, x, y, g):
        """Points x = x_1, ..., x_k = y of the segment in x's apartment, each piece hosted with g."""
        word = x.word if len(x.word) >= len(y.word) else y.word
        for p in (x, y):
            if tuple(word[: len(p.word)]) != p.word:
                raise ValueError("the two points do not share an apartment of the registry")
        if self.germ_in(word, g):
            return [x, y]
        beta = self.chain_root(word)
        ks = self.fold_level(word)
        fx, fy = beta(x.b) + ks, beta(y.b) + ks
        if fx * fy >= 0:
            return [x, y]
        t = fx / (fx - fy)
        m = la.add(x.b, la.scale(t, la.sub(y.b, x.b)))
        return [x, self._canon(word, m), y]

    def gallery_distance(self, g1, g2):
        if g1.sign != g2.sign:
            raise MixedSigns("gallery distance needs germs of the same sign")
        return len(weyl_mul(self.real, weyl_inverse(self.real, g1.w), g2.w))

    def germ_distance(self, word, g, max_len=30):
        """Gallery distance from g to the nearest germ of the root family inside the apartment."""
        if self.germ_in(word, g):
            return 0
        beta = self.chain_root(word)
        start = g.w.matrix
        seen = {start}
        todo = deque([(start, 0)])
        while todo:
            M, n = todo.popleft()
            if n >= max_len:
                break
            for i in range(self.real.n):
                M2 = la.matmul(M, self.real.reflections[i])
                if M2 in seen:
                    continue
                seen.add(M2)
                h = SectorGermId(g.sign, reduce_matrix(self.real, M2))
                if germ_side(self.table, beta, h) > 0:
                    return n + 1
                todo.append((M2, n + 1))
        raise RootOutsideTable("no germ of the apartment found within the search bound")

    # --- automorphisms -------------------------------------------------------

    def automorphism_apply(self, aut, x):
        b = la.add(la.matvec(aut.w.matrix, x.b), aut.shift)
        return self._canon(self.transport_word(aut, x.word), b)

    def transport_word(self, aut, word):
        inv = la.inverse(aut.w.matrix)
        out = []
        for l in word:
            beta = self.root_of(l)
            cov = la.covec_mat(beta.covector, inv)
            try:
                image = self.table.by_covector(cov)
            except RootOutsideTable:
                raise WallImageOutsideTable(f"image of root {beta.coords} is outside the table") from None
            if not image.positive:
                raise NotAnAutomorphism("the linear part must keep branch roots positive")
            k = Frac(l.k) - image(aut.shift)
            out.append(FoldingLetter(self.table.positive_index(image), int(k), aut.sheet(l.sheet)))
        out = tuple(out)
        if out not in self._registry:
            raise UnregisteredApartment(f"image apartment {out} is not registered")
        return out

    def automorphism_germ(self, aut, g):
        return SectorGermId(g.sign, weyl_mul(self.real, aut.w, g.w))


@dataclass(frozen=True)
class Automorphism:
    """Affine Weyl element on the root chart plus a permutation of sheets 1..t-1."""

    w: object  # WeylWord
    shift: tuple  # integral vector
    perm: tuple = ()  # perm[j-1] is the image of sheet j; empty means identity

    def sheet(self, j):
        return self.perm[j - 1] if self.perm else j


# --- random construction ---------------------------------------------------


def random_masure(config, rng, n_words=12, depth=None, level_range=3, root_height=None, keep=None):
    """A frozen masure with random wall-parallel chains.

    Branch roots have height <= root_height and pass keep(root) when given.
    """
    m = Masure(config)
    depth = config.max_depth if depth is None else depth
    roots = [
        i
        for i, r in enumerate(config.table.positive)
        if (root_height is None or r.height <= root_height) and (keep is None or keep(r))
    ]
    words = [()]
    attempts = 0
    while len(words) < n_words + 1 and attempts < 50 * n_words:
        attempts += 1
        parent = rng.choice(words)
        if len(parent) >= depth:
            continue
        idx = parent[0].root if parent else rng.choice(roots)
        k = rng.randint(-level_range, level_range)
        sheet = rng.randint(1, config.thickness - 1)
        letter = FoldingLetter(idx, k, sheet)
        if parent + (letter,) in m._registry:
            continue
        words.append(m.branch(parent, idx, k, sheet))
    return m.freeze()


def random_coords(rng, d, radius=3, denominators=(1, 2)):
    return tuple(Frac(rng.randint(-radius * q, radius * q), q) for q in (rng.choice(denominators),) for _ in range(d))


def random_point(masure, rng, radius=3, denominators=(1, 2), new_only=True):
    """A random point; with new_only the coordinates are resampled until new in the leaf."""
    words = masure.apartments
    for _ in range(200):
        w = rng.choice(words)
        b = random_coords(rng, masure.real.d, radius, denominators)
        p = masure._canon(w, b)
        if not new_only or p.word == w:
            return p
    return p


def make_rng(seed):
    return random.Random(seed)
