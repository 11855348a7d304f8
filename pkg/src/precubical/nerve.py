"""Order complexes, covering nerves, and integer simplicial homology.

The refinement poset of cube chains is turned into simplicial complexes
two ways: the order complex (simplices are totally ordered subsets) and
the covering nerve (simplices are sets of chains possessing a common
refinement).  Homology is computed over the integers through Smith
normal form with arbitrary-precision arithmetic, so torsion would be
visible if a complex had any.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .chains import RefinementPoset
from .cubeset import CubeSet, is_non_self_linked, is_proper
from .errors import PrecubicalError

__all__ = [
    "SimplicialComplex",
    "HomologyResult",
    "order_complex",
    "covering_nerve",
    "homology",
    "betti",
    "euler",
    "components",
    "smith_normal_form",
]

DEFAULT_SIMPLEX_BUDGET = 200_000


@dataclass(frozen=True)
class SimplicialComplex:
    """A finite complex stored by maximal simplices over indexed vertices.

    ``labels`` names the vertices (kept for serialization and debugging);
    ``maximal`` lists inclusion-maximal simplices as sorted index tuples.
    ``flags`` carries quality notes such as ``truncated-approximation``.
    """

    labels: tuple[str, ...]
    maximal: tuple[tuple[int, ...], ...]
    flags: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        for s in self.maximal:
            if any(not 0 <= v < len(self.labels) for v in s) or list(s) != sorted(set(s)):
                raise PrecubicalError(f"bad simplex {s}")

    def dim(self) -> int:
        return max((len(s) - 1 for s in self.maximal), default=-1)

    def simplices(self, budget: int = DEFAULT_SIMPLEX_BUDGET) -> list[list[tuple[int, ...]]]:
        """Downward closure by dimension: ``result[k]`` lists the k-simplices."""
        by_dim: list[set[tuple[int, ...]]] = [set() for _ in range(self.dim() + 1)]
        total = 0
        frontier = set(self.maximal)
        seen: set[tuple[int, ...]] = set()
        while frontier:
            nxt: set[tuple[int, ...]] = set()
            for s in frontier:
                if s in seen or not s:
                    continue
                seen.add(s)
                total += 1
                if total > budget:
                    raise PrecubicalError(f"simplex budget of {budget} exceeded")
                by_dim[len(s) - 1].add(s)
                for i in range(len(s)):
                    f = s[:i] + s[i + 1 :]
                    if f and f not in seen:
                        nxt.add(f)
            frontier = nxt
        return [sorted(d) for d in by_dim]

    def simplex_counts(self) -> list[int]:
        return [len(d) for d in self.simplices()]


def _prune_to_maximal(simplices: Iterable[tuple[int, ...]]) -> tuple[tuple[int, ...], ...]:
    sets = sorted({tuple(sorted(set(s))) for s in simplices}, key=len, reverse=True)
    kept: list[tuple[int, ...]] = []
    for s in sets:
        ss = set(s)
        if not any(ss <= set(k) for k in kept):
            kept.append(s)
    return tuple(sorted(kept))


def order_complex(poset: RefinementPoset) -> SimplicialComplex:
    """The complex of totally ordered subsets of the refinement poset.

    Maximal simplices are the maximal chains of the poset, i.e. the
    maximal paths of its cover (Hasse) diagram.  A truncated poset yields
    a flagged lower approximation.
    """
    n = len(poset.objects)
    labels = tuple("|".join(c.cubes) if c.cubes else "(empty)" for c in poset.objects)
    finer: dict[int, list[int]] = {i: [] for i in range(n)}
    coarser_count = [0] * n
    for coarse, fine in poset.covers:
        finer[coarse].append(fine)
        coarser_count[fine] += 1
    maximal: list[tuple[int, ...]] = []

    def walk(node: int, acc: list[int]):
        acc.append(node)
        if not finer[node]:
            maximal.append(tuple(sorted(acc)))
        else:
            for nxt in finer[node]:
                walk(nxt, acc)
        acc.pop()

    for i in range(n):
        if coarser_count[i] == 0:
            walk(i, [])
    flags = frozenset({"truncated-approximation"} if poset.truncated else set())
    return SimplicialComplex(labels, _prune_to_maximal(maximal), flags)


def covering_nerve(
    X: CubeSet | None, poset: RefinementPoset, guarantee: bool | None = None
) -> SimplicialComplex:
    """The nerve of the covering by collar path spaces, one per chain.

    A set of chains spans a simplex exactly when it has a common
    refinement, i.e. when it is contained in the up-set of some chain; so
    the maximal simplices are the maximal up-sets, taken over the minimal
    chains of the poset.  On complexes that are not proper and
    non-self-linked the covering loses its nerve-lemma guarantee, which is
    recorded as a flag rather than refusing the computation; ``guarantee``
    overrides the check when the complex itself is not at hand.
    """
    n = len(poset.objects)
    labels = tuple("|".join(c.cubes) if c.cubes else "(empty)" for c in poset.objects)
    m = poset.refines_matrix()
    has_finer = [False] * n
    for coarse, fine in poset.covers:
        has_finer[coarse] = True
    upsets = [
        tuple(sorted(j for j in range(n) if m[i][j]))
        for i in range(n)
        if not has_finer[i]
    ]
    flags = set()
    if poset.truncated:
        flags.add("truncated-approximation")
    if guarantee is None:
        if X is None:
            raise PrecubicalError("covering_nerve needs the complex or an explicit guarantee")
        guarantee = is_proper(X)[0] and is_non_self_linked(X)[0]
    if not guarantee:
        flags.add("no-nerve-lemma-guarantee")
    return SimplicialComplex(labels, _prune_to_maximal(upsets), frozenset(flags))


# -- integer homology ---------------------------------------------------------


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> list[int]:
    """The diagonal of the Smith normal form of an integer matrix.

    Exact arbitrary-precision elimination; the returned non-negative
    diagonal entries satisfy the divisibility chain d1 | d2 | ...
    """
    a = [list(map(int, row)) for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag: list[int] = []
    top = 0
    left = 0
    while top < rows and left < cols:
        pivot = None
        best = None
        for i in range(top, rows):
            for j in range(left, cols):
                v = abs(a[i][j])
                if v and (best is None or v < best):
                    best, pivot = v, (i, j)
            if best == 1:
                break
        if pivot is None:
            break
        pi, pj = pivot
        a[top], a[pi] = a[pi], a[top]
        for row in a:
            row[left], row[pj] = row[pj], row[left]
        while True:
            # clear the pivot column
            for i in range(top + 1, rows):
                if a[i][left]:
                    q = a[i][left] // a[top][left]
                    if q:
                        a[i] = [x - q * y for x, y in zip(a[i], a[top])]
                    if a[i][left]:
                        a[top], a[i] = a[i], a[top]
            # clear the pivot row
            row_done = True
            for j in range(left + 1, cols):
                if a[top][j]:
                    q = a[top][j] // a[top][left]
                    if q:
                        for i in range(top, rows):
                            a[i][j] -= q * a[i][left]
                    if a[top][j]:
                        for i in range(top, rows):
                            a[i][left], a[i][j] = a[i][j], a[i][left]
                        row_done = False
            if row_done and all(a[i][left] == 0 for i in range(top + 1, rows)):
                break
        diag.append(abs(a[top][left]))
        top += 1
        left += 1
    # enforce the divisibility chain
    changed = True
    while changed:
        changed = False
        for k in range(len(diag) - 1):
            x, y = diag[k], diag[k + 1]
            if x and y % x != 0:
                g = _gcd(x, y)
                diag[k], diag[k + 1] = g, x * y // g
                changed = True
            elif x == 0 and y != 0:
                diag[k], diag[k + 1] = y, x
                changed = True
    return [d for d in diag if d != 0] + [0] * sum(1 for d in diag if d == 0)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


@dataclass(frozen=True)
class HomologyResult:
    """Integral homology: one Betti number and torsion list per degree."""

    betti: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]
    flags: frozenset[str] = field(default_factory=frozenset)

    def __str__(self) -> str:
        parts = []
        for k, (b, tor) in enumerate(zip(self.betti, self.torsion)):
            s = f"H{k} = Z^{b}"
            if tor:
                s += " + " + " + ".join(f"Z/{t}" for t in tor)
            parts.append(s)
        return "; ".join(parts) if parts else "trivial"

    def equivalent(self, other: "HomologyResult") -> bool:
        """Equality of homology groups degree by degree (ignoring padding)."""
        n = max(len(self.betti), len(other.betti))
        pad = lambda xs, fill: tuple(xs) + (fill,) * (n - len(xs))
        return pad(self.betti, 0) == pad(other.betti, 0) and pad(self.torsion, ()) == pad(
            other.torsion, ()
        )


def _boundary_matrix(lower: list[tuple[int, ...]], upper: list[tuple[int, ...]]) -> list[list[int]]:
    index = {s: i for i, s in enumerate(lower)}
    mat = [[0] * len(upper) for _ in lower]
    for j, s in enumerate(upper):
        for i in range(len(s)):
            f = s[:i] + s[i + 1 :]
            mat[index[f]][j] = -1 if i % 2 else 1
    return mat


def homology(K: SimplicialComplex) -> HomologyResult:
    """Integral simplicial homology from Smith normal forms of boundaries."""
    if not K.labels or not K.maximal:
        return HomologyResult((), (), K.flags)
    grades = K.simplices()
    dim = len(grades) - 1
    ranks = [0] * (dim + 2)
    diags: list[list[int]] = [[] for _ in range(dim + 2)]
    for k in range(1, dim + 1):
        mat = _boundary_matrix(grades[k - 1], grades[k])
        d = smith_normal_form(mat)
        d = [x for x in d if x != 0]
        ranks[k] = len(d)
        diags[k] = d
    betti = []
    torsion = []
    for k in range(dim + 1):
        betti.append(len(grades[k]) - ranks[k] - ranks[k + 1])
        torsion.append(tuple(x for x in diags[k + 1] if x > 1))
    return HomologyResult(tuple(betti), tuple(torsion), K.flags)


def betti(K: SimplicialComplex) -> tuple[int, ...]:
    return homology(K).betti


def euler(K: SimplicialComplex) -> int:
    """Alternating sum of simplex counts."""
    return sum((-1) ** k * c for k, c in enumerate(K.simplex_counts()))


def components(K: SimplicialComplex) -> int:
    h = homology(K)
    return h.betti[0] if h.betti else 0
