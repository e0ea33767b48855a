"""Interaction-graph combinatorics for local Hamiltonians.

The vertices of the interaction graph are Hamiltonian terms; two terms are
adjacent when their site supports overlap, and every term is adjacent to
itself.  Distances between terms and site sets, surface/volume counts, and
ball truncations of a Hamiltonian all live here.  Distance convention:
dist(x, y) = 0 iff the supports intersect; otherwise it is the number of
term-graph edges on a shortest path between terms incident to x and terms
incident to y.
"""

from __future__ import annotations

import collections
from dataclasses import dataclass, field

TermId = int

#: marker for pairs with no connecting chain of terms
UNREACHABLE = float("inf")


@dataclass(frozen=True)
class GeometrySpec:
    """Site layout a Hamiltonian lives on.

    kind: "chain", "lattice2d" or "custom".  extents holds (n,) for a chain
    and (rows, cols) for a 2d lattice.  custom geometries carry an explicit
    site tuple.  Sites are 0-indexed integers internally; text formats are
    1-indexed.
    """

    kind: str
    extents: tuple[int, ...] = ()
    periodic: bool = False
    custom_sites: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("chain", "lattice2d", "custom"):
            raise ValueError(f"unknown geometry kind {self.kind!r}")
        if self.kind == "chain" and len(self.extents) != 1:
            raise ValueError("chain geometry needs extents (n,)")
        if self.kind == "lattice2d" and len(self.extents) != 2:
            raise ValueError("lattice2d geometry needs extents (rows, cols)")
        if self.kind == "custom" and not self.custom_sites:
            raise ValueError("custom geometry needs an explicit site tuple")

    @property
    def sites(self) -> tuple[int, ...]:
        if self.kind == "custom":
            return tuple(sorted(self.custom_sites))
        n = 1
        for e in self.extents:
            n *= e
        return tuple(range(n))

    @property
    def site_count(self) -> int:
        return len(self.sites)

    def edges(self) -> list[tuple[int, int]]:
        """Nearest-neighbour pairs for the regular kinds; empty for custom."""
        if self.kind == "chain":
            (n,) = self.extents
            pairs = [(i, i + 1) for i in range(n - 1)]
            if self.periodic and n > 2:
                pairs.append((n - 1, 0))
            return pairs
        if self.kind == "lattice2d":
            rows, cols = self.extents
            idx = lambda r, c: r * cols + c
            pairs = []
            for r in range(rows):
                for c in range(cols):
                    if c + 1 < cols or (self.periodic and cols > 2):
                        pairs.append((idx(r, c), idx(r, (c + 1) % cols)))
                    if r + 1 < rows or (self.periodic and rows > 2):
                        pairs.append((idx(r, c), idx((r + 1) % rows, c)))
            return sorted(set(tuple(sorted(p)) for p in pairs))
        return []


@dataclass
class InteractionGraph:
    """Adjacency structure of a term collection.

    adjacency maps each term id to the set of term ids whose supports
    overlap it (itself included).  degree_bound is the largest such set,
    i.e. the self-loop counts once.  locality_bound is the largest support.
    """

    supports: dict[TermId, frozenset[int]]
    adjacency: dict[TermId, set[TermId]] = field(default_factory=dict)
    site_incidence: dict[int, set[TermId]] = field(default_factory=dict)
    degree_bound: int = 0
    locality_bound: int = 0

    def __post_init__(self):
        if not self.adjacency:
            inc: dict[int, set[TermId]] = collections.defaultdict(set)
            for tid, supp in self.supports.items():
                if not supp:
                    raise ValueError(f"term {tid} has empty support")
                for s in supp:
                    inc[s].add(tid)
            adj: dict[TermId, set[TermId]] = {t: set() for t in self.supports}
            for tids in inc.values():
                for t in tids:
                    adj[t].update(tids)
            self.adjacency = adj
            self.site_incidence = dict(inc)
            self.degree_bound = max((len(v) for v in adj.values()), default=0)
            self.locality_bound = max(
                (len(s) for s in self.supports.values()), default=0
            )

    @property
    def term_ids(self) -> list[TermId]:
        return sorted(self.supports)

    def incident_terms(self, sites) -> set[TermId]:
        out: set[TermId] = set()
        for s in sites:
            out.update(self.site_incidence.get(s, ()))
        return out

    def _seed_set(self, x) -> tuple[frozenset[int], set[TermId]]:
        """Normalise a TermId or site iterable to (site set, incident terms)."""
        if isinstance(x, (int,)) and x in self.supports:
            supp = self.supports[x]
            return supp, {x}
        sites = frozenset(x)
        return sites, self.incident_terms(sites)

    def distances_from(self, x) -> dict[TermId, float]:
        """BFS distance of every term from x (a TermId or a site set).

        Terms whose support meets x sit at distance 0.
        """
        _, seeds = self._seed_set(x)
        dist: dict[TermId, float] = {t: UNREACHABLE for t in self.supports}
        queue = collections.deque()
        for t in sorted(seeds):
            dist[t] = 0
            queue.append(t)
        while queue:
            t = queue.popleft()
            for u in self.adjacency[t]:
                if dist[u] == UNREACHABLE:
                    dist[u] = dist[t] + 1
                    queue.append(u)
        return dist

    def distance(self, a, b) -> float:
        """Distance between two terms / site sets (0 iff supports intersect)."""
        sa, seeds_a = self._seed_set(a)
        sb, seeds_b = self._seed_set(b)
        if sa & sb:
            return 0
        if not seeds_a or not seeds_b:
            return UNREACHABLE
        dist = self.distances_from(a)
        return min(dist[t] for t in seeds_b)

    def diameter(self) -> int:
        """Largest finite term-to-term distance."""
        best = 0
        for t in self.supports:
            for v in self.distances_from(t).values():
                if v != UNREACHABLE:
                    best = max(best, int(v))
        return best


def build_graph(supports_by_id: dict[TermId, frozenset[int]]) -> InteractionGraph:
    """Interaction graph of a term collection given as id -> site support."""
    return InteractionGraph(supports={t: frozenset(s) for t, s in supports_by_id.items()})


def term_distance(graph: InteractionGraph, a, b) -> float:
    """Graph distance between two terms or site sets; 0 iff supports meet."""
    return graph.distance(a, b)


def surface_count(graph: InteractionGraph, ell: int, a) -> int:
    """S(ell, a): number of terms at distance exactly ell from a."""
    dist = graph.distances_from(a)
    return sum(1 for v in dist.values() if v == ell)


def volume_count(graph: InteractionGraph, ell: int, a) -> int:
    """V(ell, a): number of terms at distance at most ell from a."""
    dist = graph.distances_from(a)
    return sum(1 for v in dist.values() if v <= ell)


def patch_term_ids(graph: InteractionGraph, a, ell: int) -> set[TermId]:
    """Terms of the radius-ell patch around a: those with dist(term, a) < ell - 1.

    This strict convention makes ell = 1 the empty patch.  For an inclusive
    ball use ball_term_ids.
    """
    dist = graph.distances_from(a)
    return {t for t, v in dist.items() if v < ell - 1}


def ball_term_ids(graph: InteractionGraph, a, radius: int) -> set[TermId]:
    """Terms with dist(term, a) <= radius (inclusive-ball convenience)."""
    dist = graph.distances_from(a)
    return {t for t, v in dist.items() if v <= radius}


def truncate_to_ball(hamiltonian, a, ell: int, inclusive: bool = False):
    """Restrict a Hamiltonian to the patch around site set (or term) a.

    Default keeps terms with dist < ell - 1; inclusive=True keeps
    dist <= ell instead.  Term ids are preserved.
    """
    g = hamiltonian.graph
    ids = ball_term_ids(g, a, ell) if inclusive else patch_term_ids(g, a, ell)
    return hamiltonian.restricted(ids)
