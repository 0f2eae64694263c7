"""Cayley graphs and digraphs of finite rotation groups.

Vertices are group elements; each generator s contributes directed edges
gamma -> s * gamma of its own color.  Two metrics are provided: the word
metric (shortest path using generators and their inverses) and the angular
metric (rotation angle of the relative element), which is bi-invariant.
"""

from __future__ import annotations

import enum
import weakref
from collections import deque
from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraElement, from_scalar_coeffs
from .errors import InvalidGeneratorError, UnreachableError
from .rotations import FiniteGroup, find_standard_generators, rotation_angle


class MetricChoice(enum.Enum):
    WORD = "word"
    ANGULAR = "angular"


@dataclass(frozen=True, eq=False)
class CayleyGraph:
    group: FiniteGroup
    gen_set: tuple[int, ...]
    edges: frozenset[tuple[int, int]]
    directed_edges: tuple[tuple[int, int, int], ...]
    neighbors: tuple[tuple[int, ...], ...]

    @property
    def num_vertices(self) -> int:
        return self.group.order

    def degree(self, v: int) -> int:
        return len(self.neighbors[v])


def cayley_graph(group: FiniteGroup, gen_set) -> CayleyGraph:
    """Graph with an edge between gamma and s*gamma for every generator s."""
    gens = [int(s) for s in gen_set]
    if not gens:
        raise InvalidGeneratorError("generating set must be non-empty")
    if len(set(gens)) != len(gens):
        raise InvalidGeneratorError("generating set contains repeats")
    for s in gens:
        if s == group.identity_index:
            raise InvalidGeneratorError("identity is not allowed as a generator")
        if not 0 <= s < group.order:
            raise InvalidGeneratorError(f"generator index {s} out of range")
    mult = group.mult_table
    directed = []
    edges = set()
    adjacency: list[set[int]] = [set() for _ in range(group.order)]
    for color, s in enumerate(gens):
        for v in range(group.order):
            w = int(mult[s, v])
            directed.append((v, w, color))
            edges.add((v, w) if v < w else (w, v))
            adjacency[v].add(w)
            adjacency[w].add(v)
    return CayleyGraph(
        group=group,
        gen_set=tuple(gens),
        edges=frozenset(edges),
        directed_edges=tuple(directed),
        neighbors=tuple(tuple(sorted(a)) for a in adjacency),
    )


_standard_graph_cache: "weakref.WeakKeyDictionary[FiniteGroup, CayleyGraph]" = (
    weakref.WeakKeyDictionary()
)


def standard_graph(group: FiniteGroup) -> CayleyGraph:
    """Cayley graph for the standard five-fold/two-fold generating pair."""
    cached = _standard_graph_cache.get(group)
    if cached is None:
        c5, c2 = find_standard_generators(group)
        cached = cayley_graph(group, (c5.index, c2.index))
        _standard_graph_cache[group] = cached
    return cached


def word_distances_from(graph: CayleyGraph, start: int) -> np.ndarray:
    """BFS distances from one vertex; -1 marks unreachable vertices."""
    dist = np.full(graph.num_vertices, -1, dtype=int)
    dist[start] = 0
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in graph.neighbors[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def word_distance(graph: CayleyGraph, a: int, b: int) -> int:
    """Shortest-path length from a to b using generators and their inverses."""
    d = int(word_distances_from(graph, int(a))[int(b)])
    if d < 0:
        raise UnreachableError(
            f"vertex {b} unreachable from {a}; the set does not generate the group"
        )
    return d


def graph_diameter(graph: CayleyGraph) -> int:
    diam = 0
    for v in range(graph.num_vertices):
        dist = word_distances_from(graph, v)
        if dist.min() < 0:
            raise UnreachableError("graph is disconnected")
        diam = max(diam, int(dist.max()))
    return diam


def angular_distance(group: FiniteGroup, a: int, b: int) -> float:
    """Rotation angle of b * a^-1; a bi-invariant metric on the group."""
    rel = group.mult(int(b), group.inverse(int(a)))
    return rotation_angle(group.elements[rel])


def _check_standard_relations(group: FiniteGroup, c5: int, c2: int) -> None:
    if group.element_order(c5) != 5:
        raise InvalidGeneratorError("first generator does not have order 5")
    if group.element_order(c2) != 2:
        raise InvalidGeneratorError("second generator does not have order 2")
    if group.element_order(group.mult(c5, c2)) != 3:
        raise InvalidGeneratorError("product of generators does not have order 3")


def adjacency_element(group: FiniteGroup, c5: int, c2: int) -> AlgebraElement:
    """Self-adjoint element with weight 1/2 on the five-fold generator and its
    inverse and weight 1 on the two-fold generator.

    Minus its left-regular image is the (weighted) adjacency operator of the
    standard Cayley graph.
    """
    _check_standard_relations(group, c5, c2)
    return from_scalar_coeffs(group, {c5: 0.5, group.inverse(c5): 0.5, c2: 1.0})


def c60_hopping_element(group: FiniteGroup, c5: int, c2: int) -> AlgebraElement:
    """Uniform nearest-neighbor hopping element (weight 1 on all three
    generator directions), as in the fullerene C60 network."""
    _check_standard_relations(group, c5, c2)
    return from_scalar_coeffs(group, {c5: 1.0, group.inverse(c5): 1.0, c2: 1.0})


def generator_cycles(graph: CayleyGraph, color: int) -> tuple[tuple[int, ...], ...]:
    """Directed cycles traced by repeatedly applying one generator.

    Every vertex lies on exactly one such cycle; cycles are rotated so the
    smallest vertex comes first and sorted for determinism.
    """
    s = graph.gen_set[color]
    mult = graph.group.mult_table
    seen = [False] * graph.num_vertices
    cycles = []
    for v in range(graph.num_vertices):
        if seen[v]:
            continue
        cycle = [v]
        seen[v] = True
        w = int(mult[s, v])
        while w != v:
            cycle.append(w)
            seen[w] = True
            w = int(mult[s, w])
        k = cycle.index(min(cycle))
        cycles.append(tuple(cycle[k:] + cycle[:k]))
    return tuple(sorted(cycles))


_DOT_COLORS = ("blue", "red", "green", "orange", "purple", "brown")


def graph_to_dot(graph: CayleyGraph, name: str = "cayley") -> str:
    """DOT digraph with one edge color per generator."""
    lines = [f"digraph {name} {{"]
    for color, s in enumerate(graph.gen_set):
        lines.append(f'  // generator {color}: element index {s}')
    for v, w, color in graph.directed_edges:
        c = _DOT_COLORS[color % len(_DOT_COLORS)]
        lines.append(f'  {v} -> {w} [color="{c}", label="g{color}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_json(graph: CayleyGraph, include_distances: bool = True) -> dict:
    data = {
        "group": graph.group.name,
        "gen_set": list(graph.gen_set),
        "edges": sorted([list(e) for e in graph.edges]),
        "directed_edges": [list(e) for e in graph.directed_edges],
    }
    if include_distances:
        data["word_distances"] = [
            word_distances_from(graph, v).tolist() for v in range(graph.num_vertices)
        ]
    return data
