"""Return words, Rauzy graphs, extension graphs and occurrence-prefix sets."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable

from . import fingroup
from .fingroup import FiniteMorphism
from .freegroup import CoreGraph, core_graph, core_graph_of_labeled_graph, morphism_image
from .words import LanguageOracle


class NotAFactor(ValueError):
    pass


class NotAFactorCode(ValueError):
    pass


def _ordered(words: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(words), key=lambda w: (len(w), w)))


@dataclass(frozen=True)
class ReturnSet:
    """Return words to ``base`` together with the window that certified them."""

    base: str
    returns: tuple[str, ...]
    certified_bound: int

    def __iter__(self):
        return iter(self.returns)

    def __len__(self) -> int:
        return len(self.returns)

    def __contains__(self, r) -> bool:
        return r in self.returns

    def as_set(self) -> frozenset[str]:
        return frozenset(self.returns)


def _scan_returns(oracle: LanguageOracle, code: tuple[str, ...]) -> tuple[tuple[str, ...], int]:
    longest = max(len(s) for s in code)
    gap = max(2 * longest, 4)
    while True:
        n = longest + gap
        found: set[str] = set()
        complete = True
        for w in oracle.language(n):
            if not any(w.startswith(s) for s in code):
                continue
            nxt = [p for p in (w.find(s, 1) for s in code) if p > 0]
            if not nxt:
                complete = False
                break
            found.add(w[: min(nxt)])
        if complete:
            return _ordered(found), n
        gap *= 2


def return_words(oracle: LanguageOracle, u: str) -> ReturnSet:
    """The exact set ``R_X(u)``.

    Windows of length ``|u| + D`` are doubled until every factor of that length
    beginning with ``u`` shows a second occurrence of ``u``; every return word
    is then the gap before that second occurrence in some such factor.
    """
    if u == "":
        return ReturnSet("", _ordered(oracle.language(1)), 1)
    if u not in oracle:
        raise NotAFactor(f"{u!r} is not in the language")
    returns, n = _scan_returns(oracle, (u,))
    return ReturnSet(u, returns, n)


def check_factor_code(S: Iterable[str]) -> tuple[str, ...]:
    code = tuple(dict.fromkeys(S))
    if not code or "" in code:
        raise NotAFactorCode("a factor code is a nonempty set of nonempty words")
    for s in code:
        for t in code:
            if s != t and s in t:
                raise NotAFactorCode(f"{s!r} is a factor of {t!r}")
    return code


def return_words_to_set(oracle: LanguageOracle, S: Iterable[str]) -> frozenset[str]:
    """``R_X(S)`` for a factor code ``S``; words of ``S`` outside the language are ignored."""
    code = tuple(s for s in check_factor_code(S) if s in oracle)
    if not code:
        raise NotAFactor("no word of the code occurs in the language")
    returns, _ = _scan_returns(oracle, code)
    return frozenset(returns)


def return_group(oracle: LanguageOracle, u: str) -> CoreGraph:
    return core_graph(return_words(oracle, u))


def return_group_image(oracle: LanguageOracle, u: str, phi):
    """Image of ``⟨R_X(u)⟩`` under a finite morphism (element set) or a free morphism (core graph)."""
    rets = return_words(oracle, u)
    if isinstance(phi, FiniteMorphism):
        return fingroup.closure((phi(r) for r in rets), one=phi.one)
    return morphism_image(phi, list(rets))


# ---------------------------------------------------------------------------
# Rauzy graphs


@dataclass(frozen=True)
class RauzyGraph:
    order: int
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...]  # (source, label, target)

    def successors(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {v: [] for v in self.vertices}
        for s, _, t in self.edges:
            out[s].append(t)
        return out

    def is_strongly_connected(self) -> bool:
        if not self.vertices:
            return True
        fwd = self.successors()
        bwd: dict[str, list[str]] = {v: [] for v in self.vertices}
        for s, _, t in self.edges:
            bwd[t].append(s)
        for adj in (fwd, bwd):
            seen = {self.vertices[0]}
            stack = [self.vertices[0]]
            while stack:
                v = stack.pop()
                for w in adj[v]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            if len(seen) != len(self.vertices):
                return False
        return True

    def to_dot(self) -> str:
        lines = [f"digraph rauzy_{self.order} {{"]
        for v in self.vertices:
            lines.append(f'  "{v or "ε"}";')
        for s, a, t in self.edges:
            lines.append(f'  "{s or "ε"}" -> "{t or "ε"}" [label="{a}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def rauzy_graph(oracle: LanguageOracle, n: int) -> RauzyGraph:
    vertices = _ordered(oracle.language(n))
    edges = tuple(sorted((w[:-1], w[0], w[1:]) for w in oracle.language(n + 1)))
    return RauzyGraph(n, vertices, edges)


def rauzy_group(oracle: LanguageOracle, u: str) -> CoreGraph:
    """``Gr(u)``: loop labels at ``u`` in the Rauzy graph of order ``|u|``."""
    if u not in oracle:
        raise NotAFactor(f"{u!r} is not in the language")
    graph = rauzy_graph(oracle, len(u))
    return core_graph_of_labeled_graph(graph.edges, u)


# ---------------------------------------------------------------------------
# Extension graphs


@dataclass(frozen=True)
class ExtensionGraph:
    center: str
    order: int
    left: tuple[str, ...]
    right: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    def components(self) -> list[tuple[set[str], set[str]]]:
        parent: dict[tuple[str, str], tuple[str, str]] = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for v in self.left:
            parent[("L", v)] = ("L", v)
        for v in self.right:
            parent[("R", v)] = ("R", v)
        for v, w in self.edges:
            a, b = find(("L", v)), find(("R", w))
            if a != b:
                parent[a] = b
        groups: dict = defaultdict(lambda: (set(), set()))
        for node in parent:
            side, v = node
            groups[find(node)][0 if side == "L" else 1].add(v)
        return list(groups.values())

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def is_acyclic(self) -> bool:
        return len(self.edges) == len(self.left) + len(self.right) - len(self.components())

    def is_tree(self) -> bool:
        return self.is_connected() and self.is_acyclic()

    def to_dot(self) -> str:
        c = self.center or "ε"
        lines = [f'graph "E{self.order}({c})" {{', "  rankdir=LR;"]
        for v in self.left:
            lines.append(f'  "L:{v}" [label="{v}"];')
        for v in self.right:
            lines.append(f'  "R:{v}" [label="{v}"];')
        for v, w in self.edges:
            lines.append(f'  "L:{v}" -- "R:{w}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def extension_graph(oracle: LanguageOracle, u: str, d: int = 1) -> ExtensionGraph:
    if d < 1:
        raise ValueError("extension order must be at least 1")
    if u not in oracle:
        raise NotAFactor(f"{u!r} is not in the language")
    n = len(u)
    left = _ordered(w[:d] for w in oracle.language(n + d) if w[d:] == u)
    right = _ordered(w[n:] for w in oracle.language(n + d) if w[:n] == u)
    edges = tuple(sorted((w[:d], w[d + n :]) for w in oracle.language(n + 2 * d) if w[d : d + n] == u))
    return ExtensionGraph(u, d, left, right, edges)


def is_dendric(oracle: LanguageOracle, u: str) -> bool:
    return extension_graph(oracle, u, 1).is_tree()


def suffix_connection_order(oracle: LanguageOracle, u: str) -> int | None:
    """Least ``d`` witnessing suffix-connectedness of ``u``, or None."""
    lefts = extension_graph(oracle, u, 1).left
    for d in range(1, len(u) + 2):
        head, tail = u[: d - 1], u[d - 1 :]
        group = {a + head for a in lefts}
        graph = extension_graph(oracle, tail, d)
        for left, _ in graph.components():
            if group <= left:
                return d
    return None


def is_suffix_connected(oracle: LanguageOracle, u: str) -> bool:
    return suffix_connection_order(oracle, u) is not None


# ---------------------------------------------------------------------------
# Occurrence prefixes and welldoc


@dataclass(frozen=True)
class OccurrencePrefixSet:
    """Prefixes ``x[0, m)`` of the canonical point at occurrences ``m`` of ``target``."""

    window: int
    target: str
    positions: tuple[int, ...]
    point: str

    @property
    def members(self) -> tuple[str, ...]:
        return tuple(self.point[:m] for m in self.positions)


def occurrence_prefixes(oracle: LanguageOracle, w: str, window: int) -> OccurrencePrefixSet:
    x = oracle.point_prefix(window + len(w))
    positions = []
    m = x.find(w)
    while 0 <= m < window:
        positions.append(m)
        m = x.find(w, m + 1)
    return OccurrencePrefixSet(window, w, tuple(positions), x[:window])


def welldoc_saturates(oracle: LanguageOracle, w: str, phi: FiniteMorphism, start: int = 256, cap: int = 1 << 16) -> bool | None:
    """Whether ``φ(P_x(w)) = φ(F_A)`` on the canonical point.

    True once a scanned window saturates.  False is returned only with a
    certificate: every member lies in a coset of ``φ⟨R_X(w)⟩``, so a proper
    return-group image rules saturation out.  None when the cap is reached.
    """
    G = phi.group
    x = oracle.point_prefix(cap + len(w))
    images = set()
    value = phi.one
    window = min(start, cap)
    m = 0
    while True:
        while m < window:
            if x.startswith(w, m):
                images.add(value)
            value = value * phi.images[x[m]]
            m += 1
        if len(images) == len(G):
            return True
        if window >= cap:
            break
        window = min(2 * window, cap)
    H = return_group_image(oracle, w, phi)
    if len(H) < len(G):
        return False
    return None
