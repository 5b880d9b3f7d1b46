"""Free groups: reduced words, morphisms, Stallings core graphs and Abelian lattices."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .words import Substitution

Letter = tuple  # (symbol, +1 | -1)


def _reduce(seq: Iterable[tuple[str, int]]) -> tuple[tuple[str, int], ...]:
    out: list[tuple[str, int]] = []
    for a, e in seq:
        if out and out[-1][0] == a and out[-1][1] == -e:
            out.pop()
        else:
            out.append((a, e))
    return tuple(out)


class GroupWord:
    """A reduced word over ``A ∪ A^{-1}``; signed letters are ``(a, ±1)`` pairs."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[tuple[str, int]] = ()):
        self.letters = _reduce(letters)
        self._hash = None

    @classmethod
    def of(cls, w: "GroupWord | str") -> "GroupWord":
        """Coerce a positive word (plain string) or a GroupWord."""
        if isinstance(w, GroupWord):
            return w
        return cls((c, 1) for c in w)

    @classmethod
    def parse(cls, text: str) -> "GroupWord":
        """Parse ``"ab'c"``: a trailing apostrophe (or ``^-1``) inverts a letter."""
        text = text.replace("^-1", "'").replace(" ", "")
        seq: list[tuple[str, int]] = []
        i = 0
        while i < len(text):
            a = text[i]
            if a == "'":
                raise ValueError(f"dangling inverse mark in {text!r}")
            if i + 1 < len(text) and text[i + 1] == "'":
                seq.append((a, -1))
                i += 2
            else:
                seq.append((a, 1))
                i += 1
        return cls(seq)

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.letters + GroupWord.of(other).letters)

    def inverse(self) -> "GroupWord":
        g = GroupWord.__new__(GroupWord)
        g.letters = tuple((a, -e) for a, e in reversed(self.letters))
        g._hash = None
        return g

    def __pow__(self, n: int) -> "GroupWord":
        base = self if n >= 0 else self.inverse()
        out = GroupWord()
        for _ in range(abs(n)):
            out = out * base
        return out

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __eq__(self, other) -> bool:
        if isinstance(other, str):
            other = GroupWord.of(other)
        return isinstance(other, GroupWord) and self.letters == other.letters

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.letters)
        return self._hash

    def is_positive(self) -> bool:
        return all(e == 1 for _, e in self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "ε"
        return "".join(a if e == 1 else a + "'" for a, e in self.letters)

    def __repr__(self) -> str:
        return f"GroupWord({str(self)!r})"


def reduce(raw: Iterable[tuple[str, int]]) -> GroupWord:
    return GroupWord(raw)


def invert(g: GroupWord | str) -> GroupWord:
    return GroupWord.of(g).inverse()


def conjugate(g: GroupWord | str, p: GroupWord | str) -> GroupWord:
    """``p^{-1} g p``."""
    p = GroupWord.of(p)
    return p.inverse() * GroupWord.of(g) * p


class FreeMorphism:
    """Group morphism ``F_A -> F_B`` given by images of letters."""

    def __init__(self, images: Mapping[str, GroupWord | str]):
        self.images = {a: GroupWord.of(w) for a, w in images.items()}
        self._inv = {a: w.inverse() for a, w in self.images.items()}

    @classmethod
    def from_substitution(cls, sigma: Substitution) -> "FreeMorphism":
        return cls(sigma.as_dict())

    @property
    def domain(self) -> tuple[str, ...]:
        return tuple(self.images)

    def __call__(self, g: GroupWord | str) -> GroupWord:
        seq: list[tuple[str, int]] = []
        for a, e in GroupWord.of(g).letters:
            seq.extend((self.images if e == 1 else self._inv)[a].letters)
        return GroupWord(seq)

    def compose(self, inner: "FreeMorphism") -> "FreeMorphism":
        return FreeMorphism({a: self(w) for a, w in inner.images.items()})


def _as_morphism(phi) -> FreeMorphism:
    if isinstance(phi, FreeMorphism):
        return phi
    if isinstance(phi, Substitution):
        return FreeMorphism.from_substitution(phi)
    return FreeMorphism(phi)


class _Folder:
    """Union-find backed Stallings folding of a labeled graph."""

    def __init__(self):
        self.parent: list[int] = []
        self.out: list[dict[str, int]] = []
        self.inn: list[dict[str, int]] = []

    def vertex(self) -> int:
        self.parent.append(len(self.parent))
        self.out.append({})
        self.inn.append({})
        return len(self.parent) - 1

    def find(self, v: int) -> int:
        root = v
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[v] != root:
            self.parent[v], v = root, self.parent[v]
        return root

    def _link(self, s: int, a: str, t: int, pending: list) -> None:
        w = self.out[s].get(a)
        if w is not None:
            if w != t:
                pending.append((w, t))
            return
        w = self.inn[t].get(a)
        if w is not None:
            if w != s:
                pending.append((w, s))
            return
        self.out[s][a] = t
        self.inn[t][a] = s

    def edge(self, s: int, a: str, t: int) -> None:
        pending: list[tuple[int, int]] = []
        self._link(self.find(s), a, self.find(t), pending)
        self._drain(pending)

    def _drain(self, pending: list) -> None:
        while pending:
            x, y = pending.pop()
            x, y = self.find(x), self.find(y)
            if x == y:
                continue
            if y < x:
                x, y = y, x
            self.parent[y] = x
            moved = []
            for a, t in list(self.out[y].items()):
                del self.out[y][a]
                del self.inn[t][a]
                moved.append((y, a, t))
            for a, s in list(self.inn[y].items()):
                del self.inn[y][a]
                del self.out[s][a]
                moved.append((s, a, y))
            for s, a, t in moved:
                self._link(self.find(s), a, self.find(t), pending)

    def path(self, start: int, word: GroupWord, end: int) -> None:
        """Add a path labeled ``word`` from ``start`` to ``end``."""
        seq = word.letters
        if not seq:
            pending = [(start, end)]
            self._drain(pending)
            return
        cur = start
        for i, (a, e) in enumerate(seq):
            nxt = end if i == len(seq) - 1 else self.vertex()
            if e == 1:
                self.edge(cur, a, nxt)
            else:
                self.edge(nxt, a, cur)
            cur = nxt

    def core(self, base: int) -> "CoreGraph":
        base = self.find(base)
        live = {v for v in range(len(self.parent)) if self.find(v) == v}
        degree = {v: len(self.out[v]) + len(self.inn[v]) for v in live}
        todo = [v for v in live if v != base and degree[v] <= 1]
        dead: set[int] = set()
        while todo:
            v = todo.pop()
            if v in dead:
                continue
            dead.add(v)
            for a, t in self.out[v].items():
                if t not in dead and t != v:
                    degree[t] -= 1
                    if t != base and degree[t] <= 1:
                        todo.append(t)
            for a, s in self.inn[v].items():
                if s not in dead and s != v:
                    degree[s] -= 1
                    if s != base and degree[s] <= 1:
                        todo.append(s)
        edges = [
            (s, a, t)
            for s in live - dead
            for a, t in self.out[s].items()
            if t not in dead
        ]
        # connected component of the basepoint
        adj: dict[int, list[int]] = {v: [] for v in live - dead}
        for s, _, t in edges:
            adj[s].append(t)
            adj[t].append(s)
        seen = {base}
        stack = [base]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return CoreGraph.canonical(base, [e for e in edges if e[0] in seen])


@dataclass(frozen=True)
class CoreGraph:
    """Folded core graph of a subgroup; vertex 0 is the basepoint.

    Vertices are numbered by breadth-first search from the basepoint, visiting
    incident edges by letter, outgoing before incoming, so that equal subgroups
    have identical ``edges``.
    """

    size: int
    edges: tuple[tuple[int, str, int], ...]
    _out: dict = field(init=False, repr=False, compare=False, hash=False)
    _inn: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        out: list[dict[str, int]] = [dict() for _ in range(self.size)]
        inn: list[dict[str, int]] = [dict() for _ in range(self.size)]
        for s, a, t in self.edges:
            out[s][a] = t
            inn[t][a] = s
        object.__setattr__(self, "_out", out)
        object.__setattr__(self, "_inn", inn)

    @classmethod
    def canonical(cls, base: int, edges: Sequence[tuple[int, str, int]]) -> "CoreGraph":
        out: dict[int, dict[str, int]] = {}
        inn: dict[int, dict[str, int]] = {}
        for s, a, t in edges:
            out.setdefault(s, {})[a] = t
            inn.setdefault(t, {})[a] = s
        number = {base: 0}
        queue = deque([base])
        while queue:
            v = queue.popleft()
            o, i = out.get(v, {}), inn.get(v, {})
            for a in sorted(set(o) | set(i)):
                for w in (o.get(a), i.get(a)):
                    if w is not None and w not in number:
                        number[w] = len(number)
                        queue.append(w)
        relabeled = tuple(sorted((number[s], a, number[t]) for s, a, t in edges))
        return cls(len(number), relabeled)

    @property
    def encoding(self) -> tuple:
        return (self.size, self.edges)

    @property
    def rank(self) -> int:
        return len(self.edges) - self.size + 1

    @property
    def letters(self) -> set[str]:
        return {a for _, a, _ in self.edges}

    def read(self, g: GroupWord | str, start: int = 0) -> int | None:
        """Endpoint of the path labeled ``g`` from ``start``, if it exists."""
        v = start
        for a, e in GroupWord.of(g).letters:
            v = (self._out if e == 1 else self._inn)[v].get(a)
            if v is None:
                return None
        return v

    def __contains__(self, g) -> bool:
        return self.read(g) == 0

    @cached_property
    def tree_paths(self) -> list[GroupWord]:
        """Labels of breadth-first spanning-tree paths from the basepoint."""
        paths: list[GroupWord | None] = [None] * self.size
        paths[0] = GroupWord()
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for a in sorted(set(self._out[v]) | set(self._inn[v])):
                w = self._out[v].get(a)
                if w is not None and paths[w] is None:
                    paths[w] = paths[v] * GroupWord([(a, 1)])
                    queue.append(w)
                w = self._inn[v].get(a)
                if w is not None and paths[w] is None:
                    paths[w] = paths[v] * GroupWord([(a, -1)])
                    queue.append(w)
        return paths  # type: ignore[return-value]

    @cached_property
    def basis(self) -> tuple[GroupWord, ...]:
        """Free basis read off the spanning tree: one word per non-tree edge."""
        paths = self.tree_paths
        tree = set()
        for v in range(1, self.size):
            p = paths[v]
            a, e = p.letters[-1]
            u = self.read(GroupWord(p.letters[:-1]))
            tree.add((u, a, v) if e == 1 else (v, a, u))
        gens = []
        for s, a, t in self.edges:
            if (s, a, t) not in tree:
                gens.append(paths[s] * GroupWord([(a, 1)]) * paths[t].inverse())
        return tuple(gens)

    def is_complete(self, alphabet: Iterable[str]) -> bool:
        """Finite-index test: every vertex carries all ``2d`` incident edges."""
        letters = set(alphabet)
        return all(set(self._out[v]) == letters and set(self._inn[v]) == letters for v in range(self.size))

    def index(self, alphabet: Iterable[str]) -> int | None:
        return self.size if self.is_complete(alphabet) else None

    def cyclic_core(self) -> tuple[int, list[tuple[int, str, int]]]:
        """Vertices and edges left after pruning degree-one vertices, basepoint included."""
        degree = [len(self._out[v]) + len(self._inn[v]) for v in range(self.size)]
        dead: set[int] = set()
        todo = [v for v in range(self.size) if degree[v] <= 1]
        while todo:
            v = todo.pop()
            if v in dead:
                continue
            dead.add(v)
            for w in list(self._out[v].values()) + list(self._inn[v].values()):
                if w not in dead and w != v:
                    degree[w] -= 1
                    if degree[w] <= 1:
                        todo.append(w)
        keep = [v for v in range(self.size) if v not in dead]
        return len(keep), [(s, a, t) for s, a, t in self.edges if s not in dead and t not in dead]

    def to_dot(self, name: str = "core") -> str:
        lines = [f"digraph {name} {{", "  rankdir=LR;"]
        for v in range(self.size):
            shape = "doublecircle" if v == 0 else "circle"
            lines.append(f'  {v} [shape={shape}];')
        for s, a, t in self.edges:
            lines.append(f'  {s} -> {t} [label="{a}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _gens(gens) -> list[GroupWord]:
    return [GroupWord.of(g) for g in gens]


def core_graph(gens: Iterable[GroupWord | str]) -> CoreGraph:
    """Stallings core graph of the subgroup generated by ``gens``."""
    folder = _Folder()
    base = folder.vertex()
    for g in _gens(gens):
        if g:
            folder.path(base, g, base)
    return folder.core(base)


def core_graph_of_labeled_graph(edges: Iterable[tuple[object, str, object]], base) -> CoreGraph:
    """Fold an arbitrary labeled graph; the result represents its loop labels at ``base``."""
    folder = _Folder()
    ids: dict[object, int] = {base: folder.vertex()}
    for s, a, t in edges:
        for v in (s, t):
            if v not in ids:
                ids[v] = folder.vertex()
        folder.edge(ids[s], a, ids[t])
    return folder.core(ids[base])


def as_core(H) -> CoreGraph:
    return H if isinstance(H, CoreGraph) else core_graph(H)


def membership(H, g: GroupWord | str) -> bool:
    return GroupWord.of(g) in as_core(H)


def rank(H) -> int:
    return as_core(H).rank


def canonical_form(H) -> tuple:
    return as_core(H).encoding


def subgroup_leq(H1, H2) -> bool:
    H1, H2 = as_core(H1), as_core(H2)
    return all(g in H2 for g in H1.basis)


def subgroup_equal(H1, H2) -> bool:
    return as_core(H1).encoding == as_core(H2).encoding


def is_proper(H1, H2) -> bool:
    """Whether ``H1`` is a proper subgroup of ``H2``."""
    return subgroup_leq(H1, H2) and not subgroup_equal(H1, H2)


def is_full(H, alphabet: Iterable[str]) -> bool:
    """Whether ``H`` is the whole free group on ``alphabet``."""
    H = as_core(H)
    return H.size == 1 and H.letters == set(alphabet)


def _adjacency(edges):
    out: dict[int, dict[str, int]] = {}
    inn: dict[int, dict[str, int]] = {}
    for s, a, t in edges:
        out.setdefault(s, {})[a] = t
        inn.setdefault(t, {})[a] = s
    return out, inn


def is_conjugate(H1, H2) -> bool:
    """Conjugacy of subgroups via isomorphism of cyclic cores."""
    n1, e1 = as_core(H1).cyclic_core()
    n2, e2 = as_core(H2).cyclic_core()
    if (n1, len(e1)) != (n2, len(e2)):
        return False
    if not e1:
        return True
    out1, inn1 = _adjacency(e1)
    out2, inn2 = _adjacency(e2)
    v0 = e1[0][0]
    targets = sorted(set(out2) | set(inn2))
    for w0 in targets:
        mapping = {v0: w0}
        used = {w0}
        queue = deque([v0])
        ok = True
        while queue and ok:
            v = queue.popleft()
            w = mapping[v]
            for side1, side2 in ((out1, out2), (inn1, inn2)):
                nb1, nb2 = side1.get(v, {}), side2.get(w, {})
                if set(nb1) != set(nb2):
                    ok = False
                    break
                for a, v2 in nb1.items():
                    w2 = nb2[a]
                    if v2 in mapping:
                        if mapping[v2] != w2:
                            ok = False
                            break
                    elif w2 in used:
                        ok = False
                        break
                    else:
                        mapping[v2] = w2
                        used.add(w2)
                        queue.append(v2)
                if not ok:
                    break
        if ok and len(mapping) == n1:
            return True
    return False


def morphism_image(phi, H) -> CoreGraph:
    """Core graph of ``⟨φ(gens)⟩`` with gens the spanning-tree basis of ``H``."""
    phi = _as_morphism(phi)
    gens = as_core(H).basis if isinstance(H, CoreGraph) else _gens(H)
    return core_graph(phi(g) for g in gens)


def injective_on(phi, H) -> bool:
    H = as_core(H)
    return H.rank == morphism_image(phi, H).rank


# ---------------------------------------------------------------------------
# Abelianization and lattices


def abelianize(g: GroupWord | str, alphabet: Sequence[str]) -> tuple[int, ...]:
    pos = {a: i for i, a in enumerate(alphabet)}
    v = [0] * len(alphabet)
    for a, e in GroupWord.of(g).letters:
        v[pos[a]] += e
    return tuple(v)


def abelianize_mod(g: GroupWord | str, k: int, alphabet: Sequence[str]) -> tuple[int, ...]:
    if k < 1:
        raise ValueError("modulus must be positive")
    return tuple(x % k for x in abelianize(g, alphabet))


def hermite_normal_form(rows: Iterable[Sequence[int]], d: int) -> tuple[tuple[int, ...], ...]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Pivots are positive and strictly increase in column; entries above a pivot
    lie in ``[0, pivot)``.  Zero rows are dropped.
    """
    mat = [list(r) for r in rows if any(r)]
    for r in mat:
        if len(r) != d:
            raise ValueError("vector of wrong dimension")
    basis: list[list[int]] = []
    col = 0
    while mat and col < d:
        live = [r for r in mat if r[col] != 0]
        rest = [r for r in mat if r[col] == 0]
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            pivot = live[0]
            nxt = [pivot]
            for r in live[1:]:
                q = r[col] // pivot[col]
                r = [x - q * y for x, y in zip(r, pivot)]
                if r[col] != 0:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            live = nxt
        if live:
            pivot = live[0]
            if pivot[col] < 0:
                pivot = [-x for x in pivot]
            basis.append(pivot)
        mat = rest
        col += 1
    for i, row in enumerate(basis):
        c = next(j for j, x in enumerate(row) if x)
        for k in range(i):
            q = basis[k][c] // row[c]
            if q:
                basis[k] = [x - q * y for x, y in zip(basis[k], row)]
    return tuple(tuple(r) for r in basis)


def smith_diagonal(rows: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal of the Smith normal form (``d1 | d2 | ...``)."""
    a = [list(r) for r in rows]
    if not a:
        return []
    m, n = len(a), len(a[0])
    diag = []
    t = 0
    while t < min(m, n):
        nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        a[t], a[i] = a[i], a[t]
        for r in a:
            r[t], r[j] = r[j], r[t]
        while True:
            changed = False
            p = a[t][t]
            for i in range(t + 1, m):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    changed = True
            for j in range(t + 1, n):
                q = a[t][j] // p
                if q:
                    for r in a:
                        r[j] -= q * r[t]
                if a[t][j]:
                    changed = True
            if not changed:
                bad = [(i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p]
                if not bad:
                    break
                i, _ = bad[0]
                a[t] = [x + y for x, y in zip(a[t], a[i])]
                continue
            nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j] and (i == t or j == t)]
            _, i, j = min(nz)
            a[t], a[i] = a[i], a[t]
            for r in a:
                r[t], r[j] = r[j], r[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


@dataclass(frozen=True)
class AbelianLattice:
    """Sublattice of ``Z^d`` stored by its Hermite normal form basis."""

    dim: int
    hnf: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.hnf)

    @cached_property
    def elementary_divisors(self) -> tuple[int, ...]:
        return tuple(smith_diagonal(self.hnf))

    @property
    def is_full(self) -> bool:
        return self.rank == self.dim and all(x == 1 for x in self.elementary_divisors)

    @property
    def index(self) -> int | None:
        """``[Z^d : L]`` when finite."""
        if self.rank != self.dim:
            return None
        out = 1
        for x in self.elementary_divisors:
            out *= x
        return out

    def __contains__(self, v: Sequence[int]) -> bool:
        return hermite_normal_form(list(self.hnf) + [list(v)], self.dim) == self.hnf


def lattice(vectors: Iterable[Sequence[int]], dim: int | None = None) -> AbelianLattice:
    vecs = [tuple(v) for v in vectors]
    if dim is None:
        if not vecs:
            raise ValueError("dimension needed for an empty generating set")
        dim = len(vecs[0])
    return AbelianLattice(dim, hermite_normal_form(vecs, dim))


def lattice_full(L: AbelianLattice) -> bool:
    return L.is_full


def lattice_equal(L1: AbelianLattice, L2: AbelianLattice) -> bool:
    return L1.dim == L2.dim and L1.hnf == L2.hnf


def lattice_image(M: Sequence[Sequence[int]], L: AbelianLattice) -> AbelianLattice:
    """Image of ``L`` under the integer matrix ``M`` acting on column vectors."""
    rows = [tuple(sum(m * x for m, x in zip(row, b)) for row in M) for b in L.hnf]
    return lattice(rows, len(M))


def elementary_divisors(L: AbelianLattice) -> tuple[int, ...]:
    return L.elementary_divisors


def determinant(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = [list(r) for r in M]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]
