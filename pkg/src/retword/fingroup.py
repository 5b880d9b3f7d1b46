"""Finite targets for morphisms from free groups: permutations and vectors mod k.

Permutation products compose right to left, ``(f * g)(i) = f(g(i))``, so the
image of a word ``a1 a2 ... an`` is ``φ(a1) ∘ φ(a2) ∘ ... ∘ φ(an)``.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Union

from .freegroup import GroupWord

DEFAULT_CAP = 10**6


class SizeExceeded(RuntimeError):
    pass


class MorphismSyntaxError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Perm:
    """Permutation of ``{1..n}`` stored as the 0-based image tuple."""

    images: tuple[int, ...]

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int) -> "Perm":
        img = list(range(n))
        seen: set[int] = set()
        for cyc in cycles:
            for p in cyc:
                if p < 1 or p > n or p in seen:
                    raise MorphismSyntaxError(f"cycles must be disjoint and within 1..{n}")
                seen.add(p)
            for i, p in enumerate(cyc):
                img[p - 1] = cyc[(i + 1) % len(cyc)] - 1
        return cls(tuple(img))

    def __mul__(self, other: "Perm") -> "Perm":
        return Perm(tuple(self.images[j] for j in other.images))

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for i in range(len(self.images)):
            if i in seen or self.images[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = self.images[j]
            out.append(tuple(p + 1 for p in cyc))
        return out

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "id"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


@dataclass(frozen=True, order=True)
class ModVec:
    """Element of ``(Z/kZ)^d``."""

    modulus: int
    entries: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(x % self.modulus for x in self.entries))

    @classmethod
    def identity(cls, k: int, d: int) -> "ModVec":
        return cls(k, (0,) * d)

    def __mul__(self, other: "ModVec") -> "ModVec":
        return ModVec(self.modulus, tuple(x + y for x, y in zip(self.entries, other.entries)))

    def inverse(self) -> "ModVec":
        return ModVec(self.modulus, tuple(-x for x in self.entries))

    def is_identity(self) -> bool:
        return not any(self.entries)

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.entries)) + "]"


FiniteElement = Union[Perm, ModVec]


class FiniteMorphism:
    """Assignment of finite-group elements to letters, extended to group words."""

    def __init__(self, images: Mapping[str, FiniteElement]):
        if not images:
            raise MorphismSyntaxError("empty morphism")
        self.images = dict(images)
        kinds = {type(g) for g in self.images.values()}
        if len(kinds) != 1:
            raise MorphismSyntaxError("mixed backends")
        first = next(iter(self.images.values()))
        if isinstance(first, Perm):
            self.backend = "perm"
            degrees = {len(g.images) for g in self.images.values()}
            if len(degrees) != 1:
                raise MorphismSyntaxError("permutations of different degrees")
            self.one: FiniteElement = Perm.identity(degrees.pop())
        else:
            self.backend = "mod"
            shapes = {(g.modulus, len(g.entries)) for g in self.images.values()}
            if len(shapes) != 1:
                raise MorphismSyntaxError("vectors of different shapes")
            k, d = shapes.pop()
            self.one = ModVec.identity(k, d)
        self._inv = {a: g.inverse() for a, g in self.images.items()}

    @property
    def domain(self) -> tuple[str, ...]:
        return tuple(self.images)

    def __call__(self, g) -> FiniteElement:
        return evaluate(self, g)

    @cached_property
    def group(self) -> frozenset:
        return closure(self.images.values(), one=self.one)

    def describe(self) -> str:
        body = "; ".join(f"{a}->{g}" for a, g in self.images.items())
        if self.backend == "perm":
            return "perm: " + body
        return f"mod {self.one.modulus}: " + body


def evaluate(phi: FiniteMorphism, g) -> FiniteElement:
    out = phi.one
    for a, e in GroupWord.of(g).letters:
        out = out * (phi.images[a] if e == 1 else phi._inv[a])
    return out


def closure(elements: Iterable[FiniteElement], one: FiniteElement | None = None, cap: int = DEFAULT_CAP) -> frozenset:
    """Subgroup generated by ``elements`` (finite groups: the generated monoid)."""
    gens = list(dict.fromkeys(elements))
    if one is None:
        if not gens:
            raise ValueError("identity needed for an empty generating set")
        g0 = gens[0]
        one = Perm.identity(len(g0.images)) if isinstance(g0, Perm) else ModVec.identity(g0.modulus, len(g0.entries))
    seen = {one}
    queue = deque([one])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = x * g
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise SizeExceeded(f"closure exceeds {cap} elements")
                queue.append(y)
    return frozenset(seen)


def is_full(sub: Iterable[FiniteElement], phi: FiniteMorphism) -> bool:
    return closure(sub, one=phi.one) == phi.group


def conjugate_subgroups(S1: Iterable[FiniteElement], S2: Iterable[FiniteElement], G: Iterable[FiniteElement]) -> bool:
    """Whether some ``g ∈ G`` has ``g^{-1} S1 g = S2`` (subgroups given by generators or elements)."""
    G = list(G)
    one = G[0] * G[0].inverse()
    H1 = closure(S1, one=one)
    H2 = closure(S2, one=one)
    if len(H1) != len(H2):
        return False
    group = closure(G, one=one)
    for g in group:
        gi = g.inverse()
        if all(gi * h * g in H2 for h in H1):
            return True
    return False


def subgroup_label(H: Iterable[FiniteElement]) -> list[str]:
    return sorted(str(h) for h in H)


_RULE = re.compile(r"^(\S)->(.*)$")


def parse_morphism(text: str) -> FiniteMorphism:
    """Parse ``"perm: a->(1 2 3); b->(1 2)"`` or ``"mod 2: a->[1,0]; b->[0,1]"``."""
    head, sep, body = text.partition(":")
    if not sep:
        raise MorphismSyntaxError("missing backend prefix 'perm:' or 'mod k:'")
    head = head.strip()
    rules: list[tuple[str, str]] = []
    for chunk in body.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        m = _RULE.match(re.sub(r"\s*->\s*", "->", chunk, count=1))
        if not m:
            raise MorphismSyntaxError(f"malformed rule {chunk!r}")
        rules.append((m.group(1), m.group(2).strip()))
    if not rules:
        raise MorphismSyntaxError("no rules")
    if len({a for a, _ in rules}) != len(rules):
        raise MorphismSyntaxError("duplicate rule")
    if head == "perm":
        parsed = {}
        degree = 1
        for a, spec in rules:
            cycles = []
            if spec not in ("id", "()", ""):
                for cyc in re.findall(r"\(([^)]*)\)", spec):
                    pts = [int(p) for p in cyc.replace(",", " ").split()]
                    if pts:
                        cycles.append(pts)
                        degree = max(degree, max(pts))
            parsed[a] = cycles
        return FiniteMorphism({a: Perm.from_cycles(c, degree) for a, c in parsed.items()})
    m = re.fullmatch(r"mod\s*(\d+)", head)
    if m:
        k = int(m.group(1))
        if k < 1:
            raise MorphismSyntaxError("modulus must be positive")
        images = {}
        for a, spec in rules:
            vec = spec.strip().strip("[]()")
            images[a] = ModVec(k, tuple(int(x) for x in vec.replace(",", " ").split()))
        return FiniteMorphism(images)
    raise MorphismSyntaxError(f"unknown backend {head!r}")


def abelianization_morphism(alphabet: Sequence[str], k: int) -> FiniteMorphism:
    """``ab_k``: letter ``i`` goes to the ``i``-th basis vector of ``(Z/kZ)^d``."""
    d = len(alphabet)
    return FiniteMorphism({a: ModVec(k, tuple(int(i == j) for j in range(d))) for i, a in enumerate(alphabet)})


def trivial_morphism(alphabet: Sequence[str]) -> FiniteMorphism:
    return FiniteMorphism({a: Perm.identity(1) for a in alphabet})
