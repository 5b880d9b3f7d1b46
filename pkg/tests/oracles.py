"""Independent brute-force references used to check the library.

Nothing here imports the code paths it is checking: languages and return
words are read off long fixed-point prefixes, membership uses a naive
quadratic folding, and lattice fullness uses minors.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

TRIBONACCI = "a->ab;b->ac;c->a"
EX_DERIVATION = "a->aab;b->acb;c->ba"  # used by the derivation, S3 and bifix examples
PROP_COUNTER = "a->baa;b->ca;c->bad;d->acd"
THUE_MORSE = "0->01;1->10"
FIBONACCI = "a->ab;b->a"
S3_MORPHISM = "perm: a->(1 2 3); b->(1 2); c->(1 2 3)"

# shifts paired with finite targets, used wherever finite routes are compared
MORPHISM_PAIRS = [
    (EX_DERIVATION, S3_MORPHISM),
    (TRIBONACCI, "perm: a->(1 2 3); b->(1 2); c->(1 3)"),
    (TRIBONACCI, "mod 2: a->[1,0,0]; b->[0,1,0]; c->[0,0,1]"),
    (THUE_MORSE, "mod 2: 0->[1,0]; 1->[0,1]"),
    (FIBONACCI, "mod 3: a->[1,0]; b->[0,1]"),
    (PROP_COUNTER, "perm: a->(1 2); b->(1 2 3); c->(2 3); d->(1 3)"),
]


def rules(text: str) -> dict[str, str]:
    out = {}
    for chunk in text.split(";"):
        a, w = chunk.split("->")
        out[a.strip()] = w.strip()
    return out


@lru_cache(maxsize=None)
def long_prefix(text: str, n: int = 20000) -> str:
    """Prefix of a fixed point of some power of the substitution, by naive iteration."""
    r = rules(text)
    for a in r:
        for k in range(1, len(r) + 1):
            w = a
            for _ in range(k):
                w = "".join(r[c] for c in w)
            if w[0] == a and len(w) > 1:
                x = a
                while len(x) < n:
                    for _ in range(k):
                        x = "".join(r[c] for c in x)
                return x[:n]
    raise ValueError("no growing seed")


def brute_language(text: str, n: int, length: int = 20000) -> set[str]:
    x = long_prefix(text, length)
    return {x[i:i + n] for i in range(len(x) - n + 1)}


def brute_returns(text: str, u: str, length: int = 20000) -> set[str]:
    x = long_prefix(text, length)
    pos = [i for i in range(len(x) - len(u) + 1) if x.startswith(u, i)]
    return {x[s:t] for s, t in zip(pos, pos[1:])}


def free_reduce(letters) -> tuple:
    out = []
    for a, e in letters:
        if out and out[-1] == (a, -e):
            out.pop()
        else:
            out.append((a, e))
    return tuple(out)


def free_inverse(w: tuple) -> tuple:
    return tuple((a, -e) for a, e in reversed(w))


def word(text: str) -> tuple:
    """Parse "ab'c" (apostrophe marks an inverse) into signed letters."""
    out = []
    for ch in text:
        if ch == "'":
            a, e = out.pop()
            out.append((a, -e))
        else:
            out.append((ch, 1))
    return free_reduce(out)


def products(gens, max_factors: int) -> set[tuple]:
    """All reduced products of at most ``max_factors`` generators and inverses."""
    alphabet = [word(g) if isinstance(g, str) else g for g in gens]
    alphabet = alphabet + [free_inverse(g) for g in alphabet]
    out = {()}
    layer = {()}
    for _ in range(max_factors):
        layer = {free_reduce(w + g) for w in layer for g in alphabet}
        out |= layer
    return out


def naive_member(gens, g) -> bool:
    """Membership via a plain Stallings folding with no union-find."""
    gens = [word(s) if isinstance(s, str) else s for s in gens]
    g = word(g) if isinstance(g, str) else g
    edges = set()
    count = 1
    for w in gens:
        if not w:
            continue
        prev = 0
        for i, (a, e) in enumerate(w):
            nxt = 0 if i == len(w) - 1 else count
            if nxt:
                count += 1
            edges.add((prev, a, nxt) if e == 1 else (nxt, a, prev))
            prev = nxt
    changed = True
    while changed:
        changed = False
        for (s1, a1, t1), (s2, a2, t2) in itertools.combinations(sorted(edges), 2):
            if a1 != a2:
                continue
            if s1 == s2 and t1 != t2:
                keep, drop = min(t1, t2), max(t1, t2)
            elif t1 == t2 and s1 != s2:
                keep, drop = min(s1, s2), max(s1, s2)
            else:
                continue
            edges = {(keep if s == drop else s, a, keep if t == drop else t) for s, a, t in edges}
            changed = True
            break
    v = 0
    for a, e in g:
        step = [t for s, b, t in edges if s == v and b == a] if e == 1 else [s for s, b, t in edges if t == v and b == a]
        if not step:
            return False
        v = step[0]
    return v == 0


def perm_compose(f: tuple, g: tuple) -> tuple:
    """``f ∘ g`` on 0-based image tuples."""
    return tuple(f[i] for i in g)


def lattice_full_by_minors(vectors, d: int) -> bool:
    """Full iff the gcd of the maximal minors of the generator matrix is 1."""
    vecs = [list(v) for v in vectors]
    if len(vecs) < d:
        return False
    g = 0
    for rows in itertools.combinations(vecs, d):
        g = math.gcd(g, _det(rows))
        if g == 1:
            return True
    return g == 1


def _det(m) -> int:
    m = [list(r) for r in m]
    n = len(m)
    if n == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * _det([r[:j] + r[j + 1:] for r in m[1:]]) for j in range(n))
