"""Finite words, substitutions and exact languages of primitive substitutive shifts.

Words are plain Python strings whose characters are letters.  Derived
alphabets (return alphabets) use the symbols produced by :func:`derived_letter`.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Iterable, Mapping

DERIVED_SYMBOLS = "123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ"


class SubstitutionError(ValueError):
    pass


class EmptyImage(SubstitutionError):
    pass


class DuplicateRule(SubstitutionError):
    pass


class UnknownLetter(SubstitutionError):
    pass


class NotPrimitive(SubstitutionError):
    pass


class SeedNotFound(SubstitutionError):
    pass


def derived_letter(i: int) -> str:
    """Symbol of the ``i``-th letter (1-based) of a return alphabet."""
    if i < 1:
        raise ValueError("return letters are numbered from 1")
    if i <= len(DERIVED_SYMBOLS):
        return DERIVED_SYMBOLS[i - 1]
    # past 35 letters fall back to the private use area
    return chr(0xE000 + i)


def derived_alphabet(n: int) -> tuple[str, ...]:
    return tuple(derived_letter(i) for i in range(1, n + 1))


def derived_index(letter: str) -> int:
    pos = DERIVED_SYMBOLS.find(letter)
    if pos >= 0:
        return pos + 1
    return ord(letter) - 0xE000


def factors(w: str, n: int) -> set[str]:
    """All length-``n`` factors of ``w``."""
    if n == 0:
        return {""}
    return {w[i : i + n] for i in range(len(w) - n + 1)}


@dataclass(frozen=True)
class Substitution:
    """A non-erasing monoid morphism given by one image per domain letter.

    ``domain`` fixes the letter order used for every canonical ordering.
    """

    domain: tuple[str, ...]
    images: tuple[str, ...]
    codomain: tuple[str, ...] = ()
    _table: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if len(self.domain) != len(self.images):
            raise SubstitutionError("one image per domain letter is required")
        if len(set(self.domain)) != len(self.domain):
            raise DuplicateRule("duplicate letter in domain")
        for a, img in zip(self.domain, self.images):
            if not img:
                raise EmptyImage(f"empty image for letter {a!r}")
        if not self.codomain:
            seen: dict[str, None] = {}
            for img in self.images:
                for c in img:
                    seen.setdefault(c, None)
            ordered = [a for a in self.domain if a in seen]
            ordered += [c for c in seen if c not in self.domain]
            object.__setattr__(self, "codomain", tuple(ordered))
        else:
            extra = {c for img in self.images for c in img} - set(self.codomain)
            if extra:
                raise UnknownLetter(f"image letters {sorted(extra)} outside codomain")
        object.__setattr__(self, "_table", dict(zip(self.domain, self.images)))

    @classmethod
    def from_dict(cls, rules: Mapping[str, str], codomain: Iterable[str] = ()) -> "Substitution":
        return cls(tuple(rules), tuple(rules.values()), tuple(codomain))

    def __getitem__(self, letter: str) -> str:
        return self._table[letter]

    def __call__(self, w: str) -> str:
        return apply(self, w)

    def __iter__(self):
        return iter(zip(self.domain, self.images))

    def as_dict(self) -> dict[str, str]:
        return dict(self._table)

    @property
    def is_endomorphism(self) -> bool:
        return set(self.codomain) <= set(self.domain)

    @property
    def max_length(self) -> int:
        """``|σ|``, the longest image length."""
        return max(len(img) for img in self.images)

    @property
    def min_length(self) -> int:
        """``⟨σ⟩``, the shortest image length."""
        return min(len(img) for img in self.images)

    def compose(self, inner: "Substitution") -> "Substitution":
        """The substitution ``self ∘ inner``."""
        return Substitution(inner.domain, tuple(apply(self, img) for img in inner.images), self.codomain)

    def power(self, k: int) -> "Substitution":
        if k < 0:
            raise ValueError("negative power")
        result = Substitution(self.domain, self.domain, self.domain)
        for _ in range(k):
            result = self.compose(result)
        return result

    def format(self) -> str:
        return "; ".join(f"{a}->{img}" for a, img in self)

    def __str__(self) -> str:
        return self.format()


def parse_substitution(text: str, closed: bool = True) -> Substitution:
    """Parse ``"a->ab; b->ac; c->a"``.

    Rules are separated by ``;`` or newlines and whitespace is ignored.  With
    ``closed`` every image letter must itself have a rule.
    """
    domain: list[str] = []
    images: list[str] = []
    for chunk in text.replace("\n", ";").split(";"):
        chunk = "".join(chunk.split())
        if not chunk:
            continue
        if "->" not in chunk:
            raise SubstitutionError(f"malformed rule {chunk!r}")
        lhs, rhs = chunk.split("->", 1)
        if len(lhs) != 1:
            raise SubstitutionError(f"rule left-hand side must be one letter: {lhs!r}")
        if lhs in domain:
            raise DuplicateRule(f"duplicate rule for {lhs!r}")
        if not rhs:
            raise EmptyImage(f"empty image for letter {lhs!r}")
        domain.append(lhs)
        images.append(rhs)
    if not domain:
        raise SubstitutionError("no rules")
    if closed:
        missing = sorted({c for img in images for c in img} - set(domain))
        if missing:
            raise UnknownLetter(f"letters without a rule: {missing}")
        return Substitution(tuple(domain), tuple(images), tuple(domain))
    return Substitution(tuple(domain), tuple(images))


def apply(sigma: Substitution, w: str) -> str:
    table = sigma._table
    try:
        return "".join([table[c] for c in w])
    except KeyError as exc:
        raise UnknownLetter(f"letter {exc.args[0]!r} outside the domain") from None


def identity(alphabet: Iterable[str]) -> Substitution:
    letters = tuple(alphabet)
    return Substitution(letters, letters, letters)


def incidence(sigma: Substitution) -> dict[str, set[str]]:
    return {a: set(img) for a, img in sigma}


def is_primitive(sigma: Substitution) -> bool:
    """Whether some power of ``sigma`` has every letter in every image.

    Powers are scanned up to Wielandt's bound ``(d-1)^2 + 1``.
    """
    if not sigma.is_endomorphism or set(sigma.codomain) != set(sigma.domain):
        return False
    d = len(sigma.domain)
    letters = set(sigma.domain)
    step = incidence(sigma)
    reach = {a: set(step[a]) for a in sigma.domain}
    for _ in range((d - 1) ** 2 + 1):
        if all(r == letters for r in reach.values()):
            return True
        reach = {a: set().union(*(step[b] for b in reach[a])) for a in sigma.domain}
    return False


def is_prefix_code(words: Iterable[str]) -> bool:
    ws = list(words)
    if len(set(ws)) != len(ws):
        return False
    return not any(u != v and v.startswith(u) for u in ws for v in ws)


def is_bifix(sigma: Substitution) -> bool:
    imgs = list(sigma.images)
    return is_prefix_code(imgs) and is_prefix_code(w[::-1] for w in imgs)


def is_constant_length(sigma: Substitution) -> int | None:
    lengths = {len(img) for img in sigma.images}
    return lengths.pop() if len(lengths) == 1 else None


def find_seed_letter(sigma: Substitution) -> tuple[str, int]:
    """Smallest ``k <= #A`` and first letter ``a`` with ``σ^k(a) ∈ aA^+``."""
    for k in range(1, len(sigma.domain) + 1):
        sk = sigma.power(k)
        for a in sigma.domain:
            img = sk[a]
            if img[0] == a and len(img) >= 2:
                return a, k
    raise SeedNotFound("no growing letter is a prefix of its own iterated image")


def fixed_point_prefix(sigma: Substitution, a: str, k: int, n: int) -> str:
    """Length-``n`` prefix of ``lim σ^{km}(a)``."""
    sk = sigma.power(k)
    w = a
    if n <= 1:
        return w[:n]
    img = sk[a]
    if not (img.startswith(a) and len(img) >= 2):
        raise SeedNotFound(f"{a!r} does not seed a growing fixed point of σ^{k}")
    while len(w) < n:
        w = apply(sk, w)
    return w[:n]


@dataclass(frozen=True)
class Periodicity:
    """Outcome of the bounded Morse–Hedlund scan."""

    periodic: bool
    stall: int | None  # n with p(n+1) = p(n), when found
    bound: int

    @property
    def status(self) -> str:
        return "periodic" if self.periodic else "aperiodic up to bound"


class LanguageOracle:
    """Exact factor sets ``L_n(X)`` of a minimal shift, memoized by length."""

    alphabet: tuple[str, ...] = ()

    def __init__(self):
        self._cache: dict[int, frozenset[str]] = {}
        self._lock = threading.Lock()

    def language(self, n: int) -> frozenset[str]:
        if n < 0:
            raise ValueError("negative length")
        cached = self._cache.get(n)
        if cached is not None:
            return cached
        with self._lock:
            if n not in self._cache:
                self._cache[n] = frozenset(self._compute(n)) if n else frozenset({""})
            return self._cache[n]

    def _compute(self, n: int) -> set[str]:
        raise NotImplementedError

    def __contains__(self, w: str) -> bool:
        return w in self.language(len(w))

    def point_prefix(self, n: int) -> str:
        """Prefix of a canonical one-sided point whose language is ``L(X)``."""
        raise NotImplementedError

    def complexity(self, n: int) -> int:
        return len(self.language(n))

    def default_period_bound(self) -> int:
        return 64

    def periodicity(self, bound: int | None = None) -> Periodicity:
        if bound is None:
            bound = self.default_period_bound()
        prev = self.complexity(0)
        for n in range(0, bound + 1):
            nxt = self.complexity(n + 1)
            if nxt == prev:
                return Periodicity(True, n, bound)
            prev = nxt
        return Periodicity(False, None, bound)

    def is_periodic(self, bound: int | None = None) -> bool:
        return self.periodicity(bound).periodic


class SubstitutiveOracle(LanguageOracle):
    """Language of the shift generated by a primitive ``sigma``, optionally
    coded by a letter-to-letter ``cover``.

    ``L_2`` is obtained as the least set containing the 2-factors of every
    ``σ(c)`` and closed under taking 2-factors of ``σ(ab)``; for ``n >= 2`` every
    word of ``L_n`` sits inside ``σ^j(ab)`` for some ``ab ∈ L_2`` once
    ``⟨σ^j⟩ >= n - 1``.
    """

    def __init__(self, sigma: Substitution, cover: Substitution | None = None):
        super().__init__()
        if not is_primitive(sigma):
            raise NotPrimitive(f"{sigma} is not primitive")
        if cover is not None:
            if set(cover.domain) != set(sigma.domain) or cover.max_length != 1:
                raise SubstitutionError("cover must be letter-to-letter on the domain of sigma")
        self.sigma = sigma
        self.cover = cover
        self.seed = find_seed_letter(sigma)
        self.base_alphabet = sigma.domain
        if cover is None:
            self.alphabet = sigma.domain
        else:
            self.alphabet = tuple(dict.fromkeys(cover.images))
        self._powers: list[Substitution] = [identity(sigma.domain)]
        self._l2 = self._two_factors()
        self._point = ""

    def _power(self, j: int) -> Substitution:
        while len(self._powers) <= j:
            self._powers.append(self.sigma.compose(self._powers[-1]))
        return self._powers[j]

    def _two_factors(self) -> frozenset[str]:
        found: set[str] = set()
        for img in self.sigma.images:
            found |= factors(img, 2)
        todo = list(found)
        while todo:
            w = todo.pop()
            for f in factors(apply(self.sigma, w), 2):
                if f not in found:
                    found.add(f)
                    todo.append(f)
        return frozenset(found)

    def certification_power(self, n: int) -> int:
        """Least ``j`` with ``⟨σ^j⟩ >= n - 1``."""
        j = 0
        while self._power(j).min_length < n - 1:
            j += 1
        return j

    def base_language(self, n: int, power: int | None = None) -> set[str]:
        """``L_n`` of the uncovered shift, read inside ``σ^power(ab)``."""
        if n == 0:
            return {""}
        if n == 1:
            return set(self.sigma.domain)
        j = self.certification_power(n) if power is None else power
        sj = self._power(j)
        out: set[str] = set()
        for ab in self._l2:
            out |= factors(apply(sj, ab), n)
        return out

    def _compute(self, n: int) -> set[str]:
        words = self.base_language(n)
        if self.cover is None:
            return words
        return {apply(self.cover, w) for w in words}

    def point_prefix(self, n: int) -> str:
        if len(self._point) < n:
            a, k = self.seed
            self._point = fixed_point_prefix(self.sigma, a, k, max(n, 2 * len(self._point)))
        w = self._point[:n]
        return w if self.cover is None else apply(self.cover, w)

    def default_period_bound(self) -> int:
        return sum(len(img) for img in self.sigma.images) ** 2

    def __repr__(self) -> str:
        cover = "" if self.cover is None else f", cover={self.cover}"
        return f"SubstitutiveOracle({self.sigma}{cover})"


class ImageOracle(LanguageOracle):
    """Language of the shift closure ``σ[X]`` of the image of a minimal shift."""

    def __init__(self, sigma: Substitution, base: LanguageOracle):
        super().__init__()
        if not set(base.alphabet) <= set(sigma.domain):
            raise SubstitutionError("substitution must be defined on the base alphabet")
        self.sigma = sigma
        self.base = base
        used = [c for a in base.alphabet for c in sigma[a]]
        self.alphabet = tuple(dict.fromkeys(c for c in sigma.codomain if c in used))

    def _compute(self, n: int) -> set[str]:
        m = math.ceil(n / self.sigma.min_length) + 2
        out: set[str] = set()
        for w in self.base.language(m):
            out |= factors(apply(self.sigma, w), n)
        return out

    def point_prefix(self, n: int) -> str:
        w = apply(self.sigma, self.base.point_prefix(n))
        return w[:n]

    def default_period_bound(self) -> int:
        return self.base.default_period_bound() * self.sigma.max_length

    def __repr__(self) -> str:
        return f"ImageOracle({self.sigma}, {self.base!r})"


def language(oracle: LanguageOracle, n: int) -> frozenset[str]:
    return oracle.language(n)


def complexity(oracle: LanguageOracle, n: int) -> int:
    return oracle.complexity(n)


def is_periodic(oracle: LanguageOracle, bound: int | None = None) -> bool:
    return oracle.is_periodic(bound)


def image_shift_oracle(sigma: Substitution, oracle: LanguageOracle) -> ImageOracle:
    return ImageOracle(sigma, oracle)


def oracle_for(sigma: Substitution | str, cover: Substitution | str | None = None) -> SubstitutiveOracle:
    if isinstance(sigma, str):
        sigma = parse_substitution(sigma)
    if isinstance(cover, str):
        cover = parse_substitution(cover, closed=False)
    return SubstitutiveOracle(sigma, cover)
