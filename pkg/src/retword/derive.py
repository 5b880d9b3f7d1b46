"""Derivation of purely substitutive shifts with respect to prefixes of a fixed point.

For a prefix ``u`` of the canonical fixed point ``x`` the return words are
numbered by first occurrence in ``x`` (this is the canonical derivating
substitution ``θ_{x,u}``).  The return substitution ``σ_u`` cuts
``σ(θ(i)) u`` at the occurrences of ``u``.  When the seed of the fixed point
needs a power ``σ^k`` the derivation uses ``σ^k``, which generates the same
shift.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .shift import NotAFactor, return_words
from .words import (
    LanguageOracle,
    Substitution,
    SubstitutiveOracle,
    apply,
    derived_alphabet,
    derived_letter,
)

DEFAULT_CHAIN_CAP = 64
MAX_PREFIX = 1 << 20


class NotAPrefix(ValueError):
    pass


class DecompositionError(RuntimeError):
    pass


class ChainCapExceeded(RuntimeError):
    pass


class NotPurelySubstitutive(ValueError):
    pass


def _require_pure(oracle) -> SubstitutiveOracle:
    if not isinstance(oracle, SubstitutiveOracle) or oracle.cover is not None:
        raise NotPurelySubstitutive("derivation needs a shift generated by a substitution alone")
    return oracle


def generating_power(oracle: SubstitutiveOracle) -> Substitution:
    """``σ^k`` where ``(a, k)`` seeds the canonical fixed point."""
    return oracle.sigma.power(oracle.seed[1])


@dataclass(frozen=True)
class DerivationStep:
    """Derivating substitution ``θ`` and return substitution for a prefix."""

    prefix: str
    theta: Substitution
    sigma: Substitution

    @property
    def alphabet(self) -> tuple[str, ...]:
        return self.theta.domain


def _point_with_prefix(oracle: SubstitutiveOracle, u: str, n: int) -> str:
    x = oracle.point_prefix(max(n, len(u)))
    if not x.startswith(u):
        raise NotAPrefix(f"{u!r} is not a prefix of the fixed point")
    return x


def ordered_returns(oracle: SubstitutiveOracle, u: str) -> tuple[str, ...]:
    """Return words to the prefix ``u`` in order of first occurrence in ``x``."""
    _require_pure(oracle)
    if len(u) > MAX_PREFIX:
        raise NotAPrefix(f"{u!r} exceeds the materialized prefix")
    rets = set(return_words(oracle, u)) if u else set(oracle.alphabet)
    n = 4 * (len(u) + max(len(r) for r in rets))
    while True:
        x = _point_with_prefix(oracle, u, n)
        order: dict[str, None] = {}
        if u:
            positions = []
            p = x.find(u)
            while p != -1:
                positions.append(p)
                p = x.find(u, p + 1)
            for s, t in zip(positions, positions[1:]):
                order.setdefault(x[s:t], None)
        else:
            order = dict.fromkeys(x)
        if len(order) == len(rets):
            if set(order) != rets:
                raise DecompositionError("decoded returns disagree with the certified return set")
            return tuple(order)
        if n > MAX_PREFIX:
            raise NotAPrefix("return words do not all appear in the materialized prefix")
        n *= 2


def decompose(word: str, u: str, index: dict[str, str]) -> str:
    """Code ``word`` over the return words of ``u``, cutting ``word·u`` at occurrences of ``u``."""
    if not u:
        try:
            return "".join(index[c] for c in word)
        except KeyError as exc:
            raise DecompositionError(f"letter {exc.args[0]!r} is not a return word") from None
    full = word + u
    if not full.startswith(u):
        raise DecompositionError(f"{full!r} does not start with {u!r}")
    positions = []
    p = full.find(u)
    while p != -1:
        positions.append(p)
        p = full.find(u, p + 1)
    if positions[-1] != len(word):
        raise DecompositionError("last occurrence of u is not at the end")
    out = []
    for s, t in zip(positions, positions[1:]):
        r = full[s:t]
        if r not in index:
            raise DecompositionError(f"{r!r} is not a return word to {u!r}")
        out.append(index[r])
    return "".join(out)


def derivating_substitution(oracle: SubstitutiveOracle, u: str) -> DerivationStep:
    """``θ_{x,u}`` and the return substitution ``σ_u`` for a prefix ``u`` of ``x``."""
    rets = ordered_returns(oracle, u)
    letters = derived_alphabet(len(rets))
    theta = Substitution(letters, rets, oracle.alphabet)
    index = dict(zip(rets, letters))
    sk = generating_power(oracle)
    images = tuple(decompose(apply(sk, r), u, index) for r in rets)
    sigma_u = Substitution(letters, images, letters)
    return DerivationStep(u, theta, sigma_u)


def return_substitution(oracle: SubstitutiveOracle, u: str) -> Substitution:
    return derivating_substitution(oracle, u).sigma


class DerivedLanguageOracle(LanguageOracle):
    """``D_u(X)`` for a factor ``u`` that is not a prefix of the fixed point.

    ``L(D_u(X))`` is read as ``{z : θ(z)u ∈ L(X)}``; letters are numbered by first
    occurrence in the point re-based at the first occurrence of ``u``.
    """

    def __init__(self, oracle: LanguageOracle, u: str):
        super().__init__()
        if u not in oracle:
            raise NotAFactor(f"{u!r} is not in the language")
        self.base = oracle
        self.u = u
        rets = set(return_words(oracle, u))
        n = 4 * (len(u) + max(len(r) for r in rets))
        while True:
            x = oracle.point_prefix(n)
            start = x.find(u)
            if start >= 0:
                x = x[start:]
                positions = []
                p = 0
                while p != -1:
                    positions.append(p)
                    p = x.find(u, p + 1)
                order: dict[str, None] = {}
                for s, t in zip(positions, positions[1:]):
                    order.setdefault(x[s:t], None)
                if len(order) == len(rets):
                    break
            n *= 2
        self.returns = tuple(order)
        self.alphabet = derived_alphabet(len(self.returns))
        self.theta = Substitution(self.alphabet, self.returns, oracle.alphabet)

    def _compute(self, n: int) -> set[str]:
        level = [""]
        for _ in range(n):
            nxt = []
            for z in level:
                for b in self.alphabet:
                    if apply(self.theta, z + b) + self.u in self.base:
                        nxt.append(z + b)
            level = nxt
        return set(level)

    def point_prefix(self, n: int) -> str:
        m = 4 * (n + 1) * max(len(r) for r in self.returns)
        x = self.base.point_prefix(m)
        x = x[x.find(self.u):]
        index = dict(zip(self.returns, self.alphabet))
        out = []
        p = 0
        while len(out) < n:
            q = x.find(self.u, p + 1)
            out.append(index[x[p:q]])
            p = q
        return "".join(out)


def derived_oracle(oracle: SubstitutiveOracle, u: str) -> LanguageOracle:
    """Oracle for ``D_u(X)``: generated by ``σ_u`` when ``u`` is a prefix of the fixed point."""
    _require_pure(oracle)
    if oracle.point_prefix(len(u)) == u:
        return SubstitutiveOracle(return_substitution(oracle, u))
    return DerivedLanguageOracle(oracle, u)


def compose_all(subs: list[Substitution]) -> Substitution:
    """``s_0 ∘ s_1 ∘ ... ∘ s_n``."""
    out = subs[-1]
    for s in reversed(subs[:-1]):
        out = s.compose(out)
    return out


@dataclass
class DerivationRecord:
    """The chain ``v^(0), v^(1), ...`` with the cycle ``σ_{v^(i)} = σ_{v^(j)}``.

    ``thetas[n]`` is ``θ_n``; ``θ_0 ⋯ θ_n`` is the derivating substitution for
    ``v^(n)``.  With ``ψ = θ_0 ⋯ θ_i`` and ``α = θ_{i+1} ⋯ θ_j`` the return words
    to ``u^(n) = v^(i + n(j - i))`` are ``ψ α^n(C)``.
    """

    oracle: SubstitutiveOracle
    prefixes: list[str]
    thetas: list[Substitution]
    sigmas: list[Substitution]
    i: int
    j: int
    psi: Substitution = field(init=False)
    alpha: Substitution = field(init=False)

    def __post_init__(self):
        self.psi = compose_all(self.thetas[: self.i + 1])
        self.alpha = compose_all(self.thetas[self.i + 1 : self.j + 1])

    @property
    def C(self) -> tuple[str, ...]:
        return self.alpha.domain

    @property
    def period(self) -> int:
        return self.j - self.i

    def theta(self, n: int) -> Substitution:
        """``θ_n``, extended past the recorded steps by periodicity."""
        if n <= self.j:
            return self.thetas[n]
        return self.thetas[self.i + 1 + (n - self.i - 1) % self.period]

    def prefix(self, m: int) -> str:
        """``v^(m)``."""
        while len(self.prefixes) <= m:
            n = len(self.prefixes) - 1
            chain = compose_all([self.theta(t) for t in range(n + 1)])
            self.prefixes.append(chain[derived_letter(1)] + self.prefixes[n])
        return self.prefixes[m]

    def u(self, n: int) -> str:
        """``u^(n) = v^(i + n(j - i))``."""
        return self.prefix(self.i + n * self.period)

    def returns_from_cycle(self, n: int) -> frozenset[str]:
        """``ψ α^n(C)``."""
        sub = self.psi
        for _ in range(n):
            sub = sub.compose(self.alpha)
        return frozenset(sub.images)

    def verify(self, n: int) -> bool:
        return self.returns_from_cycle(n) == return_words(self.oracle, self.u(n)).as_set()


def derivation_cycle(oracle: SubstitutiveOracle, cap: int = DEFAULT_CHAIN_CAP, verify: bool = True) -> DerivationRecord:
    """Derive along ``v^(n+1) = θ_0⋯θ_n(1) v^(n)`` until a return substitution repeats."""
    _require_pure(oracle)
    first = derivating_substitution(oracle, "")
    prefixes = [""]
    thetas = [first.theta]
    sigmas = [first.sigma]
    seen = {first.sigma: 0}
    current = SubstitutiveOracle(first.sigma)
    one = derived_letter(1)
    while len(sigmas) <= cap:
        step = derivating_substitution(current, one)
        n = len(sigmas) - 1
        chain = compose_all(thetas)
        prefixes.append(chain[one] + prefixes[n])
        thetas.append(step.theta)
        sigmas.append(step.sigma)
        if step.sigma in seen:
            record = DerivationRecord(oracle, prefixes, thetas, sigmas, seen[step.sigma], n + 1)
            if verify and not (record.verify(0) and record.verify(1)):
                raise DecompositionError("cycle does not reproduce the certified return sets")
            return record
        seen[step.sigma] = n + 1
        current = SubstitutiveOracle(step.sigma)
    raise ChainCapExceeded(f"no repeated return substitution within {cap} steps")
