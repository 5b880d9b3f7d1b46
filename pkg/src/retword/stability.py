"""Decision procedures for (eventual) stability of return groups.

Verdicts are one of ``stable``, ``eventually-stable``, ``not-eventually-stable``
or ``undetermined``.  ``StabilityReport.stable`` answers the yes/no question
separately, since a route can know that a shift is not stable while the
eventual question stays open.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

from . import fingroup
from .derive import DerivationRecord, DerivedLanguageOracle, derivating_substitution, derivation_cycle, derived_oracle
from .fingroup import FiniteMorphism
from .freegroup import (
    AbelianLattice,
    CoreGraph,
    FreeMorphism,
    GroupWord,
    abelianize,
    core_graph,
    determinant,
    injective_on,
    is_full,
    lattice,
    morphism_image,
    subgroup_equal,
    subgroup_leq,
)
from .shift import ReturnSet, return_words, welldoc_saturates
from .words import (
    ImageOracle,
    LanguageOracle,
    Substitution,
    SubstitutiveOracle,
    is_bifix,
    is_constant_length,
)

STABLE = "stable"
EVENTUALLY_STABLE = "eventually-stable"
NOT_EVENTUALLY_STABLE = "not-eventually-stable"
UNDETERMINED = "undetermined"
VERDICTS = (STABLE, EVENTUALLY_STABLE, NOT_EVENTUALLY_STABLE, UNDETERMINED)

SYNC_CAP = 64
RETURN_LENGTH_CAP = 256
WITNESS_STEPS = 3


class PeriodicInput(ValueError):
    pass


class SearchCapExceeded(RuntimeError):
    pass


class NotBifix(ValueError):
    pass


class NotDerivating(ValueError):
    pass


class NotDetected(NotDerivating):
    """Auto-detection found no base word; this is not a certificate."""


class NotConstantLength(ValueError):
    pass


class InconsistentResult(RuntimeError):
    pass


@dataclass
class SyncConstants:
    L: int
    M: int
    K: int
    target: int  # |σ|⌈L/⟨σ⟩⌉, the return length M has to reach

    def as_dict(self) -> dict[str, int]:
        return {"L": self.L, "M": self.M, "K": self.K}


@dataclass
class StabilityReport:
    verdict: str
    route: str
    stable: bool | None = None
    threshold_bound: int | None = None
    stabilizer: Any = None
    witness: Any = None
    constants: SyncConstants | None = None
    evidence: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if self.verdict == STABLE:
            self.stable = True
            self.threshold_bound = 0
        elif self.verdict == NOT_EVENTUALLY_STABLE:
            self.stable = False
        if self.verdict in (STABLE, EVENTUALLY_STABLE) and self.stabilizer is None:
            raise ValueError("a stabilizer is required for a stable verdict")


def _require_substitutive(oracle) -> SubstitutiveOracle:
    if not isinstance(oracle, SubstitutiveOracle) or oracle.cover is not None:
        raise TypeError("this decider needs a shift generated by a substitution alone")
    return oracle


def _require_aperiodic(oracle: LanguageOracle) -> None:
    if oracle.is_periodic():
        raise PeriodicInput("the shift is periodic")


# ---------------------------------------------------------------------------
# Synchronization and preservation constants


def interpretation_cuts(sigma: Substitution, words, u: str) -> set[frozenset[int]]:
    """Cut sets of all interpretations of ``u`` found inside ``σ(w)`` for ``w`` in ``words``.

    A cut at ``t`` means the interpretation passes by ``u[:t]·u[t:]``.
    """
    found: set[frozenset[int]] = set()
    n = len(u)
    for w in words:
        bounds = [0]
        for c in w:
            bounds.append(bounds[-1] + len(sigma[c]))
        image = "".join(sigma[c] for c in w)
        q = image.find(u)
        while q != -1:
            # an interpretation is the minimal covering factor plus the offset in it
            cuts = frozenset(b - q for b in bounds if q <= b <= q + n)
            first = max(i for i, b in enumerate(bounds) if b <= q)
            last = min(i for i, b in enumerate(bounds) if b >= q + n)
            key = (w[first:last], q - bounds[first], cuts)
            found.add(key)
            q = image.find(u, q + 1)
    return {cuts for _, _, cuts in found}


def synchronizing_cut(sigma: Substitution, oracle: LanguageOracle, u: str) -> int | None:
    """Least ``t`` such that every interpretation of ``u`` passes by ``u[:t]·u[t:]``."""
    m = math.ceil(len(u) / sigma.min_length) + 2
    cut_sets = interpretation_cuts(sigma, oracle.language(m), u)
    common = set(range(len(u) + 1))
    for cuts in cut_sets:
        common &= cuts
    if not common:
        return None
    # prefer a proper factorization when one exists
    proper = sorted(t for t in common if 0 < t < len(u))
    return proper[0] if proper else min(common)


def synchronizing_factorizations(oracle: SubstitutiveOracle, n: int) -> dict[str, int | None]:
    sigma = oracle.sigma
    return {u: synchronizing_cut(sigma, oracle, u) for u in sorted(oracle.language(n))}


def synchronizing_constant(oracle: SubstitutiveOracle, cap: int = SYNC_CAP) -> int:
    """Smallest ``ℓ`` such that every word of length ``ℓ`` is synchronized.

    Extensions of a synchronized word are synchronized, so the first length
    where all words pass is the constant.
    """
    _require_substitutive(oracle)
    _require_aperiodic(oracle)
    for ell in range(1, cap + 1):
        if all(cut is not None for cut in synchronizing_factorizations(oracle, ell).values()):
            return ell
    raise SearchCapExceeded(f"no synchronizing length up to {cap}")


def min_return_length(oracle: LanguageOracle, n: int) -> int:
    """``f(n)``: shortest return word to any factor of length ``n``."""
    return min(min(len(r) for r in return_words(oracle, u)) for u in oracle.language(n))


def return_length_constant(oracle: SubstitutiveOracle, L: int, cap: int = RETURN_LENGTH_CAP) -> int:
    """Least ``n`` with ``f(n) >= |σ|⌈L/⟨σ⟩⌉``; ``f`` is nondecreasing."""
    sigma = oracle.sigma
    target = sigma.max_length * math.ceil(L / sigma.min_length)
    for n in range(1, cap + 1):
        if min_return_length(oracle, n) >= target:
            return n
    raise SearchCapExceeded(f"return lengths stay below {target} up to length {cap}")


def preservation_constant(oracle: SubstitutiveOracle) -> SyncConstants:
    sigma = oracle.sigma
    L = synchronizing_constant(oracle)
    M = return_length_constant(oracle, L)
    ratio = math.ceil(L / sigma.min_length)
    return SyncConstants(L, M, max(M, 2 * ratio), sigma.max_length * ratio)


# ---------------------------------------------------------------------------
# Free group routes


@dataclass
class DescentLoop:
    """``H_n = ⟨φ^n(S)⟩`` for ``n = 0, 1, ...`` with rank stabilization at ``k``."""

    phi: FreeMorphism
    generators: list[list[GroupWord]]
    groups: list[CoreGraph]
    k: int
    equal: bool

    def witness_chain(self, steps: int = WITNESS_STEPS) -> list[tuple[int, GroupWord]]:
        """Generators ``g_n ∈ H_n`` missing from ``H_{n+1}``, for ``n = k, k+1, ...``."""
        self.extend(self.k + steps + 1)
        chain = []
        for n in range(self.k, self.k + steps):
            nxt = self.groups[n + 1]
            missing = sorted((g for g in self.generators[n] if g not in nxt), key=lambda g: (len(g), str(g)))
            if not missing:
                raise InconsistentResult(f"no strict descent at step {n}")
            chain.append((n, missing[0]))
        return chain

    def extend(self, n: int) -> None:
        while len(self.groups) <= n:
            gens = [self.phi(g) for g in self.generators[-1]]
            self.generators.append(gens)
            self.groups.append(core_graph(gens))


def descent_loop(phi: FreeMorphism, S) -> DescentLoop:
    gens = [GroupWord.of(s) for s in S]
    loop = DescentLoop(phi, [gens], [core_graph(gens)], 0, False)
    for k in range(len(gens) + 1):
        loop.extend(k + 1)
        if loop.groups[k + 1].rank == loop.groups[k].rank:
            loop.k = k
            loop.equal = subgroup_equal(loop.groups[k + 1], loop.groups[k])
            if not loop.equal and not subgroup_leq(loop.groups[k + 1], loop.groups[k]):
                raise InconsistentResult("φ⟨S⟩ is not contained in ⟨S⟩")
            return loop
    raise InconsistentResult("rank did not stabilize within #S steps")


def _short_words_full(oracle: LanguageOracle, bound: int) -> tuple[bool, str | None]:
    """Whether every word of length ``1..bound`` has a full return group."""
    for n in range(1, bound + 1):
        for u in sorted(oracle.language(n)):
            if not is_full(core_graph(return_words(oracle, u)), oracle.alphabet):
                return False, u
    return True, None


def _periodic_report(oracle: LanguageOracle, route: str) -> StabilityReport:
    x = oracle.point_prefix(4 * oracle.default_period_bound())
    period = next(p for p in range(1, len(x)) if x[p:] == x[:-p])
    word = x[:period]
    stab = core_graph([word])
    if len(oracle.alphabet) == 1:
        return StabilityReport(STABLE, route, stabilizer=stab, evidence={"period": word})
    # beyond length ``period`` every factor returns along a conjugate of the period
    return StabilityReport(EVENTUALLY_STABLE, route, stable=False, threshold_bound=period, stabilizer=stab, evidence={"period": word})


def _loop_report(oracle, loop: DescentLoop, route: str, scan_bound: int, evidence: dict) -> StabilityReport:
    H = loop.groups[loop.k]
    evidence.update({
        "rank_index": loop.k,
        "ranks": [g.rank for g in loop.groups],
        "injective": injective_on(loop.phi, H),
    })
    if not loop.equal:
        evidence["witness_checked"] = True
        return StabilityReport(NOT_EVENTUALLY_STABLE, route, witness=loop.witness_chain(), evidence=evidence)
    full = is_full(H, oracle.alphabet)
    evidence["stabilizer_full"] = full
    if full:
        ok, bad = _short_words_full(oracle, scan_bound)
        evidence["scan_bound"] = scan_bound
        if ok:
            return StabilityReport(STABLE, route, stabilizer=H, evidence=evidence)
        evidence["non_full_word"] = bad
    return StabilityReport(EVENTUALLY_STABLE, route, stable=False, threshold_bound=scan_bound, stabilizer=H, evidence=evidence)


def decide_free_bifix(oracle: SubstitutiveOracle) -> StabilityReport:
    """Eventual stability in the free group for a primitive bifix substitution."""
    _require_substitutive(oracle)
    sigma = oracle.sigma
    if not is_bifix(sigma):
        raise NotBifix(f"{sigma} is not bifix")
    if oracle.is_periodic():
        return _periodic_report(oracle, "bifix")
    constants = preservation_constant(oracle)
    a, k = oracle.seed
    u = oracle.point_prefix(constants.K)
    S = return_words(oracle, u)
    phi = FreeMorphism.from_substitution(sigma.power(k))
    loop = descent_loop(phi, S)
    evidence = {"base_word": u, "returns": list(S), "seed": [a, k]}
    report = _loop_report(oracle, loop, "bifix", constants.K, evidence)
    report.constants = constants
    return report


def is_derivating_for(oracle: LanguageOracle, sigma: Substitution, u: str) -> bool:
    """Whether ``σ`` maps the alphabet bijectively onto ``R_X(u)``."""
    if u not in oracle:
        return False
    images = sigma.images
    return len(set(images)) == len(images) and set(images) == return_words(oracle, u).as_set()


def detect_derivating_word(oracle: SubstitutiveOracle, bound: int | None = None) -> str:
    sigma = oracle.sigma
    if bound is None:
        bound = 4 * sigma.max_length * len(sigma.domain)
    x = oracle.point_prefix(bound)
    for n in range(1, bound + 1):
        if is_derivating_for(oracle, sigma, x[:n]):
            return x[:n]
    raise NotDetected(f"no prefix of length at most {bound} is a base word for {sigma}")


def decide_free_derivating(sigma: Substitution | SubstitutiveOracle, u: str | None = None, bound: int | None = None) -> StabilityReport:
    """Free-group decision for a substitution that is derivating for ``u``.

    Then ``R_X(u^(n)) = σ^n(A)`` with ``u^(0) = ε`` and ``u^(n+1) = σ(u^(n)) u``.
    """
    oracle = sigma if isinstance(sigma, SubstitutiveOracle) else SubstitutiveOracle(sigma)
    sigma = _require_substitutive(oracle).sigma
    if len(sigma.domain) == 1:
        return StabilityReport(STABLE, "derivating", stabilizer=core_graph(sigma.domain), evidence={"base_word": u})
    if u is None:
        u = detect_derivating_word(oracle, bound)
    elif not is_derivating_for(oracle, sigma, u):
        raise NotDerivating(f"{sigma} is not derivating for {u!r}")
    phi = FreeMorphism.from_substitution(sigma)
    loop = descent_loop(phi, sigma.domain)
    # words of length up to |u^(2)| are checked directly
    scan_bound = len(sigma(u) + u)
    evidence = {"base_word": u}
    report = _loop_report(oracle, loop, "derivating", scan_bound, evidence)
    if report.verdict == NOT_EVENTUALLY_STABLE:
        H = loop.groups[loop.k]
        evidence["image_proper"] = subgroup_leq(morphism_image(phi, H), H) and not subgroup_equal(morphism_image(phi, H), H)
    return report


# ---------------------------------------------------------------------------
# Finite and Abelian targets


@dataclass
class FiniteOrbit:
    """Values of ``φψα^n`` on ``C`` until the first repetition ``f_first = f_repeat``."""

    record: DerivationRecord
    values: list[tuple]
    first: int
    repeat: int

    def subgroup(self, n: int, one) -> frozenset:
        return fingroup.closure(self.values[n], one=one)


def finite_orbit(record: DerivationRecord, phi: FiniteMorphism) -> FiniteOrbit:
    C = record.C
    current = tuple(phi(record.psi[c]) for c in C)
    seen = {current: 0}
    values = [current]
    while True:
        table = dict(zip(C, current))
        nxt = []
        for c in C:
            g = phi.one
            for d in record.alpha[c]:
                g = g * table[d]
            nxt.append(g)
        current = tuple(nxt)
        if current in seen:
            return FiniteOrbit(record, values, seen[current], len(values))
        seen[current] = len(values)
        values.append(current)


def decide_finite(oracle: SubstitutiveOracle, phi: FiniteMorphism, record: DerivationRecord | None = None) -> StabilityReport:
    """φ-stability for a finite target through the derivation cycle."""
    _require_substitutive(oracle)
    if set(phi.domain) != set(oracle.alphabet):
        raise ValueError("morphism must be defined on the alphabet of the shift")
    if record is None:
        record = derivation_cycle(oracle)
    orbit = finite_orbit(record, phi)
    H = orbit.subgroup(orbit.first, phi.one)
    G = phi.group
    evidence = {
        "cycle": [record.i, record.j],
        "orbit": [[str(g) for g in values] for values in orbit.values],
        "repeat": [orbit.first, orbit.repeat],
        "group_order": len(G),
    }
    if H == G:
        return StabilityReport(STABLE, "finite", stabilizer=H, evidence=evidence)
    return StabilityReport(
        EVENTUALLY_STABLE, "finite", stable=False,
        threshold_bound=len(record.u(orbit.first)), stabilizer=H,
        witness=record.u(orbit.first), evidence=evidence,
    )


def _abelian_matrix(sub: Substitution, rows: tuple[str, ...]) -> list[list[int]]:
    """Columns are abelianized images of the letters of ``sub``."""
    cols = [abelianize(sub[c], rows) for c in sub.domain]
    return [[col[r] for col in cols] for r in range(len(rows))]


def _lattice_of(matrix: list[list[int]], d: int) -> AbelianLattice:
    return lattice(list(zip(*matrix)), d)


def _matmul(A: list[list[int]], B: list[list[int]]) -> list[list[int]]:
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def decide_abelian(oracle: SubstitutiveOracle) -> StabilityReport:
    """ab-stability: the lattices ``L_n = ab⟨ψα^n(C)⟩`` in ``Z^d``.

    A lattice is all of ``Z^d`` iff it is onto modulo every prime ``p``.  Over
    ``F_p`` the images ``M_α^n F_p^C`` stop shrinking by ``n = #C``, so every
    ``L_n`` is full iff ``L_{#C}`` is.
    """
    _require_substitutive(oracle)
    record = derivation_cycle(oracle)
    A = oracle.alphabet
    d = len(A)
    M_psi = _abelian_matrix(record.psi, A)
    M_alpha = _abelian_matrix(record.alpha, record.C)
    det = determinant(M_alpha)
    M = M_psi
    for _ in range(len(record.C)):
        M = _matmul(M, M_alpha)
    L0 = _lattice_of(M_psi, d)
    Lc = _lattice_of(M, d)
    evidence: dict[str, Any] = {
        "cycle": [record.i, record.j],
        "det_alpha": det,
        "L0_divisors": list(L0.elementary_divisors),
        "Lc_divisors": list(Lc.elementary_divisors),
    }
    if Lc.is_full:
        return StabilityReport(STABLE, "abelian", stabilizer=Lc, evidence=evidence)
    if abs(det) == 1:
        # M_α is onto Z^C, so L_n = L_0 for every n
        return StabilityReport(EVENTUALLY_STABLE, "abelian", stable=False, threshold_bound=0, stabilizer=L0, evidence=evidence)
    return StabilityReport(UNDETERMINED, "abelian", stable=False, witness=record.u(len(record.C)), evidence=evidence)


# ---------------------------------------------------------------------------
# Welldoc


def decide_welldoc(oracle: SubstitutiveOracle, phi: FiniteMorphism, sample_length: int = 3) -> StabilityReport:
    """φ-welldoc, which coincides with φ-stability; saturation scans are a cross-check."""
    report = decide_finite(oracle, phi)
    sample = sorted({w for n in range(1, sample_length + 1) for w in oracle.language(n)})
    if report.witness:
        sample.append(report.witness)
    scans = {w: welldoc_saturates(oracle, w, phi) for w in sample}
    if report.stable and any(v is False for v in scans.values()):
        bad = next(w for w, v in scans.items() if v is False)
        raise InconsistentResult(f"stable verdict but {bad!r} does not saturate")
    report.route = "welldoc"
    report.evidence["saturation"] = {w: v for w, v in scans.items()}
    return report


# ---------------------------------------------------------------------------
# Constant-length substitutions


@dataclass
class DivisibilityReport:
    level: int
    modulus: int
    threshold: int
    short_word: str
    short_gcd: int
    long_word: str
    long_gcd: int

    @property
    def strict_descent(self) -> bool:
        return self.long_gcd % self.short_gcd == 0 and self.long_gcd > self.short_gcd


def _return_gcd(rets: ReturnSet) -> int:
    return math.gcd(*(len(r) for r in rets))


def automatic_divisibility(oracle: SubstitutiveOracle, level: int, bound: int = 64) -> DivisibilityReport:
    """Least ``ℓ`` with every return to a word of length ``ℓ`` of length divisible by ``k^level``."""
    _require_substitutive(oracle)
    k = is_constant_length(oracle.sigma)
    if k is None:
        raise NotConstantLength(f"{oracle.sigma} is not of constant length")
    _require_aperiodic(oracle)
    modulus = k**level
    previous = None
    for ell in range(1, bound + 1):
        bad = None
        for u in sorted(oracle.language(ell)):
            rets = return_words(oracle, u)
            if any(len(r) % modulus for r in rets):
                bad = (u, rets)
                break
        if bad is None:
            if previous is None:
                raise SearchCapExceeded("divisibility already holds at length 1; no descent to witness")
            long_word = oracle.point_prefix(ell)
            return DivisibilityReport(
                level, modulus, ell, previous[0], _return_gcd(previous[1]),
                long_word, _return_gcd(return_words(oracle, long_word)),
            )
        previous = bad
    raise SearchCapExceeded(f"divisibility by {modulus} not reached up to length {bound}")


# ---------------------------------------------------------------------------
# Closure properties


@dataclass
class ClosureCheck:
    name: str
    passed: bool
    detail: Any = None


@dataclass
class ClosureReport:
    """Checks that must hold, plus observed facts that feed them."""

    kind: str
    checks: list[ClosureCheck] = field(default_factory=list)
    facts: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: Any = None) -> None:
        self.checks.append(ClosureCheck(name, bool(passed), detail))


def closure_property_check(
    oracle: SubstitutiveOracle,
    sigma: Substitution | None = None,
    u: str | None = None,
    bound: int = 4,
) -> ClosureReport:
    """Empirical checks of how stability behaves under derivation and images.

    With ``u``: ``θ_u`` carries the returns of ``D_u(X)`` onto returns of ``X``,
    and full return groups of ``X`` stay full through ``θ_u``.  With ``sigma``:
    return groups of ``σ[X]`` are scanned, and a surjective ``σ`` applied to a
    shift whose scanned groups are all full must keep them full.
    """
    if (sigma is None) == (u is None):
        raise ValueError("give exactly one of sigma or u")
    if u is not None:
        report = ClosureReport("derivation")
        derived = derived_oracle(oracle, u)
        theta = derivation_theta(oracle, u, derived)
        rets = return_words(oracle, u)
        report.facts["returns"] = len(rets)
        report.facts["return_rank"] = core_graph(rets).rank
        bad = None
        for n in range(1, bound + 1):
            for w in sorted(derived.language(n)):
                lhs = {theta(r) for r in return_words(derived, w)}
                if lhs != return_words(oracle, theta(w) + u).as_set():
                    bad = w
                    break
            if bad is not None:
                break
        report.add("returns transported", bad is None, bad)
        base_full, _ = _short_words_full(oracle, bound + len(u))
        report.facts["base_full"] = base_full
        if base_full:
            image_full = all(
                is_full(core_graph(theta(r) for r in return_words(derived, w)), oracle.alphabet)
                for n in range(1, bound + 1) for w in derived.language(n)
            )
            report.add("theta-images full", image_full)
        return report
    report = ClosureReport("image")
    image = ImageOracle(sigma, oracle)
    surjective = is_full(core_graph(sigma.images), sigma.codomain)
    image_full, first_bad = _short_words_full(image, bound)
    base_full, _ = _short_words_full(oracle, bound)
    report.facts.update({"surjective": surjective, "image_full": image_full, "first_non_full": first_bad, "base_full": base_full})
    if first_bad is not None:
        report.facts["first_non_full_returns"] = list(return_words(image, first_bad))
    if base_full and surjective:
        report.add("stability transferred", image_full, first_bad)
    return report


def derivation_theta(oracle: SubstitutiveOracle, u: str, derived: LanguageOracle) -> Substitution:
    if isinstance(derived, DerivedLanguageOracle):
        return derived.theta
    return derivating_substitution(oracle, u).theta


def decide(oracle: SubstitutiveOracle, route: str = "auto", phi: FiniteMorphism | None = None, base_word: str | None = None) -> StabilityReport:
    """Dispatch on ``route``; ``auto`` tries bifix, then derivating detection."""
    if route == "bifix":
        return decide_free_bifix(oracle)
    if route == "derivating":
        return decide_free_derivating(oracle, base_word)
    if route in ("finite", "welldoc"):
        if phi is None:
            raise ValueError(f"route {route!r} needs a morphism")
        return decide_finite(oracle, phi) if route == "finite" else decide_welldoc(oracle, phi)
    if route == "abelian":
        return decide_abelian(oracle)
    if route != "auto":
        raise ValueError(f"unknown route {route!r}")
    if phi is not None:
        return decide_finite(oracle, phi)
    if is_bifix(oracle.sigma):
        return decide_free_bifix(oracle)
    try:
        return decide_free_derivating(oracle, base_word)
    except NotDetected as exc:
        return StabilityReport(UNDETERMINED, "auto", evidence={"reason": str(exc)})
