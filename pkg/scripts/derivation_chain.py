"""Derive a substitutive shift along prefixes of its fixed point until the return substitution repeats."""

from dataclasses import dataclass

from _config import parse_config
from retword.derive import derivation_cycle
from retword.words import oracle_for


@dataclass
class Config:
    """Print the derivating substitutions, the cycle and the checks of the return sets."""

    sub: str = "a->aab;b->acb;c->ba"
    cap: int = 64
    verify_up_to: int = 2


def show(name, sub):
    print(f"  {name}: " + ", ".join(f"{a}->{w}" for a, w in sub.as_dict().items()))


def main(cfg: Config) -> None:
    rec = derivation_cycle(oracle_for(cfg.sub), cap=cfg.cap)
    for n, (v, theta, sigma) in enumerate(zip(rec.prefixes, rec.thetas, rec.sigmas)):
        print(f"v({n}) = {v or 'ε'}")
        show(f"theta_{n}", theta)
        show(f"sigma_v({n})", sigma)
    print(f"cycle: sigma_v({rec.i}) = sigma_v({rec.j})")
    show("psi", rec.psi)
    show("alpha", rec.alpha)
    for n in range(cfg.verify_up_to + 1):
        print(f"u({n}) = {rec.u(n)}: returns match psi alpha^{n}(C): {rec.verify(n)}")


if __name__ == "__main__":
    main(parse_config(Config))
