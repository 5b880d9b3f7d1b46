"""Compare the abelian verdict with the verdicts for every cyclic quotient up to a modulus."""

from dataclasses import dataclass

from _config import parse_config
from retword.fingroup import abelianization_morphism
from retword.stability import decide_abelian, decide_finite
from retword.words import oracle_for

SHIFTS = {
    "tribonacci": "a->ab;b->ac;c->a",
    "fibonacci": "a->ab;b->a",
    "bifix": "a->aab;b->acb;c->ba",
    "four-letter": "a->baa;b->ca;c->bad;d->acd",
    "thue-morse": "0->01;1->10",
}


@dataclass
class Config:
    """Print one line per shift: abelian verdict, then stability modulo k."""

    max_modulus: int = 6


def main(cfg: Config) -> None:
    for name, sub in SHIFTS.items():
        o = oracle_for(sub)
        ab = decide_abelian(o)
        mods = {k: decide_finite(o, abelianization_morphism(o.alphabet, k)).stable for k in range(2, cfg.max_modulus + 1)}
        flags = " ".join(f"{k}:{'y' if s else 'n'}" for k, s in mods.items())
        print(f"{name:12} {ab.verdict:18} mod {flags}  divisors {ab.evidence['Lc_divisors']}")


if __name__ == "__main__":
    main(parse_config(Config))
