"""Return-word lengths of a constant-length substitution become divisible by growing powers."""

from dataclasses import dataclass

from _config import parse_config
from retword.shift import return_words
from retword.stability import automatic_divisibility
from retword.words import oracle_for


@dataclass
class Config:
    """For each level n, the least length after which every return length is divisible by k^n."""

    sub: str = "0->01;1->10"
    levels: int = 3
    bound: int = 64


def main(cfg: Config) -> None:
    o = oracle_for(cfg.sub)
    print("R(0) =", sorted(return_words(o, "0")))
    for level in range(1, cfg.levels + 1):
        r = automatic_divisibility(o, level, bound=cfg.bound)
        print(
            f"k^{level} = {r.modulus}: threshold {r.threshold}; "
            f"{r.short_word} has gcd {r.short_gcd}, {r.long_word} has gcd {r.long_gcd}"
        )


if __name__ == "__main__":
    main(parse_config(Config))
