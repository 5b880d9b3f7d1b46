"""A shift with stable return groups whose derived shift is not eventually stable."""

import time
from dataclasses import dataclass

from _config import parse_config
from retword.derive import derived_oracle
from retword.stability import decide_free_bifix, decide_free_derivating
from retword.words import oracle_for


@dataclass
class Config:
    """Decide the shift through the bifix route, then derive at a letter and decide again."""

    sub: str = "a->baa;b->ca;c->bad;d->acd"
    letter: str = "b"


def main(cfg: Config) -> None:
    o = oracle_for(cfg.sub)
    start = time.perf_counter()
    r = decide_free_bifix(o)
    print(f"shift: {r.verdict} with constants {r.constants.as_dict()} ({time.perf_counter() - start:.1f}s)")
    derived = derived_oracle(o, cfg.letter)
    print(f"derived at {cfg.letter}:", ", ".join(f"{a}->{w}" for a, w in derived.sigma.as_dict().items()))
    d = decide_free_derivating(derived)
    print("derived shift:", d.verdict, "| base word:", d.evidence["base_word"])
    print("ranks:", d.evidence["ranks"], "| injective:", d.evidence["injective"], "| proper image:", d.evidence["image_proper"])


if __name__ == "__main__":
    main(parse_config(Config))
