"""Constants and descent witnesses for a bifix substitution in the free group."""

from dataclasses import dataclass

from _config import parse_config
from retword.stability import decide_abelian, decide_free_bifix, synchronizing_factorizations
from retword.words import oracle_for


@dataclass
class Config:
    """Synchronization and return-length constants, then the free and abelian verdicts."""

    sub: str = "a->aab;b->acb;c->ba"
    abelian: bool = True


def main(cfg: Config) -> None:
    o = oracle_for(cfg.sub)
    r = decide_free_bifix(o)
    c = r.constants
    print("constants:", c.as_dict())
    sync = synchronizing_factorizations(o, c.L)
    print(f"{len(sync)} words of length {c.L}, cut positions:", sync)
    print("base word:", r.evidence["base_word"])
    print("returns:", r.evidence["returns"])
    print("ranks:", r.evidence["ranks"], "| injective:", r.evidence["injective"])
    print("verdict:", r.verdict)
    for n, g in r.witness or []:
        print(f"  in H_{n}, not in H_{n + 1}: {g}")
    if cfg.abelian:
        a = decide_abelian(o)
        print("abelian verdict:", a.verdict, a.evidence)


if __name__ == "__main__":
    main(parse_config(Config))
