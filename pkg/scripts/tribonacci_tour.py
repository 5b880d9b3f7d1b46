"""Languages, return words, Rauzy groups and extension graphs of the Tribonacci shift."""

from dataclasses import dataclass

from _config import parse_config
from retword.shift import extension_graph, is_dendric, rauzy_graph, rauzy_group, return_words
from retword.words import oracle_for


@dataclass
class Config:
    """Walk through the basic objects attached to a substitutive shift."""

    sub: str = "a->ab;b->ac;c->a"
    max_length: int = 6
    word: str = "aba"
    vertex: str = "ba"
    center: str = "b"


def main(cfg: Config) -> None:
    o = oracle_for(cfg.sub)
    print("complexity:", [o.complexity(n) for n in range(1, cfg.max_length + 1)])
    print(f"R({cfg.word}) =", sorted(return_words(o, cfg.word)))
    g = rauzy_graph(o, len(cfg.vertex))
    print(f"Rauzy graph of order {g.order}: {len(g.vertices)} vertices, {len(g.edges)} edges")
    print(f"Gr({cfg.vertex}) basis:", [str(w) for w in rauzy_group(o, cfg.vertex).basis])
    e = extension_graph(o, cfg.center, 2)
    print(f"E2({cfg.center}) edges:", list(e.edges))
    dendric = all(is_dendric(o, u) for n in range(cfg.max_length) for u in o.language(n))
    print(f"every factor of length < {cfg.max_length} dendric:", dendric)


if __name__ == "__main__":
    main(parse_config(Config))
