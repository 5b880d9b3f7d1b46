"""Track the images of return groups in a finite group along the derivation cycle."""

from dataclasses import dataclass

from _config import parse_config
from retword.fingroup import parse_morphism
from retword.stability import decide_finite, decide_welldoc
from retword.words import oracle_for


@dataclass
class Config:
    """Orbit of the finite functions on the cycle alphabet, with the resulting stabilizer."""

    sub: str = "a->aab;b->acb;c->ba"
    morphism: str = "perm: a->(1 2 3); b->(1 2); c->(1 2 3)"
    welldoc: bool = True


def main(cfg: Config) -> None:
    o, phi = oracle_for(cfg.sub), parse_morphism(cfg.morphism)
    r = decide_finite(o, phi)
    for n, row in enumerate(r.evidence["orbit"]):
        print(f"n={n}: " + "  ".join(row))
    first, repeat = r.evidence["repeat"]
    print(f"repeat: n={first} equals n={repeat}")
    print("stabilizer:", sorted(map(str, r.stabilizer)), f"of order {len(r.stabilizer)} in a group of order {len(phi.group)}")
    print("verdict:", r.verdict, "| stable:", r.stable, "| witness:", r.witness)
    if cfg.welldoc:
        w = decide_welldoc(o, phi)
        print("welldoc saturation scans:", w.evidence["saturation"])


if __name__ == "__main__":
    main(parse_config(Config))
