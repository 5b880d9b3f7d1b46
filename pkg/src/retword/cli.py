"""Command-line front end.

Exit codes: 0 computed (or yes), 1 a negative yes/no verdict, 2 undetermined
or a search cap hit, 3 input error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import report
from .derive import ChainCapExceeded, derivating_substitution, derivation_cycle
from .fingroup import MorphismSyntaxError, SizeExceeded, parse_morphism
from .shift import (
    extension_graph,
    is_suffix_connected,
    rauzy_graph,
    rauzy_group,
    return_group_image,
    return_words,
    welldoc_saturates,
)
from .stability import (
    InconsistentResult,
    UNDETERMINED,
    SearchCapExceeded,
    automatic_divisibility,
    decide,
)
from .words import oracle_for

EXIT_OK, EXIT_NO, EXIT_UNDETERMINED, EXIT_INPUT = 0, 1, 2, 3
ROUTES = ("auto", "bifix", "derivating", "finite", "abelian", "welldoc")


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="retword", description="Return words and return groups of substitutive shifts.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--sub", required=True, help='substitution, e.g. "a->ab;b->ac;c->a" or @file')
        p.add_argument("--cover", help="letter-to-letter coding applied to the shift")
        p.add_argument("--json", metavar="PATH", help="write the report here instead of stdout")
        return p

    p = command("lang", "factors of a given length")
    p.add_argument("--length", type=_positive, required=True)

    p = command("returns", "return words to a factor")
    p.add_argument("--word", required=True)
    p.add_argument("--morphism", help="also report the image of the return group")

    p = command("rauzy", "Rauzy graph of a given order")
    p.add_argument("--order", type=_positive, required=True)
    p.add_argument("--word", help="also report the Rauzy group at this vertex")
    p.add_argument("--dot", metavar="PATH")

    p = command("extension", "extension graph of a factor")
    p.add_argument("--word", required=True)
    p.add_argument("--order", type=_positive, default=1)
    p.add_argument("--dot", metavar="PATH")

    p = command("derive", "derivation step for a prefix, or the full derivation cycle")
    p.add_argument("--word", help="prefix of the fixed point; omit for the cycle")
    p.add_argument("--bound", type=_positive, default=64, help="cap on the chain length")

    p = command("stability", "decide (eventual) stability of return groups")
    p.add_argument("--route", choices=ROUTES, default="auto")
    p.add_argument("--morphism", help='finite target, e.g. "perm: a->(1 2 3); b->(1 2)"')
    p.add_argument("--word", help="base word for the derivating route")

    p = command("welldoc", "decide welldoc for a finite morphism")
    p.add_argument("--morphism", required=True)
    p.add_argument("--word", help="also scan occurrence prefixes of this word")
    p.add_argument("--bound", type=_positive, default=1 << 16, help="scan window cap")

    p = command("automatic", "divisibility of return lengths for constant-length substitutions")
    p.add_argument("--order", type=_positive, default=1, help="power n in k^n")
    p.add_argument("--bound", type=_positive, default=64, help="largest word length scanned")
    return parser


def _read_text(value: str | None) -> str | None:
    if value is not None and value.startswith("@"):
        try:
            return Path(value[1:]).read_text()
        except OSError as exc:
            raise InputError(str(exc)) from None
    return value


def _inputs(args) -> dict:
    keys = ("sub", "cover", "morphism", "word", "length", "order", "route", "bound")
    return {k: getattr(args, k, None) for k in keys}


def _write_dot(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text)


def cmd_lang(args, oracle):
    words = oracle.language(args.length)
    per = oracle.periodicity()
    result = {"length": args.length, "complexity": len(words), "words": words}
    return EXIT_OK, result, {"periodicity": per.status, "period_bound": per.bound}, None


def cmd_returns(args, oracle):
    rets = return_words(oracle, args.word)
    result = {"word": args.word, "returns": list(rets), "count": len(rets)}
    evidence = {"certified_window": rets.certified_bound}
    if args.morphism:
        phi = parse_morphism(_read_text(args.morphism))
        result["image"] = return_group_image(oracle, args.word, phi)
    return EXIT_OK, result, evidence, None


def cmd_rauzy(args, oracle):
    graph = rauzy_graph(oracle, args.order)
    result = {
        "order": graph.order,
        "vertices": list(graph.vertices),
        "edges": [list(e) for e in graph.edges],
        "strongly_connected": graph.is_strongly_connected(),
    }
    if args.word:
        if len(args.word) != args.order:
            raise InputError("--word must have length --order")
        result["rauzy_group"] = rauzy_group(oracle, args.word)
    _write_dot(args.dot, graph.to_dot())
    return EXIT_OK, result, {}, None


def cmd_extension(args, oracle):
    graph = extension_graph(oracle, args.word, args.order)
    result = {
        "word": args.word,
        "order": args.order,
        "left": list(graph.left),
        "right": list(graph.right),
        "edges": [list(e) for e in graph.edges],
        "tree": graph.is_tree(),
        "suffix_connected": is_suffix_connected(oracle, args.word),
    }
    _write_dot(args.dot, graph.to_dot())
    return EXIT_OK, result, {}, None


def cmd_derive(args, oracle):
    if args.word is not None:
        step = derivating_substitution(oracle, args.word)
        result = {"prefix": step.prefix, "theta": step.theta, "sigma": step.sigma}
        return EXIT_OK, result, {}, None
    record = derivation_cycle(oracle, cap=args.bound)
    steps = [
        {"prefix": v, "theta": t, "sigma": s}
        for v, t, s in zip(record.prefixes, record.thetas, record.sigmas)
    ]
    result = {"cycle": [record.i, record.j], "psi": record.psi, "alpha": record.alpha, "C": list(record.C)}
    evidence = {"steps": steps, "verified": [record.verify(0), record.verify(1)]}
    return EXIT_OK, result, evidence, None


def _verdict_exit(rep) -> int:
    if rep.verdict == UNDETERMINED:
        return EXIT_UNDETERMINED
    if rep.stable is True:
        return EXIT_OK
    if rep.stable is False:
        return EXIT_NO
    return EXIT_UNDETERMINED


def _stability_result(rep) -> dict:
    return {
        "verdict": rep.verdict,
        "stable": rep.stable,
        "route": rep.route,
        "threshold_bound": rep.threshold_bound,
        "stabilizer": rep.stabilizer,
        "witness": rep.witness,
    }


def cmd_stability(args, oracle):
    phi = parse_morphism(_read_text(args.morphism)) if args.morphism else None
    rep = decide(oracle, args.route, phi, args.word)
    constants = rep.constants.as_dict() if rep.constants else None
    return _verdict_exit(rep), _stability_result(rep), rep.evidence, constants


def cmd_welldoc(args, oracle):
    phi = parse_morphism(_read_text(args.morphism))
    rep = decide(oracle, "welldoc", phi)
    result = _stability_result(rep)
    result["welldoc"] = rep.stable
    if args.word:
        result["saturates"] = welldoc_saturates(oracle, args.word, phi, cap=args.bound)
    return _verdict_exit(rep), result, rep.evidence, None


def cmd_automatic(args, oracle):
    rep = automatic_divisibility(oracle, args.order, bound=args.bound)
    result = report.to_plain(rep)
    result["strict_descent"] = rep.strict_descent
    return EXIT_OK, result, {}, None


COMMANDS = {
    "lang": cmd_lang,
    "returns": cmd_returns,
    "rauzy": cmd_rauzy,
    "extension": cmd_extension,
    "derive": cmd_derive,
    "stability": cmd_stability,
    "welldoc": cmd_welldoc,
    "automatic": cmd_automatic,
}


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        oracle = oracle_for(_read_text(args.sub), _read_text(args.cover))
        code, result, evidence, constants = COMMANDS[args.command](args, oracle)
    except (SearchCapExceeded, ChainCapExceeded, SizeExceeded) as exc:
        print(f"retword: undetermined: {exc}", file=sys.stderr)
        return EXIT_UNDETERMINED
    except InconsistentResult as exc:
        print(f"retword: internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_UNDETERMINED
    except (InputError, ValueError, TypeError, MorphismSyntaxError) as exc:
        print(f"retword: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = report.dumps(report.document(args.command, _inputs(args), result, evidence, constants))
    if args.json:
        Path(args.json).write_text(text)
        verdict = result.get("verdict") if isinstance(result, dict) else None
        print(f"{args.command}: wrote {args.json}" + (f" ({verdict})" if verdict else ""), file=stdout)
    else:
        stdout.write(text)
    return code


def main(argv: list[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
