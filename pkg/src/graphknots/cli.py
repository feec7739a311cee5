"""Command-line interface.

Exit status: 0 on success, 1 on domain errors (malformed expressions,
invalid decompositions), 2 on usage and parse errors.
"""
from __future__ import annotations

import argparse
import sys
from collections import Counter

from .expr import Cable, KnotExpr, MalformedExpression, Sum, U, kit_of, level, normalize, serialize
from .invariants import alexander, genus
from .rhd import (
    InvalidDecomposition, RHDError, RHDParseError, build, classify_pair, extract,
    parse_rhd, validate,
)


class ParseError(ValueError):
    """Syntax error in an expression, with 1-based position."""

    def __init__(self, line: int, column: int, expected: set[str]):
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        want = ", ".join(sorted(self.expected))
        super().__init__(f"line {line}, column {column}: expected one of {want}")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _error(self, expected: set[str]) -> ParseError:
        before = self.text[:self.pos]
        line = before.count("\n") + 1
        column = self.pos - (before.rfind("\n") + 1) + 1
        return ParseError(line, column, expected)

    def _accept(self, token: str) -> bool:
        self._skip()
        if self.text.startswith(token, self.pos):
            self.pos += len(token)
            return True
        return False

    def _expect(self, token: str) -> None:
        if not self._accept(token):
            raise self._error({repr(token)})

    def _int(self) -> int:
        self._skip()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] == "-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            self.pos = start
            raise self._error({"integer"})
        return int(self.text[start:self.pos])

    def expr(self) -> KnotExpr:
        if self._accept("U"):
            return U
        if self._accept("cable("):
            p = self._int()
            self._expect(",")
            q = self._int()
            self._expect(",")
            inner = self.expr()
            self._expect(")")
            return Cable(p, q, inner)
        if self._accept("sum("):
            parts = [self.expr()]
            self._expect(",")
            parts.append(self.expr())
            while self._accept(","):
                parts.append(self.expr())
            self._expect(")")
            return Sum(*parts)
        raise self._error({"'U'", "'cable('", "'sum('"})

    def parse(self) -> KnotExpr:
        e = self.expr()
        self._skip()
        if self.pos != len(self.text):
            raise self._error({"end of input"})
        return e


def parse_expr(s: str) -> KnotExpr:
    """Parse the expression grammar; raises ParseError or MalformedExpression."""
    return _Parser(s).parse()


# ---------------------------------------------------------------------------
# commands


def _kit_lines(e: KnotExpr, name: str = "K") -> list[str]:
    kit = kit_of(e)
    lines = [f"{label} {serialize(x)}" for label, x in kit.elements.items()]
    if kit.top:
        lines.append(f"gamma {name}: " + " ".join(kit.top))
    lines += [f"gamma {label}: " + " ".join(parts) for label, parts in kit.gamma.items()]
    return lines


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="ascii") as fh:
        return fh.read()


def cmd_normalize(args) -> list[str]:
    return [serialize(normalize(parse_expr(args.expr)))]


def cmd_invariants(args) -> list[str]:
    e = normalize(parse_expr(args.expr))
    return [f"alexander {alexander(e)}", f"genus {genus(e)}"]


def cmd_level(args) -> list[str]:
    return [str(level(normalize(parse_expr(args.expr))))]


def cmd_kit(args) -> list[str]:
    return _kit_lines(normalize(parse_expr(args.expr)))


def cmd_build(args) -> list[str]:
    text = build(parse_expr(args.expr)).to_text()
    if args.output in (None, "-"):
        return text.splitlines()
    with open(args.output, "w", encoding="ascii") as fh:
        fh.write(text)
    return []


def cmd_validate(args) -> list[str]:
    violations = validate(parse_rhd(_read(args.rhd)))
    if violations:
        raise _Violations([str(v) for v in violations])
    return ["ok"]


def cmd_extract(args) -> list[str]:
    res = extract(parse_rhd(_read(args.rhd)), args.knot)
    lines = [f"knot {args.knot} {serialize(res.knot_exprs[args.knot])}"]
    lines += _kit_lines(res.knot_exprs[args.knot], args.knot)
    for label in list(res.kit.elements) + [args.knot]:
        parts = []
        if label in res.witness_r:
            parts.append(f"R={res.witness_r[label]}")
        if label in res.witness_gamma:
            parts.append(f"Gamma={res.witness_gamma[label]}")
        if parts:
            lines.append(f"witness {label} " + " ".join(parts))
    return lines


def cmd_classify(args) -> list[str]:
    return [str(classify_pair(parse_rhd(_read(args.rhd)), args.k1, args.k2))]


def cmd_enumerate(args) -> list[str]:
    from .oracle import EnumerationBudget, enumerate_rhds

    budget = EnumerationBudget(args.max_saddles, args.coeff_bound, args.max_depth, args.seed,
                               args.max_sources, args.max_sinks, not args.no_prune)
    total = accepted = 0
    kinds: Counter = Counter()
    lines = []
    for r in enumerate_rhds(budget):
        total += 1
        violations = validate(r)
        if not violations:
            accepted += 1
            if args.show:
                lines += r.to_text().splitlines() + [""]
        for kind in sorted({v.kind for v in violations}):
            kinds[kind] += 1
    lines += [f"enumerated {total}", f"accepted {accepted}"]
    lines += [f"rejected {kind} {n}" for kind, n in sorted(kinds.items())]
    return lines


class _Violations(Exception):
    def __init__(self, lines: list[str]):
        self.lines = lines


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphknots",
        description="Graph knots and round handle decompositions of the 3-sphere.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, func, help_ in (
            ("normalize", cmd_normalize, "print the canonical form"),
            ("invariants", cmd_invariants, "print Alexander polynomial and genus"),
            ("level", cmd_level, "print the graph-knot level"),
            ("kit", cmd_kit, "print the graph kit and its gamma table")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("-e", "--expr", required=True, help="knot expression")
        p.set_defaults(func=func)

    p = sub.add_parser("build", help="write an RHD realizing an expression")
    p.add_argument("-e", "--expr", required=True)
    p.add_argument("-o", "--output", help="output path (default: stdout)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("validate", help="check an RHD file")
    p.add_argument("rhd")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("extract", help="extract a critical knot, its kit and witnesses")
    p.add_argument("rhd")
    p.add_argument("-k", "--knot", required=True, help="critical knot id")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("classify", help="link type of two critical unknots")
    p.add_argument("rhd")
    p.add_argument("k1")
    p.add_argument("k2")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("enumerate", help="exhaustively enumerate and validate small RHDs")
    p.add_argument("--max-saddles", type=int, default=2)
    p.add_argument("--coeff-bound", type=int, default=3)
    p.add_argument("--max-depth", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-sources", type=int, default=None)
    p.add_argument("--max-sinks", type=int, default=None)
    p.add_argument("--no-prune", action="store_true",
                   help="also produce completions of already-rejected prefixes")
    p.add_argument("--show", action="store_true", help="print every accepted RHD")
    p.set_defaults(func=cmd_enumerate)
    return parser


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        lines = args.func(args)
    except _Violations as exc:
        for line in exc.lines:
            print(line, file=out)
        return 1
    except (ParseError, RHDParseError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return 2
    except InvalidDecomposition as exc:
        for v in exc.violations:
            print(str(v), file=out)
        return 1
    except (MalformedExpression, RHDError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return 1
    for line in lines:
        print(line, file=out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
