"""Command-line front end: ``ground``, ``models``, ``query``, ``repl``, ``harness``.

Exit codes: 0 success / entailed, 1 no models / not entailed, 2 input error,
3 atom budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, TextIO

from .errors import AtomBudgetExceeded, HybridUpdateError
from .formula import Formula
from .grounder import (
    SurfaceKb, check_individuals, format_update, ground_kb, parse_formula, parse_kb, parse_query,
)
from .harness import PROPERTY_NAMES, InstanceConfig, check_property
from .model import DEFAULT_MAX_ATOMS, InterpretationSet, check_budget
from .program import UpdateProblem
from .solver import SolveResult, atom_status_report, entailment_in, solve

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

NO_MODELS = "no minimal change dynamic stable model"


def _dump(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True)


def _names(atoms) -> list[str]:
    return [str(a) for a in atoms]


def model_record(m: InterpretationSet, interpretations: bool = False) -> dict:
    status = atom_status_report(m)
    rec = {
        "size": status.size,
        "known_true": _names(status.known_true),
        "known_false": _names(status.known_false),
        "unknown": _names(status.unknown),
    }
    if interpretations:
        rec["interpretations"] = [_names(m.sig.atoms_in(w)) for w in m.ordered]
    return rec


def format_models_text(result: SolveResult, interpretations: bool = False) -> str:
    if not result.models:
        return NO_MODELS
    blocks = []
    for k, m in enumerate(result.models, 1):
        rec = model_record(m, interpretations)
        lines = [f"model {k} ({rec['size']} interpretations)"]
        for key, label in (("known_true", "known true"), ("known_false", "known false"), ("unknown", "unknown")):
            lines.append(f"  {label + ':':<13}{', '.join(rec[key]) or '-'}")
        if interpretations:
            lines += ["  {" + ", ".join(i) + "}" for i in rec["interpretations"]]
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks)


def models_json(result: SolveResult, interpretations: bool = False, **extra) -> dict:
    data = {
        "models": [model_record(m, interpretations) for m in result.models],
        "model_count": len(result.models),
    }
    data.update(extra)
    return data


def load_problem(path: str, prefix: int | None = None) -> tuple[SurfaceKb, UpdateProblem]:
    kb = parse_kb(Path(path).read_text(encoding="utf-8"))
    if prefix is not None:
        kb = SurfaceKb(kb.constants, kb.tbox, kb.rules, kb.updates[:prefix])
    return kb, ground_kb(kb)


# -- batch commands ---------------------------------------------------------


def cmd_ground(args, out: TextIO) -> int:
    kb, problem = load_problem(args.file, args.prefix)
    sig = problem.signature
    check_budget(sig, args.max_atoms)
    data = {
        "atom_count": len(sig),
        "constants": list(sig.constants),
        "predicates": [{"name": n, "arity": a} for n, a in sig.predicates],
        "ground_rules": [str(r) for r in problem.program.rules],
        "tbox": [str(f) for f in problem.tbox],
        "updates": [str(f) for f in problem.updates],
    }
    if args.format == "json":
        print(_dump(data), file=out)
        return EXIT_OK
    print(f"atoms: {len(sig)}", file=out)
    print(f"constants: {' '.join(sig.constants) or '-'}", file=out)
    print("predicates: " + (", ".join(f"{n}/{a}" for n, a in sig.predicates) or "-"), file=out)
    print(f"ground rules: {len(problem.program)}", file=out)
    for r in problem.program.rules:
        print(f"  {r}", file=out)
    print(f"ground tbox formulas: {len(problem.tbox)}", file=out)
    for f in problem.tbox:
        print(f"  {f}", file=out)
    print(f"updates: {len(problem.updates)}", file=out)
    for f in problem.updates:
        print(f"  {f}", file=out)
    return EXIT_OK


def cmd_models(args, out: TextIO) -> int:
    _, problem = load_problem(args.file, args.prefix)
    result = solve(problem, args.max_atoms)
    if args.format == "json":
        print(_dump(models_json(result, args.list_interpretations)), file=out)
    else:
        print(format_models_text(result, args.list_interpretations), file=out)
    return EXIT_OK if result.models else EXIT_NEGATIVE


def _query_output(result: SolveResult, query: Formula, mode: str, fmt: str, out: TextIO) -> int:
    verdict = entailment_in(result, query, mode)
    if fmt == "json":
        print(_dump(models_json(result, entails=verdict.entailed, mode=mode)), file=out)
    else:
        count = verdict.model_count
        print(f"{str(verdict.entailed).lower()} ({mode}, {count} model{'s' * (count != 1)})", file=out)
    return EXIT_OK if verdict.entailed else EXIT_NEGATIVE


def cmd_query(args, out: TextIO) -> int:
    kb, problem = load_problem(args.file, args.prefix)
    query = parse_query(args.formula, kb)
    result = solve(problem, args.max_atoms)
    return _query_output(result, query, args.mode, args.format, out)


def cmd_harness(args, out: TextIO) -> int:
    cfg = InstanceConfig(
        atoms=args.atoms, rules=args.rules, neg_prob=args.neg_prob,
        tbox_clauses=args.tbox_clauses, updates=args.updates, seed=args.seed,
    )
    report = check_property(args.property, cfg, args.trials)
    if args.format == "json":
        print(_dump(report.to_dict()), file=out)
    else:
        print(report.format_text(), file=out)
    return EXIT_OK if report.ok else EXIT_NEGATIVE


# -- interactive session ----------------------------------------------------


@dataclass
class Session:
    """A base KB plus the updates applied interactively.

    Only surface text is stored; every re-solve replays the whole sequence
    from the base KB.
    """

    kb_text: str
    history: list[dict] = field(default_factory=list)
    max_atoms: int = DEFAULT_MAX_ATOMS
    _cache: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        self.base = parse_kb(self.kb_text)

    def surface(self, extra: tuple[str, ...] = ()) -> SurfaceKb:
        texts = [h["update"] for h in self.history] + list(extra)
        updates = self.base.updates + tuple(parse_formula(t) for t in texts)
        kb = SurfaceKb(self.base.constants, self.base.tbox, self.base.rules, updates)
        for u in updates[len(self.base.updates):]:
            check_individuals(u, kb.constants)
        return kb

    def solve(self) -> tuple[SurfaceKb, UpdateProblem, SolveResult]:
        key = tuple(h["update"] for h in self.history)
        if self._cache is None or self._cache[0] != key:
            kb = self.surface()
            problem = ground_kb(kb)
            self._cache = (key, kb, problem, solve(problem, self.max_atoms))
        return self._cache[1:]

    def apply(self, text: str) -> None:
        """Append an update; the session is unchanged if it does not parse, ground or solve."""
        kb = self.surface((text,))
        solve(ground_kb(kb), self.max_atoms)
        self.history.append(
            {"update": text, "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds")}
        )

    def undo(self) -> str:
        if not self.history:
            raise HybridUpdateError("nothing to undo")
        return self.history.pop()["update"]

    def to_json(self) -> dict:
        return {"kb": self.kb_text, "history": list(self.history)}

    def save(self, path: str) -> None:
        Path(path).write_text(_dump(self.to_json()) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str, max_atoms: int = DEFAULT_MAX_ATOMS) -> Session:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        session = cls(data["kb"], [dict(h) for h in data.get("history", [])], max_atoms)
        session.solve()
        return session


REPL_HELP = """commands:
  :update <formula>.   append an ABox update and re-solve
  :undo                drop the last interactive update
  :models              list the current models
  :query <formula>.    skeptical and credulous entailment of an MKNF formula
  :status              sequence, model count and atom count
  :save <path>         write the session (KB text + update history)
  :load <path>         resume a saved session
  :quit                leave"""


class Repl:
    def __init__(self, session: Session):
        self.session = session

    def handle(self, line: str) -> tuple[str, bool]:
        """Run one command; returns (output, keep_going). Errors leave the session unchanged."""
        line = line.strip()
        if not line or line.startswith("#"):
            return "", True
        cmd, _, arg = line.partition(" ")
        arg = arg.strip()
        try:
            handler = self._commands().get(cmd)
            if handler is None:
                return f"error: unknown command {cmd!r} (try :help)", True
            return handler(arg)
        except AtomBudgetExceeded as exc:
            return f"error: {exc}", True
        except (HybridUpdateError, OSError, ValueError, KeyError) as exc:
            return f"error: {exc}", True

    def _commands(self) -> dict[str, Callable[[str], tuple[str, bool]]]:
        return {
            ":update": self._update, ":undo": self._undo, ":models": self._models,
            ":query": self._query, ":status": self._status, ":save": self._save,
            ":load": self._load, ":quit": lambda _: ("", False), ":help": lambda _: (REPL_HELP, True),
        }

    def _update(self, arg: str):
        if not arg:
            raise HybridUpdateError(":update needs a formula")
        self.session.apply(arg)
        _, _, result = self.session.solve()
        return f"ok, {len(result.models)} model(s)", True

    def _undo(self, arg: str):
        dropped = self.session.undo()
        _, _, result = self.session.solve()
        return f"undid {dropped}, {len(result.models)} model(s)", True

    def _models(self, arg: str):
        _, _, result = self.session.solve()
        return format_models_text(result, arg == "--list-interpretations"), True

    def _query(self, arg: str):
        kb, problem, result = self.session.solve()
        query = parse_query(arg, kb)
        lines = []
        for mode in ("skeptical", "credulous"):
            v = entailment_in(result, query, mode)
            lines.append(f"{mode}: {str(v.entailed).lower()}")
        lines.append(f"models: {len(result.models)}")
        return "\n".join(lines), True

    def _status(self, arg: str):
        kb, problem, result = self.session.solve()
        lines = [f"atoms: {len(problem.signature)}", f"models: {len(result.models)}", "updates:"]
        base = len(self.session.base.updates)
        for k, u in enumerate(kb.updates):
            origin = "file" if k < base else self.session.history[k - base]["timestamp"]
            lines.append(f"  {k + 1}. {format_update(u)}.  [{origin}]")
        return "\n".join(lines), True

    def _save(self, arg: str):
        if not arg:
            raise HybridUpdateError(":save needs a path")
        self.session.save(arg)
        return f"saved to {arg}", True

    def _load(self, arg: str):
        if not arg:
            raise HybridUpdateError(":load needs a path")
        self.session = Session.load(arg, self.session.max_atoms)
        _, _, result = self.session.solve()
        return f"loaded {arg}, {len(result.models)} model(s)", True


def cmd_repl(args, out: TextIO, stdin: TextIO | None = None) -> int:
    stdin = stdin or sys.stdin
    if args.session:
        session = Session.load(args.session, args.max_atoms)
    else:
        session = Session(Path(args.file).read_text(encoding="utf-8"), max_atoms=args.max_atoms)
    session.solve()
    repl = Repl(session)
    interactive = stdin.isatty()
    if interactive:
        print("hybrid-update REPL, :help for commands", file=out)
    while True:
        if interactive:
            print("> ", end="", file=out, flush=True)
        line = stdin.readline()
        if not line:
            break
        text, keep_going = repl.handle(line)
        if text:
            print(text, file=out)
        if not keep_going:
            break
    return EXIT_OK


# -- entry point ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-atoms", type=int, default=DEFAULT_MAX_ATOMS, metavar="N")
    common.add_argument("--format", choices=("text", "json"), default="text")

    kbfile = argparse.ArgumentParser(add_help=False)
    kbfile.add_argument("file", help="knowledge-base file")
    kbfile.add_argument("--prefix", type=int, metavar="N", help="use only the first N updates")

    parser = argparse.ArgumentParser(
        prog="hybrid-update",
        description="Minimal change updates of hybrid knowledge bases (TBox + rules) by ABox sequences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("ground", parents=[common, kbfile], help="print the grounded KB")
    p = sub.add_parser("models", parents=[common, kbfile], help="list the dynamic stable models")
    p.add_argument("--list-interpretations", action="store_true")
    p = sub.add_parser("query", parents=[common, kbfile], help="decide entailment of a formula")
    p.add_argument("formula")
    p.add_argument("--mode", choices=("skeptical", "credulous"), default="skeptical")
    p = sub.add_parser("repl", parents=[common], help="interactive update session")
    p.add_argument("file", nargs="?", help="knowledge-base file")
    p.add_argument("--session", help="resume a saved session file")
    p = sub.add_parser("harness", parents=[common], help="run a randomised property check")
    p.add_argument("property", choices=PROPERTY_NAMES)
    p.add_argument("trials", type=int, nargs="?", default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--atoms", type=int, default=5, help="atom count bound")
    p.add_argument("--rules", type=int, default=6, help="rule count bound")
    p.add_argument("--neg-prob", type=float, default=0.4)
    p.add_argument("--tbox-clauses", type=int, default=2)
    p.add_argument("--updates", type=int, default=2, help="update sequence length bound")
    return parser


COMMANDS = {
    "ground": cmd_ground, "models": cmd_models, "query": cmd_query,
    "repl": cmd_repl, "harness": cmd_harness,
}


def main(argv: list[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "repl" and not (args.file or args.session):
        parser.error("repl needs a KB file or --session")
    try:
        return COMMANDS[args.command](args, out)
    except AtomBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (HybridUpdateError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
