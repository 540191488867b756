"""SMT-LIB 2 stdio driver for the finite-domain solver.

Reads commands from stdin, answers ``sat``/``unsat``/``unknown`` to each
``(check-sat)``, and supports ``(reset)``, ``(echo ...)`` and ``(exit)``,
which is all the subprocess client requires. Assertions outside the finite
fragment are dropped: an unsat result on the remaining set is still sound,
while a sat result degrades to unknown.
"""

from __future__ import annotations

import sys

from .bitblast import Blaster, SortError, Unsupported
from .cdcl import SatSolver
from .sexpr import Reader, SexprSyntaxError, Symbol


class Session:
    def __init__(self):
        self.reset()

    def reset(self):
        self.datatypes: dict[str, tuple[str, ...]] = {}
        self.funs: dict[str, tuple[tuple[str, ...], str]] = {}
        self.opaque: set[str] = set()
        self.assertions: list = []

    def declare_datatype(self, name: str, ctor_decls) -> None:
        ctors = []
        for ctor in ctor_decls:
            if isinstance(ctor, list):
                if len(ctor) != 1:
                    raise Unsupported("constructors with fields")
                ctors.append(str(ctor[0]))
            else:
                ctors.append(str(ctor))
        self.datatypes[name] = tuple(ctors)

    def sort_name(self, form) -> str:
        name = str(form)
        if name in ("Bool", "Int") or name in self.datatypes or name in self.opaque:
            return name
        raise Unsupported(f"unknown sort {name}")

    def check_sat(self) -> str:
        blaster = Blaster(self.datatypes, self.funs)
        dropped = 0
        for assertion in self.assertions:
            try:
                lit = blaster.bool_term(assertion)
            except Unsupported:
                dropped += 1
                continue
            blaster.solver.add_clause([lit])
        result = blaster.solver.solve()
        if result is False:
            return "unsat"
        if result is True and dropped == 0:
            return "sat"
        return "unknown"


def process(form, session: Session, out) -> bool:
    """Handle one command; returns False when the session should end."""
    if not isinstance(form, list) or not form:
        raise Unsupported(f"bad command {form!r}")
    cmd = str(form[0])
    if cmd == "exit":
        return False
    if cmd == "reset":
        session.reset()
    elif cmd in ("set-logic", "set-option", "set-info"):
        pass
    elif cmd == "echo":
        print(form[1] if len(form) > 1 else "", file=out, flush=True)
    elif cmd == "declare-datatypes":
        sort_decls, ctor_blocks = form[1], form[2]
        for decl, ctors in zip(sort_decls, ctor_blocks):
            name = str(decl[0] if isinstance(decl, list) else decl)
            session.declare_datatype(name, ctors)
    elif cmd == "declare-datatype":
        session.declare_datatype(str(form[1]), form[2])
    elif cmd == "declare-sort":
        session.opaque.add(str(form[1]))
    elif cmd == "declare-const":
        session.funs[str(form[1])] = ((), session.sort_name(form[2]))
    elif cmd == "declare-fun":
        args = tuple(session.sort_name(s) for s in form[2])
        session.funs[str(form[1])] = (args, session.sort_name(form[3]))
    elif cmd == "assert":
        session.assertions.append(form[1])
    elif cmd == "check-sat":
        print(session.check_sat(), file=out, flush=True)
    elif cmd in ("push", "pop", "get-model", "get-value"):
        print(f'(error "unsupported command {cmd}")', file=out, flush=True)
    else:
        print(f'(error "unknown command {cmd}")', file=out, flush=True)
    return True


def main() -> int:
    session = Session()
    reader = Reader(sys.stdin.buffer.read1)
    out = sys.stdout
    while True:
        try:
            form = reader.read_form()
        except SexprSyntaxError as exc:
            print(f'(error "{exc}")', file=out, flush=True)
            return 1
        if form is None:
            return 0
        try:
            if not process(form, session, out):
                return 0
        except Unsupported:
            # a declaration we cannot even record poisons later checks, so
            # degrade the next check-sat instead of crashing
            if isinstance(form, list) and form and str(form[0]) == "check-sat":
                print("unknown", file=out, flush=True)
            else:
                session.assertions.append(Symbol("unsupported!"))
        except Exception as exc:  # noqa: BLE001 - keep the session alive
            print(f'(error "{type(exc).__name__}: {exc}")', file=out, flush=True)


if __name__ == "__main__":
    sys.exit(main())
