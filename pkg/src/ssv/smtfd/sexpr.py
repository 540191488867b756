"""Incremental s-expression reader for SMT-LIB 2 scripts."""

from __future__ import annotations


class Symbol(str):
    """Distinguishes symbols from string literals."""

    __slots__ = ()


class SexprSyntaxError(Exception):
    pass


class Reader:
    """Pull-parser over a byte stream; yields one top-level form at a time."""

    def __init__(self, read_chunk):
        self._read = read_chunk  # () -> bytes, b"" on EOF
        self.buf = ""
        self.pos = 0
        self.eof = False

    def _fill(self) -> bool:
        if self.eof:
            return False
        chunk = self._read()
        if not chunk:
            self.eof = True
            return False
        self.buf = self.buf[self.pos:] + chunk.decode("utf-8")
        self.pos = 0
        return True

    def _peek(self) -> str | None:
        while self.pos >= len(self.buf):
            if not self._fill():
                return None
        return self.buf[self.pos]

    def _next(self) -> str | None:
        ch = self._peek()
        if ch is not None:
            self.pos += 1
        return ch

    def _skip_ws(self) -> bool:
        while True:
            ch = self._peek()
            if ch is None:
                return False
            if ch in " \t\r\n":
                self.pos += 1
                continue
            if ch == ";":
                while True:
                    ch = self._next()
                    if ch is None or ch == "\n":
                        break
                continue
            return True

    def read_form(self):
        """Next top-level form, or None at EOF."""
        if not self._skip_ws():
            return None
        ch = self._peek()
        if ch == "(":
            self.pos += 1
            items = []
            while True:
                if not self._skip_ws():
                    raise SexprSyntaxError("unexpected EOF in list")
                if self._peek() == ")":
                    self.pos += 1
                    return items
                items.append(self.read_form())
        if ch == ")":
            raise SexprSyntaxError("unbalanced ')'")
        if ch == '"':
            self.pos += 1
            out = []
            while True:
                c = self._next()
                if c is None:
                    raise SexprSyntaxError("unexpected EOF in string")
                if c == '"':
                    if self._peek() == '"':  # doubled quote escape
                        self.pos += 1
                        out.append('"')
                        continue
                    return "".join(out)
                out.append(c)
        if ch == "|":
            self.pos += 1
            out = []
            while True:
                c = self._next()
                if c is None:
                    raise SexprSyntaxError("unexpected EOF in quoted symbol")
                if c == "|":
                    return Symbol("".join(out))
                out.append(c)
        # atom
        out = []
        while True:
            c = self._peek()
            if c is None or c in ' \t\r\n()";|':
                break
            out.append(c)
            self.pos += 1
        atom = "".join(out)
        if not atom:
            raise SexprSyntaxError(f"stray character {ch!r}")
        if atom.lstrip("-").isdigit():
            return int(atom)
        return Symbol(atom)


def to_text(form) -> str:
    if isinstance(form, list):
        return "(" + " ".join(to_text(f) for f in form) + ")"
    if isinstance(form, Symbol):
        return str(form)
    if isinstance(form, str):
        return '"' + form.replace('"', '""') + '"'
    return str(form)
