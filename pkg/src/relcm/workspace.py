"""Textual workspaces: a ring plus named polynomials, ideals, modules and sequences.

Grammar (statements end with ``;``, ``#`` starts a comment)::

    ring Q[u,v,w] grevlex;             # or GF(2)[x,y] lex; optional weights (1,2) and mod <...>
    let a1 = v*(1-u);
    ideal a = <a1, a2, a3>;            # or: ideal m = irrelevant;
    module R = free (0);               # twists of a free module
    module T = quotient <x*z, x*w>;    # S/I, optional "twist k"
    module M = coker [[x, y], [z, w]] twists (0, 0);
    seq s = (a1, a2, a3);
    option budget.B = 3;
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .field import Field
from .ideals import IdealHandle, maximal_ideal
from .modules import ModulePresentation
from .ring import ParseError, RingContext, parse_poly

OPTION_TYPES = {"budget.B": int, "budget.samples": int, "budget.permLimit": int, "seed": int,
                "localMode": bool, "samples": int, "stageBound": int}


class WorkspaceError(KeyError):
    def __str__(self):
        return self.args[0] if self.args else ""


@dataclass
class Workspace:
    ring: RingContext
    lets: dict = field(default_factory=dict)
    ideals: dict = field(default_factory=dict)
    modules: dict = field(default_factory=dict)
    sequences: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)

    def _get(self, table: dict, kind: str, name: str):
        try:
            return table[name]
        except KeyError:
            known = ", ".join(sorted(table)) or "none"
            raise WorkspaceError(f"no {kind} named {name!r} (known: {known})") from None

    def ideal(self, name: str) -> IdealHandle:
        return self._get(self.ideals, "ideal", name)

    def module(self, name: str) -> ModulePresentation:
        return self._get(self.modules, "module", name)

    def sequence(self, spec: str) -> list:
        """A named sequence, or a comma-separated list of expressions over the lets."""
        if spec in self.sequences:
            return list(self.sequences[spec])
        parts = [p.strip() for p in _split_top(spec, 0)[0]]
        if not parts or any(not p for p in parts):
            raise WorkspaceError(f"no sequence named {spec!r}")
        try:
            return [parse_poly(p, self.ring, self.lets) for p in parts]
        except ParseError as exc:
            raise WorkspaceError(f"cannot read sequence {spec!r}: {exc}") from None

    def names(self) -> dict:
        return {"ideals": sorted(self.ideals), "modules": sorted(self.modules),
                "sequences": sorted(self.sequences), "lets": sorted(self.lets)}


# -- lexical helpers -------------------------------------------------------------------

def _strip_comments(text: str) -> str:
    # keep offsets stable: blank out comment characters instead of deleting them
    return re.sub(r"#[^\n]*", lambda m: " " * len(m.group(0)), text)


def _position(text: str, offset: int):
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def _statements(text: str):
    """(statement text, start offset) pairs split at top-level semicolons."""
    out, depth, start = [], 0, 0
    for k, ch in enumerate(text):
        if ch in "([<":
            depth += 1
        elif ch in ")]>":
            depth -= 1
        elif ch == ";" and depth <= 0:
            out.append((text[start:k], start))
            start = k + 1
            depth = 0
    if text[start:].strip():
        raise ParseError("missing ';' after last statement", *_position(text, len(text.rstrip())))
    return out


def _split_top(s: str, base: int):
    """Split at top-level commas; returns (parts, offsets)."""
    parts, offs, depth, start = [], [], 0, 0
    for k, ch in enumerate(s):
        if ch in "([<":
            depth += 1
        elif ch in ")]>":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(s[start:k])
            offs.append(base + start)
            start = k + 1
    if s[start:].strip() or parts:
        parts.append(s[start:])
        offs.append(base + start)
    return parts, offs


class _Reader:
    def __init__(self, text: str):
        self.text = _strip_comments(text)
        self.ws: Workspace | None = None
        self.seen: dict = {}

    def error(self, msg, offset):
        raise ParseError(msg, *_position(self.text, offset))

    def poly(self, s: str, offset: int):
        lead = len(s) - len(s.lstrip())
        line, col = _position(self.text, offset + lead)
        if not s.strip():
            self.error("empty expression", offset)
        return parse_poly(s.strip(), self.ws.ring, self.ws.lets, line, col)

    def poly_list(self, s: str, offset: int):
        parts, offs = _split_top(s, offset)
        return [self.poly(p, o) for p, o in zip(parts, offs)]

    def bracketed(self, s: str, offset: int, open_: str, close: str):
        lead = len(s) - len(s.lstrip())
        t = s.strip()
        if not (t.startswith(open_) and t.endswith(close)):
            self.error(f"expected {open_}...{close}", offset + lead)
        return t[1:-1], offset + lead + 1

    def declare(self, name: str, offset: int):
        if name in self.seen:
            self.error(f"duplicate name {name!r}", offset)
        if self.ws is not None and name in self.ws.ring.variables:
            self.error(f"name {name!r} clashes with a ring variable", offset)
        self.seen[name] = offset

    # statements
    def run(self) -> Workspace:
        for stmt, off in _statements(self.text):
            if not stmt.strip():
                continue
            lead = len(stmt) - len(stmt.lstrip())
            body, boff = stmt.strip(), off + lead
            kw = body.split(None, 1)[0]
            handler = getattr(self, "stmt_" + kw, None)
            if handler is None:
                self.error(f"unknown statement {kw!r}", boff)
            if kw != "ring" and self.ws is None:
                self.error("the ring must be declared first", boff)
            handler(body, boff)
        if self.ws is None:
            raise ParseError("no ring declared", 1, 1)
        return self.ws

    def _name_eq(self, body, off, kw):
        m = re.match(rf"{kw}\s+([A-Za-z_][A-Za-z_0-9]*)\s*=\s*", body)
        if not m:
            self.error(f"expected '{kw} NAME = ...'", off)
        self.declare(m.group(1), off + m.start(1))
        return m.group(1), body[m.end():], off + m.end()

    def stmt_ring(self, body, off):
        if self.ws is not None:
            self.error("ring declared twice", off)
        m = re.match(r"ring\s+(Q|QQ|GF\((\d+)\))\s*\[([^\]]*)\]\s*(grevlex|lex)?\s*", body)
        if not m:
            self.error("expected 'ring Q[x,y,...] grevlex'", off)
        char = int(m.group(2)) if m.group(2) else 0
        names = [v.strip() for v in m.group(3).split(",") if v.strip()]
        rest, roff = body[m.end():], off + m.end()
        weights, mod = None, None
        wm = re.match(r"weights\s*\(([^)]*)\)\s*", rest)
        if wm:
            weights = [int(w) for w in wm.group(1).split(",")]
            rest, roff = rest[wm.end():], roff + wm.end()
        mm = re.match(r"mod\s*", rest)
        if mm:
            mod = (rest[mm.end():], roff + mm.end())
        elif rest.strip():
            self.error(f"unexpected text {rest.strip()!r}", roff)
        try:
            Field(char)
            ring = RingContext(names, char, m.group(4) or "grevlex", weights)
        except ValueError as exc:
            self.error(str(exc), off)
        self.ws = Workspace(ring)
        if mod:
            inner, ioff = self.bracketed(*mod, "<", ">")
            rels = self.poly_list(inner, ioff)
            try:
                self.ws.ring = ring.quotient(rels)
            except ValueError as exc:
                self.error(str(exc), mod[1])

    def stmt_let(self, body, off):
        name, rest, roff = self._name_eq(body, off, "let")
        self.ws.lets[name] = self.poly(rest, roff)

    def stmt_ideal(self, body, off):
        name, rest, roff = self._name_eq(body, off, "ideal")
        if rest.strip() == "irrelevant":
            self.ws.ideals[name] = maximal_ideal(self.ws.ring)
            return
        inner, ioff = self.bracketed(rest, roff, "<", ">")
        self.ws.ideals[name] = IdealHandle(self.ws.ring, self.poly_list(inner, ioff))

    def stmt_seq(self, body, off):
        name, rest, roff = self._name_eq(body, off, "seq")
        inner, ioff = self.bracketed(rest, roff, "(", ")")
        self.ws.sequences[name] = self.poly_list(inner, ioff)

    def _ints(self, s, off):
        inner, _ = self.bracketed(s, off, "(", ")")
        try:
            return [int(t) for t in inner.split(",") if t.strip()]
        except ValueError:
            self.error("expected integers", off)

    def stmt_module(self, body, off):
        name, rest, roff = self._name_eq(body, off, "module")
        ring = self.ws.ring
        m = re.match(r"(free|quotient|coker)\s*", rest)
        if not m:
            self.error("expected 'free', 'quotient' or 'coker'", roff)
        kind, rest, roff = m.group(1), rest[m.end():], roff + m.end()
        if kind == "free":
            self.ws.modules[name] = ModulePresentation.free(ring, self._ints(rest, roff))
            return
        if kind == "quotient":
            tm = re.search(r"\btwist\s+(-?\d+)\s*$", rest)
            twist = 0
            if tm:
                twist = int(tm.group(1))
                rest = rest[:tm.start()]
            inner, ioff = self.bracketed(rest, roff, "<", ">")
            M = ModulePresentation.cyclic(ring, self.poly_list(inner, ioff), twist)
            if not M.graded and ring.ambient().is_standard_grading() and tm:
                self.error("quotient by an inhomogeneous ideal cannot carry a twist", roff)
            self.ws.modules[name] = M
            return
        tm = re.search(r"\btwists\s*(\([^)]*\))\s*$", rest)
        twists = None
        if tm:
            twists = self._ints(tm.group(1), roff + tm.start(1))
            rest = rest[:tm.start()]
        inner, ioff = self.bracketed(rest, roff, "[", "]")
        rows_txt, rows_off = _split_top(inner, ioff)
        rows = []
        for r, o in zip(rows_txt, rows_off):
            rin, rio = self.bracketed(r, o, "[", "]")
            rows.append(self.poly_list(rin, rio))
        if len({len(r) for r in rows}) > 1:
            self.error("matrix rows have different lengths", roff)
        if twists is not None and len(twists) != len(rows):
            self.error(f"{len(rows)} rows but {len(twists)} twists", roff)
        M = ModulePresentation.from_matrix(ring, rows, twists)
        if twists is not None and not M.graded:
            self.error("coker matrix is not homogeneous for the declared twists", roff)
        self.ws.modules[name] = M

    def stmt_option(self, body, off):
        m = re.match(r"option\s+([A-Za-z_.]+)\s*=\s*(\S+)\s*$", body)
        if not m:
            self.error("expected 'option KEY = VALUE'", off)
        key, val = m.group(1), m.group(2)
        typ = OPTION_TYPES.get(key)
        if typ is None:
            self.error(f"unknown option {key!r}", off + m.start(1))
        if typ is bool:
            if val not in ("true", "false"):
                self.error("expected true or false", off + m.start(2))
            self.ws.options[key] = val == "true"
        else:
            try:
                self.ws.options[key] = typ(val)
            except ValueError:
                self.error(f"bad value {val!r}", off + m.start(2))


def parse_workspace(text: str) -> Workspace:
    """Parse and validate a workspace; raises ParseError with line and column."""
    return _Reader(text).run()


def load_workspace(path) -> Workspace:
    with open(path, encoding="utf-8") as fh:
        return parse_workspace(fh.read())
