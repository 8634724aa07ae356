"""Session files: declarations of rings, maps, branches and elements, then checks.

    ring A = Q[x, y] / (y^2 - x^3);
    ring B = Q[t];
    map pi : A -> B = (t^2, t^3);
    branch o on B = (t);
    elem f in B = t as y / x;
    check lipschitz pi element f [max_relation_degree=3];

``#`` starts a comment.  Rationals inside polynomials are written ``3/2``
without spaces; a spaced ``/`` is the quotient or fraction bar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from .arcs import ArcOffVariety, Branch, DEFAULT_TRUNC, make_branch
from .poly import Polynomial, PolyParser, PolySyntaxError, format_poly
from .variety import IllDefinedMorphism, PresentedRing, RingMorphism, make_morphism

KINDS = (
    "lipschitz", "saturation", "seminormal", "lipschitz-seminormal", "integral", "member",
    "radical-member", "dominant", "fibers", "sample-lipschitz", "sample-ideal",
)
FLAG_KEYS = ("max_relation_degree", "max_cofactor_degree", "trunc", "seed", "samples", "arcs", "ideal")
KEYWORDS = ("ring", "map", "branch", "elem", "check", "on", "in", "as", "element", "Q")

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+|#[^\n]*)"
    r"|(?P<rat>\d+/\d+)"
    r"|(?P<num>\d+)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9']*)"
    r"|(?P<arrow>->)"
    r"|(?P<op>[-+*^()])"
    r"|(?P<punct>[\[\]/,;:=])"
)


class SessionError(ValueError):
    """Syntax or semantic error with a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int, kind: str = "syntax"):
        super().__init__(f"{kind} error at line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column
        self.kind = kind


@dataclass(frozen=True)
class RingDecl:
    name: str
    variables: Tuple[str, ...]
    relations: Tuple[Polynomial, ...]


@dataclass(frozen=True)
class MapDecl:
    name: str
    source: str
    target: str
    images: Tuple[Polynomial, ...]


@dataclass(frozen=True)
class BranchDecl:
    name: str
    ring: str
    components: Tuple[Polynomial, ...]  # polynomials in t


@dataclass(frozen=True)
class ElemDecl:
    name: str
    owner: str  # a ring, or a map (element of its target)
    value: Polynomial
    representation: Optional[Tuple[Polynomial, Polynomial]] = None


FlagValue = Union[Fraction, str, Tuple[Polynomial, ...]]


@dataclass(frozen=True)
class Command:
    kind: str
    target: str
    element: Optional[str] = None
    flags: Tuple[Tuple[str, object], ...] = ()
    line: int = 0
    column: int = 0

    def flag(self, key, default=None):
        return dict(self.flags).get(key, default)

    def echo(self) -> str:
        return print_command(self)

    def __eq__(self, other):
        # positions are not part of the structure
        return isinstance(other, Command) and (self.kind, self.target, self.element, self.flags) == (
            other.kind, other.target, other.element, other.flags)

    def __hash__(self):
        return hash((self.kind, self.target, self.element))


Decl = Union[RingDecl, MapDecl, BranchDecl, ElemDecl]


@dataclass
class Session:
    declarations: Dict[str, Decl] = field(default_factory=dict)
    commands: List[Command] = field(default_factory=list)

    def rings(self):
        return [d for d in self.declarations.values() if isinstance(d, RingDecl)]

    def maps(self):
        return [d for d in self.declarations.values() if isinstance(d, MapDecl)]

    def branches_on(self, ring: str):
        return [d for d in self.declarations.values() if isinstance(d, BranchDecl) and d.ring == ring]

    def elems(self):
        return [d for d in self.declarations.values() if isinstance(d, ElemDecl)]

    def __eq__(self, other):
        return (isinstance(other, Session) and list(self.declarations.items()) == list(other.declarations.items())
                and self.commands == other.commands)


# --- lexing -----------------------------------------------------------------------


class _Source:
    def __init__(self, text: str):
        self.text = text
        self.line_starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def locate(self, offset: int) -> Tuple[int, int]:
        if offset < 0:
            offset = len(self.text)
        lo, hi = 0, len(self.line_starts) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.line_starts[mid] <= offset:
                lo = mid
            else:
                hi = mid - 1
        return lo + 1, offset - self.line_starts[lo] + 1


def tokenize(text: str, src: _Source):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise SessionError(f"unexpected character {text[pos]!r}", *src.locate(pos))
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(kind), pos))
        pos = m.end()
    return out


# --- parsing ---------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.src = _Source(text)
        self.toks = tokenize(text, self.src)
        self.i = 0
        self.session = Session()
        self.runtime_rings: Dict[str, PresentedRing] = {}

    # token helpers
    def peek(self, k=0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def error(self, msg, tok=None, kind="syntax"):
        off = tok[2] if tok is not None else len(self.src.text)
        raise SessionError(msg, *self.src.locate(off), kind=kind)

    def take(self, value=None, kind=None):
        tok = self.peek()
        if tok is None:
            self.error(f"expected {value or kind!r}, found end of input")
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            self.error(f"expected {value or kind!r}, found {tok[1]!r}", tok)
        self.i += 1
        return tok

    def at(self, value):
        tok = self.peek()
        return tok is not None and tok[1] == value

    def name(self, what="name"):
        tok = self.peek()
        if tok is None or tok[0] != "name":
            self.error(f"expected {what}, found {tok[1]!r}" if tok else f"expected {what}, found end of input", tok)
        self.i += 1
        return tok

    def poly(self, gens) -> Polynomial:
        parser = PolyParser(self.toks[self.i:], gens)
        try:
            p = parser.expr()
        except PolySyntaxError as e:
            tok = self.peek(parser.i) if parser.i < len(self.toks) - self.i else None
            off = e.pos if e.pos >= 0 else (tok[2] if tok else -1)
            kind = "semantic" if "unknown variable" in str(e) else "syntax"
            raise SessionError(str(e).rsplit(" at offset", 1)[0], *self.src.locate(off), kind=kind) from None
        self.i += parser.i
        return p

    def poly_list(self, gens) -> Tuple[Polynomial, ...]:
        self.take("(")
        out = []
        if not self.at(")"):
            out.append(self.poly(gens))
            while self.at(","):
                self.take(",")
                out.append(self.poly(gens))
        self.take(")")
        return tuple(out)

    def lookup(self, tok, types, what):
        d = self.session.declarations.get(tok[1])
        if d is None:
            self.error(f"undeclared {what} {tok[1]!r}", tok, "semantic")
        if not isinstance(d, types):
            self.error(f"{tok[1]!r} is not a {what}", tok, "semantic")
        return d

    def declare(self, tok, decl):
        if tok[1] in self.session.declarations:
            self.error(f"{tok[1]!r} already declared", tok, "semantic")
        if tok[1] in KEYWORDS:
            self.error(f"{tok[1]!r} is reserved", tok, "semantic")
        self.session.declarations[tok[1]] = decl

    # statements
    def parse(self) -> Session:
        while self.peek() is not None:
            tok = self.peek()
            handler = {"ring": self.ring, "map": self.map, "branch": self.branch,
                       "elem": self.elem, "check": self.check}.get(tok[1]) if tok[0] == "name" else None
            if handler is None:
                self.error(f"expected a declaration or 'check', found {tok[1]!r}", tok)
            handler()
        return self.session

    def ring(self):
        self.take("ring")
        ntok = self.name("ring name")
        self.take("=")
        self.take("Q")
        self.take("[")
        names = [self.name("variable")]
        while self.at(","):
            self.take(",")
            names.append(self.name("variable"))
        self.take("]")
        variables = tuple(t[1] for t in names)
        if len(set(variables)) != len(variables):
            self.error("duplicate variable", names[0], "semantic")
        rels: Tuple[Polynomial, ...] = ()
        if self.at("/"):
            self.take("/")
            rels = self.poly_list(variables)
        self.take(";")
        self.declare(ntok, RingDecl(ntok[1], variables, rels))
        self.runtime_rings[ntok[1]] = PresentedRing(variables, rels, ntok[1])

    def map(self):
        self.take("map")
        ntok = self.name("map name")
        self.take(":")
        stok = self.name("source ring")
        self.take("->")
        ttok = self.name("target ring")
        src = self.lookup(stok, RingDecl, "ring")
        tgt = self.lookup(ttok, RingDecl, "ring")
        self.take("=")
        itok = self.peek()
        images = self.poly_list(tgt.variables)
        if len(images) != len(src.variables):
            self.error(f"{len(images)} images for {len(src.variables)} source variables", itok, "semantic")
        self.take(";")
        try:
            make_morphism(self.runtime_rings[src.name], self.runtime_rings[tgt.name], images)
        except IllDefinedMorphism as e:
            self.error(str(e), itok, "semantic")
        self.declare(ntok, MapDecl(ntok[1], src.name, tgt.name, images))

    def branch(self):
        self.take("branch")
        ntok = self.name("branch name")
        self.take("on")
        rtok = self.name("ring")
        ring = self.lookup(rtok, RingDecl, "ring")
        self.take("=")
        ctok = self.peek()
        comps = self.poly_list(("t",))
        if len(comps) != len(ring.variables):
            self.error(f"{len(comps)} components for {len(ring.variables)} variables", ctok, "semantic")
        self.take(";")
        try:
            make_branch(ntok[1], self.runtime_rings[ring.name], comps)
        except (ArcOffVariety, ValueError) as e:
            self.error(str(e), ctok, "semantic")
        self.declare(ntok, BranchDecl(ntok[1], ring.name, comps))

    def elem(self):
        self.take("elem")
        ntok = self.name("element name")
        self.take("in")
        otok = self.name("ring or map")
        owner = self.lookup(otok, (RingDecl, MapDecl), "ring or map")
        ring = owner if isinstance(owner, RingDecl) else self.session.declarations[owner.target]
        self.take("=")
        value = self.poly(ring.variables)
        rep = None
        if self.at("as"):
            atok = self.take("as")
            if isinstance(owner, MapDecl):
                src = self.session.declarations[owner.source]
            else:
                cands = [m for m in self.session.maps() if m.target == ring.name]
                if len(cands) != 1:
                    self.error(f"representation over an ambiguous source: {len(cands)} maps into {ring.name!r};"
                               " declare the element in a map instead", atok, "semantic")
                src = self.session.declarations[cands[0].source]
            num = self.poly(src.variables)
            self.take("/")
            den = self.poly(src.variables)
            if den.is_zero():
                self.error("zero denominator", atok, "semantic")
            rep = (num, den)
        self.take(";")
        self.declare(ntok, ElemDecl(ntok[1], otok[1], value, rep))

    def check(self):
        ctok = self.take("check")
        ktok = self.name("check kind")
        kind = ktok[1]
        # kinds are hyphenated words lexed as name '-' name ...
        while self.at("-") and self.peek(1) is not None and self.peek(1)[0] == "name" \
                and self.peek()[2] == ktok[2] + len(kind):
            self.take("-")
            kind += "-" + self.name()[1]
        if kind not in KINDS:
            self.error(f"unknown check kind {kind!r}", ktok)
        ttok = self.name("map or ring")
        target = self.lookup(ttok, (MapDecl, RingDecl), "map or ring")
        element = None
        if self.at("element"):
            self.take("element")
            etok = self.name("element")
            self.lookup(etok, ElemDecl, "element")
            element = etok[1]
        flags = ()
        if self.at("["):
            flags = self.flags(target)
        self.take(";")
        if kind != "dominant" and element is None:
            self.error(f"check {kind} needs 'element NAME'", ttok, "semantic")
        needs_map = kind not in ("member", "radical-member", "sample-ideal")
        if needs_map and not isinstance(target, MapDecl):
            self.error(f"check {kind} needs a map, got ring {ttok[1]!r}", ttok, "semantic")
        if isinstance(target, RingDecl) and dict(flags).get("ideal") is None:
            self.error(f"check {kind} on a ring needs an [ideal=(...)] flag", ttok, "semantic")
        line, col = self.src.locate(ctok[2])
        self.session.commands.append(Command(kind, ttok[1], element, flags, line, col))

    def flags(self, target) -> Tuple[Tuple[str, object], ...]:
        self.take("[")
        out = []
        while True:
            ktok = self.name("flag name")
            if ktok[1] not in FLAG_KEYS:
                self.error(f"unknown flag {ktok[1]!r}", ktok, "semantic")
            self.take("=")
            if ktok[1] == "ideal":
                ring = target if isinstance(target, RingDecl) else self.session.declarations[target.target]
                val: object = self.poly_list(ring.variables)
            else:
                vtok = self.peek()
                if vtok is None:
                    self.error("expected a flag value, found end of input")
                if vtok[0] in ("num", "rat"):
                    val = Fraction(vtok[1])
                elif vtok[0] == "name":
                    val = vtok[1]
                else:
                    self.error(f"bad flag value {vtok[1]!r}", vtok)
                self.i += 1
            out.append((ktok[1], val))
            if self.at(","):
                self.take(",")
                continue
            break
        self.take("]")
        return tuple(out)


def parse(text: str) -> Session:
    return _Parser(text).parse()


# --- printing ----------------------------------------------------------------------


def _polys(ps) -> str:
    return "(" + ", ".join(format_poly(p) for p in ps) + ")"


def print_command(c: Command) -> str:
    out = f"check {c.kind} {c.target}"
    if c.element:
        out += f" element {c.element}"
    if c.flags:
        parts = []
        for k, v in c.flags:
            if isinstance(v, tuple):
                parts.append(f"{k}={_polys(v)}")
            else:
                parts.append(f"{k}={v}")
        out += " [" + ", ".join(parts) + "]"
    return out + ";"


def print_session(s: Session) -> str:
    lines = []
    for d in s.declarations.values():
        if isinstance(d, RingDecl):
            rel = f" / {_polys(d.relations)}" if d.relations else ""
            lines.append(f"ring {d.name} = Q[{', '.join(d.variables)}]{rel};")
        elif isinstance(d, MapDecl):
            lines.append(f"map {d.name} : {d.source} -> {d.target} = {_polys(d.images)};")
        elif isinstance(d, BranchDecl):
            lines.append(f"branch {d.name} on {d.ring} = {_polys(d.components)};")
        else:
            rep = ""
            if d.representation:
                num, den = d.representation
                rep = f" as ({format_poly(num)}) / ({format_poly(den)})"
            lines.append(f"elem {d.name} in {d.owner} = {format_poly(d.value)}{rep};")
    lines.extend(print_command(c) for c in s.commands)
    return "\n".join(lines) + ("\n" if lines else "")


# --- runtime objects ----------------------------------------------------------------


@dataclass
class Built:
    rings: Dict[str, PresentedRing]
    maps: Dict[str, RingMorphism]
    branches: Dict[str, Branch]


def build(s: Session, trunc: int = DEFAULT_TRUNC) -> Built:
    rings: Dict[str, PresentedRing] = {}
    maps: Dict[str, RingMorphism] = {}
    branches: Dict[str, Branch] = {}
    for d in s.declarations.values():
        if isinstance(d, RingDecl):
            rings[d.name] = PresentedRing(d.variables, d.relations, d.name)
        elif isinstance(d, MapDecl):
            maps[d.name] = make_morphism(rings[d.source], rings[d.target], d.images)
        elif isinstance(d, BranchDecl):
            branches[d.name] = make_branch(d.name, rings[d.ring], d.components, trunc)
    return Built(rings, maps, branches)
