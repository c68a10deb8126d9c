"""Formula AST, concrete syntax, prenex transformation, ranks, and
fragment classification.

Element variables are lowercase identifiers, set variables start uppercase.
Precedence: ! > & > | > -> > <->; quantifier bodies extend maximally to the
right.  ASTs are immutable; parse(print(f)) is structural identity.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .errors import FormatError, ScopeError, SemanticError

PKINDS = ("ttw", "bog", "brg", "atw", "size", "adbrg")

_RESERVED = {"exists", "forall", "Exists", "Forall", "in", "card",
             "dp", "conn", "ttwle", "color", "E"}


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EdgeAtom:
    x: str
    y: str


@dataclass(frozen=True)
class EqAtom:
    x: str
    y: str


@dataclass(frozen=True)
class MemberAtom:
    x: str
    setvar: str


@dataclass(frozen=True)
class ColorAtom:
    color: str
    x: str


@dataclass(frozen=True)
class CardModAtom:
    setvar: str
    modulus: int
    residue: int


@dataclass(frozen=True)
class DpAtom:
    pairs: tuple  # ((s, t), ...)


@dataclass(frozen=True)
class ConnAtom:
    x: str
    y: str
    deleted: tuple = ()


@dataclass(frozen=True)
class TtwLeAtom:
    bound: int
    vars: tuple


@dataclass(frozen=True)
class Not:
    body: object


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Implies:
    left: object
    right: object


@dataclass(frozen=True)
class Iff:
    left: object
    right: object


@dataclass(frozen=True)
class Exists:
    var: str
    body: object


@dataclass(frozen=True)
class Forall:
    var: str
    body: object


@dataclass(frozen=True)
class SetExists:
    pkind: str
    bound: int
    var: str
    body: object


@dataclass(frozen=True)
class SetForall:
    pkind: str
    bound: int
    var: str
    body: object


ATOMS = (EdgeAtom, EqAtom, MemberAtom, ColorAtom, CardModAtom, DpAtom,
         ConnAtom, TtwLeAtom)
BINARY = {And: "&", Or: "|", Implies: "->", Iff: "<->"}
SET_QUANTIFIERS = (SetExists, SetForall)
ELEMENT_QUANTIFIERS = (Exists, Forall)


def conj(parts):
    """Conjunction of one or more formulas, balanced so that very wide
    conjunctions stay shallow."""
    return _balance(list(parts), And)


def disj(parts):
    return _balance(list(parts), Or)


def _balance(parts, op):
    if len(parts) == 1:
        return parts[0]
    mid = len(parts) // 2
    return op(_balance(parts[:mid], op), _balance(parts[mid:], op))


def children(node):
    if isinstance(node, Not):
        return (node.body,)
    if isinstance(node, (And, Or, Implies, Iff)):
        return (node.left, node.right)
    if isinstance(node, (Exists, Forall, SetExists, SetForall)):
        return (node.body,)
    return ()


def walk(node):
    yield node
    for c in children(node):
        yield from walk(c)


def free_vars(node, bound=frozenset()):
    """Free element and set variables, as one set of names."""
    if isinstance(node, EdgeAtom):
        return {node.x, node.y} - bound
    if isinstance(node, EqAtom):
        return {node.x, node.y} - bound
    if isinstance(node, MemberAtom):
        return {node.x, node.setvar} - bound
    if isinstance(node, ColorAtom):
        return {node.x} - bound
    if isinstance(node, CardModAtom):
        return {node.setvar} - bound
    if isinstance(node, DpAtom):
        return {v for p in node.pairs for v in p} - bound
    if isinstance(node, ConnAtom):
        return ({node.x, node.y} | set(node.deleted)) - bound
    if isinstance(node, TtwLeAtom):
        return set(node.vars) - bound
    if isinstance(node, Not):
        return free_vars(node.body, bound)
    if isinstance(node, (And, Or, Implies, Iff)):
        return free_vars(node.left, bound) | free_vars(node.right, bound)
    if isinstance(node, (Exists, Forall, SetExists, SetForall)):
        return free_vars(node.body, bound | {node.var})
    raise TypeError(f"not a formula node: {node!r}")


def rename(node, mapping):
    """Simultaneous variable renaming (no capture checks; callers rename
    apart first)."""
    def m(v):
        return mapping.get(v, v)

    if isinstance(node, EdgeAtom):
        return EdgeAtom(m(node.x), m(node.y))
    if isinstance(node, EqAtom):
        return EqAtom(m(node.x), m(node.y))
    if isinstance(node, MemberAtom):
        return MemberAtom(m(node.x), m(node.setvar))
    if isinstance(node, ColorAtom):
        return ColorAtom(node.color, m(node.x))
    if isinstance(node, CardModAtom):
        return CardModAtom(m(node.setvar), node.modulus, node.residue)
    if isinstance(node, DpAtom):
        return DpAtom(tuple((m(s), m(t)) for s, t in node.pairs))
    if isinstance(node, ConnAtom):
        return ConnAtom(m(node.x), m(node.y), tuple(m(z) for z in node.deleted))
    if isinstance(node, TtwLeAtom):
        return TtwLeAtom(node.bound, tuple(m(v) for v in node.vars))
    if isinstance(node, Not):
        return Not(rename(node.body, mapping))
    if isinstance(node, (And, Or, Implies, Iff)):
        return type(node)(rename(node.left, mapping), rename(node.right, mapping))
    if isinstance(node, (Exists, Forall)):
        return type(node)(m(node.var), rename(node.body, mapping))
    if isinstance(node, (SetExists, SetForall)):
        return type(node)(node.pkind, node.bound, m(node.var),
                          rename(node.body, mapping))
    raise TypeError(f"not a formula node: {node!r}")


def is_setvar(name):
    return name[:1].isupper()


# ---------------------------------------------------------------------------
# printer
# ---------------------------------------------------------------------------

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5}
_QUANT_PREC = 0


def to_text(node):
    return _print(node, 0)


def _print(node, ctx):
    if isinstance(node, EdgeAtom):
        return f"E({node.x},{node.y})"
    if isinstance(node, EqAtom):
        return f"{node.x} = {node.y}"
    if isinstance(node, MemberAtom):
        return f"{node.x} in {node.setvar}"
    if isinstance(node, ColorAtom):
        return f"color({node.color},{node.x})"
    if isinstance(node, CardModAtom):
        return f"card({node.setvar}) % {node.modulus} = {node.residue}"
    if isinstance(node, DpAtom):
        body = "; ".join(f"{s},{t}" for s, t in node.pairs)
        return f"dp({body})"
    if isinstance(node, ConnAtom):
        if node.deleted:
            return f"conn({node.x},{node.y} | " + ",".join(node.deleted) + ")"
        return f"conn({node.x},{node.y})"
    if isinstance(node, TtwLeAtom):
        return f"ttwle({node.bound}; " + ",".join(node.vars) + ")"
    if isinstance(node, Not):
        return "!" + _print(node.body, _PREC[Not])
    if isinstance(node, (And, Or)):
        p = _PREC[type(node)]
        text = f"{_print(node.left, p)} {BINARY[type(node)]} {_print(node.right, p + 1)}"
        return f"({text})" if ctx > p else text
    if isinstance(node, (Implies, Iff)):
        p = _PREC[type(node)]
        text = f"{_print(node.left, p + 1)} {BINARY[type(node)]} {_print(node.right, p)}"
        return f"({text})" if ctx > p else text
    if isinstance(node, Exists):
        text = f"exists {node.var}. {_print(node.body, _QUANT_PREC)}"
        return f"({text})" if ctx > _QUANT_PREC else text
    if isinstance(node, Forall):
        text = f"forall {node.var}. {_print(node.body, _QUANT_PREC)}"
        return f"({text})" if ctx > _QUANT_PREC else text
    if isinstance(node, SetExists):
        text = (f"Exists[{node.pkind}<={node.bound}] {node.var}. "
                f"{_print(node.body, _QUANT_PREC)}")
        return f"({text})" if ctx > _QUANT_PREC else text
    if isinstance(node, SetForall):
        text = (f"Forall[{node.pkind}<={node.bound}] {node.var}. "
                f"{_print(node.body, _QUANT_PREC)}")
        return f"({text})" if ctx > _QUANT_PREC else text
    raise TypeError(f"not a formula node: {node!r}")


# ---------------------------------------------------------------------------
# tokenizer / parser
# ---------------------------------------------------------------------------

_SYMBOLS = ["<->", "->", "<=", "(", ")", "[", "]", ".", ",", ";", "|", "%",
            "=", "!", "&"]


def _tokenize(text):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        matched = False
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append((sym, i))
                i += len(sym)
                matched = True
                break
        if matched:
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append((text[i:j], i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append((text[i:j], i))
            i = j
            continue
        raise FormatError(f"unexpected character {c!r} at position {i}")
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def next(self):
        if self.pos >= len(self.tokens):
            raise FormatError("unexpected end of formula")
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, want):
        tok, at = self.next()
        if tok != want:
            raise FormatError(f"expected {want!r} but found {tok!r} at position {at}")
        return tok

    def ident(self, what="identifier"):
        tok, at = self.next()
        if not (tok[:1].isalpha() or tok[:1] == "_"):
            raise FormatError(f"expected {what} but found {tok!r} at position {at}")
        return tok

    def var(self):
        tok, at = self.next()
        if not tok[:1].islower() or tok in _RESERVED:
            raise FormatError(
                f"expected element variable but found {tok!r} at position {at}")
        return tok

    def setvar(self):
        tok, at = self.next()
        if not tok[:1].isupper() or tok in _RESERVED:
            raise FormatError(
                f"expected set variable but found {tok!r} at position {at}")
        return tok

    def nat(self):
        tok, at = self.next()
        if not tok.isdigit():
            raise FormatError(f"expected number but found {tok!r} at position {at}")
        return int(tok)

    # grammar, lowest precedence first
    def formula(self):
        tok = self.peek()
        if tok in ("exists", "forall"):
            self.next()
            v = self.var()
            self.expect(".")
            body = self.formula()
            return Exists(v, body) if tok == "exists" else Forall(v, body)
        if tok in ("Exists", "Forall"):
            self.next()
            self.expect("[")
            pk, at = self.next()
            if pk not in PKINDS:
                raise FormatError(
                    f"unknown parameter kind {pk!r} at position {at}")
            self.expect("<=")
            k = self.nat()
            self.expect("]")
            v = self.setvar()
            self.expect(".")
            body = self.formula()
            return (SetExists(pk, k, v, body) if tok == "Exists"
                    else SetForall(pk, k, v, body))
        return self.iff()

    def iff(self):
        left = self.implies()
        if self.peek() == "<->":
            self.next()
            return Iff(left, self.iff())
        return left

    def implies(self):
        left = self.or_()
        if self.peek() == "->":
            self.next()
            return Implies(left, self.implies())
        return left

    def or_(self):
        node = self.and_()
        while self.peek() == "|":
            self.next()
            node = Or(node, self.and_())
        return node

    def and_(self):
        node = self.unary()
        while self.peek() == "&":
            self.next()
            node = And(node, self.unary())
        return node

    def unary(self):
        tok = self.peek()
        if tok == "!":
            self.next()
            return Not(self.unary())
        if tok == "(":
            self.next()
            node = self.formula()
            self.expect(")")
            return node
        if tok in ("exists", "forall", "Exists", "Forall"):
            return self.formula()
        return self.atom()

    def atom(self):
        tok, at = self.next()
        if tok == "E":
            self.expect("(")
            x = self.var()
            self.expect(",")
            y = self.var()
            self.expect(")")
            return EdgeAtom(x, y)
        if tok == "color":
            self.expect("(")
            name = self.ident("color name")
            self.expect(",")
            x = self.var()
            self.expect(")")
            return ColorAtom(name, x)
        if tok == "card":
            self.expect("(")
            sv = self.setvar()
            self.expect(")")
            self.expect("%")
            m = self.nat()
            self.expect("=")
            i = self.nat()
            if m < 1:
                raise SemanticError("card modulus must be at least 1")
            if i >= m:
                raise SemanticError(
                    f"card residue {i} must be smaller than modulus {m}")
            if m > 6:
                warnings.warn(
                    f"card modulus {m} exceeds the suite convention of 6",
                    stacklevel=4)
            return CardModAtom(sv, m, i)
        if tok == "dp":
            self.expect("(")
            pairs = []
            while True:
                s = self.var()
                self.expect(",")
                t = self.var()
                pairs.append((s, t))
                if self.peek() == ";":
                    self.next()
                    continue
                break
            self.expect(")")
            return DpAtom(tuple(pairs))
        if tok == "conn":
            self.expect("(")
            x = self.var()
            self.expect(",")
            y = self.var()
            deleted = []
            if self.peek() == "|":
                self.next()
                deleted.append(self.var())
                while self.peek() == ",":
                    self.next()
                    deleted.append(self.var())
            self.expect(")")
            return ConnAtom(x, y, tuple(deleted))
        if tok == "ttwle":
            self.expect("(")
            k = self.nat()
            self.expect(";")
            vs = [self.var()]
            while self.peek() == ",":
                self.next()
                vs.append(self.var())
            self.expect(")")
            return TtwLeAtom(k, tuple(vs))
        # variable-led atoms: "x = y" or "x in X"
        if tok[:1].islower() and tok not in _RESERVED:
            follow = self.peek()
            if follow == "=":
                self.next()
                return EqAtom(tok, self.var())
            if follow == "in":
                self.next()
                return MemberAtom(tok, self.setvar())
            raise FormatError(
                f"expected '=' or 'in' after variable {tok!r} at position {at}")
        raise FormatError(f"unexpected token {tok!r} at position {at}")


def parse_formula(text, free=()):
    """Parse a formula; variables in ``free`` are declared free, any other
    unbound occurrence is a scope error."""
    p = _Parser(text)
    node = p.formula()
    if p.peek() is not None:
        tok, at = p.tokens[p.pos]
        raise FormatError(f"trailing input {tok!r} at position {at}")
    check_scope(node, free)
    return node


def check_scope(node, free=()):
    loose = free_vars(node) - set(free)
    if loose:
        raise ScopeError(f"unbound variable {sorted(loose)[0]!r}")
    return node


def parse_battery(text):
    """One closed formula per nonblank, noncomment line."""
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(parse_formula(line))
    return out


# ---------------------------------------------------------------------------
# prenex normal form
# ---------------------------------------------------------------------------

def desugar(node):
    """Eliminate -> and <-> in favor of !, &, |."""
    if isinstance(node, Implies):
        return Or(Not(desugar(node.left)), desugar(node.right))
    if isinstance(node, Iff):
        a, b = desugar(node.left), desugar(node.right)
        return And(Or(Not(a), b), Or(Not(b), a))
    if isinstance(node, Not):
        return Not(desugar(node.body))
    if isinstance(node, (And, Or)):
        return type(node)(desugar(node.left), desugar(node.right))
    if isinstance(node, (Exists, Forall)):
        return type(node)(node.var, desugar(node.body))
    if isinstance(node, (SetExists, SetForall)):
        return type(node)(node.pkind, node.bound, node.var, desugar(node.body))
    return node


def _rename_apart(node, used, counter):
    if isinstance(node, (Exists, Forall, SetExists, SetForall)):
        v = node.var
        if v in used:
            while True:
                counter[0] += 1
                fresh = f"{v}_{counter[0]}"
                if fresh not in used:
                    break
            body = rename(node.body, {v: fresh})
            v2 = fresh
        else:
            body = node.body
            v2 = v
        used.add(v2)
        body = _rename_apart(body, used, counter)
        if isinstance(node, (Exists, Forall)):
            return type(node)(v2, body)
        return type(node)(node.pkind, node.bound, v2, body)
    if isinstance(node, Not):
        return Not(_rename_apart(node.body, used, counter))
    if isinstance(node, (And, Or)):
        return type(node)(_rename_apart(node.left, used, counter),
                          _rename_apart(node.right, used, counter))
    return node


_DUAL = {"e": "a", "a": "e", "se": "sa", "sa": "se"}


def _hoist(node):
    """Returns (prefix, matrix): prefix entries are ('e'|'a', var) or
    ('se'|'sa', pkind, bound, var)."""
    if isinstance(node, Exists):
        p, m = _hoist(node.body)
        return [("e", node.var)] + p, m
    if isinstance(node, Forall):
        p, m = _hoist(node.body)
        return [("a", node.var)] + p, m
    if isinstance(node, SetExists):
        p, m = _hoist(node.body)
        return [("se", node.pkind, node.bound, node.var)] + p, m
    if isinstance(node, SetForall):
        p, m = _hoist(node.body)
        return [("sa", node.pkind, node.bound, node.var)] + p, m
    if isinstance(node, Not):
        p, m = _hoist(node.body)
        return [(_DUAL[q[0]],) + q[1:] for q in p], Not(m)
    if isinstance(node, (And, Or)):
        pl, ml = _hoist(node.left)
        pr, mr = _hoist(node.right)
        return pl + pr, type(node)(ml, mr)
    return [], node


def _rebuild(prefix, matrix):
    node = matrix
    for q in reversed(prefix):
        if q[0] == "e":
            node = Exists(q[1], node)
        elif q[0] == "a":
            node = Forall(q[1], node)
        elif q[0] == "se":
            node = SetExists(q[1], q[2], q[3], node)
        else:
            node = SetForall(q[1], q[2], q[3], node)
    return node


def to_prenex(node):
    """Equivalent prenex form: set quantifiers first, then element
    quantifiers, then a quantifier-free matrix.

    Adjacent independent quantifiers of the same polarity commute; when a
    set quantifier sits under an element quantifier of opposite polarity the
    interchange is unsound and the transformation refuses.  Equivalence is
    classical (nonempty universes); the test suite checks it by evaluation.
    """
    if is_prenex(node):
        return node
    used = set(free_vars(node))
    flat = _rename_apart(desugar(node), used, [0])
    prefix, matrix = _hoist(flat)
    prefix = list(prefix)
    changed = True
    while changed:
        changed = False
        for i in range(len(prefix) - 1):
            a, b = prefix[i], prefix[i + 1]
            if a[0] in ("e", "a") and b[0] in ("se", "sa"):
                same_polarity = (a[0], b[0]) in (("e", "se"), ("a", "sa"))
                if not same_polarity:
                    raise SemanticError(
                        "cannot soundly move set quantifier "
                        f"{b[-1]!r} past element quantifier {a[1]!r} "
                        "of opposite polarity")
                prefix[i], prefix[i + 1] = b, a
                changed = True
    return _rebuild(prefix, matrix)


def is_prenex(node):
    seen_elem = False
    seen_matrix = False
    cur = node
    while isinstance(cur, (Exists, Forall, SetExists, SetForall)):
        if isinstance(cur, (Exists, Forall)):
            seen_elem = True
        elif seen_elem:
            return False
        cur = cur.body
    return not any(isinstance(n, (Exists, Forall, SetExists, SetForall))
                   for n in walk(cur))


# ---------------------------------------------------------------------------
# ranks and fragments
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Ranks:
    quantifier_rank: int
    dp_rank: int
    p_rank: int


def ranks(node):
    """Total quantifier count (the prenex prefix length; hoisting neither
    adds nor removes quantifiers), maximal dp arity, maximal set-quantifier
    bound."""
    q = 0
    dp = 0
    p = 0
    for n in walk(node):
        if isinstance(n, (Exists, Forall)):
            q += 1
        elif isinstance(n, (SetExists, SetForall)):
            q += 1
            p = max(p, n.bound)
        elif isinstance(n, DpAtom):
            dp = max(dp, len(n.pairs))
    return Ranks(q, dp, p)


def fragment_of(node):
    """Syntactic classification into the named fragments."""
    has_set = False
    has_card = False
    has_dp = False
    has_conn = False
    has_ttwle = False
    for n in walk(node):
        if isinstance(n, (SetExists, SetForall)):
            has_set = True
        elif isinstance(n, CardModAtom):
            has_card = True
        elif isinstance(n, DpAtom):
            has_dp = True
        elif isinstance(n, ConnAtom):
            has_conn = True
        elif isinstance(n, TtwLeAtom):
            has_ttwle = True
    if has_set or has_card:
        return "CMSO/p+dp" if (has_dp or has_conn or has_ttwle) else "CMSO/p"
    if has_dp or has_ttwle:
        return "FO+dp"
    if has_conn:
        return "FO+conn"
    return "FO"


def formula_length(node):
    """Encoding length for reports: node count plus the decimal digit count
    of every quantifier bound and card constant."""
    total = 0
    for n in walk(node):
        total += 1
        if isinstance(n, (SetExists, SetForall)):
            total += len(str(n.bound))
        elif isinstance(n, CardModAtom):
            total += len(str(n.modulus)) + len(str(n.residue))
        elif isinstance(n, TtwLeAtom):
            total += len(str(n.bound))
    return total
