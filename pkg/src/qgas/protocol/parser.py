"""Line-oriented parser for .qg scenario scripts.

One statement per line, `#` starts a comment, tokens are separated by
whitespace or punctuation.  Every diagnostic carries the 1-based line and
column of the offending token.

Grammar sketch (keywords uppercase, one per line):

    HEADER dim=<int> temperature=<num> particles=<num>
    HEADER classical temperature=<num> particles=<num>
    OBSERVER <name> full
    OBSERVER <name> reduce <d1> <d2> first|second
    OBSERVER <name> classical [<true>=<seen> ...]
    DEFINE_STATE <name> <expr>
    DEFINE_INSTRUMENT <name> <label>=<expr> ...
    DEFINE_INSTRUMENT <name> eigenbasis-of(<expr>)
    CHAMBER <position> <fraction> <state-name>
    CLASSICAL_CHAMBER <position> <fraction> <species>=<weight> ...
    SEPARATE <instrument-name>
    CLASSICAL_SEPARATE <species>=transmitted|reflected ...
    MIX distinguishing|free [<position> ...] [-> <name>]
    CLASSICAL_MIX distinguishing|free [<position> ...] [-> <name>]
    ROTATE <position> <unitary-expr>
    PARTITION <position> <fraction> ... -> <name> ...
    REMOVE_PARTITION [<position> ...] [-> <name>]
    CLAIM_CYCLE
    EXPECT Q_total ~= <value> [<tol>]          # also accepts the ≈ glyph
    EXPECT verdict <observer> violation|satisfied|not_applicable

Expressions: ket(a+bi, ...), proj(e), mix(w*e + w*e), tensor(e, e),
identity(n), rotate_to(e, e), eigenbasis-of(e), or a defined name.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import (
    DuplicateNameError,
    HeaderMissingError,
    ScenarioSyntaxError,
    UndefinedNameError,
)
from . import ast

_CONSTRUCTORS = {"ket", "proj", "mix", "tensor", "identity", "rotate_to"}
_NUMBER_RE = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?i?")
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_/]*")


@dataclass(frozen=True)
class Token:
    kind: str  # NAME NUMBER ( ) , * + - = -> ~ EIG EOL
    text: str
    line: int
    col: int
    value: float = 0.0
    imaginary: bool = False


def _tokenize_line(text: str, line_no: int) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    limit = len(text)
    while pos < limit:
        ch = text[pos]
        if ch == "#":
            break
        if ch.isspace():
            pos += 1
            continue
        col = pos + 1
        if text.startswith("eigenbasis-of", pos):
            tokens.append(Token("EIG", "eigenbasis-of", line_no, col))
            pos += len("eigenbasis-of")
            continue
        if text.startswith("->", pos):
            tokens.append(Token("->", "->", line_no, col))
            pos += 2
            continue
        if text.startswith("~=", pos):
            tokens.append(Token("~", "~=", line_no, col))
            pos += 2
            continue
        if ch == "≈":  # the ≈ glyph
            tokens.append(Token("~", ch, line_no, col))
            pos += 1
            continue
        m = _NUMBER_RE.match(text, pos)
        if m:
            raw = m.group(0)
            imaginary = raw.endswith("i")
            value = float(raw[:-1] if imaginary else raw)
            tokens.append(Token("NUMBER", raw, line_no, col, value, imaginary))
            pos = m.end()
            continue
        m = _NAME_RE.match(text, pos)
        if m:
            tokens.append(Token("NAME", m.group(0), line_no, col))
            pos = m.end()
            continue
        if ch in "(),*+-=":
            tokens.append(Token(ch, ch, line_no, col))
            pos += 1
            continue
        raise ScenarioSyntaxError(line_no, col, f"a token, not {ch!r}")
    tokens.append(Token("EOL", "", line_no, len(text) + 1))
    return tokens


class _Cursor:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.index = 0

    def peek(self) -> Token:
        return self.tokens[self.index]

    def next(self) -> Token:
        token = self.tokens[self.index]
        if token.kind != "EOL":
            self.index += 1
        return token

    def expect(self, kind: str, what: str | None = None) -> Token:
        token = self.peek()
        if token.kind != kind:
            raise ScenarioSyntaxError(token.line, token.col, what or kind)
        return self.next()

    def expect_name(self, what: str = "a name") -> Token:
        return self.expect("NAME", what)

    def at_end(self) -> bool:
        return self.peek().kind == "EOL"

    def expect_end(self) -> None:
        token = self.peek()
        if token.kind != "EOL":
            raise ScenarioSyntaxError(token.line, token.col, "end of line")


def _signed_number(cur: _Cursor, what: str = "a number") -> tuple[float, Token]:
    sign = 1.0
    token = cur.peek()
    if token.kind in ("+", "-"):
        cur.next()
        sign = -1.0 if token.kind == "-" else 1.0
    number = cur.expect("NUMBER", what)
    if number.imaginary:
        raise ScenarioSyntaxError(number.line, number.col, "a real number")
    return sign * number.value, number


def _complex_literal(cur: _Cursor) -> complex:
    """[sign] NUMBER [(+|-) NUMBER-with-i] with either part optional-imaginary."""
    sign = 1.0
    token = cur.peek()
    if token.kind in ("+", "-"):
        cur.next()
        sign = -1.0 if token.kind == "-" else 1.0
    first = cur.expect("NUMBER", "a number")
    if first.imaginary:
        return complex(0.0, sign * first.value)
    value = complex(sign * first.value, 0.0)
    connector = cur.peek()
    if connector.kind in ("+", "-"):
        cur.next()
        second = cur.expect("NUMBER", "an imaginary part like 0.5i")
        if not second.imaginary:
            raise ScenarioSyntaxError(
                second.line, second.col, "an imaginary part ending in i"
            )
        imag = second.value if connector.kind == "+" else -second.value
        value += complex(0.0, imag)
    return value


def _parse_expr(cur: _Cursor, names: dict[str, str]) -> ast.Expr:
    token = cur.peek()
    if token.kind == "EIG":
        cur.next()
        cur.expect("(")
        inner = _parse_expr(cur, names)
        cur.expect(")")
        return ast.EigenbasisExpr(inner, line=token.line, col=token.col)
    if token.kind != "NAME":
        raise ScenarioSyntaxError(token.line, token.col, "an expression")
    cur.next()
    word = token.text
    if word in _CONSTRUCTORS:
        cur.expect("(")
        if word == "ket":
            amplitudes = [_complex_literal(cur)]
            while cur.peek().kind == ",":
                cur.next()
                amplitudes.append(_complex_literal(cur))
            cur.expect(")")
            return ast.KetExpr(tuple(amplitudes), line=token.line, col=token.col)
        if word == "proj":
            inner = _parse_expr(cur, names)
            cur.expect(")")
            return ast.ProjExpr(inner, line=token.line, col=token.col)
        if word == "mix":
            terms = [_parse_mix_term(cur, names)]
            while cur.peek().kind == "+":
                cur.next()
                terms.append(_parse_mix_term(cur, names))
            cur.expect(")")
            return ast.MixExpr(tuple(terms), line=token.line, col=token.col)
        if word == "tensor":
            left = _parse_expr(cur, names)
            cur.expect(",")
            right = _parse_expr(cur, names)
            cur.expect(")")
            return ast.TensorExpr(left, right, line=token.line, col=token.col)
        if word == "identity":
            number = cur.expect("NUMBER", "a dimension")
            if number.imaginary or number.value != int(number.value):
                raise ScenarioSyntaxError(number.line, number.col, "an integer dimension")
            cur.expect(")")
            return ast.IdentityExpr(int(number.value), line=token.line, col=token.col)
        if word == "rotate_to":
            source = _parse_expr(cur, names)
            cur.expect(",")
            target = _parse_expr(cur, names)
            cur.expect(")")
            return ast.RotateToExpr(source, target, line=token.line, col=token.col)
    if word not in names:
        raise UndefinedNameError(f"name {word!r} is not defined", token.line, token.col)
    return ast.NameRef(word, line=token.line, col=token.col)


def _parse_mix_term(cur: _Cursor, names: dict[str, str]) -> tuple[float, ast.Expr]:
    weight, _ = _signed_number(cur, "a mixture weight")
    cur.expect("*", "'*' between weight and state")
    return weight, _parse_expr(cur, names)


def _key_value(cur: _Cursor, key: str) -> Token:
    name = cur.expect_name(f"{key}=<value>")
    if name.text != key:
        raise ScenarioSyntaxError(name.line, name.col, f"{key}=<value>")
    cur.expect("=")
    return name


_OPERATIONAL = (
    ast.SeparateStmt, ast.ClassicalSeparateStmt, ast.MixStmt, ast.RotateStmt,
    ast.PartitionStmt, ast.RemovePartitionStmt, ast.ClaimCycleStmt,
)


class _Parser:
    def __init__(self):
        self.header: ast.Header | None = None
        self.observers: list[ast.ObserverDecl] = []
        self.statements: list[ast.Statement] = []
        # name -> "state" | "instrument"
        self.names: dict[str, str] = {}
        self.saw_operation = False
        self.saw_body = False

    def parse_line(self, tokens: list[Token]) -> None:
        first = tokens[0]
        if first.kind == "EOL":
            return
        cur = _Cursor(tokens)
        keyword = cur.expect_name("a statement keyword")
        word = keyword.text
        if word == "HEADER":
            self.parse_header(cur, keyword)
            return
        if self.header is None:
            raise HeaderMissingError(
                "the script must start with a HEADER line", keyword.line, keyword.col
            )
        if word == "OBSERVER":
            if self.saw_body:
                raise ScenarioSyntaxError(
                    keyword.line, keyword.col, "OBSERVER lines before any statement"
                )
            self.observers.append(self.parse_observer(cur))
            cur.expect_end()
            return
        self.saw_body = True
        handler = getattr(self, f"parse_{word.lower()}", None)
        if handler is None:
            raise ScenarioSyntaxError(keyword.line, keyword.col, "a known statement keyword")
        statement = handler(cur, keyword)
        cur.expect_end()
        if isinstance(statement, (ast.ChamberStmt, ast.ClassicalChamberStmt)) and self.saw_operation:
            raise ScenarioSyntaxError(
                keyword.line, keyword.col,
                "chamber declarations before the first operation",
            )
        if isinstance(statement, _OPERATIONAL):
            self.saw_operation = True
        self.statements.append(statement)

    # -- header and observers ------------------------------------------------

    def parse_header(self, cur: _Cursor, keyword: Token) -> None:
        if self.header is not None:
            raise ScenarioSyntaxError(keyword.line, keyword.col, "a single HEADER line")
        dim: int | None = None
        lookahead = cur.expect_name("dim=<int> or classical")
        if lookahead.text == "classical":
            dim = None
        elif lookahead.text == "dim":
            cur.expect("=")
            number = cur.expect("NUMBER", "an integer dimension")
            if number.imaginary or number.value != int(number.value) or number.value < 1:
                raise ScenarioSyntaxError(number.line, number.col, "a positive integer dimension")
            dim = int(number.value)
        else:
            raise ScenarioSyntaxError(lookahead.line, lookahead.col, "dim=<int> or classical")
        _key_value(cur, "temperature")
        temperature, t_token = _signed_number(cur)
        _key_value(cur, "particles")
        particles, n_token = _signed_number(cur)
        cur.expect_end()
        if temperature <= 0:
            raise ScenarioSyntaxError(t_token.line, t_token.col, "a positive temperature")
        if particles <= 0:
            raise ScenarioSyntaxError(n_token.line, n_token.col, "a positive particle amount")
        self.header = ast.Header(
            dim, temperature, particles, (), line=keyword.line, col=keyword.col
        )

    def parse_observer(self, cur: _Cursor) -> ast.ObserverDecl:
        name = cur.expect_name("an observer name")
        if any(obs.name == name.text for obs in self.observers):
            raise DuplicateNameError(
                f"observer {name.text!r} already declared", name.line, name.col
            )
        mode = cur.expect_name("full, reduce, or classical")
        if mode.text == "full":
            return ast.ObserverDecl(name.text, "quantum", None, (), line=name.line, col=name.col)
        if mode.text == "reduce":
            d1 = cur.expect("NUMBER", "first factor dimension")
            d2 = cur.expect("NUMBER", "second factor dimension")
            keep = cur.expect_name("first or second")
            if keep.text not in ("first", "second"):
                raise ScenarioSyntaxError(keep.line, keep.col, "first or second")
            if any(t.imaginary or t.value != int(t.value) or t.value < 1 for t in (d1, d2)):
                raise ScenarioSyntaxError(d1.line, d1.col, "positive integer factor dims")
            return ast.ObserverDecl(
                name.text, "quantum", (int(d1.value), int(d2.value), keep.text), (),
                line=name.line, col=name.col,
            )
        if mode.text == "classical":
            mapping = []
            while not cur.at_end():
                source = cur.expect_name("<true-species>=<seen-species>")
                cur.expect("=")
                target = cur.expect_name("the observed species name")
                mapping.append((source.text, target.text))
            return ast.ObserverDecl(
                name.text, "classical", None, tuple(mapping), line=name.line, col=name.col
            )
        raise ScenarioSyntaxError(mode.line, mode.col, "full, reduce, or classical")

    # -- definitions -----------------------------------------------------------

    def _define(self, name: Token, kind: str) -> str:
        if name.text in self.names:
            raise DuplicateNameError(
                f"name {name.text!r} already defined", name.line, name.col
            )
        if name.text in _CONSTRUCTORS or name.text == "eigenbasis-of":
            raise ScenarioSyntaxError(name.line, name.col, "a non-reserved name")
        self.names[name.text] = kind
        return name.text

    def parse_define_state(self, cur: _Cursor, keyword: Token) -> ast.DefineState:
        name = cur.expect_name("a state name")
        expr = _parse_expr(cur, self.names)
        return ast.DefineState(
            self._define(name, "state"), expr, line=keyword.line, col=keyword.col
        )

    def parse_define_instrument(self, cur: _Cursor, keyword: Token) -> ast.DefineInstrument:
        name = cur.expect_name("an instrument name")
        if cur.peek().kind == "EIG":
            eig = _parse_expr(cur, self.names)
            assert isinstance(eig, ast.EigenbasisExpr)
            return ast.DefineInstrument(
                self._define(name, "instrument"), (), eig,
                line=keyword.line, col=keyword.col,
            )
        elements = []
        while not cur.at_end():
            label = cur.expect_name("<outcome-label>=<projector-expr>")
            cur.expect("=")
            elements.append((label.text, _parse_expr(cur, self.names)))
        if not elements:
            raise ScenarioSyntaxError(
                keyword.line, keyword.col, "at least one projector or eigenbasis-of(...)"
            )
        labels = [label for label, _ in elements]
        if len(set(labels)) != len(labels):
            raise ScenarioSyntaxError(keyword.line, keyword.col, "distinct outcome labels")
        return ast.DefineInstrument(
            self._define(name, "instrument"), tuple(elements), None,
            line=keyword.line, col=keyword.col,
        )

    # -- chambers and operations ----------------------------------------------

    def parse_chamber(self, cur: _Cursor, keyword: Token) -> ast.ChamberStmt:
        position = cur.expect_name("a chamber position")
        fraction, f_token = _signed_number(cur, "a volume fraction")
        if not 0 < fraction <= 1:
            raise ScenarioSyntaxError(f_token.line, f_token.col, "a fraction in (0, 1]")
        state = cur.expect_name("a defined state name")
        if self.names.get(state.text) != "state":
            raise UndefinedNameError(
                f"state {state.text!r} is not defined", state.line, state.col
            )
        return ast.ChamberStmt(
            position.text, fraction, state.text, line=keyword.line, col=keyword.col
        )

    def parse_classical_chamber(self, cur: _Cursor, keyword: Token) -> ast.ClassicalChamberStmt:
        position = cur.expect_name("a chamber position")
        fraction, f_token = _signed_number(cur, "a volume fraction")
        if not 0 < fraction <= 1:
            raise ScenarioSyntaxError(f_token.line, f_token.col, "a fraction in (0, 1]")
        bag = []
        while not cur.at_end():
            species = cur.expect_name("<species>=<weight>")
            cur.expect("=")
            weight, w_token = _signed_number(cur, "a species weight")
            if weight <= 0:
                raise ScenarioSyntaxError(w_token.line, w_token.col, "a positive weight")
            bag.append((species.text, weight))
        if not bag:
            raise ScenarioSyntaxError(keyword.line, keyword.col, "at least one species")
        return ast.ClassicalChamberStmt(
            position.text, fraction, tuple(bag), line=keyword.line, col=keyword.col
        )

    def parse_separate(self, cur: _Cursor, keyword: Token) -> ast.SeparateStmt:
        instrument = cur.expect_name("a defined instrument name")
        if self.names.get(instrument.text) != "instrument":
            raise UndefinedNameError(
                f"instrument {instrument.text!r} is not defined",
                instrument.line, instrument.col,
            )
        return ast.SeparateStmt(instrument.text, line=keyword.line, col=keyword.col)

    def parse_classical_separate(self, cur: _Cursor, keyword: Token) -> ast.ClassicalSeparateStmt:
        permeability = []
        while not cur.at_end():
            species = cur.expect_name("<species>=transmitted|reflected")
            cur.expect("=")
            verdict = cur.expect_name("transmitted or reflected")
            if verdict.text not in ("transmitted", "reflected"):
                raise ScenarioSyntaxError(verdict.line, verdict.col, "transmitted or reflected")
            permeability.append((species.text, verdict.text))
        if not permeability:
            raise ScenarioSyntaxError(keyword.line, keyword.col, "a permeability map")
        return ast.ClassicalSeparateStmt(
            tuple(permeability), line=keyword.line, col=keyword.col
        )

    def _parse_mix_like(self, cur: _Cursor, keyword: Token, classical: bool) -> ast.MixStmt:
        mode = cur.expect_name("distinguishing or free")
        if mode.text not in ("distinguishing", "free"):
            raise ScenarioSyntaxError(mode.line, mode.col, "distinguishing or free")
        chambers = []
        into = None
        while not cur.at_end():
            if cur.peek().kind == "->":
                cur.next()
                into = cur.expect_name("a chamber name").text
                break
            chambers.append(cur.expect_name("a chamber position").text)
        return ast.MixStmt(
            mode.text == "distinguishing", tuple(chambers), into, classical,
            line=keyword.line, col=keyword.col,
        )

    def parse_mix(self, cur: _Cursor, keyword: Token) -> ast.MixStmt:
        return self._parse_mix_like(cur, keyword, classical=False)

    def parse_classical_mix(self, cur: _Cursor, keyword: Token) -> ast.MixStmt:
        return self._parse_mix_like(cur, keyword, classical=True)

    def parse_rotate(self, cur: _Cursor, keyword: Token) -> ast.RotateStmt:
        chamber = cur.expect_name("a chamber position")
        unitary = _parse_expr(cur, self.names)
        return ast.RotateStmt(chamber.text, unitary, line=keyword.line, col=keyword.col)

    def parse_partition(self, cur: _Cursor, keyword: Token) -> ast.PartitionStmt:
        chamber = cur.expect_name("a chamber position")
        fractions = []
        while cur.peek().kind in ("NUMBER", "+", "-"):
            fraction, f_token = _signed_number(cur, "a fraction")
            if not 0 < fraction < 1:
                raise ScenarioSyntaxError(f_token.line, f_token.col, "fractions in (0, 1)")
            fractions.append(fraction)
        arrow = cur.expect("->", "'->' and new chamber names")
        names = []
        while not cur.at_end():
            names.append(cur.expect_name("a chamber name").text)
        if len(fractions) < 2:
            raise ScenarioSyntaxError(keyword.line, keyword.col, "at least two fractions")
        if len(names) != len(fractions):
            raise ScenarioSyntaxError(arrow.line, arrow.col, "one name per fraction")
        if abs(sum(fractions) - 1.0) > 1e-9:
            raise ScenarioSyntaxError(keyword.line, keyword.col, "fractions summing to 1")
        return ast.PartitionStmt(
            chamber.text, tuple(fractions), tuple(names),
            line=keyword.line, col=keyword.col,
        )

    def parse_remove_partition(self, cur: _Cursor, keyword: Token) -> ast.RemovePartitionStmt:
        chambers = []
        into = None
        while not cur.at_end():
            if cur.peek().kind == "->":
                cur.next()
                into = cur.expect_name("a chamber name").text
                break
            chambers.append(cur.expect_name("a chamber position").text)
        return ast.RemovePartitionStmt(
            tuple(chambers), into, line=keyword.line, col=keyword.col
        )

    def parse_claim_cycle(self, cur: _Cursor, keyword: Token) -> ast.ClaimCycleStmt:
        return ast.ClaimCycleStmt(line=keyword.line, col=keyword.col)

    def parse_expect(self, cur: _Cursor, keyword: Token) -> ast.Statement:
        subject = cur.expect_name("Q_total or verdict")
        if subject.text == "Q_total":
            cur.expect("~", "'~=' (or the ≈ glyph)")
            value, _ = _signed_number(cur, "the expected total heat")
            tol = 1e-4
            if not cur.at_end():
                tol, t_token = _signed_number(cur, "a tolerance")
                if tol <= 0:
                    raise ScenarioSyntaxError(t_token.line, t_token.col, "a positive tolerance")
            return ast.ExpectTotalHeat(value, tol, line=keyword.line, col=keyword.col)
        if subject.text == "verdict":
            observer = cur.expect_name("an observer name")
            if not any(obs.name == observer.text for obs in self.observers):
                raise UndefinedNameError(
                    f"observer {observer.text!r} is not declared",
                    observer.line, observer.col,
                )
            outcome = cur.expect_name("violation, satisfied, or not_applicable")
            if outcome.text not in ("violation", "satisfied", "not_applicable"):
                raise ScenarioSyntaxError(
                    outcome.line, outcome.col, "violation, satisfied, or not_applicable"
                )
            return ast.ExpectVerdict(
                observer.text, outcome.text, line=keyword.line, col=keyword.col
            )
        raise ScenarioSyntaxError(subject.line, subject.col, "Q_total or verdict")


def parse(text: str) -> ast.Protocol:
    """Parse scenario text into a Protocol; raises ProtocolError subclasses."""
    parser = _Parser()
    for line_no, line in enumerate(text.splitlines(), start=1):
        parser.parse_line(_tokenize_line(line.rstrip("\r"), line_no))
    if parser.header is None:
        raise HeaderMissingError("the script must contain a HEADER line", 1, 1)
    header = ast.Header(
        parser.header.dim,
        parser.header.temperature,
        parser.header.particles,
        tuple(parser.observers),
        line=parser.header.line,
        col=parser.header.col,
    )
    return ast.Protocol(header, tuple(parser.statements))
