"""
Base Document Format Abstract Class

This module defines the abstract base class that all pmedit text formats
implement, plus the line tokenizer and the token-level parsers and emitters
they share (header, rationals, points, coefficient terms, matrices).

Documents are line oriented: "#" starts a comment, tokens are separated by
whitespace, and every document opens with "<magic> 1", "field <p>", "dim <d>".
"""

import abc
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from exactlin import FieldError, PrimeField
from order_core import Point
from pm_utils import format_rational, log_operation
from presentations import Generator, GradedSet, HomogeneousElement, Presentation, PresentationError

VERSION = 1


class FormatError(ValueError):
    """Syntax or content error, reported with its line and column."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        location = ""
        if line is not None:
            location = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(location + message)


class Token(NamedTuple):
    text: str
    column: int


@dataclass
class Line:
    number: int
    tokens: List[Token]

    @property
    def keyword(self) -> str:
        return self.tokens[0].text

    def error(self, message: str, index: int = 0) -> FormatError:
        column = self.tokens[index].column if index < len(self.tokens) else None
        return FormatError(message, self.number, column)


@dataclass
class Header:
    p: int
    dimension: int


def tokenize(text: str) -> List[Line]:
    """Split a document into non-empty lines of tokens with 1-based columns, comments removed."""
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0]
        tokens = []
        column = 0
        while column < len(content):
            if content[column].isspace():
                column += 1
                continue
            start = column
            while column < len(content) and not content[column].isspace():
                column += 1
            tokens.append(Token(content[start:column], start + 1))
        if tokens:
            lines.append(Line(number, tokens))
    return lines


class Cursor:
    """Sequential reader over tokenized lines."""

    def __init__(self, lines: List[Line]):
        self.lines = lines
        self.position = 0

    def peek(self) -> Optional[Line]:
        return self.lines[self.position] if self.position < len(self.lines) else None

    def next(self, expected: str = "a line") -> Line:
        line = self.peek()
        if line is None:
            last = self.lines[-1].number if self.lines else 1
            raise FormatError(f"Unexpected end of document, expected {expected}", last + 1)
        self.position += 1
        return line

    def at_end(self) -> bool:
        return self.position >= len(self.lines)


class BaseDocumentFormat(abc.ABC):
    """Abstract base class for all document formats."""

    # Class-level identifiers (each format defines these)
    FORMAT_ID: str = "base"
    FORMAT_NAME: str = "Base Format"
    EXTENSION: str = ""

    def __init__(self):
        self.operation_log: List[Dict[str, Any]] = []

    @abc.abstractmethod
    def parse(self, text: str) -> Any:
        """
        Parse a complete document.

        Args:
            text: Document text

        Returns:
            The domain object the document carries

        Raises:
            FormatError: with line and column of the first problem
        """
        pass

    @abc.abstractmethod
    def emit(self, value: Any) -> str:
        """
        Emit the canonical text of a domain object.

        Args:
            value: Domain object

        Returns:
            Canonical document text, newline terminated
        """
        pass

    def get_operation_log(self) -> List[Dict[str, Any]]:
        return self.operation_log

    def get_format_stats(self) -> Dict[str, Any]:
        return {
            "format_type": self.__class__.__name__,
            "format_id": self.FORMAT_ID,
            "operations": len(self.operation_log)
        }

    def _log_operation(self, op_type: str, details: Dict[str, Any]) -> None:
        log_operation(self.operation_log, "FORMAT", op_type, {"format": self.FORMAT_ID, **details})

    # Header

    def _parse_header(self, cursor: Cursor) -> Header:
        line = cursor.next("the document header")
        if line.keyword != self.FORMAT_ID:
            raise line.error(f"Expected magic '{self.FORMAT_ID}', found '{line.keyword}'")
        if len(line.tokens) != 2 or line.tokens[1].text != str(VERSION):
            raise line.error(f"Unsupported version, expected '{self.FORMAT_ID} {VERSION}'", 1)
        line = cursor.next("'field <p>'")
        if line.keyword != "field" or len(line.tokens) != 2:
            raise line.error("Expected 'field <p>'")
        p = self._parse_int(line, 1)
        try:
            PrimeField(p)
        except FieldError as exc:
            raise line.error(str(exc), 1) from None
        line = cursor.next("'dim <d>'")
        if line.keyword != "dim" or len(line.tokens) != 2:
            raise line.error("Expected 'dim <d>'")
        d = self._parse_int(line, 1)
        if d < 1:
            raise line.error("Dimension must be at least 1", 1)
        return Header(p=p, dimension=d)

    def _emit_header(self, p: int, d: int) -> List[str]:
        return [f"{self.FORMAT_ID} {VERSION}", f"field {p}", f"dim {d}"]

    # Scalars

    def _parse_int(self, line: Line, index: int) -> int:
        try:
            return int(line.tokens[index].text)
        except (ValueError, IndexError):
            raise line.error("Expected an integer", index) from None

    def _parse_rational(self, line: Line, index: int) -> Fraction:
        if index >= len(line.tokens):
            raise line.error("Missing rational value", index)
        text = line.tokens[index].text
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise line.error(f"Invalid rational literal '{text}'", index) from None

    def _parse_point(self, line: Line, start: int, d: int) -> Point:
        if len(line.tokens) < start + d:
            raise line.error(f"Expected {d} coordinates", min(start, len(line.tokens) - 1))
        return tuple(self._parse_rational(line, start + i) for i in range(d))

    def _emit_point(self, point: Sequence[Fraction]) -> str:
        return " ".join(format_rational(c) for c in point)

    def _expect(self, line: Line, index: int, text: str) -> None:
        if index >= len(line.tokens) or line.tokens[index].text != text:
            raise line.error(f"Expected '{text}'", min(index, len(line.tokens) - 1))

    # Generators and relations

    def _parse_generator(self, line: Line, d: int) -> Generator:
        if len(line.tokens) != 2 + d:
            raise line.error(f"Expected 'gen <id>' followed by {d} coordinates")
        gid = line.tokens[1].text
        if "*" in gid or ":" in gid:
            raise line.error(f"Invalid generator id '{gid}'", 1)
        return Generator(grade=self._parse_point(line, 2, d), id=gid)

    def _parse_relation(self, line: Line, d: int, p: int) -> HomogeneousElement:
        grade = self._parse_point(line, 1, d)
        self._expect(line, 1 + d, ":")
        terms = []
        for index in range(2 + d, len(line.tokens)):
            text = line.tokens[index].text
            coeff, star, gid = text.partition("*")
            if not star or not gid:
                raise line.error(f"Expected '<coeff>*<id>', found '{text}'", index)
            try:
                terms.append((gid, int(coeff)))
            except ValueError:
                raise line.error(f"Invalid coefficient '{coeff}'", index) from None
        return HomogeneousElement.build(grade, terms, p)

    def _emit_generator(self, g: Generator) -> str:
        return f"gen {g.id} {self._emit_point(g.grade)}"

    def _emit_relation(self, r: HomogeneousElement) -> str:
        terms = " ".join(f"{coeff}*{gid}" for gid, coeff in r.terms)
        return f"rel {self._emit_point(r.grade)} :" + (f" {terms}" if terms else "")

    def _parse_presentation_body(self, lines: List[Line], header: Header) -> Presentation:
        """Build a presentation from gen/rel lines, reporting grade-condition errors at their line."""
        generators: List[Generator] = []
        relations: List[Tuple[Line, HomogeneousElement]] = []
        seen: Dict[str, Line] = {}
        for line in lines:
            if line.keyword == "gen":
                g = self._parse_generator(line, header.dimension)
                if g.id in seen:
                    raise line.error(f"Duplicate generator id '{g.id}' (first on line {seen[g.id].number})", 1)
                seen[g.id] = line
                generators.append(g)
            elif line.keyword == "rel":
                relations.append((line, self._parse_relation(line, header.dimension, header.p)))
            else:
                raise line.error(f"Unexpected keyword '{line.keyword}'")
        grades = {g.id: g.grade for g in generators}
        for line, r in relations:
            for gid, _ in r.terms:
                if gid not in grades:
                    raise line.error(f"Unknown generator '{gid}'")
                if any(a > b for a, b in zip(grades[gid], r.grade)):
                    raise line.error(f"Grade condition violated: generator '{gid}' is not below the relation grade")
        try:
            return Presentation(
                dimension=header.dimension,
                field=PrimeField(header.p),
                generators=GradedSet(tuple(generators)),
                relations=tuple(r for _, r in relations)
            )
        except PresentationError as exc:
            raise FormatError(str(exc), lines[0].number if lines else None) from None

    def _emit_presentation_body(self, m: Presentation) -> List[str]:
        return [self._emit_generator(g) for g in m.generators] + [self._emit_relation(r) for r in m.relations]

    # Matrices

    def _parse_matrix(self, line: Line, start: int, p: int) -> np.ndarray:
        rows = self._parse_int(line, start)
        cols = self._parse_int(line, start + 1)
        if rows < 0 or cols < 0:
            raise line.error("Matrix sizes must be nonnegative", start)
        entries = line.tokens[start + 2:]
        if len(entries) != rows * cols:
            raise line.error(f"Expected {rows * cols} entries for a {rows}x{cols} matrix, found {len(entries)}", start)
        values = []
        for index in range(start + 2, len(line.tokens)):
            values.append(self._parse_int(line, index))
        return PrimeField(p).from_entries(rows, cols, values)

    def _emit_matrix(self, matrix: np.ndarray) -> str:
        rows, cols = matrix.shape
        entries = " ".join(str(int(x)) for x in np.asarray(matrix).reshape(-1))
        return f"{rows} {cols}" + (f" {entries}" if entries else "")
