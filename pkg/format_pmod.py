"""
Presentation Documents (.pmod)

One finitely presented module per document:

    pmod 1
    field 2
    dim 1
    gen g 0
    rel 2 : 1*g

Emission is canonical: generators sorted by (grade, id), relations sorted,
grades in reduced fraction syntax.
"""

from document_format_base import BaseDocumentFormat, Cursor, tokenize
from presentations import Presentation


class PresentationFormat(BaseDocumentFormat):
    """Reads and writes a single presentation."""

    FORMAT_ID = "pmod"
    FORMAT_NAME = "Presentation"
    EXTENSION = ".pmod"

    def parse(self, text: str) -> Presentation:
        cursor = Cursor(tokenize(text))
        header = self._parse_header(cursor)
        presentation = self._parse_presentation_body(cursor.lines[cursor.position:], header)
        self._log_operation("PARSE", {
            "generators": len(presentation.generators),
            "relations": len(presentation.relations)
        })
        return presentation

    def emit(self, value: Presentation) -> str:
        lines = self._emit_header(value.p, value.dimension) + self._emit_presentation_body(value)
        self._log_operation("EMIT", {"generators": len(value.generators)})
        return "\n".join(lines) + "\n"


def parse_pmod(text: str) -> Presentation:
    return PresentationFormat().parse(text)


def emit_pmod(value: Presentation) -> str:
    return PresentationFormat().emit(value)
