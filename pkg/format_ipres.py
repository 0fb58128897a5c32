"""
Interleaving Presentation Pair Documents (.ipres)

Blocks "w1:" and "w2:" hold generator lines, "y1:" and "y2:" hold relation
lines whose generator references carry their set tag:

    ipres 1
    field 2
    dim 1
    eps 1
    w1:
    gen u0 0
    w2:
    y1:
    rel 4 : 1*w1.u0
    y2:
    rel 5 : 1*w1.u0
"""

from typing import Dict, List

from constructions import TAGS, InterleavingPresentationPair
from document_format_base import BaseDocumentFormat, Cursor, FormatError, Line, tokenize
from exactlin import PrimeField
from order_core import leq, shift
from presentations import GradedSet, PresentationError

BLOCKS = ("w1:", "w2:", "y1:", "y2:")


class PairFormat(BaseDocumentFormat):
    """Reads and writes an interleaving presentation pair."""

    FORMAT_ID = "ipres"
    FORMAT_NAME = "Interleaving presentation pair"
    EXTENSION = ".ipres"

    def parse(self, text: str) -> InterleavingPresentationPair:
        cursor = Cursor(tokenize(text))
        header = self._parse_header(cursor)
        line = cursor.next("'eps <rational>'")
        if line.keyword != "eps" or len(line.tokens) != 2:
            raise line.error("Expected 'eps <rational>'")
        eps = self._parse_rational(line, 1)
        if eps < 0:
            raise line.error("eps must be nonnegative", 1)

        blocks: Dict[str, List[Line]] = {name: [] for name in BLOCKS}
        current = None
        while not cursor.at_end():
            line = cursor.next()
            if line.keyword in BLOCKS:
                if len(line.tokens) != 1:
                    raise line.error("Block tags stand alone on their line", 1)
                if current is not None and BLOCKS.index(line.keyword) <= BLOCKS.index(current):
                    raise line.error(f"Block '{line.keyword}' is out of order or repeated")
                current = line.keyword
                continue
            if current is None:
                raise line.error("Content before the first block tag")
            blocks[current].append(line)

        generators = {}
        for tag in TAGS:
            items = []
            for line in blocks[f"{tag}:"]:
                if line.keyword != "gen":
                    raise line.error(f"Only 'gen' lines belong in block '{tag}:'")
                g = self._parse_generator(line, header.dimension)
                if any(existing.id == g.id for existing in items):
                    raise line.error(f"Duplicate generator id '{g.id}' in block '{tag}:'", 1)
                items.append(g)
            generators[tag] = {g.id: g for g in items}

        relations = {}
        for block, own in (("y1", "w1"), ("y2", "w2")):
            elements = []
            for line in blocks[f"{block}:"]:
                if line.keyword != "rel":
                    raise line.error(f"Only 'rel' lines belong in block '{block}:'")
                element = self._parse_relation(line, header.dimension, header.p)
                for ref, _ in element.terms:
                    tag, _, gid = ref.partition(".")
                    if tag not in TAGS or not gid:
                        raise line.error(f"Generator reference '{ref}' needs a 'w1.' or 'w2.' tag")
                    if gid not in generators[tag]:
                        raise line.error(f"Unknown generator '{ref}'")
                    lift = 0 if tag == own else eps
                    if not leq(shift(generators[tag][gid].grade, lift), element.grade):
                        raise line.error(f"Grade condition violated: '{ref}' is not below the relation grade")
                elements.append(element)
            relations[block] = tuple(elements)

        try:
            pair = InterleavingPresentationPair(
                eps=eps,
                dimension=header.dimension,
                field=PrimeField(header.p),
                W1=GradedSet(tuple(generators["w1"].values())),
                W2=GradedSet(tuple(generators["w2"].values())),
                Y1=relations["y1"],
                Y2=relations["y2"]
            )
        except PresentationError as exc:
            raise FormatError(str(exc)) from None
        self._log_operation("PARSE", {"w1": len(pair.W1), "w2": len(pair.W2), "y1": len(pair.Y1), "y2": len(pair.Y2)})
        return pair

    def emit(self, value: InterleavingPresentationPair) -> str:
        lines = self._emit_header(value.field.p, value.dimension)
        lines.append(f"eps {self._emit_point((value.eps,))}")
        lines.append("w1:")
        lines.extend(self._emit_generator(g) for g in value.W1)
        lines.append("w2:")
        lines.extend(self._emit_generator(g) for g in value.W2)
        lines.append("y1:")
        lines.extend(self._emit_relation(r) for r in sorted(value.Y1))
        lines.append("y2:")
        lines.extend(self._emit_relation(r) for r in sorted(value.Y2))
        self._log_operation("EMIT", {"w1": len(value.W1), "w2": len(value.W2)})
        return "\n".join(lines) + "\n"
