"""
Edit Path Documents (.epath)

A self-contained path certificate: every node presentation is inlined, every
step is a grid edit with its axis maps and witness matrices.

    epath 1
    field 2
    dim 1
    node 0 {
    gen g 0
    }
    edit 1 rev {
    category 1D
    gridP ax 0 : 1
    gridQ ax 0 : 0
    f ax 0 : 1->0
    g ax 0 : 0->1
    W 0 : 1 1 1
    }
    node 1 {
    gen g 1
    }

A "fwd" edit goes from node k-1 to node k, a "rev" edit from node k to node
k-1. Arrows may be written "->" or "→".
"""

from fractions import Fraction
from typing import Dict, List, Tuple

import numpy as np

from document_format_base import BaseDocumentFormat, Cursor, FormatError, Header, Line, tokenize
from edit_category import CATEGORIES, DIRECTIONS, EditPath, EditRecord, InvalidEditError
from order_core import Grid, MonotoneMap, OrderError, Point, axis_form
from presentations import Presentation

ARROWS = ("->", "→")


class EditPathFormat(BaseDocumentFormat):
    """Reads and writes edit paths."""

    FORMAT_ID = "epath"
    FORMAT_NAME = "Edit path"
    EXTENSION = ".epath"

    def parse(self, text: str) -> EditPath:
        cursor = Cursor(tokenize(text))
        header = self._parse_header(cursor)
        nodes: List[Presentation] = []
        steps: List[Tuple[Line, str, List[Line]]] = []
        while not cursor.at_end():
            line = cursor.next()
            if line.keyword == "node":
                self._check_opening(line, len(nodes), 3)
                if len(nodes) != len(steps):
                    raise line.error("Nodes and edits must alternate")
                nodes.append(self._parse_presentation_body(self._block(cursor, line), header))
            elif line.keyword == "edit":
                self._check_opening(line, len(steps) + 1, 4)
                direction = line.tokens[2].text
                if direction not in DIRECTIONS:
                    raise line.error(f"Direction must be 'fwd' or 'rev', found '{direction}'", 2)
                if len(nodes) != len(steps) + 1:
                    raise line.error("An edit must follow its source node")
                body = self._block(cursor, line)
                steps.append((line, direction, body))
            else:
                raise line.error(f"Expected 'node' or 'edit', found '{line.keyword}'")
        if not nodes:
            raise FormatError("An edit path needs at least one node", 4)
        if len(nodes) != len(steps) + 1:
            raise FormatError(f"{len(nodes)} nodes cannot bound {len(steps)} edits")

        records = []
        for k, (line, direction, body) in enumerate(steps, start=1):
            before, after = nodes[k - 1], nodes[k]
            src, dst = (before, after) if direction == "fwd" else (after, before)
            records.append((self._parse_edit(line, body, header, src, dst), direction))
        self._log_operation("PARSE", {"nodes": len(nodes), "edits": len(records)})
        return EditPath(nodes=nodes, steps=records)

    def _check_opening(self, line: Line, expected_index: int, width: int) -> None:
        if len(line.tokens) != width or line.tokens[-1].text != "{":
            raise line.error(f"Expected '{line.keyword} <k>{' <dir>' if width == 4 else ''} {{'")
        if self._parse_int(line, 1) != expected_index:
            raise line.error(f"Expected {line.keyword} number {expected_index}", 1)

    def _block(self, cursor: Cursor, opening: Line) -> List[Line]:
        body = []
        while True:
            line = cursor.next(f"'}}' closing the block opened on line {opening.number}")
            if line.keyword == "}":
                if len(line.tokens) != 1:
                    raise line.error("'}' stands alone on its line", 1)
                return body
            body.append(line)

    def _parse_value(self, line: Line, index: int, text: str) -> Fraction:
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise line.error(f"Invalid rational literal '{text}'", index) from None

    def _axis_index(self, line: Line, d: int) -> int:
        self._expect(line, 1, "ax")
        i = self._parse_int(line, 2)
        if not 0 <= i < d:
            raise line.error(f"Axis index {i} outside 0..{d - 1}", 2)
        self._expect(line, 3, ":")
        return i

    def _parse_axis_map(self, line: Line) -> Dict[Fraction, Fraction]:
        table: Dict[Fraction, Fraction] = {}
        for index in range(4, len(line.tokens)):
            text = line.tokens[index].text
            for arrow in ARROWS:
                if arrow in text:
                    left, _, right = text.partition(arrow)
                    break
            else:
                raise line.error(f"Expected '<v>-><w>', found '{text}'", index)
            key = self._parse_value(line, index, left)
            if key in table:
                raise line.error(f"Value {left} mapped twice", index)
            table[key] = self._parse_value(line, index, right)
        return table

    def _parse_edit(self, opening: Line, body: List[Line], header: Header, src: Presentation, dst: Presentation) -> EditRecord:
        d = header.dimension
        category = "1D"
        axes: Dict[str, List] = {"gridP": [None] * d, "gridQ": [None] * d}
        maps: Dict[str, List] = {"f": [None] * d, "g": [None] * d}
        witness: Dict[Point, np.ndarray] = {}
        for line in body:
            keyword = line.keyword
            if keyword == "category":
                if len(line.tokens) != 2 or line.tokens[1].text not in CATEGORIES:
                    raise line.error(f"Category must be one of {', '.join(CATEGORIES)}", 1)
                category = line.tokens[1].text
            elif keyword in axes:
                i = self._axis_index(line, d)
                if axes[keyword][i] is not None:
                    raise line.error(f"Axis {i} of {keyword} given twice", 2)
                values = [self._parse_rational(line, index) for index in range(4, len(line.tokens))]
                if not values:
                    raise line.error("Grid axes must be nonempty", 3)
                axes[keyword][i] = values
            elif keyword in maps:
                i = self._axis_index(line, d)
                if maps[keyword][i] is not None:
                    raise line.error(f"Axis {i} of map {keyword} given twice", 2)
                maps[keyword][i] = self._parse_axis_map(line)
            elif keyword == "W":
                point = self._parse_point(line, 1, d)
                self._expect(line, 1 + d, ":")
                if point in witness:
                    raise line.error("Second witness component at the same point")
                witness[point] = self._parse_matrix(line, 2 + d, header.p)
            else:
                raise line.error(f"Unexpected keyword '{keyword}' in edit block")
        for name, parts in list(axes.items()) + list(maps.items()):
            missing = [i for i, part in enumerate(parts) if part is None]
            if missing:
                raise opening.error(f"Edit {opening.tokens[1].text} lacks '{name} ax {missing[0]}'")
        try:
            P = Grid(tuple(tuple(axis) for axis in axes["gridP"]))
            Q = Grid(tuple(tuple(axis) for axis in axes["gridQ"]))
            f = MonotoneMap.from_axis_maps(P, Q, maps["f"])
            g = MonotoneMap.from_axis_maps(Q, P, maps["g"])
            return EditRecord(src=src, dst=dst, P=P, Q=Q, f=f, g=g, witness=witness, category=category)
        except (OrderError, InvalidEditError) as exc:
            raise opening.error(str(exc)) from None

    def emit(self, value: EditPath) -> str:
        if not value.nodes:
            raise ValueError("An edit path needs at least one node")
        first = value.nodes[0]
        lines = self._emit_header(first.p, first.dimension)
        for k, node in enumerate(value.nodes):
            if k:
                record, direction = value.steps[k - 1]
                lines.append(f"edit {k} {direction} {{")
                lines.extend(self._emit_edit(record))
                lines.append("}")
            lines.append(f"node {k} {{")
            lines.extend(self._emit_presentation_body(node))
            lines.append("}")
        self._log_operation("EMIT", {"nodes": len(value.nodes), "edits": len(value.steps)})
        return "\n".join(lines) + "\n"

    def _emit_edit(self, record: EditRecord) -> List[str]:
        if not (isinstance(record.P, Grid) and isinstance(record.Q, Grid)):
            raise ValueError("Only grid edits can be written to an edit path document")
        f_axes, g_axes = axis_form(record.f), axis_form(record.g)
        if f_axes is None or g_axes is None:
            raise ValueError("Edit maps must be grid morphisms to be written")
        lines = [f"category {record.category}"]
        for name, grid in (("gridP", record.P), ("gridQ", record.Q)):
            for i, axis in enumerate(grid.axes):
                lines.append(f"{name} ax {i} : {self._emit_point(axis)}")
        for name, axis_maps in (("f", f_axes), ("g", g_axes)):
            for i, table in enumerate(axis_maps):
                arrows = " ".join(f"{self._emit_point((v,))}->{self._emit_point((table[v],))}" for v in sorted(table))
                lines.append(f"{name} ax {i} : {arrows}")
        for point in sorted(record.witness):
            lines.append(f"W {self._emit_point(point)} : {self._emit_matrix(record.witness[point])}")
        return lines
