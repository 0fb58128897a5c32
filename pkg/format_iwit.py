"""
Interleaving Witness Documents (.iwit)

    iwit 1
    field 2
    dim 1
    eps 1
    F 0 : 1 1 1
    G 1 : 1 1 1

F lines give the component of M -> N(eps) at a point of M's support grid,
G lines the component of N -> M(eps) at a point of N's support grid. Matrix
entries are row-major.
"""

from typing import Dict

import numpy as np

from document_format_base import BaseDocumentFormat, Cursor, tokenize
from interleaving import InterleavingWitness
from order_core import Point


class WitnessFormat(BaseDocumentFormat):
    """Reads and writes interleaving witnesses."""

    FORMAT_ID = "iwit"
    FORMAT_NAME = "Interleaving witness"
    EXTENSION = ".iwit"

    def parse(self, text: str) -> InterleavingWitness:
        cursor = Cursor(tokenize(text))
        header = self._parse_header(cursor)
        line = cursor.next("'eps <rational>'")
        if line.keyword != "eps" or len(line.tokens) != 2:
            raise line.error("Expected 'eps <rational>'")
        eps = self._parse_rational(line, 1)
        if eps < 0:
            raise line.error("eps must be nonnegative", 1)

        components: Dict[str, Dict[Point, np.ndarray]] = {"F": {}, "G": {}}
        d = header.dimension
        while not cursor.at_end():
            line = cursor.next()
            if line.keyword not in components:
                raise line.error(f"Expected 'F' or 'G', found '{line.keyword}'")
            point = self._parse_point(line, 1, d)
            self._expect(line, 1 + d, ":")
            if point in components[line.keyword]:
                raise line.error(f"Second {line.keyword} component at the same point")
            components[line.keyword][point] = self._parse_matrix(line, 2 + d, header.p)

        self._log_operation("PARSE", {"F": len(components["F"]), "G": len(components["G"])})
        return InterleavingWitness(eps=eps, F=components["F"], G=components["G"], p=header.p, dimension=d)

    def emit(self, value: InterleavingWitness) -> str:
        if value.p is None or value.dimension is None:
            raise ValueError("Witness needs field and dimension before emission")
        lines = self._emit_header(value.p, value.dimension)
        lines.append(f"eps {self._emit_point((value.eps,))}")
        for name, components in (("F", value.F), ("G", value.G)):
            for point in sorted(components):
                lines.append(f"{name} {self._emit_point(point)} : {self._emit_matrix(components[point])}")
        self._log_operation("EMIT", {"F": len(value.F), "G": len(value.G)})
        return "\n".join(lines) + "\n"
