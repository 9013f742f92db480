"""Water-network ingestion: pipe tables, hydraulic edge weights, signal tables.

Pipe data arrives as CSV with the exact header
``from,to,roughness,diameter_m,length_m`` (UTF-8, ``#`` comment lines
allowed).  Junction ids are integers; vertices are the sorted unique ids,
and externally simulated head-pressure signals must be aligned to that
sorted order.

Two physical edge weightings are available besides plain connectivity.
The Hazen-Williams headloss model

    head_loss = sgn(q) * 10.667 * C^-1.852 * d^-4.871 * L * |q|^1.852

gives, per pipe, a resistance-like coefficient 10.667 * C^-1.852 *
d^-4.871 * L whose inverse serves as the edge weight.  The linear
Hagen-Poiseuille model has head loss proportional to L / d^4 * q; its
inverse weight is d^4 / L, with the fluid constants dropped since they
rescale every edge identically.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParseError
from .graph import InfraGraph
from .spectral import GraphSignal

PIPE_HEADER = ("from", "to", "roughness", "diameter_m", "length_m")

HYDRAULIC_MODELS = ("unweighted", "hazen_williams", "hagen_poiseuille")

_HW_CONSTANT = 10.667
_HW_ROUGHNESS_EXP = -1.852
_HW_DIAMETER_EXP = -4.871
_HW_FLOW_EXP = 1.852


@dataclass(frozen=True)
class PipeRecord:
    junction_a: int
    junction_b: int
    roughness: float
    diameter_m: float
    length_m: float
    line: int


@dataclass(frozen=True)
class PipeTable:
    """Validated pipe list; at most one pipe per junction pair."""

    pipes: tuple[PipeRecord, ...]

    def junction_ids(self) -> list[int]:
        """Sorted unique junction ids; defines the vertex order."""
        ids = {p.junction_a for p in self.pipes} | {p.junction_b for p in self.pipes}
        return sorted(ids)


def _data_rows(csv_text: str):
    """Yield (line_number, fields) for non-comment, non-empty CSV rows."""
    reader = csv.reader(io.StringIO(csv_text))
    for lineno, fields in enumerate(reader, start=1):
        if not fields or not any(field.strip() for field in fields):
            continue
        if fields[0].lstrip().startswith("#"):
            continue
        yield lineno, [field.strip() for field in fields]


def parse_pipe_table(csv_text: str) -> PipeTable:
    """Parse and validate a pipe CSV into a :class:`PipeTable`."""
    rows = _data_rows(csv_text)
    try:
        header_line, header = next(rows)
    except StopIteration:
        raise ParseError("pipe table is empty") from None
    if tuple(h.lower() for h in header) != PIPE_HEADER:
        raise ParseError(
            f"expected header {','.join(PIPE_HEADER)!r}, got {','.join(header)!r}",
            line=header_line,
        )
    pipes: list[PipeRecord] = []
    seen: set[frozenset[int]] = set()
    for lineno, fields in rows:
        if len(fields) != 5:
            raise ParseError(f"expected 5 fields, got {len(fields)}", line=lineno)
        try:
            a, b = int(fields[0]), int(fields[1])
            roughness, diameter, length = (float(v) for v in fields[2:])
        except ValueError:
            raise ParseError(f"malformed pipe row: {','.join(fields)!r}", line=lineno) from None
        if a == b:
            raise ParseError(f"pipe connects junction {a} to itself", line=lineno)
        pair = frozenset((a, b))
        if pair in seen:
            raise ParseError(f"duplicate pipe between {a} and {b}", line=lineno)
        seen.add(pair)
        for label, value in (("roughness", roughness), ("diameter_m", diameter), ("length_m", length)):
            if not value > 0:
                raise ParseError(f"{label} must be positive, got {value}", line=lineno)
        pipes.append(PipeRecord(a, b, roughness, diameter, length, line=lineno))
    if not pipes:
        raise ParseError("pipe table has a header but no pipes")
    return PipeTable(pipes=tuple(pipes))


def hazen_williams_headloss(c: float, d: float, length: float, q: float) -> float:
    """Head loss in meters across one pipe at flow rate q (m^3/s).

    Odd in q: sgn(q) * 10.667 * C^-1.852 * d^-4.871 * L * |q|^1.852.
    """
    for label, value in (("roughness", c), ("diameter", d), ("length", length)):
        if not value > 0:
            raise ValueError(f"{label} must be positive, got {value}")
    if q == 0.0:
        return 0.0
    coefficient = _HW_CONSTANT * c**_HW_ROUGHNESS_EXP * d**_HW_DIAMETER_EXP * length
    return math.copysign(coefficient * abs(q) ** _HW_FLOW_EXP, q)


def _edge_weight(pipe: PipeRecord, model: str) -> float:
    if model == "unweighted":
        return 1.0
    if model == "hazen_williams":
        coefficient = (
            _HW_CONSTANT
            * pipe.roughness**_HW_ROUGHNESS_EXP
            * pipe.diameter_m**_HW_DIAMETER_EXP
            * pipe.length_m
        )
        return 1.0 / coefficient
    if model == "hagen_poiseuille":
        return pipe.diameter_m**4 / pipe.length_m
    raise ValueError(f"unknown hydraulic model {model!r}; choose from {HYDRAULIC_MODELS}")


def hydraulic_graph(p: PipeTable, model: str = "unweighted", name: str = "") -> InfraGraph:
    """Junction graph with edge weights from the chosen hydraulic model.

    Vertices are the sorted unique junction ids re-indexed 0..N-1.
    """
    ids = p.junction_ids()
    index = {jid: i for i, jid in enumerate(ids)}
    edges = tuple(
        (index[pipe.junction_a], index[pipe.junction_b], complex(_edge_weight(pipe, model)))
        for pipe in p.pipes
    )
    return InfraGraph(vertex_count=len(ids), edges=edges, name=name or f"pipes_{model}")


def parse_edge_list(csv_text: str, name: str = "") -> InfraGraph:
    """Parse a bare topology CSV (header ``from,to``) into a unit-weight graph.

    Vertex order follows the same sorted-unique-id convention as pipe
    tables.
    """
    rows = _data_rows(csv_text)
    try:
        header_line, header = next(rows)
    except StopIteration:
        raise ParseError("edge list is empty") from None
    if tuple(h.lower() for h in header) != ("from", "to"):
        raise ParseError(
            f"expected header 'from,to', got {','.join(header)!r}", line=header_line
        )
    pairs: list[tuple[int, int]] = []
    seen: set[frozenset[int]] = set()
    for lineno, fields in rows:
        if len(fields) != 2:
            raise ParseError(f"expected 2 fields, got {len(fields)}", line=lineno)
        try:
            a, b = int(fields[0]), int(fields[1])
        except ValueError:
            raise ParseError(f"malformed edge row: {','.join(fields)!r}", line=lineno) from None
        if a == b:
            raise ParseError(f"edge connects vertex {a} to itself", line=lineno)
        key = frozenset((a, b))
        if key in seen:
            raise ParseError(f"duplicate edge between {a} and {b}", line=lineno)
        seen.add(key)
        pairs.append((a, b))
    if not pairs:
        raise ParseError("edge list has a header but no edges")
    ids = sorted({v for pair in pairs for v in pair})
    index = {jid: i for i, jid in enumerate(ids)}
    edges = tuple((index[a], index[b], 1.0 + 0j) for a, b in pairs)
    return InfraGraph(vertex_count=len(ids), edges=edges, name=name or "edge_list")


def parse_signal_table(csv_text: str, expected_n: int, name: str = "") -> list[GraphSignal]:
    """Parse externally simulated signals, one per row, aligned to vertex order.

    Rows hold ``expected_n`` real values, or interleaved re,im pairs
    (2 * expected_n values) when the table starts with a ``format,complex``
    directive line.  ``format,real`` is accepted and is the default.
    """
    rows = _data_rows(csv_text)
    mode = "real"
    pending: tuple[int, list[str]] | None = None
    try:
        first_line, first = next(rows)
    except StopIteration:
        raise ParseError("signal table is empty") from None
    if first and first[0].lower() == "format":
        if len(first) != 2 or first[1].lower() not in ("real", "complex"):
            raise ParseError(
                f"format directive must be 'format,real' or 'format,complex', got {','.join(first)!r}",
                line=first_line,
            )
        mode = first[1].lower()
    else:
        pending = (first_line, first)

    width = expected_n if mode == "real" else 2 * expected_n
    signals: list[GraphSignal] = []

    def consume(lineno: int, fields: list[str]) -> None:
        if len(fields) != width:
            raise ParseError(
                f"expected {width} fields for {expected_n} vertices ({mode} mode), "
                f"got {len(fields)}",
                line=lineno,
            )
        try:
            values = np.array([float(v) for v in fields])
        except ValueError:
            raise ParseError("malformed signal row", line=lineno) from None
        if mode == "complex":
            values = values[0::2] + 1j * values[1::2]
        signals.append(GraphSignal(values.astype(complex), graph_name=name))

    if pending is not None:
        consume(*pending)
    for lineno, fields in rows:
        consume(lineno, fields)
    return signals
