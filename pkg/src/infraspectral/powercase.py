"""Power-system case ingestion: bus/branch/gen tables to graphs and signals.

Reads the common text case format: matrix blocks opened by ``<name> = [``
and closed by ``];``, rows of whitespace-separated numbers, ``%`` or ``#``
comments, optional trailing semicolons.  Only the columns this package
needs are interpreted:

* bus:    column 1 id, column 8 voltage magnitude (p.u.), column 9 angle (deg)
* branch: columns 1-2 endpoints, column 3 resistance, column 4 reactance,
          column 11 status (0 = out of service)
* gen:    column 1 bus, column 2 active dispatch (MW), column 8 status

The grid graph weights each in-service branch by its series admittance
1/(r + jx); parallel branches merge by summing admittances and
out-of-service branches are dropped.  Bus voltages from the solved case
become the graph signal.  Transformer taps, line charging, and shunts are
ignored: edges model series impedance only.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import ParseError
from .graph import InfraGraph
from .spectral import GraphSignal


@dataclass(frozen=True)
class BusRecord:
    bus_id: int
    vm: float
    va_deg: float
    line: int


@dataclass(frozen=True)
class BranchRecord:
    from_bus: int
    to_bus: int
    r: float
    x: float
    status: int
    line: int

    @property
    def in_service(self) -> bool:
        return self.status != 0


@dataclass(frozen=True)
class GenRecord:
    bus_id: int
    status: int
    pg_mw: float
    line: int


@dataclass(frozen=True)
class PowerCase:
    """Parsed case file: solved bus voltages plus branch and generator tables."""

    name: str
    buses: tuple[BusRecord, ...]
    branches: tuple[BranchRecord, ...]
    generators: tuple[GenRecord, ...]

    @property
    def bus_count(self) -> int:
        return len(self.buses)

    def bus_index(self) -> dict[int, int]:
        """Dense 0-based vertex index per bus id, in file order."""
        return {bus.bus_id: i for i, bus in enumerate(self.buses)}


_NAME_RE = re.compile(r"function\s+\w+\s*=\s*(\w+)")
_BLOCK_RE = re.compile(r"(?:^|[\s.])(bus|branch|gen)\s*=\s*\[")


def _strip_comment(line: str) -> str:
    for marker in ("%", "#"):
        pos = line.find(marker)
        if pos >= 0:
            line = line[:pos]
    return line.strip()


def _parse_blocks(text: str) -> tuple[str, dict[str, list[tuple[int, list[float]]]]]:
    """Collect numeric rows (with line numbers) for the bus/branch/gen blocks."""
    name = ""
    blocks: dict[str, list[tuple[int, list[float]]]] = {}
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = _strip_comment(raw)
        if not stripped:
            continue
        if current is None:
            m = _NAME_RE.search(stripped)
            if m and not name:
                name = m.group(1)
            m = _BLOCK_RE.search(stripped)
            if m and m.group(1) not in blocks:
                current = m.group(1)
                blocks[current] = []
                stripped = stripped[m.end():].strip()
                if not stripped:
                    continue
        if current is None:
            continue
        closes = stripped.endswith("];")
        if closes:
            stripped = stripped[:-2].strip()
        body = stripped.rstrip(";").strip()
        if body:
            fields = body.split()
            try:
                row = [float(tok) for tok in fields]
            except ValueError:
                raise ParseError(
                    f"malformed row in '{current}' block: {body!r}", line=lineno
                ) from None
            blocks[current].append((lineno, row))
        if closes:
            current = None
    if current is not None:
        raise ParseError(f"'{current}' block is not closed with '];'")
    return name, blocks


def parse_power_case(text: str, name: str = "") -> PowerCase:
    """Parse case text into a :class:`PowerCase`.

    Requires bus, branch, and gen blocks; reports the offending line on
    malformed rows and unknown bus references.
    """
    parsed_name, blocks = _parse_blocks(text)
    for required in ("bus", "branch", "gen"):
        if required not in blocks:
            raise ParseError(f"missing '{required}' block")

    buses: list[BusRecord] = []
    ids: set[int] = set()
    for lineno, row in blocks["bus"]:
        if len(row) < 9:
            raise ParseError(
                f"bus row needs at least 9 columns, got {len(row)}", line=lineno
            )
        bus_id = int(row[0])
        if bus_id in ids:
            raise ParseError(f"duplicate bus id {bus_id}", line=lineno)
        ids.add(bus_id)
        buses.append(BusRecord(bus_id=bus_id, vm=row[7], va_deg=row[8], line=lineno))
    if not buses:
        raise ParseError("bus block is empty")

    branches: list[BranchRecord] = []
    for lineno, row in blocks["branch"]:
        if len(row) < 11:
            raise ParseError(
                f"branch row needs at least 11 columns, got {len(row)}", line=lineno
            )
        from_bus, to_bus = int(row[0]), int(row[1])
        for endpoint in (from_bus, to_bus):
            if endpoint not in ids:
                raise ParseError(f"branch references unknown bus {endpoint}", line=lineno)
        branches.append(
            BranchRecord(
                from_bus=from_bus,
                to_bus=to_bus,
                r=row[2],
                x=row[3],
                status=int(row[10]),
                line=lineno,
            )
        )

    generators: list[GenRecord] = []
    for lineno, row in blocks["gen"]:
        if len(row) < 8:
            raise ParseError(
                f"gen row needs at least 8 columns, got {len(row)}", line=lineno
            )
        bus_id = int(row[0])
        if bus_id not in ids:
            raise ParseError(f"generator references unknown bus {bus_id}", line=lineno)
        generators.append(
            GenRecord(bus_id=bus_id, status=int(row[7]), pg_mw=row[1], line=lineno)
        )

    return PowerCase(
        name=name or parsed_name,
        buses=tuple(buses),
        branches=tuple(branches),
        generators=tuple(generators),
    )


def power_graph(c: PowerCase) -> InfraGraph:
    """Admittance-weighted graph: one vertex per bus, one edge per line.

    In-service branches get weight 1/(r + jx); parallel branches between
    the same bus pair merge by summing admittances (parallel admittances
    add); out-of-service branches are dropped, as are self-loop rows
    (shunt elements are not part of the series line model).  A branch
    with r = x = 0 has infinite admittance and is rejected.
    """
    index = c.bus_index()
    merged: dict[frozenset[int], tuple[int, int, complex]] = {}
    order: list[frozenset[int]] = []
    for branch in c.branches:
        if not branch.in_service or branch.from_bus == branch.to_bus:
            continue
        if branch.r == 0.0 and branch.x == 0.0:
            raise ParseError(
                f"branch {branch.from_bus}-{branch.to_bus} has zero impedance",
                line=branch.line,
            )
        tail = index[branch.from_bus]
        head = index[branch.to_bus]
        admittance = 1.0 / complex(branch.r, branch.x)
        key = frozenset((tail, head))
        if key in merged:
            t, h, w = merged[key]
            merged[key] = (t, h, w + admittance)
        else:
            merged[key] = (tail, head, admittance)
            order.append(key)
    return InfraGraph(
        vertex_count=c.bus_count,
        edges=tuple(merged[key] for key in order),
        name=c.name,
    )


def bus_voltage_signal(c: PowerCase) -> GraphSignal:
    """Complex bus voltages V_k = Vm_k * exp(j * pi * Va_k / 180), in bus order."""
    vm = np.array([bus.vm for bus in c.buses])
    va = np.radians([bus.va_deg for bus in c.buses])
    return GraphSignal(vm * np.exp(1j * va), graph_name=c.name)


def generation_fraction(c: PowerCase, by_dispatch: bool = False) -> float:
    """Fraction of buses hosting at least one active generator.

    "Active" means status > 0; with ``by_dispatch=True`` it additionally
    requires nonzero scheduled output, the stricter alternative reading.
    """
    active: set[int] = set()
    for gen in c.generators:
        if gen.status > 0 and (not by_dispatch or gen.pg_mw != 0.0):
            active.add(gen.bus_id)
    return len(active) / c.bus_count
