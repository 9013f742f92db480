#!/usr/bin/env python3
"""Generate the bundled solved-case fixtures under fixtures/.

Produces:

* case14.m: the published IEEE 14-bus test case, with bus voltages
  refreshed by this script's Newton-Raphson AC power-flow solve.  The
  solve is validated against the published solution (magnitudes to 2e-3
  p.u., angles to 0.02 deg) before anything is written, which checks the
  transcribed data and the solver against each other.
* synth024.m ... synth300.m: synthetic transmission-style networks at a
  range of sizes, each solved to a max power mismatch below 1e-10 p.u.
  Topologies are spatial (minimum spanning tree plus nearest-neighbour
  chords), impedances scale with line length, and several cases include
  parallel branches, out-of-service branches, zero-resistance
  transformer branches, bus shunts, and non-contiguous bus numbering so
  downstream parsing is exercised on realistic irregularities.
* water_demo_pipes.csv / water_demo_signals.csv: a small looped pipe
  network and a block of smooth synthetic head-pressure signals for CLI
  walkthroughs.

Deterministic: every random choice derives from the per-case seeds below.
Regenerate with  python tools/gen_fixtures.py  from the repository root.
"""

from __future__ import annotations

import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

OUT_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "fixtures")

# ----------------------------------------------------------------------------
# Published IEEE 14-bus test case (100 MVA base).
# bus_i type Pd Qd Gs Bs area Vm Va baseKV zone Vmax Vmin
# ----------------------------------------------------------------------------
CASE14_BUS = [
    [1, 3, 0.0, 0.0, 0.0, 0.0, 1, 1.060, 0.00, 0, 1, 1.06, 0.94],
    [2, 2, 21.7, 12.7, 0.0, 0.0, 1, 1.045, -4.98, 0, 1, 1.06, 0.94],
    [3, 2, 94.2, 19.0, 0.0, 0.0, 1, 1.010, -12.72, 0, 1, 1.06, 0.94],
    [4, 1, 47.8, -3.9, 0.0, 0.0, 1, 1.019, -10.33, 0, 1, 1.06, 0.94],
    [5, 1, 7.6, 1.6, 0.0, 0.0, 1, 1.020, -8.78, 0, 1, 1.06, 0.94],
    [6, 2, 11.2, 7.5, 0.0, 0.0, 1, 1.070, -14.22, 0, 1, 1.06, 0.94],
    [7, 1, 0.0, 0.0, 0.0, 0.0, 1, 1.062, -13.37, 0, 1, 1.06, 0.94],
    [8, 2, 0.0, 0.0, 0.0, 0.0, 1, 1.090, -13.36, 0, 1, 1.06, 0.94],
    [9, 1, 29.5, 16.6, 0.0, 19.0, 1, 1.056, -14.94, 0, 1, 1.06, 0.94],
    [10, 1, 9.0, 5.8, 0.0, 0.0, 1, 1.051, -15.10, 0, 1, 1.06, 0.94],
    [11, 1, 3.5, 1.8, 0.0, 0.0, 1, 1.057, -14.79, 0, 1, 1.06, 0.94],
    [12, 1, 6.1, 1.6, 0.0, 0.0, 1, 1.055, -15.07, 0, 1, 1.06, 0.94],
    [13, 1, 13.5, 5.8, 0.0, 0.0, 1, 1.050, -15.16, 0, 1, 1.06, 0.94],
    [14, 1, 14.9, 5.0, 0.0, 0.0, 1, 1.036, -16.04, 0, 1, 1.06, 0.94],
]

# bus Pg Qg Qmax Qmin Vg mBase status Pmax Pmin
CASE14_GEN = [
    [1, 232.4, -16.9, 10.0, 0.0, 1.060, 100, 1, 332.4, 0],
    [2, 40.0, 42.4, 50.0, -40.0, 1.045, 100, 1, 140.0, 0],
    [3, 0.0, 23.4, 40.0, 0.0, 1.010, 100, 1, 100.0, 0],
    [6, 0.0, 12.2, 24.0, -6.0, 1.070, 100, 1, 100.0, 0],
    [8, 0.0, 17.4, 24.0, -6.0, 1.090, 100, 1, 100.0, 0],
]

# fbus tbus r x b rateA rateB rateC ratio angle status angmin angmax
CASE14_BRANCH = [
    [1, 2, 0.01938, 0.05917, 0.0528, 9900, 0, 0, 0, 0, 1, -360, 360],
    [1, 5, 0.05403, 0.22304, 0.0492, 9900, 0, 0, 0, 0, 1, -360, 360],
    [2, 3, 0.04699, 0.19797, 0.0438, 9900, 0, 0, 0, 0, 1, -360, 360],
    [2, 4, 0.05811, 0.17632, 0.0340, 9900, 0, 0, 0, 0, 1, -360, 360],
    [2, 5, 0.05695, 0.17388, 0.0346, 9900, 0, 0, 0, 0, 1, -360, 360],
    [3, 4, 0.06701, 0.17103, 0.0128, 9900, 0, 0, 0, 0, 1, -360, 360],
    [4, 5, 0.01335, 0.04211, 0.0, 9900, 0, 0, 0, 0, 1, -360, 360],
    [4, 7, 0.0, 0.20912, 0.0, 9900, 0, 0, 0.978, 0, 1, -360, 360],
    [4, 9, 0.0, 0.55618, 0.0, 9900, 0, 0, 0.969, 0, 1, -360, 360],
    [5, 6, 0.0, 0.25202, 0.0, 9900, 0, 0, 0.932, 0, 1, -360, 360],
    [6, 11, 0.09498, 0.19890, 0.0, 9900, 0, 0, 0, 0, 1, -360, 360],
    [6, 12, 0.12291, 0.25581, 0.0, 9900, 0, 0, 0, 0, 1, -360, 360],
    [6, 13, 0.06615, 0.13027, 0.0, 9900, 0, 0, 0, 0, 1, -360, 360],
    [7, 8, 0.0, 0.17615, 0.0, 9900, 0, 0, 0, 0, 1, -360, 360],
    [7, 9, 0.0, 0.11001, 0.0, 9900, 0, 0, 0, 0, 1, -360, 360],
    [9, 10, 0.03181, 0.08450, 0.0, 9900, 0, 0, 0, 0, 1, -360, 360],
    [9, 14, 0.12711, 0.27038, 0.0, 9900, 0, 0, 0, 0, 1, -360, 360],
    [10, 11, 0.08205, 0.19207, 0.0, 9900, 0, 0, 0, 0, 1, -360, 360],
    [12, 13, 0.22092, 0.19988, 0.0, 9900, 0, 0, 0, 0, 1, -360, 360],
    [13, 14, 0.17093, 0.34802, 0.0, 9900, 0, 0, 0, 0, 1, -360, 360],
]


@dataclass
class Case:
    name: str
    bus: list = field(default_factory=list)       # 13-column rows
    gen: list = field(default_factory=list)       # 10-column rows
    branch: list = field(default_factory=list)    # 13-column rows
    base_mva: float = 100.0
    comment: str = ""


# ----------------------------------------------------------------------------
# Newton-Raphson AC power flow (polar form, no reactive limits).
# ----------------------------------------------------------------------------

def build_ybus(case: Case, index: dict[int, int]) -> np.ndarray:
    n = len(case.bus)
    y = np.zeros((n, n), dtype=complex)
    for row in case.branch:
        if int(row[10]) == 0:
            continue
        f, t = index[int(row[0])], index[int(row[1])]
        ys = 1.0 / complex(row[2], row[3])
        bc = 1j * row[4] / 2.0
        tap = row[8] if row[8] != 0 else 1.0
        y[f, f] += (ys + bc) / (tap * tap)
        y[t, t] += ys + bc
        y[f, t] += -ys / tap
        y[t, f] += -ys / tap
    for row in case.bus:
        k = index[int(row[0])]
        y[k, k] += complex(row[4], row[5]) / case.base_mva
    return y


def newton_pf(case: Case, tol: float = 1e-11, max_iter: int = 40) -> tuple[np.ndarray, np.ndarray]:
    """Solve the case; returns (Vm, Va_deg) in bus order.  Raises if not converged."""
    index = {int(row[0]): i for i, row in enumerate(case.bus)}
    n = len(case.bus)
    ybus = build_ybus(case, index)

    types = np.array([int(row[1]) for row in case.bus])
    slack = np.flatnonzero(types == 3)
    if len(slack) != 1:
        raise ValueError(f"{case.name}: expected exactly one slack bus, found {len(slack)}")
    pv = np.flatnonzero(types == 2)
    pq = np.flatnonzero(types == 1)
    non_slack = np.concatenate([pv, pq])

    p_spec = -np.array([row[2] for row in case.bus]) / case.base_mva
    q_spec = -np.array([row[3] for row in case.bus]) / case.base_mva
    vset = np.ones(n)
    for row in case.gen:
        if int(row[7]) == 0:
            continue
        k = index[int(row[0])]
        p_spec[k] += row[1] / case.base_mva
        vset[k] = row[5]

    vm = np.ones(n)
    vm[types != 1] = vset[types != 1]
    va = np.zeros(n)

    for _ in range(max_iter):
        v = vm * np.exp(1j * va)
        s = v * np.conj(ybus @ v)
        mis = np.concatenate(
            [p_spec[non_slack] - s.real[non_slack], q_spec[pq] - s.imag[pq]]
        )
        if np.max(np.abs(mis)) < tol:
            return vm, np.degrees(va)

        ibus = ybus @ v
        diag_v = np.diag(v)
        diag_i = np.diag(ibus)
        diag_vnorm = np.diag(v / np.abs(v))
        ds_dva = 1j * diag_v @ np.conj(diag_i - ybus @ diag_v)
        ds_dvm = diag_vnorm @ np.conj(diag_i) + diag_v @ np.conj(ybus @ diag_vnorm)

        j11 = ds_dva.real[np.ix_(non_slack, non_slack)]
        j12 = ds_dvm.real[np.ix_(non_slack, pq)]
        j21 = ds_dva.imag[np.ix_(pq, non_slack)]
        j22 = ds_dvm.imag[np.ix_(pq, pq)]
        jac = np.block([[j11, j12], [j21, j22]])
        step = np.linalg.solve(jac, mis)

        va[non_slack] += step[: len(non_slack)]
        vm[pq] += step[len(non_slack):]

    raise RuntimeError(f"{case.name}: power flow did not converge in {max_iter} iterations")


def stamp_solution(case: Case, vm: np.ndarray, va_deg: np.ndarray) -> None:
    """Write solved voltages into the bus table and solved injections into gens."""
    index = {int(row[0]): i for i, row in enumerate(case.bus)}
    for i, row in enumerate(case.bus):
        row[7] = round(float(vm[i]), 6)
        row[8] = round(float(va_deg[i]), 6)
    ybus = build_ybus(case, index)
    v = vm * np.exp(1j * np.radians(va_deg))
    s = v * np.conj(ybus @ v) * case.base_mva
    gens_at_bus: dict[int, list] = {}
    for row in case.gen:
        gens_at_bus.setdefault(index[int(row[0])], []).append(row)
    for k, rows in gens_at_bus.items():
        bus_row = case.bus[k]
        total_q = s.imag[k] + bus_row[3]
        active = [r for r in rows if int(r[7]) != 0]
        for r in active:
            r[2] = round(total_q / len(active), 3)
        if int(bus_row[1]) == 3:
            total_p = s.real[k] + bus_row[2]
            for r in active:
                r[1] = round(total_p / len(active), 3)


# ----------------------------------------------------------------------------
# Synthetic network construction.
# ----------------------------------------------------------------------------

def _mst_edges(points: np.ndarray) -> list[tuple[int, int]]:
    n = len(points)
    d = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=2)
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    best = d[0].copy()
    parent = np.zeros(n, dtype=int)
    edges = []
    for _ in range(n - 1):
        best_masked = np.where(in_tree, np.inf, best)
        j = int(np.argmin(best_masked))
        edges.append((int(parent[j]), j))
        in_tree[j] = True
        closer = d[j] < best
        best[closer] = d[j][closer]
        parent[closer] = j
    return edges


@dataclass
class SynthSpec:
    name: str
    n: int
    seed: int
    gen_fraction: float = 0.15
    chord_factor: float = 0.4        # extra edges as a fraction of n
    load_mw_per_bus: float = 6.0
    sparse_ids: bool = False         # non-contiguous bus numbering
    n_parallel: int = 0              # duplicated branches (parallel circuits)
    n_out_of_service: int = 0        # status-0 branches
    n_transformers: int = 0          # zero-resistance tap branches
    n_shunts: int = 0
    charging: tuple[float, float] = (0.1, 0.4)   # line charging as a fraction of x


def synth_case(sc: SynthSpec) -> Case:
    rng = np.random.default_rng(sc.seed)
    n = sc.n
    points = rng.random((n, 2)) * math.sqrt(n / 30.0)

    pairs = set()
    edges = []
    for a, b in _mst_edges(points):
        pairs.add(frozenset((a, b)))
        edges.append((a, b))
    d = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=2)
    want_extra = int(round(sc.chord_factor * n))
    order = np.argsort(d, axis=1)
    tries = 0
    while want_extra > 0 and tries < 50 * n:
        tries += 1
        a = int(rng.integers(0, n))
        rank = int(rng.integers(1, 4))
        b = int(order[a, rank])
        key = frozenset((a, b))
        if a != b and key not in pairs:
            pairs.add(key)
            edges.append((a, b))
            want_extra -= 1

    if sc.sparse_ids:
        ids = [101 + 3 * i for i in range(n)]
    else:
        ids = list(range(1, n + 1))

    # Branch electrical parameters scale with line length.
    branch = []
    mean_len = float(np.mean([d[a, b] for a, b in edges]))
    for a, b in edges:
        length = d[a, b] / mean_len
        x = 0.10 * length * rng.uniform(0.8, 1.25)
        x = min(max(x, 0.01), 0.45)
        r = x / rng.uniform(2.5, 6.0)
        bc = x * rng.uniform(*sc.charging)
        branch.append([ids[a], ids[b], round(r, 5), round(x, 5), round(bc, 5),
                       0, 0, 0, 0, 0, 1, -360, 360])

    for _ in range(sc.n_transformers):
        i = int(rng.integers(0, len(branch)))
        branch[i][2] = 0.0
        branch[i][4] = 0.0
        branch[i][8] = round(rng.uniform(0.95, 1.05), 3)
    for _ in range(sc.n_parallel):
        i = int(rng.integers(0, len(branch)))
        child = list(branch[i])
        branch.append(child)
    for _ in range(sc.n_out_of_service):
        row = list(branch[int(rng.integers(0, len(branch)))])
        row[10] = 0
        branch.append(row)

    # Loads at most buses; generators at a seeded subset.
    degree = np.zeros(n, dtype=int)
    for a, b in edges:
        degree[a] += 1
        degree[b] += 1
    slack = int(np.argmax(degree))
    n_gen = max(2, round(sc.gen_fraction * n))
    candidates = [i for i in range(n) if i != slack]
    gen_buses = [slack] + list(rng.choice(candidates, size=n_gen - 1, replace=False))

    pd = np.zeros(n)
    qd = np.zeros(n)
    for i in range(n):
        if rng.random() < 0.75:
            pd[i] = sc.load_mw_per_bus * rng.uniform(0.3, 1.9)
            qd[i] = pd[i] * rng.uniform(0.15, 0.45)
    total_load = float(pd.sum())

    bus = []
    shunt_buses = set(
        int(v) for v in rng.choice(n, size=min(sc.n_shunts, n), replace=False)
    ) if sc.n_shunts else set()
    for i in range(n):
        btype = 3 if i == slack else (2 if i in gen_buses else 1)
        bs = round(rng.uniform(0.4, 1.2) * sc.load_mw_per_bus, 2) if i in shunt_buses else 0.0
        bus.append([ids[i], btype, round(pd[i], 2), round(qd[i], 2), 0.0, bs,
                    1, 1.0, 0.0, 135, 1, 1.1, 0.9])

    gen = []
    pv_share = 0.72 * total_load / max(len(gen_buses) - 1, 1)
    for i in gen_buses:
        vg = round(rng.uniform(1.0, 1.055), 4)
        pg = 0.0 if i == slack else round(pv_share * rng.uniform(0.6, 1.4), 2)
        gen.append([ids[i], pg, 0.0, 300.0, -300.0, vg, 100, 1, 10 * sc.load_mw_per_bus * n, 0])

    return Case(
        name=sc.name,
        bus=bus,
        gen=gen,
        branch=branch,
        comment=(
            f"Synthetic {n}-bus transmission-style network (seed {sc.seed}).\n"
            "% Spatial topology: minimum spanning tree plus nearest-neighbour chords;\n"
            "% impedances scale with line length.  Bus voltages are the solved AC\n"
            "% power-flow state computed by tools/gen_fixtures.py."
        ),
    )


# ----------------------------------------------------------------------------
# Case file writer.
# ----------------------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, int):
        return str(value)
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(round(float(value), 6))


def write_case(case: Case, path: str) -> None:
    lines = [f"function mpc = {case.name}"]
    if case.comment:
        lines.append(f"% {case.comment}")
    lines += [
        "mpc.version = '2';",
        "",
        "%% system MVA base",
        f"mpc.baseMVA = {_fmt(case.base_mva)};",
        "",
        "%% bus data",
        "%\tbus_i\ttype\tPd\tQd\tGs\tBs\tarea\tVm\tVa\tbaseKV\tzone\tVmax\tVmin",
        "mpc.bus = [",
    ]
    lines += ["\t" + "\t".join(_fmt(v) for v in row) + ";" for row in case.bus]
    lines += [
        "];",
        "",
        "%% generator data",
        "%\tbus\tPg\tQg\tQmax\tQmin\tVg\tmBase\tstatus\tPmax\tPmin",
        "mpc.gen = [",
    ]
    lines += ["\t" + "\t".join(_fmt(v) for v in row) + ";" for row in case.gen]
    lines += [
        "];",
        "",
        "%% branch data",
        "%\tfbus\ttbus\tr\tx\tb\trateA\trateB\trateC\tratio\tangle\tstatus\tangmin\tangmax",
        "mpc.branch = [",
    ]
    lines += ["\t" + "\t".join(_fmt(v) for v in row) + ";" for row in case.branch]
    lines += ["];", ""]
    with open(path, "w") as fh:
        fh.write("\n".join(lines))


# ----------------------------------------------------------------------------
# Water demo network.
# ----------------------------------------------------------------------------

def write_water_demo(pipes_path: str, signals_path: str, seed: int = 11) -> None:
    rng = np.random.default_rng(seed)
    # 4x4 junction grid with loops plus two diagonal ties.
    n_side = 4
    n = n_side * n_side
    pipes = []
    for r in range(n_side):
        for c in range(n_side):
            k = r * n_side + c
            if c + 1 < n_side:
                pipes.append((k, k + 1))
            if r + 1 < n_side:
                pipes.append((k, k + n_side))
    pipes.append((0, 5))
    pipes.append((10, 15))

    rows = ["# demo looped water network", "from,to,roughness,diameter_m,length_m"]
    weights = []
    for a, b in pipes:
        c = round(rng.uniform(80, 140), 1)
        dia = round(rng.uniform(0.2, 0.6), 3)
        length = round(rng.uniform(200, 1500), 1)
        rows.append(f"{a},{b},{c},{dia},{length}")
        coeff = 10.667 * c ** -1.852 * dia ** -4.871 * length
        weights.append(1.0 / coeff)
    with open(pipes_path, "w") as fh:
        fh.write("\n".join(rows) + "\n")

    # Smooth head-pressure-like signals: a base head plus a low-pass component
    # in the Hazen-Williams-weighted basis plus mild noise.
    lap = np.zeros((n, n))
    for (a, b), w in zip(pipes, weights):
        lap[a, b] -= w
        lap[b, a] -= w
        lap[a, a] += w
        lap[b, b] += w
    vals, vecs = np.linalg.eigh(lap)
    sig_rows = ["# demo head-pressure signals (one row per hour)", "format,real"]
    for _ in range(24):
        coef = rng.normal(0, 1, n) / (1.0 + 40.0 * vals / max(vals[-1], 1e-12))
        head = 50.0 + 3.0 * vecs @ coef + rng.normal(0, 0.05, n)
        sig_rows.append(",".join(f"{v:.4f}" for v in head))
    with open(signals_path, "w") as fh:
        fh.write("\n".join(sig_rows) + "\n")


# ----------------------------------------------------------------------------
# Main.
# ----------------------------------------------------------------------------

SYNTH_SPECS = [
    SynthSpec("synth024", 24, seed=2401, gen_fraction=0.20, load_mw_per_bus=7.0,
              n_parallel=1, n_transformers=1),
    SynthSpec("synth030", 30, seed=3002, gen_fraction=0.18, load_mw_per_bus=6.5,
              n_out_of_service=1, n_shunts=1),
    SynthSpec("synth057", 57, seed=5703, gen_fraction=0.12, load_mw_per_bus=4.5,
              sparse_ids=True, n_parallel=1, n_transformers=2),
    SynthSpec("synth118", 118, seed=11804, gen_fraction=0.28, load_mw_per_bus=3.5,
              chord_factor=0.5, n_transformers=3, n_shunts=2, n_out_of_service=1),
    SynthSpec("synth145", 145, seed=14505, gen_fraction=0.40, load_mw_per_bus=3.5,
              chord_factor=0.5, n_transformers=2, n_parallel=2),
    SynthSpec("synth200", 200, seed=20006, gen_fraction=0.15, load_mw_per_bus=3.2,
              chord_factor=0.55, n_transformers=4, n_shunts=3, charging=(0.03, 0.1)),
    SynthSpec("synth300", 300, seed=30007, gen_fraction=0.17, load_mw_per_bus=2.4,
              chord_factor=0.55, n_transformers=5, n_shunts=3, n_out_of_service=2,
              n_parallel=1, charging=(0.03, 0.1)),
]


def make_case14() -> Case:
    case = Case(
        name="case14",
        bus=[list(r) for r in CASE14_BUS],
        gen=[list(r) for r in CASE14_GEN],
        branch=[list(r) for r in CASE14_BRANCH],
        comment=(
            "IEEE 14-bus test case.\n"
            "% Bus voltages are the solved AC power-flow state recomputed by\n"
            "% tools/gen_fixtures.py; the solve is validated against the published\n"
            "% solution before writing."
        ),
    )
    return case


def main() -> int:
    os.makedirs(OUT_DIR, exist_ok=True)

    case14 = make_case14()
    published_vm = np.array([row[7] for row in CASE14_BUS])
    published_va = np.array([row[8] for row in CASE14_BUS])
    vm, va = newton_pf(case14)
    dvm = np.max(np.abs(vm - published_vm))
    dva = np.max(np.abs(va - published_va))
    print(f"case14 solve vs published: max |dVm| = {dvm:.2e} p.u., max |dVa| = {dva:.3f} deg")
    if dvm > 2e-3 or dva > 2e-2:
        print("case14 validation FAILED; refusing to write fixtures", file=sys.stderr)
        return 1
    stamp_solution(case14, vm, va)
    write_case(case14, os.path.join(OUT_DIR, "case14.m"))
    print(f"wrote case14.m ({len(case14.bus)} buses, {len(case14.branch)} branches)")

    for sc in SYNTH_SPECS:
        case = synth_case(sc)
        vm, va = newton_pf(case)
        spread = float(np.max(va) - np.min(va))
        if not (0.85 <= vm.min() and vm.max() <= 1.12):
            print(f"{sc.name}: voltage range [{vm.min():.3f}, {vm.max():.3f}] out of band",
                  file=sys.stderr)
            return 1
        stamp_solution(case, vm, va)
        write_case(case, os.path.join(OUT_DIR, f"{sc.name}.m"))
        print(
            f"wrote {sc.name}.m ({len(case.bus)} buses, {len(case.branch)} branches, "
            f"Vm in [{vm.min():.3f}, {vm.max():.3f}], angle spread {spread:.1f} deg)"
        )

    write_water_demo(
        os.path.join(OUT_DIR, "water_demo_pipes.csv"),
        os.path.join(OUT_DIR, "water_demo_signals.csv"),
    )
    print("wrote water_demo_pipes.csv, water_demo_signals.csv")
    return 0


if __name__ == "__main__":
    sys.exit(main())
