"""Matching-code lattice, stabilizers, exchange schedule and truncation.

The hexagonal lattice is built as a brick wall: a brick at (row, col)
spans vertex columns col..col+2 in vertex rows row and row+1, with
vertical edges on its two ends. Vertical edges carry ZZ checks (blue);
horizontal edges alternate XX (red, even column) and YY (green, odd
column) so every vertex touches at most one edge of each color. Each
hexagon check acts on its six boundary vertices with the Pauli matching
the color of the vertex's outward edge (Z for the two middle vertices,
whose outward edges are vertical); this is fixed by the commutation
requirements, not by any closed formula.

Everything here is symbolic Pauli algebra over the vertex-qubit register;
dense simulation of a truncated patch lives with the callers.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import TopologyError
from .pauli import PauliOperator

RED, GREEN, BLUE = "red", "green", "blue"

_COLOR_LETTER = {RED: "X", GREEN: "Y", BLUE: "Z"}


def _horizontal_color(col: int) -> str:
    """Color of the horizontal edge between columns col and col+1."""
    return RED if col % 2 == 0 else GREEN


@dataclass(frozen=True)
class Vertex:
    id: int
    row: int
    col: int


@dataclass(frozen=True)
class Edge:
    id: int
    vertices: tuple[int, int]
    color: str


@dataclass(frozen=True)
class Hexagon:
    id: int
    row: int
    col: int
    vertices: tuple[int, ...]  # six boundary vertex ids
    edges: tuple[int, ...]     # six boundary edge ids


@dataclass
class Lattice:
    vertices: list[Vertex]
    edges: list[Edge]
    hexagons: list[Hexagon]
    _vertex_by_coord: dict[tuple[int, int], int] = field(default_factory=dict)
    _edge_by_pair: dict[tuple[int, int], int] = field(default_factory=dict)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    def vertex_at(self, row: int, col: int) -> int:
        return self._vertex_by_coord[(row, col)]

    def edge_between(self, va: int, vb: int) -> int | None:
        return self._edge_by_pair.get((min(va, vb), max(va, vb)))

    def edges_at(self, vid: int) -> list[Edge]:
        return [e for e in self.edges if vid in e.vertices]

    def blue_edge_at(self, vid: int) -> Edge | None:
        for e in self.edges_at(vid):
            if e.color == BLUE:
                return e
        return None

    def edge_operator(self, edge: Edge | int) -> PauliOperator:
        if isinstance(edge, int):
            edge = self.edges[edge]
        letter = _COLOR_LETTER[edge.color]
        return PauliOperator.from_terms(
            self.num_vertices, {v: letter for v in edge.vertices})

    def hexagon_operator(self, hexagon: Hexagon | int) -> PauliOperator:
        """Product over the six boundary vertices of the outward-edge color."""
        if isinstance(hexagon, int):
            hexagon = self.hexagons[hexagon]
        terms: dict[int, str] = {}
        for vid in hexagon.vertices:
            v = self.vertices[vid]
            if v.col == hexagon.col + 1:
                terms[vid] = "Z"  # outward edge is vertical
            elif v.col == hexagon.col:
                terms[vid] = _COLOR_LETTER[_horizontal_color(v.col - 1)]
            else:  # right corners, col == hexagon.col + 2
                terms[vid] = _COLOR_LETTER[_horizontal_color(v.col)]
        return PauliOperator.from_terms(self.num_vertices, terms)

    def to_json_dict(self) -> dict:
        return {
            "vertices": [{"id": v.id, "row": v.row, "col": v.col}
                         for v in self.vertices],
            "edges": [{"id": e.id, "vertices": list(e.vertices), "color": e.color}
                      for e in self.edges],
            "hexagons": [{"id": h.id, "row": h.row, "col": h.col,
                          "vertices": list(h.vertices), "edges": list(h.edges)}
                         for h in self.hexagons],
        }


def from_bricks(bricks: list[tuple[int, int]]) -> Lattice:
    """Assemble a lattice from brick positions; col must have row's parity."""
    if not bricks:
        raise ValueError("at least one brick is required")
    for r, c in bricks:
        if (c - r) % 2 != 0:
            raise ValueError(f"brick column {c} has the wrong parity for row {r}")
    if len(set(bricks)) != len(bricks):
        raise ValueError("duplicate brick positions")

    coords: set[tuple[int, int]] = set()
    for r, c in bricks:
        for dc in range(3):
            coords.add((r, c + dc))
            coords.add((r + 1, c + dc))
    vertex_by_coord = {rc: i for i, rc in enumerate(sorted(coords))}
    vertices = [Vertex(i, r, c) for (r, c), i in sorted(
        vertex_by_coord.items(), key=lambda kv: kv[1])]

    edge_pairs: dict[tuple[int, int], str] = {}

    def add_edge(a: tuple[int, int], b: tuple[int, int], color: str) -> None:
        pair = tuple(sorted((vertex_by_coord[a], vertex_by_coord[b])))
        edge_pairs.setdefault(pair, color)

    for r, c in bricks:
        for row in (r, r + 1):
            add_edge((row, c), (row, c + 1), _horizontal_color(c))
            add_edge((row, c + 1), (row, c + 2), _horizontal_color(c + 1))
        add_edge((r, c), (r + 1, c), BLUE)
        add_edge((r, c + 2), (r + 1, c + 2), BLUE)

    edge_by_pair = {pair: i for i, pair in enumerate(sorted(edge_pairs))}
    edges = [Edge(i, pair, edge_pairs[pair]) for pair, i in sorted(
        edge_by_pair.items(), key=lambda kv: kv[1])]

    hexagons = []
    for hid, (r, c) in enumerate(sorted(bricks)):
        vids = tuple(vertex_by_coord[(row, c + dc)]
                     for row in (r, r + 1) for dc in range(3))
        hex_edges = []
        for row in (r, r + 1):
            for dc in (0, 1):
                pair = tuple(sorted((vertex_by_coord[(row, c + dc)],
                                     vertex_by_coord[(row, c + dc + 1)])))
                hex_edges.append(edge_by_pair[pair])
        for dc in (0, 2):
            pair = tuple(sorted((vertex_by_coord[(r, c + dc)],
                                 vertex_by_coord[(r + 1, c + dc)])))
            hex_edges.append(edge_by_pair[pair])
        hexagons.append(Hexagon(hid, r, c, vids, tuple(hex_edges)))

    return Lattice(vertices, edges, hexagons,
                   _vertex_by_coord=vertex_by_coord, _edge_by_pair=edge_by_pair)


def build_lattice(rows: int, cols: int) -> Lattice:
    """Brick-wall patch of ``rows`` x ``cols`` hexagons."""
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be positive")
    bricks = [(r, (r % 2) + 2 * k) for r in range(rows) for k in range(cols)]
    return from_bricks(bricks)


@dataclass
class StabilizerSet:
    """Commuting generators over the vertex-qubit register, with origins."""

    generators: list[PauliOperator]
    labels: list[str]

    def as_dict(self) -> dict[str, PauliOperator]:
        return dict(zip(self.labels, self.generators))

    def all_commute(self) -> bool:
        for i in range(len(self.generators)):
            for j in range(i + 1, len(self.generators)):
                if not self.generators[i].commutes_with(self.generators[j]):
                    return False
        return True


def standard_stabilizers(lat: Lattice) -> StabilizerSet:
    """ZZ on every blue edge plus one check per hexagon."""
    gens: list[PauliOperator] = []
    labels: list[str] = []
    for e in lat.edges:
        if e.color == BLUE:
            gens.append(lat.edge_operator(e))
            labels.append(f"zz:{e.id}")
    for h in lat.hexagons:
        gens.append(lat.hexagon_operator(h))
        labels.append(f"hex:{h.id}")
    return StabilizerSet(gens, labels)


@dataclass(frozen=True)
class ScheduleStep:
    added: tuple[tuple[str, PauliOperator], ...]
    removed: tuple[str, ...]


@dataclass
class ExchangeSchedule:
    """Stabilizer-set transitions that exchange the two edge defects."""

    lattice: Lattice
    initial: StabilizerSet
    steps: list[ScheduleStep]
    roles: dict[str, int]  # v1/v2/v3 vertex ids, e_yy/e_xx/zz_a/zz_b edge ids

    def generator_sets(self) -> list[dict[str, PauliOperator]]:
        """Generator dict after each step, starting with the initial set."""
        current = self.initial.as_dict()
        out = [dict(current)]
        for step in self.steps:
            for label in step.removed:
                current.pop(label)
            for label, op in step.added:
                current[label] = op
            out.append(dict(current))
        return out

    def to_json_dict(self) -> dict:
        return {
            "roles": self.roles,
            "steps": [
                {
                    "add": [{"label": lbl, "operator": op.label()}
                            for lbl, op in step.added],
                    "remove": list(step.removed),
                }
                for step in self.steps
            ],
        }


def _anticommuting(current: dict[str, PauliOperator],
                   ops: list[PauliOperator]) -> list[str]:
    return [lbl for lbl, gen in current.items()
            if any(not gen.commutes_with(op) for op in ops)]


def exchange_schedule(lat: Lattice, zz_edge_a: int, zz_edge_b: int) -> ExchangeSchedule:
    """Exchange built around two blue edges linked by one green and one red edge.

    The pattern: zz_edge_a touches the shared vertex v2 of the green edge
    (v1, v2) and the red edge (v2, v3); zz_edge_b hangs off v3. v1 must
    carry no blue edge in the patch, so every step removes exactly the
    generators that anticommute with what it adds:

        step 1: measure YY(v1, v2)       -- removes ZZ_a
        step 2: measure XX(v2, v3)       -- removes YY and ZZ_b
        step 3: remeasure ZZ_a and ZZ_b  -- removes XX; the set is restored
    """
    try:
        ea, eb = lat.edges[zz_edge_a], lat.edges[zz_edge_b]
    except IndexError as exc:
        raise TopologyError("edge id out of range") from exc
    if ea.color != BLUE or eb.color != BLUE:
        raise TopologyError("both exchange edges must be blue (ZZ) edges")
    if ea.id == eb.id:
        raise TopologyError("the two exchange edges must be distinct")

    # red edge joining an endpoint of each blue edge fixes v2 and v3
    red = None
    for e in lat.edges:
        if e.color != RED:
            continue
        sa = set(e.vertices) & set(ea.vertices)
        sb = set(e.vertices) & set(eb.vertices)
        if len(sa) == 1 and len(sb) == 1 and sa != sb:
            red = e
            break
    if red is None:
        raise TopologyError("no red edge links the two blue edges")
    v2 = (set(red.vertices) & set(ea.vertices)).pop()
    v3 = (set(red.vertices) & set(eb.vertices)).pop()

    green = None
    for e in lat.edges:
        if e.color == GREEN and v2 in e.vertices:
            green = e
            break
    if green is None:
        raise TopologyError("no green edge leaves the shared vertex")
    v1 = next(v for v in green.vertices if v != v2)
    if lat.blue_edge_at(v1) is not None:
        raise TopologyError(
            "the outer green vertex must not carry a blue edge in the patch")

    label_a, label_b = f"zz:{ea.id}", f"zz:{eb.id}"
    initial = standard_stabilizers(lat)
    current = initial.as_dict()
    if label_a not in current or label_b not in current:
        raise TopologyError("exchange edges are missing from the stabilizer set")

    yy_op = lat.edge_operator(green)
    xx_op = lat.edge_operator(red)
    plan = [
        ((("yy:" + str(green.id), yy_op),), {label_a}),
        ((("xx:" + str(red.id), xx_op),), {"yy:" + str(green.id), label_b}),
        (((label_a, current[label_a]), (label_b, current[label_b])), {"xx:" + str(red.id)}),
    ]

    steps: list[ScheduleStep] = []
    for added, expected_removed in plan:
        removed = _anticommuting(current, [op for _, op in added])
        if set(removed) != expected_removed:
            raise TopologyError(
                f"edges do not form the exchange pattern: adding "
                f"{[lbl for lbl, _ in added]} would remove {sorted(removed)}")
        for lbl in removed:
            current.pop(lbl)
        for lbl, op in added:
            current[lbl] = op
        steps.append(ScheduleStep(tuple(added), tuple(sorted(removed))))

    if current != initial.as_dict():
        raise TopologyError("exchange did not restore the stabilizer set")

    roles = {"v1": v1, "v2": v2, "v3": v3,
             "e_yy": green.id, "e_xx": red.id,
             "zz_a": ea.id, "zz_b": eb.id}
    return ExchangeSchedule(lat, initial, steps, roles)


@dataclass(frozen=True)
class ExchangeSupport:
    vertex_ids: frozenset[int]
    edge_ids: frozenset[int]  # ancilla qubits of the added parity measurements

    def __len__(self) -> int:
        return len(self.vertex_ids) + len(self.edge_ids)


def support(sched: ExchangeSchedule) -> ExchangeSupport:
    """Qubits whose state the exchange can change, plus measurement ancillas.

    A vertex qubit is touched iff some scheduled generator acts on it with
    X or Y; vertices seen only through Z letters stay in Z eigenstates for
    the whole post-selected process and act as classical references. Each
    added measurement still of weight >= 2 after restriction needs its
    edge ancilla.
    """
    touched: set[int] = set()
    added_ops: list[tuple[str, PauliOperator]] = []
    for step in sched.steps:
        for lbl, op in step.added:
            added_ops.append((lbl, op))
        for lbl, op in step.added:
            for q in op.support():
                if op.letter(q) in ("X", "Y"):
                    touched.add(q)
        for lbl in step.removed:
            op = sched.initial.as_dict().get(lbl)
            if op is None:
                # removed generator introduced by an earlier step
                op = dict(added_ops)[lbl]
            for q in op.support():
                if op.letter(q) in ("X", "Y"):
                    touched.add(q)
    ancillas: set[int] = set()
    for lbl, op in added_ops:
        inside = [q for q in op.support() if q in touched]
        if len(inside) >= 2 and lbl.split(":")[0] in ("yy", "xx", "zz"):
            ancillas.add(int(lbl.split(":")[1]))
    return ExchangeSupport(frozenset(touched), frozenset(ancillas))


@dataclass(frozen=True)
class TruncatedMeasurement:
    label: str
    operator: PauliOperator  # over the truncated vertex register


@dataclass(frozen=True)
class TruncatedExchange:
    """Five-qubit experiment extracted from a schedule.

    ``vertex_ids`` lists (v1, v2, v3) and ``ancilla_edge_ids`` the edge
    qubits mediating the YY and XX measurements; ``measurements`` is the
    schedule's addition sequence restricted to the support, ZZ checks with
    one endpoint outside reduced to a single Z on the interior vertex.
    """

    vertex_ids: tuple[int, int, int]
    ancilla_edge_ids: tuple[int, int]
    measurements: tuple[TruncatedMeasurement, ...]
    dropped: tuple[str, ...]

    def vertex_index(self, vid: int) -> int:
        return self.vertex_ids.index(vid)


def truncate(sched: ExchangeSchedule) -> TruncatedExchange:
    """Restrict the exchange to its support; see TruncatedExchange."""
    sup = support(sched)
    roles = sched.roles
    order = (roles["v1"], roles["v2"], roles["v3"])
    if set(order) != set(sup.vertex_ids):
        raise TopologyError("support does not match the exchange roles")
    lat = sched.lattice

    def reduce_op(label: str, op: PauliOperator) -> PauliOperator | None:
        inside = [q for q in op.support() if q in sup.vertex_ids]
        if not inside:
            return None
        if len(inside) == len(op.support()):
            return op.restrict(order)
        kind = label.split(":")[0]
        if kind == "zz" and len(inside) == 1:
            return PauliOperator.from_terms(3, {order.index(inside[0]): "Z"})
        return None  # hexagons and anything else without full support

    seen: list[TruncatedMeasurement] = []
    for step in sched.steps:
        for lbl, op in step.added:
            reduced = reduce_op(lbl, op)
            if reduced is not None:
                seen.append(TruncatedMeasurement(lbl, reduced))
    dropped = []
    for lbl, op in zip(sched.initial.labels, sched.initial.generators):
        inside = [q for q in op.support() if q in sup.vertex_ids]
        if inside and reduce_op(lbl, op) is None:
            dropped.append(lbl)
    return TruncatedExchange(
        vertex_ids=order,
        ancilla_edge_ids=(roles["e_yy"], roles["e_xx"]),
        measurements=tuple(seen),
        dropped=tuple(dropped),
    )


def minimal_exchange_patch() -> tuple[Lattice, int, int]:
    """Smallest patch embedding the exchange; returns (lattice, zz_a, zz_b).

    Three bricks arranged so that the two scheduled blue edges exist while
    the outer green vertex v1 has no blue edge inside the patch.
    """
    lat = from_bricks([(0, 0), (0, 2), (1, 3)])
    v2 = lat.vertex_at(1, 2)
    v3 = lat.vertex_at(1, 3)
    zz_a = lat.edge_between(lat.vertex_at(0, 2), v2)
    zz_b = lat.edge_between(v3, lat.vertex_at(2, 3))
    assert zz_a is not None and zz_b is not None
    return lat, zz_a, zz_b


def binary_rank(rows: list[np.ndarray]) -> int:
    """Rank over GF(2) of a list of bit vectors."""
    mat = [row.astype(np.uint8).copy() for row in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    pivot_col = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(mat)) if mat[r][col]), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        for r in range(len(mat)):
            if r != rank and mat[r][col]:
                mat[r] ^= mat[rank]
        rank += 1
    return rank


def symplectic_rank(ops: list[PauliOperator]) -> int:
    return binary_rank([np.concatenate([op.x, op.z]) for op in ops])


def schedule_to_json(sched: ExchangeSchedule, indent: int | None = 2) -> str:
    doc = {
        "lattice": sched.lattice.to_json_dict(),
        "schedule": sched.to_json_dict(),
    }
    return json.dumps(doc, indent=indent)
