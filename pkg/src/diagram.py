"""
Oriented pseudoknot and singular-knot diagrams as combinatorial maps.

Each crossing has four ports (slots) in counterclockwise order. Slots 0
and 1 take the incoming strands, slots 2 and 3 the outgoing ones, and a
strand entering at slot k leaves at slot k+2. A Positive crossing has
its slot-0 strand over, a Negative one its slot-1 strand over, and a Pre
crossing has no over/under information.

Corner k of a crossing lies between slots k and k+1. With the incoming
strands pointing up, corner 0 is the region below the crossing (B),
corner 1 the left region (L), corner 2 the top region (T) and corner 3
the right region (R).
"""

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from algebra import InputError, PsyError

logger = logging.getLogger(__name__)

Port = Tuple[str, int]
Edge = Tuple[Port, Port]
Corner = Tuple[str, int]

IN_SLOTS = (0, 1)
OUT_SLOTS = (2, 3)


class DiagramError(PsyError):
    """Raised when an operation needs a valid diagram and gets an invalid one."""

    pass


class CrossingKind(Enum):
    POSITIVE = "+"
    NEGATIVE = "-"
    PRE = "#"

    @property
    def is_classical(self) -> bool:
        return self is not CrossingKind.PRE

    @property
    def sign(self) -> int:
        """+1, -1, or 0 for precrossings."""
        return {"+": 1, "-": -1, "#": 0}[self.value]

    def mirrored(self) -> "CrossingKind":
        if self is CrossingKind.POSITIVE:
            return CrossingKind.NEGATIVE
        if self is CrossingKind.NEGATIVE:
            return CrossingKind.POSITIVE
        return self


@dataclass(frozen=True)
class Crossing:
    id: str
    kind: CrossingKind


@dataclass(frozen=True)
class Region:
    """A face of the map; free-loop regions have no corners."""

    id: int
    corners: Tuple[Corner, ...] = ()


@dataclass
class ValidationReport:
    problems: List[str] = field(default_factory=list)
    region_count: Optional[int] = None

    @property
    def valid(self) -> bool:
        return not self.problems

    def format(self) -> str:
        if self.valid:
            return f"valid: {self.region_count} regions"
        return "invalid:\n" + "\n".join(f"  {p}" for p in self.problems)


@dataclass(frozen=True)
class Diagram:
    """
    Immutable diagram value.

    Crossing order is meaningful: resolutions, precrossing masks and
    serialization all follow it. Edges are kept sorted by tail port.
    """

    name: str
    crossings: Tuple[Crossing, ...]
    edges: Tuple[Edge, ...]
    free_loops: int = 0

    @classmethod
    def build(
        cls,
        name: str,
        kinds: Mapping[str, CrossingKind],
        edges: Iterable[Edge],
        free_loops: int = 0,
    ) -> "Diagram":
        crossings = tuple(Crossing(cid, kind) for cid, kind in kinds.items())
        normalized = tuple(
            sorted(((str(t[0]), int(t[1])), (str(h[0]), int(h[1]))) for t, h in edges)
        )
        return cls(name=name, crossings=crossings, edges=normalized, free_loops=free_loops)

    @cached_property
    def kinds(self) -> Dict[str, CrossingKind]:
        return {c.id: c.kind for c in self.crossings}

    @cached_property
    def _mates(self) -> Dict[Port, Port]:
        mates: Dict[Port, Port] = {}
        for tail, head in self.edges:
            mates[tail] = head
            mates[head] = tail
        return mates

    def mate(self, port: Port) -> Port:
        """The port at the other end of the edge through `port`."""
        try:
            return self._mates[port]
        except KeyError:
            raise DiagramError(f"port {port[0]}.{port[1]} has no edge")

    @property
    def crossing_ids(self) -> List[str]:
        return [c.id for c in self.crossings]

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    def precrossings(self) -> List[str]:
        return [c.id for c in self.crossings if c.kind is CrossingKind.PRE]

    def replace(self, name: Optional[str] = None, kinds: Optional[Mapping[str, CrossingKind]] = None,
                edges: Optional[Iterable[Edge]] = None,
                free_loops: Optional[int] = None) -> "Diagram":
        """A new diagram with the given parts swapped in."""
        return Diagram.build(
            self.name if name is None else name,
            self.kinds if kinds is None else kinds,
            self.edges if edges is None else edges,
            self.free_loops if free_loops is None else free_loops,
        )


def pseudo_writhe(d: Diagram) -> int:
    """Number of precrossings."""
    return len(d.precrossings())


def _structure_problems(d: Diagram) -> List[str]:
    problems = []
    ids = d.crossing_ids
    if len(set(ids)) != len(ids):
        problems.append("duplicate crossing ids")
    if d.free_loops < 0:
        problems.append(f"negative free loop count {d.free_loops}")
    known = set(ids)
    seen: Dict[Port, int] = {}
    for tail, head in d.edges:
        for port, allowed, role in ((tail, OUT_SLOTS, "tail"), (head, IN_SLOTS, "head")):
            if port[0] not in known:
                problems.append(f"edge {tail[0]}.{tail[1]}->{head[0]}.{head[1]}: "
                                f"unknown crossing {port[0]}")
            elif port[1] not in allowed:
                problems.append(f"edge {tail[0]}.{tail[1]}->{head[0]}.{head[1]}: "
                                f"slot {port[1]} cannot be a {role}")
            seen[port] = seen.get(port, 0) + 1
    for cid in ids:
        for slot in range(4):
            count = seen.get((cid, slot), 0)
            if count == 0:
                problems.append(f"dangling slot {cid}.{slot}")
            elif count > 1:
                problems.append(f"slot {cid}.{slot} used by {count} edges")
    return problems


def _is_connected(d: Diagram) -> bool:
    ids = d.crossing_ids
    if not ids:
        return True
    neighbours: Dict[str, set] = {cid: set() for cid in ids}
    for tail, head in d.edges:
        neighbours[tail[0]].add(head[0])
        neighbours[head[0]].add(tail[0])
    reached = {ids[0]}
    stack = [ids[0]]
    while stack:
        for nxt in neighbours[stack.pop()]:
            if nxt not in reached:
                reached.add(nxt)
                stack.append(nxt)
    return len(reached) == len(ids)


def corner_successor(d: Diagram, corner: Corner) -> Corner:
    """Next corner along the boundary of the face containing `corner`."""
    cid, k = corner
    return d.mate((cid, (k + 1) % 4))


def _corner_cycles(d: Diagram) -> List[Tuple[Corner, ...]]:
    cycles = []
    seen = set()
    for cid in d.crossing_ids:
        for k in range(4):
            start = (cid, k)
            if start in seen:
                continue
            cycle = []
            corner = start
            while corner not in seen:
                seen.add(corner)
                cycle.append(corner)
                corner = corner_successor(d, corner)
            cycles.append(tuple(cycle))
    return cycles


def validate(d: Diagram) -> ValidationReport:
    """Check every well-formedness condition; never raises."""
    problems = _structure_problems(d)
    if problems:
        return ValidationReport(problems=problems)
    if not _is_connected(d):
        return ValidationReport(problems=["diagram is not connected"])
    v = d.crossing_count
    cycles = _corner_cycles(d)
    if v and len(cycles) != v + 2:
        return ValidationReport(
            problems=[f"non-spherical or ill-formed map: {v} crossings, "
                      f"{2 * v} edges, {len(cycles)} faces"]
        )
    return ValidationReport(region_count=len(faces(d)))


def require_valid(d: Diagram) -> None:
    report = validate(d)
    if not report.valid:
        raise DiagramError(f"invalid diagram {d.name}: " + "; ".join(report.problems))


def faces(d: Diagram) -> List[Region]:
    """
    Regions of the diagram.

    Crossing faces come first, numbered in order of their first corner;
    a crossingless diagram has one base region; every free loop adds one
    more region at the end.
    """
    problems = _structure_problems(d)
    if problems:
        raise DiagramError(f"cannot compute faces of {d.name}: {problems[0]}")
    regions = [Region(i, cycle) for i, cycle in enumerate(_corner_cycles(d))]
    if not regions:
        regions.append(Region(0))
    for _ in range(d.free_loops):
        regions.append(Region(len(regions)))
    return regions


def corner_regions(d: Diagram) -> Dict[Corner, int]:
    return {corner: r.id for r in faces(d) for corner in r.corners}


def crossing_roles(d: Diagram) -> Dict[str, Tuple[int, int, int, int]]:
    """Region ids (L, B, R, T) around each crossing."""
    where = corner_regions(d)
    return {
        cid: (where[(cid, 1)], where[(cid, 0)], where[(cid, 3)], where[(cid, 2)])
        for cid in d.crossing_ids
    }


def resolve(d: Diagram, resolution: Mapping[str, CrossingKind]) -> Diagram:
    """Replace every precrossing by the classical kind the resolution assigns."""
    pre = set(d.precrossings())
    missing = pre - set(resolution)
    if missing:
        raise InputError(f"resolution misses precrossings {sorted(missing)}")
    extra = set(resolution) - pre
    if extra:
        raise InputError(f"resolution names non-precrossings {sorted(extra)}")
    kinds = dict(d.kinds)
    for cid, kind in resolution.items():
        if not kind.is_classical:
            raise InputError(f"crossing {cid} must resolve to + or -")
        kinds[cid] = kind
    return d.replace(kinds=kinds)


def all_resolutions(d: Diagram) -> List[Dict[str, CrossingKind]]:
    """All 2^k resolutions, Positive before Negative in crossing order."""
    pre = d.precrossings()
    choices = (CrossingKind.POSITIVE, CrossingKind.NEGATIVE)
    return [dict(zip(pre, combo)) for combo in itertools.product(choices, repeat=len(pre))]


def reverse(d: Diagram) -> Diagram:
    """Reverse the orientation of every component; crossing kinds are kept."""
    edges = [
        ((head[0], (head[1] + 2) % 4), (tail[0], (tail[1] + 2) % 4))
        for tail, head in d.edges
    ]
    return d.replace(edges=edges)


def mirror(d: Diagram) -> Diagram:
    """Swap over and under at every classical crossing."""
    return d.replace(kinds={cid: k.mirrored() for cid, k in d.kinds.items()})


def components(d: Diagram) -> List[List[Port]]:
    """
    Closed strands through crossings, as the incoming ports they pass.

    Free loops are not listed; see component_count.
    """
    done = set()
    result = []
    for cid in d.crossing_ids:
        for slot in IN_SLOTS:
            if (cid, slot) in done:
                continue
            walk = []
            port = (cid, slot)
            while port not in done:
                done.add(port)
                walk.append(port)
                port = d.mate((port[0], port[1] + 2))
            result.append(walk)
    return result


def component_count(d: Diagram) -> int:
    return len(components(d)) + d.free_loops


def strand_components(d: Diagram) -> Dict[Port, int]:
    """Component index of each incoming port."""
    return {port: i for i, walk in enumerate(components(d)) for port in walk}


def precrossing_variants(d: Diagram) -> List[Diagram]:
    """
    All 2^V precrossing masks; bit i of the mask turns crossing i into a
    precrossing. Names are `<name>.m<bits>` with bits in crossing order.
    """
    ids = d.crossing_ids
    variants = []
    for bits in itertools.product("01", repeat=len(ids)):
        kinds = {
            cid: CrossingKind.PRE if bit == "1" else d.kinds[cid]
            for cid, bit in zip(ids, bits)
        }
        variants.append(d.replace(name=f"{d.name}.m{''.join(bits)}", kinds=kinds))
    return variants


def from_pd(name: str, pd: Sequence[Sequence[int]], ids: Optional[Sequence[str]] = None) -> Diagram:
    """
    Build a diagram from a planar-diagram code.

    Each X[i,j,k,l] lists edge labels counterclockwise starting from the
    incoming under edge; labels increase along each component. The over
    strand enters at l (then the crossing is Positive) or at j (Negative).
    """
    if ids is None:
        ids = [f"c{i + 1}" for i in range(len(pd))]
    if len(ids) != len(pd):
        raise InputError("one id per crossing is required")
    kinds: Dict[str, CrossingKind] = {}
    heads: Dict[int, List[Port]] = {}
    tails: Dict[int, List[Port]] = {}
    for cid, code in zip(ids, pd):
        if len(code) != 4:
            raise InputError(f"crossing {cid}: expected 4 labels, got {len(code)}")
        _, j, _, l = code
        j_incoming = l == j + 1 or j > l + 1
        if j_incoming:
            kinds[cid] = CrossingKind.NEGATIVE
            positions = [0, 1, 2, 3]
        else:
            kinds[cid] = CrossingKind.POSITIVE
            positions = [3, 0, 1, 2]
        for slot, pos in enumerate(positions):
            bucket = heads if slot in IN_SLOTS else tails
            bucket.setdefault(int(code[pos]), []).append((cid, slot))
    labels = set(heads) | set(tails)
    edges = []
    for label in sorted(labels):
        if len(heads.get(label, [])) != 1 or len(tails.get(label, [])) != 1:
            raise InputError(f"edge label {label} does not run from one crossing to another")
        edges.append((tails[label][0], heads[label][0]))
    return Diagram.build(name, kinds, edges)
