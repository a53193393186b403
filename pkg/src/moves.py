"""
Reidemeister and P-moves as local rewrites of the combinatorial map.

Insertions splice a standard tangle into an edge or a face; removals cut
crossings out and reconnect the strands running through them; slides
rebuild a triangle or relabel a bigon. Geometric templates are written in
compass terms: every new crossing gets its four ports as angles, and the
slot frame is recovered from the angles and the strand directions.
"""

import logging
import random
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from algebra import PsyError
from diagram import (CrossingKind, Diagram, Edge, Port, Region, faces,
                     pseudo_writhe, validate)

logger = logging.getLogger(__name__)


class PatternMismatch(PsyError):
    """Raised when a move is applied at a site that does not match its pattern."""

    pass


class EquivalenceMode(Enum):
    PSEUDO = "pseudo"
    SINGULAR = "singular"


class MoveFamily(Enum):
    R1 = "R1"
    R2 = "R2"
    R3 = "R3"
    PI = "PI"
    PII = "PII"
    PIII = "PIII"
    PIII_PRIME = "PIII'"


class Action(Enum):
    INSERT = "insert"
    REMOVE = "remove"
    SLIDE = "slide"


@dataclass(frozen=True)
class Move:
    """
    A move together with its site.

    site is ("edge", tail crossing, tail slot) or ("loop",) for kink
    insertions, ("crossing", id) for kink removals, ("face", region id, ...)
    for everything acting on a face.
    """

    family: MoveFamily
    action: Action
    site: Tuple
    params: Tuple = ()

    def describe(self) -> str:
        site = " ".join(str(s) for s in self.site)
        params = " ".join(str(p) for p in self.params)
        return f"{self.family.value} {self.action.value} @ {site} {params}".strip()


_PSEUDO_MOVES = frozenset(
    [
        (MoveFamily.R1, Action.INSERT),
        (MoveFamily.R1, Action.REMOVE),
        (MoveFamily.R2, Action.INSERT),
        (MoveFamily.R2, Action.REMOVE),
        (MoveFamily.R3, Action.SLIDE),
        (MoveFamily.PI, Action.INSERT),
        (MoveFamily.PI, Action.REMOVE),
        (MoveFamily.PII, Action.SLIDE),
        (MoveFamily.PIII, Action.SLIDE),
        (MoveFamily.PIII_PRIME, Action.SLIDE),
    ]
)


def legal_moves(mode: EquivalenceMode) -> FrozenSet[Tuple[MoveFamily, Action]]:
    """Move families allowed in an equivalence mode; singular mode has no PI."""
    if mode is EquivalenceMode.SINGULAR:
        return frozenset(m for m in _PSEUDO_MOVES if m[0] is not MoveFamily.PI)
    return _PSEUDO_MOVES


# Shared helpers


def _fresh_ids(d: Diagram, count: int) -> List[str]:
    taken = set(d.crossing_ids)
    ids = []
    i = 1
    while len(ids) < count:
        candidate = f"k{i}"
        if candidate not in taken:
            ids.append(candidate)
            taken.add(candidate)
        i += 1
    return ids


def _assign_slots(ports: Dict[int, Tuple[str, bool]]) -> Dict[int, int]:
    """
    Slot of each port angle. `ports` maps angle -> (line, incoming).

    Slot 0 is the incoming port followed counterclockwise by the other
    incoming port; the rest follow counterclockwise.
    """
    angles = sorted(ports)
    start = None
    for i, angle in enumerate(angles):
        following = angles[(i + 1) % 4]
        if ports[angle][1] and ports[following][1]:
            start = i
    if start is None:
        raise PatternMismatch("incoming ports are not adjacent")
    slots = {angles[(start + j) % 4]: j for j in range(4)}
    by_slot = {slot: angle for angle, slot in slots.items()}
    if ports[by_slot[0]][0] != ports[by_slot[2]][0] or ports[by_slot[1]][0] != ports[by_slot[3]][0]:
        raise PatternMismatch("strands do not pass straight through")
    return slots


def _kind_for(over_line: Optional[str], ports, slots) -> CrossingKind:
    if over_line is None:
        return CrossingKind.PRE
    slot0 = next(angle for angle, slot in slots.items() if slot == 0)
    return CrossingKind.POSITIVE if ports[slot0][0] == over_line else CrossingKind.NEGATIVE


def _over_strand(kind: CrossingKind) -> Optional[int]:
    """Strand index (slot mod 2) of the over strand, None for precrossings."""
    if kind is CrossingKind.POSITIVE:
        return 0
    if kind is CrossingKind.NEGATIVE:
        return 1
    return None


def _edge_at(d: Diagram, port: Port) -> Tuple[Edge, bool]:
    """The edge through a port, and whether it leaves through that port."""
    other = d.mate(port)
    if port[1] >= 2:
        return (port, other), True
    return (other, port), False


def _walk_step(d: Diagram, corner) -> Tuple[Edge, bool]:
    """Edge leaving a face corner along the boundary walk, and whether the walk follows it."""
    cid, k = corner
    return _edge_at(d, (cid, (k + 1) % 4))


def _rebuild(d: Diagram, kinds: Dict[str, CrossingKind], edges: Sequence[Edge],
             free_loops: int) -> Diagram:
    result = d.replace(kinds=kinds, edges=edges, free_loops=free_loops)
    report = validate(result)
    if not report.valid:
        raise PatternMismatch("rewrite produced an invalid diagram: " + "; ".join(report.problems))
    return result


def _excise(d: Diagram, removed: Set[str]) -> Diagram:
    """
    Delete crossings and reconnect every strand passing through them.

    Strands that close up inside the removed crossings become free loops.
    """
    edges = []
    visited: Set[Port] = set()
    for tail, head in d.edges:
        if tail[0] in removed:
            continue
        port = head
        while port[0] in removed:
            visited.add(port)
            port = d.mate((port[0], port[1] + 2))
        edges.append((tail, port))
    loops = 0
    for cid in removed:
        for slot in (0, 1):
            port = (cid, slot)
            if port in visited:
                continue
            loops += 1
            while port not in visited:
                visited.add(port)
                port = d.mate((port[0], port[1] + 2))
    kinds = {cid: k for cid, k in d.kinds.items() if cid not in removed}
    return _rebuild(d, kinds, edges, d.free_loops + loops)


def _bigons(d: Diagram) -> List[Region]:
    return [r for r in faces(d) if len(r.corners) == 2 and r.corners[0][0] != r.corners[1][0]]


def _loop_slots(d: Diagram, cid: str) -> bool:
    return d.mate((cid, 2)) == (cid, 1) or d.mate((cid, 3)) == (cid, 0)


# R1 and PI


def _kink_insert(d: Diagram, move: Move) -> Diagram:
    kind = CrossingKind(move.params[0])
    (new,) = _fresh_ids(d, 1)
    kinds = dict(d.kinds)
    kinds[new] = kind
    if move.site == ("loop",):
        if d.crossing_count or not d.free_loops:
            raise PatternMismatch("loop conversion needs a crossingless diagram with a free loop")
        edges = [((new, 2), (new, 1)), ((new, 3), (new, 0))]
        return _rebuild(d, kinds, edges, d.free_loops - 1)
    _, cid, slot = move.site
    tail = (cid, slot)
    if cid not in d.kinds or slot < 2:
        raise PatternMismatch(f"no edge leaves {cid}.{slot}")
    head = d.mate(tail)
    edges = [e for e in d.edges if e[0] != tail]
    if move.params[1] == 0:
        edges += [(tail, (new, 0)), ((new, 2), (new, 1)), ((new, 3), head)]
    else:
        edges += [(tail, (new, 1)), ((new, 3), (new, 0)), ((new, 2), head)]
    return _rebuild(d, kinds, edges, d.free_loops)


def _kink_remove(d: Diagram, move: Move) -> Diagram:
    _, cid = move.site
    if cid not in d.kinds:
        raise PatternMismatch(f"no crossing {cid}")
    wants_pre = move.family is MoveFamily.PI
    if (d.kinds[cid] is CrossingKind.PRE) != wants_pre or not _loop_slots(d, cid):
        expected = "precrossing" if wants_pre else "classical crossing"
        raise PatternMismatch(f"{cid} is not a kink at a {expected}")
    return _excise(d, {cid})


# R2


_N, _E, _S, _W = 90, 0, 270, 180


def _r2_insert(d: Diagram, move: Move) -> Diagram:
    """
    Push the first edge across the second through their common face.

    Picture the second edge horizontal with the face above it and the
    first edge along the top with the face below it. The first edge dips
    down as a finger crossing the second edge at a west point and an east
    point, leaving a bigon below the second edge.
    """
    _, face_id, step1, step2 = move.site
    first_over = move.params[0] == "over"
    corners = faces(d)[face_id].corners
    e1, forward1 = _walk_step(d, corners[step1])
    e2, forward2 = _walk_step(d, corners[step2])
    if e1 == e2:
        raise PatternMismatch("R2 insertion needs two different edges")
    west, east = _fresh_ids(d, 2)
    # The walk keeps the face on its right: the top edge runs east when
    # followed forward, the bottom edge runs west.
    if forward1:
        finger = [(west, _N, _S), (east, _S, _N)]
    else:
        finger = [(east, _N, _S), (west, _S, _N)]
    if forward2:
        across = [(east, _E, _W), (west, _E, _W)]
    else:
        across = [(west, _W, _E), (east, _W, _E)]
    ports: Dict[str, Dict[int, Tuple[str, bool]]] = {west: {}, east: {}}
    for line, path in (("finger", finger), ("across", across)):
        for cid, entry, exit_ in path:
            ports[cid][entry] = (line, True)
            ports[cid][exit_] = (line, False)
    slots = {cid: _assign_slots(ports[cid]) for cid in (west, east)}
    over_line = "finger" if first_over else "across"
    kinds = dict(d.kinds)
    for cid in (west, east):
        kinds[cid] = _kind_for(over_line, ports[cid], slots[cid])
    edges = [e for e in d.edges if e not in (e1, e2)]
    for (tail, head), path in ((e1, finger), (e2, across)):
        current = tail
        for cid, entry, exit_ in path:
            edges.append((current, (cid, slots[cid][entry])))
            current = (cid, slots[cid][exit_])
        edges.append((current, head))
    return _rebuild(d, kinds, edges, d.free_loops)


def _r2_removable(d: Diagram, region: Region) -> bool:
    (a, i), (b, j) = region.corners
    over_a, over_b = _over_strand(d.kinds[a]), _over_strand(d.kinds[b])
    if over_a is None or over_b is None:
        return False
    # The bigon side from a's port i+1 to b's port j is one strand.
    return (over_a == (i + 1) % 2) == (over_b == j % 2)


def _r2_remove(d: Diagram, move: Move) -> Diagram:
    _, face_id = move.site
    region = faces(d)[face_id]
    if region not in _bigons(d) or not _r2_removable(d, region):
        raise PatternMismatch(f"face {face_id} is not a bigon with one strand over at both crossings")
    return _excise(d, {region.corners[0][0], region.corners[1][0]})


# PII


def _pii_slide(d: Diagram, move: Move) -> Diagram:
    """Swap the classical crossing and the precrossing of a bigon."""
    _, face_id = move.site
    region = faces(d)[face_id]
    if region not in _bigons(d):
        raise PatternMismatch(f"face {face_id} is not a bigon")
    a, b = region.corners[0][0], region.corners[1][0]
    kinds = dict(d.kinds)
    if (kinds[a] is CrossingKind.PRE) == (kinds[b] is CrossingKind.PRE):
        raise PatternMismatch(f"bigon {face_id} needs exactly one precrossing")
    kinds[a], kinds[b] = kinds[b], kinds[a]
    return _rebuild(d, kinds, d.edges, d.free_loops)


# R3, PIII and PIII'
#
# The triangle face has corners z, y, x in walk order. Before the move z
# sits at the origin, x at (1, 1) and y at (-1, 1); line s runs through x
# and y, line u through z and x, line v through z and y. The move pushes
# s below z, to x' = (-1, -1) and y' = (1, -1).

_BEFORE_ANGLES = {
    "z": (45, 135, 225, 315),
    "y": (315, 0, 135, 180),
    "x": (180, 225, 0, 45),
}
_LINES = {
    "z": {45: "u", 225: "u", 135: "v", 315: "v"},
    "y": {315: "v", 135: "v", 0: "s", 180: "s"},
    "x": {180: "s", 0: "s", 225: "u", 45: "u"},
}
_AFTER_LINES = {
    "z": {45: "u", 225: "u", 135: "v", 315: "v"},
    "x": {225: "u", 45: "u", 180: "s", 0: "s"},
    "y": {315: "v", 135: "v", 0: "s", 180: "s"},
}
# Outer ports move with their strand ends.
_STUB_MAP = {
    ("x", 45): ("z", 45),
    ("z", 225): ("x", 225),
    ("y", 135): ("z", 135),
    ("z", 315): ("y", 315),
    ("y", 180): ("x", 180),
    ("x", 0): ("y", 0),
}
_INNER_BEFORE = {("z", 45), ("z", 135), ("x", 180), ("x", 225), ("y", 315), ("y", 0)}
_INNER_AFTER = [(("z", 225), ("x", 45)), (("z", 315), ("y", 135)), (("x", 0), ("y", 180))]


@dataclass
class _Triangle:
    ids: Dict[str, str]
    angle_of: Dict[str, Dict[int, int]]
    over: Dict[str, Optional[str]]

    def family(self) -> Optional[MoveFamily]:
        pre = [role for role, line in self.over.items() if line is None]
        if not pre:
            # Legal iff some line is over at both crossings it passes.
            return MoveFamily.R3 if 2 in Counter(self.over.values()).values() else None
        if len(pre) > 1:
            return None
        # The third line is the one missing from the precrossing.
        third = ({"x": "v", "y": "u", "z": "s"})[pre[0]]
        others = [role for role in "xyz" if role != pre[0]]
        if all(self.over[r] == third for r in others):
            return MoveFamily.PIII
        if all(self.over[r] != third for r in others):
            return MoveFamily.PIII_PRIME
        return None


def _triangle(d: Diagram, region: Region, rotation: int) -> Optional[_Triangle]:
    corners = list(region.corners)
    if len(corners) != 3 or len({c[0] for c in corners}) != 3:
        return None
    corners = corners[rotation:] + corners[:rotation]
    ids = {}
    angle_of = {}
    over = {}
    for role, (cid, k) in zip("zyx", corners):
        ids[role] = cid
        angle_of[role] = {(k + j) % 4: _BEFORE_ANGLES[role][j] for j in range(4)}
        strand = _over_strand(d.kinds[cid])
        over[role] = None if strand is None else _LINES[role][angle_of[role][strand]]
    slot_of = {role: {a: s for s, a in angle_of[role].items()} for role in ids}
    for (r1, a1), (r2, a2) in (
        (("z", 45), ("x", 225)),
        (("z", 135), ("y", 315)),
        (("y", 0), ("x", 180)),
    ):
        if d.mate((ids[r1], slot_of[r1][a1])) != (ids[r2], slot_of[r2][a2]):
            return None
    return _Triangle(ids=ids, angle_of=angle_of, over=over)


def _triangle_slide(d: Diagram, move: Move) -> Diagram:
    _, face_id, rotation = move.site
    tri = _triangle(d, faces(d)[face_id], rotation)
    if tri is None or tri.family() is not move.family:
        raise PatternMismatch(f"face {face_id} rotation {rotation} is not a {move.family.value} site")
    role_of = {cid: role for role, cid in tri.ids.items()}
    incoming: Dict[str, Dict[int, bool]] = {role: {} for role in "xyz"}
    for (role, angle), (new_role, new_angle) in _STUB_MAP.items():
        slot = next(s for s, a in tri.angle_of[role].items() if a == angle)
        incoming[new_role][new_angle] = slot < 2
    for role in "xyz":
        for angle, flag in list(incoming[role].items()):
            incoming[role][(angle + 180) % 360] = not flag
    ports = {role: {a: (_AFTER_LINES[role][a], incoming[role][a]) for a in incoming[role]}
             for role in "xyz"}
    slots = {role: _assign_slots(ports[role]) for role in "xyz"}
    kinds = dict(d.kinds)
    for role in "xyz":
        kinds[tri.ids[role]] = _kind_for(tri.over[role], ports[role], slots[role])

    def new_port(port: Port) -> Port:
        role = role_of[port[0]]
        new_role, new_angle = _STUB_MAP[(role, tri.angle_of[role][port[1]])]
        return tri.ids[new_role], slots[new_role][new_angle]

    edges = []
    for tail, head in d.edges:
        ends = []
        inner = False
        for port in (tail, head):
            role = role_of.get(port[0])
            if role is None:
                ends.append(port)
            elif (role, tri.angle_of[role][port[1]]) in _INNER_BEFORE:
                inner = True
            else:
                ends.append(new_port(port))
        if not inner:
            edges.append((ends[0], ends[1]))
    for (r1, a1), (r2, a2) in _INNER_AFTER:
        p1 = (tri.ids[r1], slots[r1][a1])
        p2 = (tri.ids[r2], slots[r2][a2])
        if incoming[r1][a1] == incoming[r2][a2]:
            raise PatternMismatch("inconsistent strand orientation in triangle")
        edges.append((p2, p1) if incoming[r1][a1] else (p1, p2))
    return _rebuild(d, kinds, edges, d.free_loops)


# Dispatch and enumeration


def apply(d: Diagram, move: Move) -> Diagram:
    """
    Apply a move at its site.

    Raises:
        PatternMismatch: if the site does not carry the move's pattern
    """
    key = (move.family, move.action)
    if key in ((MoveFamily.R1, Action.INSERT), (MoveFamily.PI, Action.INSERT)):
        kind = CrossingKind(move.params[0])
        if (kind is CrossingKind.PRE) != (move.family is MoveFamily.PI):
            raise PatternMismatch(f"{move.family.value} cannot insert a {kind.value} kink")
        return _kink_insert(d, move)
    if key in ((MoveFamily.R1, Action.REMOVE), (MoveFamily.PI, Action.REMOVE)):
        return _kink_remove(d, move)
    if key == (MoveFamily.R2, Action.INSERT):
        return _r2_insert(d, move)
    if key == (MoveFamily.R2, Action.REMOVE):
        return _r2_remove(d, move)
    if key == (MoveFamily.PII, Action.SLIDE):
        return _pii_slide(d, move)
    if move.action is Action.SLIDE and move.family in (
        MoveFamily.R3, MoveFamily.PIII, MoveFamily.PIII_PRIME
    ):
        return _triangle_slide(d, move)
    raise PatternMismatch(f"unsupported move {move.describe()}")


def _kink_inserts(d: Diagram, mode: EquivalenceMode) -> List[Move]:
    kinds = ["+", "-"]
    if mode is EquivalenceMode.PSEUDO:
        kinds.append("#")
    moves = []
    for kind in kinds:
        family = MoveFamily.PI if kind == "#" else MoveFamily.R1
        if d.crossing_count == 0:
            if d.free_loops:
                moves.append(Move(family, Action.INSERT, ("loop",), (kind,)))
            continue
        for tail, _ in d.edges:
            for side in (0, 1):
                moves.append(Move(family, Action.INSERT, ("edge", tail[0], tail[1]), (kind, side)))
    return moves


def _try(d: Diagram, move: Move) -> bool:
    try:
        apply(d, move)
    except PatternMismatch:
        return False
    return True


def applicable_sites(d: Diagram, mode: EquivalenceMode = EquivalenceMode.PSEUDO) -> List[Move]:
    """Every legal move of the mode that applies somewhere in d."""
    allowed = legal_moves(mode)
    moves = _kink_inserts(d, mode)
    for cid in d.crossing_ids:
        if _loop_slots(d, cid):
            family = MoveFamily.PI if d.kinds[cid] is CrossingKind.PRE else MoveFamily.R1
            moves.append(Move(family, Action.REMOVE, ("crossing", cid)))
    regions = faces(d) if d.crossing_count else []
    for region in regions:
        steps = range(len(region.corners))
        for s1 in steps:
            for s2 in steps:
                if s1 == s2:
                    continue
                if _walk_step(d, region.corners[s1])[0] == _walk_step(d, region.corners[s2])[0]:
                    continue
                for over in ("over", "under"):
                    moves.append(Move(MoveFamily.R2, Action.INSERT, ("face", region.id, s1, s2), (over,)))
    for region in _bigons(d) if regions else []:
        a, b = region.corners[0][0], region.corners[1][0]
        pre_count = [d.kinds[a], d.kinds[b]].count(CrossingKind.PRE)
        if pre_count == 0 and _r2_removable(d, region):
            candidate = Move(MoveFamily.R2, Action.REMOVE, ("face", region.id))
            if _try(d, candidate):
                moves.append(candidate)
        elif pre_count == 1:
            moves.append(Move(MoveFamily.PII, Action.SLIDE, ("face", region.id)))
    for region in regions:
        for rotation in range(3):
            tri = _triangle(d, region, rotation)
            family = tri.family() if tri else None
            if family is not None:
                moves.append(Move(family, Action.SLIDE, ("face", region.id, rotation)))
    return [m for m in moves if (m.family, m.action) in allowed]


def random_move_sequence(
    d: Diagram,
    mode: EquivalenceMode = EquivalenceMode.PSEUDO,
    length: int = 8,
    seed: int = 0,
) -> Diagram:
    """
    Apply `length` random legal moves. Each step picks a move family
    uniformly among those with sites, then one of its sites uniformly.
    """
    rng = random.Random(seed)
    current = d
    for step in range(length):
        sites = applicable_sites(current, mode)
        if not sites:
            logger.debug(f"seed {seed} step {step}: no applicable move")
            continue
        families = sorted({(m.family.value, m.action.value) for m in sites})
        family = rng.choice(families)
        choices = [m for m in sites if (m.family.value, m.action.value) == family]
        move = rng.choice(choices)
        logger.debug(f"seed {seed} step {step}: {move.describe()}")
        current = apply(current, move)
    return current.replace(name=d.name)


def isomorphic(d1: Diagram, d2: Diagram) -> bool:
    """True iff the diagrams agree as labeled maps up to renaming crossings."""
    if d1.crossing_count != d2.crossing_count or d1.free_loops != d2.free_loops:
        return False
    if pseudo_writhe(d1) != pseudo_writhe(d2):
        return False
    if d1.crossing_count == 0:
        return True
    start = d1.crossing_ids[0]
    for target in d2.crossing_ids:
        mapping = {start: target}
        stack = [start]
        ok = True
        while stack and ok:
            cid = stack.pop()
            if d1.kinds[cid] is not d2.kinds[mapping[cid]]:
                ok = False
                break
            for slot in range(4):
                near, near_slot = d1.mate((cid, slot))
                far, far_slot = d2.mate((mapping[cid], slot))
                if near_slot != far_slot:
                    ok = False
                    break
                if near in mapping:
                    if mapping[near] != far:
                        ok = False
                        break
                else:
                    mapping[near] = far
                    stack.append(near)
        if ok and len(set(mapping.values())) == len(mapping) == d1.crossing_count:
            return True
    return False
