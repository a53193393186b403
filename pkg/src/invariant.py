"""
Psybracket colorings, the counting invariant and weighted resolution sets.

A coloring assigns an element to every region. Around a crossing with
regions L, B, R, T (see diagram) the rules are

    Positive:  T = <L,B,R>_c
    Negative:  B = <L,T,R>_c
    Pre:       T = <L,B,R>_p
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import ZZ, Matrix
from sympy.matrices.normalforms import invariant_factors

from algebra import (InputError, NotInvertibleError, PsyBracket, Slot,
                     TernaryTensor, affine_form, inverse_table, is_tribracket)
from diagram import (CrossingKind, Diagram, all_resolutions, crossing_roles,
                     faces, require_valid, resolve, strand_components)
from enumeration import SearchBoundError
from worker_pool import run_batch

logger = logging.getLogger(__name__)

DEFAULT_MAX_PRECROSSINGS = 20

Coloring = Tuple[int, ...]

# Role positions inside a (L, B, R, T) tuple.
L_, B_, R_, T_ = 0, 1, 2, 3


def _rule(kind: CrossingKind) -> Tuple[Tuple[int, int, int], int]:
    """Argument roles and result role of a crossing's coloring rule."""
    if kind is CrossingKind.NEGATIVE:
        return (L_, T_, R_), B_
    return (L_, B_, R_), T_


def crossing_constraint(
    kind: CrossingKind, x: PsyBracket, L: int, B: int, R: int, T: int
) -> bool:
    """True iff the four region colors satisfy the rule for this crossing kind."""
    roles = (L, B, R, T)
    for e in roles:
        if not 1 <= e <= x.n:
            raise InputError(f"element {e} out of range 1..{x.n}")
    table = x.tp if kind is CrossingKind.PRE else x.tc
    args, result = _rule(kind)
    a, b, c = (roles[i] - 1 for i in args)
    return int(table.cells[a, b, c]) + 1 == roles[result]


@dataclass
class _Step:
    region: int
    # (crossing index, role) when the region is forced by a crossing
    via: Optional[Tuple[int, int]]
    checks: List[int] = field(default_factory=list)


class ColoringProblem:
    """
    A diagram and a psybracket compiled into a static search plan.

    Regions are placed in a fixed order. A region is derived from a crossing
    whose other three regions are already placed whenever that rule can be
    solved for it: any role of a classical crossing, but only T of a
    precrossing. Other regions are branched on. Each crossing is checked
    once all of its regions are placed.
    """

    def __init__(self, d: Diagram, x: PsyBracket):
        require_valid(d)
        self.diagram = d
        self.x = x
        self.n = x.n
        self.region_count = len(faces(d))
        roles = crossing_roles(d)
        self.crossings = [(d.kinds[cid], roles[cid]) for cid in d.crossing_ids]
        self.tc = x.tc.cells.tolist()
        self.tp = x.tp.cells.tolist()
        try:
            self.inverses = {
                slot: inverse_table(x.tc, slot).tolist()
                for slot in (Slot.FIRST, Slot.MIDDLE, Slot.LAST)
            }
        except NotInvertibleError:
            self.inverses = None
        self.plan = self._make_plan()

    def _solvable_roles(self, kind: CrossingKind) -> Tuple[int, ...]:
        if kind is CrossingKind.PRE or self.inverses is None:
            return (_rule(kind)[1],)
        return (L_, B_, R_, T_)

    def _make_plan(self) -> List[_Step]:
        placed: set = set()
        plan: List[_Step] = []
        while len(placed) < self.region_count:
            step = None
            for index, (kind, roles) in enumerate(self.crossings):
                missing = [r for r in set(roles) if r not in placed]
                if len(missing) != 1 or roles.count(missing[0]) != 1:
                    continue
                role = roles.index(missing[0])
                if role in self._solvable_roles(kind):
                    step = _Step(region=missing[0], via=(index, role))
                    break
            if step is None:
                free = min(r for r in range(self.region_count) if r not in placed)
                step = _Step(region=free, via=None)
            placed.add(step.region)
            plan.append(step)
        done: set = set()
        placed = set()
        for step in plan:
            placed.add(step.region)
            for index, (_, roles) in enumerate(self.crossings):
                if index not in done and all(r in placed for r in roles):
                    done.add(index)
                    step.checks.append(index)
        return plan

    def _derive(self, index: int, role: int, colors: List[int]) -> int:
        kind, roles = self.crossings[index]
        table = self.tp if kind is CrossingKind.PRE else self.tc
        args, result = _rule(kind)
        v = [colors[roles[i]] for i in range(4)]
        if role == result:
            return table[v[args[0]]][v[args[1]]][v[args[2]]]
        position = args.index(role)
        known = [v[a] for i, a in enumerate(args) if i != position]
        slot = (Slot.FIRST, Slot.MIDDLE, Slot.LAST)[position]
        return self.inverses[slot][known[0]][known[1]][v[result]]

    def _holds(self, index: int, colors: List[int]) -> bool:
        kind, roles = self.crossings[index]
        table = self.tp if kind is CrossingKind.PRE else self.tc
        args, result = _rule(kind)
        a, b, c = (colors[roles[i]] for i in args)
        return table[a][b][c] == colors[roles[result]]

    def _walk(self, depth: int, colors: List[int], sink) -> int:
        if depth == len(self.plan):
            if sink is not None:
                sink.append(tuple(c + 1 for c in colors))
            return 1
        step = self.plan[depth]
        if step.via is None:
            candidates = range(self.n)
        else:
            candidates = (self._derive(step.via[0], step.via[1], colors),)
        total = 0
        for value in candidates:
            colors[step.region] = value
            if all(self._holds(i, colors) for i in step.checks):
                total += self._walk(depth + 1, colors, sink)
        colors[step.region] = -1
        return total

    def count(self) -> int:
        return self._walk(0, [-1] * self.region_count, None)

    def colorings(self) -> List[Coloring]:
        sink: List[Coloring] = []
        self._walk(0, [-1] * self.region_count, sink)
        return sorted(sink)


def count_colorings(d: Diagram, x: PsyBracket) -> int:
    """The counting invariant: number of X-colorings of d."""
    return ColoringProblem(d, x).count()


def enumerate_colorings(d: Diagram, x: PsyBracket) -> List[Coloring]:
    """Every coloring as a tuple of elements indexed by region id, sorted."""
    return ColoringProblem(d, x).colorings()


def brute_force_count(d: Diagram, x: PsyBracket) -> int:
    """Oracle: filter all n^F region assignments through the crossing rules."""
    require_valid(d)
    region_count = len(faces(d))
    roles = crossing_roles(d)
    rules = [(d.kinds[cid], roles[cid]) for cid in d.crossing_ids]
    count = 0
    for colors in itertools.product(range(1, x.n + 1), repeat=region_count):
        if all(
            crossing_constraint(kind, x, *(colors[r] for r in regions))
            for kind, regions in rules
        ):
            count += 1
    return count


def _kernel_size(rows: List[List[int]], columns: int, n: int) -> int:
    """Solutions of the homogeneous system rows . x = 0 over Z_n."""
    factors = invariant_factors(Matrix(rows), domain=ZZ)
    size = n ** (columns - len(factors))
    for d in factors:
        size *= math.gcd(int(d), n)
    return size


def linear_count(d: Diagram, x: PsyBracket) -> int:
    """
    Oracle for affine psybrackets on Z_n: the crossing rules form a linear
    system A.x = b over Z_n, counted from the invariant factors of A.

    The homogeneous system has prod gcd(d_i, n) * n^(F - r) solutions. The
    inhomogeneous one has as many or none; it is solvable iff the kernel of
    [A | -b] is n times larger, i.e. every multiple of b is reachable.
    """
    n = x.n
    forms = {"c": affine_form(x.tc), "p": affine_form(x.tp)}
    if forms["c"] is None or forms["p"] is None:
        raise InputError("linear oracle needs affine operations")
    require_valid(d)
    region_count = len(faces(d))
    roles = crossing_roles(d)
    rows = []
    for cid in d.crossing_ids:
        kind = d.kinds[cid]
        alpha, beta, gamma, delta = forms["p" if kind is CrossingKind.PRE else "c"]
        args, result = _rule(kind)
        regions = roles[cid]
        row = [0] * (region_count + 1)
        row[regions[result]] += 1
        for coefficient, role in zip((alpha, beta, gamma), args):
            row[regions[role]] -= coefficient
        row[-1] = -delta
        rows.append([v % n for v in row])
    if not rows:
        return n ** region_count
    homogeneous = _kernel_size([row[:-1] for row in rows], region_count, n)
    augmented = _kernel_size(rows, region_count + 1, n)
    return homogeneous if augmented == n * homogeneous else 0


# Classical diagram invariants used for grouping resolutions.


def writhe(d: Diagram) -> int:
    """Signed sum of classical crossings."""
    return sum(kind.sign for kind in d.kinds.values())


def linking_numbers(d: Diagram) -> Dict[Tuple[int, int], int]:
    """
    Linking number of every pair of components (i < j), precrossings ignored.

    Components are numbered as diagram.components lists them, followed by
    the free loops.
    """
    component_of = strand_components(d)
    count = len(set(component_of.values())) + d.free_loops
    twice: Dict[Tuple[int, int], int] = {
        pair: 0 for pair in itertools.combinations(range(count), 2)
    }
    for cid, kind in d.kinds.items():
        first, second = component_of[(cid, 0)], component_of[(cid, 1)]
        if first != second and kind.is_classical:
            twice[(min(first, second), max(first, second))] += kind.sign
    return {pair: total // 2 for pair, total in twice.items()}


@dataclass(frozen=True, order=True)
class Fingerprint:
    """Counting invariants over a tribracket battery plus sorted linking numbers."""

    phi: Tuple[int, ...]
    linking: Tuple[int, ...]


@dataclass
class WeresetGroup:
    weight: Fraction
    fingerprint: Fingerprint
    sample: Dict[str, CrossingKind]
    size: int

    def format(self) -> str:
        phi = ",".join(str(v) for v in self.fingerprint.phi)
        lk = ",".join(str(v) for v in self.fingerprint.linking)
        return (f"weight={self.weight.numerator}/{self.weight.denominator} "
                f"phi=[{phi}] lk=[{lk}]")


@dataclass
class Wereset:
    """Resolutions grouped by fingerprint, heaviest groups first."""

    precrossings: int
    groups: List[WeresetGroup] = field(default_factory=list)

    def weights(self) -> List[Fraction]:
        return [g.weight for g in self.groups]

    def format(self) -> str:
        return "\n".join(g.format() for g in self.groups)


def fingerprint(d: Diagram, battery: Sequence[TernaryTensor]) -> Fingerprint:
    """Fingerprint of a classical diagram."""
    if d.precrossings():
        raise InputError(f"{d.name} still has precrossings")
    phi = tuple(count_colorings(d, PsyBracket(tc=t, tp=t)) for t in battery)
    linking = tuple(sorted(linking_numbers(d).values()))
    return Fingerprint(phi=phi, linking=linking)


def wereset(
    d: Diagram,
    battery: Sequence[TernaryTensor],
    max_precrossings: int = DEFAULT_MAX_PRECROSSINGS,
    jobs: int = 1,
) -> Wereset:
    """
    Weighted resolution set: each of the 2^k resolutions has weight 2^-k,
    and resolutions with equal fingerprints are merged.
    """
    require_valid(d)
    for t in battery:
        if not is_tribracket(t):
            raise InputError("every battery tensor must be a vertical tribracket")
    k = len(d.precrossings())
    if k > max_precrossings:
        raise SearchBoundError(
            f"{d.name} has {k} precrossings; the bound is {max_precrossings}"
        )
    resolutions = all_resolutions(d)
    logger.info(f"Computing wereset of {d.name}: {len(resolutions)} resolutions")
    prints = run_batch(
        lambda r: fingerprint(resolve(d, r), battery), resolutions, jobs=jobs,
        name="Wereset",
    )
    grouped: Dict[Fingerprint, List[Dict[str, CrossingKind]]] = {}
    for r, fp in zip(resolutions, prints):
        grouped.setdefault(fp, []).append(r)
    total = 2 ** k
    groups = [
        WeresetGroup(weight=Fraction(len(members), total), fingerprint=fp,
                     sample=members[0], size=len(members))
        for fp, members in grouped.items()
    ]
    groups.sort(key=lambda g: (-g.weight, g.fingerprint))
    return Wereset(precrossings=k, groups=groups)
