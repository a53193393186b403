"""
Finite ternary operations and psybrackets.

A TernaryTensor stores one operation on {1..n}; the entry in matrix a,
row b, column c is <a,b,c>. A PsyBracket pairs a classical operation with
a precrossing operation. Elements are 1-based at the API surface and
0-based inside the numpy tables.
"""

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)


class PsyError(Exception):
    """Base class for every error raised by the toolkit."""

    pass


class InputError(PsyError):
    """Raised when arguments violate an operation's preconditions."""

    pass


class NotInvertibleError(PsyError):
    """Raised when a slot equation has no unique solution."""

    def __init__(self, slot: "Slot", known: Tuple[int, int], target: int, count: int):
        self.slot = slot
        self.known = known
        self.target = target
        self.count = count
        super().__init__(
            f"{slot.value} slot is not invertible at known={known} "
            f"target={target} ({count} solutions)"
        )


class Slot(Enum):
    """Argument position of the unknown in a slot equation."""

    FIRST = "first"
    MIDDLE = "middle"
    LAST = "last"


AXIOM_TAGS = (
    "i.i",
    "i.ii",
    "i.iii",
    "i.iv",
    "i.v",
    "ii",
    "iii.i",
    "iii.ii",
    "iii.iii",
    "iii.iv",
    "iii.v",
    "iii.vi",
)

# Axes of the table that put the unknown last, per slot.
_SLOT_AXES = {
    Slot.LAST: (0, 1, 2),
    Slot.MIDDLE: (0, 2, 1),
    Slot.FIRST: (1, 2, 0),
}


@dataclass(frozen=True, eq=False)
class TernaryTensor:
    """An n x n x n operation table over {1..n}."""

    n: int
    cells: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InputError(f"carrier size must be positive, got {self.n}")
        cells = np.array(self.cells, dtype=np.int64)
        if cells.shape != (self.n, self.n, self.n):
            raise InputError(
                f"expected {self.n}x{self.n}x{self.n} entries, got shape {cells.shape}"
            )
        if cells.min() < 0 or cells.max() >= self.n:
            raise InputError(f"entries must lie in 1..{self.n}")
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    @classmethod
    def from_entries(cls, entries: Sequence) -> "TernaryTensor":
        """Build from nested 1-based entries: entries[a-1][b-1][c-1] = <a,b,c>."""
        array = np.array(entries, dtype=np.int64)
        if array.ndim != 3:
            raise InputError("entries must be a list of square matrices")
        return cls(n=array.shape[0], cells=array - 1)

    @classmethod
    def from_function(cls, n: int, func) -> "TernaryTensor":
        """Build from a 1-based function of three elements."""
        cells = np.empty((n, n, n), dtype=np.int64)
        for a, b, c in itertools.product(range(n), repeat=3):
            cells[a, b, c] = func(a + 1, b + 1, c + 1) - 1
        return cls(n=n, cells=cells)

    def entries(self) -> List[List[List[int]]]:
        """Nested 1-based entries, matrix a row b column c."""
        return (self.cells + 1).tolist()

    def flat(self) -> Tuple[int, ...]:
        """Entries in (a, b, c) lexicographic order, 1-based."""
        return tuple(int(v) + 1 for v in self.cells.ravel())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TernaryTensor):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.cells, other.cells))

    def __hash__(self) -> int:
        return hash((self.n, self.cells.tobytes()))


@dataclass(frozen=True)
class PsyBracket:
    """A classical tensor and a precrossing tensor on the same carrier."""

    tc: TernaryTensor
    tp: TernaryTensor
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.tc.n != self.tp.n:
            raise InputError(
                f"tensor sizes differ: classical n={self.tc.n}, pre n={self.tp.n}"
            )

    @property
    def n(self) -> int:
        return self.tc.n

    def key(self) -> Tuple[int, ...]:
        """Flattened (tc, tp) entries; the lexicographic order used everywhere."""
        return self.tc.flat() + self.tp.flat()


@dataclass
class AxiomReport:
    """Outcome of an exhaustive axiom check."""

    failures: List[Tuple[str, Tuple[int, ...]]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def failed_tags(self) -> List[str]:
        return [tag for tag, _ in self.failures]

    def format(self) -> str:
        if self.passed:
            return "passed: all axioms hold"
        lines = ["failed:"]
        for tag, witness in self.failures:
            lines.append(f"  {tag} witness={','.join(str(w) for w in witness)}")
        return "\n".join(lines)


def _check_element(t: TernaryTensor, *elements: int) -> None:
    for e in elements:
        if not 1 <= e <= t.n:
            raise InputError(f"element {e} out of range 1..{t.n}")


def eval(t: TernaryTensor, a: int, b: int, c: int) -> int:  # noqa: A001
    """Return <a,b,c>."""
    _check_element(t, a, b, c)
    return int(t.cells[a - 1, b - 1, c - 1]) + 1


def solve_c(
    t: TernaryTensor, slot: Slot, known1: int, known2: int, target: int
) -> int:
    """
    Solve for the element filling `slot` so the bracket equals `target`.

    known1 and known2 fill the remaining slots in order, so MIDDLE solves
    <known1, y, known2> = target.
    """
    _check_element(t, known1, known2, target)
    line = t.cells.transpose(_SLOT_AXES[slot])[known1 - 1, known2 - 1]
    hits = np.flatnonzero(line == target - 1)
    if len(hits) != 1:
        raise NotInvertibleError(slot, (known1, known2), target, len(hits))
    return int(hits[0]) + 1


def inverse_table(t: TernaryTensor, slot: Slot) -> np.ndarray:
    """
    0-based table inv[k1, k2, target] = solution for `slot`.

    Raises NotInvertibleError on the first equation without a unique solution.
    """
    n = t.n
    moved = t.cells.transpose(_SLOT_AXES[slot])
    inv = np.full((n, n, n), -1, dtype=np.int64)
    for k1, k2 in itertools.product(range(n), repeat=2):
        line = moved[k1, k2]
        for target in range(n):
            hits = np.flatnonzero(line == target)
            if len(hits) != 1:
                raise NotInvertibleError(slot, (k1 + 1, k2 + 1), target + 1, len(hits))
            inv[k1, k2, target] = hits[0]
    return inv


# Axiom evaluation. Every check works on the full (a,b,c[,d]) grid at once;
# witnesses are the first violating index in row-major order.


def _solution_counts(cells: np.ndarray, axes: Tuple[int, int, int]) -> np.ndarray:
    """counts[k1, k2, target] = number of fillings of the moved slot hitting target."""
    n = cells.shape[0]
    moved = cells.transpose(axes)
    return (moved[..., None] == np.arange(n)).sum(axis=2)


def _fixed_target_counts(p: np.ndarray, slot: Slot) -> np.ndarray:
    """
    For (i.iv)/(i.v): counts[k1, k2] = #solutions with the middle argument as target.

    FIRST: u with <u,b,c>_p = b, indexed [b, c].
    LAST:  v with <a,b,v>_p = b, indexed [a, b].
    """
    hit = p == np.arange(p.shape[0])[None, :, None]
    return hit.sum(axis=0 if slot is Slot.FIRST else 2)


def _quasigroup_failures(t: np.ndarray) -> List[Tuple[str, Tuple[int, ...]]]:
    failures = []
    for tag, slot in (("i.i", Slot.LAST), ("i.ii", Slot.MIDDLE), ("i.iii", Slot.FIRST)):
        counts = _solution_counts(t, _SLOT_AXES[slot])
        bad = np.argwhere(counts != 1)
        if len(bad):
            failures.append((tag, tuple(int(v) + 1 for v in bad[0])))
    return failures


def _direct(table: np.ndarray, i, j, k) -> np.ndarray:
    return table[i, j, k]


def equation_sides(t: np.ndarray, p: np.ndarray, tag: str, take=_direct):
    """
    Both sides of an equational axiom over the full index grid.

    `take(table, i, j, k)` performs the lookups, so callers working on
    partially filled tables can substitute a masked lookup.
    """
    n = t.shape[0]
    if tag == "ii":
        a, b, c = np.indices((n, n, n))
        return (
            take(p, a, take(t, a, b, c), c),
            take(t, a, take(p, a, b, c), c),
        )
    a, b, c, d = np.indices((n, n, n, n))
    if tag in ("iii.i", "iii.ii"):
        e = take(t if tag == "iii.i" else p, b, c, d)
        return (
            take(t, take(t, a, b, c), c, d),
            take(t, take(t, a, b, e), e, d),
        )
    if tag == "iii.iii":
        e = take(t, b, c, d)
        return (
            take(t, take(p, a, b, c), c, d),
            take(p, take(t, a, b, e), e, d),
        )
    if tag in ("iii.iv", "iii.v"):
        f = take(t if tag == "iii.iv" else p, a, b, c)
        return (
            take(t, a, b, take(t, b, c, d)),
            take(t, a, f, take(t, f, c, d)),
        )
    if tag == "iii.vi":
        f = take(t, a, b, c)
        return (
            take(t, a, b, take(p, b, c, d)),
            take(p, a, f, take(t, f, c, d)),
        )
    raise InputError(f"unknown axiom tag {tag}")


def _equation_failures(
    t: np.ndarray, p: np.ndarray, tags: Iterable[str]
) -> List[Tuple[str, Tuple[int, ...]]]:
    failures = []
    for tag in tags:
        lhs, rhs = equation_sides(t, p, tag)
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            failures.append((tag, tuple(int(v) + 1 for v in bad[0])))
    return failures


def _pre_fixed_failures(p: np.ndarray) -> List[Tuple[str, Tuple[int, ...]]]:
    failures = []
    for tag, slot in (("i.iv", Slot.FIRST), ("i.v", Slot.LAST)):
        bad = np.argwhere(_fixed_target_counts(p, slot) != 1)
        if len(bad):
            failures.append((tag, tuple(int(v) + 1 for v in bad[0])))
    return failures


_EQUATION_TAGS = ("ii", "iii.i", "iii.ii", "iii.iii", "iii.iv", "iii.v", "iii.vi")


def check_axioms(tc: TernaryTensor, tp: TernaryTensor) -> AxiomReport:
    """Exhaustively check all twelve psybracket axioms."""
    if tc.n != tp.n:
        raise InputError(f"tensor sizes differ: {tc.n} vs {tp.n}")
    t, p = tc.cells, tp.cells
    failures = _quasigroup_failures(t) + _pre_fixed_failures(p)
    failures += _equation_failures(t, p, _EQUATION_TAGS)
    order = {tag: i for i, tag in enumerate(AXIOM_TAGS)}
    failures.sort(key=lambda item: order[item[0]])
    return AxiomReport(failures=failures)


def satisfies_axioms(tc: TernaryTensor, tp: TernaryTensor) -> bool:
    """Boolean form of check_axioms that stops at the first failing axiom."""
    if tc.n != tp.n:
        raise InputError(f"tensor sizes differ: {tc.n} vs {tp.n}")
    t, p = tc.cells, tp.cells
    if _quasigroup_failures(t) or _pre_fixed_failures(p):
        return False
    for tag in _EQUATION_TAGS:
        if _equation_failures(t, p, (tag,)):
            return False
    return True


def is_ternary_quasigroup(t: TernaryTensor) -> bool:
    """True iff every slot of t is uniquely solvable, (i.i)-(i.iii)."""
    return not _quasigroup_failures(t.cells)


def is_tribracket(tc: TernaryTensor) -> bool:
    """True iff tc alone satisfies (i.i)-(i.iii), (iii.i) and (iii.iv)."""
    t = tc.cells
    if _quasigroup_failures(t):
        return False
    return not _equation_failures(t, t, ("iii.i", "iii.iv"))


def _require_tribracket(tc: TernaryTensor) -> None:
    if not is_tribracket(tc):
        raise InputError("classical tensor is not a vertical tribracket")


def promote_positive(tc: TernaryTensor, name: str = "") -> PsyBracket:
    """Psybracket with <a,b,c>_p = <a,b,c>_c."""
    _require_tribracket(tc)
    return PsyBracket(tc=tc, tp=tc, name=name)


def promote_negative(tc: TernaryTensor, name: str = "") -> PsyBracket:
    """Psybracket with <a,b,c>_p = d where <a,d,c>_c = b."""
    _require_tribracket(tc)
    inv = inverse_table(tc, Slot.MIDDLE)
    a, b, c = np.indices((tc.n,) * 3)
    tp = TernaryTensor(n=tc.n, cells=inv[a, c, b])
    return PsyBracket(tc=tc, tp=tp, name=name)


def _validate_group(table: np.ndarray) -> Tuple[int, np.ndarray]:
    """Return (identity, inverse map) of a 0-based multiplication table."""
    n = table.shape[0]
    if table.shape != (n, n) or table.min() < 0 or table.max() >= n:
        raise InputError("group table must be n x n over 1..n")
    x, y, z = np.indices((n, n, n))
    if not np.array_equal(table[table[x, y], z], table[x, table[y, z]]):
        bad = np.argwhere(table[table[x, y], z] != table[x, table[y, z]])[0]
        raise InputError(
            f"not a group: associativity fails at {tuple(int(v) + 1 for v in bad)}"
        )
    ids = [e for e in range(n) if np.all(table[e] == np.arange(n))
           and np.all(table[:, e] == np.arange(n))]
    if not ids:
        raise InputError("not a group: no identity element")
    identity = ids[0]
    inverse = np.empty(n, dtype=np.int64)
    for g in range(n):
        hits = np.flatnonzero(table[g] == identity)
        if len(hits) != 1 or table[hits[0], g] != identity:
            raise InputError(f"not a group: element {g + 1} has no inverse")
        inverse[g] = hits[0]
    return identity, inverse


def cyclic_group_table(n: int) -> List[List[int]]:
    """Addition table of Z_n in the 1..n encoding (n is the class of zero)."""
    return [[(a + b - 1) % n + 1 for b in range(1, n + 1)] for a in range(1, n + 1)]


def symmetric_group_table(k: int) -> List[List[int]]:
    """Composition table of S_k with permutations numbered in lexicographic order."""
    perms = list(itertools.permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    return [
        [index[tuple(p[q[i]] for i in range(k))] + 1 for q in perms] for p in perms
    ]


def dehn_tribracket(group_table: Sequence[Sequence[int]]) -> TernaryTensor:
    """The Dehn tribracket <a,b,c> = a b^-1 c of a group given by its table."""
    table = np.array(group_table, dtype=np.int64) - 1
    if table.ndim != 2:
        raise InputError("group table must be a square matrix")
    _, inverse = _validate_group(table)
    a, b, c = np.indices((table.shape[0],) * 3)
    return TernaryTensor(n=table.shape[0], cells=table[table[a, inverse[b]], c])


def _as_permutation(sigma: Sequence[int], n: int) -> np.ndarray:
    perm = np.array(sigma, dtype=np.int64) - 1
    if perm.shape != (n,) or sorted(perm.tolist()) != list(range(n)):
        raise InputError(f"{list(sigma)} is not a permutation of 1..{n}")
    return perm


def _relabel(cells: np.ndarray, perm: np.ndarray) -> np.ndarray:
    out = np.empty_like(cells)
    out[np.ix_(perm, perm, perm)] = perm[cells]
    return out


def apply_permutation(x: PsyBracket, sigma: Sequence[int]) -> PsyBracket:
    """Relabel by sigma: t'(sa, sb, sc) = s(t(a, b, c)) for both operations."""
    perm = _as_permutation(sigma, x.n)
    return PsyBracket(
        tc=TernaryTensor(n=x.n, cells=_relabel(x.tc.cells, perm)),
        tp=TernaryTensor(n=x.n, cells=_relabel(x.tp.cells, perm)),
        name=x.name,
    )


def is_isomorphic(x: PsyBracket, y: PsyBracket) -> Optional[Tuple[int, ...]]:
    """A permutation sigma with apply_permutation(x, sigma) == y, or None."""
    if x.n != y.n:
        return None
    for perm in itertools.permutations(range(x.n)):
        p = np.array(perm, dtype=np.int64)
        if np.array_equal(_relabel(x.tc.cells, p), y.tc.cells) and np.array_equal(
            _relabel(x.tp.cells, p), y.tp.cells
        ):
            return tuple(v + 1 for v in perm)
    return None


def canonical_form(x: PsyBracket) -> PsyBracket:
    """The lexicographically least relabeling of x; equal for isomorphic inputs."""
    best = None
    for perm in itertools.permutations(range(x.n)):
        candidate = apply_permutation(x, [v + 1 for v in perm])
        if best is None or candidate.key() < best.key():
            best = candidate
    return best


def is_homomorphism(f: Sequence[int], x: PsyBracket, y: PsyBracket) -> bool:
    """True iff f (f[a-1] = image of a) respects both operations."""
    fmap = np.array(f, dtype=np.int64) - 1
    if fmap.shape != (x.n,) or fmap.min() < 0 or fmap.max() >= y.n:
        raise InputError(f"map must send 1..{x.n} into 1..{y.n}")
    a, b, c = np.indices((x.n,) * 3)
    for src, dst in ((x.tc, y.tc), (x.tp, y.tp)):
        image = dst.cells[fmap[a], fmap[b], fmap[c]]
        if not np.array_equal(image, fmap[src.cells]):
            return False
    return True


def affine_form(t: TernaryTensor) -> Optional[Tuple[int, int, int, int]]:
    """
    Coefficients (alpha, beta, gamma, delta) with <a,b,c> = alpha a + beta b +
    gamma c + delta over Z_n, reading elements as residues; None if not affine.
    """
    n = t.n
    res = (t.cells + 1) % n  # residue of each entry
    # residue r of element index i is (i + 1) % n
    idx = {r: (r - 1) % n for r in range(n)}
    delta = int(res[idx[0], idx[0], idx[0]])
    if n == 1:
        return (0, 0, 0, 0)
    alpha = (int(res[idx[1], idx[0], idx[0]]) - delta) % n
    beta = (int(res[idx[0], idx[1], idx[0]]) - delta) % n
    gamma = (int(res[idx[0], idx[0], idx[1]]) - delta) % n
    a, b, c = (np.indices((n, n, n)) + 1) % n
    expected = (alpha * a + beta * b + gamma * c + delta) % n
    if not np.array_equal(expected, res):
        return None
    return (alpha, beta, gamma, delta)


def tensor_from_affine(n: int, alpha: int, beta: int, gamma: int, delta: int) -> TernaryTensor:
    """Tensor of alpha a + beta b + gamma c + delta over Z_n in the 1..n encoding."""
    return TernaryTensor.from_function(
        n, lambda a, b, c: (alpha * a + beta * b + gamma * c + delta - 1) % n + 1
    )


def cyclic_dehn_psybrackets(n: int) -> Dict[str, PsyBracket]:
    """Positive and negative Dehn psybrackets on Z_n."""
    tc = dehn_tribracket(cyclic_group_table(n))
    return {
        "positive": promote_positive(tc, name=f"dehn{n}+"),
        "negative": promote_negative(tc, name=f"dehn{n}-"),
    }
