"""
Exhaustive search for tribrackets and psybrackets on small carriers.

Classical tensors are built cell by cell as Latin cubes, pruned with a
masked evaluation of (iii.i)/(iii.iv) on the partially filled table.
Precrossing tensors are then found per classical tensor by a propagation
search: the equational axioms are used as forcing rules, so one choice
usually fixes many cells at once.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from algebra import (PsyBracket, PsyError, Slot, TernaryTensor, canonical_form,
                     equation_sides, inverse_table, is_ternary_quasigroup,
                     is_tribracket, satisfies_axioms)
from worker_pool import run_batch

logger = logging.getLogger(__name__)

DEFAULT_MAX_CARRIER = 4
BRUTE_FORCE_MAX_CARRIER = 2


class SearchBoundError(PsyError):
    """Raised when a search would exceed its configured size bound."""

    pass


@dataclass
class EnumerationResult:
    """Psybrackets found on one carrier, grouped into isomorphism classes."""

    n: int
    total: int
    representatives: List[PsyBracket] = field(default_factory=list)
    class_sizes: List[int] = field(default_factory=list)
    structures: List[PsyBracket] = field(default_factory=list, repr=False)

    @property
    def classes(self) -> int:
        return len(self.representatives)

    def summary(self) -> str:
        return f"classes={self.classes} total={self.total}"


def check_bound(n: int, max_carrier: int) -> None:
    if n < 1:
        raise SearchBoundError(f"carrier size must be positive, got {n}")
    if n > max_carrier:
        raise SearchBoundError(
            f"refusing to search carriers of size {n} (bound is {max_carrier}); "
            "raise the bound explicitly to run a research-scale search"
        )


# Classical search


def _masked_take(table: np.ndarray, i, j, k) -> np.ndarray:
    """Lookup that yields -1 wherever an index or the looked-up cell is unknown."""
    i, j, k = np.broadcast_arrays(i, j, k)
    known = (i >= 0) & (j >= 0) & (k >= 0)
    values = table[np.where(known, i, 0), np.where(known, j, 0), np.where(known, k, 0)]
    return np.where(known, values, -1)


def _has_conflict(t: np.ndarray, p: np.ndarray, tags: Sequence[str]) -> bool:
    for tag in tags:
        lhs, rhs = equation_sides(t, p, tag, take=_masked_take)
        if np.any((lhs >= 0) & (rhs >= 0) & (lhs != rhs)):
            return True
    return False


_TRIBRACKET_TAGS = ("iii.i", "iii.iv")


def _latin_candidates(t: np.ndarray, a: int, b: int, c: int) -> List[int]:
    used = set(t[a, b, :].tolist()) | set(t[a, :, c].tolist()) | set(t[:, b, c].tolist())
    return [v for v in range(t.shape[0]) if v not in used]


def _fill_classical(t: np.ndarray, cells: List[Tuple[int, int, int]], pos: int,
                    out: List[np.ndarray]) -> None:
    if pos == len(cells):
        out.append(t.copy())
        return
    a, b, c = cells[pos]
    for v in _latin_candidates(t, a, b, c):
        t[a, b, c] = v
        if not _has_conflict(t, t, _TRIBRACKET_TAGS):
            _fill_classical(t, cells, pos + 1, out)
        t[a, b, c] = -1


def _complete_layer_seed(seed: np.ndarray) -> List[np.ndarray]:
    n = seed.shape[0]
    cells = [cell for cell in itertools.product(range(n), repeat=3) if cell[0] > 0]
    out: List[np.ndarray] = []
    _fill_classical(seed.copy(), cells, 0, out)
    return out


def enumerate_tribrackets(
    n: int, max_carrier: int = DEFAULT_MAX_CARRIER, jobs: int = 1
) -> List[TernaryTensor]:
    """
    All vertical tribrackets on {1..n}, sorted by flattened entries.

    The first matrix is enumerated up front and its completions are
    distributed over `jobs` workers.
    """
    check_bound(n, max_carrier)
    empty = np.full((n, n, n), -1, dtype=np.int64)
    first_layer = [(0, b, c) for b in range(n) for c in range(n)]
    seeds: List[np.ndarray] = []
    _fill_classical(empty, first_layer, 0, seeds)
    logger.info(f"n={n}: {len(seeds)} admissible first matrices")

    completed = run_batch(_complete_layer_seed, seeds, jobs=jobs, name="TribracketSearch")
    tensors = [TernaryTensor(n=n, cells=cells) for batch in completed for cells in batch]
    # Masked pruning is only partial; the exhaustive check has the last word.
    tensors = [t for t in tensors if is_tribracket(t)]
    tensors.sort(key=lambda t: t.flat())
    logger.info(f"n={n}: found {len(tensors)} tribrackets")
    return tensors


# Precrossing search


class PreTensorSearch:
    """
    Finds every precrossing tensor compatible with a fixed tribracket.

    Axioms (iii.ii) and (iii.v) only ask which values a single cell may take,
    so they become static domains. Axioms (ii), (iii.iii) and (iii.vi) each
    determine one cell from another and drive propagation in both
    directions. (i.iv)/(i.v) are checked on partial tables.
    """

    def __init__(self, tc: TernaryTensor):
        self.tc = tc
        self.n = tc.n
        self.t = tc.cells.tolist()
        self.inv_first = inverse_table(tc, Slot.FIRST).tolist()
        self.inv_mid = inverse_table(tc, Slot.MIDDLE).tolist()
        self.inv_last = inverse_table(tc, Slot.LAST).tolist()
        self.domains = self._static_domains()

    def _index(self, a: int, b: int, c: int) -> int:
        return (a * self.n + b) * self.n + c

    def _static_domains(self) -> List[List[int]]:
        t, n = self.t, self.n
        domains = []
        for a, b, c in itertools.product(range(n), repeat=3):
            allowed = []
            for v in range(n):
                # (iii.ii) with this cell as <b,c,d>_p
                if any(t[t[x][a][b]][b][c] != t[t[x][a][v]][v][c] for x in range(n)):
                    continue
                # (iii.v) with this cell as <a,b,c>_p
                if any(t[a][b][t[b][c][d]] != t[a][v][t[v][c][d]] for d in range(n)):
                    continue
                allowed.append(v)
            domains.append(allowed)
        return domains

    def _implications(self, a: int, b: int, c: int, v: int):
        t, n = self.t, self.n
        inv_first, inv_mid, inv_last = self.inv_first, self.inv_mid, self.inv_last
        # (ii), read both ways
        yield (a, t[a][b][c], c), t[a][v][c]
        yield (a, inv_mid[a][c][b], c), inv_mid[a][c][v]
        for k in range(n):
            # (iii.iii): this cell as <a,b,c>_p, k = d
            e = t[b][c][k]
            yield (t[a][b][e], e, k), t[v][c][k]
            # (iii.iii): this cell as <T(a',b',e), e, d>_p, k = b'
            gamma = inv_mid[k][c][b]
            alpha = inv_first[k][b][a]
            yield (alpha, k, gamma), inv_first[gamma][c][v]
            # (iii.vi): this cell as <b',c',d'>_p, k = a'
            f = t[k][a][b]
            yield (k, f, t[f][b][c]), t[k][a][v]
            # (iii.vi): this cell as <a', f, g>_p, k = c'
            beta = inv_mid[a][k][b]
            delta = inv_last[b][k][c]
            yield (beta, k, delta), inv_last[a][beta][v]

    def _propagate(self, p: List[int], start: List[Tuple[Tuple[int, int, int], int]]) -> bool:
        queue = list(start)
        while queue:
            cell, value = queue.pop()
            idx = self._index(*cell)
            if p[idx] >= 0:
                if p[idx] != value:
                    return False
                continue
            if value not in self.domains[idx]:
                return False
            p[idx] = value
            queue.extend(self._implications(cell[0], cell[1], cell[2], value))
        return self._fixed_target_ok(p)

    def _fixed_target_ok(self, p: List[int]) -> bool:
        n = self.n
        for x, y in itertools.product(range(n), repeat=2):
            # (i.iv): u with <u,x,y>_p = x; (i.v): v with <x,y,v>_p = y
            first = [p[self._index(u, x, y)] for u in range(n)]
            last = [p[self._index(x, y, v)] for v in range(n)]
            for column, target in ((first, x), (last, y)):
                hits = column.count(target)
                if hits > 1 or (hits == 0 and -1 not in column):
                    return False
        return True

    def _search(self, p: List[int], out: List[List[int]]) -> None:
        try:
            idx = p.index(-1)
        except ValueError:
            out.append(list(p))
            return
        n = self.n
        cell = (idx // (n * n), (idx // n) % n, idx % n)
        for value in self.domains[idx]:
            trial = list(p)
            if self._propagate(trial, [(cell, value)]):
                self._search(trial, out)

    def solutions(self) -> List[TernaryTensor]:
        """All compatible precrossing tensors, sorted by flattened entries."""
        out: List[List[int]] = []
        self._search([-1] * self.n ** 3, out)
        tensors = []
        for flat in out:
            tp = TernaryTensor(n=self.n, cells=np.array(flat).reshape((self.n,) * 3))
            if satisfies_axioms(self.tc, tp):
                tensors.append(tp)
        tensors.sort(key=lambda t: t.flat())
        return tensors


def compatible_pre_tensors(tc: TernaryTensor) -> List[TernaryTensor]:
    return PreTensorSearch(tc).solutions()


def classify(structures: Sequence[PsyBracket], n: int) -> EnumerationResult:
    """Group structures by canonical form; representatives are the class minima."""
    classes: Dict[Tuple[int, ...], Tuple[PsyBracket, int]] = {}
    for x in structures:
        rep = canonical_form(x)
        key = rep.key()
        _, size = classes.get(key, (rep, 0))
        classes[key] = (rep, size + 1)
    ordered = sorted(classes.items())
    return EnumerationResult(
        n=n,
        total=len(structures),
        representatives=[rep for _, (rep, _) in ordered],
        class_sizes=[size for _, (_, size) in ordered],
        structures=sorted(structures, key=PsyBracket.key),
    )


def enumerate_psybrackets(
    n: int, max_carrier: int = DEFAULT_MAX_CARRIER, jobs: int = 1
) -> EnumerationResult:
    """Every psybracket on {1..n}, classified up to isomorphism."""
    tribrackets = enumerate_tribrackets(n, max_carrier=max_carrier, jobs=jobs)
    pre_lists = run_batch(compatible_pre_tensors, tribrackets, jobs=jobs, name="PreSearch")
    structures = [
        PsyBracket(tc=tc, tp=tp)
        for tc, pres in zip(tribrackets, pre_lists)
        for tp in pres
    ]
    result = classify(structures, n)
    logger.info(f"n={n}: {result.summary()}")
    return result


def _all_tensors(n: int):
    for flat in itertools.product(range(n), repeat=n ** 3):
        yield TernaryTensor(n=n, cells=np.array(flat).reshape((n,) * 3))


def brute_force_psybrackets(
    n: int, max_carrier: int = BRUTE_FORCE_MAX_CARRIER
) -> EnumerationResult:
    """
    Unpruned oracle: every pair of n x n x n tensors, filtered by the axioms.

    A classical tensor failing (i.i)-(i.iii) fails for every partner, so its
    inner loop is skipped; this does not change the filtered set.
    """
    check_bound(n, max_carrier)
    tensors = list(_all_tensors(n))
    structures = []
    for tc in tensors:
        if not is_ternary_quasigroup(tc):
            continue
        structures.extend(
            PsyBracket(tc=tc, tp=tp) for tp in tensors if satisfies_axioms(tc, tp)
        )
    logger.info(f"n={n}: brute force checked {len(tensors) ** 2} pairs")
    return classify(structures, n)


def find_isomorphism_class(result: EnumerationResult, x: PsyBracket) -> Optional[int]:
    """Index of the class containing x, or None."""
    key = canonical_form(x).key()
    for i, rep in enumerate(result.representatives):
        if rep.key() == key:
            return i
    return None
