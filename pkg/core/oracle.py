"""
Brute-Force Oracle
==================
Independent count of index-k subgroups containing the stabilizer words,
used to cross-check the low-index search.

Whole permutations of {0..k-1} are assigned to the generators (numpy
arrays, point 0 plays coset 1); candidate tuples are filtered with
vectorised relator checks, verified in full, and deduplicated afterwards
by the breadth-first relabelling from point 0. Nothing here shares code
with the coset-table search.

Only relabellings fixing point 0 are factored out: the first generator is
taken up to conjugacy in Sym({1..k-1}), and so is the second one when the
first acts trivially.
"""

from typing import Iterator, List, Sequence, Set, Tuple

import numpy as np
from loguru import logger

from core.presentations import Presentation, PresentationKind, Word
from utils.errors import OracleLimitExceeded

ORACLE_MAX_K = 12


def _involutions(k: int, fix_zero: bool) -> np.ndarray:
    """All permutations of order dividing 2, optionally fixing point 0."""
    out: List[List[int]] = []

    def extend(perm: List[int], free: List[int]) -> None:
        if not free:
            out.append(perm[:])
            return
        a, rest = free[0], free[1:]
        extend(perm, rest)
        for i, b in enumerate(rest):
            perm[a], perm[b] = b, a
            extend(perm, rest[:i] + rest[i + 1:])
            perm[a], perm[b] = a, b

    start = list(range(k))
    extend(start, list(range(1, k)) if fix_zero else list(range(k)))
    return np.array(out, dtype=np.int16).reshape(len(out), k)


def _partitions(n: int, parts: Sequence[int], max_part: int) -> Iterator[List[int]]:
    """Partitions of n into the given parts, non-increasing."""
    if n == 0:
        yield []
        return
    for part in parts:
        if part <= max_part and part <= n:
            for rest in _partitions(n - part, parts, part):
                yield [part] + rest


def _cycle_perm(k: int, lengths: Sequence[int], first: int) -> np.ndarray:
    """Permutation with consecutive cycles of the given lengths, starting at `first`."""
    perm = np.arange(k, dtype=np.int16)
    point = first
    for length in lengths:
        block = list(range(point, point + length))
        for a, b in zip(block, block[1:] + block[:1]):
            perm[a] = b
        point += length
    return perm


def _class_representatives(k: int, order: int, fix_zero: bool) -> List[np.ndarray]:
    """
    One permutation of order dividing `order` per conjugacy class of
    Sym({1..k-1}) acting on Sym({0..k-1}).
    """
    parts = [d for d in range(order, 0, -1) if order % d == 0]
    reps = []
    if fix_zero:
        for lengths in _partitions(k - 1, parts, order):
            reps.append(_cycle_perm(k, lengths, 1))
        return reps
    for own in parts:
        if own > k:
            continue
        for lengths in _partitions(k - own, parts, order):
            reps.append(_cycle_perm(k, [own] + lengths, 0))
    return reps


def _compose(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Batched left-to-right product: point i goes to b[a[i]]."""
    return np.take_along_axis(b, a, axis=-1)


def _power_is_identity(perms: np.ndarray, n: int) -> np.ndarray:
    """Boolean mask of rows whose n-th power is the identity."""
    k = perms.shape[-1]
    result = np.broadcast_to(np.arange(k, dtype=perms.dtype), perms.shape).copy()
    base = perms.copy()
    while n:
        if n & 1:
            result = _compose(result, base)
        base = _compose(base, base)
        n >>= 1
    return np.all(result == np.arange(k), axis=-1)


def _word_image(perms: Sequence[np.ndarray], word: Word) -> np.ndarray:
    """Where every point goes under the word, letters applied left to right."""
    points = np.arange(len(perms[0]))
    for g, e in word.letters:
        points = perms[g][points] if e > 0 else np.argsort(perms[g])[points]
    return points


def _verified(pres: Presentation, perms: Sequence[np.ndarray], must_fix: Sequence[Word]) -> bool:
    identity = np.arange(len(perms[0]))
    for relator in pres.relators:
        if not np.array_equal(_word_image(perms, relator), identity):
            return False
    return all(_word_image(perms, w)[0] == 0 for w in must_fix)


def _canonical_key(perms: Sequence[np.ndarray]) -> Tuple[int, ...]:
    """Breadth-first relabelling from point 0 over generator images then inverse images."""
    k = len(perms[0])
    images = [list(map(int, p)) for p in perms]
    inverses = []
    for p in images:
        inv = [0] * k
        for i, j in enumerate(p):
            inv[j] = i
        inverses.append(inv)
    label = {0: 0}
    order = [0]
    columns = images + inverses
    for point in order:
        for col in columns:
            target = col[point]
            if target not in label:
                label[target] = len(order)
                order.append(target)
    if len(order) != k:
        return ()
    return tuple(label[col[point]] for point in order for col in images)


class _Collector:
    def __init__(self, pres: Presentation, must_fix: Sequence[Word]):
        self.pres = pres
        self.must_fix = list(must_fix)
        self.keys: Set[Tuple[int, ...]] = set()
        self.checked = 0

    def offer(self, perms: Sequence[np.ndarray]) -> None:
        self.checked += 1
        if not _verified(self.pres, perms, self.must_fix):
            return
        key = _canonical_key(perms)
        if key:
            self.keys.add(key)


def _fixed_single_letters(pres: Presentation, must_fix: Sequence[Word]) -> Set[int]:
    return {w.letters[0][0] for w in must_fix if len(w) == 1}


def _vondyck_count(pres: Presentation, k: int, must_fix: Sequence[Word]) -> int:
    """x up to relabelling, z = x y runs over all involutions, y = x^-1 z."""
    fixed = _fixed_single_letters(pres, must_fix)
    collector = _Collector(pres, must_fix)
    involutions = _involutions(k, fix_zero=False)
    for x in _class_representatives(k, pres.p, fix_zero=0 in fixed):
        x_inv = np.argsort(x).astype(np.int16)
        ys = _compose(np.broadcast_to(x_inv, involutions.shape), involutions)
        mask = _power_is_identity(ys, pres.q)
        if 1 in fixed:
            mask &= ys[:, 0] == 0
        for y in ys[mask]:
            collector.offer((x, y))
    logger.debug(f"oracle vondyck({pres.p},{pres.q}) k={k}: {collector.checked} candidates verified")
    return len(collector.keys)


def _coxeter_count(pres: Presentation, k: int, must_fix: Sequence[Word]) -> int:
    """r0 up to relabelling, r1 and r2 over involutions with (r0 r1)^p and (r0 r2)^2 filters."""
    fixed = _fixed_single_letters(pres, must_fix)
    collector = _Collector(pres, must_fix)
    all_involutions = _involutions(k, fix_zero=False)
    fixing_involutions = _involutions(k, fix_zero=True)
    identity = np.arange(k, dtype=np.int16)
    for r0 in _class_representatives(k, 2, fix_zero=0 in fixed):
        if np.array_equal(r0, identity):
            r1_pool = np.array(_class_representatives(k, 2, fix_zero=1 in fixed))
        else:
            r1_pool = fixing_involutions if 1 in fixed else all_involutions
        r1_pool = r1_pool[_power_is_identity(_compose(np.broadcast_to(r0, r1_pool.shape), r1_pool), pres.p)]
        r2_pool = all_involutions
        if 2 in fixed:
            r2_pool = r2_pool[r2_pool[:, 0] == 0]
        r2_pool = r2_pool[_power_is_identity(_compose(np.broadcast_to(r0, r2_pool.shape), r2_pool), 2)]
        if not len(r1_pool) or not len(r2_pool):
            continue
        for r1 in r1_pool:
            products = _compose(np.broadcast_to(r1, r2_pool.shape), r2_pool)
            for r2 in r2_pool[_power_is_identity(products, pres.q)]:
                collector.offer((r0, r1, r2))
    logger.debug(f"oracle coxeter({pres.p},{pres.q}) k={k}: {collector.checked} candidates verified")
    return len(collector.keys)


def oracle_count(pres: Presentation, k: int, must_fix: Sequence[Word] = ()) -> int:
    """
    Number of index-k subgroups H with <must_fix> <= H, by brute force.

    Raises:
        ValueError: k <= 0
        OracleLimitExceeded: k above the cost guard
    """
    if k <= 0:
        raise ValueError(f"Index k must be >= 1, got {k}")
    if k > ORACLE_MAX_K:
        raise OracleLimitExceeded(f"oracle_count is limited to k <= {ORACLE_MAX_K}, got {k}")
    must_fix = [pres.reduce(w) for w in must_fix]
    if pres.kind == PresentationKind.VON_DYCK:
        return _vondyck_count(pres, k, must_fix)
    return _coxeter_count(pres, k, must_fix)
