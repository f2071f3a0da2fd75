"""C4-free edge decompositions of complete graphs via Sidon-set partitions.

The route: build GF(q^2), take the classical Bose Sidon set of discrete
logs, cover Z_{q^2-1} by its translates along the base-field subgroup, and
split the leftover residues greedily.  Colouring edge {i, j} of K_t by the
class of (i + j) mod (q^2 - 1) makes every class C4-free: a 4-cycle would
force two equal pair sums inside one Sidon set.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from functools import lru_cache

import numpy as np

from .graphs import EdgeColouring, Graph, complete_graph
from .verify import exact_phi_c4_witness, is_sidon, verify_c4_free_colouring

log = logging.getLogger(__name__)

# Below this order an exact backtracking search is used; it is cheap there
# and attains the true optimum (the algebraic route can miss it, e.g. at
# t = 8 where the optimum is 3).
FALLBACK_ORDER_THRESHOLD = 9
DEFAULT_BUDGET_SLACK = 2
DEFAULT_PRIME_TRIES = 3

FieldElem = Tuple[int, int]


class ConstructionError(RuntimeError):
    """An algebraic construction failed its own verification."""


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q < 4:
        return True
    if q % 2 == 0:
        return False
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


def next_prime_with(min_msize: int) -> int:
    """Smallest prime q with q^2 - 1 >= min_msize."""
    if min_msize < 1:
        raise ValueError("min_msize must be >= 1")
    q = 2
    while q * q - 1 < min_msize or not _is_prime(q):
        q += 1
    return q


def _next_prime_after(q: int) -> int:
    q += 1
    while not _is_prime(q):
        q += 1
    return q


def _prime_factors(n: int) -> List[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


@dataclass
class QuadExtField:
    """GF(q^2) with elements (a, b) = a + b*w, where w^2 = s*w + r.

    For odd q: s = 0 and r is a quadratic non-residue.  For q = 2 the
    modulus is w^2 = w + 1.  theta generates the multiplicative group; log
    and power tables are precomputed (O(q^2) walk).
    """

    q: int
    r: int
    s: int
    theta: FieldElem
    powers: List[FieldElem]
    logs: Dict[FieldElem, int]

    @property
    def order(self) -> int:
        return self.q * self.q

    @property
    def group_order(self) -> int:
        return self.q * self.q - 1

    def mul(self, x: FieldElem, y: FieldElem) -> FieldElem:
        a, b = x
        c, d = y
        q = self.q
        return ((a * c + b * d * self.r) % q, (a * d + b * c + b * d * self.s) % q)

    def add(self, x: FieldElem, y: FieldElem) -> FieldElem:
        return ((x[0] + y[0]) % self.q, (x[1] + y[1]) % self.q)

    def log(self, x: FieldElem) -> int:
        return self.logs[x]


def _find_nonresidue(q: int) -> int:
    squares = {(x * x) % q for x in range(q)}
    for r in range(2, q):
        if r not in squares:
            return r
    raise ConstructionError(f"no quadratic non-residue mod {q}")


def build_field(q: int) -> QuadExtField:
    """GF(q^2) with a verified primitive element."""
    if not _is_prime(q):
        raise ValueError(f"{q} is not prime")
    if q == 2:
        r, s = 1, 1
    else:
        r, s = _find_nonresidue(q), 0

    m = q * q - 1
    maximal_divisors = [m // p for p in _prime_factors(m)]
    field = QuadExtField(q=q, r=r, s=s, theta=(0, 1), powers=[], logs={})

    def order_is_m(elem: FieldElem) -> bool:
        for d in maximal_divisors:
            if _pow(field, elem, d) == (1, 0):
                return False
        return True

    theta = None
    for b in range(1, q):
        for a in range(q):
            cand = (a, b)
            if order_is_m(cand):
                theta = cand
                break
        if theta:
            break
    if theta is None:
        # Primitive elements can lie in the base field only for q^2 <= 4.
        for a in range(2, q):
            if order_is_m((a, 0)):
                theta = (a, 0)
                break
    if theta is None:
        raise ConstructionError(f"no primitive element found for GF({q}^2)")

    powers: List[FieldElem] = []
    logs: Dict[FieldElem, int] = {}
    x = (1, 0)
    for k in range(m):
        powers.append(x)
        logs[x] = k
        x = field.mul(x, theta)
    if x != (1, 0) or len(logs) != m:
        raise ConstructionError(f"theta={theta} does not have order {m}")
    field.theta = theta
    field.powers = powers
    field.logs = logs
    return field


def _pow(field: QuadExtField, x: FieldElem, e: int) -> FieldElem:
    out = (1, 0)
    base = x
    while e:
        if e & 1:
            out = field.mul(out, base)
        base = field.mul(base, base)
        e >>= 1
    return out


def bose_sidon(field: QuadExtField) -> List[int]:
    """Bose's Sidon set {log(theta + a) : a in GF(q)} in Z_{q^2-1}."""
    q = field.q
    b = sorted(field.log(field.add(field.theta, (a, 0))) for a in range(q))
    if len(b) != q or not is_sidon(b, field.group_order):
        raise ConstructionError(f"Bose set for q={q} failed the Sidon check")
    return b


@dataclass
class SidonPartition:
    m: int
    q: int
    classes: List[List[int]]

    @property
    def class_count(self) -> int:
        return len(self.classes)


@lru_cache(maxsize=64)
def sidon_partition(q: int) -> SidonPartition:
    """Partition of Z_{q^2-1} into Sidon classes, verified before return.

    The q-1 translates of the Bose set along the base-field subgroup cover
    everything except the multiples of q+1, which are split by first-fit.
    Results are cached; treat the returned partition as immutable.
    """
    field = build_field(q)
    m = field.group_order
    base = bose_sidon(field)
    classes: List[List[int]] = []
    covered = set()
    for j in range(q - 1):
        shift = (j * (q + 1)) % m
        cls = sorted((x + shift) % m for x in base)
        classes.append(cls)
        covered.update(cls)
    leftover = sorted(x for x in range(m) if x not in covered)
    expected_leftover = sorted((j * (q + 1)) % m for j in range(q - 1)) if q > 2 else [0]
    if q > 2 and leftover != expected_leftover:
        raise ConstructionError(f"translate cover for q={q} is not the expected one")
    for x in leftover:
        placed = False
        for cls in classes[q - 1 :]:
            if is_sidon(cls + [x], m):
                cls.append(x)
                placed = True
                break
        if not placed:
            classes.append([x])
    for cls in classes:
        cls.sort()
        if not is_sidon(cls, m):
            raise ConstructionError(f"non-Sidon class {cls} for q={q}")
    flat = sorted(x for cls in classes for x in cls)
    if flat != list(range(m)):
        raise ConstructionError(f"classes do not partition Z_{m} for q={q}")
    budget = (q - 1) + math.ceil(2 * math.sqrt(q)) + 2
    if len(classes) > budget:
        raise ConstructionError(
            f"sidon_partition(q={q}) used {len(classes)} classes, over budget {budget}"
        )
    return SidonPartition(m=m, q=q, classes=classes)


def class_count_for(t: int, q: int) -> int:
    """Classes actually used by the K_t colouring via prime q (no K_t built).

    Distinct-vertex pair sums hit exactly the residues {s mod m : 1 <= s
    <= 2t-3}, so counting touched classes is O(m).
    """
    part = sidon_partition(q)
    m = part.m
    class_of = _class_index_map(part)
    touched = set()
    for s in range(1, 2 * t - 2):
        touched.add(class_of[s % m])
    return len(touched)


def _class_index_map(part: SidonPartition) -> List[int]:
    class_of = [0] * part.m
    for i, cls in enumerate(part.classes):
        for x in cls:
            class_of[x] = i
    return class_of


def complete_c4_free_colouring(
    t: int,
    budget_slack: int = DEFAULT_BUDGET_SLACK,
    prime_tries: int = DEFAULT_PRIME_TRIES,
    verify: bool = True,
) -> EdgeColouring:
    """C4-free edge colouring of K_t, aiming for at most ceil(2*sqrt(t)) classes.

    Retries a few successive primes if the budget (plus slack) is missed;
    a budget miss is logged, never fatal.  Tiny orders fall back to the
    verified greedy colourer.
    """
    if t < 2:
        raise ValueError("t must be >= 2")
    graph = complete_graph(t)
    if t < FALLBACK_ORDER_THRESHOLD:
        colouring = EdgeColouring(graph, dict(_exact_complete_assignment(t)))
        _check(graph, colouring)
        return colouring

    budget = math.ceil(2 * math.sqrt(t))
    best: Optional[EdgeColouring] = None
    q = next_prime_with(t)
    for _ in range(prime_tries):
        part = sidon_partition(q)
        colouring = _colour_by_partition(graph, part)
        if best is None or colouring.class_count < best.class_count:
            best = colouring
        if colouring.class_count <= budget + budget_slack:
            break
        q = _next_prime_after(q)
    assert best is not None
    if best.class_count > budget:
        log.warning(
            "complete_c4_free_colouring(t=%d): %d classes exceeds budget %d",
            t, best.class_count, budget,
        )
    if verify:
        _check(graph, best)
    return best


@lru_cache(maxsize=None)
def _exact_complete_assignment(t: int):
    _, assignment = exact_phi_c4_witness(complete_graph(t), edge_cap=t * (t - 1) // 2)
    return tuple(sorted(assignment.items()))


def _colour_by_partition(graph: Graph, part: SidonPartition) -> EdgeColouring:
    class_of = _class_index_map(part)
    raw = {(i, j): class_of[(i + j) % part.m] for i, j in graph.edges}
    # Drop unused colour ids and renumber contiguously.
    used = sorted(set(raw.values()))
    remap = {c: k for k, c in enumerate(used)}
    return EdgeColouring(graph, {e: remap[c] for e, c in raw.items()})


def select_prime(
    t: int,
    budget_slack: int = DEFAULT_BUDGET_SLACK,
    prime_tries: int = DEFAULT_PRIME_TRIES,
) -> int:
    """The prime complete_c4_free_colouring(t) settles on, without
    materialising any K_t colouring (class_count_for is O(q^2))."""
    budget = math.ceil(2 * math.sqrt(t))
    q = next_prime_with(t)
    best_q = None
    best_count = None
    for _ in range(prime_tries):
        count = class_count_for(t, q)
        if best_count is None or count < best_count:
            best_q, best_count = q, count
        if count <= budget + budget_slack:
            break
        q = _next_prime_after(q)
    assert best_q is not None
    return best_q


@lru_cache(maxsize=32)
def class_lookup_table(t: int, budget_slack: int = DEFAULT_BUDGET_SLACK) -> "np.ndarray":
    """t x t table mapping a pair of K_t vertices to its colour class.

    Same classes (up to renumbering) as complete_c4_free_colouring(t), but
    never builds the quadratic edge dictionary; callers that only need
    class lookups (the pull-back hot path) index this array instead.  The
    diagonal is filled by the same residue rule and must not be used.
    """
    if t < 2:
        raise ValueError("t must be >= 2")
    if t < FALLBACK_ORDER_THRESHOLD:
        table = np.zeros((t, t), dtype=np.int32)
        for (i, j), c in _exact_complete_assignment(t):
            table[i, j] = table[j, i] = c
        return table
    part = sidon_partition(select_prime(t, budget_slack))
    class_of = np.asarray(_class_index_map(part), dtype=np.int32)
    idx = (np.arange(t, dtype=np.int64)[:, None] + np.arange(t, dtype=np.int64)[None, :]) % part.m
    return class_of[idx]


def _check(graph: Graph, colouring: EdgeColouring) -> None:
    report = verify_c4_free_colouring(graph, colouring)
    if not report.ok:
        raise ConstructionError(f"complete colouring failed verification: {report.summary()}")
