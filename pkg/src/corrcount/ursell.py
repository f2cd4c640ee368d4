"""Correlation (Ursell) expansion machinery on exchangeable tables.

Marginals of a joint give probability tables P_k; subtracting every
factorized lower-order contribution gives the connected correlation tables
G_k.  Two equivalent routes are implemented: the literal recursion over
argument permutations (kept on the expanded per-pattern view, so symmetry
and sign identities can be tested from first principles) and the
set-partition sum used as the production path.  The inverse reconstruction
P-from-G and the partition enumerator they share live here too.
"""

import itertools
import math
from bisect import bisect_right
from collections.abc import Iterator, Sequence
from dataclasses import dataclass

from .core import (
    KIND_CORRELATION,
    KIND_PROBABILITY,
    BadShapeError,
    ExchangeableJoint,
    OutOfRangeError,
    SymmetricTable,
)

__all__ = [
    "PARTITION_MAX_ORDER",
    "RECURSION_MAX_ORDER",
    "SetPartition",
    "enumerate_set_partitions",
    "marginalize",
    "correlation_recursive",
    "correlation_recursive_expanded",
    "correlation_partition",
    "probability_from_correlations",
]

# Bell(12) = 4,213,597 terms is the enumeration ceiling; refuse beyond.
PARTITION_MAX_ORDER = 12
# The literal recursion costs ~ (k-1)! * k * 2^k.
RECURSION_MAX_ORDER = 10


@dataclass(frozen=True)
class SetPartition:
    """Disjoint nonempty blocks covering {1, ..., k}.

    Canonical form: elements ascend within each block and blocks are
    ordered by their smallest element.
    """

    blocks: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return sum(len(b) for b in self.blocks)

    def is_canonical(self) -> bool:
        seen: set[int] = set()
        for block in self.blocks:
            if not block or list(block) != sorted(block):
                return False
            if seen & set(block):
                return False
            seen |= set(block)
        mins = [b[0] for b in self.blocks]
        return mins == sorted(mins) and seen == set(range(1, self.order + 1))


def enumerate_set_partitions(k: int) -> Iterator[SetPartition]:
    """Yield every set partition of {1, ..., k} exactly once.

    Partitions appear in the lexicographic order of their restricted-growth
    strings (element i joins an existing block, in block-creation order,
    before opening a new one), which makes every yielded partition
    canonical.  The stream length is the Bell number of k.
    """
    if not isinstance(k, int) or not 1 <= k <= PARTITION_MAX_ORDER:
        raise OutOfRangeError(
            f"partition enumeration supports 1 <= k <= {PARTITION_MAX_ORDER}, got {k!r}"
        )

    blocks: list[list[int]] = [[1]]

    def extend(element: int) -> Iterator[SetPartition]:
        if element > k:
            yield SetPartition(tuple(tuple(b) for b in blocks))
            return
        for block in blocks:
            block.append(element)
            yield from extend(element + 1)
            block.pop()
        blocks.append([element])
        yield from extend(element + 1)
        blocks.pop()

    yield from extend(2)


def marginalize(joint: ExchangeableJoint, k: int) -> SymmetricTable:
    """Order-k probability table of a joint: sum out the other N-k events.

    values[m] = sum_j C(N-k, j) * pattern_weight[m+j].
    """
    if not isinstance(k, int) or not 1 <= k <= joint.n:
        raise OutOfRangeError(f"marginal order {k!r} outside 1..{joint.n}")
    rest = joint.n - k
    values = [
        math.fsum(
            math.comb(rest, j) * joint.pattern_weight[m + j] for j in range(rest + 1)
        )
        for m in range(k + 1)
    ]
    return SymmetricTable.probability(values)


def _check_tables(tables: Sequence[SymmetricTable], kind: str) -> int:
    if not tables:
        raise BadShapeError("need at least the order-1 table")
    for j, table in enumerate(tables, start=1):
        if table.order != j:
            raise BadShapeError(
                f"expected table of order {j} at position {j - 1}, got {table.order}"
            )
        if table.kind != kind:
            raise BadShapeError(f"expected {kind} table at order {j}, got {table.kind}")
    return len(tables)


def correlation_recursive_expanded(
    p_tables: Sequence[SymmetricTable],
) -> dict[tuple[int, ...], float]:
    """Expanded-view G_k via the literal recursion over argument permutations.

    For each pattern, subtracts sum_sigma sum_l G_l(r_1, r_sigma(2..l)) *
    P_{k-l}(r_sigma(l+1..k)) / ((l-1)! (k-l)!) with sigma running over all
    permutations of the trailing k-1 argument slots.  Nothing assumes
    symmetry of the inputs or intermediates, so the returned dictionary is
    the right object for testing permutation invariance and the sign-flip
    identity from scratch.
    """
    k = _check_tables(p_tables, KIND_PROBABILITY)
    if k > RECURSION_MAX_ORDER:
        raise OutOfRangeError(
            f"literal recursion supports k <= {RECURSION_MAX_ORDER}; "
            "use correlation_partition beyond"
        )
    p_exp = {j: p_tables[j - 1].expanded() for j in range(1, k + 1)}
    g_exp: dict[int, dict[tuple[int, ...], float]] = {1: dict(p_exp[1])}
    for j in range(2, k + 1):
        weight = {
            l: 1.0 / (math.factorial(l - 1) * math.factorial(j - l))
            for l in range(1, j)
        }
        current: dict[tuple[int, ...], float] = {}
        for r in itertools.product((0, 1), repeat=j):
            acc = 0.0
            for sigma in itertools.permutations(range(1, j)):
                for l in range(1, j):
                    g_args = (r[0],) + tuple(r[i] for i in sigma[: l - 1])
                    p_args = tuple(r[i] for i in sigma[l - 1 :])
                    acc += weight[l] * g_exp[l][g_args] * p_exp[j - l][p_args]
            current[r] = p_exp[j][r] - acc
        g_exp[j] = current
    return g_exp[k]


def correlation_recursive(p_tables: Sequence[SymmetricTable]) -> SymmetricTable:
    """Order-k correlation table from the literal permutation recursion."""
    expanded = correlation_recursive_expanded(p_tables)
    k = len(p_tables)
    values = [expanded[(1,) * m + (0,) * (k - m)] for m in range(k + 1)]
    return SymmetricTable.correlation(values)


def _block_product(g, blocks, m) -> float:
    prod = 1.0
    for block in blocks:
        # elements <= m are the ones under the canonical m-ones pattern
        prod *= g[len(block)][bisect_right(block, m)]
    return prod


def correlation_partition(p_tables: Sequence[SymmetricTable]) -> SymmetricTable:
    """Order-k correlation table via the set-partition sum, bottom-up.

    G_k = P_k - sum over partitions of {1..k} with >= 2 blocks of the
    product of lower-order G values on each block.  Agrees with the
    literal recursion wherever both are defined.
    """
    k = _check_tables(p_tables, KIND_PROBABILITY)
    if k > PARTITION_MAX_ORDER:
        raise OutOfRangeError(f"partition route supports k <= {PARTITION_MAX_ORDER}")
    g: dict[int, list[float]] = {1: list(p_tables[0].values)}
    for j in range(2, k + 1):
        disconnected = [0.0] * (j + 1)
        for part in enumerate_set_partitions(j):
            if len(part.blocks) == 1:
                continue
            for m in range(j + 1):
                disconnected[m] += _block_product(g, part.blocks, m)
        p_j = p_tables[j - 1].values
        g[j] = [p_j[m] - disconnected[m] for m in range(j + 1)]
    return SymmetricTable.correlation(g[k])


def probability_from_correlations(g_tables: Sequence[SymmetricTable]) -> SymmetricTable:
    """Order-k probability table rebuilt from correlation tables.

    P_k = sum over all set partitions of {1..k} of the product of G values
    on the blocks; the inverse of :func:`correlation_partition`.  Summing
    the result over one argument reproduces the order k-1 reconstruction.
    """
    k = _check_tables(g_tables, KIND_CORRELATION)
    if k > PARTITION_MAX_ORDER:
        raise OutOfRangeError(f"partition route supports k <= {PARTITION_MAX_ORDER}")
    g = {j: list(g_tables[j - 1].values) for j in range(1, k + 1)}
    values = [0.0] * (k + 1)
    for part in enumerate_set_partitions(k):
        for m in range(k + 1):
            values[m] += _block_product(g, part.blocks, m)
    return SymmetricTable(order=k, kind=KIND_PROBABILITY, values=tuple(values))
