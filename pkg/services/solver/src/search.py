"""
Exhaustive search for U_k = V_m * V_n inside fixed index budgets.
"""
import logging
from bisect import bisect_left

from shared.models import RecurrencePair, SolutionTriple

from .sequences import terms

logger = logging.getLogger(__name__)


Owners = dict[int, list[tuple[int, int]]]


def product_table(pair: RecurrencePair, n_max: int) -> tuple[list[int], Owners]:
    """Sorted distinct products V_m * V_n (1 <= m <= n <= n_max) and their index pairs."""
    v = terms(pair.V, n_max)
    owners: Owners = {}
    for m in range(1, n_max + 1):
        for n in range(m, n_max + 1):
            owners.setdefault(v[m] * v[n], []).append((m, n))
    return sorted(owners), owners


def search(pair: RecurrencePair, k_max: int, n_max: int) -> list[SolutionTriple]:
    """
    Every (k, m, n) with 1 <= k <= k_max, 1 <= m <= n <= n_max and U_k = V_m V_n,
    sorted by (k, m, n). Squares (m = n) are included.
    """
    if k_max < 1 or n_max < 1:
        raise ValueError(f"Budgets must be positive, got k_max={k_max}, n_max={n_max}")
    products, owners = product_table(pair, n_max)
    u = terms(pair.U, k_max)

    solutions = []
    for k in range(1, k_max + 1):
        position = bisect_left(products, u[k])
        if position == len(products) or products[position] != u[k]:
            continue
        for m, n in owners[u[k]]:
            solutions.append(
                SolutionTriple(equation=pair.equation, k=k, m=m, n=n, value=u[k])
            )

    solutions.sort(key=lambda s: (s.k, s.m, s.n))
    logger.info(
        f"Search {pair.label} (k <= {k_max}, n <= {n_max}): "
        f"{len(solutions)} solutions, k in {sorted({s.k for s in solutions})}"
    )
    return solutions
