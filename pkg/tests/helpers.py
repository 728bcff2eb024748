"""Shared test utilities: an independent brute-force embedding counter over F_2."""

from __future__ import annotations

from ssrank.bt1 import DieudonneModule


def _pack(vec) -> int:
    acc = 0
    for j, e in enumerate(vec):
        if e:
            acc |= 1 << j
    return acc


def _try_add(v: int, basis: dict[int, int]) -> bool:
    """Insert v into an XOR basis keyed by highest set bit; False if dependent."""
    while v:
        high = v.bit_length() - 1
        row = basis.get(high)
        if row is None:
            basis[high] = v
            return True
        v ^= row
    return False


def brute_force_embedding_count(m: DieudonneModule) -> int:
    """Largest u such that u independent supersingular blocks embed, by search.

    Enumerates every nonzero element of ker(F + V) and looks for the largest
    set m_1, ..., m_u whose combined vectors {m_i, F m_i} stay linearly
    independent.  Exponential and completely independent of the closed form
    it is used to check.  F_2 only.
    """
    if m.field.p != 2:
        raise ValueError("brute force oracle is written for p = 2")
    n = m.dim
    fcols = [_pack(m.frobenius.column(j)) for j in range(n)]

    def apply_f(v: int) -> int:
        acc = 0
        j = 0
        while v:
            if v & 1:
                acc ^= fcols[j]
            v >>= 1
            j += 1
        return acc

    kernel_basis = [_pack(b) for b in m.frobenius.add(m.verschiebung).kernel().basis]
    elements = []
    for mask in range(1, 1 << len(kernel_basis)):
        acc = 0
        for i, b in enumerate(kernel_basis):
            if (mask >> i) & 1:
                acc ^= b
        elements.append(acc)

    best = 0

    def extend(start: int, basis: dict[int, int], depth: int) -> None:
        nonlocal best
        best = max(best, depth)
        if depth == n // 2:
            return
        for idx in range(start, len(elements)):
            v = elements[idx]
            candidate = dict(basis)
            if not _try_add(v, candidate):
                continue
            if not _try_add(apply_f(v), candidate):
                continue
            extend(idx + 1, candidate, depth + 1)

    extend(0, {}, 0)
    return best
