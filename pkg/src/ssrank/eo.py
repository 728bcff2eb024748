"""Ekedahl-Oort types: enumeration, invariant formulas, canonical modules.

An EO type of length g is a sequence nu with nu_1 in {0, 1} and
nu_i <= nu_{i+1} <= nu_i + 1; there are exactly 2^g of them.  Each type
extends symmetrically to a final profile psi on 0..2g, from which a
canonical module is assembled whose operators are partial permutation
matrices.  The reverse direction recovers the type of an arbitrary valid
module from its canonical filtration.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .bt1 import (
    Bt1ValidationError,
    DieudonneModule,
    PolarizationSearchError,
    find_polarization,
    require_valid,
    validate_bt1,
)
from .ffmat import Matrix, PrimeField, Subspace


class FiltrationError(ValueError):
    """Canonical filtration failed to interpolate; input is not classifiable."""


def validate_sequence(nu: Sequence[int]) -> bool:
    """Whether a raw integer sequence is a well-formed EO type."""
    if len(nu) == 0:
        return True
    if nu[0] not in (0, 1):
        return False
    for a, b in zip(nu, nu[1:]):
        if not a <= b <= a + 1:
            return False
    return True


@dataclass(frozen=True)
class EOType:
    """The sequence [nu_1, ..., nu_g]; validated at construction."""

    nu: tuple[int, ...]

    def __post_init__(self) -> None:
        if not validate_sequence(self.nu):
            raise ValueError(f"not a valid EO type: {list(self.nu)}")

    @classmethod
    def of(cls, nu: Sequence[int]) -> "EOType":
        return cls(tuple(int(x) for x in nu))

    @property
    def g(self) -> int:
        return len(self.nu)

    def p_rank(self) -> int:
        """max { i : nu_i = i }, zero when no such i exists."""
        best = 0
        for i, v in enumerate(self.nu, start=1):
            if v == i:
                best = i
        return best

    def a_number(self) -> int:
        return self.g - self.nu[-1] if self.nu else 0

    def __str__(self) -> str:
        return "[" + ",".join(str(v) for v in self.nu) + "]"


@dataclass(frozen=True)
class FinalType:
    """The symmetric extension psi(0..2g) of an EO type."""

    psi: tuple[int, ...]

    def __post_init__(self) -> None:
        psi = self.psi
        if len(psi) % 2 == 0 or not psi:
            raise ValueError("psi must have odd length 2g + 1")
        g = (len(psi) - 1) // 2
        if psi[0] != 0 or psi[2 * g] != g:
            raise ValueError("psi must run from 0 to g")
        for a, b in zip(psi, psi[1:]):
            if b - a not in (0, 1):
                raise ValueError("psi steps must be 0 or 1")
        for i in range(g + 1, 2 * g + 1):
            if psi[i] != psi[2 * g - i] + i - g:
                raise ValueError("psi is not symmetric")

    @property
    def g(self) -> int:
        return (len(self.psi) - 1) // 2


def enumerate_types(g: int) -> Iterator[EOType]:
    """All 2^g EO types of length g, in lexicographic order."""
    if g < 0:
        raise ValueError("g must be nonnegative")

    def rec(prefix: list[int]) -> Iterator[tuple[int, ...]]:
        if len(prefix) == g:
            yield tuple(prefix)
            return
        last = prefix[-1] if prefix else None
        choices = (0, 1) if last is None else (last, last + 1)
        for c in choices:
            prefix.append(c)
            yield from rec(prefix)
            prefix.pop()

    for nu in rec([]):
        yield EOType(nu)


def extend_final(t: EOType) -> FinalType:
    """Extend nu to psi on 0..2g via psi(i) = psi(2g - i) + i - g above g."""
    g = t.g
    psi = [0] * (2 * g + 1)
    for i in range(1, g + 1):
        psi[i] = t.nu[i - 1]
    for i in range(g + 1, 2 * g + 1):
        psi[i] = psi[2 * g - i] + i - g
    return FinalType(tuple(psi))


def node_maps(t: EOType) -> tuple[list[int | None], list[int | None]]:
    """Successor maps of the canonical module on basis indices 0..2g-1.

    v_next[j] is the index hit by V on basis vector j (None when V kills it);
    f_next[j] likewise for F.  V jumps land on e_psi(i) at every psi-increase;
    F sends the top half onto the stagnant indices in order.
    """
    g = t.g
    psi = extend_final(t).psi
    two_g = 2 * g
    v_next: list[int | None] = [None] * two_g
    f_next: list[int | None] = [None] * two_g
    stagnant = []
    for i in range(1, two_g + 1):
        if psi[i] > psi[i - 1]:
            v_next[i - 1] = psi[i] - 1
        else:
            stagnant.append(i)
    if len(stagnant) != g:
        raise FiltrationError("final profile does not have g stagnant steps")
    for m_idx, i in enumerate(stagnant):
        f_next[g + m_idx] = i - 1
    return f_next, v_next


def _matrix_from_map(field: PrimeField, nxt: list[int | None]) -> Matrix:
    n = len(nxt)
    cols = []
    for j in range(n):
        col = [0] * n
        if nxt[j] is not None:
            col[nxt[j]] = 1
        cols.append(col)
    return Matrix.from_columns(field, n, cols)


def canonical_module(t: EOType, field: PrimeField, with_form: bool = True) -> DieudonneModule:
    """The canonical module of an EO type, all structure constants +1.

    The output always satisfies the BT1 axioms (asserted).  When with_form is
    set, a compatible nondegenerate alternating form is searched for and
    attached; failure to find one raises rather than passing silently.
    """
    f_next, v_next = node_maps(t)
    m = DieudonneModule(_matrix_from_map(field, f_next), _matrix_from_map(field, v_next))
    violations = validate_bt1(m)
    if violations:
        raise Bt1ValidationError(violations)
    if with_form:
        gram = find_polarization(m)
        if gram is None:
            raise PolarizationSearchError(
                f"no compatible nondegenerate form found for type {t} over F_{field.p}")
        m = m.with_form(gram)
    return m


def eo_type_of(m: DieudonneModule) -> EOType:
    """Recover the EO type of a valid module from its canonical filtration.

    Closes {0, M} under N -> V(N) and N -> F^{-1}(N); the result is a chain
    whose V-image dimensions pin psi at the chain's dimensions.  Between
    consecutive chain members the V-rank must jump either not at all or by
    the full dimension gap (asserted), which interpolates psi everywhere.
    """
    require_valid(m)
    n = m.dim
    if n % 2 != 0:
        raise FiltrationError("module dimension is odd; no EO type")
    g = n // 2
    frob, ver = m.frobenius, m.verschiebung

    chain: set[Subspace] = {Subspace.zero(m.field, n), Subspace.full(m.field, n)}
    frontier = list(chain)
    while frontier:
        fresh = []
        for sub in frontier:
            for candidate in (ver.map_subspace(sub), frob.preimage(sub)):
                if candidate not in chain:
                    chain.add(candidate)
                    fresh.append(candidate)
        frontier = fresh

    ordered = sorted(chain, key=lambda s: s.dim)
    for small, big in zip(ordered, ordered[1:]):
        if small.dim == big.dim or not big.contains(small):
            raise FiltrationError("canonical closure is not a chain")

    psi_at = {sub.dim: ver.map_subspace(sub).dim for sub in ordered}
    psi = [0] * (n + 1)
    dims = sorted(psi_at)
    for lo, hi in zip(dims, dims[1:]):
        jump = psi_at[hi] - psi_at[lo]
        if jump == 0:
            for i in range(lo, hi + 1):
                psi[i] = psi_at[lo]
        elif jump == hi - lo:
            for i in range(lo, hi + 1):
                psi[i] = psi_at[lo] + (i - lo)
        else:
            raise FiltrationError("graded piece has partial V-rank; not a BT1 filtration")
    psi[n] = psi_at[n]

    if psi[n] != g:
        raise FiltrationError("V has rank different from g; module is not self-balanced")
    for i in range(g + 1, n + 1):
        if psi[i] != psi[n - i] + i - g:
            raise FiltrationError("final profile is not symmetric; module is not quasipolarizable")
    return EOType(tuple(psi[1:g + 1]))
