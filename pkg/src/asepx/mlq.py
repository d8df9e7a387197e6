"""Multiline-queue combinatorics and the operator form of the construction.

A ball system is a stack of 0/1 rows with strictly decreasing
occupancies l_1 > l_2 > ... > l_n (row 1 on top).  Pairing a lower row
into the row above it produces weighted injections; the generating
function of the weights is a linear operator between row spaces, and
the whole construction composes those operators and projects onto ASEP
configurations.  A direct round-by-round enumerator over ball diagrams
is kept as an independent oracle for the operator pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Optional

from .asep_core import Config, Multiplicity, SectorBasis
from .scalar import Poly, RatFunc, RF_ONE, RF_ZERO, one_minus_qtk

Row = tuple[int, ...]


@dataclass(frozen=True)
class PairStep:
    """One arrow of a pairing round, with its weight statistics."""

    src: int      # column of the lower-row ball (0-based)
    tgt: int      # column of the chosen upper-row ball
    wrapped: int  # 1 iff the leftward arrow crosses the periodic boundary
    skipped: int  # free upper balls passed over by the arrow
    free: int     # free upper balls available before this step
    trivial: int  # 1 iff forced same-column pairing (weight 1)


@dataclass(frozen=True)
class PairingOutcome:
    """An admissible pairing of a lower row into an upper row."""

    target: Row
    steps: tuple[PairStep, ...]


@dataclass(frozen=True)
class BallSystem:
    """Rows (b_n, ..., b_1), bottom row first, occupancies strictly rising."""

    rows: tuple[Row, ...]

    def __post_init__(self):
        occ = [sum(r) for r in self.rows]
        if any(occ[i] >= occ[i + 1] for i in range(len(occ) - 1)):
            raise ValueError(f"occupancies must increase bottom-up, got {occ}")


@dataclass
class SectorVector:
    """Rational-function values attached to every configuration of a sector."""

    basis: SectorBasis
    values: dict[Config, RatFunc]

    def canonical(self) -> dict[Config, Poly]:
        from .asep_core import canonicalize_values

        return canonicalize_values(self.basis, self.values)


def row_from_cols(cols, L: int) -> Row:
    bits = [0] * L
    for c in cols:
        bits[c] = 1
    return tuple(bits)


def _step_stats(src: int, tgt: int, free_mask: int, L: int) -> tuple[int, int]:
    """(wrapped, skipped) for the leftward cyclic arrow src -> tgt."""
    wrapped = 1 if tgt > src else 0
    skipped = 0
    col = (src - 1) % L
    while col != tgt:
        if free_mask >> col & 1:
            skipped += 1
        col = (col - 1) % L
    return wrapped, skipped


def enumerate_pairings(i: Row, j: Row) -> list[PairingOutcome]:
    """All pairings of the balls of row i into free balls of row j.

    Lower balls are processed left to right; each picks any free upper
    ball except that a free upper ball directly above must be picked
    (the trivial pairing).  Requires |i| < |j|.
    """
    L = len(i)
    if len(j) != L:
        raise ValueError("rows must have equal length")
    if sum(i) >= sum(j):
        raise ValueError("need strictly fewer lower balls than upper balls")
    sources = [c for c in range(L) if i[c]]
    full_mask = 0
    for c in range(L):
        if j[c]:
            full_mask |= 1 << c
    outcomes: list[PairingOutcome] = []

    def rec(idx: int, free_mask: int, steps: list[PairStep]):
        if idx == len(sources):
            taken = full_mask & ~free_mask
            target = tuple((taken >> c) & 1 for c in range(L))
            outcomes.append(PairingOutcome(target, tuple(steps)))
            return
        src = sources[idx]
        nfree = bin(free_mask).count("1")
        if free_mask >> src & 1:
            steps.append(PairStep(src, src, 0, 0, nfree, 1))
            rec(idx + 1, free_mask & ~(1 << src), steps)
            steps.pop()
            return
        for tgt in range(L):
            if not (free_mask >> tgt & 1):
                continue
            wrapped, skipped = _step_stats(src, tgt, free_mask, L)
            steps.append(PairStep(src, tgt, wrapped, skipped, nfree, 0))
            rec(idx + 1, free_mask & ~(1 << tgt), steps)
            steps.pop()

    rec(0, full_mask, [])
    return outcomes


def pairing_weight(p: PairingOutcome, qeff: Fraction) -> RatFunc:
    """Product over non-trivial steps of (1-t) t^skipped qeff^wrapped / (1 - qeff t^free)."""
    total = RF_ONE
    for step in p.steps:
        if step.trivial:
            continue
        num = Poly((1, -1)).shift(step.skipped).scale(qeff**step.wrapped)
        total = total * RatFunc(num, one_minus_qtk(qeff, step.free))
    return total


def m_element(q: Fraction, i: Row, j: Row, a: Row, b: Row) -> RatFunc:
    """Generating function of pairing weights with paired image exactly a.

    Vanishes unless a + b = j entrywise.
    """
    L = len(i)
    if not (len(j) == len(a) == len(b) == L):
        raise ValueError("row length mismatch")
    if any(a[c] + b[c] != j[c] for c in range(L)):
        return RF_ZERO
    total = RF_ZERO
    for outcome in enumerate_pairings(i, j):
        if outcome.target == a:
            total = total + pairing_weight(outcome, q)
    return total


@lru_cache(maxsize=None)
def _pairing_images(qeff: Fraction, i: Row, j: Row) -> tuple[tuple[Row, RatFunc], ...]:
    """Aggregated (image, total weight) list for the row pair (i, j)."""
    sums: dict[Row, RatFunc] = {}
    for outcome in enumerate_pairings(i, j):
        w = pairing_weight(outcome, qeff)
        cur = sums.get(outcome.target)
        sums[outcome.target] = w if cur is None else cur + w
    return tuple(sorted(sums.items()))


def mcheck_apply(
    q: Fraction, vec: dict[tuple[Row, Row], RatFunc]
) -> dict[tuple[Row, Row], RatFunc]:
    """Linear map v_i (x) v_j  ->  sum_a M^{a, j-a}_{i,j} v_{j-a} (x) v_a."""
    out: dict[tuple[Row, Row], RatFunc] = {}
    for (i, j), coeff in vec.items():
        if not coeff:
            continue
        for a, w in _pairing_images(q, i, j):
            b = tuple(j[c] - a[c] for c in range(len(j)))
            key = (b, a)
            cur = out.get(key)
            new = coeff * w if cur is None else cur + coeff * w
            if new:
                out[key] = new
            elif cur is not None:
                del out[key]
    return out


def _apply_mcheck_at(
    q: Fraction, vec: dict[tuple[Row, ...], RatFunc], pos: int
) -> dict[tuple[Row, ...], RatFunc]:
    """Apply the two-row operator at tensor slots (pos, pos+1)."""
    out: dict[tuple[Row, ...], RatFunc] = {}
    for key, coeff in vec.items():
        if not coeff:
            continue
        i, j = key[pos], key[pos + 1]
        if sum(i) >= sum(j):
            raise ValueError(
                f"occupancy mismatch at slots {pos},{pos + 1}: {sum(i)} >= {sum(j)}"
            )
        for a, w in _pairing_images(q, i, j):
            b = tuple(j[c] - a[c] for c in range(len(j)))
            nkey = key[:pos] + (b, a) + key[pos + 2:]
            cur = out.get(nkey)
            new = coeff * w if cur is None else cur + coeff * w
            if new:
                out[nkey] = new
            elif cur is not None:
                del out[nkey]
    return out


def _bigm_on_vector(
    q: Fraction, vec: dict[tuple[Row, ...], RatFunc], n: int
) -> dict[tuple[Row, ...], RatFunc]:
    """Composition of all pairing rounds on an n-row tensor vector.

    Round j applies the two-row operator at slot pairs (r, r-1) for
    r = n down to j+1 with deformation q^{n-r+1}; tensor slots are kept
    left to right as (slot n, ..., slot 1).
    """
    for j in range(1, n):
        for r in range(n, j, -1):
            qeff = q ** (n - r + 1)
            pos = n - r  # slot r sits at list index n - r
            vec = _apply_mcheck_at(qeff, vec, pos)
    return vec


def bigM_apply(q: Fraction, b: BallSystem) -> dict[tuple[Row, ...], RatFunc]:
    """Full pairing operator applied to one ball system.

    Input slots hold (b_n, ..., b_1); the output tensor holds the color
    position rows (c_1, ..., c_n) left to right.
    """
    n = len(b.rows)
    return _bigm_on_vector(q, {tuple(b.rows): RF_ONE}, n)


def project_pi(vec: dict[tuple[Row, ...], RatFunc]) -> SectorVector:
    """Send v_{c_1} (x) ... (x) v_{c_n} to the configuration c_1 + 2 c_2 + ... + n c_n.

    Fails if any site carries two colors (cannot happen for genuine
    pairing outputs).
    """
    if not vec:
        raise ValueError("empty vector")
    some_key = next(iter(vec))
    n = len(some_key)
    L = len(some_key[0])
    occupancies = tuple(sum(r) for r in some_key)
    m0 = L - sum(occupancies)
    if m0 < 0:
        raise ValueError("color rows overfill the ring")
    m = Multiplicity((m0,) + occupancies)
    basis = SectorBasis(m)
    values: dict[Config, RatFunc] = {}
    for key, coeff in vec.items():
        if tuple(sum(r) for r in key) != occupancies:
            raise ValueError("inconsistent slot occupancies")
        sigma = [0] * L
        for color0, row in enumerate(key):
            for site, bit in enumerate(row):
                if bit:
                    if sigma[site]:
                        raise ValueError(f"overlapping colors at site {site}")
                    sigma[site] = color0 + 1
        cfg = tuple(sigma)
        cur = values.get(cfg)
        values[cfg] = coeff if cur is None else cur + coeff
    return SectorVector(basis, values)


def _ball_systems(m: Multiplicity) -> Iterator[tuple[Row, ...]]:
    """All (b_n, ..., b_1) row stacks for the sector content m."""
    L = m.L
    lv = m.l_values()
    occupancies = [lv[i] for i in range(m.n, 0, -1)]  # l_n, ..., l_1

    def rows_for(l: int) -> list[Row]:
        return [row_from_cols(cols, L) for cols in combinations(range(L), l)]

    def rec(idx: int, acc: tuple[Row, ...]):
        if idx == len(occupancies):
            yield acc
            return
        for r in rows_for(occupancies[idx]):
            yield from rec(idx + 1, acc + (r,))

    yield from rec(0, ())


def mlq_state(m: Multiplicity, q: Fraction = Fraction(1)) -> SectorVector:
    """Weighted sum over all multiline queues, via the operator composition.

    At q = 1 this is the stationary state of the sector up to scale.
    """
    if not m.is_basic:
        raise ValueError("sector must be basic")
    n = m.n
    vec: dict[tuple[Row, ...], RatFunc] = {
        key: RF_ONE for key in _ball_systems(m)
    }
    vec = _bigm_on_vector(q, vec, n)
    return project_pi(vec)


# ---------------------------------------------------------------------------
# direct enumeration oracle


@dataclass(frozen=True)
class MLQRecord:
    """One fully paired ball diagram."""

    rows: tuple[Row, ...]                    # (b_n, ..., b_1) as given
    arrows: tuple[tuple[int, int, int], ...]  # (src col, tgt col, source row)
    weight: RatFunc
    config: Config


def iter_mlqs(
    m: Multiplicity,
    q: Fraction = Fraction(1),
    ball_system: Optional[BallSystem] = None,
) -> Iterator[MLQRecord]:
    """Enumerate multiline queues of the sector with their exact weights.

    Rounds run over colors c = n, n-1, ..., 2; within a round the color
    climbs row by row, processing landed balls left to right, with the
    forced trivial pairing and the wrapped/skipped/free statistics
    weighted by deformation q^(c - r + 1) at row r.  With `ball_system`
    given, only the queues over that one ball diagram are produced.
    """
    if not m.is_basic:
        raise ValueError("sector must be basic")
    n = m.n
    L = m.L
    stacks = (
        [ball_system.rows] if ball_system is not None else _ball_systems(m)
    )
    for stack in stacks:
        # present[r] = set of columns still holding an uncolored ball in row r
        base_present = {
            r: frozenset(c for c in range(L) if stack[n - r][c])
            for r in range(1, n + 1)
        }
        colors0: dict[int, frozenset] = {}

        def finish(present, colors, arrows, weight):
            colors = dict(colors)
            colors[1] = present[1]
            sigma = [0] * L
            for color, cols in colors.items():
                for c in cols:
                    sigma[c] = color
            return MLQRecord(stack, tuple(arrows), weight, tuple(sigma))

        def run_round(c_color, present, colors, arrows, weight):
            """Yield states after color c_color has climbed to row 1."""
            if c_color == 1:
                yield finish(present, colors, arrows, weight)
                return

            def climb(r, sources, present, arrows, weight):
                # pair `sources` (in row r) into row r-1
                if r == 1:
                    colors2 = dict(colors)
                    colors2[c_color] = frozenset(sources)
                    yield from run_round(
                        c_color - 1, present, colors2, arrows, weight
                    )
                    return
                qeff = q ** (c_color - r + 1)

                def pair(idx, free, landed, arrows, weight):
                    if idx == len(sources):
                        present2 = dict(present)
                        present2[r - 1] = frozenset(free)
                        yield from climb(
                            r - 1, sorted(landed), present2, arrows, weight
                        )
                        return
                    src = sorted(sources)[idx]
                    nfree = len(free)
                    if src in free:
                        yield from pair(
                            idx + 1,
                            free - {src},
                            landed + [src],
                            arrows + [(src, src, r)],
                            weight,
                        )
                        return
                    free_mask = 0
                    for col in free:
                        free_mask |= 1 << col
                    for tgt in sorted(free):
                        wrapped, skipped = _step_stats(src, tgt, free_mask, L)
                        num = (
                            Poly((1, -1))
                            .shift(skipped)
                            .scale(qeff**wrapped)
                        )
                        wstep = RatFunc(num, one_minus_qtk(qeff, nfree))
                        yield from pair(
                            idx + 1,
                            free - {tgt},
                            landed + [tgt],
                            arrows + [(src, tgt, r)],
                            weight * wstep,
                        )

                yield from pair(0, set(present[r - 1]), [], arrows, weight)

            start = sorted(present[c_color])
            yield from climb(c_color, start, present, arrows, weight)

        yield from run_round(n, base_present, colors0, [], RF_ONE)


def mlq_enumerate_direct(m: Multiplicity, q: Fraction = Fraction(1)) -> SectorVector:
    """Stationary-state sum by explicit enumeration of all multiline queues.

    Independent of the operator pipeline; intended for small sectors.
    """
    basis = SectorBasis(m)
    values: dict[Config, RatFunc] = {}
    for rec in iter_mlqs(m, q):
        cur = values.get(rec.config)
        values[rec.config] = rec.weight if cur is None else cur + rec.weight
    return SectorVector(basis, values)
