"""n-species ASEP on a ring: sectors, Markov matrix, exact stationary states.

Configurations are tuples of site values in {0..n}; the Markov matrix
acts within each sector of fixed particle content.  The stationary
vector is computed by exact Gaussian elimination over the field of
rational functions in t and canonically normalized to an integer
polynomial vector of content 1.

A continuous-time simulator with exponential waiting times serves as a
statistical oracle for the exact results.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import gcd, lcm
from typing import Iterable, Iterator, Optional

from .scalar import (
    P_ONE,
    P_ZERO,
    Poly,
    RatFunc,
    RF_ONE,
    poly_gcd,
    poly_lcm,
)

Config = tuple[int, ...]


class KernelError(ValueError):
    """The sector kernel is not one-dimensional."""


@dataclass(frozen=True)
class Multiplicity:
    """Particle content (m_0, ..., m_n); m_0 counts vacancies."""

    counts: tuple[int, ...]

    def __post_init__(self):
        if any(c < 0 for c in self.counts) or len(self.counts) < 2:
            raise ValueError(f"bad multiplicity {self.counts}")

    @property
    def L(self) -> int:
        return sum(self.counts)

    @property
    def n(self) -> int:
        return len(self.counts) - 1

    @property
    def is_basic(self) -> bool:
        return all(c >= 1 for c in self.counts)

    def l_values(self) -> tuple[int, ...]:
        """Partial sums l_i = m_i + ... + m_n for i = 0..n."""
        out = []
        acc = 0
        for c in reversed(self.counts):
            acc += c
            out.append(acc)
        return tuple(reversed(out))


def multiplicity(counts: Iterable[int]) -> Multiplicity:
    return Multiplicity(tuple(counts))


def basic_multiplicities(n: int, L: int) -> Iterator[Multiplicity]:
    """All basic sectors of the n-species model on L sites."""

    def compositions(total: int, parts: int):
        if parts == 1:
            if total >= 1:
                yield (total,)
            return
        for first in range(1, total - parts + 2):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    for c in compositions(L, n + 1):
        yield Multiplicity(c)


class SectorBasis:
    """All configurations of a sector in lexicographic order."""

    def __init__(self, m: Multiplicity):
        self.m = m
        symbols = []
        for value, count in enumerate(m.counts):
            symbols.extend([value] * count)
        self.configs: list[Config] = sorted(set(permutations(symbols)))
        self.index: dict[Config, int] = {c: i for i, c in enumerate(self.configs)}

    @property
    def dim(self) -> int:
        return len(self.configs)

    def __iter__(self) -> Iterator[Config]:
        return iter(self.configs)


def cyclic_shift(c: Config) -> Config:
    """(s_1, ..., s_L) -> (s_L, s_1, ..., s_{L-1})."""
    return (c[-1],) + c[:-1]


def local_markov(n: int) -> list[list[Poly]]:
    """Dense two-site generator on the basis |a,b> ordered lexicographically.

    Column |a,b| sends the pair to |b,a| at rate t^[a<b]; column sums
    vanish (probability conservation).
    """
    if n < 1:
        raise ValueError("need n >= 1")
    size = (n + 1) ** 2
    mat = [[P_ZERO] * size for _ in range(size)]
    for a in range(n + 1):
        for b in range(n + 1):
            if a == b:
                continue
            col = a * (n + 1) + b
            row = b * (n + 1) + a
            rate = Poly((0, 1)) if a < b else P_ONE
            mat[row][col] = mat[row][col] + rate
            mat[col][col] = mat[col][col] - rate
    return mat


class SparseMatrixRF:
    """Sparse square matrix over rational functions; absent entry is zero."""

    def __init__(self, dim: int):
        self.dim = dim
        self.entries: dict[tuple[int, int], RatFunc] = {}

    def add(self, row: int, col: int, value: RatFunc) -> None:
        if not value:
            return
        key = (row, col)
        cur = self.entries.get(key)
        new = value if cur is None else cur + value
        if new:
            self.entries[key] = new
        elif cur is not None:
            del self.entries[key]

    def get(self, row: int, col: int) -> RatFunc:
        from .scalar import RF_ZERO

        return self.entries.get((row, col), RF_ZERO)

    def column_sums(self) -> list[RatFunc]:
        from .scalar import RF_ZERO

        sums = [RF_ZERO] * self.dim
        for (_, col), v in self.entries.items():
            sums[col] = sums[col] + v
        return sums


def markov_sector(m: Multiplicity, basis: Optional[SectorBasis] = None) -> SparseMatrixRF:
    """Markov matrix restricted to the sector of content m (cyclic wrap)."""
    if basis is None:
        basis = SectorBasis(m)
    L = m.L
    mat = SparseMatrixRF(basis.dim)
    mat.basis = basis
    rf_t = RatFunc(Poly((0, 1)))
    for col, sigma in enumerate(basis.configs):
        for i in range(L):
            a, b = sigma[i], sigma[(i + 1) % L]
            if a == b:
                continue
            target = list(sigma)
            target[i], target[(i + 1) % L] = b, a
            rate = rf_t if a < b else RF_ONE
            mat.add(basis.index[tuple(target)], col, rate)
            mat.add(col, col, -rate)
    return mat


# ---------------------------------------------------------------------------
# exact kernel solver

#: above this sector dimension the solver works on the cyclic-orbit
#: quotient (stationary vectors are translation invariant) and then
#: certifies H v = 0 exactly on the full sector
_FULL_SOLVE_LIMIT = 48


def _kernel_vector(rows: list[dict[int, RatFunc]], dim: int) -> list[RatFunc]:
    """Unique (up to scale) kernel vector of the row system, else KernelError.

    Exact elimination over the rational-function field, organized
    fraction-free: rows are cleared to integer polynomials and reduced
    by Bareiss pivoting (lowest-degree pivot, exact divisions by the
    previous pivot), after which the single free unknown is
    back-substituted over the field.
    """
    from .scalar import RF_ZERO

    mat: list[list[Poly]] = []
    for row in rows:
        den = P_ONE
        for v in row.values():
            den = poly_lcm(den, v.den)
        mat.append(
            [
                (row[c].num * (den // row[c].den)) if c in row else P_ZERO
                for c in range(dim)
            ]
        )
    nrows = len(mat)
    col_perm = list(range(dim))
    prev = P_ONE
    rank = 0
    for k in range(min(nrows, dim)):
        best = None
        for i in range(k, nrows):
            for j in range(k, dim):
                p = mat[i][j]
                if p.is_zero():
                    continue
                key = (p.degree, i, j)
                if best is None or key < best:
                    best = (p.degree, i, j)
        if best is None:
            break
        _, bi, bj = best
        mat[k], mat[bi] = mat[bi], mat[k]
        if bj != k:
            for r in mat:
                r[k], r[bj] = r[bj], r[k]
            col_perm[k], col_perm[bj] = col_perm[bj], col_perm[k]
        piv = mat[k][k]
        for i in range(k + 1, nrows):
            head = mat[i][k]
            for j in range(k + 1, dim):
                num = piv * mat[i][j] - head * mat[k][j]
                q, r = num.divmod(prev)
                if not r.is_zero():
                    raise AssertionError("fraction-free division left a remainder")
                mat[i][j] = q
            mat[i][k] = P_ZERO
        prev = piv
        rank = k + 1
    if rank != dim - 1:
        raise KernelError(f"kernel dimension {dim - rank} != 1")
    vec_perm: list[RatFunc] = [RF_ZERO] * dim
    vec_perm[dim - 1] = RF_ONE
    for i in range(rank - 1, -1, -1):
        acc = RF_ZERO
        for j in range(i + 1, dim):
            if not mat[i][j].is_zero() and vec_perm[j]:
                acc = acc + RatFunc(mat[i][j]) * vec_perm[j]
        vec_perm[i] = -(acc / RatFunc(mat[i][i]))
    vec = [RF_ZERO] * dim
    for pos, col in enumerate(col_perm):
        vec[col] = vec_perm[pos]
    return vec


def _rows_of(mat: SparseMatrixRF) -> list[dict[int, RatFunc]]:
    rows: list[dict[int, RatFunc]] = [dict() for _ in range(mat.dim)]
    for (r, c), v in mat.entries.items():
        rows[r][c] = v
    return rows


def _orbit_reduced_kernel(
    mat: SparseMatrixRF, basis: SectorBasis
) -> list[RatFunc]:
    """Solve on the cyclic-orbit quotient and expand to the full sector."""
    rep_of: dict[Config, Config] = {}
    for sigma in basis.configs:
        if sigma in rep_of:
            continue
        orbit = set()
        cur = sigma
        while cur not in orbit:
            orbit.add(cur)
            cur = cyclic_shift(cur)
        rep = min(orbit)
        for member in orbit:
            rep_of[member] = rep
    reps = sorted(set(rep_of.values()))
    rep_index = {r: i for i, r in enumerate(reps)}

    reduced: list[dict[int, RatFunc]] = []
    for rep in reps:
        r = basis.index[rep]
        row: dict[int, RatFunc] = {}
        for col, sigma in enumerate(basis.configs):
            v = mat.entries.get((r, col))
            if v is None:
                continue
            j = rep_index[rep_of[sigma]]
            cur = row.get(j)
            new = v if cur is None else cur + v
            if new:
                row[j] = new
            elif cur is not None:
                del row[j]
        reduced.append(row)
    wvec = _kernel_vector(reduced, len(reps))
    return [wvec[rep_index[rep_of[sigma]]] for sigma in basis.configs]


def _residual_is_zero(mat: SparseMatrixRF, vec: list[RatFunc]) -> bool:
    from .scalar import RF_ZERO

    sums = [RF_ZERO] * mat.dim
    for (r, c), v in mat.entries.items():
        if vec[c]:
            sums[r] = sums[r] + v * vec[c]
    return all(not s for s in sums)


def canonicalize_values(
    basis: SectorBasis, values: dict[Config, RatFunc]
) -> dict[Config, Poly]:
    """Canonical normalization used for all cross-method comparisons.

    Scales the vector so that every entry is a polynomial in t with
    integer coefficients, the collective coefficient gcd is 1, and the
    entry at the lexicographically smallest configuration has positive
    leading coefficient.
    """
    vals = [values.get(c) or RatFunc(P_ZERO) for c in basis.configs]
    if all(v.is_zero() for v in vals):
        raise ValueError("cannot canonicalize the zero vector")
    den = P_ONE
    for v in vals:
        den = poly_lcm(den, v.den)
    polys = [v.num * (den // v.den) for v in vals]
    g = P_ZERO
    for p in polys:
        if p.is_zero():
            continue
        g = p.monic() if g.is_zero() else poly_gcd(g, p)
        if g.degree == 0:
            break
    if g.degree > 0:
        polys = [p // g for p in polys]
    num_gcd, den_lcm = 0, 1
    for p in polys:
        for c in p.coeffs:
            num_gcd = gcd(num_gcd, c.numerator)
            den_lcm = lcm(den_lcm, c.denominator)
    content = Fraction(num_gcd, den_lcm)
    polys = [p.scale(1 / content) for p in polys]
    lead = next(p for p in polys if not p.is_zero()).leading()
    if lead < 0:
        polys = [-p for p in polys]
    return dict(zip(basis.configs, polys))


def stationary_kernel(m: Multiplicity) -> dict[Config, Poly]:
    """The unique stationary vector of the sector, canonically normalized.

    Exact Gaussian elimination over the rational-function field; large
    sectors are first reduced by translation invariance and the result
    is certified by an exact H v = 0 check on the full sector.
    """
    basis = SectorBasis(m)
    mat = markov_sector(m, basis)
    if basis.dim == 1:
        return {basis.configs[0]: P_ONE}
    if basis.dim <= _FULL_SOLVE_LIMIT:
        vec = _kernel_vector(_rows_of(mat), basis.dim)
    else:
        vec = _orbit_reduced_kernel(mat, basis)
        if not _residual_is_zero(mat, vec):
            raise KernelError("orbit-reduced solution failed exact residual check")
    values = dict(zip(basis.configs, vec))
    return canonicalize_values(basis, values)


# ---------------------------------------------------------------------------
# stochastic oracle


def gillespie(
    m: Multiplicity,
    t_value: float,
    horizon: float,
    burn_in: float = 0.0,
    seed: int = 0,
    stats: Optional[dict] = None,
) -> dict[Config, float]:
    """Continuous-time simulation; returns time-averaged occupation fractions.

    Adjacent unequal pairs (a, b) swap at rate t_value**[a < b]; waiting
    times are exponential.  Occupation is accumulated over the window
    (burn_in, burn_in + horizon].  When a `stats` dict is supplied, the
    executed event count is recorded under "events".
    """
    if t_value < 0:
        raise ValueError("t_value must be nonnegative")
    rng = random.Random(seed)
    basis = SectorBasis(m)
    L = m.L
    state = list(basis.configs[0])
    end = burn_in + horizon
    occ: dict[Config, float] = {}
    now = 0.0
    events = 0
    while now < end:
        moves = []
        total = 0.0
        for i in range(L):
            a, b = state[i], state[(i + 1) % L]
            if a == b:
                continue
            rate = t_value if a < b else 1.0
            if rate > 0.0:
                moves.append((i, rate))
                total += rate
        if total == 0.0:
            dwell = end - now
            nxt = end
        else:
            dwell = rng.expovariate(total)
            nxt = now + dwell
        overlap = min(nxt, end) - max(now, burn_in)
        if overlap > 0:
            key = tuple(state)
            occ[key] = occ.get(key, 0.0) + overlap
        if total == 0.0:
            break
        now = nxt
        events += 1
        pick = rng.uniform(0.0, total)
        acc = 0.0
        for i, rate in moves:
            acc += rate
            if pick <= acc:
                j = (i + 1) % L
                state[i], state[j] = state[j], state[i]
                break
    if stats is not None:
        stats["events"] = events
    return {c: w / horizon for c, w in occ.items()}
