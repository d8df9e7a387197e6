import random
from fractions import Fraction

import pytest

from asepx.asep_core import (
    KernelError,
    Multiplicity,
    SectorBasis,
    _kernel_vector,
    basic_multiplicities,
    canonicalize_values,
    cyclic_shift,
    gillespie,
    local_markov,
    markov_sector,
    stationary_kernel,
)
from asepx.scalar import Poly, RatFunc, random_point

from conftest import poly, rf


class TestLocalMarkov:
    def test_single_species_block(self):
        h = local_markov(1)
        # basis order |00>, |01>, |10>, |11>; active block on |01>, |10>
        assert h[1][1] == poly(0, -1) and h[2][1] == poly(0, 1)
        assert h[1][2] == poly(1) and h[2][2] == poly(-1)

    def test_equal_neighbors_are_frozen(self):
        for n in (1, 2, 3):
            h = local_markov(n)
            size = n + 1
            for a in range(size):
                col = a * size + a
                assert all(h[r][col].is_zero() for r in range(size * size))

    def test_two_species_entries(self):
        h = local_markov(2)
        idx = lambda a, b: 3 * a + b
        assert h[idx(1, 2)][idx(2, 1)] == poly(1)
        assert h[idx(2, 1)][idx(1, 2)] == poly(0, 1)

    def test_columns_conserve_probability(self):
        for n in (1, 2, 3):
            h = local_markov(n)
            size = (n + 1) ** 2
            for c in range(size):
                total = Poly()
                for r in range(size):
                    total = total + h[r][c]
                assert total.is_zero()


# the sector matrix printed for content (2, 1, 1) on four sites, in the
# source row order 0012, 0102, 1002, 0120, 1020, 0021, 1200, 0201, 0210,
# 2001, 2010, 2100 with A = -2t-1, B = -2t-2, C = -t-2
_PRINTED_ORDER = [
    "0012", "0102", "1002", "0120", "1020", "0021",
    "1200", "0201", "0210", "2001", "2010", "2100",
]
_PRINTED_MATRIX = [
    ["A", "1", "0", "0", "0", "1", "0", "0", "0", "0", "t", "0"],
    ["t", "B", "1", "1", "0", "0", "0", "0", "0", "0", "0", "t"],
    ["0", "t", "C", "0", "1", "0", "0", "0", "0", "t", "0", "0"],
    ["0", "t", "0", "A", "1", "0", "0", "0", "1", "0", "0", "0"],
    ["0", "0", "t", "t", "B", "1", "1", "0", "0", "0", "0", "0"],
    ["t", "0", "0", "0", "t", "C", "0", "1", "0", "0", "0", "0"],
    ["0", "0", "0", "0", "t", "0", "A", "1", "0", "0", "0", "1"],
    ["0", "0", "0", "0", "0", "t", "t", "B", "1", "1", "0", "0"],
    ["0", "0", "0", "t", "0", "0", "0", "t", "C", "0", "1", "0"],
    ["0", "0", "1", "0", "0", "0", "0", "t", "0", "A", "1", "0"],
    ["1", "0", "0", "0", "0", "0", "0", "0", "t", "t", "B", "1"],
    ["0", "1", "0", "0", "0", "0", "t", "0", "0", "0", "t", "C"],
]
_SYMBOLS = {
    "0": Poly(),
    "1": poly(1),
    "t": poly(0, 1),
    "A": poly(-1, -2),
    "B": poly(-2, -2),
    "C": poly(-2, -1),
}


def _config(s):
    return tuple(int(ch) for ch in s)


class TestMarkovSector:
    def test_printed_twelve_by_twelve(self):
        m = Multiplicity((2, 1, 1))
        basis = SectorBasis(m)
        mat = markov_sector(m, basis)
        order = [basis.index[_config(s)] for s in _PRINTED_ORDER]
        for r in range(12):
            for c in range(12):
                expected = _SYMBOLS[_PRINTED_MATRIX[r][c]]
                got = mat.get(order[r], order[c])
                assert got == RatFunc(expected), (r, c)

    def test_two_site_ring(self):
        # both bonds act on the same pair, so rates double
        m = Multiplicity((1, 1))
        mat = markov_sector(m)
        t1 = rf(poly(1, 1))
        assert mat.get(0, 0) == -t1 and mat.get(1, 1) == -t1
        assert mat.get(0, 1) == t1 and mat.get(1, 0) == t1

    def test_frozen_sector_is_zero_matrix(self):
        mat = markov_sector(Multiplicity((4, 0, 0)))
        assert mat.dim == 1 and not mat.entries

    def test_column_sums_vanish(self):
        for counts in [(2, 1, 1), (1, 1, 1), (1, 2, 1, 1)]:
            mat = markov_sector(Multiplicity(counts))
            assert all(not s for s in mat.column_sums())

    def test_commutes_with_cyclic_shift(self):
        # P H = H P is equivalent to H[perm(r), perm(c)] = H[r, c]
        m = Multiplicity((2, 1, 1))
        basis = SectorBasis(m)
        mat = markov_sector(m, basis)
        perm = {
            basis.index[c]: basis.index[cyclic_shift(c)] for c in basis.configs
        }
        conjugated = {
            (perm[r], perm[c]): v for (r, c), v in mat.entries.items()
        }
        assert conjugated == mat.entries


class TestCyclicShift:
    def test_fixture(self):
        assert cyclic_shift((0, 1, 2)) == (2, 0, 1)

    def test_order_L(self):
        c = (0, 1, 2, 2, 1)
        out = c
        for _ in range(len(c)):
            out = cyclic_shift(out)
        assert out == c

    def test_constant_fixed_point(self):
        assert cyclic_shift((3, 3, 3)) == (3, 3, 3)


def _xi_expand(L, xi):
    """Cyclic-class expansion of a seed vector {config string: coeffs}."""
    out = {}
    for s, coeffs in xi.items():
        c = _config(s)
        for _ in range(L):
            out[c] = out.get(c, Poly()) + poly(*coeffs)
            c = cyclic_shift(c)
    return out


class TestStationaryKernel:
    def test_three_site_fixture(self):
        got = stationary_kernel(Multiplicity((1, 1, 1)))
        expected = _xi_expand(3, {"012": (2, 1), "021": (1, 2)})
        assert got == expected

    def test_four_site_fixture(self):
        got = stationary_kernel(Multiplicity((2, 1, 1)))
        expected = _xi_expand(
            4, {"0012": (3, 1), "0102": (2, 2), "1002": (1, 3)}
        )
        assert got == expected

    def test_totally_asymmetric_limit(self):
        # at t = 0 the three-site state reduces to weights (2, 1)
        got = stationary_kernel(Multiplicity((1, 1, 1)))
        assert got[(0, 1, 2)].eval(Fraction(0)) == 2
        assert got[(0, 2, 1)].eval(Fraction(0)) == 1

    def test_translation_invariance(self):
        for counts in [(2, 1, 1), (1, 2, 1), (1, 1, 1, 1)]:
            got = stationary_kernel(Multiplicity(counts))
            for c, v in got.items():
                assert got[cyclic_shift(c)] == v

    def test_interpolation_oracle(self):
        # independent reconstruction: adjugate-column kernel of the
        # numeric sector matrix at sampled points, interpolated to a
        # polynomial vector and canonically normalized
        m = Multiplicity((3, 1, 1))
        basis = SectorBasis(m)
        mat = markov_sector(m, basis)
        dim = basis.dim
        points = [random_point(900 + k) for k in range(dim + 1)]
        samples = []
        for t0 in points:
            dense = [[Fraction(0)] * dim for _ in range(dim)]
            for (r, c), v in mat.entries.items():
                dense[r][c] = v.eval(t0)
            samples.append(_adjugate_column(dense, 0))
        interp = [
            _lagrange(points, [s[i] for s in samples]) for i in range(dim)
        ]
        values = {
            basis.configs[i]: RatFunc(interp[i]) for i in range(dim)
        }
        oracle = canonicalize_values(basis, values)
        assert oracle == stationary_kernel(m)

    def test_kernel_dimension_guard(self):
        zero_rows = [dict(), dict()]
        with pytest.raises(KernelError):
            _kernel_vector(zero_rows, 2)

    def test_full_and_reduced_paths_agree(self):
        import asepx.asep_core as core

        m = Multiplicity((1, 2, 1))
        full = stationary_kernel(m)
        old = core._FULL_SOLVE_LIMIT
        try:
            core._FULL_SOLVE_LIMIT = 0
            reduced = stationary_kernel(m)
        finally:
            core._FULL_SOLVE_LIMIT = old
        assert full == reduced


def _adjugate_column(mat, row):
    """Kernel vector of a singular matrix via signed minors of one row."""
    dim = len(mat)
    out = []
    for i in range(dim):
        minor = [
            [mat[r][c] for c in range(dim) if c != i]
            for r in range(dim)
            if r != row
        ]
        det = _det_fraction(minor)
        out.append(det if (row + i) % 2 == 0 else -det)
    assert any(out), "adjugate column vanished; pick another row"
    return out


def _det_fraction(mat):
    mat = [row[:] for row in mat]
    dim = len(mat)
    det = Fraction(1)
    for k in range(dim):
        piv = next((i for i in range(k, dim) if mat[i][k]), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            mat[k], mat[piv] = mat[piv], mat[k]
            det = -det
        det *= mat[k][k]
        inv = 1 / mat[k][k]
        for i in range(k + 1, dim):
            if mat[i][k]:
                f = mat[i][k] * inv
                for j in range(k, dim):
                    mat[i][j] -= f * mat[k][j]
    return det


def _lagrange(xs, ys):
    """Interpolating polynomial through exact points (xs, ys)."""
    total = Poly()
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if yi == 0:
            continue
        num = poly(yi)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            num = num * poly(-xj, 1).scale(Fraction(1, xi - xj))
        total = total + num
    return total


class TestCanonicalize:
    def test_scaling_invariance(self):
        m = Multiplicity((1, 1, 1))
        basis = SectorBasis(m)
        base = {c: rf(poly(1, k + 1)) for k, c in enumerate(basis.configs)}
        scale = rf(poly(3, 0, 7), poly(2, 1))
        scaled = {c: v * scale for c, v in base.items()}
        assert canonicalize_values(basis, base) == canonicalize_values(
            basis, scaled
        )

    def test_sign_and_content(self):
        m = Multiplicity((1, 1))
        basis = SectorBasis(m)
        values = {c: rf(poly(Fraction(-2, 3))) for c in basis.configs}
        canon = canonicalize_values(basis, values)
        assert all(p == poly(1) for p in canon.values())


class TestBasicMultiplicities:
    def test_counts(self):
        assert len(list(basic_multiplicities(2, 4))) == 3
        assert len(list(basic_multiplicities(3, 6))) == 10

    def test_all_basic_and_correct_length(self):
        for m in basic_multiplicities(3, 6):
            assert m.is_basic and m.L == 6 and m.n == 3


class TestGillespie:
    def test_symmetric_single_species_uniform(self):
        m = Multiplicity((2, 1))
        runs = [
            gillespie(m, 1.0, horizon=400.0, burn_in=20.0, seed=s)
            for s in range(10)
        ]
        basis = SectorBasis(m)
        for c in basis.configs:
            vals = [r.get(c, 0.0) for r in runs]
            mean = sum(vals) / len(vals)
            se = (sum((v - mean) ** 2 for v in vals) / (len(vals) - 1)) ** 0.5
            se /= len(vals) ** 0.5
            assert abs(mean - 1 / 3) <= 3 * se + 1e-9

    def test_three_species_ratio(self):
        # class mass ratio |012>-type to |021>-type is 2.5/2 at t = 1/2
        m = Multiplicity((1, 1, 1))
        ratios = []
        for s in range(10):
            dist = gillespie(m, 0.5, horizon=600.0, burn_in=30.0, seed=s)
            a = sum(
                dist.get(c, 0.0)
                for c in [(0, 1, 2), (2, 0, 1), (1, 2, 0)]
            )
            b = sum(
                dist.get(c, 0.0)
                for c in [(0, 2, 1), (1, 0, 2), (2, 1, 0)]
            )
            ratios.append(a / b)
        mean = sum(ratios) / len(ratios)
        se = (sum((v - mean) ** 2 for v in ratios) / (len(ratios) - 1)) ** 0.5
        se /= len(ratios) ** 0.5
        assert abs(mean - 1.25) <= 3 * se + 1e-9

    def test_frozen_sector(self):
        dist = gillespie(Multiplicity((3, 0)), 0.7, horizon=10.0, seed=4)
        assert dist == {(0, 0, 0): pytest.approx(1.0)}

    def test_total_time_is_normalized(self):
        dist = gillespie(Multiplicity((1, 1, 1)), 0.5, horizon=50.0, seed=1)
        assert sum(dist.values()) == pytest.approx(1.0)
