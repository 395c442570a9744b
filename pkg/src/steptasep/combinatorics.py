"""Exact combinatorics behind the tagged-particle law.

01 matrices with Bernoulli columns, the left-down last-passage quantity, the
dual RSK correspondence, growth of Young diagrams, Schur-function weights, and
brute-force enumeration oracles. Everything is exact: probabilities come out
as fractions.Fraction whenever the stay rates are rational, so this module is
the ground truth the determinant machinery is checked against.

Conventions. A matrix is a tuple of N row-tuples of length M with entries in
{0, 1}. Column c (0-based) carries the stay indicators of particle M - c
(1-based label), i.e. entry (i, M+1-j) is 1 with probability q_j. Entry 1
means "stay", entry 0 means "try to hop".
"""

from __future__ import annotations

import itertools
from bisect import bisect_left, bisect_right
from fractions import Fraction

import numpy as np

# Hard guard for 2^(N*M) matrix enumerations.
ENUMERATION_CELL_LIMIT = 22

# Shapes with at most this many cells are evaluated by SSYT enumeration;
# larger ones go through the Jacobi-Trudi determinant.
SSYT_CELL_LIMIT = 12


def as_fraction(x):
    """Exact rational from an int, Fraction, string, or decimal-literal float.

    Floats are converted through repr so 0.3 means 3/10, not the binary
    double closest to it. Oracle probabilities stay exact that way.
    """
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


# ---------------------------------------------------------------------------
# 01 matrices and the tagged-particle trajectory
# ---------------------------------------------------------------------------

def sample_matrix01(n_rows, n_cols, rates, seed):
    """Draw a random 01 matrix whose column M+1-j is Bernoulli(q_j).

    Parameters
    ----------
    n_rows, n_cols : int
        Matrix dimensions N, M.
    rates : sequence of float
        Stay probabilities q_1..q_M (particle labels, front first).
    seed : int or numpy Generator
        Randomness source.

    Returns
    -------
    ndarray of shape (n_rows, n_cols) with entries in {0, 1}.
    """
    if len(rates) != n_cols:
        raise ValueError(f"need {n_cols} rates, got {len(rates)}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    column_rates = np.asarray(rates, dtype=float)[::-1]
    return (rng.random((n_rows, n_cols)) < column_rates).astype(np.int8)


def all_matrices(n_rows, n_cols):
    """Yield every 01 matrix of the given size as a tuple of row tuples."""
    if n_rows * n_cols > ENUMERATION_CELL_LIMIT:
        raise ValueError(f"{n_rows}x{n_cols} exceeds the enumeration guard")
    for code in range(1 << (n_rows * n_cols)):
        yield tuple(
            tuple((code >> (r * n_cols + c)) & 1 for c in range(n_cols))
            for r in range(n_rows)
        )


def matrix_probability(bits, rates):
    """Exact probability of one matrix under the Bernoulli column law."""
    n_rows = len(bits)
    n_cols = len(bits[0]) if n_rows else len(rates)
    prob = Fraction(1)
    for c in range(n_cols):
        q = as_fraction(rates[n_cols - 1 - c])
        ones = sum(bits[r][c] for r in range(n_rows))
        prob *= q**ones * (1 - q) ** (n_rows - ones)
    return prob


def trajectory_from_matrix(bits):
    """Evolve the step initial condition through a 01 matrix.

    Particle j reads entry (i, M+1-j) at the step from time i+j-2 to i+j-1;
    a blocked particle stays regardless of the entry. Rows beyond N never
    influence the tagged particle up to time N+M-1.

    Returns
    -------
    (path, stays) : (list of int, int)
        path[t] is the tagged position L(t, M) for t = 0..N+M-1, and
        stays = N - L(N+M-1, M) counts the tagged particle's stay steps.
    """
    n_rows = len(bits)
    n_cols = len(bits[0]) if n_rows else 0
    if n_cols == 0:
        raise ValueError("matrix must have at least one column")
    pos = [n_cols - j for j in range(1, n_cols + 1)]
    path = [0]
    for t in range(n_rows + n_cols - 1):
        front = pos[:]
        for j in range(1, n_cols + 1):
            r = t - j + 1
            stay = bits[r][n_cols - j] if 0 <= r < n_rows else 0
            blocked = j > 1 and front[j - 2] == pos[j - 1] + 1
            if not stay and not blocked:
                pos[j - 1] += 1
        path.append(pos[n_cols - 1])
    return path, n_rows - path[-1]


# ---------------------------------------------------------------------------
# Left-down last passage
# ---------------------------------------------------------------------------

def longest_left_down_path(bits):
    """Maximum number of 1-entries on a path with strictly increasing row
    indices and weakly decreasing column indices. O(N*M)."""
    n_rows = len(bits)
    n_cols = len(bits[0]) if n_rows else 0
    best = [0] * n_cols
    for r in range(n_rows):
        row = bits[r]
        new = list(best)
        suffix = 0
        for c in range(n_cols - 1, -1, -1):
            if best[c] > suffix:
                suffix = best[c]
            if row[c] and suffix + 1 > new[c]:
                new[c] = suffix + 1
        best = new
    return max(best, default=0)


def column_word(bits):
    """Second row of the two-line array: column indices (1-based) of the
    1-entries, rows top to bottom, left to right within a row."""
    return [c + 1 for row in bits for c, v in enumerate(row) if v]


def longest_nonincreasing_subsequence(word):
    """Quadratic DP; independent oracle for longest_left_down_path."""
    best = []
    for i, x in enumerate(word):
        best.append(1 + max((best[j] for j in range(i) if word[j] >= x), default=0))
    return max(best, default=0)


# ---------------------------------------------------------------------------
# Dual and normal RSK
# ---------------------------------------------------------------------------

def _insert_dual(rows, x):
    """Dual insertion: x displaces the leftmost entry >= x. Returns the row
    index where the cascade ends (a new cell appears there)."""
    r = 0
    while r < len(rows):
        row = rows[r]
        idx = bisect_left(row, x)
        if idx == len(row):
            row.append(x)
            return r
        row[idx], x = x, row[idx]
        r += 1
    rows.append([x])
    return len(rows) - 1


def _insert_normal(rows, x):
    """Normal insertion: x displaces the leftmost entry > x."""
    r = 0
    while r < len(rows):
        row = rows[r]
        idx = bisect_right(row, x)
        if idx == len(row):
            row.append(x)
            return r
        row[idx], x = x, row[idx]
        r += 1
    rows.append([x])
    return len(rows) - 1


def dual_rsk(bits):
    """Dual RSK of a 01 matrix.

    Returns
    -------
    (p, q) : pair of list-of-lists tableaux of equal shape. Rows of p are
        strictly increasing (its transpose is semistandard); q is
        semistandard and records which input row created each cell.
    """
    p_rows: list[list[int]] = []
    q_rows: list[list[int]] = []
    for i, row in enumerate(bits, start=1):
        for c, v in enumerate(row):
            if v:
                r = _insert_dual(p_rows, c + 1)
                if r == len(q_rows):
                    q_rows.append([])
                q_rows[r].append(i)
    return p_rows, q_rows


def normal_rsk(word):
    """Insertion tableau of the normal RSK algorithm applied to a word."""
    rows: list[list[int]] = []
    for x in word:
        _insert_normal(rows, x)
    return rows


def tableau_shape(rows):
    return tuple(len(r) for r in rows)


def transpose_tableau(rows):
    if not rows:
        return []
    return [
        [rows[r][c] for r in range(len(rows)) if c < len(rows[r])]
        for c in range(len(rows[0]))
    ]


def conjugate(shape):
    """Transpose of a Young diagram given as weakly decreasing parts."""
    shape = tuple(p for p in shape if p > 0)
    if not shape:
        return ()
    return tuple(sum(1 for p in shape if p > c) for c in range(shape[0]))


def first_column_identity(bits):
    """First-column length of the dual-RSK shape vs the left-down maximum.

    Returns
    -------
    (first_column, path_max, agree) where agree also requires the symmetry
    p-transpose == normal RSK of the reversed column word.
    """
    p, _q = dual_rsk(bits)
    shape = tableau_shape(p)
    first_column = conjugate(shape)[0] if shape else 0
    path_max = longest_left_down_path(bits)
    symmetric = transpose_tableau(p) == normal_rsk(column_word(bits)[::-1])
    return first_column, path_max, (first_column == path_max and symmetric)


def growth_shapes(bits):
    """Diagram sequence: shape of the dual RSK of the first i rows, i=1..N."""
    p_rows: list[list[int]] = []
    shapes = []
    for row in bits:
        for c, v in enumerate(row):
            if v:
                _insert_dual(p_rows, c + 1)
        shapes.append(tableau_shape(p_rows))
    return shapes


# ---------------------------------------------------------------------------
# Schur polynomials (exact)
# ---------------------------------------------------------------------------

def is_horizontal_strip(lam, mu):
    """True when mu is contained in lam and lam/mu has no two cells in the
    same column (interlacing lam_1 >= mu_1 >= lam_2 >= mu_2 >= ...)."""
    lam = tuple(p for p in lam if p > 0)
    mu = tuple(p for p in mu if p > 0)
    if len(mu) > len(lam):
        return False
    for i, part in enumerate(lam):
        m = mu[i] if i < len(mu) else 0
        if m > part:
            return False
        if i + 1 < len(lam) and lam[i + 1] > m:
            return False
    return True


def _ssyt_sum(shape, xs):
    """Sum of content monomials over all SSYT of the given shape with entries
    in 1..len(xs). Backtracking over cells in row-major order."""
    cells = [(r, c) for r, ln in enumerate(shape) for c in range(ln)]
    n = len(xs)
    filling = [[0] * ln for ln in shape]

    def extend(k):
        if k == len(cells):
            return Fraction(1) * _content_product(filling, xs)
        r, c = cells[k]
        lo = 1
        if c > 0:
            lo = max(lo, filling[r][c - 1])
        if r > 0:
            lo = max(lo, filling[r - 1][c] + 1)
        total = Fraction(0)
        for v in range(lo, n + 1):
            filling[r][c] = v
            total += extend(k + 1)
        filling[r][c] = 0
        return total

    return extend(0)


def _content_product(filling, xs):
    out = Fraction(1)
    for row in filling:
        for v in row:
            out *= xs[v - 1]
    return out


def _complete_homogeneous_table(max_degree, xs):
    """h_0..h_max for the variable list xs, exact."""
    table = [Fraction(0)] * (max_degree + 1)
    table[0] = Fraction(1)
    for x in xs:
        for d in range(1, max_degree + 1):
            table[d] += x * table[d - 1]
    return table


def fraction_determinant(mat):
    """Exact determinant by Gaussian elimination with Fraction entries."""
    n = len(mat)
    mat = [row[:] for row in mat]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if mat[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            mat[col], mat[pivot] = mat[pivot], mat[col]
            det = -det
        det *= mat[col][col]
        inv = 1 / mat[col][col]
        for r in range(col + 1, n):
            if mat[r][col] == 0:
                continue
            factor = mat[r][col] * inv
            for c in range(col, n):
                mat[r][c] -= factor * mat[col][c]
    return det


def _schur_jacobi_trudi(shape, xs):
    """s_shape as det(h_{shape_i - i + j}); zero when the shape needs more
    rows than there are variables."""
    shape = tuple(p for p in shape if p > 0)
    if not shape:
        return Fraction(1)
    n = len(shape)
    table = _complete_homogeneous_table(shape[0] + n, xs)

    def h(d):
        if d < 0:
            return Fraction(0)
        return table[d]

    mat = [[h(shape[i] - (i + 1) + (j + 1)) for j in range(n)] for i in range(n)]
    return fraction_determinant(mat)


def schur_polynomial(shape, xs):
    """Exact Schur polynomial s_shape(xs).

    SSYT enumeration for small shapes, Jacobi-Trudi determinant otherwise;
    the two routes are cross-checked in the test suite.
    """
    shape = tuple(p for p in shape if p > 0)
    xs = [as_fraction(x) for x in xs]
    if len(shape) > len(xs):
        return Fraction(0)
    if sum(shape) <= SSYT_CELL_LIMIT:
        return _ssyt_sum(shape, xs)
    return _schur_jacobi_trudi(shape, xs)


# ---------------------------------------------------------------------------
# The growth-sequence measure
# ---------------------------------------------------------------------------

def schur_weight(seq, rates):
    """Exact probability of a growth sequence of Young diagrams.

    The weight is prod_i (1-q_i)^N times the Schur polynomial of the final
    conjugate shape in the variables p_i = q_i/(1-q_i), provided every
    consecutive difference (starting from the empty diagram) is a horizontal
    strip; otherwise the sequence is unreachable and the weight is 0.
    """
    qs = [as_fraction(q) for q in rates]
    n_steps = len(seq)
    prev = ()
    for lam in seq:
        if not is_horizontal_strip(lam, prev):
            return Fraction(0)
        prev = lam
    ps = [q / (1 - q) for q in reversed(qs)]
    weight = schur_polynomial(conjugate(seq[-1]), ps)
    for q in qs:
        weight *= (1 - q) ** n_steps
    return weight


def enumerate_growth_law(n_rows, n_cols, rates):
    """Exact pushforward law of growth sequences over all 2^(N*M) matrices."""
    law: dict[tuple, Fraction] = {}
    for bits in all_matrices(n_rows, n_cols):
        key = tuple(growth_shapes(bits))
        law[key] = law.get(key, Fraction(0)) + matrix_probability(bits, rates)
    return law


def all_growth_sequences(n_rows, max_cols):
    """Every sequence of diagrams reachable with N rows and M columns:
    nested, horizontal strips, width at most M."""

    def diagrams_above(mu):
        # all lam with mu <= lam, lam/mu a horizontal strip, lam_1 <= max_cols
        mu = tuple(mu)
        rows = len(mu) + 1
        choices = []
        for i in range(rows):
            hi = mu[i - 1] if i > 0 else max_cols
            lo = mu[i] if i < len(mu) else 0
            choices.append(range(lo, hi + 1))
        for parts in itertools.product(*choices):
            lam = tuple(p for p in parts if p > 0)
            if all(parts[i] >= parts[i + 1] for i in range(rows - 1)):
                yield lam

    seqs = [[]]
    for _ in range(n_rows):
        seqs = [s + [lam] for s in seqs for lam in diagrams_above(s[-1] if s else ())]
    return [tuple(s) for s in seqs]


# ---------------------------------------------------------------------------
# Brute-force law of the tagged path
# ---------------------------------------------------------------------------

def enumerate_exact_distribution(n_rows, n_cols, rates):
    """Exact joint law of the whole tagged path (L(0), ..., L(N+M-1)).

    Returns a dict mapping path tuples to Fraction probabilities. This is the
    oracle the determinant formula is compared against.
    """
    law: dict[tuple, Fraction] = {}
    for bits in all_matrices(n_rows, n_cols):
        path, _stays = trajectory_from_matrix(bits)
        key = tuple(path)
        law[key] = law.get(key, Fraction(0)) + matrix_probability(bits, rates)
    return law


def prob_path_at_least(law, constraints):
    """P(L(t_i) >= l_i for all i) under an enumerated path law."""
    total = Fraction(0)
    for path, p in law.items():
        if all(path[t] >= level for t, level in constraints):
            total += p
    return total


# ---------------------------------------------------------------------------
# Geometric-entry variant (arrival times / currents)
# ---------------------------------------------------------------------------

def sample_geometric_matrix(n_rows, n_cols, rates, seed):
    """Matrix of geometric entries, column j with P(k) = (1-q_j) q_j^k."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    qs = np.asarray(rates, dtype=float)
    if np.any(qs >= 1) or np.any(qs < 0):
        raise ValueError("geometric parameters must lie in [0, 1)")
    return rng.geometric(p=1.0 - qs, size=(n_rows, n_cols)) - 1


def last_passage_sum(matrix):
    """Max entry sum over right/down paths from the top-left to the
    bottom-right corner. O(N*M)."""
    matrix = np.asarray(matrix)
    n_rows, n_cols = matrix.shape
    dp = np.zeros((n_rows, n_cols), dtype=np.int64)
    for i in range(n_rows):
        for j in range(n_cols):
            best = 0
            if i > 0:
                best = dp[i - 1, j]
            if j > 0 and dp[i, j - 1] > best:
                best = dp[i, j - 1]
            dp[i, j] = matrix[i, j] + best
    return int(dp[-1, -1])


def arrival_time(matrix):
    """Time by which the tagged particle has moved N sites: path maximum
    plus the N+M-1 deterministic steps."""
    n_rows, n_cols = np.asarray(matrix).shape
    return last_passage_sum(matrix) + n_rows + n_cols - 1


def geometric_first_row(matrix):
    """First-row length of the normal RSK shape of the entry multiset word."""
    matrix = np.asarray(matrix)
    word = []
    for i in range(matrix.shape[0]):
        for j in range(matrix.shape[1]):
            word.extend([j + 1] * int(matrix[i, j]))
    rows = normal_rsk(word)
    return len(rows[0]) if rows else 0


def geometric_growth_identity(matrix):
    """Per-sample identity: RSK first row equals the last-passage maximum."""
    return geometric_first_row(matrix) == last_passage_sum(matrix)
