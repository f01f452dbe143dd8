"""Reference oracles and group actions.

The permanent is computed two independent ways (Ryser and, for n <= 6, the
naive permutation expansion) and the two routes are compared at runtime; a
disagreement is an internal error worth crashing on.  The E-function oracle
multiplies determinants of all selected m x m submatrices of a block
assignment, one per choice vector sigma in [k]^m.

Group elements are small frozen descriptors.  Left action means row
operations (square or block, acting by an nrows-sized matrix); right action
means column operations on squares, and the wreath-style column permutations
(choice swaps/cycles per position, even position 3-cycles) on blocks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceeded, ShapeMismatch, SizeLimit, UsageError
from .matrices import BLOCK, SQUARE, MatrixAssignment

_NAIVE_CAP = 6


def _rows_of(M) -> tuple[tuple, ...]:
    if isinstance(M, MatrixAssignment):
        if M.shape[0] != SQUARE:
            raise UsageError("need a square assignment")
        return M.entries
    rows = tuple(tuple(r) for r in M)
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise UsageError("need a nonempty square matrix")
    return rows


def _naive_permanent(rows):
    n = len(rows)
    acc = None
    for perm in itertools.permutations(range(n)):
        term = rows[0][perm[0]]
        for i in range(1, n):
            term = term * rows[i][perm[i]]
        acc = term if acc is None else acc + term
    return acc


def _ryser_permanent(rows):
    # (-1)^n * sum over nonempty S of (-1)^|S| prod_i sum_{j in S} a_ij
    n = len(rows)
    acc = None
    for mask in range(1, 1 << n):
        cols = [j for j in range(n) if mask >> j & 1]
        term = None
        for i in range(n):
            s = rows[i][cols[0]]
            for j in cols[1:]:
                s = s + rows[i][j]
            term = s if term is None else term * s
        if len(cols) % 2 == 1:
            term = -term
        acc = term if acc is None else acc + term
    if n % 2 == 1:
        acc = -acc
    return acc


def permanent(M, limit: int = 12):
    """Exact permanent; Ryser route, cross-checked naively for n <= 6."""
    rows = _rows_of(M)
    n = len(rows)
    if n > limit:
        raise SizeLimit(f"permanent of order {n} exceeds the cap {limit}")
    val = _ryser_permanent(rows)
    if n <= _NAIVE_CAP:
        ref = _naive_permanent(rows)
        if ref != val:
            raise AssertionError("permanent routes disagree; arithmetic bug")
    return val


def _naive_determinant(rows):
    n = len(rows)
    acc = None
    for perm in itertools.permutations(range(n)):
        inversions = sum(
            1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j]
        )
        term = rows[0][perm[0]]
        for i in range(1, n):
            term = term * rows[i][perm[i]]
        if inversions % 2 == 1:
            term = -term
        acc = term if acc is None else acc + term
    return acc


def _bareiss_determinant(rows):
    # fraction-free; entries must be Python ints (or Fractions)
    n = len(rows)
    a = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if not a[k][k]:
            piv = next((i for i in range(k + 1, n) if a[i][k]), None)
            if piv is None:
                return 0 * prev
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num // prev if isinstance(num, int) else num / prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def determinant(M, limit: int = 12):
    """Exact determinant: permutation expansion up to order 6, fraction-free

    elimination (integer/Fraction entries) above that."""
    rows = _rows_of(M)
    n = len(rows)
    if n > limit:
        raise SizeLimit(f"determinant of order {n} exceeds the cap {limit}")
    if n <= _NAIVE_CAP:
        return _naive_determinant(rows)
    if all(isinstance(v, (int, Fraction)) for row in rows for v in row):
        return _bareiss_determinant(rows)
    raise UsageError("determinant above order 6 needs int or Fraction entries")


def efun(X: MatrixAssignment, budget: int = 4096):
    """Product of det(X_sigma) over all choice vectors sigma in [k]^m.

    Early-exits on the first zero factor.  Refuses to run when k^m exceeds
    the factor budget.
    """
    if not isinstance(X, MatrixAssignment) or X.shape[0] != BLOCK:
        raise UsageError("efun needs a block assignment")
    _, m, k = X.shape
    if k**m > budget:
        raise BudgetExceeded(f"{k}^{m} determinant factors exceed budget {budget}")
    acc = None
    for sigma in itertools.product(range(k), repeat=m):
        d = determinant(X.selected_submatrix(sigma))
        if not d:
            return d
        acc = d if acc is None else acc * d
    return acc


def efun_degree(m: int, k: int) -> int:
    """Total degree of the E-function: m * k^m."""
    return m * k**m


# ---------------------------------------------------------------------------
# Group element descriptors.  Row/position indices in descriptors are
# 1-indexed to match the written notation; storage stays 0-indexed.


@dataclass(frozen=True)
class ElementaryAdd:
    """Row (or column, on the right) i += y * row j; i != j, 1-indexed."""

    i: int
    j: int
    y: int


@dataclass(frozen=True)
class Diagonal:
    entries: tuple[int, ...]


@dataclass(frozen=True)
class PermSwap:
    """Transposition of adjacent rows/columns i, i+1 (1-indexed)."""

    i: int


@dataclass(frozen=True)
class RowCycle:
    """3-cycle a -> b -> c -> a on rows/columns; an even permutation."""

    a: int
    b: int
    c: int


@dataclass(frozen=True)
class ColSwap:
    """Swap choice columns 1 and 2 at position i (block right action)."""

    i: int


@dataclass(frozen=True)
class ColCycle:
    """Cycle all k choice columns at position i (block right action)."""

    i: int


@dataclass(frozen=True)
class PosThreeCycle:
    """3-cycle a -> b -> c -> a on positions, moving whole k-column groups."""

    a: int
    b: int
    c: int


GroupElement = (
    ElementaryAdd | Diagonal | PermSwap | RowCycle | ColSwap | ColCycle | PosThreeCycle
)
_K_KINDS = (ColSwap, ColCycle, PosThreeCycle)


def det_of(g: GroupElement) -> int:
    """Determinant of the matrix realizing a left-action element."""
    if isinstance(g, ElementaryAdd):
        return 1
    if isinstance(g, Diagonal):
        d = 1
        for v in g.entries:
            d *= v
        return d
    if isinstance(g, PermSwap):
        return -1
    if isinstance(g, RowCycle):
        return 1
    raise UsageError(f"{type(g).__name__} does not act by a square matrix")


def _row_permutation(g: GroupElement, n: int) -> list[int] | None:
    """dest[r] = new index of old row r, for permutation-type elements."""
    if isinstance(g, PermSwap):
        if not 1 <= g.i < n:
            raise ShapeMismatch(f"PermSwap({g.i}) needs adjacent pair within {n}")
        dest = list(range(n))
        dest[g.i - 1], dest[g.i] = dest[g.i], dest[g.i - 1]
        return dest
    if isinstance(g, RowCycle):
        a, b, c = g.a - 1, g.b - 1, g.c - 1
        if len({a, b, c}) != 3 or not all(0 <= v < n for v in (a, b, c)):
            raise ShapeMismatch(f"RowCycle{(g.a, g.b, g.c)} invalid for size {n}")
        dest = list(range(n))
        dest[a], dest[b], dest[c] = b, c, a
        return dest
    return None


def column_permutation(g: GroupElement, m: int, k: int) -> tuple[int, ...]:
    """The permutation of the k*m block columns induced by a wreath element.

    Returned as dest with dest[c] = new index of old column c.
    """
    if isinstance(g, ColSwap):
        if k < 2:
            raise ShapeMismatch("ColSwap needs k >= 2")
        if not 1 <= g.i <= m:
            raise ShapeMismatch(f"ColSwap position {g.i} outside 1..{m}")
        base = (g.i - 1) * k
        dest = list(range(m * k))
        dest[base], dest[base + 1] = base + 1, base
        return tuple(dest)
    if isinstance(g, ColCycle):
        if not 1 <= g.i <= m:
            raise ShapeMismatch(f"ColCycle position {g.i} outside 1..{m}")
        base = (g.i - 1) * k
        dest = list(range(m * k))
        for j in range(k):
            dest[base + j] = base + (j + 1) % k
        return tuple(dest)
    if isinstance(g, PosThreeCycle):
        a, b, c = g.a, g.b, g.c
        if len({a, b, c}) != 3 or not all(1 <= v <= m for v in (a, b, c)):
            raise ShapeMismatch(f"PosThreeCycle{(a, b, c)} invalid for m={m}")
        posdest = list(range(m + 1))
        posdest[a], posdest[b], posdest[c] = b, c, a
        dest = list(range(m * k))
        for pos in range(1, m + 1):
            for j in range(k):
                dest[(pos - 1) * k + j] = (posdest[pos] - 1) * k + j
        return tuple(dest)
    raise ShapeMismatch(f"{type(g).__name__} is not a block column action")


def apply_group(g: GroupElement, X: MatrixAssignment, side: str) -> MatrixAssignment:
    """Act on an assignment; 'left' = rows, 'right' = columns."""
    if side not in ("left", "right"):
        raise UsageError(f"side must be 'left' or 'right', got {side!r}")
    rows = [list(r) for r in X.entries]
    n_rows, n_cols = len(rows), len(rows[0])

    if isinstance(g, _K_KINDS):
        if side != "right" or X.shape[0] != BLOCK:
            raise ShapeMismatch(
                f"{type(g).__name__} acts on block columns from the right"
            )
        _, m, k = X.shape
        dest = column_permutation(g, m, k)
        out = [[None] * n_cols for _ in range(n_rows)]
        for c in range(n_cols):
            for r in range(n_rows):
                out[r][dest[c]] = rows[r][c]
        return MatrixAssignment(X.shape, tuple(tuple(r) for r in out))

    if side == "right" and X.shape[0] == BLOCK:
        raise ShapeMismatch("right action on a block uses the wreath generators")

    dim = n_rows if side == "left" else n_cols
    perm = _row_permutation(g, dim)
    if perm is not None:
        out = [[None] * n_cols for _ in range(n_rows)]
        if side == "left":
            for r in range(n_rows):
                out[perm[r]] = rows[r]
        else:
            for c in range(n_cols):
                for r in range(n_rows):
                    out[r][perm[c]] = rows[r][c]
        return MatrixAssignment(X.shape, tuple(tuple(r) for r in out))

    if isinstance(g, Diagonal):
        if len(g.entries) != dim:
            raise ShapeMismatch(
                f"diagonal of length {len(g.entries)} against dimension {dim}"
            )
        if side == "left":
            out = [[g.entries[r] * v for v in rows[r]] for r in range(n_rows)]
        else:
            out = [[g.entries[c] * rows[r][c] for c in range(n_cols)] for r in range(n_rows)]
        return MatrixAssignment(X.shape, tuple(tuple(r) for r in out))

    if isinstance(g, ElementaryAdd):
        i, j = g.i - 1, g.j - 1
        if i == j or not (0 <= i < dim and 0 <= j < dim):
            raise ShapeMismatch(f"ElementaryAdd({g.i},{g.j}) against dimension {dim}")
        if side == "left":
            # row i += y * row j
            out = rows
            out[i] = [out[i][c] + g.y * out[j][c] for c in range(n_cols)]
        else:
            # col j += y * col i
            out = rows
            for r in range(n_rows):
                out[r][j] = out[r][j] + g.y * out[r][i]
        return MatrixAssignment(X.shape, tuple(tuple(r) for r in out))

    raise ShapeMismatch(f"unsupported action {type(g).__name__} on side {side!r}")


def k_generators(m: int, k: int) -> tuple[GroupElement, ...]:
    """Generators of the column symmetry group: per-position choice swaps and

    k-cycles (generating each S_k factor) plus position 3-cycles (1,2,j)
    generating the even position permutations for m >= 3."""
    if m < 1 or k < 1:
        raise UsageError("need m >= 1 and k >= 1")
    gens: list[GroupElement] = []
    for i in range(1, m + 1):
        if k >= 2:
            gens.append(ColSwap(i))
        if k >= 3:
            gens.append(ColCycle(i))
    for j in range(3, m + 1):
        gens.append(PosThreeCycle(1, 2, j))
    return tuple(gens)
