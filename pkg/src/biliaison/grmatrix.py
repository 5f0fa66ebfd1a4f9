"""Graded free modules, characteristic functions and graded matrices.

A `GradedMatrix` is a degree-zero map between graded free modules, stored as
row degrees, column degrees and a grid of homogeneous `MultiPoly` entries
(entry (i, j) has degree col_deg[j] - row_deg[i]; the parameter `a` counts
degree 0).  On top of it: column truncations, closed-point specialization,
exact rank over the fraction field, minor enumeration/sampling, and rank over
the local ring at a codimension-1 point (a hypersurface).

Rank strategy: random-point evaluation certifies full-rank blocks instantly;
a seeded plane restriction gives a cheap certified lower bound; small blocks
finish with fraction-free Bareiss elimination, large ones with a Groebner
leading-component count.  Everything is exact; sampling only ever produces
certificates, never answers.
"""

from __future__ import annotations

import hashlib
import json
import random
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from biliaison import _linalg
from biliaison.polyring import (
    FieldSpec,
    MultiPoly,
    PARAM_INDEX,
    VAR_NAMES,
    gcd,
    gcd_many,
)


class HomogeneityError(ValueError):
    """An entry fails the degree constraint col_deg - row_deg."""


class CharFunction:
    """Finitely supported map degree -> multiplicity (the shape of L)."""

    __slots__ = ("support",)

    def __init__(self, support: Optional[Dict[int, int]] = None):
        self.support: Dict[int, int] = {}
        if support:
            for d, m in support.items():
                if m < 0:
                    raise ValueError("multiplicities must be >= 0")
                if m:
                    self.support[int(d)] = int(m)

    @staticmethod
    def from_degrees(degrees: Iterable[int]) -> "CharFunction":
        out: Dict[int, int] = {}
        for d in degrees:
            out[d] = out.get(d, 0) + 1
        return CharFunction(out)

    def degrees(self) -> List[int]:
        """Sorted degree list with multiplicity."""
        out: List[int] = []
        for d in sorted(self.support):
            out.extend([d] * self.support[d])
        return out

    def rank(self) -> int:
        return sum(self.support.values())

    def __call__(self, n: int) -> int:
        return self.support.get(n, 0)

    def cumulative(self, n: int) -> int:
        """f#(n) = sum of multiplicities in degrees <= n."""
        return sum(m for d, m in self.support.items() if d <= n)

    def inf(self) -> Optional[int]:
        return min(self.support) if self.support else None

    def sup(self) -> Optional[int]:
        return max(self.support) if self.support else None

    def weighted_sum(self) -> int:
        """Sum of n * f(n)."""
        return sum(d * m for d, m in self.support.items())

    def restrict_leq(self, n: int) -> "CharFunction":
        return CharFunction({d: m for d, m in self.support.items() if d <= n})

    def add(self, other: "CharFunction") -> "CharFunction":
        out = dict(self.support)
        for d, m in other.support.items():
            out[d] = out.get(d, 0) + m
        return CharFunction(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, CharFunction) and self.support == other.support

    def __hash__(self):
        return hash(tuple(sorted(self.support.items())))

    def __repr__(self):
        inner = ", ".join(f"{d}->{m}" for d, m in sorted(self.support.items()))
        return f"CharFunction({{{inner}}})"

    def to_json(self) -> Dict[str, int]:
        return {str(d): m for d, m in sorted(self.support.items())}

    @staticmethod
    def from_json(obj: Dict[str, int]) -> "CharFunction":
        return CharFunction({int(d): int(m) for d, m in obj.items()})


class GradedMatrix:
    """Homogeneous matrix presenting a degree-0 map L2 -> L1."""

    __slots__ = ("field", "row_degrees", "col_degrees", "entries", "_fingerprint")

    def __init__(
        self,
        field: FieldSpec,
        row_degrees: Sequence[int],
        col_degrees: Sequence[int],
        entries: Sequence[Sequence[MultiPoly]],
        validate: bool = True,
    ):
        self.field = field
        self.row_degrees = tuple(int(d) for d in row_degrees)
        self.col_degrees = tuple(int(d) for d in col_degrees)
        self.entries = tuple(tuple(row) for row in entries)
        self._fingerprint: Optional[str] = None
        if len(self.entries) != len(self.row_degrees):
            raise ValueError("row count does not match row degrees")
        for row in self.entries:
            if len(row) != len(self.col_degrees):
                raise ValueError("column count does not match column degrees")
        if validate:
            self.validate_homogeneity()

    # shape ----------------------------------------------------------------
    @property
    def nrows(self) -> int:
        return len(self.row_degrees)

    @property
    def ncols(self) -> int:
        return len(self.col_degrees)

    def row_char(self) -> CharFunction:
        return CharFunction.from_degrees(self.row_degrees)

    def col_char(self) -> CharFunction:
        return CharFunction.from_degrees(self.col_degrees)

    def validate_homogeneity(self) -> None:
        for i, row in enumerate(self.entries):
            for j, p in enumerate(row):
                if p.field != self.field:
                    raise HomogeneityError(f"entry ({i},{j}) over wrong field")
                want = self.col_degrees[j] - self.row_degrees[i]
                if p.is_zero():
                    continue
                if not p.is_homogeneous(want):
                    raise HomogeneityError(
                        f"entry ({i},{j}) = {p} is not homogeneous of degree {want}"
                    )

    def fingerprint(self) -> str:
        if self._fingerprint is None:
            h = hashlib.sha256()
            h.update(repr((self.field.kind, self.field.characteristic,
                           self.row_degrees, self.col_degrees)).encode())
            for row in self.entries:
                for p in row:
                    h.update(str(p).encode())
                    h.update(b";")
            self._fingerprint = h.hexdigest()
        return self._fingerprint

    # basic operations -------------------------------------------------------
    def column(self, j: int) -> List[MultiPoly]:
        return [row[j] for row in self.entries]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "GradedMatrix":
        return GradedMatrix(
            self.field,
            [self.row_degrees[i] for i in rows],
            [self.col_degrees[j] for j in cols],
            [[self.entries[i][j] for j in cols] for i in rows],
            validate=False,
        )

    def truncate_columns(self, n: int) -> "GradedMatrix":
        """Keep exactly the columns of degree <= n."""
        keep = [j for j, d in enumerate(self.col_degrees) if d <= n]
        return self.submatrix(range(self.nrows), keep)

    def specialize_closed_point(self) -> "GradedMatrix":
        """Set the parameter a := 0 in every entry."""
        return GradedMatrix(
            self.field,
            self.row_degrees,
            self.col_degrees,
            [[p.specialize_parameter(0) for p in row] for row in self.entries],
            validate=False,
        )

    def has_parameter(self) -> bool:
        return any(p.has_parameter() for row in self.entries for p in row)

    def is_zero_matrix(self) -> bool:
        return all(p.is_zero() for row in self.entries for p in row)

    def __matmul__(self, other: "GradedMatrix") -> "GradedMatrix":
        if self.col_degrees != other.row_degrees:
            raise ValueError("inner degree profiles do not match")
        zero = MultiPoly.zero(self.field)
        grid: List[List[MultiPoly]] = []
        for i in range(self.nrows):
            row: List[MultiPoly] = []
            for j in range(other.ncols):
                acc = zero
                for k in range(self.ncols):
                    a = self.entries[i][k]
                    b = other.entries[k][j]
                    if a.is_zero() or b.is_zero():
                        continue
                    acc = acc + a * b
                row.append(acc)
            grid.append(row)
        return GradedMatrix(self.field, self.row_degrees, other.col_degrees, grid, validate=False)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GradedMatrix)
            and self.field == other.field
            and self.row_degrees == other.row_degrees
            and self.col_degrees == other.col_degrees
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash(self.fingerprint())

    def __repr__(self):
        return f"GradedMatrix({self.nrows}x{self.ncols}, rows={self.row_degrees}, cols={self.col_degrees})"

    # serialization ----------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "row_degrees": list(self.row_degrees),
            "col_degrees": list(self.col_degrees),
            "entries": [[str(p) for p in row] for row in self.entries],
        }

    @staticmethod
    def from_json(obj: dict) -> "GradedMatrix":
        field = FieldSpec.from_json(obj["field"])
        entries = [
            [MultiPoly.parse(s, field) for s in row]
            for row in obj["entries"]
        ]
        return GradedMatrix(field, obj["row_degrees"], obj["col_degrees"], entries)

    @staticmethod
    def load(path: str) -> "GradedMatrix":
        with open(path, "r", encoding="utf-8") as fh:
            return GradedMatrix.from_json(json.load(fh))

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=1)
            fh.write("\n")

    # evaluation ---------------------------------------------------------------
    def evaluate(self, point: Sequence) -> np.ndarray:
        """Evaluate all entries at a point of F_p^5 (prime fields only)."""
        if self.field.kind != "prime":
            raise ValueError("numeric evaluation needs a prime field")
        out = np.zeros((self.nrows, self.ncols), dtype=np.int64)
        for i, row in enumerate(self.entries):
            for j, p in enumerate(row):
                if not p.is_zero():
                    out[i, j] = p.evaluate(point)
        return out


# ---------------------------------------------------------------------------
# block decomposition


def block_decomposition(m: GradedMatrix) -> List[Tuple[List[int], List[int]]]:
    """Connected components of the nonzero-entry bipartite graph.

    Rows or columns without nonzero entries belong to no block.
    """
    parent = list(range(m.nrows + m.ncols))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        parent[find(x)] = find(y)

    active_rows, active_cols = set(), set()
    for i in range(m.nrows):
        for j in range(m.ncols):
            if not m.entries[i][j].is_zero():
                union(i, m.nrows + j)
                active_rows.add(i)
                active_cols.add(j)
    groups: Dict[int, Tuple[List[int], List[int]]] = {}
    for i in sorted(active_rows):
        groups.setdefault(find(i), ([], []))[0].append(i)
    for j in sorted(active_cols):
        groups.setdefault(find(m.nrows + j), ([], []))[1].append(j)
    return [groups[k] for k in sorted(groups, key=lambda k: (min(groups[k][0] + [m.nrows]), min(groups[k][1] + [m.ncols])))]


# ---------------------------------------------------------------------------
# determinants and Bareiss elimination


def determinant(m: GradedMatrix) -> MultiPoly:
    """Exact determinant of a square graded matrix."""
    n = m.nrows
    if n != m.ncols:
        raise ValueError("determinant of a non-square matrix")
    field = m.field
    if n == 0:
        return MultiPoly.one(field)
    if n == 1:
        return m.entries[0][0]
    if n == 2:
        e = m.entries
        return e[0][0] * e[1][1] - e[0][1] * e[1][0]
    if n == 3:
        e = m.entries
        return (
            e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1])
            - e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0])
            + e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0])
        )
    rank, _, _, det, sign = _bareiss(m.entries, field, want_det=True)
    if rank < n:
        return MultiPoly.zero(field)
    return det if sign > 0 else -det


def _bareiss(
    entries: Sequence[Sequence[MultiPoly]],
    field: FieldSpec,
    want_det: bool = False,
    row_major: bool = False,
) -> Tuple[int, List[int], List[int], MultiPoly, int]:
    """Fraction-free elimination.

    Returns (rank, pivot_rows, pivot_cols, last_pivot, swap_sign).  The last
    pivot equals (up to the recorded sign) the determinant of the submatrix
    on the pivot rows/columns.  With row_major=True pivots are taken from the
    topmost usable row instead of globally smallest entries, so the pivot row
    set follows the given row order; useful for harvesting diverse witness
    minors.
    """
    grid = [list(row) for row in entries]
    nrows = len(grid)
    ncols = len(grid[0]) if nrows else 0
    row_idx = list(range(nrows))
    col_idx = list(range(ncols))
    prev = MultiPoly.one(field)
    sign = 1
    k = 0
    limit = min(nrows, ncols)
    while k < limit:
        pivot = None
        best = None
        for i in range(k, nrows):
            for j in range(k, ncols):
                p = grid[i][j]
                if p.is_zero():
                    continue
                score = (len(p.terms), p.degree)
                if best is None or score < best:
                    best = score
                    pivot = (i, j)
            if row_major and pivot is not None:
                break
        if pivot is None:
            break
        pi, pj = pivot
        if pi != k:
            grid[k], grid[pi] = grid[pi], grid[k]
            row_idx[k], row_idx[pi] = row_idx[pi], row_idx[k]
            sign = -sign
        if pj != k:
            for row in grid:
                row[k], row[pj] = row[pj], row[k]
            col_idx[k], col_idx[pj] = col_idx[pj], col_idx[k]
            sign = -sign
        pk = grid[k][k]
        for i in range(k + 1, nrows):
            gik = grid[i][k]
            for j in range(k + 1, ncols):
                num = pk * grid[i][j] - gik * grid[k][j]
                grid[i][j] = num.exact_divide(prev) if not num.is_zero() else num
            grid[i][k] = MultiPoly.zero(field)
        prev = pk
        k += 1
    return k, sorted(row_idx[:k]), sorted(col_idx[:k]), prev, sign


# ---------------------------------------------------------------------------
# rank over the fraction field


_RANK_CACHE: Dict[str, int] = {}


def _eval_points(m: GradedMatrix, count: int) -> List[Tuple[int, ...]]:
    p = m.field.characteristic
    rng = random.Random(int(m.fingerprint()[:12], 16))
    return [tuple(rng.randrange(1, p) for _ in range(5)) for _ in range(count)]


def random_plane(field: FieldSpec, seed: int) -> Dict[int, MultiPoly]:
    """Images of X,Y,Z,T,a under restriction to a random plane (in X,Y)."""
    rng = random.Random(seed)
    x = MultiPoly.variable(field, "X")
    y = MultiPoly.variable(field, "Y")
    if field.kind == "prime":
        p = field.characteristic
        draw = lambda: rng.randrange(p)
    else:
        draw = lambda: rng.randrange(-50, 51)
    images: Dict[int, MultiPoly] = {}
    for i in range(4):
        images[i] = x.scale(draw()) + y.scale(draw())
    images[PARAM_INDEX] = MultiPoly.const(field, draw())
    return images


def restrict_to_plane(m: GradedMatrix, seed: int) -> GradedMatrix:
    images = random_plane(m.field, seed)
    grid = [[p.substitute(images) for p in row] for row in m.entries]
    return GradedMatrix(m.field, m.row_degrees, m.col_degrees, grid, validate=False)


def rank_fraction_field(m: GradedMatrix) -> int:
    """Exact rank over Frac(k[X,Y,Z,T]); equals the largest nonzero minor size."""
    key = m.fingerprint()
    if key in _RANK_CACHE:
        return _RANK_CACHE[key]
    total = 0
    for rows, cols in block_decomposition(m):
        total += _block_rank(m.submatrix(rows, cols))
    _RANK_CACHE[key] = total
    return total


def _block_rank(sub: GradedMatrix) -> int:
    nrows, ncols = sub.nrows, sub.ncols
    cap = min(nrows, ncols)
    if cap == 0:
        return 0
    lower = 0
    if sub.field.kind == "prime":
        p = sub.field.characteristic
        for point in _eval_points(sub, 2):
            lower = max(lower, _linalg.rank_mod_p(sub.evaluate(point), p))
            if lower == cap:
                return cap
    # plane restriction: certified lower bound, cheap exact arithmetic
    seed_base = int(sub.fingerprint()[:12], 16) ^ 0x9E3779B9
    restricted = restrict_to_plane(sub, seed_base)
    r_restr, _, _, _, _ = _bareiss(restricted.entries, sub.field)
    lower = max(lower, r_restr)
    if lower == cap:
        return cap
    if cap <= 6 or nrows * ncols <= 60:
        rank, _, _, _, _ = _bareiss(sub.entries, sub.field)
        return rank
    if not sub.has_parameter():
        from biliaison import modgb

        return modgb.leading_component_rank(sub)
    rank, _, _, _, _ = _bareiss(sub.entries, sub.field)
    return rank


def rank_witness(m: GradedMatrix) -> Tuple[int, List[int], List[int], MultiPoly]:
    """Rank plus a nonsingular submatrix witness (rows, cols, its determinant).

    Only used on blocks small enough for Bareiss.
    """
    rank, rows, cols, last_pivot, sign = _bareiss(m.entries, m.field)
    det = last_pivot if sign > 0 else -last_pivot
    return rank, rows, cols, det


# ---------------------------------------------------------------------------
# minors


def _unrank_combination(index: int, n: int, k: int) -> Tuple[int, ...]:
    """index-th k-subset of range(n) in lexicographic order."""
    from math import comb

    out = []
    x = 0
    for slot in range(k, 0, -1):
        while True:
            c = comb(n - x - 1, slot - 1)
            if index < c:
                out.append(x)
                x += 1
                break
            index -= c
            x += 1
    return tuple(out)


def minors(
    m: GradedMatrix,
    k: int,
    selection: str = "all",
    sample_size: int = 0,
    seed: int = 0,
) -> List[MultiPoly]:
    """k x k minors, exhaustively or as a deterministic seeded sample.

    Output order follows the lexicographic order of (row set, column set).
    """
    from itertools import combinations
    from math import comb

    if k < 0 or k > min(m.nrows, m.ncols):
        raise ValueError(f"minor size {k} out of range for {m.nrows}x{m.ncols}")
    if k == 0:
        return [MultiPoly.one(m.field)]
    if selection == "all":
        picks = [
            (rows, cols)
            for rows in combinations(range(m.nrows), k)
            for cols in combinations(range(m.ncols), k)
        ]
    elif selection == "random":
        total_r = comb(m.nrows, k)
        total_c = comb(m.ncols, k)
        total = total_r * total_c
        size = min(sample_size, total)
        rng = random.Random(seed)
        chosen = set()
        while len(chosen) < size:
            chosen.add(rng.randrange(total))
        picks = sorted(
            (_unrank_combination(i // total_c, m.nrows, k),
             _unrank_combination(i % total_c, m.ncols, k))
            for i in chosen
        )
    else:
        raise ValueError(f"unknown selection {selection!r}")
    return [determinant(m.submatrix(rows, cols)) for rows, cols in picks]


# ---------------------------------------------------------------------------
# rank modulo a hypersurface


class _SplitDiscovered(Exception):
    """Elimination met a zero divisor exposing a coprime factorization of f."""

    def __init__(self, factor: MultiPoly):
        self.factor = factor


def rank_modulo_hypersurface(m: GradedMatrix, f: MultiPoly) -> int:
    """Rank of m over the fraction field of k[X,Y,Z,T]/(f).

    ``f`` must be nonconstant and squarefree; for reducible f the result is
    the minimum of the ranks over its irreducible components.  Components are
    never listed explicitly: elimination proceeds with pivots invertible
    modulo every component, splitting f whenever a zero divisor turns up.
    """
    if f.is_constant():
        raise ValueError("hypersurface polynomial must be nonconstant")
    if f.has_parameter():
        raise ValueError("hypersurface must not involve the parameter a")
    from biliaison.polyring import squarefree_factors

    pieces = squarefree_factors(f) if f.degree > 1 else [f.monic()]
    return min(_rank_modulo_whole(m, piece.monic()) for piece in pieces)


def _rank_modulo_whole(m: GradedMatrix, f: MultiPoly) -> int:
    """min over the components of f; blockwise sums are valid per component."""
    try:
        total = 0
        for rows, cols in block_decomposition(m):
            sub = m.submatrix(rows, cols)
            if f.degree == 1:
                total += _rank_modulo_linear(sub, f)
            else:
                reduced = [[p.reduce_mod(f) for p in row] for row in sub.entries]
                total += _eliminate_mod(reduced, f, sub.field)
        return total
    except _SplitDiscovered as split:
        g = split.factor.monic()
        other = f.exact_divide(split.factor).monic()
        return min(_rank_modulo_whole(m, g), _rank_modulo_whole(m, other))


def _rank_modulo_linear(sub: GradedMatrix, f: MultiPoly) -> int:
    # solve the linear form for its leading variable and substitute
    field = sub.field
    lead = f.leading_expo()
    var = next(i for i in range(4) if lead[i] == 1)
    coeff = f.terms[lead]
    inv = field.invert(coeff)
    rest = MultiPoly(field, {e: c for e, c in f.terms.items() if e != lead})
    image = (-rest).scale(inv)
    images = {var: image}
    grid = [[p.substitute(images) for p in row] for row in sub.entries]
    rank, _, _, _, _ = _bareiss(grid, field)
    return rank


def _eliminate_mod(rows: List[List[MultiPoly]], f: MultiPoly, field: FieldSpec) -> int:
    """Rank by unit-pivot elimination in R/(f).

    Pivots must be coprime to f, making every row operation valid over each
    residue field at once; a nonzero entry sharing a proper factor with f is
    a zero divisor and raises `_SplitDiscovered` for the caller to branch on.
    """
    rows = [[p for p in row] for row in rows]
    rank = 0
    while True:
        nonzero = []
        for i, row in enumerate(rows):
            for j, p in enumerate(row):
                if not p.is_zero():
                    nonzero.append((len(p.terms), p.degree, i, j))
        if not nonzero:
            return rank
        nonzero.sort()
        pivot = None
        for _, _, i, j in nonzero:
            g = gcd(rows[i][j], f)
            if g.is_constant():
                pivot = (i, j)
                break
        if pivot is None:
            # every candidate shares a proper factor with f (entries are
            # reduced, so the gcd is never f itself): expose the first one
            _, _, i, j = nonzero[0]
            raise _SplitDiscovered(gcd(rows[i][j], f))
        pi, pj = pivot
        pv = rows[pi][pj]
        new_rows = []
        for i, row in enumerate(rows):
            if i == pi:
                continue
            c = row[pj]
            if c.is_zero():
                new_rows.append([p for j, p in enumerate(row) if j != pj])
            else:
                new_rows.append([
                    (pv * row[j] - c * rows[pi][j]).reduce_mod(f)
                    for j in range(len(row)) if j != pj
                ])
        rows = new_rows
        rank += 1
        if not rows or not rows[0]:
            return rank


# ---------------------------------------------------------------------------
# assembly helpers


def zero_matrix(field: FieldSpec, row_degrees: Sequence[int], col_degrees: Sequence[int]) -> GradedMatrix:
    z = MultiPoly.zero(field)
    return GradedMatrix(
        field, row_degrees, col_degrees,
        [[z] * len(col_degrees) for _ in row_degrees], validate=False,
    )


def identity_matrix(field: FieldSpec, degrees: Sequence[int], scale: Optional[MultiPoly] = None) -> GradedMatrix:
    n = len(degrees)
    z = MultiPoly.zero(field)
    s = scale if scale is not None else MultiPoly.one(field)
    grid = [[s if i == j else z for j in range(n)] for i in range(n)]
    return GradedMatrix(field, degrees, degrees, grid, validate=False)


def stack_blocks(blocks: Sequence[Sequence[Optional[GradedMatrix]]]) -> GradedMatrix:
    """Assemble a block matrix; None blocks are zero (degrees inferred)."""
    field = None
    for row in blocks:
        for b in row:
            if b is not None:
                field = b.field
    if field is None:
        raise ValueError("all blocks are None")
    row_degs: List[List[int]] = []
    col_degs: List[List[int]] = []
    for bi, row in enumerate(blocks):
        degs = None
        for b in row:
            if b is not None:
                degs = list(b.row_degrees)
        if degs is None:
            raise ValueError(f"block row {bi} has no concrete block")
        row_degs.append(degs)
    for bj in range(len(blocks[0])):
        degs = None
        for row in blocks:
            b = row[bj]
            if b is not None:
                degs = list(b.col_degrees)
        if degs is None:
            raise ValueError(f"block column {bj} has no concrete block")
        col_degs.append(degs)
    z = MultiPoly.zero(field)
    grid: List[List[MultiPoly]] = []
    for bi, row in enumerate(blocks):
        for i in range(len(row_degs[bi])):
            line: List[MultiPoly] = []
            for bj, b in enumerate(row):
                if b is None:
                    line.extend([z] * len(col_degs[bj]))
                else:
                    line.extend(b.entries[i])
            grid.append(line)
    flat_rows = [d for degs in row_degs for d in degs]
    flat_cols = [d for degs in col_degs for d in degs]
    return GradedMatrix(field, flat_rows, flat_cols, grid)
