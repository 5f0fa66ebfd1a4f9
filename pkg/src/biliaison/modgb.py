"""Groebner bases for submodules of graded free modules over k[X,Y,Z,T].

The engine powers five consumers: membership tests, Hilbert functions (by
counting monomials in the leading-term module through Hilbert-series
numerators), windowed cubic Hilbert polynomials, degreewise syzygies and
minimal generator counts (plain exact linear algebra, independent of the
Groebner machinery), and the emptiness certificate for projective loci.

Module order: term-over-position extension of graded reverse lex, ties
broken toward the smaller component index.  Buchberger runs degree by degree
(inputs are homogeneous), with the chain criterion for pair pruning and an
optional S-pair degree cap; a capped run certifies every leading term up to
the cap and is exactly what the Hilbert-function consumers need.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from biliaison import _linalg
from biliaison.grmatrix import CharFunction, GradedMatrix
from biliaison.polyring import FieldSpec, MultiPoly, Scalar

Expo4 = Tuple[int, int, int, int]
Term = Tuple[int, int, int, int, int]  # (component, e0, e1, e2, e3)


class BudgetExhaustedError(RuntimeError):
    """A degree budget was too small for the requested computation."""


class InhomogeneousError(ValueError):
    """Generators must be homogeneous."""


def _term_key(t: Term) -> tuple:
    return (t[1] + t[2] + t[3] + t[4], -t[4], -t[3], -t[2], -t[0])


def _mono_divides(a: Term, b: Term) -> bool:
    """Does the monomial of a divide that of b (same component)?"""
    return a[1] <= b[1] and a[2] <= b[2] and a[3] <= b[3] and a[4] <= b[4]


def binom3(m: int) -> int:
    """dim of the degree-m piece of k[X,Y,Z,T]; 0 for m < 0."""
    if m < 0:
        return 0
    return (m + 3) * (m + 2) * (m + 1) // 6


def monomials_of_degree(d: int) -> List[Expo4]:
    """All exponent vectors of total degree d, in a fixed deterministic order."""
    if d < 0:
        return []
    out = []
    for e0 in range(d, -1, -1):
        for e1 in range(d - e0, -1, -1):
            for e2 in range(d - e0 - e1, -1, -1):
                out.append((e0, e1, e2, d - e0 - e1 - e2))
    return out


class _Vec:
    """Homogeneous element of the ambient free module (internal)."""

    __slots__ = ("terms", "degree", "_lead")

    def __init__(self, terms: Dict[Term, Scalar], degree: int):
        self.terms = terms
        self.degree = degree
        self._lead: Optional[Term] = None

    def lead(self) -> Term:
        if self._lead is None:
            self._lead = max(self.terms, key=_term_key)
        return self._lead

    def is_zero(self) -> bool:
        return not self.terms


class SubmodulePresentation:
    """A submodule of a graded free module with a cached Groebner basis."""

    def __init__(
        self,
        field: FieldSpec,
        ambient_degrees: Tuple[int, ...],
        generators: GradedMatrix,
        gb: List[_Vec],
        truncated_at: Optional[int],
    ):
        self.field = field
        self.ambient_degrees = ambient_degrees
        self.generators = generators
        self.gb = gb
        self.truncated_at = truncated_at
        self._by_component: Dict[int, List[_Vec]] = {}
        for v in gb:
            self._by_component.setdefault(v.lead()[0], []).append(v)
        self._numerators: Dict[int, List[int]] = {}

    # --- leading term data -------------------------------------------------
    def ambient(self) -> CharFunction:
        return CharFunction.from_degrees(self.ambient_degrees)

    def leading_components(self) -> List[int]:
        return sorted(self._by_component)

    def lt_generators(self, comp: int) -> List[Expo4]:
        gens = [v.lead()[1:] for v in self._by_component.get(comp, [])]
        return _minimalize_monomials(gens)

    def certified_degree(self) -> Optional[int]:
        """Largest degree whose graded piece the (possibly capped) GB certifies."""
        return self.truncated_at

    def _check_degree(self, n: int) -> None:
        if self.truncated_at is not None and n > self.truncated_at:
            raise BudgetExhaustedError(
                f"degree {n} exceeds the certified Groebner degree {self.truncated_at}"
            )

    # --- membership ----------------------------------------------------------
    def normal_form(self, vec: _Vec) -> _Vec:
        return _normal_form(vec, self._by_component, self.field)

    def contains_column(self, column: Sequence[MultiPoly], degree: int) -> bool:
        v = _column_to_vec(column, degree, self.ambient_degrees, self.field)
        if v.is_zero():
            return True
        if self.truncated_at is not None and degree > self.truncated_at:
            raise BudgetExhaustedError("membership beyond certified degree")
        return self.normal_form(v).is_zero()

    # --- Hilbert data ----------------------------------------------------------
    def _numerator(self, comp: int) -> List[int]:
        if comp not in self._numerators:
            self._numerators[comp] = _hilbert_numerator(self.lt_generators(comp))
        return self._numerators[comp]

    def hilbert_function(self, n: int) -> int:
        """dim_k of the degree-n piece of the submodule."""
        self._check_degree(n)
        total = 0
        for comp in self._by_component:
            d = n - self.ambient_degrees[comp]
            if d < 0:
                continue
            num = self._numerator(comp)
            dim_quotient = sum(c * binom3(d - j) for j, c in enumerate(num) if c and d - j >= -3)
            total += binom3(d) - dim_quotient
        return total

    def hilbert_polynomial(self, budget: Optional[int] = None) -> "HilbertPolynomial":
        """Cubic agreeing with the Hilbert function from the fitted window on.

        The window is the first start w such that ten consecutive values
        w..w+9 lie on one cubic (four consecutive exact fits, validated on
        three further degrees).
        """
        degrees = [self.ambient_degrees[c] for c in self._by_component] or [0]
        start = min(degrees)
        if budget is None:
            budget = self.truncated_at
        if budget is None:
            budget = start + 40
        if self.truncated_at is not None:
            budget = min(budget, self.truncated_at)
        for w in range(start, budget - 8):
            values = [self.hilbert_function(n) for n in range(w, w + 10)]
            poly = HilbertPolynomial.fit_cubic(list(range(w, w + 4)), values[:4])
            if all(poly(n) == v for n, v in zip(range(w, w + 10), values)):
                return poly
        raise BudgetExhaustedError(
            f"no stable cubic window within degree budget {budget}"
        )


@dataclass(frozen=True)
class HilbertPolynomial:
    """Polynomial in n of degree <= 3 with rational coefficients (c0..c3)."""

    coeffs: Tuple[Fraction, Fraction, Fraction, Fraction]

    @staticmethod
    def from_coeffs(cs: Sequence) -> "HilbertPolynomial":
        cs = [Fraction(c) for c in cs]
        while len(cs) < 4:
            cs.append(Fraction(0))
        if len(cs) > 4:
            raise ValueError("degree must be <= 3")
        return HilbertPolynomial(tuple(cs))

    @staticmethod
    def zero() -> "HilbertPolynomial":
        return HilbertPolynomial.from_coeffs([])

    @staticmethod
    def fit_cubic(ns: Sequence[int], values: Sequence[int]) -> "HilbertPolynomial":
        """Interpolate a cubic through four points (exact rational solve)."""
        assert len(ns) == 4 and len(values) == 4
        rows = [[Fraction(n) ** k for k in range(4)] + [Fraction(v)] for n, v in zip(ns, values)]
        for c in range(4):
            piv = next(r for r in range(c, 4) if rows[r][c] != 0)
            rows[c], rows[piv] = rows[piv], rows[c]
            inv = 1 / rows[c][c]
            rows[c] = [x * inv for x in rows[c]]
            for r in range(4):
                if r != c and rows[r][c] != 0:
                    f = rows[r][c]
                    rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
        return HilbertPolynomial(tuple(rows[r][4] for r in range(4)))

    @staticmethod
    def binomial_shift(k: int) -> "HilbertPolynomial":
        """C(n - k + 3, 3) as a cubic in n."""
        # (n-k+3)(n-k+2)(n-k+1)/6
        a, b, c = 3 - k, 2 - k, 1 - k
        c0 = Fraction(a * b * c, 6)
        c1 = Fraction(a * b + a * c + b * c, 6)
        c2 = Fraction(a + b + c, 6)
        c3 = Fraction(1, 6)
        return HilbertPolynomial((c0, c1, c2, c3))

    @staticmethod
    def dissociated(char_fn: CharFunction) -> "HilbertPolynomial":
        """Hilbert polynomial of a free module with the given shape."""
        out = HilbertPolynomial.zero()
        for d, m in sorted(char_fn.support.items()):
            out = out + HilbertPolynomial.binomial_shift(d).scale(m)
        return out

    def __call__(self, n: int) -> Fraction:
        c0, c1, c2, c3 = self.coeffs
        return c0 + n * (c1 + n * (c2 + n * c3))

    def __add__(self, other: "HilbertPolynomial") -> "HilbertPolynomial":
        return HilbertPolynomial(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "HilbertPolynomial") -> "HilbertPolynomial":
        return HilbertPolynomial(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, c) -> "HilbertPolynomial":
        c = Fraction(c)
        return HilbertPolynomial(tuple(a * c for a in self.coeffs))

    def to_json(self) -> List[str]:
        return [str(c) for c in self.coeffs]

    def __str__(self) -> str:
        return " + ".join(f"({c})*n^{k}" for k, c in enumerate(self.coeffs) if c != 0) or "0"


# ---------------------------------------------------------------------------
# conversion helpers


def _column_to_vec(
    column: Sequence[MultiPoly],
    degree: int,
    ambient_degrees: Tuple[int, ...],
    field: FieldSpec,
) -> _Vec:
    terms: Dict[Term, Scalar] = {}
    for comp, poly in enumerate(column):
        if poly.is_zero():
            continue
        if poly.has_parameter():
            raise ValueError("specialize the parameter before Groebner computations")
        if not poly.is_homogeneous(degree - ambient_degrees[comp]):
            raise InhomogeneousError(
                f"component {comp} is not homogeneous of degree {degree - ambient_degrees[comp]}"
            )
        for e, c in poly.terms.items():
            terms[(comp, e[0], e[1], e[2], e[3])] = c
    return _Vec(terms, degree)


def _vec_to_column(
    vec: _Vec, ambient_degrees: Tuple[int, ...], field: FieldSpec
) -> List[MultiPoly]:
    polys: List[Dict] = [dict() for _ in ambient_degrees]
    for (comp, e0, e1, e2, e3), c in vec.terms.items():
        polys[comp][(e0, e1, e2, e3, 0)] = c
    return [MultiPoly(field, d) for d in polys]


# ---------------------------------------------------------------------------
# reduction and Buchberger


def _sub_scaled(
    target: Dict[Term, Scalar],
    source: Dict[Term, Scalar],
    mono: Expo4,
    coeff: Scalar,
    field: FieldSpec,
) -> None:
    """target -= coeff * x^mono * source (in place)."""
    prime = field.kind == "prime"
    p = field.characteristic
    m0, m1, m2, m3 = mono
    for (c, e0, e1, e2, e3), v in source.items():
        t = (c, e0 + m0, e1 + m1, e2 + m2, e3 + m3)
        if prime:
            nv = (target.get(t, 0) - coeff * v) % p
        else:
            nv = target.get(t, Fraction(0)) - coeff * v
        if nv:
            target[t] = nv
        elif t in target:
            del target[t]


def _normal_form(
    vec: _Vec, by_component: Dict[int, List[_Vec]], field: FieldSpec
) -> _Vec:
    work = dict(vec.terms)
    remainder: Dict[Term, Scalar] = {}
    while work:
        t = max(work, key=_term_key)
        reducer = None
        for g in by_component.get(t[0], ()):  # basis elements are monic
            lt = g.lead()
            if _mono_divides(lt, t):
                reducer = g
                break
        if reducer is None:
            remainder[t] = work.pop(t)
            continue
        lt = reducer.lead()
        mono = (t[1] - lt[1], t[2] - lt[2], t[3] - lt[3], t[4] - lt[4])
        _sub_scaled(work, reducer.terms, mono, work[t], field)
    return _Vec(remainder, vec.degree)


def _make_monic(vec: _Vec, field: FieldSpec) -> _Vec:
    lc = vec.terms[vec.lead()]
    if lc == (1 if field.kind == "prime" else Fraction(1)):
        return vec
    inv = field.invert(lc)
    prime = field.kind == "prime"
    p = field.characteristic
    terms = {t: (v * inv) % p if prime else v * inv for t, v in vec.terms.items()}
    return _Vec(terms, vec.degree)


def _buchberger(
    gens: List[_Vec], field: FieldSpec, ambient_degrees: Tuple[int, ...],
    degree_cap: Optional[int],
) -> Tuple[List[_Vec], Optional[int]]:
    basis: List[_Vec] = []
    by_component: Dict[int, List[_Vec]] = {}

    def add_element(v: _Vec) -> int:
        basis.append(v)
        by_component.setdefault(v.lead()[0], []).append(v)
        return len(basis) - 1

    pairs: List[Tuple[int, int, int, int]] = []  # (degree, counter, i, j)
    counter = 0
    processed = set()

    def lcm_term(a: Term, b: Term) -> Term:
        return (a[0], max(a[1], b[1]), max(a[2], b[2]), max(a[3], b[3]), max(a[4], b[4]))

    def push_pairs(j: int) -> None:
        nonlocal counter
        vj = basis[j]
        cj = vj.lead()[0]
        for i in range(j):
            vi = basis[i]
            if vi.lead()[0] != cj:
                continue
            L = lcm_term(vi.lead(), vj.lead())
            deg = L[1] + L[2] + L[3] + L[4] + ambient_degrees[cj]
            heapq.heappush(pairs, (deg, counter, i, j))
            counter += 1

    for g in gens:
        if not g.is_zero():
            v = _make_monic(g, field)
            idx = add_element(v)
            push_pairs(idx)

    truncated_at: Optional[int] = None
    while pairs:
        deg, _, i, j = heapq.heappop(pairs)
        if degree_cap is not None and deg > degree_cap:
            truncated_at = degree_cap
            break
        fi, fj = basis[i], basis[j]
        li, lj = fi.lead(), fj.lead()
        L = lcm_term(li, lj)
        # chain criterion: an element k with LT_k | lcm and both (i,k), (j,k)
        # already handled makes this pair redundant
        skip = False
        for k, vk in enumerate(basis):
            if k == i or k == j:
                continue
            lk = vk.lead()
            if lk[0] == L[0] and _mono_divides(lk, L):
                a = (min(i, k), max(i, k))
                b = (min(j, k), max(j, k))
                if a in processed and b in processed:
                    skip = True
                    break
        processed.add((i, j))
        if skip:
            continue
        mono_i = (L[1] - li[1], L[2] - li[2], L[3] - li[3], L[4] - li[4])
        mono_j = (L[1] - lj[1], L[2] - lj[2], L[3] - lj[3], L[4] - lj[4])
        s: Dict[Term, Scalar] = {}
        _sub_scaled(s, fi.terms, mono_i, field.normalize(-1), field)
        _sub_scaled(s, fj.terms, mono_j, field.normalize(1), field)
        svec = _Vec(s, deg)
        if svec.is_zero():
            continue
        nf = _normal_form(svec, by_component, field)
        if nf.is_zero():
            continue
        idx = add_element(_make_monic(nf, field))
        push_pairs(idx)

    # minimalize: drop elements whose lead is divisible by another lead
    keep: List[_Vec] = []
    leads = [v.lead() for v in basis]
    for i, v in enumerate(basis):
        li = leads[i]
        redundant = False
        for k, lk in enumerate(leads):
            if k == i or lk[0] != li[0]:
                continue
            if _mono_divides(lk, li) and (lk != li or k < i):
                redundant = True
                break
        if not redundant:
            keep.append(v)
    # tail-reduce for a reduced basis
    final: List[_Vec] = []
    comp_index: Dict[int, List[_Vec]] = {}
    for v in keep:
        comp_index.setdefault(v.lead()[0], []).append(v)
    for v in keep:
        others = {
            c: [g for g in lst if g is not v] for c, lst in comp_index.items()
        }
        red = _normal_form(v, others, field)
        final.append(_make_monic(red, field))
    return final, truncated_at


_PRESENTATION_CACHE: Dict[Tuple[str, Optional[int]], SubmodulePresentation] = {}


def default_degree_cap(gens: GradedMatrix) -> int:
    top = max(gens.col_degrees) if gens.col_degrees else 0
    return top + 8


def groebner_basis(
    gens: GradedMatrix,
    ambient: Optional[CharFunction] = None,
    degree_cap: Optional[int] = "default",
) -> SubmodulePresentation:
    """Reduced Groebner basis of the column module of ``gens``.

    ``ambient`` (optional) must agree with the row degrees of the matrix.
    ``degree_cap`` bounds the S-pair degree; "default" means
    max(column degrees) + 8, None means no cap.
    """
    if ambient is not None and ambient != gens.row_char():
        raise ValueError("ambient characteristic function does not match row degrees")
    if degree_cap == "default":
        degree_cap = default_degree_cap(gens)
    key = (gens.fingerprint(), degree_cap)
    cached = _PRESENTATION_CACHE.get(key)
    if cached is not None:
        return cached
    # an untruncated basis serves every cap
    full = _PRESENTATION_CACHE.get((gens.fingerprint(), None))
    if full is not None and full.truncated_at is None:
        _PRESENTATION_CACHE[key] = full
        return full
    field = gens.field
    ambient_degrees = gens.row_degrees
    vectors = []
    for j in range(gens.ncols):
        vectors.append(
            _column_to_vec(gens.column(j), gens.col_degrees[j], ambient_degrees, field)
        )
    gb, truncated_at = _buchberger(vectors, field, ambient_degrees, degree_cap)
    pres = SubmodulePresentation(field, ambient_degrees, gens, gb, truncated_at)
    _PRESENTATION_CACHE[key] = pres
    if truncated_at is None:
        # a run that never hit its cap is a full basis; reuse it for any cap
        _PRESENTATION_CACHE[(gens.fingerprint(), None)] = pres
    return pres


def leading_component_rank(gens: GradedMatrix) -> int:
    """Rank of the column module = number of components hit by leading terms."""
    pres = groebner_basis(gens, degree_cap=None)
    return len(pres.leading_components())


# ---------------------------------------------------------------------------
# Hilbert-series numerator of a monomial ideal


def _minimalize_monomials(gens: List[Expo4]) -> List[Expo4]:
    gens = sorted(set(gens), key=lambda e: (sum(e), e))
    out: List[Expo4] = []
    for e in gens:
        if not any(all(f[i] <= e[i] for i in range(4)) for f in out):
            out.append(e)
    return out


def _poly_sub(a: List[int], b: List[int]) -> List[int]:
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    while out and out[-1] == 0:
        out.pop()
    return out

def _poly_shift_add(a: List[int], b: List[int], shift: int) -> List[int]:
    n = max(len(a), len(b) + shift)
    out = [0] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i + shift] += c
    while out and out[-1] == 0:
        out.pop()
    return out


def _hilbert_numerator(gens: List[Expo4]) -> List[int]:
    """Numerator of the Hilbert series of R/I over (1-t)^4, I monomial."""
    gens = _minimalize_monomials(gens)
    if not gens:
        return [1]
    if gens[0] == (0, 0, 0, 0):
        return []
    # pairwise support-disjoint generators: product formula
    if all(
        not any(gens[i][v] and gens[j][v] for v in range(4))
        for i in range(len(gens)) for j in range(i + 1, len(gens))
    ):
        num = [1]
        for e in gens:
            num = _poly_mul(num, [1] + [0] * (sum(e) - 1) + [-1])
        return num
    # pivot on the most shared variable
    counts = [sum(1 for e in gens if e[v]) for v in range(4)]
    var = counts.index(max(counts))
    plus = [e for e in gens if e[var] == 0] + [tuple(1 if i == var else 0 for i in range(4))]
    colon = [tuple(max(e[i] - (1 if i == var else 0), 0) for i in range(4)) for e in gens]
    return _poly_shift_add(_hilbert_numerator(plus), _hilbert_numerator(colon), 1)


def _poly_mul(a: List[int], b: List[int]) -> List[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    while out and out[-1] == 0:
        out.pop()
    return out


# ---------------------------------------------------------------------------
# degreewise linear algebra: dimensions, minimal generators, syzygies


def _degree_basis(ambient_degrees: Sequence[int], n: int) -> List[Tuple[int, Expo4]]:
    out: List[Tuple[int, Expo4]] = []
    for comp, d in enumerate(ambient_degrees):
        for mono in monomials_of_degree(n - d):
            out.append((comp, mono))
    return out


def _span_matrix_mod_p(
    gens: GradedMatrix, n: int, min_multiplier_degree: int = 0
) -> Tuple[np.ndarray, List[Tuple[int, Expo4]]]:
    """Matrix whose columns are monomial multiples of generator columns.

    Rows are indexed by the degree-n basis of the ambient module; columns by
    (generator, monomial) with deg(monomial) >= min_multiplier_degree.
    """
    p = gens.field.characteristic
    basis = _degree_basis(gens.row_degrees, n)
    index = {be: i for i, be in enumerate(basis)}
    columns: List[Tuple[int, Expo4]] = []
    for j, dj in enumerate(gens.col_degrees):
        k = n - dj
        if k < min_multiplier_degree:
            continue
        for mono in monomials_of_degree(k):
            columns.append((j, mono))
    mat = np.zeros((len(basis), len(columns)), dtype=np.int64)
    for cidx, (j, mono) in enumerate(columns):
        for comp in range(gens.nrows):
            poly = gens.entries[comp][j]
            if poly.is_zero():
                continue
            for e, c in poly.terms.items():
                t = (comp, (e[0] + mono[0], e[1] + mono[1], e[2] + mono[2], e[3] + mono[3]))
                mat[index[t], cidx] = (mat[index[t], cidx] + c) % p
    return mat, columns


def module_dimension_oracle(gens: GradedMatrix, n: int) -> int:
    """dim of the degree-n piece of the column module via dense linear algebra.

    Independent of the Groebner path; used as a test oracle and by the
    degreewise minimal-generator computation.
    """
    if gens.field.kind != "prime":
        return _module_dimension_frac(gens, n)
    mat, _ = _span_matrix_mod_p(gens, n)
    return _linalg.rank_mod_p(mat, gens.field.characteristic)


def _frac_span_rows(gens: GradedMatrix, n: int, min_mult_degree: int = 0):
    basis = _degree_basis(gens.row_degrees, n)
    index = {be: i for i, be in enumerate(basis)}
    cols = []
    for j, dj in enumerate(gens.col_degrees):
        k = n - dj
        if k < min_mult_degree:
            continue
        for mono in monomials_of_degree(k):
            vec = [Fraction(0)] * len(basis)
            for comp in range(gens.nrows):
                poly = gens.entries[comp][j]
                for e, c in poly.terms.items():
                    t = (comp, (e[0] + mono[0], e[1] + mono[1], e[2] + mono[2], e[3] + mono[3]))
                    vec[index[t]] += Fraction(c)
            cols.append(vec)
    return cols


def _module_dimension_frac(gens: GradedMatrix, n: int) -> int:
    return _linalg.rank_frac(_frac_span_rows(gens, n))


def minimal_generator_count(gens: GradedMatrix) -> CharFunction:
    """Minimal generators needed per degree (dim F_d modulo m*F at each d)."""
    if gens.ncols == 0:
        return CharFunction()
    if gens.has_parameter():
        raise ValueError("specialize the parameter first")
    lo = min(gens.col_degrees)
    hi = max(gens.col_degrees)
    out: Dict[int, int] = {}
    for d in range(lo, hi + 1):
        if gens.field.kind == "prime":
            p = gens.field.characteristic
            full, _ = _span_matrix_mod_p(gens, d, 0)
            proper, _ = _span_matrix_mod_p(gens, d, 1)
            mu = _linalg.rank_mod_p(full, p) - _linalg.rank_mod_p(proper, p)
        else:
            mu = _linalg.rank_frac(_frac_span_rows(gens, d, 0)) - _linalg.rank_frac(
                _frac_span_rows(gens, d, 1)
            )
        if mu:
            out[d] = mu
    return CharFunction(out)


def _degree_kernel(gens: GradedMatrix, d: int):
    """(kernel basis vectors as dicts, column labels) of the degree-d evaluation."""
    if gens.field.kind == "prime":
        p = gens.field.characteristic
        mat, columns = _span_matrix_mod_p(gens, d)
        if not columns:
            return [], columns
        kernel = _linalg.nullspace_mod_p(mat, p)
        vecs = [
            {columns[i]: int(krow[i]) for i in range(len(columns)) if krow[i]}
            for krow in kernel
        ]
        return vecs, columns
    cols = _frac_span_rows(gens, d)
    columns = []
    for j, dj in enumerate(gens.col_degrees):
        if d - dj >= 0:
            for mono in monomials_of_degree(d - dj):
                columns.append((j, mono))
    if not columns:
        return [], columns
    rows = [[cols[c][r] for c in range(len(columns))] for r in range(len(cols[0]))]
    kernel = _linalg.nullspace_frac(rows, len(columns))
    vecs = [
        {columns[i]: krow[i] for i in range(len(columns)) if krow[i] != 0}
        for krow in kernel
    ]
    return vecs, columns


def _row_rank(rows: List, ncols: int, field: FieldSpec) -> int:
    if not rows:
        return 0
    if field.kind == "prime":
        return _linalg.rank_mod_p(np.array(rows, dtype=np.int64), field.characteristic)
    return _linalg.rank_frac(rows)


def syzygies(gens: GradedMatrix, up_to_degree: int) -> GradedMatrix:
    """Minimal syzygies among the columns, in degrees <= up_to_degree.

    Degreewise: the kernel of the evaluation map, minimalized against
    variable multiples of lower-degree syzygies.
    """
    if gens.has_parameter():
        raise ValueError("specialize the parameter first")
    lo = min(gens.col_degrees) if gens.ncols else 0
    syz_cols: List[Tuple[int, Dict[Tuple[int, Expo4], object]]] = []
    prev_kernel: List[Dict[Tuple[int, Expo4], object]] = []
    for d in range(lo, up_to_degree + 1):
        kernel, columns = _degree_kernel(gens, d)
        if not columns:
            prev_kernel = []
            continue
        col_index = {bc: i for i, bc in enumerate(columns)}

        def as_row(vec):
            row = [0] * len(columns)
            for bc, c in vec.items():
                row[col_index[bc]] = c
            return row

        # span of variable multiples of the previous kernel, in d-coordinates
        stacked = []
        for vec in prev_kernel:
            for var in range(4):
                shifted = {}
                for (j, mono), c in vec.items():
                    m2 = list(mono)
                    m2[var] += 1
                    shifted[(j, tuple(m2))] = c
                stacked.append(as_row(shifted))
        current_rank = _row_rank(stacked, len(columns), gens.field)
        for vec in kernel:
            trial = stacked + [as_row(vec)]
            r = _row_rank(trial, len(columns), gens.field)
            if r > current_rank:
                stacked = trial
                current_rank = r
                syz_cols.append((d, vec))
        prev_kernel = kernel
    # assemble the syzygy matrix: rows = generator columns of the input
    field = gens.field
    row_degrees = gens.col_degrees
    col_degrees = [d for d, _ in syz_cols]
    grid: List[List[MultiPoly]] = [[] for _ in row_degrees]
    for d, vec in syz_cols:
        per_row: List[Dict] = [dict() for _ in row_degrees]
        for (j, mono), c in vec.items():
            per_row[j][(mono[0], mono[1], mono[2], mono[3], 0)] = c
        for j in range(len(row_degrees)):
            grid[j].append(MultiPoly(field, per_row[j]))
    return GradedMatrix(field, row_degrees, col_degrees, grid)


# ---------------------------------------------------------------------------
# emptiness of a projective zero locus


def is_empty_projective_locus(
    minor_ideal_gens: Iterable[MultiPoly], degree_cap: Optional[int] = "default"
) -> bool:
    """Certify that homogeneous generators cut out the empty set in P^3.

    True iff the leading-term ideal of a Groebner basis contains a pure power
    of each variable.  A capped run can certify emptiness (pure powers only
    ever accumulate) but raises if it cannot decide within the budget.
    """
    gens = [g for g in minor_ideal_gens if not g.is_zero()]
    if not gens:
        return False
    field = gens[0].field
    for g in gens:
        if g.has_parameter():
            raise ValueError("locus generators must not involve the parameter a")
        if not g.is_homogeneous():
            raise InhomogeneousError("locus generators must be homogeneous")
        if g.is_constant():
            return True
    degrees = [int(g.degree) for g in gens]
    matrix = GradedMatrix(field, [0], degrees, [list(gens)], validate=False)
    if degree_cap == "default":
        degree_cap = max(degrees) + 8
    pres = groebner_basis(matrix, degree_cap=degree_cap)
    found = _has_pure_powers(pres)
    if found:
        return True
    if pres.truncated_at is not None:
        # retry without a cap before giving up
        pres = groebner_basis(matrix, degree_cap=max(degrees) + 40)
        if _has_pure_powers(pres):
            return True
        if pres.truncated_at is not None:
            raise BudgetExhaustedError("emptiness certification exceeded degree budget")
    return False


def _has_pure_powers(pres: SubmodulePresentation) -> bool:
    lts = pres.lt_generators(0) if 0 in pres._by_component else []
    for var in range(4):
        if not any(e[var] and sum(e) == e[var] for e in lts):
            return False
    return True
