"""Per-degree invariants of a presented sheaf and the q-function.

For a graded matrix s over the valuation ring, write s_n for its restriction
to columns of degree <= n and s_{n,t} for the value at the closed point
(a = 0).  The engine computes, per degree,

  alpha_n = rank of s_{n,t} over the fraction field,
  beta_n  = the largest k such that the k-minors of s_{n,t} are coprime
            (equivalently, the minimum rank of s_{n,t} at codimension-1
            points),
  b0      = the largest n at which alpha_n = beta_n and the column module of
            s_{n,t} is free of rank alpha_n (valid degrees form an interval),

and assembles the cumulative q-function:

  q#(n) = alpha_n               for n <= b0,
  q#(n) = min(alpha_n - 1, beta_n)  for n > b0,

stabilizing at (stable rank) - 1 for non-dissociated presentations.

beta is computed by a layered minor-GCD analysis: any hypersurface dropping
the rank below k divides every k-minor, so the squarefree factors of the GCD
of a sample containing one nonzero witness minor are a complete candidate
list; each candidate's actual rank drop is then measured exactly.  Blocks of
a block-diagonal matrix are analyzed independently, and a seeded random plane
restriction gives a sound fast path for certifying coprimality.
"""

from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from biliaison import modgb
from biliaison.grmatrix import (
    CharFunction,
    GradedMatrix,
    block_decomposition,
    determinant,
    minors,
    rank_fraction_field,
    rank_modulo_hypersurface,
    restrict_to_plane,
    _bareiss,
)
from biliaison.polyring import FieldSpec, MultiPoly, gcd_many, squarefree_factors

DEFAULT_SEED = 0xB111A150
DEFAULT_MINOR_BUDGET = 20000


class DissociatedSheafError(RuntimeError):
    """The presented sheaf is dissociated; the operation refuses it."""


class WindowExhaustedError(RuntimeError):
    """The degree window ended before the profile stabilized."""


class MassMismatchError(ValueError):
    """A characteristic function has the wrong total mass."""


class ProfileConsistencyError(RuntimeError):
    """Computed invariants violate a structural law; hypotheses likely fail."""


class BudgetExceededError(RuntimeError):
    """An instance is too large for the requested (oracle) computation."""


def subseed(seed: int, *labels) -> int:
    """Stable derived seed; identical across platforms and sessions."""
    text = ":".join([str(seed)] + [str(x) for x in labels])
    return int(hashlib.sha256(text.encode()).hexdigest()[:16], 16)


# ---------------------------------------------------------------------------
# profile containers


@dataclass
class DegreeRecord:
    n: int
    alpha: int
    beta: int
    q_sharp: int


@dataclass
class QProfile:
    records: List[DegreeRecord]
    b0: Optional[int]
    b0_is_lower_bound: bool
    stable_rank: int
    dissociated: bool
    stabilized: bool
    inf_l2: Optional[int]
    warnings: List[str] = dc_field(default_factory=list)

    def window(self) -> Tuple[Optional[int], Optional[int]]:
        if not self.records:
            return (None, None)
        return (self.records[0].n, self.records[-1].n)

    def record(self, n: int) -> Optional[DegreeRecord]:
        for r in self.records:
            if r.n == n:
                return r
        return None

    def alpha(self, n: int) -> int:
        lo, hi = self.window()
        if lo is None or n < lo:
            return 0
        if n > hi:
            return self.records[-1].alpha
        return self.record(n).alpha

    def q_sharp(self, n: int) -> int:
        lo, hi = self.window()
        if lo is None or n < lo:
            return 0
        if n > hi:
            return self.records[-1].q_sharp
        return self.record(n).q_sharp

    def q_function(self) -> CharFunction:
        out: Dict[int, int] = {}
        prev = 0
        for r in self.records:
            d = r.q_sharp - prev
            if d:
                out[r.n] = d
            prev = r.q_sharp
        return CharFunction(out)

    def to_json(self) -> dict:
        return {
            "window": list(self.window()),
            "rows": [
                {"n": r.n, "alpha": r.alpha, "beta": r.beta, "q_sharp": r.q_sharp}
                for r in self.records
            ],
            "q": self.q_function().to_json(),
            "b0": self.b0,
            "b0_is_lower_bound": self.b0_is_lower_bound,
            "stable_rank": self.stable_rank,
            "dissociated": self.dissociated,
            "stabilized": self.stabilized,
            "warnings": list(self.warnings),
        }


# ---------------------------------------------------------------------------
# minor-GCD analysis


@dataclass
class MinorAnalysis:
    level: int
    min_rank: int
    common_factor: Optional[MultiPoly]
    factor_ranks: Dict[str, int]
    notes: List[str]

    @property
    def coprime(self) -> bool:
        return self.min_rank >= self.level


def _shuffled_witnesses(
    m: GradedMatrix, k: int, seed: int, count: int
) -> List[Tuple[Tuple[int, ...], Tuple[int, ...], MultiPoly]]:
    """Nonsingular k x k submatrices found by elimination on seeded shuffles.

    Each run of fraction-free elimination on a row/column permutation yields
    pivot rows/columns whose minor is provably nonzero, with the determinant
    (up to sign) available as the final pivot.  Shuffling produces distinct
    witnesses even when random index picks are almost always singular.
    """
    rng = random.Random(seed)
    out = []
    seen = set()
    for t in range(count):
        rp = list(range(m.nrows))
        cp = list(range(m.ncols))
        if t:
            rng.shuffle(rp)
            rng.shuffle(cp)
        # row-major pivoting follows the shuffled row order, driving genuinely
        # different row subsets into the witnesses; the first run keeps the
        # globally cheapest pivots
        rank, rows, cols, last_pivot, sign = _bareiss(
            [[m.entries[i][j] for j in cp] for i in rp], m.field, row_major=bool(t)
        )
        if rank < k:
            continue
        rows_orig = tuple(sorted(rp[i] for i in rows))
        cols_orig = tuple(sorted(cp[j] for j in cols))
        if (rows_orig, cols_orig) in seen:
            continue
        seen.add((rows_orig, cols_orig))
        out.append((rows_orig, cols_orig, last_pivot if sign > 0 else -last_pivot))
    return out


def _restricted_minor_gcd(
    block: GradedMatrix, k: int, seed: int, sample_size: int = 6
) -> Tuple[Optional[bool], List[Tuple[Tuple[int, ...], Tuple[int, ...]]]]:
    """Plane fast path: (verdict, witness index sets).

    Restrict the block to a seeded random plane; a nonconstant common factor
    of all k-minors restricts to a nonconstant common factor of the restricted
    minors as long as one restricted minor is nonzero.  Verdict True certifies
    coprimality exactly; None means the plane was inconclusive.  The witness
    index sets carry provably nonzero minors of the original block.
    """
    for attempt in range(3):
        restricted = restrict_to_plane(block, subseed(seed, "plane", attempt))
        witnesses = _shuffled_witnesses(
            restricted, k, subseed(seed, "plane-shuffle", attempt), sample_size
        )
        if not witnesses:
            continue  # unlucky plane: restricted rank dropped
        g = gcd_many([w[2] for w in witnesses])
        index_sets = [(w[0], w[1]) for w in witnesses]
        if g.is_constant():
            return True, index_sets
        return None, index_sets
    return None, []


def coprime_minor_analysis(
    w: GradedMatrix,
    k: int,
    seed: int = DEFAULT_SEED,
    minor_budget: int = DEFAULT_MINOR_BUDGET,
) -> MinorAnalysis:
    """Exact analysis of the k-minors of w, for k = rank(w).

    Returns the minimum rank of w at codimension-1 points (= beta at this
    level) together with the discovered common factor, if any.
    """
    field = w.field
    notes: List[str] = []
    if k == 0:
        return MinorAnalysis(0, 0, None, {}, notes)
    blocks = block_decomposition(w)
    sub_infos = []
    for rows, cols in blocks:
        sub = w.submatrix(rows, cols)
        sub_infos.append((sub, rank_fraction_field(sub)))
    if sum(r for _, r in sub_infos) != k:
        raise ValueError("minor analysis requires k = rank of the matrix")
    overall = MultiPoly.one(field)
    for bi, (sub, kb) in enumerate(sub_infos):
        if kb == 0:
            continue
        count = comb(sub.nrows, kb) * comb(sub.ncols, kb)
        if count <= minor_budget and kb <= 8:
            mins = minors(sub, kb, "all")
            nonzero = [m for m in mins if not m.is_zero()]
            g = gcd_many(nonzero)
        else:
            verdict, index_sets = _restricted_minor_gcd(sub, kb, subseed(seed, "block", bi))
            if verdict is True:
                continue
            notes.append(f"block {bi}: plane certificate inconclusive, honest fallback")
            g = _honest_sampled_gcd(sub, kb, subseed(seed, "honest", bi), index_sets)
        if not g.is_constant():
            overall = overall * g
    if overall.is_constant():
        return MinorAnalysis(k, k, None, {}, notes)
    factor_ranks: Dict[str, int] = {}
    min_rank = k
    for f in squarefree_factors(overall):
        r = rank_modulo_hypersurface(w, f)
        factor_ranks[str(f)] = r
        min_rank = min(min_rank, r)
    return MinorAnalysis(k, min_rank, overall, factor_ranks, notes)


def _honest_sampled_gcd(
    sub: GradedMatrix,
    k: int,
    seed: int,
    index_sets: Sequence[Tuple[Tuple[int, ...], Tuple[int, ...]]] = (),
    sample_size: int = 4,
) -> MultiPoly:
    """GCD of a seeded sample of true k-minors, all provably nonzero.

    Index sets discovered on a plane restriction stay usable here: a nonzero
    restricted minor forces the true minor to be nonzero.
    """
    picks = list(index_sets[:sample_size])
    if len(picks) < sample_size:
        witnesses = _shuffled_witnesses(sub, k, seed, sample_size - len(picks))
        for rows, cols, _ in witnesses:
            if (rows, cols) not in picks:
                picks.append((rows, cols))
    if not picks:
        raise ValueError("no nonsingular witness of the requested size")
    acc: Optional[MultiPoly] = None
    for rp, cp in picks:
        val = determinant(sub.submatrix(rp, cp))
        if val.is_zero():
            continue
        acc = val.monic() if acc is None else gcd_many([acc, val])
        if acc.is_constant():
            break
    if acc is None:
        raise ValueError("all sampled witness minors vanished unexpectedly")
    return acc


# ---------------------------------------------------------------------------
# the four headline operations


def alpha(s: GradedMatrix, n: int) -> int:
    """Rank of the closed-point truncation s_{n,t} over the fraction field."""
    return rank_fraction_field(s.truncate_columns(n).specialize_closed_point())


def beta(
    s: GradedMatrix,
    n: int,
    seed: int = DEFAULT_SEED,
    minor_budget: int = DEFAULT_MINOR_BUDGET,
) -> int:
    """Largest k such that the k-minors of s_{n,t} have no common factor."""
    w = s.truncate_columns(n).specialize_closed_point()
    k = rank_fraction_field(w)
    if k == 0:
        return 0
    return coprime_minor_analysis(w, k, seed=seed, minor_budget=minor_budget).min_rank


def _column_module_free(w: GradedMatrix, target_rank: int) -> bool:
    """Freeness of the column module via mu(F) = rank(F)."""
    if w.ncols == 0:
        return target_rank == 0
    mu = modgb.minimal_generator_count(w)
    return mu.rank() == target_rank


def compute_b0(
    s: GradedMatrix,
    n_max: Optional[int] = None,
    seed: int = DEFAULT_SEED,
    minor_budget: int = DEFAULT_MINOR_BUDGET,
) -> Tuple[int, bool]:
    """Largest n <= n_max satisfying the b0 conditions; (value, is_lower_bound)."""
    profile = compute_q_profile(s, seed=seed, minor_budget=minor_budget,
                                window=(None, n_max) if n_max is not None else None)
    return profile.b0, profile.b0_is_lower_bound


def compute_q_profile(
    s: GradedMatrix,
    window: Optional[Tuple[Optional[int], Optional[int]]] = None,
    seed: int = DEFAULT_SEED,
    minor_budget: int = DEFAULT_MINOR_BUDGET,
) -> QProfile:
    """Full per-degree profile (alpha, beta, q#) with b0 and the stable rank.

    The window defaults to [inf L2 - 1, sup L2 + 8] and the scan stops as
    soon as the profile provably stabilizes.
    """
    key = (s.fingerprint(), window, seed, minor_budget)
    cached = _PROFILE_CACHE.get(key)
    if cached is not None:
        return cached
    s_t = s.specialize_closed_point()
    if s.ncols == 0 or s_t.is_zero_matrix():
        profile = QProfile(
            records=[], b0=None, b0_is_lower_bound=True, stable_rank=0,
            dissociated=True, stabilized=True,
            inf_l2=min(s.col_degrees) if s.col_degrees else None,
            warnings=["zero presentation: the image sheaf is 0"],
        )
        _PROFILE_CACHE[key] = profile
        return profile
    r = rank_fraction_field(s_t)
    inf_l2 = min(s.col_degrees)
    sup_l2 = max(s.col_degrees)
    n_min = inf_l2 - 1
    n_cap = sup_l2 + 8
    if window is not None:
        if window[0] is not None:
            n_min = window[0]
        if window[1] is not None:
            n_cap = window[1]
    records: List[DegreeRecord] = []
    warnings: List[str] = []
    b0: Optional[int] = None
    in_free_regime = True
    dissociated = False
    stabilized = False
    q_prev = 0
    for n in range(n_min, n_cap + 1):
        w = s_t.truncate_columns(n)
        alpha_n = rank_fraction_field(w)
        if alpha_n == 0:
            beta_n = 0
            analysis = None
        else:
            analysis = coprime_minor_analysis(
                w, alpha_n, seed=subseed(seed, "beta", n), minor_budget=minor_budget
            )
            beta_n = analysis.min_rank
        if in_free_regime:
            conditions = alpha_n == beta_n and _column_module_free(w, alpha_n)
            if conditions:
                b0 = n
            else:
                in_free_regime = False
        q_sharp = alpha_n if in_free_regime else min(alpha_n - 1, beta_n)
        if q_sharp < q_prev:
            raise ProfileConsistencyError(
                f"q#({n}) = {q_sharp} drops below q#({n - 1}) = {q_prev}; the "
                "presentation violates the standing hypotheses"
            )
        records.append(DegreeRecord(n, alpha_n, beta_n, q_sharp))
        q_prev = q_sharp
        if in_free_regime and alpha_n == r:
            dissociated = True
            stabilized = True
            break
        if not in_free_regime and alpha_n == r and q_sharp == r - 1:
            stabilized = True
            break
    if not stabilized:
        warnings.append(
            f"window [{n_min}, {n_cap}] exhausted before stabilization at rank {r}"
        )
    profile = QProfile(
        records=records,
        b0=b0,
        b0_is_lower_bound=in_free_regime,
        stable_rank=r,
        dissociated=dissociated,
        stabilized=stabilized,
        inf_l2=inf_l2,
        warnings=warnings,
    )
    _PROFILE_CACHE[key] = profile
    return profile


_PROFILE_CACHE: Dict[tuple, QProfile] = {}


# ---------------------------------------------------------------------------
# admissibility


def check_p_admissible(
    p: CharFunction, profile: QProfile
) -> Tuple[bool, str]:
    """Decide whether p is the shape of an admissible dissociated subsheaf.

    Conditions: (1) p#(n) <= q#(n) everywhere; (2) whenever p#(n) = q#(n) for
    some n <= b0, the restriction of p below n is the obligatory part, i.e.
    p#(m) = alpha_m for every m <= n.
    """
    if profile.dissociated:
        raise DissociatedSheafError("admissibility undefined for a dissociated sheaf")
    if not profile.stabilized:
        raise WindowExhaustedError("profile did not stabilize; enlarge the window")
    if p.rank() != profile.stable_rank - 1:
        raise MassMismatchError(
            f"p has total mass {p.rank()}, expected stable rank - 1 = {profile.stable_rank - 1}"
        )
    lo, hi = profile.window()
    degrees = sorted(set(list(p.support) + [n for n in range(lo, hi + 1)]))
    for n in degrees:
        if p.cumulative(n) > profile.q_sharp(n):
            return False, f"p#({n}) = {p.cumulative(n)} exceeds q#({n}) = {profile.q_sharp(n)}"
    b0 = profile.b0
    if b0 is not None:
        witnesses = [n for n in range(lo, b0 + 1) if p.cumulative(n) == profile.q_sharp(n)]
        if witnesses:
            n_star = max(witnesses)
            for m in range(lo, n_star + 1):
                if p.cumulative(m) != profile.alpha(m):
                    return False, (
                        f"p#({n_star}) = q#({n_star}) forces the obligatory part, but "
                        f"p#({m}) = {p.cumulative(m)} differs from alpha_{m} = {profile.alpha(m)}"
                    )
    return True, "admissible"


# ---------------------------------------------------------------------------
# the sampling oracle for q#


def _candidate_shapes(mass: int, degrees: Sequence[int], cap: int = 80) -> List[CharFunction]:
    """Compositions of mass over the given degrees, top-heavy first."""
    out = []
    k = len(degrees)
    for split in itertools.combinations_with_replacement(range(k), mass):
        shape: Dict[int, int] = {}
        for i in split:
            shape[degrees[i]] = shape.get(degrees[i], 0) + 1
        out.append(CharFunction(shape))
    uniq = []
    seen = set()
    for c in out:
        key = tuple(sorted(c.support.items()))
        if key not in seen:
            seen.add(key)
            uniq.append(c)
    uniq.sort(key=lambda c: -c.weighted_sum())
    return uniq[:cap]


def q_oracle(
    s: GradedMatrix,
    n: int,
    trials: int = 50,
    seed: int = DEFAULT_SEED,
    minor_budget: int = DEFAULT_MINOR_BUDGET,
) -> int:
    """Certified lower bound for q#(n) by sampling dissociated submodules.

    For each candidate mass (descending) and each candidate degree shape, draw
    random lifts through the presentation and certify injectivity plus a
    torsion-free quotient through the degeneracy criterion.  The returned
    value carries an explicit certificate; `trials` caps the sampled lifts
    per mass level.
    """
    from biliaison import families  # local import to avoid a cycle

    if s.nrows * s.ncols > 96:
        raise BudgetExceededError("oracle reserved for small instances")
    s_t = s.specialize_closed_point()
    r = rank_fraction_field(s_t)
    w_n = s_t.truncate_columns(n)
    m_hi = rank_fraction_field(w_n)
    if m_hi == 0:
        return 0
    degrees = sorted(set(d for d in s.col_degrees if d <= n))
    for mass in range(m_hi, 0, -1):
        shapes = _candidate_shapes(mass, degrees)
        if not shapes:
            continue
        for attempt in range(trials):
            shape = shapes[attempt % len(shapes)]
            rng = random.Random(subseed(seed, "oracle", n, mass, attempt))
            v = families.random_lift(s, shape.degrees(), rng)
            w = (s @ v).specialize_closed_point()
            if s.field.kind == "prime":
                # cheap numeric pre-filter; discards only, never accepts
                point = tuple(rng.randrange(1, s.field.characteristic) for _ in range(5))
                from biliaison import _linalg

                if _linalg.rank_mod_p(w.evaluate(point), s.field.characteristic) < mass:
                    continue
            if rank_fraction_field(w) != mass:
                continue
            if mass < r:
                analysis = coprime_minor_analysis(
                    w, mass, seed=subseed(seed, "oracle-analysis", n, mass, attempt),
                    minor_budget=minor_budget,
                )
                if analysis.coprime:
                    return mass
            else:
                # full-rank subsheaf: the quotient is torsion-free only if it
                # vanishes, certified by an empty degeneracy locus
                mins = minors(w, mass, "all") if comb(w.nrows, mass) * comb(w.ncols, mass) <= minor_budget else None
                if mins is not None and modgb.is_empty_projective_locus(
                    [m for m in mins if not m.is_zero()]
                ):
                    return mass
    return 0


# ---------------------------------------------------------------------------
# structural laws (used by tests and the acceptance suite)


def profile_invariant_violations(profile: QProfile) -> List[str]:
    """Check the structural laws of a stabilized profile; return violations."""
    out = []
    prev = 0
    for rec in profile.records:
        if not (0 <= rec.q_sharp <= rec.beta <= rec.alpha):
            out.append(f"n={rec.n}: expected 0 <= q# <= beta <= alpha, got {rec}")
        if rec.q_sharp < prev:
            out.append(f"n={rec.n}: q# decreases")
        prev = rec.q_sharp
        if profile.b0 is not None:
            if rec.n <= profile.b0 and rec.q_sharp != rec.alpha:
                out.append(f"n={rec.n} <= b0 but q# != alpha")
            if rec.n > profile.b0 and rec.q_sharp != min(rec.alpha - 1, rec.beta):
                out.append(f"n={rec.n} > b0 but q# != min(alpha-1, beta)")
    if profile.inf_l2 is not None and profile.b0 is not None:
        if profile.b0 < profile.inf_l2 - 1:
            out.append(f"b0 = {profile.b0} below inf L2 - 1 = {profile.inf_l2 - 1}")
    if profile.stabilized and not profile.dissociated and profile.records:
        if profile.records[-1].q_sharp != profile.stable_rank - 1:
            out.append("stabilized profile does not end at stable_rank - 1")
    return out
