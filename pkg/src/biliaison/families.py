"""Curve families: sheaf degree, minimal shift, and (degree, genus) extraction.

A verified morphism from a dissociated sheaf of rank r-1 into the presented
sheaf N yields a flat family of space curves with twisted ideal sheaf
J_C(h).  The shift is h = sum n*p(n) + deg N; degree and genus are read off
the Hilbert polynomial of the quotient module

    Q = (column module of s at a=0) / (columns of s*v at a=0),

which is saturation-invariant, so the unsaturated quotient suffices:

    P_Q(n) = C(n+h+3, 3) - d*(n+h) - 1 + g.

Verification is the degeneracy-locus criterion: the specialized composite
W = (s*v)|_{a=0} must have rank r-1 (injectivity at the closed point, hence
flatness) and coprime (r-1)-minors (degeneracy locus of codimension >= 2,
hence a torsion-free cokernel).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from biliaison import modgb
from biliaison.grmatrix import (
    CharFunction,
    GradedMatrix,
    identity_matrix,
    rank_fraction_field,
    stack_blocks,
)
from biliaison.modgb import HilbertPolynomial
from biliaison.polyring import FieldSpec, MultiPoly
from biliaison.qprofile import (
    DEFAULT_MINOR_BUDGET,
    DEFAULT_SEED,
    DissociatedSheafError,
    QProfile,
    WindowExhaustedError,
    check_p_admissible,
    compute_q_profile,
    coprime_minor_analysis,
    subseed,
)


class InadmissibleShapeError(ValueError):
    """The candidate characteristic function fails the admissibility test."""


class RankDeficiencyError(RuntimeError):
    """Sampled morphism is not injective at the closed point; resample."""


class TorsionError(RuntimeError):
    """Sampled morphism has a codimension-1 degeneracy (torsion); resample."""


class ShapeMismatchError(RuntimeError):
    """Quotient Hilbert polynomial is not that of a twisted curve ideal."""


class RetryExhaustedError(RuntimeError):
    """No general morphism found within the retry cap."""


class PresentationError(RuntimeError):
    """The presentation produced a non-integral sheaf degree."""


@dataclass
class Certificate:
    rank: int
    coprime: bool
    seed: int
    retries: int = 0
    notes: List[str] = dc_field(default_factory=list)

    def summary(self) -> dict:
        return {
            "rank": self.rank,
            "coprime_minors": self.coprime,
            "seed": self.seed,
            "retries": self.retries,
            "notes": list(self.notes),
        }


@dataclass
class MinimalFamilyReport:
    q: CharFunction
    deg_N: int
    h0: int
    d0: int
    g0: int
    ideal_sheaf_polynomial: HilbertPolynomial
    seed: int
    certificate: Certificate
    conservation: Tuple[HilbertPolynomial, HilbertPolynomial, HilbertPolynomial]

    def to_json(self) -> dict:
        return {
            "q": self.q.to_json(),
            "deg_N": self.deg_N,
            "h0": self.h0,
            "d0": self.d0,
            "g0": self.g0,
            "hilbert_polynomial": self.ideal_sheaf_polynomial.to_json(),
            "seed": self.seed,
            "certificate": self.certificate.summary(),
        }

    def to_json_string(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)


# ---------------------------------------------------------------------------
# sheaf degree and minimal shift


def sheaf_degree(s: GradedMatrix, profile: Optional[QProfile] = None) -> int:
    """First Chern number of the presented sheaf, from Hilbert bookkeeping.

    With P_N the Hilbert polynomial of the closed-point column module and r
    the stable rank, deg N = 2 * ([n^2] P_N - r).
    """
    s_t = s.specialize_closed_point()
    r = profile.stable_rank if profile is not None else rank_fraction_field(s_t)
    pres = modgb.groebner_basis(s_t)
    p_n = pres.hilbert_polynomial()
    if p_n.coeffs[3] != Fraction(r, 6):
        raise PresentationError(
            f"leading Hilbert coefficient {p_n.coeffs[3]} does not match rank {r}"
        )
    deg = 2 * (p_n.coeffs[2] - r)
    if deg.denominator != 1:
        raise PresentationError(f"sheaf degree {deg} is not an integer")
    return int(deg)


def minimal_shift(profile: QProfile, deg_n: int) -> int:
    """h0 = sum n*q(n) + deg N."""
    if profile.dissociated:
        raise DissociatedSheafError("minimal shift undefined for a dissociated sheaf")
    if not profile.stabilized:
        raise WindowExhaustedError("profile did not stabilize")
    return profile.q_function().weighted_sum() + deg_n


# ---------------------------------------------------------------------------
# sampling lifts


def random_homogeneous(field: FieldSpec, degree: int, rng: random.Random) -> MultiPoly:
    if degree < 0:
        return MultiPoly.zero(field)
    terms = {}
    for mono in modgb.monomials_of_degree(degree):
        if field.kind == "prime":
            c = rng.randrange(field.characteristic)
        else:
            c = rng.randrange(-20, 21)
        if c:
            terms[(mono[0], mono[1], mono[2], mono[3], 0)] = field.normalize(c)
    return MultiPoly(field, terms)


def random_lift(s: GradedMatrix, column_degrees: Sequence[int], rng: random.Random) -> GradedMatrix:
    """Random homogeneous v with rows matching L2 and the given column degrees."""
    grid: List[List[MultiPoly]] = []
    for row_deg in s.col_degrees:
        grid.append([
            random_homogeneous(s.field, d - row_deg, rng) for d in column_degrees
        ])
    return GradedMatrix(s.field, s.col_degrees, list(column_degrees), grid, validate=False)


def sample_general_morphism(
    s: GradedMatrix,
    p: CharFunction,
    seed: int = DEFAULT_SEED,
    profile: Optional[QProfile] = None,
) -> GradedMatrix:
    """Random lift v : P -> L2 for an admissible shape p (deterministic in seed)."""
    if profile is None:
        profile = compute_q_profile(s)
    ok, reason = check_p_admissible(p, profile)
    if not ok:
        raise InadmissibleShapeError(reason)
    rng = random.Random(subseed(seed, "lift"))
    return random_lift(s, p.degrees(), rng)


def verify_general_morphism(
    s: GradedMatrix,
    v: GradedMatrix,
    profile: Optional[QProfile] = None,
    seed: int = DEFAULT_SEED,
    minor_budget: int = DEFAULT_MINOR_BUDGET,
) -> Certificate:
    """Certify injectivity at the closed point and a torsion-free cokernel."""
    if profile is None:
        profile = compute_q_profile(s)
    r = profile.stable_rank
    mass = v.ncols
    if mass != r - 1:
        raise ValueError(f"lift has {mass} columns, expected rank - 1 = {r - 1}")
    w = (s @ v).specialize_closed_point()
    rank = rank_fraction_field(w)
    if rank != r - 1:
        raise RankDeficiencyError(
            f"composite has rank {rank} at the closed point, needs {r - 1}"
        )
    analysis = coprime_minor_analysis(
        w, r - 1, seed=subseed(seed, "verify"), minor_budget=minor_budget
    )
    if not analysis.coprime:
        raise TorsionError(
            f"(r-1)-minors share the factor {analysis.common_factor}; "
            f"degeneracy in codimension 1"
        )
    return Certificate(rank=rank, coprime=True, seed=seed, notes=analysis.notes)


# ---------------------------------------------------------------------------
# Hilbert polynomial of the quotient and (d, g)


def _fit_cubic_window(values_fn, start: int, budget: int) -> HilbertPolynomial:
    """First 10-degree window whose values lie on a single cubic."""
    for w in range(start, budget - 8):
        values = [values_fn(n) for n in range(w, w + 10)]
        poly = HilbertPolynomial.fit_cubic(list(range(w, w + 4)), values[:4])
        if all(poly(n) == val for n, val in zip(range(w, w + 10), values)):
            return poly
    raise modgb.BudgetExhaustedError("no stable cubic window within the degree budget")


def quotient_hilbert_data(
    s: GradedMatrix, v: GradedMatrix
) -> Tuple[HilbertPolynomial, HilbertPolynomial]:
    """(P_N, P_Q) for Q = column module of s_t modulo columns of (s*v)_t."""
    s_t = s.specialize_closed_point()
    w = (s @ v).specialize_closed_point()
    pres_n = modgb.groebner_basis(s_t)
    pres_u = modgb.groebner_basis(w)
    p_n = pres_n.hilbert_polynomial()
    start = min(s_t.col_degrees) - 1
    budget_candidates = [
        b for b in (pres_n.certified_degree(), pres_u.certified_degree()) if b is not None
    ]
    budget = min(budget_candidates) if budget_candidates else start + 40

    def q_dim(n: int) -> int:
        return pres_n.hilbert_function(n) - pres_u.hilbert_function(n)

    p_q = _fit_cubic_window(q_dim, start, budget)
    return p_n, p_q


def family_degree_genus(
    s: GradedMatrix,
    v: GradedMatrix,
    p: CharFunction,
    profile: Optional[QProfile] = None,
    deg_n: Optional[int] = None,
) -> Tuple[int, int, int]:
    """(h, d, g) of the curve family cut out by a verified morphism."""
    if profile is None:
        profile = compute_q_profile(s)
    if deg_n is None:
        deg_n = sheaf_degree(s, profile)
    h = deg_n + p.weighted_sum()
    _, p_q = quotient_hilbert_data(s, v)
    # P_Q(n) = C(n+h+3,3) - d*(n+h) - 1 + g
    twisted = HilbertPolynomial.binomial_shift(-h)
    diff = twisted - p_q  # should be d*(n+h) + 1 - g, a linear polynomial
    if diff.coeffs[3] != 0 or diff.coeffs[2] != 0:
        raise ShapeMismatchError(
            f"quotient Hilbert polynomial is not a twisted curve ideal: residual {diff}"
        )
    d = diff.coeffs[1]
    if d.denominator != 1 or d <= 0:
        raise ShapeMismatchError(f"curve degree {d} is not a positive integer")
    d = int(d)
    g = d * h + 1 - diff.coeffs[0]
    if g.denominator != 1:
        raise ShapeMismatchError(f"genus {g} is not an integer")
    return h, d, int(g)


def hilbert_conservation(
    s: GradedMatrix, v: GradedMatrix, p: CharFunction
) -> Tuple[HilbertPolynomial, HilbertPolynomial, HilbertPolynomial]:
    """(P_N, P_P, P_Q); a verified morphism satisfies P_Q + P_P = P_N."""
    p_n, p_q = quotient_hilbert_data(s, v)
    p_p = HilbertPolynomial.dissociated(p)
    return p_n, p_p, p_q


# ---------------------------------------------------------------------------
# the minimal family


def minimal_family(
    s: GradedMatrix,
    seed: int = DEFAULT_SEED,
    profile: Optional[QProfile] = None,
    retry_cap: int = 10,
    minor_budget: int = DEFAULT_MINOR_BUDGET,
) -> MinimalFamilyReport:
    """Minimal-shift curve family for the presented sheaf (p = q)."""
    if profile is None:
        profile = compute_q_profile(s, seed=seed, minor_budget=minor_budget)
    if profile.dissociated:
        raise DissociatedSheafError("no minimal curve family for a dissociated sheaf")
    if not profile.stabilized:
        raise WindowExhaustedError("profile did not stabilize")
    q = profile.q_function()
    deg_n = sheaf_degree(s, profile)
    h0 = minimal_shift(profile, deg_n)
    last_error: Optional[Exception] = None
    for attempt in range(retry_cap):
        attempt_seed = subseed(seed, "minimal-family", attempt)
        v = sample_general_morphism(s, q, seed=attempt_seed, profile=profile)
        try:
            cert = verify_general_morphism(
                s, v, profile=profile, seed=attempt_seed, minor_budget=minor_budget
            )
            h, d, g = family_degree_genus(s, v, q, profile=profile, deg_n=deg_n)
        except (RankDeficiencyError, TorsionError, ShapeMismatchError) as exc:
            last_error = exc
            continue
        if h != h0:
            raise PresentationError(f"shift {h} disagrees with h0 = {h0}")
        cert.retries = attempt
        cert.seed = seed
        p_n, p_p, p_q = hilbert_conservation(s, v, q)
        ideal_poly = HilbertPolynomial.binomial_shift(0) - HilbertPolynomial.from_coeffs(
            [Fraction(1) - g, Fraction(d)]
        )
        return MinimalFamilyReport(
            q=q,
            deg_N=deg_n,
            h0=h0,
            d0=d,
            g0=g,
            ideal_sheaf_polynomial=ideal_poly,
            seed=seed,
            certificate=cert,
            conservation=(p_n, p_p, p_q),
        )
    raise RetryExhaustedError(
        f"no general morphism found in {retry_cap} attempts; last failure: {last_error}"
    )


# ---------------------------------------------------------------------------
# elementary augmentation (trivial biliaison step)


def augment_with_free_summand(s: GradedMatrix, degree: int) -> GradedMatrix:
    """Extend the presentation by a free rank-one summand in the given degree."""
    one_block = identity_matrix(s.field, [degree])
    return stack_blocks([[s, None], [None, one_block]])
