"""Basis generating polynomials and Rayleigh differences.

For a matroid M with weights y, the Rayleigh difference of a pair {e,f}
is

    Delta M{e,f} = M_e^f * M_f^e - M_ef * M^ef

(subscripts contract, superscripts delete).  M is Rayleigh when this is
nonnegative on the positive orthant for every pair; pointwise this is
exactly the negative-correlation inequality M_ef * M <= M_e * M_f.

This module computes these objects exactly, expands Delta as a quadratic
in one variable y_g (the decomposition with central term Theta), and runs
the weight-preserving injection that witnesses Theta >> 0 for dependent
triples {e,f,g} as executable code.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

from .matroid import Matroid
from .poly import Coeff, Polynomial, dominates

__all__ = [
    "PairContext",
    "InjectionRecord",
    "generating_polynomial",
    "minor_polynomial",
    "rayleigh_difference",
    "central_term",
    "decomposition_check",
    "lemma31_injection",
    "theta_dominance_check",
    "closed_pair_filter",
    "negative_correlation_check",
    "SampleResult",
    "Violation",
    "negative_correlation_sample",
    "draw_dyadic_point",
]


@lru_cache(maxsize=65536)
def generating_polynomial(m: Matroid) -> Polynomial:
    """Sum of y^B over the bases B; 0 for an empty family, 1 for rank 0."""
    terms = {}
    for basis in m.bases:
        mono = tuple(sorted((el, 1) for el in basis))
        terms[mono] = 1
    return Polynomial(terms)


def minor_polynomial(m: Matroid, contract: Iterable[str], delete: Iterable[str]) -> Polynomial:
    """Generating polynomial of the minor; 0 when `contract` is dependent."""
    return generating_polynomial(m.minor(contract, delete))


@dataclass(frozen=True)
class PairContext:
    """A matroid together with a distinguished pair of distinct elements."""

    matroid: Matroid
    e: str
    f: str

    def __post_init__(self):
        if self.e == self.f:
            raise ValueError("pair elements must be distinct")
        for el in (self.e, self.f):
            if el not in self.matroid.elements:
                raise ValueError(f"element {el!r} not in ground set")

    def _others(self) -> tuple[str, ...]:
        return tuple(x for x in self.matroid.elements if x not in (self.e, self.f))


def rayleigh_difference(ctx: PairContext) -> Polynomial:
    m, e, f = ctx.matroid, ctx.e, ctx.f
    return minor_polynomial(m, (e,), (f,)) * minor_polynomial(m, (f,), (e,)) - (
        minor_polynomial(m, (e, f), ()) * minor_polynomial(m, (), (e, f))
    )


def central_term(ctx: PairContext, g: str) -> Polynomial:
    """The coefficient of y_g in Delta M{e,f} viewed as a quadratic in y_g.

    Theta M{e,f|g} = M_e^fg M_fg^e + M_f^eg M_eg^f
                   - M_g^ef M_ef^g - M_efg M^efg
    """
    m, e, f = ctx.matroid, ctx.e, ctx.f
    if g in (e, f):
        raise ValueError("g must differ from the pair elements")
    if g not in m.elements:
        raise ValueError(f"element {g!r} not in ground set")
    return (
        minor_polynomial(m, (e,), (f, g)) * minor_polynomial(m, (f, g), (e,))
        + minor_polynomial(m, (f,), (e, g)) * minor_polynomial(m, (e, g), (f,))
        - minor_polynomial(m, (g,), (e, f)) * minor_polynomial(m, (e, f), (g,))
        - minor_polynomial(m, (e, f, g), ()) * minor_polynomial(m, (), (e, f, g))
    )


def decomposition_check(ctx: PairContext, g: str) -> bool:
    """Verify Delta M = y_g^2 Delta(M/g) + y_g Theta + Delta(M\\g) exactly."""
    m, e, f = ctx.matroid, ctx.e, ctx.f
    theta = central_term(ctx, g)  # validates g
    delta = rayleigh_difference(ctx)
    contracted = rayleigh_difference(PairContext(m.contract((g,)), e, f))
    deleted = rayleigh_difference(PairContext(m.delete((g,)), e, f))
    y_g = Polynomial.variable(g)
    return delta == y_g * y_g * contracted + y_g * theta + deleted


@dataclass(frozen=True)
class InjectionRecord:
    """One step of the weight-preserving injection behind Theta >> 0.

    b1 is a basis containing g but neither e nor f; b2 a basis containing
    e and f but not g.  The output pair (a1, a2) swaps one of e/f into b1
    (replacing g) and g into b2, according to `branch`, and preserves the
    multiset union of the two bases.
    """

    b1: frozenset[str]
    b2: frozenset[str]
    a1: frozenset[str]
    a2: frozenset[str]
    branch: str  # "e∉L" or "f∉L"


def lemma31_injection(ctx: PairContext, g: str) -> list[InjectionRecord]:
    """Run the injection on all of M_g^ef x M_ef^g, with full bases.

    Requires {e,f,g} dependent.  For each pair (B1, B2) of bases with
    g in B1, e,f notin B1 and e,f in B2, g notin B2, let L be the closure
    of B1 - g.  At most one of e, f lies in L (otherwise g would too),
    and swapping the absent one produces two new bases

        branch e∉L:  A1 = B1 - g + e,  A2 = B2 - e + g
        branch f∉L:  A1 = B1 - g + f,  A2 = B2 - f + g

    with A1 ⊎ A2 = B1 ⊎ B2 as multisets.  The map is injective because the
    branch is readable off A1 and each branch is reversible.

    The swapped pair is a pair of bases whenever the matroid is simple
    (and more generally unless g is parallel to e or f); if a swap ever
    leaves the basis family, RuntimeError is raised rather than silently
    recording a bad pair.
    """
    m, e, f = ctx.matroid, ctx.e, ctx.f
    if g in (e, f) or g not in m.elements:
        raise ValueError("g must be a ground-set element distinct from the pair")
    if m.is_independent((e, f, g)):
        raise ValueError("precondition: {e,f,g} must be dependent")

    bases = m.bases
    domain1 = sorted(
        (b for b in bases if g in b and e not in b and f not in b), key=sorted
    )
    domain2 = sorted(
        (b for b in bases if e in b and f in b and g not in b), key=sorted
    )
    records = []
    seen_outputs = set()
    for b1 in domain1:
        l_flat = m.closure(b1 - {g})
        if e not in l_flat:
            moved, branch = e, "e∉L"
        elif f not in l_flat:
            moved, branch = f, "f∉L"
        else:
            # e, f in L would force g into L = closure(B1 - g), impossible.
            raise RuntimeError("both e and f in the closure of B1 - g")
        a1 = b1 - {g} | {moved}
        for b2 in domain2:
            a2 = b2 - {moved} | {g}
            if a1 not in bases or a2 not in bases:
                raise RuntimeError(
                    "injection produced a non-basis (g parallel to e or f?): "
                    f"B1={sorted(b1)} B2={sorted(b2)} -> "
                    f"A1={sorted(a1)} A2={sorted(a2)}"
                )
            out = (a1, a2)
            if out in seen_outputs:
                raise RuntimeError("injection collision")
            seen_outputs.add(out)
            records.append(InjectionRecord(b1, b2, a1, a2, branch))
    return records


def theta_dominance_check(ctx: PairContext, g: str) -> bool:
    """True iff the central term has no negative coefficient.

    Guaranteed whenever {e,f,g} is dependent (that is the content of the
    injection); this is the test harness for that claim.
    """
    m, e, f = ctx.matroid, ctx.e, ctx.f
    if g in (e, f) or g not in m.elements:
        raise ValueError("g must be a ground-set element distinct from the pair")
    if m.is_independent((e, f, g)):
        raise ValueError("precondition: {e,f,g} must be dependent")
    return dominates(central_term(ctx, g), Polynomial.zero())


def closed_pair_filter(m: Matroid, e: str, f: str) -> bool:
    """True iff {e,f} is closed: nothing else lies in its closure."""
    return m.closure((e, f)) == frozenset((e, f))


def negative_correlation_check(
    m: Matroid, e: str, f: str, point: Mapping[str, Coeff]
) -> bool:
    """Exact pointwise check of M_ef * M <= M_f * M_e at positive weights.

    Cross-multiplied so no division happens.  Raises on nonpositive
    weights and on degenerate pairs (M_e or M vanishing at the point).
    """
    if e == f:
        raise ValueError("pair elements must be distinct")
    for el in m.elements:
        w = point.get(el)
        if w is None:
            raise ValueError(f"missing weight for element {el!r}")
        if w <= 0:
            raise ValueError(f"weight for element {el!r} must be positive")
    m_e = minor_polynomial(m, (e,), ()).evaluate(point)
    m_all = generating_polynomial(m).evaluate(point)
    if m_e == 0 or m_all == 0:
        raise ValueError(f"degenerate weights for pair ({e!r}, {f!r})")
    m_f = minor_polynomial(m, (f,), ()).evaluate(point)
    m_ef = minor_polynomial(m, (e, f), ()).evaluate(point)
    return m_ef * m_all <= m_f * m_e


# ---------------------------------------------------------------------------
# Randomized sampling with exact dyadic weights.
#
# Weights are drawn log-uniformly from [2^-9, 2^9) ⊂ [1e-3, 1e3] as dyadic
# rationals m * 2^(k-19) with a 20-bit mantissa.  Scaling every weight by
# 2^28 turns them into integers without changing any of the homogeneous
# comparisons below, so the sampler works in exact integer arithmetic.

_MANTISSA_BITS = 19
_EXP_LOW, _EXP_HIGH = -9, 9  # exponent k drawn from [_EXP_LOW, _EXP_HIGH)
_SCALE_SHIFT = _MANTISSA_BITS - _EXP_LOW  # weight * 2^_SCALE_SHIFT is integral


def _draw_scaled_weight(rng: random.Random) -> int:
    """One dyadic weight, pre-scaled by 2^_SCALE_SHIFT (an integer)."""
    k = rng.randrange(_EXP_LOW, _EXP_HIGH)
    mantissa = (1 << _MANTISSA_BITS) | rng.getrandbits(_MANTISSA_BITS)
    return mantissa << (k - _EXP_LOW)


def draw_dyadic_point(rng: random.Random, elements: Sequence[str]) -> dict[str, Fraction]:
    """A full positive weight vector of dyadic rationals in [2^-9, 2^9)."""
    return {
        el: Fraction(_draw_scaled_weight(rng), 1 << _SCALE_SHIFT) for el in elements
    }


class Violation(NamedTuple):
    pair: tuple[str, str]
    sample_index: int
    point: dict[str, Fraction]


class SampleResult(NamedTuple):
    pairs: tuple[tuple[str, str], ...]
    samples: int
    checks: int
    violations: tuple[Violation, ...]
    cross_checks: int


def negative_correlation_sample(
    m: Matroid,
    pairs: Optional[Sequence[tuple[str, str]]] = None,
    samples: int = 1000,
    seed: int = 0,
    cross_check_every: int = 100,
) -> SampleResult:
    """Check negative correlation at `samples` seeded random weight vectors.

    For each sampled point the inequality is evaluated for every requested
    pair (default: all unordered pairs) by exact integer arithmetic on the
    scaled basis weights: with T_x the sum of basis weights over bases
    whose intersection with {e,f} is x,

        M_e M_f - M_ef M  =  T_e T_f - T_ef T_0   (at the point),

    which is also the value of Delta M{e,f} there.  Every
    `cross_check_every`-th sample one pair is re-verified through the
    polynomial-evaluation path as an independent guard.
    """
    if pairs is None:
        els = m.elements
        pairs = [(els[i], els[j]) for i in range(len(els)) for j in range(i + 1, len(els))]
    else:
        pairs = [tuple(p) for p in pairs]
        for e, f in pairs:
            if e == f:
                raise ValueError("pair elements must be distinct")
            if e not in m.elements or f not in m.elements:
                raise ValueError(f"pair ({e!r}, {f!r}) not in ground set")
    if not pairs:
        return SampleResult((), samples, 0, (), 0)
    rng = random.Random(seed)
    index = {el: i for i, el in enumerate(m.elements)}
    pair_bits = [(1 << index[e], 1 << index[f]) for e, f in pairs]
    masks = m.basis_masks
    nelems = len(m.elements)

    violations = []
    cross_checks = 0
    checks = 0
    for s in range(samples):
        scaled = [_draw_scaled_weight(rng) for _ in range(nelems)]
        basis_weights = []
        for b in masks:
            w = 1
            mask = b
            while mask:
                low = mask & -mask
                w *= scaled[low.bit_length() - 1]
                mask ^= low
            basis_weights.append(w)

        point = None
        for p_idx, ((e, f), (ebit, fbit)) in enumerate(zip(pairs, pair_bits)):
            t_both = t_e = t_f = t_none = 0
            for b, w in zip(masks, basis_weights):
                has_e = b & ebit
                has_f = b & fbit
                if has_e and has_f:
                    t_both += w
                elif has_e:
                    t_e += w
                elif has_f:
                    t_f += w
                else:
                    t_none += w
            ok = t_e * t_f >= t_both * t_none
            checks += 1
            if not ok:
                if point is None:
                    point = {
                        el: Fraction(scaled[i], 1 << _SCALE_SHIFT)
                        for el, i in index.items()
                    }
                violations.append(Violation((e, f), s, dict(point)))
            if (
                cross_check_every
                and s % cross_check_every == 0
                and p_idx == (s // cross_check_every) % len(pairs)
            ):
                if point is None:
                    point = {
                        el: Fraction(scaled[i], 1 << _SCALE_SHIFT)
                        for el, i in index.items()
                    }
                try:
                    exact = negative_correlation_check(m, e, f, point)
                except ValueError:
                    exact = ok  # degenerate pair (loop): trivially equal sides
                if exact != ok:
                    raise RuntimeError(
                        f"sampler disagrees with exact evaluation at pair ({e}, {f})"
                    )
                cross_checks += 1
    return SampleResult(tuple(pairs), samples, checks, tuple(violations), cross_checks)
