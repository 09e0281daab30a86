"""Sum-of-squares certificates for rank-3 Rayleigh differences.

For a rank-3 matroid and a pair e != f of elements, the certificate machinery
builds the quartic

    P(e,f)  =  1/4 * sum_{a outside {e,f}}  (y_a*B(a) - C(a)*D(a))^2

where, writing cl() for closure,

    L(a,e) = cl({a,e}) - {a,e},     L(a,f) = cl({a,f}) - {a,f},
    U(a)   = E - (cl({a,e}) | cl({a,f})),
    B(a)   = sum of y over U(a),    C(a) = sum over L(a,e),
    D(a)   = sum over L(a,f),

and checks the coefficientwise dominance Delta{e,f} >> P.  Since P is a
quarter-sum of squares, dominance certifies Delta{e,f} >= 0 on the positive
orthant, i.e. that e and f are negatively correlated at every weighting.

Before building P, `certify` reduces the pair: while some third element g lies
in the closure of {e,f}, g is deleted.  Each such deletion can only shrink the
Rayleigh difference coefficientwise, so a certificate for the reduced matroid
covers the original one.  A parallel pair (dependent {e,f}) short-circuits:
then no basis contains both e and f, the negative product vanishes, and the
difference is a product of two basis generating polynomials, which is
coefficientwise nonnegative outright.

`table_coefficients` cross-checks the case analysis behind the dominance: it
classifies every degree-4 monomial of Delta and P over all small catalog
matroids by the isomorphism type of the restriction to the monomial's support
plus {e,f}, and compares the observed coefficients against an embedded table
of expected values per type.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple, Optional

from .catalog import enumerate_simple_rank3, named
from .matroid import Matroid, lines_of
from .poly import (
    GGHH,
    GGHI,
    GHIJ,
    MonomialShape,
    Polynomial,
    classify_shape,
    dominates,
    format_polynomial,
)
from .rayleigh import PairContext, minor_polynomial, rayleigh_difference

REPORT_SCHEMA = "rayleigh-kit/1"


# ---------------------------------------------------------------------------
# The Ansatz.


@dataclass(frozen=True)
class AnsatzParts:
    """The ingredients of one square term T_a = (y_a*B_a - C_a*D_a)^2."""

    a: str
    L_ae: frozenset[str]
    L_af: frozenset[str]
    U_a: frozenset[str]
    B_a: Polynomial
    C_a: Polynomial
    D_a: Polynomial
    T_a: Polynomial

    def square_root_term(self) -> Polynomial:
        """y_a*B_a - C_a*D_a, the polynomial whose square is T_a."""
        return Polynomial.variable(self.a) * self.B_a - self.C_a * self.D_a


def ansatz_parts(m: Matroid, e: str, f: str, a: str) -> AnsatzParts:
    """Compute L(a,e), L(a,f), U(a) and the polynomials B, C, D, T for one a."""
    if m.rank != 3:
        raise ValueError("certificate Ansatz undefined above rank 3"
                         if m.rank > 3 else "Ansatz requires a rank-3 matroid")
    for el in (e, f, a):
        if el not in m.elements:
            raise ValueError(f"element {el!r} not in the ground set")
    if e == f:
        raise ValueError("Ansatz needs two distinct elements e, f")
    if a in (e, f):
        raise ValueError("Ansatz element a must differ from e and f")
    cl_ae = m.closure((a, e))
    cl_af = m.closure((a, f))
    l_ae = cl_ae - {a, e}
    l_af = cl_af - {a, f}
    u_a = frozenset(m.elements) - (cl_ae | cl_af)
    b_a = Polynomial.sum_of_variables(u_a)
    c_a = Polynomial.sum_of_variables(l_ae)
    d_a = Polynomial.sum_of_variables(l_af)
    root = Polynomial.variable(a) * b_a - c_a * d_a
    return AnsatzParts(a, l_ae, l_af, u_a, b_a, c_a, d_a, root * root)


def _all_parts(m: Matroid, e: str, f: str) -> list[AnsatzParts]:
    return [ansatz_parts(m, e, f, a) for a in m.elements if a not in (e, f)]


def ansatz_polynomial(m: Matroid, e: str, f: str) -> Polynomial:
    """P = 1/4 * sum of T_a over all a outside {e,f}; a sum of squares."""
    total = Polynomial.zero()
    for parts in _all_parts(m, e, f):
        total = total + parts.T_a
    return total * Fraction(1, 4)


def _check_closed_pair_structure(
    m: Matroid, e: str, f: str, delta: Polynomial, four_p: Polynomial,
    parts_list: list[AnsatzParts],
) -> None:
    """Structural facts that hold when m is simple and {e,f} is closed.

    Every monomial of Delta and of 4P is degree-4 in variables outside
    {e,f} with exponents <= 2, and each square's index sets partition
    cleanly.  Violations indicate a bug, hence RuntimeError.
    """
    for label, poly in (("delta", delta), ("ansatz", four_p)):
        for mono, _ in poly.terms():
            if classify_shape(mono) is None:
                raise RuntimeError(
                    f"internal invariant violated: {label} monomial {mono} "
                    "is not of shape y_g^2y_h^2, y_g^2y_hy_i or y_gy_hy_iy_j"
                )
            if any(var in (e, f) for var, _ in mono):
                raise RuntimeError(
                    f"internal invariant violated: {label} mentions e or f"
                )
    for parts in parts_list:
        groups = (parts.L_ae, parts.L_af, parts.U_a)
        banned = {parts.a, e, f}
        for grp in groups:
            if grp & banned:
                raise RuntimeError(
                    "internal invariant violated: index sets must exclude a, e, f"
                )
        for g1, g2 in itertools.combinations(groups, 2):
            if g1 & g2:
                raise RuntimeError(
                    "internal invariant violated: L(a,e), L(a,f), U(a) overlap"
                )


# ---------------------------------------------------------------------------
# Reduction to a closed pair.


class ReductionResult(NamedTuple):
    matroid: Matroid
    chain: tuple[str, ...]
    pair_dependent: bool


def lemma33_reduce(m: Matroid, e: str, f: str) -> ReductionResult:
    """Delete third elements from the closure of {e,f} until the pair is closed.

    Each deleted g satisfies rank({e,f,g}) = 2, and the deletion can only
    shrink the Rayleigh difference coefficientwise, so certifying the reduced
    matroid certifies the original.  A dependent (parallel) pair is returned
    unchanged with `pair_dependent` set; the caller should use the product
    form of the difference instead.
    """
    if m.rank != 3:
        raise ValueError("reduction applies to rank-3 matroids")
    for el in (e, f):
        if el not in m.elements:
            raise ValueError(f"element {el!r} not in the ground set")
    if m.is_dependent((e, f)):
        return ReductionResult(m, (), True)
    chain: list[str] = []
    current = m
    while True:
        extra = current.closure((e, f)) - {e, f}
        if not extra:
            return ReductionResult(current, tuple(chain), False)
        g = next(el for el in current.elements if el in extra)
        chain.append(g)
        current = current.delete((g,))


# ---------------------------------------------------------------------------
# Certification.


@dataclass(frozen=True)
class CertificateReport:
    """Outcome of certifying one pair.

    `delta`, `P` and `residual` refer to the certified (reduced) matroid;
    `delta = P + residual` exactly, and `verdict` holds iff every residual
    coefficient is nonnegative.  `delta_original` is the difference on the
    input matroid before reduction, and `unreduced_dominance` reports whether
    the dominance already held there (None outside the reduced-ansatz mode).
    """

    pair: tuple[str, str]
    mode: str  # "rank-le-2" | "product" | "reduced-ansatz"
    reduced_pair_closed: bool
    reduction_chain: tuple[str, ...]
    P: Polynomial
    delta: Polynomial
    residual: Polynomial
    verdict: bool
    square_terms: tuple[tuple[str, Polynomial], ...]
    delta_original: Polynomial
    unreduced_dominance: Optional[bool]

    def __post_init__(self):
        if self.delta != self.P + self.residual:
            raise RuntimeError("internal invariant violated: delta != P + residual")

    def to_json_dict(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "kind": "certificate",
            "pair": list(self.pair),
            "mode": self.mode,
            "reduced_pair_closed": self.reduced_pair_closed,
            "reduction_chain": list(self.reduction_chain),
            "delta": format_polynomial(self.delta),
            "ansatz": format_polynomial(self.P),
            "residual": format_polynomial(self.residual),
            "residual_terms": len(self.residual),
            "verdict": self.verdict,
            "squares": [
                [a, format_polynomial(root)] for a, root in self.square_terms
            ],
            "delta_original": format_polynomial(self.delta_original),
            "unreduced_dominance": self.unreduced_dominance,
        }


def certify(m: Matroid, e: str, f: str) -> CertificateReport:
    """Certify that Delta{e,f} is nonnegative on the positive orthant.

    Rank <= 2: Delta itself is coefficientwise nonnegative, so P = 0.
    Rank 3, dependent pair: the negative product vanishes and Delta is a
    product of basis generating polynomials, again >> 0 with P = 0.
    Rank 3 otherwise: reduce the pair to a closed one, build the Ansatz P on
    the reduced matroid and check Delta_reduced >> P.  The coefficient
    comparison is done on 4*Delta vs 4*P so that it runs in integers.

    Inputs must be loopless; rank > 3 is rejected (non-Rayleigh matroids
    exist there, and the Ansatz is not defined).
    """
    for el in (e, f):
        if el not in m.elements:
            raise ValueError(f"element {el!r} not in the ground set")
    if e == f:
        raise ValueError("certify needs two distinct elements")
    if m.rank > 3:
        raise ValueError("certificate Ansatz undefined above rank 3")
    if m.loops():
        raise ValueError(
            f"certify requires a loopless matroid (loops: {sorted(m.loops())})"
        )
    pair = (e, f)
    delta_orig = rayleigh_difference(PairContext(m, e, f))
    if m.rank <= 2:
        verdict = dominates(delta_orig, Polynomial.zero())
        return CertificateReport(
            pair=pair,
            mode="rank-le-2",
            reduced_pair_closed=m.closure((e, f)) == frozenset((e, f)),
            reduction_chain=(),
            P=Polynomial.zero(),
            delta=delta_orig,
            residual=delta_orig,
            verdict=verdict,
            square_terms=(),
            delta_original=delta_orig,
            unreduced_dominance=None,
        )
    reduced, chain, pair_dependent = lemma33_reduce(m, e, f)
    if pair_dependent:
        # No basis contains both e and f, so Delta = M_e^f * M_f^e >> 0.
        verdict = dominates(delta_orig, Polynomial.zero())
        return CertificateReport(
            pair=pair,
            mode="product",
            reduced_pair_closed=False,
            reduction_chain=(),
            P=Polynomial.zero(),
            delta=delta_orig,
            residual=delta_orig,
            verdict=verdict,
            square_terms=(),
            delta_original=delta_orig,
            unreduced_dominance=None,
        )
    parts_list = _all_parts(reduced, e, f)
    four_p = Polynomial.zero()
    for parts in parts_list:
        four_p = four_p + parts.T_a
    p_poly = four_p * Fraction(1, 4)
    delta_red = rayleigh_difference(PairContext(reduced, e, f))
    verdict = dominates(delta_red * 4, four_p)
    if reduced.is_simple():
        _check_closed_pair_structure(reduced, e, f, delta_red, four_p, parts_list)
    if chain:
        unreduced = dominates(delta_orig * 4, ansatz_polynomial(m, e, f) * 4)
    else:
        unreduced = verdict
    return CertificateReport(
        pair=pair,
        mode="reduced-ansatz",
        reduced_pair_closed=True,
        reduction_chain=chain,
        P=p_poly,
        delta=delta_red,
        residual=delta_red - p_poly,
        verdict=verdict,
        square_terms=tuple(
            (parts.a, parts.square_root_term()) for parts in parts_list
        ),
        delta_original=delta_orig,
        unreduced_dominance=unreduced,
    )


# ---------------------------------------------------------------------------
# Coefficient tables.
#
# For a simple matroid with {e,f} closed, the coefficient of a degree-4
# monomial in Delta{e,f} (and each of its two product terms) depends only on
# the isomorphism type of the restriction to {e,f} plus the monomial's
# support, with {e,f} marked setwise and, for the y_g^2*y_h*y_i shape, g
# marked as well.  The rows below enumerate all types that occur, keyed by
# the named 4/5/6-point instances; `positive` is the coefficient in
# M_e^f*M_f^e, `negative` the one in M_{ef}*M^{ef}.  The Ansatz coefficient
# additionally depends on the ambient matroid (extra points can contribute
# C(a)^2*D(a)^2 terms), so each row carries the full set of attainable
# values, tagged by a case note.

_F = Fraction


class TableRow(NamedTuple):
    family: str
    label: str
    instance: str
    pair: tuple[str, str]
    g: Optional[str]
    positive: int
    negative: int
    delta: int
    p_allowed: tuple[Fraction, ...]
    note: str


def _row(family, instance, pair, g, positive, negative, delta, p_allowed, note):
    roman = instance.rsplit(".", 1)[-1]
    label = f"{roman}{{{pair[0]},{pair[1]}}}" + (f",{g}" if g is not None else "")
    return TableRow(
        family, label, instance, pair, g, positive, negative, delta,
        tuple(p_allowed), note,
    )


_TABLE_ROWS = {
    GGHH: (
        _row(GGHH, "fig1.I", ("1", "2"), None, 0, 0, 0, (_F(0),), ""),
        _row(GGHH, "fig1.II", ("1", "2"), None, 1, 0, 1,
             (_F(1, 2), _F(3, 4), _F(1)), "A"),
    ),
    GGHI: (
        _row(GGHI, "fig2.I", ("1", "2"), "3", 0, 0, 0, (_F(0),), ""),
        _row(GGHI, "fig2.II", ("1", "2"), "3", 1, 1, 0, (_F(0),), ""),
        _row(GGHI, "fig2.II", ("1", "2"), "5", 1, 1, 0, (_F(0),), ""),
        _row(GGHI, "fig2.III", ("1", "2"), "3", 2, 0, 2, (_F(1, 2),), "B"),
        _row(GGHI, "fig2.III", ("1", "3"), "2", 2, 1, 1, (_F(1, 2), _F(1)), "C"),
        _row(GGHI, "fig2.III", ("1", "3"), "4", 1, 1, 0, (_F(0),), ""),
        _row(GGHI, "fig2.IV", ("1", "2"), "3", 2, 1, 1, (_F(1, 2),), "B"),
    ),
    GHIJ: (
        _row(GHIJ, "fig3.I", ("1", "2"), None, 0, 0, 0, (_F(0),), ""),
        _row(GHIJ, "fig3.II", ("1", "2"), None, 3, 3, 0, (_F(0),), ""),
        _row(GHIJ, "fig3.III", ("1", "2"), None, 6, 0, 6, (_F(0),), ""),
        _row(GHIJ, "fig3.III", ("1", "3"), None, 3, 3, 0, (_F(0),), ""),
        _row(GHIJ, "fig3.IV", ("1", "2"), None, 2, 4, -2, (_F(-2),), "D"),
        _row(GHIJ, "fig3.V", ("1", "4"), None, 3, 4, -1, (_F(-1),), "E"),
        _row(GHIJ, "fig3.V", ("4", "5"), None, 4, 3, 1, (_F(-1, 2),), "F"),
        _row(GHIJ, "fig3.VI", ("1", "2"), None, 4, 4, 0, (_F(-1, 2),), "G"),
        _row(GHIJ, "fig3.VI", ("1", "3"), None, 5, 3, 2, (_F(0),), ""),
        _row(GHIJ, "fig3.VI", ("3", "6"), None, 4, 4, 0, (_F(0),), ""),
        _row(GHIJ, "fig3.VII", ("1", "2"), None, 5, 4, 1, (_F(0), _F(1)), "H"),
        _row(GHIJ, "fig3.VIII", ("1", "2"), None, 6, 3, 3, (_F(0),), ""),
        _row(GHIJ, "fig3.VIII", ("1", "4"), None, 5, 4, 1, (_F(0),), ""),
        _row(GHIJ, "fig3.IX", ("1", "2"), None, 6, 4, 2, (_F(0),), ""),
    ),
}


class RowCheck(NamedTuple):
    row: TableRow
    monomial_vars: tuple[str, ...]
    positive: int
    negative: int
    delta: int
    p_value: Fraction
    ok: bool


class RowUsage(NamedTuple):
    label: str
    occurrences: int
    p_observed: tuple[Fraction, ...]


class TableReport(NamedTuple):
    family: str
    checks: tuple[RowCheck, ...]
    scan_rows: tuple[RowUsage, ...]
    scan_occurrences: int
    unmatched: tuple[str, ...]
    mismatches: tuple[str, ...]
    uncovered: tuple[str, ...]
    all_match: bool


def _pinned_key(m: Matroid, e: str, f: str, g: Optional[str]) -> tuple:
    """Canonical form of (m, {e,f} setwise, optionally g pointwise).

    Minimal sorted line-mask tuple over all relabelings sending {e,f} to
    positions {0,1} and g (when given) to position 2.
    """
    els = m.elements
    n = len(els)
    lines = lines_of(m)
    rest = [x for x in els if x not in (e, f) and x != g]
    offset = 3 if g is not None else 2
    best = None
    for e_pos, f_pos in ((0, 1), (1, 0)):
        base = {e: e_pos, f: f_pos}
        if g is not None:
            base[g] = 2
        for perm in itertools.permutations(range(offset, n)):
            pos = dict(base)
            pos.update(zip(rest, perm))
            key = tuple(
                sorted(sum(1 << pos[p] for p in line) for line in lines)
            )
            if best is None or key < best:
                best = key
    return (n, g is not None, best)


@lru_cache(maxsize=None)
def _pair_polys(
    m: Matroid, e: str, f: str
) -> tuple[Polynomial, Polynomial, Polynomial, Polynomial]:
    """(M_e^f * M_f^e, M_{ef} * M^{ef}, their difference, the Ansatz P)."""
    positive = minor_polynomial(m, (e,), (f,)) * minor_polynomial(m, (f,), (e,))
    negative = minor_polynomial(m, (e, f), ()) * minor_polynomial(m, (), (e, f))
    return positive, negative, positive - negative, ansatz_polynomial(m, e, f)


def _closed_pairs(m: Matroid) -> list[tuple[str, str]]:
    out = []
    for e, f in itertools.combinations(m.elements, 2):
        if m.is_independent((e, f)) and m.closure((e, f)) == frozenset((e, f)):
            out.append((e, f))
    return out


def _shape_monomials(others: list[str], family: str):
    """All shapes of the family over the given variables, in a fixed order."""
    if family == GGHH:
        for g, h in itertools.combinations(others, 2):
            yield MonomialShape(GGHH, (g, h))
    elif family == GGHI:
        for g in others:
            for h, i in itertools.combinations([x for x in others if x != g], 2):
                yield MonomialShape(GGHI, (g, h, i))
    elif family == GHIJ:
        for quad in itertools.combinations(others, 4):
            yield MonomialShape(GHIJ, quad)
    else:
        raise ValueError(f"unknown shape family {family!r}")


def _scan_matroids() -> list[tuple[str, Matroid]]:
    out = []
    for n in (4, 5, 6):
        for idx, cls in enumerate(enumerate_simple_rank3(n).classes):
            out.append((f"n={n} class {idx}", cls))
    out.append(("bowtie7", named("bowtie7")))
    return out


def table_coefficients(shape_family: str) -> TableReport:
    """Verify one coefficient table (GGHH, GGHI or GHIJ).

    Two passes.  Row fidelity: on each row's own named instance, the
    coefficients of the designated monomial in M_e^f*M_f^e, M_{ef}*M^{ef} and
    the Ansatz must match the embedded values.  Catalog scan: every monomial
    of the family's shape, over every closed pair of every simple rank-3
    matroid on <= 6 points (plus the 7-point witness `bowtie7`), must
    classify — via the canonical form of the restriction with the pair and g
    pinned — to exactly one row, with the observed Delta coefficients equal to
    the row's and the observed Ansatz coefficient within the row's allowed
    set.  Coverage requires every row to be hit and every allowed Ansatz
    value to be observed somewhere.
    """
    if shape_family not in _TABLE_ROWS:
        raise ValueError(f"unknown shape family {shape_family!r}")
    rows = _TABLE_ROWS[shape_family]

    checks = []
    for row in rows:
        inst = named(row.instance)
        e, f = row.pair
        others = [x for x in inst.elements if x not in row.pair]
        if row.g is not None:
            support = (row.g,) + tuple(x for x in others if x != row.g)
        else:
            support = tuple(others)
        shape = MonomialShape(row.family, support)
        mono = shape.monomial()
        positive, negative, _, p_poly = _pair_polys(inst, e, f)
        cpos = positive.term_map().get(mono, 0)
        cneg = negative.term_map().get(mono, 0)
        pval = Fraction(p_poly.term_map().get(mono, 0))
        ok = (
            cpos == row.positive
            and cneg == row.negative
            and cpos - cneg == row.delta
            and pval in row.p_allowed
        )
        checks.append(
            RowCheck(row, support, cpos, cneg, cpos - cneg, pval, ok)
        )

    rows_by_key: dict[tuple, TableRow] = {}
    for row in rows:
        key = _pinned_key(named(row.instance), row.pair[0], row.pair[1], row.g)
        if key in rows_by_key:
            raise RuntimeError(f"ambiguous table rows: {rows_by_key[key].label} "
                               f"and {row.label} share a canonical form")
        rows_by_key[key] = row

    usage = {row.label: 0 for row in rows}
    observed: dict[str, set[Fraction]] = {row.label: set() for row in rows}
    unmatched: list[str] = []
    mismatches: list[str] = []
    occurrences = 0
    for mname, m in _scan_matroids():
        for e, f in _closed_pairs(m):
            others = [x for x in m.elements if x not in (e, f)]
            positive, negative, _, p_poly = _pair_polys(m, e, f)
            pos_map = positive.term_map()
            neg_map = negative.term_map()
            p_map = p_poly.term_map()
            for shape in _shape_monomials(others, shape_family):
                occurrences += 1
                mono = shape.monomial()
                where = f"{mname} pair {{{e},{f}}} monomial {dict(mono)}"
                restriction = m.restriction(set(shape.support) | {e, f})
                g = shape.support[0] if shape_family == GGHI else None
                row = rows_by_key.get(_pinned_key(restriction, e, f, g))
                if row is None:
                    unmatched.append(where)
                    continue
                usage[row.label] += 1
                cpos = pos_map.get(mono, 0)
                cneg = neg_map.get(mono, 0)
                pval = Fraction(p_map.get(mono, 0))
                observed[row.label].add(pval)
                if (cpos, cneg) != (row.positive, row.negative):
                    mismatches.append(
                        f"{where}: expected {row.label} "
                        f"{row.positive}-{row.negative}, got {cpos}-{cneg}"
                    )
                if pval not in row.p_allowed:
                    mismatches.append(
                        f"{where}: ansatz coefficient {pval} not in "
                        f"{[str(v) for v in row.p_allowed]} for {row.label}"
                    )

    uncovered: list[str] = []
    for row in rows:
        if usage[row.label] == 0:
            uncovered.append(f"row {row.label} never occurred in the scan")
        for value in row.p_allowed:
            if value not in observed[row.label]:
                uncovered.append(
                    f"row {row.label}: ansatz value {value} never observed"
                )

    all_match = (
        all(c.ok for c in checks)
        and not unmatched
        and not mismatches
        and not uncovered
    )
    return TableReport(
        family=shape_family,
        checks=tuple(checks),
        scan_rows=tuple(
            RowUsage(row.label, usage[row.label], tuple(sorted(observed[row.label])))
            for row in rows
        ),
        scan_occurrences=occurrences,
        unmatched=tuple(unmatched),
        mismatches=tuple(mismatches),
        uncovered=tuple(uncovered),
        all_match=all_match,
    )
