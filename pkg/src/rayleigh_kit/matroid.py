"""Matroids represented by their basis families.

The ground set is a tuple of string labels; internally each basis is a
bitmask over the element positions, which keeps rank/closure/minor
computations cheap for the small instances this package targets
(|E| <= 64).  All values are immutable; operations return new matroids.

Two minor conventions live side by side here, deliberately:

* ``minor`` (contraction/deletion) declares the result EMPTY (no bases at
  all, generating polynomial 0) whenever the contracted set is dependent.
* ``restriction`` re-ranks: its bases are the maximal independent subsets
  of the kept set, whatever their size.

The first convention is what makes the Rayleigh-difference algebra work;
the second is what "the restriction to S" means everywhere else.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Optional

__all__ = [
    "Matroid",
    "Geometry",
    "SimplifyResult",
    "from_geometry",
    "is_isomorphic",
    "lines_of",
    "with_parallel_copy",
    "matroid_from_json_dict",
    "matroid_to_json_dict",
    "loads_matroid",
    "dumps_matroid",
]


def _check_element_id(el) -> str:
    if not isinstance(el, str) or not el:
        raise ValueError(f"element id must be a nonempty string, got {el!r}")
    if any(ch.isspace() for ch in el) or "*" in el or "^" in el:
        raise ValueError(f"element id {el!r} contains a reserved character")
    return el


class Matroid:
    """A matroid given by ground set, rank, and basis family."""

    __slots__ = ("elements", "rank", "_masks", "_index", "_bases_cache")

    def __init__(self, elements: Iterable[str], rank: int, basis_masks: Iterable[int]):
        elements = tuple(_check_element_id(e) for e in elements)
        if len(set(elements)) != len(elements):
            raise ValueError("duplicate element ids")
        if len(elements) > 64:
            raise ValueError("at most 64 elements supported")
        rank = int(rank)
        if rank < 0:
            raise ValueError("rank must be nonnegative")
        masks = tuple(sorted(set(int(b) for b in basis_masks)))
        full = (1 << len(elements)) - 1
        for b in masks:
            if b & ~full:
                raise ValueError("basis mask outside ground set")
            if b.bit_count() != rank:
                raise ValueError("basis size differs from rank")
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "_masks", masks)
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(elements)})
        object.__setattr__(self, "_bases_cache", None)

    def __setattr__(self, name, value):
        raise AttributeError("Matroid is immutable")

    # -- construction -----------------------------------------------------

    @classmethod
    def from_bases(
        cls,
        elements: Iterable[str],
        bases: Iterable[Iterable[str]],
        rank: Optional[int] = None,
    ) -> "Matroid":
        """Build from explicit basis subsets; rank is inferred when omitted."""
        elements = tuple(elements)
        index = {e: i for i, e in enumerate(elements)}
        masks = []
        for basis in bases:
            mask = 0
            for el in basis:
                if el not in index:
                    raise ValueError(f"basis element {el!r} not in ground set")
                bit = 1 << index[el]
                if mask & bit:
                    raise ValueError(f"repeated element {el!r} in a basis")
                mask |= bit
            masks.append(mask)
        if rank is None:
            if not masks:
                raise ValueError("rank required for an empty basis family")
            rank = masks[0].bit_count()
        return cls(elements, rank, masks)

    # -- basic structure ----------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.elements)

    @property
    def basis_masks(self) -> tuple[int, ...]:
        return self._masks

    @property
    def bases(self) -> frozenset[frozenset[str]]:
        cached = self._bases_cache
        if cached is None:
            cached = frozenset(self._unmask(b) for b in self._masks)
            object.__setattr__(self, "_bases_cache", cached)
        return cached

    def _mask(self, subset: Iterable[str]) -> int:
        mask = 0
        for el in subset:
            try:
                mask |= 1 << self._index[el]
            except KeyError:
                raise ValueError(f"element {el!r} not in ground set") from None
        return mask

    def _unmask(self, mask: int) -> frozenset[str]:
        return frozenset(
            self.elements[i] for i in range(len(self.elements)) if mask >> i & 1
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matroid):
            return NotImplemented
        return (
            self.elements == other.elements
            and self.rank == other.rank
            and self._masks == other._masks
        )

    def __hash__(self) -> int:
        return hash((self.elements, self.rank, self._masks))

    def __repr__(self) -> str:
        return f"Matroid(n={self.n}, rank={self.rank}, bases={len(self._masks)})"

    # -- rank, closure, dependence ------------------------------------------

    def rank_of(self, subset: Iterable[str]) -> int:
        """Rank of a subset: the size of its largest independent subset.

        Every independent set extends to a basis, so this is simply the
        maximum of |subset ∩ B| over bases B.
        """
        mask = self._mask(subset)
        if not self._masks:
            return 0
        return max((mask & b).bit_count() for b in self._masks)

    def _rank_of_mask(self, mask: int) -> int:
        if not self._masks:
            return 0
        return max((mask & b).bit_count() for b in self._masks)

    def closure(self, subset: Iterable[str]) -> frozenset[str]:
        mask = self._mask(subset)
        r = self._rank_of_mask(mask)
        out = mask
        for i in range(len(self.elements)):
            bit = 1 << i
            if not mask & bit and self._rank_of_mask(mask | bit) == r:
                out |= bit
        return self._unmask(out)

    def is_dependent(self, subset: Iterable[str]) -> bool:
        mask = self._mask(subset)
        return self._rank_of_mask(mask) < mask.bit_count()

    def is_independent(self, subset: Iterable[str]) -> bool:
        return not self.is_dependent(subset)

    def loops(self) -> tuple[str, ...]:
        """Elements contained in no basis, in ground-set order."""
        union = 0
        for b in self._masks:
            union |= b
        return tuple(e for i, e in enumerate(self.elements) if not union >> i & 1)

    # -- minors ---------------------------------------------------------------

    def minor(self, contract: Iterable[str] = (), delete: Iterable[str] = ()) -> "Matroid":
        """Contract `contract` and delete `delete`.

        Convention: if the contracted set is dependent the resulting basis
        family is EMPTY (so its generating polynomial is 0), rather than
        undefined.  Callers relying on standard re-ranked deletion should
        use `restriction`.
        """
        cmask = self._mask(contract)
        dmask = self._mask(delete)
        if cmask & dmask:
            raise ValueError("contract and delete sets must be disjoint")
        keep = [
            e
            for i, e in enumerate(self.elements)
            if not (cmask | dmask) >> i & 1
        ]
        csize = cmask.bit_count()
        new_rank = max(self.rank - csize, 0)
        if self._rank_of_mask(cmask) < csize:
            return Matroid(keep, new_rank, ())
        remap = self._remap_table(keep)
        new_masks = set()
        for b in self._masks:
            if b & cmask == cmask and not b & dmask:
                new_masks.add(self._remap_mask(b & ~cmask, remap))
        return Matroid(keep, new_rank, new_masks)

    def delete(self, subset: Iterable[str]) -> "Matroid":
        return self.minor((), subset)

    def contract(self, subset: Iterable[str]) -> "Matroid":
        return self.minor(subset, ())

    def _remap_table(self, keep: list[str]) -> dict[int, int]:
        return {self._index[e]: j for j, e in enumerate(keep)}

    @staticmethod
    def _remap_mask(mask: int, remap: Mapping[int, int]) -> int:
        out = 0
        while mask:
            low = mask & -mask
            out |= 1 << remap[low.bit_length() - 1]
            mask ^= low
        return out

    def dual(self) -> "Matroid":
        full = (1 << self.n) - 1
        return Matroid(
            self.elements, self.n - self.rank, tuple(full ^ b for b in self._masks)
        )

    def restriction(self, subset: Iterable[str]) -> "Matroid":
        """Standard restriction to `subset`, re-ranked to rank_of(subset)."""
        smask = self._mask(subset)
        keep = [e for i, e in enumerate(self.elements) if smask >> i & 1]
        r = self._rank_of_mask(smask)
        remap = self._remap_table(keep)
        new_masks = set()
        for b in self._masks:
            inter = b & smask
            if inter.bit_count() == r:
                new_masks.add(self._remap_mask(inter, remap))
        return Matroid(keep, r, new_masks)

    # -- simplification ----------------------------------------------------

    def parallel_classes(self) -> list[tuple[str, ...]]:
        """Parallel classes of the non-loop elements, each sorted, in order
        of their smallest member."""
        loops = set(self.loops())
        classes: list[tuple[str, ...]] = []
        assigned: set[str] = set()
        for x in self.elements:
            if x in loops or x in assigned:
                continue
            members = [x]
            for y in self.elements:
                if y == x or y in loops or y in assigned:
                    continue
                if self.rank_of((x, y)) == 1:
                    members.append(y)
            assigned.update(members)
            classes.append(tuple(sorted(members)))
        return sorted(classes, key=lambda c: c[0])

    def is_simple(self) -> bool:
        return not self.loops() and all(
            len(c) == 1 for c in self.parallel_classes()
        )

    def simplify(self) -> "SimplifyResult":
        """Delete loops, keep one representative per parallel class.

        The substitution map sends each surviving representative to its
        whole parallel class; replacing y_rep by the sum of the class
        variables in the simplified matroid's generating polynomial
        recovers the original one.
        """
        loops = self.loops()
        classes = self.parallel_classes()
        substitution = {min(c): c for c in classes}
        keep = set(substitution)
        dropped = [e for e in self.elements if e not in keep]
        simple = self.minor((), dropped)
        return SimplifyResult(simple, substitution, loops)

    # -- axioms --------------------------------------------------------------

    def validate(self) -> list[str]:
        """Check the basis axioms; violations come back as messages."""
        problems = []
        for b in self._masks:
            if b.bit_count() != self.rank:
                problems.append(
                    f"basis {sorted(self._unmask(b))} has size "
                    f"{b.bit_count()}, expected rank {self.rank}"
                )
        basis_set = set(self._masks)
        for b1 in self._masks:
            for b2 in self._masks:
                if b1 == b2:
                    continue
                only1 = b1 & ~b2
                m = only1
                while m:
                    x = m & -m
                    m ^= x
                    # need some y in b2 \ b1 with b1 - x + y a basis
                    candidates = b2 & ~b1
                    ok = False
                    c = candidates
                    while c:
                        y = c & -c
                        c ^= y
                        if (b1 ^ x) | y in basis_set:
                            ok = True
                            break
                    if not ok:
                        (removed,) = self._unmask(x)
                        problems.append(
                            "exchange fails for bases "
                            f"{sorted(self._unmask(b1))} / {sorted(self._unmask(b2))}"
                            f" removing {removed!r}"
                        )
        return problems


class SimplifyResult(NamedTuple):
    matroid: Matroid
    substitution: dict[str, tuple[str, ...]]
    loops: tuple[str, ...]


def with_parallel_copy(m: Matroid, x: str, new_id: str) -> Matroid:
    """Extend m by a new element parallel to x (appended to the ground set)."""
    if x not in m._index:
        raise ValueError(f"element {x!r} not in ground set")
    if new_id in m._index:
        raise ValueError(f"element {new_id!r} already present")
    elements = m.elements + (new_id,)
    xbit = 1 << m._index[x]
    nbit = 1 << m.n
    masks = list(m.basis_masks)
    for b in m.basis_masks:
        if b & xbit:
            masks.append((b ^ xbit) | nbit)
    return Matroid(elements, m.rank, masks)


# ---------------------------------------------------------------------------
# Point-line geometries (simple rank-3 descriptions).


@dataclass(frozen=True)
class Geometry:
    """A point set with lines: each line has >= 3 points and two distinct
    points lie on at most one common line."""

    points: tuple[str, ...]
    lines: tuple[frozenset[str], ...]

    @classmethod
    def build(cls, points: Iterable[str], lines: Iterable[Iterable[str]]) -> "Geometry":
        pts = tuple(_check_element_id(p) for p in points)
        lns = tuple(sorted((frozenset(l) for l in lines), key=sorted))
        return cls(pts, lns)

    def validate(self) -> list[str]:
        problems = []
        pts = set(self.points)
        if len(pts) != len(self.points):
            problems.append("duplicate points")
        for line in self.lines:
            if len(line) < 3:
                problems.append(f"line {sorted(line)} has fewer than 3 points")
            if not line <= pts:
                problems.append(f"line {sorted(line)} uses unknown points")
        for i, l1 in enumerate(self.lines):
            for l2 in self.lines[i + 1 :]:
                if l1 == l2:
                    problems.append(f"duplicate line {sorted(l1)}")
                elif len(l1 & l2) > 1:
                    problems.append(
                        f"lines {sorted(l1)} and {sorted(l2)} share two points"
                    )
        return problems

    def to_matroid(self) -> Matroid:
        return from_geometry(self)


def from_geometry(g: Geometry) -> Matroid:
    """The rank-3 matroid whose bases are the non-collinear point triples."""
    problems = g.validate()
    if problems:
        raise ValueError("not a linear space: " + "; ".join(problems))
    if len(g.points) < 3:
        raise ValueError("rank < 3: fewer than three points")
    if any(len(line) == len(g.points) for line in g.lines):
        raise ValueError("rank < 3: all points collinear")
    index = {p: i for i, p in enumerate(g.points)}
    line_masks = []
    for line in g.lines:
        mask = 0
        for p in line:
            mask |= 1 << index[p]
        line_masks.append(mask)
    masks = []
    npts = len(g.points)
    for i in range(npts):
        for j in range(i + 1, npts):
            for k in range(j + 1, npts):
                tri = 1 << i | 1 << j | 1 << k
                if not any(tri & lm == tri for lm in line_masks):
                    masks.append(tri)
    if not masks:
        raise ValueError("rank < 3: all points collinear")
    return Matroid(g.points, 3, masks)


def lines_of(m: Matroid) -> list[tuple[str, ...]]:
    """Rank-2 flats with at least 3 elements, for a simple rank-3 matroid."""
    if m.rank != 3 or not m.is_simple():
        raise ValueError("lines are only extracted from simple rank-3 matroids")
    seen = set()
    for i, x in enumerate(m.elements):
        for y in m.elements[i + 1 :]:
            flat = m.closure((x, y))
            if len(flat) >= 3:
                seen.add(tuple(sorted(flat)))
    return sorted(seen)


# ---------------------------------------------------------------------------
# Isomorphism by pruned backtracking (intended for |E| <= 8).


def is_isomorphic(
    m1: Matroid, m2: Matroid, pin: Mapping[str, str] | None = None
) -> Optional[dict[str, str]]:
    """Search for an element bijection carrying bases onto bases.

    `pin` forces specific images.  Returns one bijection (deterministic:
    candidates are tried in label order) or None.
    """
    if m1.n != m2.n or m1.rank != m2.rank or len(m1.basis_masks) != len(m2.basis_masks):
        return None

    def degrees(m: Matroid) -> dict[str, int]:
        out = {}
        for i, e in enumerate(m.elements):
            bit = 1 << i
            out[e] = sum(1 for b in m.basis_masks if b & bit)
        return out

    deg1, deg2 = degrees(m1), degrees(m2)
    if sorted(deg1.values()) != sorted(deg2.values()):
        return None

    pin = dict(pin or {})
    for a, b in pin.items():
        if a not in m1._index or b not in m2._index:
            return None
        if deg1[a] != deg2[b]:
            return None

    bases2 = set(m2.basis_masks)
    bases1_sets = [
        tuple(e for i, e in enumerate(m1.elements) if b >> i & 1)
        for b in m1.basis_masks
    ]

    # Most-constrained-first: rarer degrees earlier; pins first of all.
    degree_freq: dict[int, int] = {}
    for d in deg1.values():
        degree_freq[d] = degree_freq.get(d, 0) + 1
    order = sorted(
        m1.elements, key=lambda e: (e not in pin, degree_freq[deg1[e]], e)
    )

    assigned: dict[str, str] = {}
    used: set[str] = set()

    def image_mask(basis: tuple[str, ...]) -> int:
        mask = 0
        for el in basis:
            mask |= 1 << m2._index[assigned[el]]
        return mask

    def consistent() -> bool:
        for basis in bases1_sets:
            if all(el in assigned for el in basis):
                if image_mask(basis) not in bases2:
                    return False
        return True

    def extend(k: int) -> Optional[dict[str, str]]:
        if k == len(order):
            return dict(assigned)
        el = order[k]
        forced = pin.get(el)
        candidates = (
            [forced]
            if forced is not None
            else [c for c in sorted(m2.elements) if deg2[c] == deg1[el]]
        )
        for cand in candidates:
            if cand in used:
                continue
            assigned[el] = cand
            used.add(cand)
            if consistent():
                found = extend(k + 1)
                if found is not None:
                    return found
            del assigned[el]
            used.discard(cand)
        return None

    return extend(0)


# ---------------------------------------------------------------------------
# JSON interchange format.
#
# Bases form:    {"elements": [...], "rank": r, "bases": [[...], ...]}
# Geometry form: {"elements": [...], "lines": [[...], ...]}  (rank 3 implied)
#
# Unknown keys are rejected so that typos fail loudly.


def matroid_from_json_dict(data: Mapping) -> Matroid:
    if not isinstance(data, Mapping):
        raise ValueError("matroid JSON must be an object")
    keys = set(data)
    if "elements" not in keys:
        raise ValueError("missing key 'elements'")
    elements = data["elements"]
    if not isinstance(elements, list):
        raise ValueError("'elements' must be a list")
    if keys == {"elements", "rank", "bases"}:
        rank = data["rank"]
        if not isinstance(rank, int) or rank < 0:
            raise ValueError("'rank' must be a nonnegative integer")
        bases = data["bases"]
        if not isinstance(bases, list) or not all(isinstance(b, list) for b in bases):
            raise ValueError("'bases' must be a list of lists")
        if not bases and rank > 0:
            raise ValueError("empty basis family with positive rank")
        m = Matroid.from_bases(elements, bases, rank=rank)
        problems = m.validate()
        if problems:
            raise ValueError("not a matroid: " + "; ".join(problems[:3]))
        return m
    if keys == {"elements", "lines"}:
        lines = data["lines"]
        if not isinstance(lines, list) or not all(isinstance(l, list) for l in lines):
            raise ValueError("'lines' must be a list of lists")
        return from_geometry(Geometry.build(elements, lines))
    unknown = keys - {"elements", "rank", "bases", "lines"}
    if unknown:
        raise ValueError(f"unknown keys: {sorted(unknown)}")
    raise ValueError(
        "matroid JSON needs either 'rank' and 'bases' or 'lines' alongside 'elements'"
    )


def matroid_to_json_dict(m: Matroid, form: str = "auto") -> dict:
    """Serialize; geometry form is preferred for simple rank-3 matroids."""
    if form not in ("auto", "bases", "geometry"):
        raise ValueError(f"unknown form {form!r}")
    if form in ("auto", "geometry"):
        if m.rank == 3 and m.is_simple():
            return {
                "elements": list(m.elements),
                "lines": [list(line) for line in lines_of(m)],
            }
        if form == "geometry":
            raise ValueError("geometry form requires a simple rank-3 matroid")
    return {
        "elements": list(m.elements),
        "rank": m.rank,
        "bases": sorted(sorted(b) for b in m.bases),
    }


def loads_matroid(text: str) -> Matroid:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid JSON: {exc}") from exc
    return matroid_from_json_dict(data)


def dumps_matroid(m: Matroid, form: str = "auto") -> str:
    return json.dumps(matroid_to_json_dict(m, form=form), indent=2, sort_keys=True)
