"""Profiles and the age algebra: orbit sums, structure constants, e-rank.

The registry classifies, degree by degree, the instantiations of all
capacity-respecting compositions of a template into isomorphism types.
Classification buckets structures by a refinement invariant and settles
membership with genuine isomorphism searches; the canonical code is computed
once per type and keys everything downstream (orbit sums, products, reports).
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

from .errors import InputError
from .structures import SubsetCodes, _refine, canonical_code, find_isomorphism
from .templates import compositions, instantiate


def _compare_monomials(a, b):
    # local copy of the hilbert-module order to avoid a circular import;
    # both are exercised against each other in the tests
    from .hilbert import compare_monomials
    return compare_monomials(a, b)


@dataclass
class TypeEntry:
    """One isomorphism type: canonical code, realizing compositions (in
    discovery = graded-lex order), the maximal one, and a representative."""

    code: str
    reps: list
    lead: tuple
    struct: object = field(repr=False)


class TypeRegistry:
    """Per-degree map IsoType code -> TypeEntry, built incrementally."""

    def __init__(self, template):
        self.template = template
        self._by_degree = {}
        self._comp_code = {}
        self._built = -1

    def ensure_degree(self, n):
        while self._built < n:
            self._build(self._built + 1)

    def _invariant(self, struct):
        colors = _refine(struct, [0] * struct.size)
        return (
            struct.size,
            tuple(len(r) for r in struct.rels),
            tuple(sorted(Counter(colors).items())),
        )

    def _build(self, n):
        entries = {}
        buckets = {}
        by_struct = {}
        for comp in compositions(self.template, n):
            s = instantiate(self.template, comp)
            code = by_struct.get(s)  # permuted compositions often coincide
            inv = None
            if code is None:
                inv = self._invariant(s)
                for cand in buckets.get(inv, ()):
                    if find_isomorphism(entries[cand].struct, s) is not None:
                        code = cand
                        break
            if code is None:
                code = canonical_code(s)
                if code in entries:  # same code must mean isomorphic
                    raise InputError("canonical code collision across buckets")
                entries[code] = TypeEntry(code, [comp], comp, s)
                buckets.setdefault(inv, []).append(code)
            else:
                e = entries[code]
                e.reps.append(comp)
                if _compare_monomials(comp, e.lead) > 0:
                    e.lead = comp
            by_struct[s] = code
            self._comp_code[comp] = code
        self._by_degree[n] = entries
        self._built = n

    def types_at(self, n):
        self.ensure_degree(n)
        return self._by_degree[n]

    def code_of(self, comp):
        self.ensure_degree(sum(comp))
        try:
            return self._comp_code[tuple(comp)]
        except KeyError:
            raise InputError(f"composition {comp} not realizable") from None

    def entry(self, code, degree):
        e = self.types_at(degree).get(code)
        if e is None:
            raise InputError(f"type of degree {degree} not realized in this age")
        return e

    def profile(self, n):
        return len(self.types_at(n))

    def leading_monomials(self, n):
        return {e.lead: code for code, e in self.types_at(n).items()}


def profile(t, n, registry=None):
    """phi(n): number of isomorphism types among degree-n instantiations."""
    registry = registry or TypeRegistry(t)
    return registry.profile(n)


def profile_series(t, degree, registry=None):
    """phi(0..degree) as a list; monotonicity is the caller's check."""
    registry = registry or TypeRegistry(t)
    return [registry.profile(n) for n in range(degree + 1)]


# ---------------------------------------------------------------------------
# structure constants and orbit sums


class OrbitSum:
    """Finitely supported integer combination of isomorphism-type codes."""

    def __init__(self, coeffs, degree=None):
        self.coeffs = {c: int(v) for c, v in dict(coeffs).items() if v}
        self.degree = degree

    def __eq__(self, other):
        return isinstance(other, OrbitSum) and self.coeffs == other.coeffs

    def __repr__(self):
        return f"OrbitSum({len(self.coeffs)} terms, degree={self.degree})"


def _split_census(struct, codes, m):
    """Counts of (type(A1), type(A2)) over ordered splits with |A1| = m."""
    n = struct.size
    out = Counter()
    for left in itertools.combinations(range(n), m):
        right = tuple(x for x in range(n) if x not in left)
        out[(codes.code(left), codes.code(right))] += 1
    return out


def structure_constant(t, tau1, tau2, tau, registry=None,
                       check_representative=True):
    """c^tau_{tau1,tau2}: ordered splits of a representative of tau whose
    halves realize tau1 and tau2.  Independence of the representative is
    spot-checked on a second realizing composition when one exists.

    The tau arguments are IsoType values (code + degree)."""
    if tau.degree != tau1.degree + tau2.degree:
        raise InputError("degree mismatch: deg tau must be deg tau1 + deg tau2")
    registry = registry or TypeRegistry(t)
    entry = registry.entry(tau.code, tau.degree)

    def count_on(comp):
        s = instantiate(t, comp)
        codes = SubsetCodes(s)
        census = _split_census(s, codes, tau1.degree)
        return census.get((tau1.code, tau2.code), 0)

    c = count_on(entry.reps[0])
    if check_representative and len(entry.reps) > 1:
        c2 = count_on(entry.reps[1])
        if c2 != c:
            from .errors import ConsistencyError
            raise ConsistencyError(
                f"structure constant depends on the representative: {c} != {c2}")
    return c


def orbit_product(t, o1, o2, registry=None):
    """Bilinear extension of the structure constants to orbit sums of
    homogeneous degrees; the result is homogeneous of the summed degree."""
    if o1.degree is None or o2.degree is None:
        raise InputError("orbit_product needs homogeneous inputs")
    registry = registry or TypeRegistry(t)
    n = o1.degree + o2.degree
    out = {}
    for code, entry in registry.types_at(n).items():
        s = instantiate(t, entry.reps[0])
        codes = SubsetCodes(s)
        census = _split_census(s, codes, o1.degree)
        total = 0
        for (c1, c2), mult in census.items():
            v1 = o1.coeffs.get(c1, 0)
            if not v1:
                continue
            v2 = o2.coeffs.get(c2, 0)
            if v2:
                total += mult * v1 * v2
        if total:
            out[code] = total
    return OrbitSum(out, n)


def unit_orbit(t, registry=None):
    registry = registry or TypeRegistry(t)
    (code,) = registry.types_at(0).keys()
    return OrbitSum({code: 1}, 0)


def e_orbit(t, registry=None):
    """e = sum of all degree-1 types (the sum of singletons)."""
    registry = registry or TypeRegistry(t)
    return OrbitSum({c: 1 for c in registry.types_at(1)}, 1)


def _int_matrix_rank(rows):
    """Rank over the rationals by fraction-free (Bareiss-style) elimination."""
    m = [list(r) for r in rows]
    if not m or not m[0]:
        return 0
    rows_n, cols_n = len(m), len(m[0])
    rank = 0
    prev = 1
    r = 0
    for c in range(cols_n):
        pivot = None
        for i in range(r, rows_n):
            if m[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(r + 1, rows_n):
            for j in range(c + 1, cols_n):
                m[i][j] = (m[i][j] * m[r][c] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        r += 1
        rank += 1
        if r == rows_n:
            break
    return rank


def mult_by_e_rank(t, n, registry=None):
    """Rank of multiplication by e from degree n to n+1.

    The matrix entry at (tau', tau) counts elements a of a representative A'
    of tau' with type(A' - a) = tau; full rank phi(n) certifies injectivity
    and hence a non-decreasing profile.
    """
    registry = registry or TypeRegistry(t)
    cols = list(registry.types_at(n).keys())
    col_index = {c: i for i, c in enumerate(cols)}
    rows = []
    for code, entry in registry.types_at(n + 1).items():
        s = instantiate(t, entry.reps[0])
        codes = SubsetCodes(s)
        row = [0] * len(cols)
        for a in range(s.size):
            sub = tuple(x for x in range(s.size) if x != a)
            c = codes.code(sub)
            j = col_index.get(c)
            if j is None:
                raise InputError("subtype not realized at lower degree")
            row[j] += 1
        rows.append(row)
    return _int_matrix_rank(rows)


# ---------------------------------------------------------------------------
# bounded kernel


def kernel_elements_bounded(t, degree_bound, d_max=6):
    """Certified kernel members among finite-block elements.

    A finite block is flagged when dropping one of its elements (capacity
    minus one) loses some realized type at a degree <= degree_bound; within
    a block all elements are interchangeable, so whole blocks are reported.
    Infinite blocks can never meet the kernel.  False negatives beyond the
    bound are possible and the bound is part of the report.
    """
    from .templates import BlockTemplate

    base = TypeRegistry(t)
    flagged = []
    for bi, (name, cap) in enumerate(t.blocks):
        if cap is None:
            continue
        if cap - 1 == 0 and len(t.blocks) == 1:
            # removal empties the structure: every positive degree dies
            if degree_bound >= 1:
                flagged.append(bi)
            continue
        blocks = list(t.blocks)
        blocks[bi] = (name, cap - 1)
        if cap - 1 == 0:
            # dropping the block entirely; patterns touching it die with it
            keep = [i for i in range(len(t.blocks)) if i != bi]
            remap = {old: new for new, old in enumerate(keep)}
            accepted = {}
            for (sym, _), pats in zip(t.signature.symbols, t.accepted):
                accepted[sym] = [
                    (tuple(remap[b] for b in p.blocks), p.ranks)
                    for p in pats if bi not in p.blocks
                ]
            reduced = BlockTemplate.make(
                t.signature, [t.blocks[i] for i in keep], accepted)
        else:
            accepted = {
                sym: list(pats)
                for (sym, _), pats in zip(t.signature.symbols, t.accepted)
            }
            reduced = BlockTemplate.make(t.signature, blocks, accepted)
        small = TypeRegistry(reduced)
        for m in range(degree_bound + 1):
            lost = set(base.types_at(m)) - set(small.types_at(m))
            if lost:
                flagged.append(bi)
                break
    elements = [(bi, pos) for bi in flagged for pos in range(t.capacities[bi])]
    return {
        "blocks": [t.block_names[bi] for bi in flagged],
        "elements": elements,
        "degree_bound": degree_bound,
    }
