"""Leading monomials, monomial ideals, and exact Hilbert series assembly.

Monomials (exponent vectors over the template blocks) are ordered by
comparing shapes with the degree reverse lexicographic order and breaking
ties with plain lex in block-declaration order.  This order is well founded
but not a monomial order, so all ideal computations happen per chain support
in the layer-variable ring: for each chain S_1 c ... c S_l arising among
leading monomials, the span of those leading monomials together with the
over-capacity monomials is a monomial ideal there, and its Hilbert series
comes out of inclusion-exclusion over the minimal generators.  Summing the
per-chain series over all chains rebuilds the profile generating series as
an explicit rational function with denominator (1-Z)...(1-Z^k).

Everything is exact: integer polynomial arithmetic and rational
interpolation via fractions.Fraction.  No floating point anywhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import ConsistencyError, InputError, NotRationalError, UndeterminedError

DEFAULT_GUARD = 5


# ---------------------------------------------------------------------------
# exact integer polynomial helpers (coefficient lists, index = degree)


def ptrim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def padd(p, q):
    out = [0] * max(len(p), len(q))
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return ptrim(out)


def psub(p, q):
    return padd(p, [-c for c in q])


def pmul(p, q):
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                if b:
                    out[i + j] += a * b
    return ptrim(out)


def pdivexact(p, q):
    """Exact quotient p/q over the integers, or None if it does not divide."""
    p = ptrim(p)
    q = ptrim(q)
    if not q:
        raise InputError("division by zero polynomial")
    if not p:
        return []
    if len(p) < len(q):
        return None
    rem = list(p)
    out = [0] * (len(p) - len(q) + 1)
    lead = q[-1]
    for i in range(len(out) - 1, -1, -1):
        c = rem[i + len(q) - 1]
        if c % lead != 0:
            return None
        f = c // lead
        out[i] = f
        if f:
            for j, b in enumerate(q):
                rem[i + j] -= f * b
    if any(rem):
        return None
    return ptrim(out)


def geom_factor(j):
    """1 - Z^j."""
    out = [0] * (j + 1)
    out[0] = 1
    out[j] = -1
    return out


def peval1(p):
    return sum(p)


def expand(numerator, denominators, degree):
    """Series coefficients 0..degree of numerator / prod (1 - Z^j)."""
    out = [0] * (degree + 1)
    for i, c in enumerate(numerator):
        if i > degree:
            break
        out[i] = c
    for j in denominators:
        for i in range(j, degree + 1):
            out[i] += out[i - j]
    return out


@dataclass(frozen=True)
class IntSeries:
    """Exact integer series truncated at a fixed order."""

    coefficients: tuple
    order: int

    @staticmethod
    def make(coeffs, order=None):
        coeffs = tuple(int(c) for c in coeffs)
        if order is None:
            order = len(coeffs) - 1
        if order != len(coeffs) - 1:
            raise InputError("order must match the coefficient list")
        return IntSeries(coeffs, order)

    def __getitem__(self, n):
        if n < 0 or n > self.order:
            raise InputError(f"series index {n} beyond truncation {self.order}")
        return self.coefficients[n]

    def add(self, other):
        order = min(self.order, other.order)
        return IntSeries.make(
            [self.coefficients[i] + other.coefficients[i] for i in range(order + 1)])

    def sub(self, other):
        order = min(self.order, other.order)
        return IntSeries.make(
            [self.coefficients[i] - other.coefficients[i] for i in range(order + 1)])


@dataclass(frozen=True)
class HilbertForm:
    """Integer numerator over a multiset of factors (1 - Z^{n_i})."""

    numerator: tuple
    denominators: tuple

    @staticmethod
    def make(numerator, denominators):
        return HilbertForm(tuple(ptrim(list(numerator))),
                           tuple(sorted(int(d) for d in denominators)))

    @property
    def is_zero(self):
        return not self.numerator

    def series(self, degree):
        return expand(list(self.numerator), self.denominators, degree)

    def normalized(self):
        """Cancel every factor (1 - Z^j) that divides the numerator, largest
        first, until none does; the result has P(1) != 0 (or is zero)."""
        num = list(self.numerator)
        dens = list(self.denominators)
        if not num:
            return HilbertForm.make([], [])
        changed = True
        while changed:
            changed = False
            for j in sorted(set(dens), reverse=True):
                q = pdivexact(num, geom_factor(j))
                if q is not None:
                    num = q
                    dens.remove(j)
                    changed = True
                    break
        return HilbertForm.make(num, dens)

    def same_series(self, other):
        """Exact equality as rational functions (cross-multiplication)."""
        left = list(self.numerator)
        for j in other.denominators:
            left = pmul(left, geom_factor(j))
        right = list(other.numerator)
        for j in self.denominators:
            right = pmul(right, geom_factor(j))
        return left == right

    def numerator_at_one(self):
        return peval1(self.numerator)

    def pole_order_at_one(self):
        num = list(self.numerator)
        drop = 0
        while num and peval1(num) == 0:
            num = pdivexact(num, geom_factor(1))
            drop += 1
        return len(self.denominators) - drop

    def pretty(self):
        if self.is_zero:
            return "0"
        terms = []
        for i, c in enumerate(self.numerator):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mag = "" if abs(c) == 1 else str(abs(c)) + "*"
                z = "Z" if i == 1 else f"Z^{i}"
                terms.append(("-" if c < 0 else "+") + f" {mag}{z}"
                             if terms else (("-" if c < 0 else "") + f"{mag}{z}"))
        num = " ".join(terms) if terms else "0"
        if not self.denominators:
            return num
        den = "".join(f"(1-Z^{j})" if j > 1 else "(1-Z)" for j in self.denominators)
        return f"({num})/{den}"

    def to_json_dict(self):
        return {"numerator": list(self.numerator),
                "denominator": list(self.denominators)}


# ---------------------------------------------------------------------------
# monomial order, leading monomials, layers


def shape(comp):
    return tuple(sorted(comp, reverse=True))


def compare_monomials(a, b):
    """Total order: degree first, then revlex on shapes, then lex on the
    exponents in block-declaration order.  Returns -1, 0 or +1."""
    a = tuple(a)
    b = tuple(b)
    if len(a) != len(b):
        raise InputError("compare_monomials needs a common block set")
    if a == b:
        return 0
    da, db = sum(a), sum(b)
    if da != db:
        return -1 if da < db else 1
    sa, sb = shape(a), shape(b)
    if sa != sb:
        i = max(j for j in range(len(a)) if sa[j] != sb[j])
        # at the largest differing index, the larger entry loses
        return -1 if sa[i] > sb[i] else 1
    return -1 if a < b else 1


def leading_monomial(t, tau, registry):
    """Maximal composition realizing the type, under compare_monomials."""
    return registry.entry(tau.code, tau.degree).lead


def layers(comp):
    """Unique square-free factorization m = x_{S_1}^{e_1} ... x_{S_r}^{e_r}
    with S_1 c ... c S_r; returns [(S_i, e_i)] with S_i sorted tuples."""
    comp = tuple(comp)
    if not any(comp):
        raise InputError("the zero monomial has no layer factorization")
    values = sorted({d for d in comp if d > 0}, reverse=True)
    out = []
    for i, v in enumerate(values):
        s = tuple(j for j, d in enumerate(comp) if d >= v)
        e = v - (values[i + 1] if i + 1 < len(values) else 0)
        out.append((s, e))
    return out


def chain_support(comp):
    return tuple(s for s, _ in layers(comp))


# ---------------------------------------------------------------------------
# weighted monomial ideals


@dataclass(frozen=True)
class WeightedMonomialIdeal:
    """Monomial ideal in variables of given positive degrees; the stored
    generators are minimal (pairwise non-dividing)."""

    degrees: tuple
    generators: tuple

    @staticmethod
    def make(degrees, generators):
        degrees = tuple(int(d) for d in degrees)
        if any(d < 1 for d in degrees):
            raise InputError("variable degrees must be positive")
        gens = []
        for g in generators:
            g = tuple(int(e) for e in g)
            if len(g) != len(degrees):
                raise InputError("generator length != number of variables")
            if any(e < 0 for e in g):
                raise InputError("negative exponent in generator")
            gens.append(g)
        minimal = []
        for g in sorted(set(gens), key=lambda g: (sum(e * d for e, d in zip(g, degrees)), g)):
            if not any(all(x <= y for x, y in zip(h, g)) for h in minimal):
                minimal.append(g)
        return WeightedMonomialIdeal(degrees, tuple(minimal))

    def weighted_degree(self, mono):
        return sum(e * d for e, d in zip(mono, self.degrees))

    def contains(self, mono):
        return any(all(x <= y for x, y in zip(g, mono)) for g in self.generators)


def _lcm_exp(gens):
    return tuple(max(col) for col in zip(*gens))


def ideal_hilbert(ideal, degree, cross_check=True):
    """Hilbert series of the ideal (the span of its monomials).

    Inclusion-exclusion over subsets of the minimal generators; pairwise
    intersections of principal ideals are principal (lcm), so each subset
    contributes (+/-) Z^{deg lcm} over the full denominator.  The expansion
    is cross-checked against brute-force divisibility counting.
    """
    dens = list(ideal.degrees)
    gens = ideal.generators
    if not gens:
        form = HilbertForm.make([], [])
        return form, IntSeries.make([0] * (degree + 1))
    if len(gens) > 20:
        raise InputError("too many generators for inclusion-exclusion")
    num = {}
    for r in range(1, len(gens) + 1):
        sign = 1 if r % 2 == 1 else -1
        for sub in itertools.combinations(gens, r):
            d = ideal.weighted_degree(_lcm_exp(sub))
            num[d] = num.get(d, 0) + sign
    numerator = [0] * (max(num) + 1)
    for d, c in num.items():
        numerator[d] = c
    form = HilbertForm.make(numerator, dens)
    series = IntSeries.make(form.series(degree))
    if cross_check:
        brute = _brute_ideal_series(ideal, degree)
        if list(series.coefficients) != brute:
            raise ConsistencyError(
                "inclusion-exclusion disagrees with direct monomial counting")
    return form, series


def _brute_ideal_series(ideal, degree):
    counts = [0] * (degree + 1)
    nvars = len(ideal.degrees)

    def rec(i, acc, used):
        if i == nvars:
            if ideal.contains(acc):
                counts[used] += 1
            return
        d = ideal.degrees[i]
        for e in range((degree - used) // d + 1):
            rec(i + 1, acc + (e,), used + e * d)

    rec(0, (), 0)
    return counts


# ---------------------------------------------------------------------------
# Lemma "add a layer" as an executable check


@dataclass(frozen=True)
class AddLayerReport:
    checked: int
    violations: tuple

    @property
    def ok(self):
        return not self.violations


def check_addlayer(t, degree, registry=None):
    """For every leading monomial m of degree <= `degree` and every layer S
    of m whose blocks are not saturated, m * x_S must again be a leading
    monomial.  A violation contradicts the theory and fails the build."""
    from .algebra import TypeRegistry

    registry = registry or TypeRegistry(t)
    nblocks = len(t.blocks)
    top = degree + nblocks
    lms = set()
    for n in range(top + 1):
        lms.update(registry.leading_monomials(n))
    caps = t.capacities
    checked = 0
    violations = []
    for m in sorted(lms):
        if sum(m) > degree or sum(m) == 0:
            continue
        for s, _ in layers(m):
            saturated = any(caps[i] is not None and m[i] >= caps[i] for i in s)
            if saturated:
                continue
            bumped = tuple(d + 1 if i in s else d for i, d in enumerate(m))
            checked += 1
            if bumped not in lms:
                violations.append((m, s))
    return AddLayerReport(checked, tuple(violations))


# ---------------------------------------------------------------------------
# chain-wise assembly of the Hilbert series from leading monomials


def _scan_minimal_generators(weights, member, bound):
    """Minimal generators of a monomial ideal given by a membership oracle,
    found by scanning weighted degrees <= bound.  Dickson's lemma promises
    finitely many but no bound; completeness is certified downstream by the
    agreement of the assembled series with the directly computed profile."""
    gens = []

    def divisible_by_gen(mono):
        return any(all(x <= y for x, y in zip(g, mono)) for g in gens)

    bounds = [bound // w for w in weights]
    monos = sorted(
        itertools.product(*(range(b + 1) for b in bounds)),
        key=lambda m: (sum(e * w for e, w in zip(m, weights)), m))
    for mono in monos:
        d = sum(e * w for e, w in zip(mono, weights))
        if d > bound:
            continue
        if member(mono) and not divisible_by_gen(mono):
            gens.append(mono)
    return gens


def hilbert_via_leading(t, degree, gen_bound=None, registry=None,
                        components=None):
    """Assemble the Hilbert series by summing per-chain monomial-ideal
    series of leading monomials, then put it over (1-Z)...(1-Z^k).

    The expansion is verified against the profile series up to `degree`; a
    mismatch means the generator scan (bound `gen_bound`, default `degree`)
    missed something and asks for a larger bound, or, at the full bound,
    exposes a genuine bug.
    """
    from .algebra import TypeRegistry
    from .decomposition import template_components

    registry = registry or TypeRegistry(t)
    if components is None:
        components = template_components(t)
    k = components.dimension
    bound = gen_bound if gen_bound is not None else degree
    bound = min(bound, degree)

    by_chain = {}
    empty_lm = False
    for n in range(bound + 1):
        for lm in registry.leading_monomials(n):
            if sum(lm) == 0:
                empty_lm = True
                continue
            by_chain.setdefault(chain_support(lm), set()).add(lm)

    caps = t.capacities
    total_num = list([1] if empty_lm else [])
    total_dens = []  # running denominator multiset of total_num

    def over_capacity(chain, mono):
        for i in set().union(*chain):
            cap = caps[i]
            if cap is None:
                continue
            d = sum(e for s, e in zip(chain, mono) if i in s)
            if d > cap:
                return True
        return False

    for chain in sorted(by_chain):
        weights = [len(s) for s in chain]
        lmset = by_chain[chain]

        def to_comp(mono, chain=chain):
            out = [0] * len(caps)
            for s, e in zip(chain, mono):
                for i in s:
                    out[i] += e
            return tuple(out)

        def in_i(mono, chain=chain):
            return over_capacity(chain, mono)

        def in_j(mono, chain=chain, lmset=lmset):
            if over_capacity(chain, mono):
                return True
            return all(e >= 1 for e in mono) and to_comp(mono) in lmset

        gens_j = _scan_minimal_generators(weights, in_j, bound)
        gens_i = _scan_minimal_generators(weights, in_i, bound)
        ideal_j = WeightedMonomialIdeal.make(weights, gens_j)
        ideal_i = WeightedMonomialIdeal.make(weights, gens_i)
        form_j, _ = ideal_hilbert(ideal_j, bound)
        form_i, _ = ideal_hilbert(ideal_i, bound)
        num = psub(list(form_j.numerator), list(form_i.numerator))
        dens = list(weights)
        # layers containing a finite block always cancel out of the series
        for s, w in zip(chain, weights):
            if any(caps[i] is not None for i in s):
                q = pdivexact(num, geom_factor(w))
                if q is None:
                    raise ConsistencyError(
                        f"finite-capacity layer {s} did not cancel from the "
                        f"chain series of {chain}")
                num = q
                dens.remove(w)
        if len(set(dens)) != len(dens):
            raise ConsistencyError(f"repeated layer sizes in chain {chain}")
        # for a non-minimal template an all-infinite layer may exceed the
        # dimension; the assembly target grows accordingly and the final
        # normalization brings the form back down
        k = max(k, max(dens, default=0))
        # bring onto the running common denominator
        for w in dens:
            if w not in total_dens:
                total_num_new = pmul(total_num, geom_factor(w))
                total_num = total_num_new
                total_dens.append(w)
        extra = list(total_dens)
        for w in dens:
            extra.remove(w)
        for w in extra:
            num = pmul(num, geom_factor(w))
        total_num = padd(total_num, num)

    # normal target denominator (1-Z)...(1-Z^k)
    for w in range(1, k + 1):
        if w not in total_dens:
            total_num = pmul(total_num, geom_factor(w))
            total_dens.append(w)
    form = HilbertForm.make(total_num, total_dens)

    from .algebra import profile_series
    want = profile_series(t, degree, registry)
    got = form.series(degree)
    if got != want:
        if bound < degree:
            raise UndeterminedError(
                f"chain-wise series disagrees with the profile beyond the "
                f"generator bound {bound}; retry with a larger gen bound")
        raise ConsistencyError(
            "chain-wise Hilbert series disagrees with the profile series: "
            f"{got} != {want}")
    return form.normalized()


# ---------------------------------------------------------------------------
# rational fitting and quasi-polynomials


def fit_rational(series, k, guard=DEFAULT_GUARD):
    """Fit series = P(Z) / ((1-Z)...(1-Z^k)) exactly.

    P is the series times the denominator; accepted only when the computed
    window ends with at least `guard` zero coefficients.  The result is
    normalized so that no denominator factor divides P.
    """
    if isinstance(series, IntSeries):
        coeffs = list(series.coefficients)
    else:
        coeffs = [int(c) for c in series]
    if k < 0:
        raise InputError("k must be >= 0")
    degree = len(coeffs) - 1
    p = coeffs
    for j in range(1, k + 1):
        p = pmul(p, geom_factor(j))
    p = p[: degree + 1]
    p = ptrim(p)
    tail = degree - (len(p) - 1) if p else degree + 1
    if tail < guard:
        raise NotRationalError(
            f"series is not P/((1-Z)...(1-Z^{k})) within the window: "
            f"only {tail} trailing zero coefficients (need {guard})")
    return HilbertForm.make(p, range(1, k + 1)).normalized()


@dataclass(frozen=True)
class QuasiPolynomial:
    """Eventually-exact description: for n >= n_min, value(n) equals the
    polynomial attached to n mod period, with exact rational coefficients
    (ascending powers)."""

    period: int
    n_min: int
    residue_polys: tuple

    def value(self, n):
        if n < self.n_min:
            raise InputError(f"quasi-polynomial only valid from {self.n_min}")
        poly = self.residue_polys[n % self.period]
        acc = Fraction(0)
        for j, c in enumerate(poly):
            acc += c * n ** j
        if acc.denominator != 1:
            raise ConsistencyError("quasi-polynomial value is not an integer")
        return int(acc)

    @property
    def degree(self):
        best = -1
        for poly in self.residue_polys:
            for j in range(len(poly) - 1, -1, -1):
                if poly[j] != 0:
                    best = max(best, j)
                    break
        return best

    @property
    def leading_coefficient(self):
        d = self.degree
        if d < 0:
            return Fraction(0)
        tops = {poly[d] if d < len(poly) else Fraction(0)
                for poly in self.residue_polys}
        if len(tops) != 1:
            raise ConsistencyError(
                "leading coefficient differs across residues: " + repr(tops))
        return tops.pop()

    def to_json_dict(self):
        return {
            "period": self.period,
            "n_min": self.n_min,
            "residues": [
                [[c.numerator, c.denominator] for c in poly]
                for poly in self.residue_polys
            ],
        }


def _solve_exact(matrix, rhs):
    """Gaussian elimination over Fractions; matrix must be square regular."""
    n = len(matrix)
    m = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(matrix)]
    for c in range(n):
        piv = next(r for r in range(c, n) if m[r][c] != 0)
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [m[r][n] for r in range(n)]


def quasi_polynomial(form, extra_checks=2):
    """Extract the eventual quasi-polynomial of a Hilbert form.

    Period = lcm of the denominator degrees; per residue class an exact
    polynomial of degree <= k-1 is interpolated from the expansion beyond
    n_min and re-verified on `extra_checks` further periods.
    """
    k = len(form.denominators)
    if k == 0:
        deg = len(form.numerator)
        return QuasiPolynomial(1, deg, ((Fraction(0),),))
    period = lcm(*form.denominators)
    total = sum(form.denominators)
    deg_p = len(form.numerator) - 1
    n_min = max(0, deg_p - total + 1)
    need = n_min + period * (k + extra_checks) + period
    series = form.series(need)
    polys = []
    for r in range(period):
        points = [n for n in range(n_min, need + 1) if n % period == r]
        sample = points[:k]
        if len(sample) < k:
            raise InputError("expansion too short for interpolation")
        matrix = [[Fraction(n) ** j for j in range(k)] for n in sample]
        rhs = [series[n] for n in sample]
        coeffs = _solve_exact(matrix, rhs)
        for n in points[k:]:
            val = sum(c * n ** j for j, c in enumerate(coeffs))
            if val != series[n]:
                raise ConsistencyError(
                    f"interpolated residue {r} fails at n={n}")
        polys.append(tuple(coeffs))
    return QuasiPolynomial(period, n_min, tuple(polys))


def nonnegative_form(form, max_part=None, count=None):
    """Search denominator multisets (same size by default) for a
    representation with non-negative numerator; None if the bounded search
    finds nothing.  Completeness is not claimed."""
    k = count if count is not None else len(form.denominators)
    if max_part is None:
        max_part = max(2 * max(form.denominators, default=1), 4)
    for dens in itertools.combinations_with_replacement(range(1, max_part + 1), k):
        num = list(form.numerator)
        for j in dens:
            num = pmul(num, geom_factor(j))
        for j in form.denominators:
            q = pdivexact(num, geom_factor(j))
            if q is None:
                num = None
                break
            num = q
        if num is None:
            continue
        if all(c >= 0 for c in num):
            return HilbertForm.make(num, dens)
    return None


def two_path_hilbert(t, degree, gen_bound=None, guard=DEFAULT_GUARD,
                     registry=None, dimension=None):
    """Run both routes to the Hilbert series and compare.

    Returns (fit_form, leading_form, agree).  The fitted form uses the
    monomorphic dimension computed from the template unless `dimension`
    overrides it.
    """
    from .algebra import TypeRegistry, profile_series
    from .decomposition import template_components

    registry = registry or TypeRegistry(t)
    comps = template_components(t)
    k = dimension if dimension is not None else comps.dimension
    series = profile_series(t, degree, registry)
    fitted = fit_rational(series, k, guard)
    lead = hilbert_via_leading(t, degree, gen_bound, registry, comps)
    return fitted, lead, fitted.same_series(lead)
