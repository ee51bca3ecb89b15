"""Cross-module invariant suite over the builtin gallery.

Each check returns (name, ok, detail); the CLI prints the matrix and exits
nonzero when anything fails.  The acceptance tests run the same criteria at
their full stated bounds; this module is the reusable, budget-aware core.
"""

from __future__ import annotations

import itertools
import random

from .algebra import TypeRegistry, mult_by_e_rank, profile_series
from .decomposition import partition_lower_bound, profile_floor_params, template_components
from .errors import AgeAlgError
from .gallery import GALLERY
from .hilbert import (WeightedMonomialIdeal, check_addlayer, ideal_hilbert,
                      quasi_polynomial, two_path_hilbert)
from .planar import (SCHRODER, default_sample, enumerate_reduced,
                     no_pair_monopart, planar_profile,
                     reconstruct_from_triples, tree_restrict)
from .templates import compositions, validate


def check_template(name, degree=10, rank_degree=5, addlayer_degree=6):
    """All per-template checks for one gallery entry."""
    entry = GALLERY[name]
    results = []
    t = entry.build()

    diags = validate(t, swap_degree=4)
    results.append((f"{name}: template valid", not diags, "; ".join(diags) or "ok"))

    registry = TypeRegistry(t)
    try:
        comps = template_components(t)
        ok = (comps.count == entry.expected_components
              and comps.dimension == entry.expected_dimension)
        results.append((
            f"{name}: components", ok,
            f"count={comps.count} k={comps.dimension} fat={comps.fatness}"))
    except AgeAlgError as exc:
        results.append((f"{name}: components", False, str(exc)))
        return results

    series = profile_series(t, degree, registry)
    results.append((
        f"{name}: profile non-decreasing",
        all(a <= b for a, b in zip(series, series[1:])),
        str(series)))

    try:
        fitted, lead, agree = two_path_hilbert(t, degree, registry=registry)
        results.append((
            f"{name}: two-path agreement", agree,
            f"fit={fitted.pretty()} lead={lead.pretty()}"))
        if entry.expected_hilbert is not None:
            results.append((
                f"{name}: matches published series",
                fitted.same_series(entry.expected_hilbert),
                entry.expected_hilbert.pretty()))
        qp = quasi_polynomial(fitted)
        results.append((
            f"{name}: quasi-polynomial degree",
            qp.degree == comps.dimension - 1
            and qp.leading_coefficient > 0,
            f"degree={qp.degree} lead={qp.leading_coefficient}"))
    except AgeAlgError as exc:
        results.append((f"{name}: hilbert", False, str(exc)))

    report = check_addlayer(t, addlayer_degree, registry)
    results.append((
        f"{name}: add-layer lemma", report.ok,
        f"checked={report.checked} violations={len(report.violations)}"))

    k, n0 = profile_floor_params(t, comps)
    counts = [sum(1 for _ in compositions(t, n)) for n in range(degree + 1)]
    sandwich = all(
        partition_lower_bound(k, n, n0) <= series[n] <= counts[n]
        for n in range(degree + 1))
    results.append((
        f"{name}: growth bounds", sandwich, f"k={k} n0={n0}"))

    ranks_ok = all(
        mult_by_e_rank(t, n, registry) == series[n] for n in range(rank_degree + 1))
    results.append((
        f"{name}: multiplication by e injective", ranks_ok,
        f"degrees 0..{rank_degree}"))
    return results


def check_planar(max_count=6, profile_n=4, triple_leaves=5):
    results = []
    counts = [len(enumerate_reduced(n)) for n in range(max_count + 1)]
    results.append((
        "planar: reduced tree counts",
        tuple(counts) == SCHRODER[:max_count + 1],
        str(counts)))
    results.append((
        "planar: profile matches Schroeder",
        planar_profile(profile_n) == SCHRODER[profile_n],
        f"n={profile_n}"))
    ok = True
    for tree in enumerate_reduced(triple_leaves):
        triples = {
            key: tree_restrict(tree, key)
            for key in itertools.combinations(range(1, triple_leaves + 1), 3)
        }
        if reconstruct_from_triples(triple_leaves, triples) != tree:
            ok = False
            break
    results.append((
        "planar: triple reconstruction", ok, f"{triple_leaves} leaves"))
    results.append((
        "planar: no two-element monomorphic part",
        no_pair_monopart(default_sample(3)),
        "sample from embeddings"))
    return results


def check_ideal_oracle(trials=10, degree=10, seed=20240601):
    rng = random.Random(seed)
    ok = True
    detail = "all matched"
    for trial in range(trials):
        nvars = rng.randint(1, 4)
        degrees = [rng.randint(1, 3) for _ in range(nvars)]
        gens = [
            tuple(rng.randint(0, 3) for _ in range(nvars))
            for _ in range(rng.randint(1, 5))
        ]
        gens = [g for g in gens if any(g)]
        if not gens:
            continue
        ideal = WeightedMonomialIdeal.make(degrees, gens)
        try:
            ideal_hilbert(ideal, degree)  # raises on oracle mismatch
        except AgeAlgError as exc:
            ok = False
            detail = f"trial {trial}: {exc}"
            break
    return [("ideal oracle: inclusion-exclusion vs counting", ok, detail)]


def _one_template(args):
    name, degree = args
    return check_template(name, degree=degree)


def run_all(degree=12, threads=1):
    """Full matrix: every gallery template plus planar and ideal checks."""
    results = []
    jobs = [(name, degree) for name in GALLERY]
    if threads > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for chunk in pool.map(_one_template, jobs):
                results.extend(chunk)
    else:
        for job in jobs:
            results.extend(_one_template(job))
    results.extend(check_planar())
    results.extend(check_ideal_oracle())
    return results
