"""Reduced plane trees, contractions, and the planar shuffle structure.

Trees are rooted, ordered, unlabelled; reduced means every internal node has
at least two children.  Representation: "o" for a leaf, a tuple of children
for an internal node, None for the empty reduced tree.  Counted by leaf
number these are the (super-Catalan / Schroeder) numbers 1,1,1,3,11,45,...

The infinite host tree is never materialized.  Its leaves are addressed by
paths of child indices, alternating: odd indices are leaves, even indices
descend into a fresh copy of the host (a frozen convention).  Contraction of
a finite address set builds the trie of the addresses and suppresses unary
nodes; left-right leaf order is address order.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .errors import ConsistencyError, InputError

LEAF = "o"
EMPTY = None

SCHRODER = (1, 1, 1, 3, 11, 45, 197, 903, 4279, 20793, 103049)


def leaves(tree):
    if tree is EMPTY:
        return 0
    if tree == LEAF:
        return 1
    return sum(leaves(c) for c in tree)


def depth(tree):
    if tree is EMPTY or tree == LEAF:
        return 0
    return 1 + max(depth(c) for c in tree)


def tree_to_text(tree):
    if tree is EMPTY:
        return ""
    if tree == LEAF:
        return "o"
    return "(" + ",".join(tree_to_text(c) for c in tree) + ")"


def tree_from_text(text):
    text = text.strip().replace(" ", "")
    if text == "":
        return EMPTY
    pos = 0

    def parse():
        nonlocal pos
        if pos < len(text) and text[pos] == "o":
            pos += 1
            return LEAF
        if pos >= len(text) or text[pos] != "(":
            raise InputError(f"bad tree text at {pos}: {text!r}")
        pos += 1
        kids = [parse()]
        while pos < len(text) and text[pos] == ",":
            pos += 1
            kids.append(parse())
        if pos >= len(text) or text[pos] != ")":
            raise InputError(f"unbalanced tree text: {text!r}")
        pos += 1
        return tuple(kids)

    out = parse()
    if pos != len(text):
        raise InputError(f"trailing characters in tree text: {text!r}")
    return out


def reduce_tree(tree):
    """Contract unary chains; leaves keep their order."""
    if tree is EMPTY or tree == LEAF:
        return tree
    kids = [reduce_tree(c) for c in tree]
    if len(kids) == 1:
        return kids[0]
    return tuple(kids)


def enumerate_reduced(n):
    """All reduced trees with exactly n leaves (Schroeder many)."""
    if n < 0:
        raise InputError("leaf count must be >= 0")
    return list(_enumerate_reduced(n))


@lru_cache(maxsize=None)
def _enumerate_reduced(n):
    if n == 0:
        return (EMPTY,)
    if n == 1:
        return (LEAF,)
    out = []
    for m in range(2, n + 1):
        for comp in _positive_compositions(n, m):
            for kids in itertools.product(*(_enumerate_reduced(c) for c in comp)):
                out.append(tuple(kids))
    return tuple(out)


def _positive_compositions(n, m):
    if m == 1:
        if n >= 1:
            yield (n,)
        return
    for first in range(1, n - m + 2):
        for rest in _positive_compositions(n - first, m - 1):
            yield (first,) + rest


def tree_restrict(tree, keep):
    """Contraction of a finite reduced tree onto a subset of its leaves
    (1-based leaf numbers in left-right order)."""
    keep = set(keep)
    counter = [0]

    def prune(node):
        if node == LEAF:
            counter[0] += 1
            return LEAF if counter[0] in keep else None
        kids = [k for k in (prune(c) for c in node) if k is not None]
        if not kids:
            return None
        if len(kids) == 1:
            return kids[0]
        return tuple(kids)

    if tree is EMPTY:
        if keep:
            raise InputError("cannot restrict the empty tree to leaves")
        return EMPTY
    out = prune(tree)
    return EMPTY if out is None else out


# ---------------------------------------------------------------------------
# leaf addresses of the infinite host tree


def check_address(addr):
    addr = tuple(int(x) for x in addr)
    if not addr:
        raise InputError("empty address")
    if any(x < 1 for x in addr):
        raise InputError("address indices must be >= 1")
    if addr[-1] % 2 != 1:
        raise InputError("address must end at a leaf (odd last index)")
    for x in addr[:-1]:
        if x % 2 != 0:
            raise InputError("intermediate address indices descend (even)")
    return addr


def contract(addresses):
    """Reduced tree induced by a finite set of host-tree leaves: the trie of
    the addresses with unary nodes suppressed.  No valid address is a prefix
    of another (prefixes end on even indices), so the trie is well formed."""
    addrs = [check_address(a) for a in addresses]
    if len(set(addrs)) != len(addrs):
        raise InputError("duplicate addresses")
    if not addrs:
        return EMPTY
    root = {}
    for a in addrs:
        node = root
        for x in a:
            node = node.setdefault(x, {})

    def build(node):
        if not node:
            return LEAF
        kids = [build(child) for _, child in sorted(node.items())]
        return kids[0] if len(kids) == 1 else tuple(kids)

    return build(root)


def embed(tree):
    """Greedy smallest-slot embedding of a reduced tree into the host:
    produces addresses whose contraction is the tree; embeddings of
    different trees share prefixes, keeping sample unions small."""
    if tree is EMPTY:
        return ()
    out = []

    def place(node, prefix):
        if node == LEAF:
            out.append(prefix + (1,))
            return
        last = 0
        for child in node:
            if child == LEAF:
                slot = last + 1 if (last + 1) % 2 == 1 else last + 2
                out.append(prefix + (slot,))
            else:
                slot = last + 1 if (last + 1) % 2 == 0 else last + 2
                place(child, prefix + (slot,))
            last = slot

    place(tree, ())
    return tuple(out)


def default_sample(n):
    """Union of the greedy embeddings of every reduced tree with n leaves;
    hosts each of them by construction."""
    sample = set()
    for tree in enumerate_reduced(n):
        sample.update(embed(tree))
    return tuple(sorted(sample))


def planar_profile(n, depth_budget=None, sample=None):
    """Number of contraction types among n-subsets of a finite leaf sample.

    With the default sample this equals the Schroeder number; a poorer
    sample undercounts, which the report makes visible.
    """
    count, report = planar_profile_report(n, depth_budget, sample)
    return count


def planar_profile_report(n, depth_budget=None, sample=None):
    if n < 0:
        raise InputError("n must be >= 0")
    if sample is None:
        sample = default_sample(n)
    sample = tuple(sorted(check_address(a) for a in sample))
    if depth_budget is not None:
        sample = tuple(a for a in sample if len(a) <= depth_budget)
    known = set(enumerate_reduced(n))
    seen = set()
    for subset in itertools.combinations(sample, n):
        tree = contract(subset)
        if tree not in known:
            raise ConsistencyError(
                f"contraction produced a non-reduced or wrong-size tree: "
                f"{tree_to_text(tree)}")
        seen.add(tree)
    report = {
        "sample_size": len(sample),
        "expected": len(known),
        "found": len(seen),
        "missing": sorted(tree_to_text(t) for t in known - seen),
    }
    return len(seen), report


def reconstruct_from_triples(d, triples):
    """Rebuild a reduced tree with leaves 1..d from the contractions of all
    its 3-subsets, or report inconsistency.

    An interval [i, j] of leaves (i < j) hangs under one internal node
    exactly when every triple {k, i, j} with k < i contracts to (o,(o,o))
    and every {i, j, k} with k > j contracts to ((o,o),o); the qualifying
    intervals are assembled greedily and the result is verified by
    recomputing all of its triples.
    """
    if d < 3:
        raise InputError("reconstruction needs d >= 3")
    table = {}
    for key, tree in dict(triples).items():
        key = frozenset(key)
        if len(key) != 3 or not key.issubset(range(1, d + 1)):
            raise InputError(f"bad triple key {sorted(key)}")
        table[key] = tree
    for key in itertools.combinations(range(1, d + 1), 3):
        if frozenset(key) not in table:
            raise InputError(f"triple map must be total; missing {key}")

    def qualifies(i, j):
        for k in range(1, i):
            if table[frozenset((k, i, j))] != WITNESS_LEFT:
                return False
        for k in range(j + 1, d + 1):
            if table[frozenset((i, j, k))] != WITNESS_RIGHT:
                return False
        return True

    node_intervals = {
        (i, j)
        for i in range(1, d + 1)
        for j in range(i + 1, d + 1)
        if qualifies(i, j)
    }

    def build(i, j):
        kids = []
        p = i
        while p <= j:
            q = None
            for jj in range(j, p, -1):
                if (p, jj) in node_intervals and (p, jj) != (i, j):
                    q = jj
                    break
            if q is None:
                kids.append(LEAF)
                p += 1
            else:
                kids.append(build(p, q))
                p = q + 1
        if len(kids) < 2:
            return None
        return tuple(kids)

    if (1, d) not in node_intervals:
        return None  # cannot happen with consistent data (conditions vacuous)
    tree = build(1, d)
    if tree is None or leaves(tree) != d:
        return None
    for key in itertools.combinations(range(1, d + 1), 3):
        if tree_restrict(tree, key) != table[frozenset(key)]:
            return None
    return tree


def shuffle_constant(t1, t2, t):
    """Shuffle structure constant: ordered splits A = A1 + A2 of a
    realization of t with contractions t1 and t2."""
    n1, n2, n = leaves(t1), leaves(t2), leaves(t)
    if n1 + n2 != n:
        raise InputError("leaf counts must add up")
    addresses = embed(t)
    if contract(addresses) != t:
        raise InputError("tree is not realized by its own embedding")
    count = 0
    for left in itertools.combinations(addresses, n1):
        right = tuple(a for a in addresses if a not in left)
        if contract(left) == t1 and contract(right) == t2:
            count += 1
    return count


# ---------------------------------------------------------------------------
# no two-element monomorphic part


WITNESS_LEFT = (LEAF, (LEAF, LEAF))     # (o,(o,o))
WITNESS_RIGHT = ((LEAF, LEAF), LEAF)    # ((o,o),o)


def _interposed_witness(a, b):
    """Two leaves c, d with contract{a,c,d} != contract{b,c,d}.

    Prefers the pair strictly between a and b whose own meet is deeper (the
    canonical (o,(o,o)) vs ((o,o),o) separation); when the two leaves are
    adjacent in the host, falls back to a sibling fan after b, which yields
    (o,(o,o)) vs (o,o,o)."""
    a, b = sorted((check_address(a), check_address(b)))
    p = 0
    while p < len(a) and p < len(b) and a[p] == b[p]:
        p += 1
    prefix = a[:p]
    ia, ib = a[p], b[p]
    # room between the next indices
    e = ia + 1 if (ia + 1) % 2 == 0 else ia + 2
    if e < ib:
        return prefix + (e, 1), prefix + (e, 3)
    if len(a) > p + 1:
        # descend a's copy, after a
        m = a[p + 1] + 1 if (a[p + 1] + 1) % 2 == 0 else a[p + 1] + 2
        return prefix + (ia, m, 1), prefix + (ia, m, 3)
    if len(b) > p + 1 and b[p + 1] > 2:
        # descend b's copy, before b
        return prefix + (ib, 2, 1), prefix + (ib, 2, 3)
    # adjacent leaves: sibling fan after b inside b's copy
    base = b[p + 1] if len(b) > p + 1 else 1
    m = base + 1 if (base + 1) % 2 == 1 else base + 2
    return prefix + (ib, m), prefix + (ib, m + 2)


def no_pair_monopart(sample):
    """True iff every pair of sample leaves is separated by some witness
    pair {c, d} (contract{a,c,d} != contract{b,c,d}); witnesses missing from
    the sample are constructed and added to the working closure."""
    sample = [check_address(a) for a in sample]
    if len(sample) < 4:
        raise InputError("need a sample of at least 4 leaves")
    closure = set(sample)
    for a, b in itertools.combinations(sorted(sample), 2):
        found = False
        for c, d in itertools.combinations(sorted(closure - {a, b}), 2):
            if contract((a, c, d)) != contract((b, c, d)):
                found = True
                break
        if not found:
            c, d = _interposed_witness(a, b)
            closure.update((c, d))
            if contract((a, c, d)) == contract((b, c, d)):
                return False
    return True
