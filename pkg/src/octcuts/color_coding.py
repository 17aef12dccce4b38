"""Deterministic universal sets and universal function families.

An (n,k)-universal set family over a domain D realizes every pattern on
every small subset: for each S with |S| <= k, intersecting S with the
members yields all 2^|S| subsets.  Function families generalize this to
all q^|S| value assignments.

Two backends:

* ``exhaustive``: all 2^n subsets in ascending bitmask order.  Members are
  a lazy sequence, so building the family is O(1) and consumers that stop
  early (the pipeline stops on its first hit) never pay for the tail.
  Exhausting it is exponential by nature.
* ``greedy``: a small materialized family built by greedy set cover over
  the (subset, pattern) targets from a seeded candidate pool, patched and
  then verified, so a bad pool can only cost size, never correctness.

``auto`` picks exhaustive for small domains, greedy when the target space
is enumerable, and falls back to the lazy exhaustive sequence otherwise.
"""

from __future__ import annotations

import random
from collections.abc import Sequence
from dataclasses import dataclass
from itertools import combinations
from math import comb

B = "B"
C = "C"
R = "R"

_EXHAUSTIVE_LIMIT = 20
_GREEDY_TARGET_LIMIT = 200_000


class AllSubsets(Sequence):
    """All subsets of `domain`, index i holding element j iff bit j of i
    is set."""

    __slots__ = ("_domain",)

    def __init__(self, domain):
        self._domain = tuple(domain)

    def __len__(self):
        return 1 << len(self._domain)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        if i < 0:
            i += len(self)
        if not 0 <= i < len(self):
            raise IndexError(i)
        return frozenset(x for j, x in enumerate(self._domain) if i >> j & 1)

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]


@dataclass(frozen=True)
class UniversalSetFamily:
    domain: tuple
    k: int
    members: Sequence


@dataclass(frozen=True)
class UniversalFunctionFamily:
    domain: tuple
    codomain: tuple
    k: int
    members: "ProductFunctions"


def _check_domain(domain, k):
    if len(set(domain)) != len(domain):
        raise ValueError("domain has repeated elements")
    if k < 0:
        raise ValueError("negative pattern size")
    if k > len(domain):
        raise ValueError(f"pattern size {k} exceeds domain size {len(domain)}")


def _greedy_targets(domain, k):
    """(S, P) pairs to cover; |S| = k suffices, smaller subsets inherit."""
    for s_idx in combinations(range(len(domain)), k):
        s = frozenset(domain[j] for j in s_idx)
        ordered = [domain[j] for j in s_idx]
        for pmask in range(1 << k):
            yield s, frozenset(x for j, x in enumerate(ordered)
                               if pmask >> j & 1)


def _greedy_members(domain, k, seed):
    rng = random.Random(seed)
    targets = list(_greedy_targets(domain, k))
    pool_size = max(64, (1 << k) * (4 * len(targets).bit_length()))
    pool = [frozenset(x for x in domain if rng.random() < 0.5)
            for _ in range(pool_size)]
    covers = []
    for cand in pool:
        mask = 0
        for i, (s, p) in enumerate(targets):
            if cand & s == p:
                mask |= 1 << i
        covers.append(mask)
    uncovered = (1 << len(targets)) - 1
    members = []
    while uncovered:
        best, best_gain = None, 0
        for j, mask in enumerate(covers):
            gain = (mask & uncovered).bit_count()
            if gain > best_gain:
                best, best_gain = j, gain
        if best is None:
            break
        members.append(pool[best])
        uncovered &= ~covers[best]
    for i in range(len(targets)):
        # the pattern itself covers its own target (P ∩ S = P)
        if uncovered >> i & 1:
            members.append(targets[i][1])
    out, seen = [], set()
    for m in members:
        if m not in seen:
            seen.add(m)
            out.append(m)
    for s, p in targets:
        assert any(m & s == p for m in out), "greedy cover failed to verify"
    return out


def universal_set(domain, k: int, backend: str = "auto",
                  seed: int = 0) -> UniversalSetFamily:
    """Family of subsets realizing every pattern on every k-subset."""
    domain = tuple(domain)
    _check_domain(domain, k)
    if backend == "auto":
        if len(domain) <= _EXHAUSTIVE_LIMIT:
            backend = "exhaustive"
        elif comb(len(domain), k) << k <= _GREEDY_TARGET_LIMIT:
            backend = "greedy"
        else:
            backend = "exhaustive"
    if backend == "exhaustive":
        return UniversalSetFamily(domain, k, AllSubsets(domain))
    if backend == "greedy":
        return UniversalSetFamily(domain, k, _greedy_members(domain, k, seed))
    raise ValueError(f"unknown backend {backend!r}")


class ProductFunctions(Sequence):
    """Functions domain→codomain from a product of indicator sets.

    Member (U_1, .., U_q') maps x to codomain[min(code, q-1)] where code
    reads the indicator bits of x most significant first.  Index order is
    the mixed-radix product with the first set family most significant.
    May contain duplicate functions; `distinct` materializes a deduplicated
    list for small families.
    """

    __slots__ = ("_domain", "_codomain", "_sets")

    def __init__(self, domain, codomain, sets):
        self._domain = tuple(domain)
        self._codomain = tuple(codomain)
        self._sets = tuple(sets)

    @property
    def size(self) -> int:
        out = 1
        for fam in self._sets:
            out *= len(fam.members)
        return out

    def __len__(self):
        return self.size

    def _assemble(self, chosen):
        q = len(self._codomain)
        qp = len(chosen)
        out = {}
        for x in self._domain:
            code = 0
            for j, u in enumerate(chosen):
                if x in u:
                    code |= 1 << (qp - 1 - j)
            out[x] = self._codomain[min(code, q - 1)]
        return out

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(self.size))]
        if i < 0:
            i += self.size
        if not 0 <= i < self.size:
            raise IndexError(i)
        chosen = []
        for fam in reversed(self._sets):
            n = len(fam.members)
            chosen.append(fam.members[i % n])
            i //= n
        return self._assemble(list(reversed(chosen)))

    def __iter__(self):
        def rec(prefix, rest):
            if not rest:
                yield self._assemble(prefix)
                return
            for u in rest[0].members:
                yield from rec(prefix + [u], rest[1:])
        yield from rec([], self._sets)

    def distinct(self):
        seen, out = set(), []
        for f in self:
            key = frozenset(f.items())
            if key not in seen:
                seen.add(key)
                out.append(f)
        return out


def universal_function_family(a, b, k: int, backend: str = "auto",
                              seed: int = 0) -> UniversalFunctionFamily:
    """Family of functions a→b realizing every assignment on every k-subset.

    Product construction: one universal set per bit of the codomain index,
    decoded most significant bit first and clamped onto b.
    """
    a = tuple(a)
    b = tuple(b)
    if not b:
        raise ValueError("empty codomain")
    if len(set(b)) != len(b):
        raise ValueError("codomain has repeated values")
    _check_domain(a, k)
    qp = (len(b) - 1).bit_length()
    sets = tuple(universal_set(a, k, backend=backend, seed=seed + i)
                 for i in range(qp))
    return UniversalFunctionFamily(a, b, k, ProductFunctions(a, b, sets))


def occ_coloring_from_set(g, member) -> dict[int, str]:
    """Head/kept split induced by a universal set member: members become
    head candidates (C), the rest the bipartite side (B)."""
    return {v: C if v in member else B for v in g.sorted_vertices}


# -- persistence -----------------------------------------------------------

def set_family_to_lines(fam: UniversalSetFamily) -> list[str]:
    index = {x: j for j, x in enumerate(fam.domain)}
    lines = [f"u {len(fam.domain)} {fam.k} {len(fam.members)}"]
    for m in fam.members:
        mask = 0
        for x in m:
            mask |= 1 << index[x]
        lines.append(format(mask, "x"))
    return lines


def set_family_from_lines(domain, lines) -> UniversalSetFamily:
    domain = tuple(domain)
    it = iter(lines)
    try:
        header = next(it).split()
    except StopIteration:
        raise ValueError("empty family file") from None
    if len(header) != 4 or header[0] != "u":
        raise ValueError("malformed family header")
    n, k, count = (int(t) for t in header[1:])
    if n != len(domain):
        raise ValueError(f"family was built for domain size {n}, got {len(domain)}")
    members = []
    for raw in it:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        mask = int(line, 16)
        if mask >> n:
            raise ValueError(f"mask {line} outside the domain")
        members.append(frozenset(x for j, x in enumerate(domain)
                                 if mask >> j & 1))
    if len(members) != count:
        raise ValueError(f"expected {count} members, found {len(members)}")
    return UniversalSetFamily(domain, k, members)
