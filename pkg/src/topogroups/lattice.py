"""Complete subgroup lattices of small finite groups, plus the subgroup algebra.

Enumeration seeds with every cyclic subgroup and closes under pairwise join;
this is complete because each subgroup is the join of its own cyclic
subgroups.  The canonical order is (order, then membership lexicographic), so
index 0 is the trivial subgroup and the last index is the whole group.  Every
other module stores subgroup sets as sets of these canonical indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .groups import (
    DEFAULT_ORDER_CAP,
    FiniteGroup,
    Homomorphism,
    OrderCapExceededError,
    Subgroup,
    TopoGroupError,
    bits_of,
    closure_mask,
    make_homomorphism,
    mask_of,
    quotient_group,
    subgroup_group,
)

AUTOMORPHISM_CAP = 24


class ParentMismatchError(TopoGroupError):
    pass


class UnsupportedVarietyError(TopoGroupError):
    pass


class NotNormalError(TopoGroupError):
    pass


SUPPORTED_EXPONENTS = (2, 3, 4, 6)


class SubgroupLattice:
    """Canonical array of every subgroup of a group, with meet/join tables.

    Meets are mask intersections; joins are generated-subgroup closures and
    are memoized, as exhaustive suites do millions of them.
    """

    def __init__(self, group: FiniteGroup, masks):
        self.group = group
        key = lambda m: (m.bit_count(), tuple(bits_of(m)))
        ordered = sorted(set(masks), key=key)
        if ordered[0] != 1 or ordered[-1] != group.full_mask:
            raise TopoGroupError("lattice must span from the trivial subgroup to the whole group")
        self.subgroups: tuple[Subgroup, ...] = tuple(Subgroup(group, m) for m in ordered)
        self._index_by_mask = {m: i for i, m in enumerate(ordered)}
        self._join: dict[tuple[int, int], int] = {}
        self._cyclic: tuple[int, ...] | None = None
        self._normalizers: dict[int, int] = {}
        self._cores: dict[int, int] = {}
        self._commutators: dict[tuple[int, int], int] = {}
        self._hasse: tuple[tuple[int, int], ...] | None = None
        self._subgroup_groups: dict[int, tuple[FiniteGroup, Homomorphism]] = {}
        self._quotients: dict[int, tuple[FiniteGroup, Homomorphism]] = {}

    def __len__(self) -> int:
        return len(self.subgroups)

    @property
    def trivial_index(self) -> int:
        return 0

    @property
    def top_index(self) -> int:
        return len(self.subgroups) - 1

    def subgroup(self, i: int) -> Subgroup:
        return self.subgroups[i]

    def mask(self, i: int) -> int:
        return self.subgroups[i].mask

    def index_of(self, mask: int) -> int:
        try:
            return self._index_by_mask[mask]
        except KeyError:
            raise TopoGroupError(f"mask {mask:#x} is not a subgroup of {self.group.descriptor}") from None

    def maybe_index(self, mask: int) -> int | None:
        """Canonical index of a mask, or None when it is not a subgroup."""
        return self._index_by_mask.get(mask)

    def index_of_subgroup(self, sub: Subgroup) -> int:
        if sub.group != self.group:
            raise ParentMismatchError("subgroup belongs to a different group")
        return self.index_of(sub.mask)

    def leq(self, i: int, j: int) -> bool:
        mi, mj = self.subgroups[i].mask, self.subgroups[j].mask
        return mi & mj == mi

    def meet_index(self, i: int, j: int) -> int:
        return self._index_by_mask[self.subgroups[i].mask & self.subgroups[j].mask]

    def join_index(self, i: int, j: int) -> int:
        if i == j:
            return i
        key = (i, j) if i < j else (j, i)
        got = self._join.get(key)
        if got is None:
            mi, mj = self.subgroups[i].mask, self.subgroups[j].mask
            if mi & mj == mi:
                got = j
            elif mi & mj == mj:
                got = i
            else:
                got = self._index_by_mask[closure_mask(self.group, mi | mj)]
            self._join[key] = got
        return got

    def join_of(self, indices) -> int:
        acc = 0
        for i in indices:
            acc = self.join_index(acc, i)
        return acc

    def cyclic_index(self, x: int) -> int:
        """Canonical index of the cyclic subgroup generated by element x."""
        if self._cyclic is None:
            self._cyclic = tuple(
                self._index_by_mask[closure_mask(self.group, (y,))] for y in self.group.elements()
            )
        return self._cyclic[x]

    def conjugate_mask(self, mask: int, g: int) -> int:
        group = self.group
        return mask_of(group.conjugate(g, x) for x in bits_of(mask))

    def core_index(self, i: int) -> int:
        got = self._cores.get(i)
        if got is None:
            mask = self.subgroups[i].mask
            acc = mask
            for g in self.group.elements():
                acc &= self.conjugate_mask(mask, g)
            got = self._index_by_mask[acc]
            self._cores[i] = got
        return got

    def normalizer_index(self, i: int) -> int:
        got = self._normalizers.get(i)
        if got is None:
            mask = self.subgroups[i].mask
            nm = mask_of(g for g in self.group.elements() if self.conjugate_mask(mask, g) == mask)
            got = self._index_by_mask[nm]
            self._normalizers[i] = got
        return got

    def is_normal_index(self, i: int) -> bool:
        return self.normalizer_index(i) == self.top_index

    def normal_indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(len(self.subgroups)) if self.is_normal_index(i))

    def commutator_index(self, i: int, j: int) -> int:
        # [b, a] inverts [a, b], so the generated subgroup is symmetric in (i, j)
        key = (i, j) if i < j else (j, i)
        got = self._commutators.get(key)
        if got is None:
            group = self.group
            gens = set()
            for a in bits_of(self.subgroups[i].mask):
                for b in bits_of(self.subgroups[j].mask):
                    gens.add(group.table[group.table[a][b]][group.table[group.inverse[a]][group.inverse[b]]])
            got = self._index_by_mask[closure_mask(group, gens)]
            self._commutators[key] = got
        return got

    def hasse_covers(self) -> tuple[tuple[int, int], ...]:
        """Pairs (i, j) where subgroup j covers subgroup i."""
        if self._hasse is None:
            n = len(self.subgroups)
            covers = []
            for i in range(n):
                for j in range(n):
                    if i == j or not self.leq(i, j):
                        continue
                    if not any(k != i and k != j and self.leq(i, k) and self.leq(k, j) for k in range(n)):
                        covers.append((i, j))
            self._hasse = tuple(sorted(covers))
        return self._hasse

    def subgroup_as_group(self, i: int) -> tuple[FiniteGroup, Homomorphism]:
        got = self._subgroup_groups.get(i)
        if got is None:
            got = subgroup_group(self.group, self.subgroups[i].mask, f"|sub#{i}")
            self._subgroup_groups[i] = got
        return got

    def quotient_by(self, i: int) -> tuple[FiniteGroup, Homomorphism]:
        if not self.is_normal_index(i):
            raise NotNormalError(f"subgroup #{i} of {self.group.descriptor} is not normal")
        got = self._quotients.get(i)
        if got is None:
            got = quotient_group(self.group, self.subgroups[i].mask, f"|mod#{i}")
            self._quotients[i] = got
        return got

    def describe(self, i: int) -> str:
        sub = self.subgroups[i]
        names = ",".join(self.group.name(x) for x in sub.members)
        return f"#{i}(order {sub.order}: {{{names}}})"


def enumerate_subgroups(group: FiniteGroup, cap: int = DEFAULT_ORDER_CAP) -> SubgroupLattice:
    """Enumerate the complete subgroup lattice (memoized per group instance)."""
    if group._lattice is not None:
        return group._lattice
    if group.order > cap:
        raise OrderCapExceededError(f"group order {group.order} exceeds lattice cap {cap}")
    seen: set[int] = {1}
    queue: list[int] = [1]
    for x in group.elements():
        m = closure_mask(group, (x,))
        if m not in seen:
            seen.add(m)
            queue.append(m)
    i = 0
    while i < len(queue):
        m1 = queue[i]
        i += 1
        for m2 in queue[:i]:
            inter = m1 & m2
            if inter == m1 or inter == m2:
                continue
            j = closure_mask(group, m1 | m2)
            if j not in seen:
                seen.add(j)
                queue.append(j)
    lattice = SubgroupLattice(group, seen)
    group._lattice = lattice
    return lattice


def brute_force_subgroup_masks(group: FiniteGroup) -> tuple[int, ...]:
    """Independent completeness oracle: filter all identity-containing subsets.

    Only subsets whose size divides the group order can be closed, which keeps
    this usable up to order 16.
    """
    n = group.order
    table = group.table
    found = []
    divisors = [d for d in range(1, n + 1) if n % d == 0]
    others = list(range(1, n))
    for size in divisors:
        for combo in combinations(others, size - 1):
            mask = 1 | mask_of(combo)
            elems = (0,) + combo
            ok = True
            for a in elems:
                row = table[a]
                for b in elems:
                    if not mask >> row[b] & 1:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                found.append(mask)
    return tuple(sorted(found, key=lambda m: (m.bit_count(), tuple(bits_of(m)))))


def _require_same_parent(a: Subgroup, b: Subgroup):
    if a.group != b.group:
        raise ParentMismatchError("subgroups have different parent groups")


def meet(a: Subgroup, b: Subgroup) -> Subgroup:
    _require_same_parent(a, b)
    return Subgroup(a.group, a.mask & b.mask)


def join(a: Subgroup, b: Subgroup) -> Subgroup:
    _require_same_parent(a, b)
    return Subgroup(a.group, closure_mask(a.group, a.mask | b.mask))


def core(x: Subgroup) -> Subgroup:
    """Intersection of all conjugates: the largest normal subgroup inside x."""
    group = x.group
    acc = x.mask
    for g in group.elements():
        acc &= mask_of(group.conjugate(g, e) for e in bits_of(x.mask))
    return Subgroup(group, acc)


def normalizer(a: Subgroup) -> Subgroup:
    group = a.group
    conj = lambda g: mask_of(group.conjugate(g, e) for e in bits_of(a.mask))
    return Subgroup(group, mask_of(g for g in group.elements() if conj(g) == a.mask))


def is_normal(a: Subgroup) -> bool:
    return normalizer(a).is_whole


def commutator_subgroup(a: Subgroup, b: Subgroup) -> Subgroup:
    _require_same_parent(a, b)
    group = a.group
    gens = set()
    for x in bits_of(a.mask):
        for y in bits_of(b.mask):
            gens.add(group.table[group.table[x][y]][group.table[group.inverse[x]][group.inverse[y]]])
    return Subgroup(group, closure_mask(group, gens))


def _greedy_generators(group: FiniteGroup) -> tuple[int, ...]:
    gens: list[int] = []
    current = 1
    for x in group.elements():
        if current >> x & 1:
            continue
        gens.append(x)
        current = closure_mask(group, current | (1 << x))
        if current == group.full_mask:
            break
    return tuple(gens)


def _close_generator_map(group: FiniteGroup, gens, imgs) -> dict[int, int] | None:
    """Close a generator assignment into a map on the generated subgroup.

    Returns None as soon as the homomorphism equations become inconsistent.
    """
    mapping = {0: 0}
    for g, h in zip(gens, imgs):
        if mapping.get(g, h) != h:
            return None
        mapping[g] = h
    known = list(mapping)
    table = group.table
    i = 0
    while i < len(known):
        a = known[i]
        i += 1
        for b in list(known):
            for x, y in ((a, b), (b, a)):
                p = table[x][y]
                q = table[mapping[x]][mapping[y]]
                if p in mapping:
                    if mapping[p] != q:
                        return None
                else:
                    mapping[p] = q
                    known.append(p)
    return mapping


def automorphisms(group: FiniteGroup, cap: int = AUTOMORPHISM_CAP) -> tuple[Homomorphism, ...]:
    """All invertible self-maps, by backtracking over generator images.

    Candidates are pruned on element-order mismatch; a full bijection search
    is infeasible past order 8.
    """
    if group.order > cap:
        raise OrderCapExceededError(f"group order {group.order} exceeds automorphism cap {cap}")
    cached = group._automorphisms.get(cap)
    if cached is not None:
        return cached
    gens = _greedy_generators(group)
    if not gens:
        result = (make_homomorphism(group, group, (0,)),)
        group._automorphisms[cap] = result
        return result
    candidates = [
        [h for h in group.elements() if group.element_order(h) == group.element_order(g)] for g in gens
    ]
    found: list[Homomorphism] = []

    def search(depth: int, imgs: list[int]):
        if depth == len(gens):
            mapping = _close_generator_map(group, gens, imgs)
            if mapping is not None and len(mapping) == group.order and len(set(mapping.values())) == group.order:
                found.append(make_homomorphism(group, group, tuple(mapping[x] for x in group.elements())))
            return
        for h in candidates[depth]:
            imgs.append(h)
            if _close_generator_map(group, gens[: depth + 1], imgs) is not None:
                search(depth + 1, imgs)
            imgs.pop()

    search(0, [])
    result = tuple(found)
    group._automorphisms[cap] = result
    return result


def is_characteristic(a: Subgroup, cap: int = AUTOMORPHISM_CAP) -> bool:
    return all(phi.image_mask(a.mask) == a.mask for phi in automorphisms(a.group, cap))


def verbal_residual(group: FiniteGroup, variety: str) -> Subgroup:
    """Smallest normal subgroup whose quotient lies in the variety.

    Supported: ``abelian`` (derived subgroup) and ``exponent:n`` for
    n in {2, 3, 4, 6} (the subgroup generated by all n-th powers; the
    generating set is conjugation-closed, so the result is normal).
    """
    v = variety.replace("exponent-", "exponent:")
    if v == "abelian":
        full = Subgroup(group, group.full_mask)
        return commutator_subgroup(full, full)
    if v.startswith("exponent:"):
        try:
            n = int(v.split(":", 1)[1])
        except ValueError:
            raise UnsupportedVarietyError(f"bad exponent in variety {variety!r}") from None
        if n not in SUPPORTED_EXPONENTS:
            raise UnsupportedVarietyError(f"exponent {n} not in supported set {SUPPORTED_EXPONENTS}")
        return Subgroup(group, closure_mask(group, (group.power(x, n) for x in group.elements())))
    raise UnsupportedVarietyError(f"unknown variety {variety!r}")


EXACT_COVER_LIMIT = 20


@dataclass(frozen=True)
class CoverResult:
    """Positions into the supplied family; exact=False marks a greedy answer."""

    positions: tuple[int, ...]
    exact: bool


def minimal_cover(x: Subgroup, family: Sequence[Subgroup]) -> CoverResult | None:
    """Minimum-cardinality subfamily whose union still covers x, or None.

    Exact branch-and-bound up to EXACT_COVER_LIMIT family members, greedy with
    ``exact=False`` beyond that.  Tie-breaking is deterministic (lowest
    positions win), so witnesses are reproducible.
    """
    if not family:
        return None
    for s in family:
        _require_same_parent(x, s)
    universe = x.mask
    masks = [s.mask & universe for s in family]
    covered = 0
    for m in masks:
        covered |= m
    if covered & universe != universe:
        return None
    if len(family) > EXACT_COVER_LIMIT:
        return CoverResult(_greedy_cover(universe, masks), exact=False)
    covers_elem: dict[int, list[int]] = {}
    for e in bits_of(universe):
        covers_elem[e] = [p for p, m in enumerate(masks) if m >> e & 1]
    best: list[tuple[int, ...]] = [tuple(range(len(masks)))]

    def search(chosen: list[int], got: int):
        if len(chosen) >= len(best[0]):
            return
        if got == universe:
            best[0] = tuple(chosen)
            return
        remaining = universe & ~got
        pick = min(bits_of(remaining), key=lambda e: len(covers_elem[e]))
        for p in covers_elem[pick]:
            if p in chosen:
                continue
            chosen.append(p)
            search(chosen, got | masks[p])
            chosen.pop()

    search([], 0)
    return CoverResult(tuple(sorted(best[0])), exact=True)


def _greedy_cover(universe: int, masks: list[int]) -> tuple[int, ...]:
    picked: list[int] = []
    got = 0
    while got != universe:
        gain, choice = 0, -1
        for p, m in enumerate(masks):
            g = (m & ~got).bit_count()
            if g > gain:
                gain, choice = g, p
        picked.append(choice)
        got |= masks[choice]
    return tuple(sorted(picked))
