"""
Finite permutation groups by enumeration.

Permutations are tuples of images on points 0..n-1 and compose functionally:
(p * q)(x) = p(q(x)). Groups of the sizes met here (at most a few thousand
elements) are enumerated outright; no stabilizer chain is built.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from math import lcm
from typing import Callable, Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy.combinatorics import Permutation as SympyPermutation

from app.core.config import settings
from app.core.exceptions import EnumerationCapExceeded, NotASubgroupError

logger = logging.getLogger(__name__)

Permutation = Tuple[int, ...]


def perm_identity(n: int) -> Permutation:
    return tuple(range(n))


def perm_mul(p: Permutation, q: Permutation) -> Permutation:
    """p * q, applying q first."""
    return tuple(p[x] for x in q)


def perm_inverse(p: Permutation) -> Permutation:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def perm_power(p: Permutation, k: int) -> Permutation:
    if k < 0:
        p, k = perm_inverse(p), -k
    result = perm_identity(len(p))
    base = p
    while k:
        if k & 1:
            result = perm_mul(result, base)
        base = perm_mul(base, base)
        k >>= 1
    return result


def perm_cycles(p: Permutation) -> List[Tuple[int, ...]]:
    """Non-trivial cycles, each starting at its smallest point."""
    seen = set()
    out = []
    for start in range(len(p)):
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        x = p[start]
        while x != start:
            cycle.append(x)
            seen.add(x)
            x = p[x]
        if len(cycle) > 1:
            out.append(tuple(cycle))
    return out


def perm_order(p: Permutation) -> int:
    return lcm(1, *(len(c) for c in perm_cycles(p)))


def to_sympy(p: Permutation) -> SympyPermutation:
    return SympyPermutation(list(p))


def is_even(p: Permutation) -> bool:
    return to_sympy(p).is_even


def from_cycles(cycles: Iterable[Sequence], points: Sequence) -> Permutation:
    """
    Build a permutation of ``points`` from cycles written in point labels

    Args:
        cycles: e.g. [("A", "B", "C"), ("D", "E")]
        points: ordered labels; the result acts on their indices
    """
    index = {label: i for i, label in enumerate(points)}
    image = list(range(len(points)))
    for cycle in cycles:
        for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
            image[index[a]] = index[b]
    if sorted(image) != list(range(len(points))):
        raise ValueError(f"cycles {cycles} do not define a permutation")
    return tuple(image)


def format_cycles(p: Permutation, points: Optional[Sequence] = None) -> str:
    cycles = perm_cycles(p)
    if not cycles:
        return "()"
    label = (lambda i: str(points[i])) if points is not None else (lambda i: str(i + 1))
    return "".join("(" + ",".join(label(i) for i in c) + ")" for c in cycles)


def close_elements(gens: Sequence[Hashable], mul: Callable, identity: Hashable,
                   cap: Optional[int] = None, what: str = "group") -> List:
    """
    Breadth-first closure of a generating set under a product rule

    Args:
        gens: generators
        mul: associative product
        identity: identity element
        cap: maximal number of elements

    Returns:
        List of all elements, identity first, in discovery order

    Raises:
        EnumerationCapExceeded: when the closure grows past ``cap``
    """
    cap = cap or settings.enumeration_cap
    seen = {identity}
    order = [identity]
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = mul(x, g)
            if y not in seen:
                seen.add(y)
                order.append(y)
                queue.append(y)
                if len(order) > cap:
                    raise EnumerationCapExceeded(what, cap)
    return order


class PermGroup:
    """
    Permutation group given by generators, with its elements enumerated
    """

    def __init__(self, generators: Sequence[Permutation], degree: Optional[int] = None,
                 name: str = "", elements: Optional[Iterable[Permutation]] = None,
                 cap: Optional[int] = None):
        gens = [tuple(g) for g in generators]
        if degree is None:
            if not gens:
                raise ValueError("degree is required for a group without generators")
            degree = len(gens[0])
        self.degree = degree
        self.name = name
        self.identity = perm_identity(degree)
        self.generators = [g for g in gens if g != self.identity] or []
        if elements is None:
            elements = close_elements(self.generators, perm_mul, self.identity, cap, name or "group")
        self.elements: List[Permutation] = sorted(set(elements))
        self._members = frozenset(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, p: Permutation) -> bool:
        return p in self._members

    def __repr__(self) -> str:
        return f"PermGroup({self.name or 'unnamed'}, degree={self.degree}, order={self.order})"

    @property
    def members(self) -> FrozenSet[Permutation]:
        return self._members

    def subgroup(self, generators: Sequence[Permutation], name: str = "") -> "PermGroup":
        sub = PermGroup(generators, degree=self.degree, name=name)
        if not sub.members <= self.members:
            raise NotASubgroupError(f"{name or 'subgroup'} is not contained in {self.name}")
        return sub

    def subgroup_from_elements(self, elements: Iterable[Permutation], name: str = "") -> "PermGroup":
        """Subgroup on a known element set; generators are picked greedily."""
        elems = sorted(set(elements))
        if not set(elems) <= self.members:
            raise NotASubgroupError(f"{name or 'subgroup'} is not contained in {self.name}")
        check_closed(elems)
        gens: List[Permutation] = []
        span = {self.identity}
        for x in sorted(elems, key=lambda p: (-perm_order(p), p)):
            if x not in span:
                gens.append(x)
                span = set(close_elements(gens, perm_mul, self.identity, len(elems), name or "subgroup"))
            if len(span) == len(elems):
                break
        return PermGroup(gens, degree=self.degree, name=name, elements=elems)

    def conjugate(self, p: Permutation, g: Permutation) -> Permutation:
        """g p g^-1"""
        return perm_mul(perm_mul(g, p), perm_inverse(g))

    def orbits(self) -> List[List[int]]:
        return point_orbits(self.generators, self.degree)

    def is_transitive(self) -> bool:
        return len(self.orbits()) == 1

    def random_element(self, rng: np.random.Generator) -> Permutation:
        return self.elements[int(rng.integers(len(self.elements)))]

    @cached_property
    def classes(self) -> "ConjugacyData":
        return conjugacy_classes(self)

    @cached_property
    def exponent(self) -> int:
        return lcm(1, *self.classes.orders)


def point_orbits(gens: Sequence[Permutation], degree: int) -> List[List[int]]:
    seen = set()
    out = []
    for start in range(degree):
        if start in seen:
            continue
        orbit = [start]
        seen.add(start)
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = g[x]
                if y not in seen:
                    seen.add(y)
                    orbit.append(y)
                    queue.append(y)
        out.append(sorted(orbit))
    return out


def check_closed(elements: Sequence[Permutation]) -> None:
    members = set(elements)
    if not members:
        raise NotASubgroupError("empty element set")
    n = len(next(iter(members)))
    if perm_identity(n) not in members:
        raise NotASubgroupError("identity missing")
    for a in members:
        if perm_inverse(a) not in members:
            raise NotASubgroupError("not closed under inverses")
    for a in members:
        for b in members:
            if perm_mul(a, b) not in members:
                raise NotASubgroupError("not closed under products")


def close_generators(gens: Sequence, mul: Optional[Callable] = None, identity=None,
                     cap: Optional[int] = None, name: str = ""):
    """
    Close a generating set to a group

    Permutations close to a PermGroup. Abstract elements (quaternions, matrices)
    need ``mul`` and ``identity`` and close to their element list.
    """
    if mul is None:
        return PermGroup(gens, name=name, cap=cap)
    elements = close_elements(gens, mul, identity, cap, name or "group")
    logger.info(f"Closed {name or 'group'} with {len(elements)} elements")
    return elements


def regular_representation(elements: Sequence, mul: Callable, generators: Sequence,
                           name: str = "") -> Tuple[PermGroup, Dict]:
    """
    Left-regular permutation group of an abstract group

    Returns:
        (PermGroup, element -> permutation map)
    """
    ordered = list(elements)
    index = {x: i for i, x in enumerate(ordered)}

    def left(g):
        return tuple(index[mul(g, x)] for x in ordered)

    group = PermGroup([left(g) for g in generators], degree=len(ordered), name=name)
    return group, {x: left(x) for x in ordered}


# ---------------------------------------------------------------------------
# Conjugacy classes
# ---------------------------------------------------------------------------

@dataclass
class ConjugacyData:
    classes: List[List[Permutation]]
    orders: List[int]
    class_index: Dict[Permutation, int] = field(repr=False)

    @property
    def representatives(self) -> List[Permutation]:
        return [c[0] for c in self.classes]

    @property
    def sizes(self) -> List[int]:
        return [len(c) for c in self.classes]

    def __len__(self) -> int:
        return len(self.classes)

    def class_of(self, p: Permutation) -> int:
        return self.class_index[p]

    def power_map(self, k: int) -> List[int]:
        """Class of rep^k for every class."""
        return [self.class_index[perm_power(r, k)] for r in self.representatives]

    def inverse_map(self) -> List[int]:
        return self.power_map(-1)

    def order_census(self) -> Dict[int, int]:
        census: Dict[int, int] = {}
        for o, size in zip(self.orders, self.sizes):
            census[o] = census.get(o, 0) + size
        return dict(sorted(census.items()))

    def centralizer_order(self, i: int) -> int:
        return sum(self.sizes) // self.sizes[i]


def conjugacy_classes(G: PermGroup) -> ConjugacyData:
    """
    Conjugacy classes ordered by element order, class size, then smallest representative
    """
    assigned: Dict[Permutation, int] = {}
    raw: List[List[Permutation]] = []
    gens = G.generators
    for x in G.elements:
        if x in assigned:
            continue
        orbit = [x]
        assigned[x] = len(raw)
        queue = deque([x])
        while queue:
            y = queue.popleft()
            for g in gens:
                z = G.conjugate(y, g)
                if z not in assigned:
                    assigned[z] = len(raw)
                    orbit.append(z)
                    queue.append(z)
        raw.append(sorted(orbit))
    keyed = sorted(raw, key=lambda c: (perm_order(c[0]), len(c), c[0]))
    index = {p: i for i, c in enumerate(keyed) for p in c}
    data = ConjugacyData(keyed, [perm_order(c[0]) for c in keyed], index)
    if sum(data.sizes) != G.order:
        raise AssertionError("class sizes do not sum to the group order")
    logger.info(f"Computed {len(keyed)} conjugacy classes of {G.name or 'group'} (order {G.order})")
    return data


# ---------------------------------------------------------------------------
# Actions
# ---------------------------------------------------------------------------

class GroupAction:
    """
    Action of a permutation group on a finite point set
    """

    def __init__(self, group: PermGroup, points: Sequence[Hashable],
                 act: Callable[[Permutation, Hashable], Hashable], name: str = ""):
        self.group = group
        self.points = list(points)
        self.index = {pt: i for i, pt in enumerate(self.points)}
        self.act = act
        self.name = name
        self._cache: Dict[Permutation, Permutation] = {}

    @property
    def degree(self) -> int:
        return len(self.points)

    def permutation(self, g: Permutation) -> Permutation:
        perm = self._cache.get(g)
        if perm is None:
            perm = tuple(self.index[self.act(g, pt)] for pt in self.points)
            self._cache[g] = perm
        return perm

    def fixed_points(self, g: Permutation) -> int:
        return sum(1 for i, x in enumerate(self.permutation(g)) if i == x)

    def orbits(self, generators: Optional[Sequence[Permutation]] = None) -> List[List[Hashable]]:
        gens = self.group.generators if generators is None else generators
        perms = [self.permutation(g) for g in gens]
        return [[self.points[i] for i in orbit] for orbit in point_orbits(perms, self.degree)]

    def is_transitive(self) -> bool:
        return len(self.orbits()) == 1

    def image(self, name: str = "") -> PermGroup:
        return PermGroup([self.permutation(g) for g in self.group.generators], degree=self.degree,
                         name=name or f"{self.name} image")

    def is_homomorphism(self, rng: np.random.Generator, trials: int = 50) -> bool:
        """Spot-check phi(gh) = phi(g) phi(h) on random pairs."""
        for _ in range(trials):
            g, h = self.group.random_element(rng), self.group.random_element(rng)
            if self.permutation(perm_mul(g, h)) != perm_mul(self.permutation(g), self.permutation(h)):
                return False
        return True

    def stabilizer_order(self, point: Hashable) -> int:
        return sum(1 for g in self.group.elements if self.act(g, point) == point)


def natural_action(G: PermGroup) -> GroupAction:
    return GroupAction(G, range(G.degree), lambda g, x: g[x], name=f"{G.name} natural")


def pair_action(G: PermGroup) -> GroupAction:
    """Action on unordered pairs of points, the 15-point set when the degree is 6."""
    pairs = [(a, b) for a in range(G.degree) for b in range(a + 1, G.degree)]
    return GroupAction(G, pairs, lambda g, p: tuple(sorted((g[p[0]], g[p[1]]))), name=f"{G.name} on pairs")


def coset_action(G: PermGroup, H: PermGroup) -> GroupAction:
    """
    Action of G on the left cosets gH

    Raises:
        NotASubgroupError: when H is not a subgroup of G
    """
    if not H.members <= G.members:
        raise NotASubgroupError(f"{H.name or 'H'} is not a subgroup of {G.name or 'G'}")
    coset_rep: Dict[Permutation, Permutation] = {}
    reps: List[Permutation] = []
    for g in G.elements:
        if g in coset_rep:
            continue
        coset = [perm_mul(g, h) for h in H.elements]
        rep = min(coset)
        reps.append(rep)
        for x in coset:
            coset_rep[x] = rep
    reps.sort()
    action = GroupAction(G, reps, lambda x, rep: coset_rep[perm_mul(x, rep)],
                         name=f"{G.name} on cosets of {H.name or 'H'}")
    logger.info(f"Built coset action of degree {len(reps)} for {G.name or 'group'}")
    return action


def orbit_partition(act: GroupAction, S: PermGroup) -> List[int]:
    """Sorted orbit sizes of the subgroup S on the points of the action."""
    return sorted(len(o) for o in act.orbits(S.generators))


def orbit_refinement(act: GroupAction, big: PermGroup, small: PermGroup) -> List[List[int]]:
    """
    Orbit sizes of ``small`` inside each orbit of ``big``, ordered by the size of the big orbit
    """
    small_orbits = act.orbits(small.generators)
    groups = []
    for orbit in sorted(act.orbits(big.generators), key=len):
        members = set(orbit)
        groups.append(sorted(len(o) for o in small_orbits if o[0] in members))
    return groups


def class_split_under(G: PermGroup, S: PermGroup) -> List[List[int]]:
    """
    Conjugation-orbit sizes of S on the elements of G, grouped by G-class in class order
    """
    if not S.members <= G.members:
        raise NotASubgroupError(f"{S.name or 'S'} is not a subgroup of {G.name or 'G'}")
    out = []
    for cls in G.classes.classes:
        remaining = set(cls)
        sizes = []
        while remaining:
            x = min(remaining)
            orbit = {x}
            queue = deque([x])
            while queue:
                y = queue.popleft()
                for s in S.generators:
                    z = G.conjugate(y, s)
                    if z not in orbit:
                        orbit.add(z)
                        queue.append(z)
            remaining -= orbit
            sizes.append(len(orbit))
        out.append(sorted(sizes))
    return out


# ---------------------------------------------------------------------------
# Subgroup search
# ---------------------------------------------------------------------------

@dataclass
class SubgroupSearch:
    order: int
    representatives: List[PermGroup]
    closures: int
    partial: bool = False

    @property
    def count(self) -> int:
        return len(self.representatives)


def _bounded_closure(gens: Sequence[Permutation], identity: Permutation, limit: int) -> Optional[FrozenSet]:
    seen = {identity}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = perm_mul(x, g)
            if y not in seen:
                seen.add(y)
                if len(seen) > limit:
                    return None
                queue.append(y)
    return frozenset(seen)


def cyclic_subgroups(G: PermGroup) -> List[Tuple[Permutation, FrozenSet[Permutation]]]:
    """(generator, element set) for every cyclic subgroup."""
    found: Dict[FrozenSet, Permutation] = {}
    for g in G.elements:
        powers = frozenset(perm_power(g, k) for k in range(perm_order(g)))
        if powers not in found:
            found[powers] = g
    return sorted(((g, s) for s, g in found.items()), key=lambda t: (len(t[1]), t[0]))


def subgroup_classes(G: PermGroup, order: int, cap: Optional[int] = None) -> SubgroupSearch:
    """
    Conjugacy classes of subgroups of the given order generated by at most two cyclic subgroups

    One cyclic subgroup per conjugacy class is joined with every cyclic subgroup;
    results are deduplicated by conjugacy. ``partial`` is set when the cap stops the search.
    """
    if G.order % order:
        return SubgroupSearch(order, [], 0)
    cap = cap or settings.subgroup_search_cap
    cyclic = cyclic_subgroups(G)
    known: set = set()
    reps: List[PermGroup] = []
    closures = 0
    partial = False

    def register(elements: FrozenSet, gens: List[Permutation]):
        if elements in known:
            return
        for g in G.elements:
            ginv = perm_inverse(g)
            known.add(frozenset(perm_mul(perm_mul(g, h), ginv) for h in elements))
        reps.append(PermGroup(gens, degree=G.degree, name=f"{G.name} subgroup {order}.{len(reps) + 1}",
                              elements=elements))

    # cyclic subgroups of the right order
    for g, elements in cyclic:
        if len(elements) == order:
            register(elements, [g])

    # one representative per conjugacy class of cyclic subgroups
    cyclic_reps = []
    seen_cyclic: set = set()
    for g, elements in cyclic:
        if elements in seen_cyclic or len(elements) == 1:
            continue
        cyclic_reps.append((g, elements))
        for x in G.elements:
            xinv = perm_inverse(x)
            seen_cyclic.add(frozenset(perm_mul(perm_mul(x, h), xinv) for h in elements))

    for a, a_elems in cyclic_reps:
        if order % len(a_elems):
            continue
        for b, b_elems in cyclic:
            if len(b_elems) == 1 or order % len(b_elems) or b in a_elems:
                continue
            closures += 1
            if closures > cap:
                partial = True
                break
            joined = _bounded_closure([a, b], G.identity, order)
            if joined is not None and len(joined) == order:
                register(joined, [a, b])
        if partial:
            break
    logger.info(f"Subgroup search in {G.name or 'group'} for order {order}: "
                f"{len(reps)} classes after {closures} closures")
    return SubgroupSearch(order, reps, closures, partial)


# ---------------------------------------------------------------------------
# Homomorphisms
# ---------------------------------------------------------------------------

def extend_homomorphism(G: PermGroup, images: Sequence, mul: Callable, identity) -> Optional[Dict]:
    """
    Extend generator images to a homomorphism on all of G, or None when inconsistent
    """
    phi: Dict[Permutation, object] = {G.identity: identity}
    queue = deque([G.identity])
    while queue:
        x = queue.popleft()
        for g, img in zip(G.generators, images):
            y = perm_mul(g, x)
            value = mul(img, phi[x])
            known = phi.get(y)
            if known is None:
                phi[y] = value
                queue.append(y)
            elif known != value:
                return None
    return phi


def find_isomorphism(G: PermGroup, H: PermGroup) -> Optional[Dict[Permutation, Permutation]]:
    """
    Exhaustive search over generator images for an isomorphism G -> H
    """
    if G.order != H.order:
        return None
    candidates = [[h for h in H.elements if perm_order(h) == perm_order(g)] for g in G.generators]
    for images in product(*candidates):
        phi = extend_homomorphism(G, images, perm_mul, H.identity)
        if phi is not None and len(set(phi.values())) == G.order:
            return phi
    return None


def automorphism_count(G: PermGroup) -> int:
    """Number of automorphisms, by counting bijective generator images."""
    candidates = [[h for h in G.elements if perm_order(h) == perm_order(g)] for g in G.generators]
    count = 0
    for images in product(*candidates):
        phi = extend_homomorphism(G, images, perm_mul, G.identity)
        if phi is not None and len(set(phi.values())) == G.order:
            count += 1
    return count


def kernel(phi: Dict[Permutation, Permutation], identity: Permutation) -> List[Permutation]:
    return sorted(g for g, img in phi.items() if img == identity)


def symmetric_group(n: int, name: str = "") -> PermGroup:
    if n < 2:
        return PermGroup([], degree=max(n, 1), name=name or f"Sym({n})")
    cycle = tuple(list(range(1, n)) + [0])
    swap = tuple([1, 0] + list(range(2, n)))
    return PermGroup([cycle, swap], name=name or f"Sym({n})")


def alternating_group(n: int, name: str = "") -> PermGroup:
    if n < 3:
        return PermGroup([], degree=max(n, 1), name=name or f"Alt({n})")
    gens = [from_cycles([(i, i + 1, i + 2)], range(n)) for i in range(n - 2)]
    return PermGroup(gens, name=name or f"Alt({n})")
