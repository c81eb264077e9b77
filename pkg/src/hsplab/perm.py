"""Permutations, permutation groups, and exact conjugacy-class censuses.

Points are 1-based in every public interface, matching cycle notation;
internally permutations are 0-based int32 image arrays.  The product
``a * b`` means "apply ``a`` first, then ``b``" (left-to-right action), so
``(a * b)(i) == b(a(i))``.

Groups carry a deterministic stabilizer chain with base points in increasing
smallest-moved-point order, giving exact arbitrary-precision orders,
membership tests, and element enumeration.  Cycle types are plain tuples:
the partition of the degree with parts descending, fixed points included as 1s.
"""

from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np

from . import _kernels
from .errors import LimitExceeded, ParseError, PreconditionError

#: Hard cap on element enumeration; beyond it callers must use an analytic
#: class profile (see hsplab.lab).  Keeps worst-case memory in the tens of MB.
ENUMERATION_LIMIT = 10**6

CycleType = tuple  # partition of the degree, descending, 1s included


def mult_arrays(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(a then b) as image arrays: result[i] = b[a[i]]."""
    return b[a]


def inv_array(a: np.ndarray) -> np.ndarray:
    inv = np.empty_like(a)
    inv[a] = np.arange(a.shape[0], dtype=a.dtype)
    return inv


class Permutation:
    """An immutable bijection of {1..n}."""

    __slots__ = ("_arr", "_key")

    def __init__(self, arr: np.ndarray):
        arr = np.asarray(arr, dtype=np.int32)
        arr.setflags(write=False)
        self._arr = arr
        self._key = arr.tobytes()

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        if degree < 1:
            raise ValueError("degree must be positive")
        return cls(np.arange(degree, dtype=np.int32))

    @classmethod
    def from_images(cls, images: Iterable[int]) -> "Permutation":
        """Build from 1-based images: images[i] is the image of point i+1."""
        arr = np.asarray([i - 1 for i in images], dtype=np.int32)
        n = arr.shape[0]
        if n < 1:
            raise ValueError("degree must be positive")
        if sorted(arr.tolist()) != list(range(n)):
            raise ValueError("images do not form a bijection of {1..n}")
        return cls(arr)

    @classmethod
    def from_cycles(cls, text: str, degree: int) -> "Permutation":
        return parse_cycles(text, degree)

    @property
    def degree(self) -> int:
        return self._arr.shape[0]

    @property
    def images(self) -> tuple:
        """1-based image tuple: images[i-1] is the image of point i."""
        return tuple(int(x) + 1 for x in self._arr)

    @property
    def array(self) -> np.ndarray:
        """The internal 0-based image array (read-only view)."""
        return self._arr

    def __call__(self, point: int) -> int:
        if not 1 <= point <= self.degree:
            raise ValueError(f"point {point} out of range 1..{self.degree}")
        return int(self._arr[point - 1]) + 1

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.degree != other.degree:
            raise PreconditionError("cannot compose permutations of mixed degrees")
        return Permutation(other._arr[self._arr])

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        result = np.arange(self.degree, dtype=np.int32)
        square = self._arr
        while k:
            if k & 1:
                result = square[result]
            square = square[square]
            k >>= 1
        return Permutation(result)

    def inverse(self) -> "Permutation":
        return Permutation(inv_array(self._arr))

    def conjugate_by(self, g: "Permutation") -> "Permutation":
        """g^-1 * self * g."""
        ginv = inv_array(g._arr)
        return Permutation(g._arr[self._arr[ginv]])

    def is_identity(self) -> bool:
        return bool(np.array_equal(self._arr, np.arange(self.degree, dtype=np.int32)))

    def cycle_type(self) -> CycleType:
        return cycle_type_of_array(self._arr)

    def support(self) -> int:
        return int(np.count_nonzero(self._arr != np.arange(self.degree, dtype=np.int32)))

    def fix(self) -> int:
        return self.degree - self.support()

    def cycles(self) -> str:
        """Cycle notation, e.g. '(1 2)(3 4)'; '()' for the identity."""
        arr = self._arr
        seen = np.zeros(self.degree, dtype=bool)
        out = []
        for i in range(self.degree):
            if seen[i] or arr[i] == i:
                seen[i] = True
                continue
            cyc = [i]
            seen[i] = True
            j = int(arr[i])
            while j != i:
                cyc.append(j)
                seen[j] = True
                j = int(arr[j])
            out.append("(" + " ".join(str(p + 1) for p in cyc) + ")")
        return "".join(out) if out else "()"

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"Permutation({self.cycles()!r}, degree={self.degree})"


def cycle_type_of_array(arr: np.ndarray) -> CycleType:
    n = arr.shape[0]
    seen = np.zeros(n, dtype=bool)
    parts = []
    for i in range(n):
        if not seen[i]:
            length = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = int(arr[j])
                length += 1
            parts.append(length)
    parts.sort(reverse=True)
    return tuple(parts)


def cycle_type(p: Permutation) -> CycleType:
    return p.cycle_type()


def support(p: Permutation) -> int:
    return p.support()


def fix(p: Permutation) -> int:
    return p.fix()


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int) -> Permutation:
    """Parse disjoint cycles like '(1 2)(3 4)'; absent points are fixed."""
    if degree < 1:
        raise ParseError("degree must be positive")
    leftover = _CYCLE_RE.sub(" ", text)
    if leftover.strip():
        raise ParseError(f"malformed cycle notation: {text!r}")
    arr = np.arange(degree, dtype=np.int32)
    used = set()
    for m in _CYCLE_RE.finditer(text):
        body = m.group(1).replace(",", " ").split()
        try:
            pts = [int(tok) for tok in body]
        except ValueError:
            raise ParseError(f"malformed cycle notation: {text!r}") from None
        for p in pts:
            if not 1 <= p <= degree:
                raise ParseError(f"point {p} out of range 1..{degree}")
            if p in used:
                raise ParseError(f"repeated point {p} in cycle notation")
            used.add(p)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            arr[a - 1] = b - 1
    return Permutation(arr)


# ---------------------------------------------------------------------------
# class profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassProfile:
    """Exact census of a subgroup of S_n by cycle type.

    This is the only data the analytic machinery needs about a subgroup:
    counts[t] is the number of its elements with S_n cycle type t.
    """

    degree: int
    counts: Mapping[CycleType, int]

    @classmethod
    def identity(cls, degree: int) -> "ClassProfile":
        return cls(degree, {(1,) * degree: 1})

    @property
    def order(self) -> int:
        return sum(self.counts.values())

    def count(self, t: CycleType) -> int:
        return self.counts.get(tuple(t), 0)

    def nonidentity_items(self):
        """(type, count) pairs excluding the identity type, deterministic order."""
        ident = (1,) * self.degree
        return [(t, c) for t, c in sorted(self.counts.items(), reverse=True)
                if t != ident and c]

    def validate(self) -> None:
        ident = (1,) * self.degree
        if self.counts.get(ident) != 1:
            raise ValueError("profile must contain the identity type exactly once")
        for t, c in self.counts.items():
            if sum(t) != self.degree or any(p < 1 for p in t) or list(t) != sorted(t, reverse=True):
                raise ValueError(f"{t} is not a cycle type of degree {self.degree}")
            if c < 0 or c > sn_class_size(t):
                raise ValueError(f"count {c} for type {t} exceeds the S_n class size")

    def minimal_support(self) -> int:
        """Minimal degree m(H) read off the profile; error on the trivial group."""
        supports = [self.degree - t.count(1) for t, c in self.counts.items()
                    if c and t != (1,) * self.degree]
        if not supports:
            raise PreconditionError("minimal degree is undefined for the trivial group")
        return min(supports)


def sn_class_size(t: CycleType) -> int:
    """Size of the S_n conjugacy class with cycle type t (n = sum of parts)."""
    n = sum(t)
    z = 1
    mult: dict[int, int] = {}
    for part in t:
        if part < 1:
            raise ValueError("cycle type parts must be positive")
        mult[part] = mult.get(part, 0) + 1
    for length, m in mult.items():
        z *= length**m * math.factorial(m)
    return math.factorial(n) // z


# ---------------------------------------------------------------------------
# stabilizer chains and groups
# ---------------------------------------------------------------------------


@dataclass
class PackedChain:
    """Flat-array stabilizer chain consumed by the kernels.

    Non-singleton levels only, base strictly increasing; level ``l`` owns
    transversal rows ``level_off[l]:level_off[l+1]``, row k of level l being
    the element mapping ``base[l]`` to ``orbit_pts[level_off[l]+k]``.
    """

    degree: int
    base: np.ndarray
    level_off: np.ndarray
    orbit_pts: np.ndarray
    pos: np.ndarray
    trans: np.ndarray
    trans_inv: np.ndarray
    order: int

    @property
    def num_levels(self) -> int:
        return self.base.shape[0]

    def level_sizes(self) -> list:
        return [int(self.level_off[l + 1] - self.level_off[l]) for l in range(self.num_levels)]


def _strong_generators(gen_arrays: list, degree: int) -> list:
    """Deterministic strong generating set w.r.t. the base (0, 1, ..., n-1)."""
    from sympy.combinatorics import Permutation as SymPerm
    from sympy.combinatorics import PermutationGroup as SymGroup

    sym_gens = [SymPerm(list(map(int, a))) for a in gen_arrays]
    group = SymGroup(sym_gens)
    _, strong = group.schreier_sims_incremental(base=list(range(degree)))
    out = []
    for g in strong:
        imgs = g.array_form + list(range(len(g.array_form), degree))
        out.append(np.array(imgs, dtype=np.int32))
    return out


def _build_chain(gen_arrays: list, degree: int) -> PackedChain:
    idarr = np.arange(degree, dtype=np.int32)
    gens = [a for a in gen_arrays if not np.array_equal(a, idarr)]
    levels = []  # (base point, [(orbit point, transversal array)])
    order = 1
    if gens:
        strong = _strong_generators(gens, degree)
        for b in range(degree):
            eff = [g for g in strong if all(int(g[x]) == x for x in range(b))]
            if not eff:
                break
            orbit: dict[int, np.ndarray] = {b: idarr}
            queue = deque([b])
            while queue:
                p = queue.popleft()
                up = orbit[p]
                for g in eff:
                    q = int(g[p])
                    if q not in orbit:
                        orbit[q] = g[up]
                        queue.append(q)
            order *= len(orbit)
            if len(orbit) > 1:
                levels.append((b, list(orbit.items())))

    nlev = len(levels)
    total = sum(len(items) for _, items in levels)
    base = np.array([b for b, _ in levels], dtype=np.int32)
    level_off = np.zeros(nlev + 1, dtype=np.int64)
    orbit_pts = np.empty(total, dtype=np.int32)
    pos = np.full((max(nlev, 1), degree), -1, dtype=np.int32)
    trans = np.empty((total, degree), dtype=np.int32)
    trans_inv = np.empty((total, degree), dtype=np.int32)
    row = 0
    for l, (b, items) in enumerate(levels):
        for k, (pt, u) in enumerate(items):
            orbit_pts[row] = pt
            pos[l, pt] = k
            trans[row] = u
            trans_inv[row] = inv_array(u)
            row += 1
        level_off[l + 1] = row
    return PackedChain(degree, base, level_off, orbit_pts, pos, trans, trans_inv, order)


class PermGroup:
    """A permutation group given by generators, with an exact stabilizer chain."""

    def __init__(self, generators: Iterable[Permutation], degree: int | None = None):
        gens = tuple(generators)
        if degree is None:
            if not gens:
                raise ValueError("degree required for an empty generator list")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise PreconditionError("generators have mixed degrees")
        self.degree = degree
        self.generators = gens
        self._chain = _build_chain([g.array for g in gens], degree)

    @classmethod
    def from_cycles(cls, texts: Iterable[str], degree: int) -> "PermGroup":
        return cls([parse_cycles(t, degree) for t in texts], degree)

    @classmethod
    def symmetric(cls, degree: int) -> "PermGroup":
        if degree == 1:
            return cls([], degree=1)
        gens = [parse_cycles("(1 2)", degree)]
        if degree > 2:
            gens.append(Permutation(np.roll(np.arange(degree, dtype=np.int32), -1)))
        return cls(gens, degree)

    @classmethod
    def alternating(cls, degree: int) -> "PermGroup":
        if degree < 3:
            return cls([], degree=max(degree, 1))
        gens = [parse_cycles(f"({i} {i + 1} {i + 2})", degree) for i in range(1, degree - 1)]
        return cls(gens, degree)

    @property
    def order(self) -> int:
        return self._chain.order

    @property
    def chain(self) -> PackedChain:
        return self._chain

    def __contains__(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            return False
        return self.contains_array(p.array)

    def contains_array(self, arr: np.ndarray) -> bool:
        ch = self._chain
        g = arr
        for l in range(ch.num_levels):
            p = int(g[ch.base[l]])
            k = int(ch.pos[l, p])
            if k < 0:
                return False
            g = ch.trans_inv[ch.level_off[l] + k][g]
        return bool(np.array_equal(g, np.arange(self.degree, dtype=np.int32)))

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.degree == other.degree and all(
            other.contains_array(g.array) for g in self.generators
        )

    def element_arrays(self, limit: int = ENUMERATION_LIMIT) -> Iterator[np.ndarray]:
        """All elements as image arrays, in deterministic chain order."""
        if self.order > limit:
            raise LimitExceeded(
                f"group order {self.order} exceeds the enumeration bound {limit}"
            )
        ch = self._chain
        idarr = np.arange(self.degree, dtype=np.int32)
        if ch.num_levels == 0:
            yield idarr
            return
        sizes = ch.level_sizes()
        nlev = ch.num_levels
        partial = [idarr] * (nlev + 1)
        idx = [0] * nlev
        lev = nlev - 1
        while True:
            if idx[lev] < sizes[lev]:
                u = ch.trans[int(ch.level_off[lev]) + idx[lev]]
                partial[lev] = u[partial[lev + 1]]
                idx[lev] += 1
                if lev == 0:
                    yield partial[0]
                else:
                    lev -= 1
                    idx[lev] = 0
            else:
                lev += 1
                if lev >= nlev:
                    return

    def elements(self, limit: int = ENUMERATION_LIMIT) -> Iterator[Permutation]:
        for arr in self.element_arrays(limit):
            yield Permutation(arr)

    def random_element(self, rng) -> Permutation:
        """Uniform random element drawn via the chain (deterministic per rng)."""
        ch = self._chain
        arr = np.arange(self.degree, dtype=np.int32)
        for l in range(ch.num_levels - 1, -1, -1):
            lo, hi = int(ch.level_off[l]), int(ch.level_off[l + 1])
            u = ch.trans[rng.randrange(lo, hi)]
            arr = u[arr]
        return Permutation(arr)

    def point_stabilizer(self, point: int) -> "PermGroup":
        """The stabilizer of a (1-based) point, as a new group."""
        if not 1 <= point <= self.degree:
            raise ValueError(f"point {point} out of range 1..{self.degree}")
        from sympy.combinatorics import Permutation as SymPerm
        from sympy.combinatorics import PermutationGroup as SymGroup

        p0 = point - 1
        idarr = np.arange(self.degree, dtype=np.int32)
        gens = [g.array for g in self.generators if not np.array_equal(g.array, idarr)]
        if not gens:
            return PermGroup([], degree=self.degree)
        base_hint = [p0] + [x for x in range(self.degree) if x != p0]
        group = SymGroup([SymPerm(list(map(int, a))) for a in gens])
        _, strong = group.schreier_sims_incremental(base=base_hint)
        stab = []
        for g in strong:
            imgs = g.array_form + list(range(len(g.array_form), self.degree))
            if imgs[p0] == p0:
                stab.append(Permutation(np.array(imgs, dtype=np.int32)))
        return PermGroup(stab, degree=self.degree)

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, order={self.order}, ngens={len(self.generators)})"


def build_group(gens: Iterable[Permutation], degree: int | None = None) -> PermGroup:
    return PermGroup(gens, degree)


# ---------------------------------------------------------------------------
# orbits, blocks, primitivity
# ---------------------------------------------------------------------------


def orbits(G: PermGroup) -> list:
    """Orbits on {1..n} as sorted tuples, ordered by smallest point."""
    n = G.degree
    seen = [False] * n
    gens = [g.array for g in G.generators]
    out = []
    for start in range(n):
        if seen[start]:
            continue
        orb = [start]
        seen[start] = True
        queue = deque([start])
        while queue:
            p = queue.popleft()
            for g in gens:
                q = int(g[p])
                if not seen[q]:
                    seen[q] = True
                    orb.append(q)
                    queue.append(q)
        out.append(tuple(sorted(x + 1 for x in orb)))
    return out


def is_transitive(G: PermGroup) -> bool:
    return len(orbits(G)) == 1


def _minimal_block_with(n: int, gens: list, beta: int) -> list:
    """Finest block system whose block contains {0, beta} (Atkinson)."""
    parent = list(range(n))

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    queue = deque()
    parent[beta] = 0
    queue.append((0, beta))
    while queue:
        a, b = queue.popleft()
        for g in gens:
            ra, rb = find(int(g[a])), find(int(g[b]))
            if ra != rb:
                if ra > rb:
                    ra, rb = rb, ra
                parent[rb] = ra
                queue.append((ra, rb))
    classes: dict[int, list] = {}
    for x in range(n):
        classes.setdefault(find(x), []).append(x)
    return sorted(classes.values())


def minimal_blocks(G: PermGroup):
    """A minimal non-trivial block system, or None if G is primitive.

    Scans candidate points in increasing order and returns the system with the
    smallest block size (ties by smallest candidate), so output is
    deterministic.  Requires a transitive group.
    """
    if not is_transitive(G):
        raise PreconditionError("block systems are defined for transitive groups only")
    n = G.degree
    if n == 1:
        return None
    gens = [g.array for g in G.generators]
    best = None
    for beta in range(1, n):
        system = _minimal_block_with(n, gens, beta)
        size = len(system[0]) if len(system) > 1 else n
        if 1 < size < n and (best is None or size < len(best[0])):
            best = system
            if size == 2:
                break
    if best is None:
        return None
    return [tuple(x + 1 for x in block) for block in best]


def is_primitive(G: PermGroup) -> bool:
    return minimal_blocks(G) is None


# ---------------------------------------------------------------------------
# censuses and conjugacy classes
# ---------------------------------------------------------------------------


def class_profile(H: PermGroup, limit: int = ENUMERATION_LIMIT) -> ClassProfile:
    """Exact census of H by S_n cycle type via chain enumeration."""
    if H.order > limit:
        raise LimitExceeded(
            f"group order {H.order} exceeds the enumeration bound {limit}; "
            "use an analytic profile constructor instead"
        )
    if H.degree > 32000:  # census rows are int16 multiplicity vectors
        raise LimitExceeded("censuses support degrees up to 32000")
    n = H.degree
    rows = _kernels.census_rows(H.chain, n, H.order)
    uniq, cnt = np.unique(rows, axis=0, return_counts=True)
    counts = {}
    for row, c in zip(uniq, cnt):
        parts = []
        for length in range(n, 0, -1):
            parts.extend([length] * int(row[length - 1]))
        counts[tuple(parts)] = int(c)
    return ClassProfile(n, counts)


def minimal_degree(H: PermGroup, limit: int = ENUMERATION_LIMIT) -> int:
    """m(H): minimum support of a non-identity element."""
    if H.order <= 1:
        raise PreconditionError("minimal degree is undefined for the trivial group")
    return class_profile(H, limit).minimal_support()


def general_classes(G: PermGroup, limit: int = ENUMERATION_LIMIT):
    """Conjugacy classes of an arbitrary group: list of (representative, size).

    Representatives are the first elements of each class in chain enumeration
    order, so the result is deterministic.
    """
    if G.order > limit:
        raise LimitExceeded(
            f"group order {G.order} exceeds the enumeration bound {limit}"
        )
    elems = list(G.element_arrays(limit))
    index = {a.tobytes(): i for i, a in enumerate(elems)}
    gen_pairs = [(g.array, inv_array(g.array)) for g in G.generators]
    assigned = np.full(len(elems), -1, dtype=np.int64)
    classes = []
    for i, e in enumerate(elems):
        if assigned[i] >= 0:
            continue
        cid = len(classes)
        assigned[i] = cid
        members = [i]
        queue = deque([e])
        while queue:
            x = queue.popleft()
            for g, ginv in gen_pairs:
                y = g[x[ginv]]
                j = index[y.tobytes()]
                if assigned[j] < 0:
                    assigned[j] = cid
                    members.append(j)
                    queue.append(y)
        classes.append((Permutation(elems[i]), len(members)))
    return classes


def element_class_map(G: PermGroup, limit: int = ENUMERATION_LIMIT):
    """(classes, map from element bytes-key to class id) for class lookups."""
    if G.order > limit:
        raise LimitExceeded(
            f"group order {G.order} exceeds the enumeration bound {limit}"
        )
    elems = list(G.element_arrays(limit))
    index = {a.tobytes(): i for i, a in enumerate(elems)}
    gen_pairs = [(g.array, inv_array(g.array)) for g in G.generators]
    assigned: dict[bytes, int] = {}
    classes = []
    for i, e in enumerate(elems):
        key = e.tobytes()
        if key in assigned:
            continue
        cid = len(classes)
        assigned[key] = cid
        size = 1
        queue = deque([e])
        while queue:
            x = queue.popleft()
            for g, ginv in gen_pairs:
                y = g[x[ginv]]
                ykey = y.tobytes()
                if ykey not in assigned:
                    assigned[ykey] = cid
                    size += 1
                    queue.append(y)
        classes.append((Permutation(e), size))
    del index
    return classes, assigned


# ---------------------------------------------------------------------------
# group files
# ---------------------------------------------------------------------------


def parse_group_file(text: str) -> PermGroup:
    """Parse the group file format: 'degree n' then one generator per line.

    '#' starts a comment; blank lines are ignored.
    """
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise ParseError("empty group file")
    m = re.fullmatch(r"degree\s+(\d+)", lines[0])
    if not m:
        raise ParseError("group file must start with a 'degree n' line")
    degree = int(m.group(1))
    if degree < 1:
        raise ParseError("degree must be positive")
    gens = [parse_cycles(line, degree) for line in lines[1:]]
    return PermGroup(gens, degree=degree)


def load_group_file(path) -> PermGroup:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_group_file(fh.read())
