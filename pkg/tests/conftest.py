"""Shared test helpers: brute-force subgroup lattices and random subgroups.

Subgroup enumeration is deliberately not a library feature; tests build the
lattice themselves from the multiplication table (join-closure over cyclic
subgroups), which doubles as an independent oracle for chain-based orders.
"""

from __future__ import annotations

import random

import numpy as np
import pytest

from hsplab.perm import PermGroup, Permutation


class GroupTable:
    """A small group as an explicit multiplication table over element ids."""

    def __init__(self, G: PermGroup):
        self.group = G
        self.elements = list(G.element_arrays())
        self.n = len(self.elements)
        index = {a.tobytes(): i for i, a in enumerate(self.elements)}
        self.identity = index[np.arange(G.degree, dtype=np.int32).tobytes()]
        mult = np.empty((self.n, self.n), dtype=np.int32)
        for i, a in enumerate(self.elements):
            for j, b in enumerate(self.elements):
                mult[i, j] = index[b[a].tobytes()]
        self.mult = mult

    def close(self, gen_ids) -> np.ndarray:
        """Boolean membership mask of the subgroup generated by gen_ids."""
        mask = np.zeros(self.n, dtype=bool)
        mask[self.identity] = True
        gen_ids = sorted(set(gen_ids))
        if not gen_ids:
            return mask
        cols = np.array(gen_ids, dtype=np.int64)
        mask[cols] = True
        frontier = np.flatnonzero(mask)
        while frontier.size:
            prod = self.mult[np.ix_(frontier, cols)].ravel()
            prod = np.unique(prod[~mask[prod]])
            mask[prod] = True
            frontier = prod
        return mask

    def _conjugation_maps(self) -> np.ndarray:
        """maps[c][i] = id of c^-1 * e_i * c."""
        inv = np.argmax(self.mult == self.identity, axis=1)
        maps = np.empty((self.n, self.n), dtype=np.int64)
        for c in range(self.n):
            maps[c] = self.mult[self.mult[inv[c], :], c]
        return maps

    def all_subgroup_masks(self) -> list:
        """Every subgroup, as a membership mask.

        Join-closure BFS over conjugacy-class representatives: each newly
        found subgroup is expanded to its full conjugacy orbit, and only the
        representative is joined with the cyclic subgroups.  (If K = <J, c>
        with R = J^g already queued, then <R, c^g> = K^g is found and the
        orbit expansion recovers K.)
        """
        cmaps = self._conjugation_maps()
        cyclics = {}
        for i in range(self.n):
            mask = self.close([i])
            cyclics.setdefault(mask.tobytes(), (mask, i))

        subs: dict[bytes, np.ndarray] = {}
        queue = []

        def add_with_orbit(mask: np.ndarray, gens: tuple) -> None:
            if mask.tobytes() in subs:
                return
            queue.append((mask, gens))
            ids = np.flatnonzero(mask)
            for c in range(self.n):
                conj = np.zeros(self.n, dtype=bool)
                conj[cmaps[c, ids]] = True
                subs.setdefault(conj.tobytes(), conj)

        add_with_orbit(self.close([]), ())
        for _, (mask, i) in cyclics.items():
            add_with_orbit(mask, (i,))
        while queue:
            mask, gens = queue.pop()
            for _, (cmask, ci) in cyclics.items():
                if mask[ci]:
                    continue
                joined = self.close(list(gens) + [ci])
                if joined.tobytes() not in subs:
                    add_with_orbit(joined, tuple(gens) + (ci,))
        return list(subs.values())

    def subgroup_from_mask(self, mask: np.ndarray) -> PermGroup:
        """A PermGroup from a membership mask, via a small generating set."""
        gens: list[int] = []
        cur = self.close([])
        for i in np.flatnonzero(mask):
            if not cur[i]:
                gens.append(int(i))
                cur = self.close(gens)
        return PermGroup(
            [Permutation(self.elements[i].copy()) for i in gens] or [],
            degree=self.group.degree,
        )

    def mask_elements(self, mask: np.ndarray):
        return [self.elements[i] for i in np.flatnonzero(mask)]


def random_subgroup(rng: random.Random, G: PermGroup, max_gens: int = 3) -> PermGroup:
    k = rng.randint(1, max_gens)
    return PermGroup([G.random_element(rng) for _ in range(k)], G.degree)


@pytest.fixture(scope="session")
def s4_table() -> GroupTable:
    return GroupTable(PermGroup.symmetric(4))


@pytest.fixture(scope="session")
def s4_subgroups(s4_table) -> list:
    return [s4_table.subgroup_from_mask(m) for m in s4_table.all_subgroup_masks()]
