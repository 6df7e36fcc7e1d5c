"""Deterministic Schreier-Sims for finite permutation groups.

Base points are always the smallest point moved by the element that forces a
new level, so the chain (and hence every order reported in a certificate) is
reproducible run to run.
"""
from __future__ import annotations

from .errors import InputError, LimitError
from .groups import is_perm, perm_identity, perm_inv, perm_mul

DEFAULT_MAX_DEGREE = 10**6


def _first_moved(p):
    for i, x in enumerate(p):
        if x != i:
            return i
    return None


def _orbit_transversal(gens, point, degree):
    """Map each orbit point ``b`` to a permutation sending ``point`` to ``b``."""
    trans = {point: perm_identity(degree)}
    frontier = [point]
    while frontier:
        nxt = []
        for b in frontier:
            u = trans[b]
            for g in gens:
                c = g[b]
                if c not in trans:
                    trans[c] = perm_mul(u, g)
                    nxt.append(c)
        frontier = nxt
    return trans


class PermGroup:
    """Permutation group with a lazily built base and strong generating set.

    Parameters
    ----------
    gens : iterable of permutations
        Image tuples, all of length ``degree``.
    degree : int
    max_degree : int
        Structured :class:`LimitError` above this many points.
    """

    def __init__(self, gens, degree, max_degree=DEFAULT_MAX_DEGREE):
        if degree > max_degree:
            raise LimitError("degree", degree, max_degree)
        gens = [tuple(g) for g in gens]
        for g in gens:
            if not is_perm(g, degree):
                raise InputError(f"{list(g)} is not a permutation of degree {degree}")
        self.degree = degree
        self.generators = gens
        self._base = None
        self._levels = None
        self._trans = None
        self._trans_inv = None
        self._checked = None

    # -- chain construction -------------------------------------------------

    def _strip(self, g, start=0):
        base, trans_inv = self._base, self._trans_inv
        for i in range(start, len(base)):
            b = g[base[i]]
            u_inv = trans_inv[i].get(b)
            if u_inv is None:
                return g, i
            g = perm_mul(g, u_inv)
        return g, len(base)

    def _set_level(self, lev):
        trans = _orbit_transversal(self._levels[lev], self._base[lev], self.degree)
        self._trans[lev] = trans
        self._trans_inv[lev] = {b: perm_inv(u) for b, u in trans.items()}
        self._checked[lev] = set()

    def _build(self):
        if self._base is not None:
            return
        ident = perm_identity(self.degree)
        gens = [g for g in self.generators if g != ident]
        base = []
        for g in gens:
            if all(g[b] == b for b in base):
                base.append(_first_moved(g))
        self._base = base
        levels = [[g for g in gens if all(g[b] == b for b in base[:i])] for i in range(len(base))]
        self._levels = levels
        self._trans = [None] * len(base)
        self._trans_inv = [None] * len(base)
        # (orbit point, generator position) pairs whose Schreier generator sifted
        self._checked = [None] * len(base)
        for lev in range(len(base)):
            self._set_level(lev)

        i = len(base) - 1
        while i >= 0:
            restart = False
            trans_i, inv_i, checked = self._trans[i], self._trans_inv[i], self._checked[i]
            for beta, u_beta in list(trans_i.items()):
                for pos, s in enumerate(self._levels[i]):
                    if (beta, pos) in checked:
                        continue
                    g1 = perm_mul(u_beta, s)
                    gamma = s[beta]
                    if g1 == trans_i[gamma]:
                        checked.add((beta, pos))
                        continue
                    h, j = self._strip(perm_mul(g1, inv_i[gamma]), i + 1)
                    if j < len(self._base):
                        pass
                    elif h != ident:
                        self._base.append(_first_moved(h))
                        self._levels.append([])
                        self._trans.append(None)
                        self._trans_inv.append(None)
                        self._checked.append(None)
                    else:
                        checked.add((beta, pos))
                        continue
                    for lev in range(i + 1, j + 1):
                        self._levels[lev].append(h)
                        self._set_level(lev)
                    i = j
                    restart = True
                    break
                if restart:
                    break
            if not restart:
                i -= 1

    # -- queries ------------------------------------------------------------

    @property
    def base(self):
        self._build()
        return list(self._base)

    @property
    def strong_generators(self):
        self._build()
        seen, out = set(), []
        for level in self._levels:
            for g in level:
                if g not in seen:
                    seen.add(g)
                    out.append(g)
        return out

    def basic_orbit_lengths(self):
        self._build()
        return [len(t) for t in self._trans]

    def order(self):
        n = 1
        for length in self.basic_orbit_lengths():
            n *= length
        return n

    def contains(self, p):
        p = tuple(p)
        if len(p) != self.degree:
            raise InputError(f"degree mismatch: {len(p)} vs {self.degree}")
        self._build()
        h, j = self._strip(p)
        return j == len(self._base) and h == perm_identity(self.degree)

    def to_json(self):
        return {"degree": self.degree, "generators": [list(g) for g in self.generators]}


def schreier_sims(gens, degree, max_degree=DEFAULT_MAX_DEGREE):
    group = PermGroup(gens, degree, max_degree=max_degree)
    group._build()
    return group


def group_order(g: PermGroup) -> int:
    return g.order()


def is_member(g: PermGroup, p) -> bool:
    return g.contains(p)
