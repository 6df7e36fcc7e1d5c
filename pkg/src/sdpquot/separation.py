"""Finite quotients of K that keep a finite set of nontrivial elements nontrivial.

Free groups use the prefix tree of the words, folded and then completed to a
permutation action; free abelian groups reduce modulo a large enough integer;
finite groups are their own witness.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InputError
from .groups import (
    FinitePerm,
    Free,
    FreeAbelian,
    Homomorphism,
    ModAbelian,
    descriptor_from_json,
)

STALLINGS = "stallings"
MODULUS = "modulus"
TRIVIAL = "trivial"

JOINT = "joint"
PER_WORD = "per-word"


@dataclass(frozen=True, eq=False)
class FiniteIndexWitness:
    """Homomorphism ``phi`` from K to a finite group, nontrivial on ``separated``.

    ``blocks`` (free case) are the permutation representations whose disjoint
    union is ``phi``; with the joint strategy there is exactly one.
    """

    kind: str
    phi: Homomorphism
    separated: tuple
    modulus: int | None = None
    blocks: tuple = field(default=())

    @property
    def degree(self):
        t = self.phi.target
        return t.degree if isinstance(t, FinitePerm) else t.modulus

    @property
    def block_degrees(self):
        return [b.target.degree for b in self.blocks]

    def is_sound(self):
        e = self.phi.target.identity()
        return all(self.phi(w) != e for w in self.separated)

    def to_json(self):
        K = self.phi.source
        out = {
            "kind": self.kind,
            "separated": [K.element_to_json(w) for w in self.separated],
            "target": self.phi.target.to_json(),
            "images": [self.phi.target.element_to_json(x) for x in self.phi.images],
        }
        if self.modulus is not None:
            out["modulus"] = self.modulus
        if self.blocks:
            out["blocks"] = [
                {"degree": b.target.degree, "images": [list(x) for x in b.images]} for b in self.blocks
            ]
        return out

    @classmethod
    def from_json(cls, obj, K):
        try:
            kind = obj["kind"]
            target = descriptor_from_json(obj["target"])
            images = [target.element_from_json(x) for x in obj["images"]]
            separated = tuple(K.element_from_json(w) for w in obj["separated"])
            blocks = tuple(
                Homomorphism(K, FinitePerm(b["degree"], ()), tuple(tuple(x) for x in b["images"]), trusted=True)
                for b in obj.get("blocks", [])
            )
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed witness: {exc}") from None
        phi = Homomorphism(K, target, tuple(images), trusted=True)
        return cls(kind, phi, separated, obj.get("modulus"), blocks)


# ---------------------------------------------------------------------------
# free groups


def _prefix_graph(words):
    prefixes = {()}
    for w in words:
        for i in range(1, len(w) + 1):
            prefixes.add(tuple(w[:i]))
    order = sorted(prefixes, key=lambda p: (len(p), p))
    index = {p: i for i, p in enumerate(order)}
    edges = []
    for p in order[1:]:
        u, v, x = index[p[:-1]], index[p], p[-1]
        # edges are (source, generator, target) for the positive letter
        edges.append((u, x, v) if x > 0 else (v, -x, u))
    return len(order), edges


def fold(nvertices, edges):
    """Merge vertices until no vertex has two equally labelled edges in or out.

    Returns ``(nvertices, edges)`` renumbered so that vertex 0 (the base point)
    keeps number 0 and the remaining classes keep their relative order.
    """
    parent = list(range(nvertices))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    changed = True
    while changed:
        changed = False
        out, inn = {}, {}
        for u, x, v in edges:
            u, v = find(u), find(v)
            for table, key, other in ((out, (u, x), v), (inn, (v, x), u)):
                seen = table.get(key)
                if seen is None:
                    table[key] = other
                elif find(seen) != find(other):
                    a, b = sorted((find(seen), find(other)))
                    parent[b] = a
                    changed = True
    roots = sorted({find(a) for a in range(nvertices)})
    renum = {r: i for i, r in enumerate(roots)}
    folded = sorted({(renum[find(u)], x, renum[find(v)]) for u, x, v in edges})
    return len(roots), folded


def complete(nvertices, edges, rank):
    """Extend each generator's partial injection to a permutation of the vertices.

    Unmatched sources are paired with unmatched targets in ascending order.
    """
    perms = []
    for x in range(1, rank + 1):
        images = [None] * nvertices
        hit = [False] * nvertices
        for u, y, v in edges:
            if y == x:
                images[u] = v
                hit[v] = True
        sources = [u for u in range(nvertices) if images[u] is None]
        targets = [v for v in range(nvertices) if not hit[v]]
        for u, v in zip(sources, targets):
            images[u] = v
        perms.append(tuple(images))
    return perms


def _check_words(rank, words):
    K = Free(rank)
    words = [K.validate(w) for w in words]
    if any(len(w) == 0 for w in words):
        raise InputError("the identity cannot be separated")
    return K, words


def folded_action(rank, words):
    """Permutation action of ``F_rank`` on the completed folded prefix tree."""
    n, edges = fold(*_prefix_graph(words))
    return n, complete(n, edges, rank)


def separate_free(rank, words):
    """One permutation representation built from the joint prefix tree of ``words``."""
    K, words = _check_words(rank, words)
    n, perms = folded_action(rank, words)
    phi = Homomorphism(K, FinitePerm(n, tuple(perms)), tuple(perms), trusted=True)
    return FiniteIndexWitness(STALLINGS, phi, tuple(words), blocks=(phi,))


def separate_free_per_word(rank, words):
    """Disjoint union of the folded path representations of each word.

    Each block has degree at most ``len(word) + 1``; identical blocks are kept once.
    """
    K, words = _check_words(rank, words)
    blocks, seen = [], set()
    for w in words:
        n, perms = folded_action(rank, [w])
        key = tuple(perms)
        if key in seen:
            continue
        seen.add(key)
        blocks.append(Homomorphism(K, FinitePerm(n, key), key, trusted=True))
    if not blocks:
        n, perms = folded_action(rank, [])
        blocks.append(Homomorphism(K, FinitePerm(n, tuple(perms)), tuple(perms), trusted=True))
    phi = disjoint_union(K, blocks)
    return FiniteIndexWitness(STALLINGS, phi, tuple(words), blocks=tuple(blocks))


def disjoint_union(K, blocks):
    total = sum(b.target.degree for b in blocks)
    images = []
    for j in range(K.ngens):
        p, offset = [], 0
        for b in blocks:
            p.extend(offset + x for x in b.images[j])
            offset += b.target.degree
        images.append(tuple(p))
    return Homomorphism(K, FinitePerm(total, tuple(images)), tuple(images), trusted=True)


# ---------------------------------------------------------------------------
# free abelian and finite groups


def separate_abelian(rank, vectors):
    """Reduction modulo ``1 + max |coordinate|`` (``1`` for the empty set)."""
    K = FreeAbelian(rank)
    vectors = [K.validate(v) for v in vectors]
    if any(not any(v) for v in vectors):
        raise InputError("the zero vector cannot be separated")
    m = 1 + max((abs(x) for v in vectors for x in v), default=0)
    target = ModAbelian(rank, m)
    phi = Homomorphism(K, target, target.generators(), trusted=True)
    return FiniteIndexWitness(MODULUS, phi, tuple(vectors), modulus=m)


def separate_finite(K, elements):
    elements = [K.validate(a) for a in elements]
    if any(a == K.identity() for a in elements):
        raise InputError("the identity cannot be separated")
    phi = Homomorphism(K, K, K.generators(), trusted=True)
    return FiniteIndexWitness(TRIVIAL, phi, tuple(elements))


def separate(desc, elements, strategy=JOINT):
    """Dispatch on the kind of ``desc``.

    ``strategy`` only matters for free groups: ``"joint"`` folds one prefix tree
    for the whole set, ``"per-word"`` keeps one small block per word.
    """
    if isinstance(desc, Free):
        if strategy == PER_WORD:
            return separate_free_per_word(desc.rank, elements)
        if strategy == JOINT:
            return separate_free(desc.rank, elements)
        raise InputError(f"unknown separation strategy {strategy!r}")
    if isinstance(desc, FreeAbelian):
        return separate_abelian(desc.rank, elements)
    if isinstance(desc, FinitePerm):
        return separate_finite(desc, elements)
    raise InputError(f"cannot separate in groups of kind {desc.kind!r}")
