"""Characteristic finite-index subgroups of K and the quotient ``N = K / K1``.

* free K: ``K1`` is the intersection of the kernels of *all* homomorphisms
  ``F_k -> Sym(d)``.  Precomposing with an endomorphism only permutes that
  family, so ``K1`` is invariant under every endomorphism.  ``N`` is the image
  of the diagonal map into ``Sym(d)^H`` (one block of ``d`` points per
  homomorphism), and an automorphism of K induces on ``N`` conjugation by the
  matching block permutation.
* free abelian K: ``K1 = m Z^n`` with ``m`` the exponent of ``Z^n / K0``.
* finite K: ``K1`` is trivial and ``N = K``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError, LimitError, VerificationError
from .groups import (
    ConjugationEndomorphism,
    FinitePerm,
    Free,
    FreeAbelian,
    Homomorphism,
    MatrixEndomorphism,
    ModAbelian,
    determinant,
)
from .permgroup import DEFAULT_MAX_DEGREE, PermGroup
from .smith import smith_normal_form

DEFAULT_MAX_HOMS = 20_000

FREE = "free"
ABELIAN = "abelian"
FINITE = "finite"


@dataclass(eq=False)
class CharacteristicQuotient:
    """``N = K / K1`` with its projection ``rho``.

    ``parameter`` is the degree ``d`` (free), the modulus ``m`` (abelian) or
    ``None`` (finite).  ``evidence`` holds the containment records.
    """

    kind: str
    source: object
    N: object
    rho: Homomorphism
    parameter: int | None
    evidence: list = field(default_factory=list)
    _perm_group: PermGroup | None = field(default=None, repr=False)

    @property
    def n_homs(self):
        if self.kind != FREE:
            return None
        return math.factorial(self.parameter) ** self.source.rank

    def perm_generators(self):
        if isinstance(self.N, ModAbelian):
            return self.N.perm_generators(), self.N.rank * self.N.modulus
        return list(self.N.generators()), self.N.degree

    def perm_group(self, max_degree=DEFAULT_MAX_DEGREE):
        if self._perm_group is None:
            gens, degree = self.perm_generators()
            self._perm_group = PermGroup(gens, degree, max_degree=max_degree)
        return self._perm_group

    def order(self, max_degree=DEFAULT_MAX_DEGREE):
        """``|N|`` via Schreier-Sims on a permutation realization."""
        return self.perm_group(max_degree).order()

    def to_json(self):
        out = {
            "kind": self.kind,
            "parameter": self.parameter,
            "N": self.N.to_json(),
            "rho": [self.N.element_to_json(x) for x in self.rho.images],
            "evidence": self.evidence,
        }
        return out


# ---------------------------------------------------------------------------
# free groups


def sym_elements(d):
    """All permutations of degree ``d`` in lexicographic order of image sequences."""
    return list(itertools.permutations(range(d)))


def perm_rank(p):
    """Position of ``p`` in the lexicographic order of its symmetric group."""
    d = len(p)
    rest = list(range(d))
    r = 0
    for i, x in enumerate(p):
        pos = rest.index(x)
        r += pos * math.factorial(d - 1 - i)
        rest.pop(pos)
    return r


def hom_index(images, d):
    """Index of the generator-image tuple in the enumerated family of ``F_k -> Sym(d)``."""
    base = math.factorial(d)
    j = 0
    for p in images:
        j = j * base + perm_rank(p)
    return j


def pad(p, d):
    return tuple(p) + tuple(range(len(p), d))


def block_projection(p, j, d):
    """Restriction of a diagonal permutation to block ``j``."""
    off = j * d
    return tuple(x - off for x in p[off : off + d])


def char_core_free(rank, d, max_homs=DEFAULT_MAX_HOMS):
    """Diagonal image of ``F_rank`` in the product over all ``F_rank -> Sym(d)``."""
    if d < 1:
        raise InputError("degree d must be at least 1")
    n_homs = math.factorial(d) ** rank
    if n_homs > max_homs:
        raise LimitError(f"(d!)^k for d={d}, k={rank}", n_homs, max_homs)
    K = Free(rank)
    perms = sym_elements(d)
    gens = [[] for _ in range(rank)]
    for j, tup in enumerate(itertools.product(perms, repeat=rank)):
        off = j * d
        for i, p in enumerate(tup):
            gens[i].extend(off + x for x in p)
    gens = tuple(tuple(g) for g in gens)
    N = FinitePerm(d * n_homs, gens)
    rho = Homomorphism(K, N, gens, trusted=True)
    return CharacteristicQuotient(FREE, K, N, rho, d)


def precompose_index(cq, j, theta):
    """Index of ``phi_j ∘ theta`` in the enumerated family (table lookup)."""
    d = cq.parameter
    images = [block_projection(cq.rho(theta(x)), j, d) for x in cq.source.generators()]
    return hom_index(images, d)


def block_conjugator(cq, theta):
    """Permutation ``B`` with ``rho(theta(w)) = B^-1 rho(w) B`` for every word ``w``."""
    d = cq.parameter
    B = [0] * cq.N.degree
    for j in range(cq.n_homs):
        sj = precompose_index(cq, j, theta)
        for a in range(d):
            B[sj * d + a] = j * d + a
    return tuple(B)


def free_containment(cq, witness):
    """One record per witness block: its padded images sit at ``index`` in ``rho``."""
    d = cq.parameter
    records = []
    for b_idx, block in enumerate(witness.blocks):
        if block.target.degree > d:
            raise InputError(f"witness block of degree {block.target.degree} exceeds d = {d}")
        padded = [pad(p, d) for p in block.images]
        j = hom_index(padded, d)
        ok = all(block_projection(cq.rho.images[i], j, d) == padded[i] for i in range(len(padded)))
        records.append({"block": b_idx, "degree": block.target.degree, "index": j, "holds": ok})
    return records


# ---------------------------------------------------------------------------
# free abelian groups


def _solve_integral(L, target):
    """Rational solution ``c`` of ``L c = target``; returns ``(c, integral)``."""
    n = len(L)
    a = [[Fraction(x) for x in row] + [Fraction(t)] for row, t in zip(L, target)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    c = [row[n] for row in a]
    return c, all(x.denominator == 1 for x in c)


def char_core_abelian(rank, L):
    """``K1 = m Z^n`` where ``m`` is the exponent of ``Z^n / span(columns of L)``."""
    L = [list(r) for r in L]
    if len(L) != rank or any(len(r) != rank for r in L):
        raise InputError(f"lattice basis must be {rank}x{rank}")
    if rank and determinant(L) == 0:
        raise InputError("lattice basis is singular: subgroup has infinite index")
    _, S, _ = smith_normal_form(L) if rank else (None, [], None)
    m = S[rank - 1][rank - 1] if rank else 1
    evidence = []
    for i in range(rank):
        target = [m if r == i else 0 for r in range(rank)]
        c, integral = _solve_integral(L, target)
        evidence.append({"generator": i, "coefficients": [int(x) if x.denominator == 1 else str(x) for x in c], "holds": integral})
    K = FreeAbelian(rank)
    N = ModAbelian(rank, m)
    rho = Homomorphism(K, N, N.generators(), trusted=True)
    return CharacteristicQuotient(ABELIAN, K, N, rho, m, evidence)


def char_core_finite(K):
    rho = Homomorphism(K, K, K.generators(), trusted=True)
    return CharacteristicQuotient(FINITE, K, K, rho, None)


# ---------------------------------------------------------------------------
# induced automorphisms


def induced_automorphism(cq, theta, theta_inv):
    """Automorphism pair of ``N`` induced by the automorphism pair of K.

    Raises :class:`VerificationError` when the induced maps fail to be mutually
    inverse on N's generators.
    """
    K, N = cq.source, cq.N
    if cq.kind == FREE:
        fwd = ConjugationEndomorphism(N, block_conjugator(cq, theta))
        back = ConjugationEndomorphism(N, block_conjugator(cq, theta_inv))
        expected = [cq.rho(theta(x)) for x in K.generators()]
        if list(fwd.images) != expected:
            raise VerificationError("block conjugation disagrees with rho ∘ theta")
    elif cq.kind == ABELIAN:
        m = cq.parameter
        fwd = MatrixEndomorphism(N, theta.matrix)
        back = MatrixEndomorphism(N, theta_inv.matrix)
        if math.gcd(determinant(theta.matrix), m) != 1:
            raise VerificationError(f"induced matrix is not invertible modulo {m}")
    else:
        fwd, back = theta, theta_inv
    gens_K = K.generators()
    for x in gens_K:
        # images of theta^-1(x) under the induced theta must return rho(x)
        if fwd(cq.rho(theta_inv(x))) != cq.rho(x) or back(cq.rho(theta(x))) != cq.rho(x):
            raise VerificationError("induced maps are not mutually inverse")
    for g in N.generators():
        if fwd(back(g)) != g or back(fwd(g)) != g:
            raise VerificationError("induced maps are not mutually inverse on N")
    return fwd, back


def induced_table(fwd):
    """Generator-image table of an induced automorphism."""
    return [list(x) for x in fwd.images]
