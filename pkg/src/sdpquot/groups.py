"""Computable groups: descriptors, element arithmetic and homomorphisms.

Elements are plain immutable Python values so they hash and compare exactly:

* free group words are tuples of signed generator indices (``2`` is the second
  generator, ``-2`` its inverse), always freely reduced;
* free abelian and modular vectors are tuples of ints;
* permutations are image tuples;
* semidirect elements are pairs ``(k, q)``.

Permutations compose left to right: ``perm_mul(a, b)`` applies ``a`` first.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .errors import InputError, LimitError

DEFAULT_MAX_ELEMENTS = 200_000
DEFAULT_MAX_BALL = 100_000

ACTION_VERIFIED = "verified"
ACTION_RELATORS = "relators-checked"
ACTION_UNVERIFIED = "unverified-action"


# ---------------------------------------------------------------------------
# permutations and words


def perm_mul(a, b):
    """Product of two permutations, applying ``a`` first and then ``b``."""
    return tuple(b[i] for i in a)


def perm_inv(a):
    out = [0] * len(a)
    for i, j in enumerate(a):
        out[j] = i
    return tuple(out)


def perm_identity(n):
    return tuple(range(n))


def is_perm(p, degree=None):
    if degree is not None and len(p) != degree:
        return False
    return sorted(p) == list(range(len(p)))


def format_perm(p):
    """Cycle notation, e.g. ``(0 1 2)``; the identity prints as ``()``."""
    seen = set()
    cycles = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cycle = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            seen.add(j)
            cycle.append(j)
            j = p[j]
        cycles.append("(" + " ".join(map(str, cycle)) + ")")
    return "".join(cycles) or "()"


def reduce_word(letters):
    out = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def _is_int(x):
    return isinstance(x, int) and not isinstance(x, bool)


def _int_tuple(a, what):
    try:
        items = tuple(a)
    except TypeError:
        raise InputError(f"{what} must be a sequence of integers, got {a!r}") from None
    if not all(_is_int(x) for x in items):
        raise InputError(f"{what} must contain only integers, got {a!r}")
    return items


# ---------------------------------------------------------------------------
# descriptors


class Group:
    """Common interface of every group descriptor."""

    kind = "abstract"

    def identity(self):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def generators(self):
        raise NotImplementedError

    def validate(self, a):
        """Return the canonical form of ``a`` or raise :class:`InputError`."""
        raise NotImplementedError

    def factor(self, a):
        """Write ``a`` as a list of ``(generator index, exponent)`` pairs."""
        raise NotImplementedError

    def element_to_json(self, a):
        return list(a)

    def element_from_json(self, obj):
        return self.validate(obj)

    def to_json(self):
        raise NotImplementedError

    @property
    def ngens(self):
        return len(self.generators())

    def is_identity(self, a):
        return a == self.identity()

    def endomorphism(self, images):
        """Endomorphism of this group fixed by generator images."""
        return Endomorphism(self, images)


@dataclass(frozen=True)
class Free(Group):
    """Free group of the given rank."""

    rank: int
    kind = "free"

    def __post_init__(self):
        if not _is_int(self.rank) or self.rank < 0:
            raise InputError(f"free rank must be a nonnegative integer, got {self.rank!r}")

    def identity(self):
        return ()

    def mul(self, a, b):
        i = 0
        n = min(len(a), len(b))
        while i < n and a[len(a) - 1 - i] == -b[i]:
            i += 1
        return a[: len(a) - i] + b[i:]

    def inv(self, a):
        return tuple(-x for x in reversed(a))

    def generators(self):
        return tuple((i,) for i in range(1, self.rank + 1))

    def validate(self, a):
        w = _int_tuple(a, "word")
        for x in w:
            if x == 0 or abs(x) > self.rank:
                raise InputError(f"letter {x} outside rank {self.rank}")
        if reduce_word(w) != w:
            raise InputError(f"word {list(w)} is not freely reduced")
        return w

    def factor(self, a):
        return [(abs(x) - 1, 1 if x > 0 else -1) for x in a]

    def element_from_json(self, obj):
        """Signed letter list, or text such as ``"xyXY"``."""
        if isinstance(obj, str):
            return self.parse(obj)
        return self.validate(obj)

    def to_json(self):
        return {"kind": self.kind, "rank": self.rank}

    def _alphabet(self):
        return "xyz" if self.rank <= 3 else "abcdefghijklmnopqrstuvw"

    def parse(self, text):
        """Parse ``"xyXY"``-style text: lowercase letters are generators, uppercase inverses.

        Generators are named ``x, y, z`` up to rank 3 and ``a, b, c, ...`` beyond.
        """
        alphabet = self._alphabet()
        letters = []
        for ch in text.replace(" ", ""):
            i = alphabet.find(ch.lower())
            if i < 0 or i >= self.rank:
                raise InputError(f"unknown letter {ch!r} for rank {self.rank}")
            letters.append(i + 1 if ch.islower() else -(i + 1))
        return reduce_word(letters)

    def format(self, a):
        alphabet = self._alphabet()
        if not a:
            return "e"
        return "".join(alphabet[abs(x) - 1] if x > 0 else alphabet[abs(x) - 1].upper() for x in a)


@dataclass(frozen=True)
class FreeAbelian(Group):
    """The lattice ``Z^rank`` under addition."""

    rank: int
    kind = "free_abelian"

    def __post_init__(self):
        if not _is_int(self.rank) or self.rank < 0:
            raise InputError(f"rank must be a nonnegative integer, got {self.rank!r}")

    def identity(self):
        return (0,) * self.rank

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def generators(self):
        return tuple(
            tuple(1 if j == i else 0 for j in range(self.rank)) for i in range(self.rank)
        )

    def validate(self, a):
        v = _int_tuple(a, "vector")
        if len(v) != self.rank:
            raise InputError(f"vector {list(v)} has length {len(v)}, expected {self.rank}")
        return v

    def factor(self, a):
        return [(i, c) for i, c in enumerate(a) if c]

    def to_json(self):
        return {"kind": self.kind, "rank": self.rank}

    def endomorphism(self, images):
        return MatrixEndomorphism.from_images(self, images)


@dataclass(frozen=True)
class ModAbelian(Group):
    """The finite group ``(Z/modulus)^rank``; elements are reduced residue vectors."""

    rank: int
    modulus: int
    kind = "mod_abelian"

    def __post_init__(self):
        if not _is_int(self.rank) or self.rank < 0:
            raise InputError(f"rank must be a nonnegative integer, got {self.rank!r}")
        if not _is_int(self.modulus) or self.modulus < 1:
            raise InputError(f"modulus must be a positive integer, got {self.modulus!r}")

    def identity(self):
        return (0,) * self.rank

    def mul(self, a, b):
        m = self.modulus
        return tuple((x + y) % m for x, y in zip(a, b))

    def inv(self, a):
        m = self.modulus
        return tuple(-x % m for x in a)

    def generators(self):
        m = self.modulus
        return tuple(
            tuple((1 if j == i else 0) % m for j in range(self.rank)) for i in range(self.rank)
        )

    def validate(self, a):
        v = _int_tuple(a, "vector")
        if len(v) != self.rank:
            raise InputError(f"vector {list(v)} has length {len(v)}, expected {self.rank}")
        if any(not 0 <= x < self.modulus for x in v):
            raise InputError(f"vector {list(v)} is not reduced modulo {self.modulus}")
        return v

    def reduce(self, v):
        return tuple(x % self.modulus for x in v)

    def factor(self, a):
        return [(i, c) for i, c in enumerate(a) if c]

    def to_json(self):
        return {"kind": self.kind, "rank": self.rank, "modulus": self.modulus}

    def order(self):
        return self.modulus**self.rank

    def perm_generators(self):
        """Regular representation of each cyclic factor, on ``rank * modulus`` points."""
        m = self.modulus
        n = self.rank * m
        gens = []
        for i in range(self.rank):
            p = list(range(n))
            for a in range(m):
                p[i * m + a] = i * m + (a + 1) % m
            gens.append(tuple(p))
        return gens

    def endomorphism(self, images):
        return MatrixEndomorphism.from_images(self, images)


@dataclass(frozen=True)
class FinitePerm(Group):
    """Finite group generated by permutations of ``{0, ..., degree-1}``."""

    degree: int
    gens: tuple
    max_elements: int = field(default=DEFAULT_MAX_ELEMENTS, compare=False, repr=False)
    _tree: dict = field(default_factory=dict, init=False, compare=False, repr=False)
    _chain: list = field(default_factory=list, init=False, compare=False, repr=False)
    kind = "finite_perm"

    def __post_init__(self):
        if not _is_int(self.degree) or self.degree < 0:
            raise InputError(f"degree must be a nonnegative integer, got {self.degree!r}")
        gens = tuple(_int_tuple(g, "permutation") for g in self.gens)
        for g in gens:
            if not is_perm(g, self.degree):
                raise InputError(f"{list(g)} is not a permutation of degree {self.degree}")
        object.__setattr__(self, "gens", gens)

    def identity(self):
        return perm_identity(self.degree)

    def mul(self, a, b):
        return perm_mul(a, b)

    def inv(self, a):
        return perm_inv(a)

    def generators(self):
        return self.gens

    def validate(self, a):
        p = _int_tuple(a, "permutation")
        if not is_perm(p, self.degree):
            raise InputError(f"{list(p)} is not a permutation of degree {self.degree}")
        return p

    def to_json(self):
        return {"kind": self.kind, "degree": self.degree, "generators": [list(g) for g in self.gens]}

    def _spanning_tree(self):
        # element -> (parent, generator index) for a breadth-first Cayley tree
        if not self._tree:
            e = self.identity()
            tree = {e: None}
            queue = deque([e])
            while queue:
                g = queue.popleft()
                for j, s in enumerate(self.gens):
                    h = perm_mul(g, s)
                    if h not in tree:
                        tree[h] = (g, j)
                        if len(tree) > self.max_elements:
                            raise LimitError("group size", len(tree), self.max_elements)
                        queue.append(h)
            self._tree.update(tree)
        return self._tree

    def elements(self):
        return list(self._spanning_tree())

    def perm_group(self):
        """Schreier-Sims chain for order and membership without enumeration."""
        if not self._chain:
            from .permgroup import PermGroup

            self._chain.append(PermGroup(self.gens, self.degree))
        return self._chain[0]

    def order_by_enumeration(self):
        return len(self._spanning_tree())

    def contains(self, a):
        return tuple(a) in self._spanning_tree()

    def factor(self, a):
        tree = self._spanning_tree()
        a = tuple(a)
        if a not in tree:
            raise InputError(f"{format_perm(a)} is not an element of the group")
        letters = []
        while tree[a] is not None:
            a, j = tree[a]
            letters.append((j, 1))
        letters.reverse()
        return letters

    def hom_table(self, target, images):
        """Tabulate the homomorphism fixed by ``images``, checking it is well defined.

        A map defined along a spanning tree of the Cayley graph is a homomorphism
        exactly when it is consistent on every remaining edge.
        """
        tree = self._spanning_tree()
        table = {self.identity(): target.identity()}
        for g in tree:  # breadth-first order: parents precede children
            tg = table[g]
            for j, s in enumerate(self.gens):
                h = perm_mul(g, s)
                th = target.mul(tg, images[j])
                known = table.get(h)
                if known is None:
                    table[h] = th
                elif known != th:
                    raise InputError("generator images do not define a homomorphism")
        return table


@dataclass(frozen=True)
class Semidirect(Group):
    """``K ⋊ Q`` with ``(k1, q1)(k2, q2) = (k1 * act(q1, k2), q1 * q2)``.

    Generators are the K generators (paired with the identity of Q) followed by
    the Q generators.
    """

    K: Group
    Q: Group
    action: "AutomorphismAction"
    kind = "semidirect"

    def __post_init__(self):
        if not isinstance(self.action, AutomorphismAction):
            raise InputError("semidirect product needs an AutomorphismAction")
        status = self.action.check(self.K, self.Q)
        object.__setattr__(self, "_status", status)

    @property
    def action_status(self):
        return self._status

    def act(self, q, k):
        """Apply the automorphism attached to ``q`` to the K-element ``k``."""
        for j, e in reversed(self.Q.factor(q)):
            k = self.action.apply(j, e, k)
        return k

    def identity(self):
        return (self.K.identity(), self.Q.identity())

    def mul(self, a, b):
        (k1, q1), (k2, q2) = a, b
        return (self.K.mul(k1, self.act(q1, k2)), self.Q.mul(q1, q2))

    def inv(self, a):
        k, q = a
        qi = self.Q.inv(q)
        return (self.act(qi, self.K.inv(k)), qi)

    def generators(self):
        ek, eq = self.K.identity(), self.Q.identity()
        return tuple((g, eq) for g in self.K.generators()) + tuple(
            (ek, h) for h in self.Q.generators()
        )

    def validate(self, a):
        try:
            k, q = a
        except (TypeError, ValueError):
            raise InputError(f"semidirect element must be a pair, got {a!r}") from None
        return (self.K.validate(k), self.Q.validate(q))

    def factor(self, a):
        k, q = a
        shift = self.K.ngens
        return list(self.K.factor(k)) + [(j + shift, e) for j, e in self.Q.factor(q)]

    def element_to_json(self, a):
        return [self.K.element_to_json(a[0]), self.Q.element_to_json(a[1])]

    def element_from_json(self, obj):
        if not isinstance(obj, (list, tuple)) or len(obj) != 2:
            raise InputError(f"semidirect element must be a pair, got {obj!r}")
        return (self.K.element_from_json(obj[0]), self.Q.element_from_json(obj[1]))

    def to_json(self):
        return {
            "kind": self.kind,
            "K": self.K.to_json(),
            "Q": self.Q.to_json(),
            "action": self.action.to_json(),
        }


# ---------------------------------------------------------------------------
# evaluation helpers


def power(desc, a, n):
    """``a**n`` by repeated squaring (negative ``n`` allowed)."""
    if n < 0:
        a, n = desc.inv(a), -n
    result = desc.identity()
    while n:
        if n & 1:
            result = desc.mul(result, a)
        n >>= 1
        if n:
            a = desc.mul(a, a)
    return result


def evaluate(target, images, factors):
    """Multiply out ``prod images[j]**e`` over a factorization."""
    result = target.identity()
    for j, e in factors:
        result = target.mul(result, power(target, images[j], e))
    return result


def word_value(desc, letters):
    """Value of a signed-index word over the generators of ``desc``."""
    gens = desc.generators()
    return evaluate(desc, gens, [(abs(x) - 1, 1 if x > 0 else -1) for x in letters])


# ---------------------------------------------------------------------------
# endomorphisms and actions


class Endomorphism:
    """Endomorphism of ``domain`` determined by the images of its generators."""

    def __init__(self, domain, images):
        self.domain = domain
        imgs = tuple(domain.validate(x) for x in images)
        if len(imgs) != domain.ngens:
            raise InputError(f"expected {domain.ngens} generator images, got {len(imgs)}")
        self.images = imgs
        self._table = None

    def __call__(self, a):
        if isinstance(self.domain, FinitePerm):
            if self._table is None:
                self._table = self.domain.hom_table(self.domain, self.images)
            return self._table[a]
        return evaluate(self.domain, self.images, self.domain.factor(a))

    def check_homomorphism(self):
        if isinstance(self.domain, FinitePerm):
            self(self.domain.identity())

    def compose(self, other):
        """``self ∘ other`` (apply ``other`` first)."""
        return self.domain.endomorphism([self(x) for x in other.images])

    def is_identity(self):
        return self.images == tuple(self.domain.generators())

    def inverse(self):
        if isinstance(self.domain, FinitePerm):
            table = self.domain.hom_table(self.domain, self.images)
            back = {v: k for k, v in table.items()}
            if len(back) != len(table):
                raise InputError("endomorphism is not injective")
            return Endomorphism(self.domain, [back[g] for g in self.domain.generators()])
        raise InputError(f"inverse automorphism must be supplied for {self.domain.kind} groups")

    def __eq__(self, other):
        return isinstance(other, Endomorphism) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"{type(self).__name__}({list(self.images)})"

    def to_json(self):
        return {"images": [self.domain.element_to_json(x) for x in self.images]}


class MatrixEndomorphism(Endomorphism):
    """Integer matrix acting on column vectors of ``Z^n`` or ``(Z/m)^n``."""

    def __init__(self, domain, matrix):
        n = domain.rank
        rows = tuple(_int_tuple(r, "matrix row") for r in matrix)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise InputError(f"matrix must be {n}x{n}")
        m = getattr(domain, "modulus", None)
        if m is not None:
            rows = tuple(tuple(x % m for x in r) for r in rows)
        self.domain = domain
        self.matrix = rows
        self.images = tuple(tuple(rows[i][j] for i in range(n)) for j in range(n))
        self._table = None

    @classmethod
    def from_images(cls, domain, images):
        imgs = [domain.validate(x) for x in images]
        if len(imgs) != domain.rank:
            raise InputError(f"expected {domain.rank} generator images, got {len(imgs)}")
        n = domain.rank
        return cls(domain, [[imgs[j][i] for j in range(n)] for i in range(n)])

    def __call__(self, v):
        out = tuple(sum(r * x for r, x in zip(row, v)) for row in self.matrix)
        m = getattr(self.domain, "modulus", None)
        return tuple(x % m for x in out) if m is not None else out

    def inverse(self):
        inv = matrix_inverse(self.matrix, getattr(self.domain, "modulus", None))
        return MatrixEndomorphism(self.domain, inv)

    def to_json(self):
        return {"matrix": [list(r) for r in self.matrix]}


class ConjugationEndomorphism(Endomorphism):
    """``n -> c^-1 n c`` on a permutation group normalized by ``c``."""

    def __init__(self, domain, conjugator):
        c = _int_tuple(conjugator, "conjugator")
        if not is_perm(c, domain.degree):
            raise InputError("conjugator is not a permutation of the right degree")
        self.domain = domain
        self.conjugator = c
        self._cinv = perm_inv(c)
        self.images = tuple(self(g) for g in domain.generators())
        self._table = None

    def __call__(self, a):
        return perm_mul(perm_mul(self._cinv, a), self.conjugator)

    def check_homomorphism(self):
        group = self.domain.perm_group()
        if not all(group.contains(x) for x in self.images):
            raise InputError("conjugator does not normalize the group")

    def inverse(self):
        return ConjugationEndomorphism(self.domain, self._cinv)

    def to_json(self):
        return {
            "conjugator": list(self.conjugator),
            "images": [list(x) for x in self.images],
        }


def matrix_inverse(rows, modulus=None):
    """Exact inverse of a square integer matrix over Z (or Z/modulus)."""
    if modulus is not None:
        return _matrix_inverse_mod(rows, modulus)
    inv = matrix_inverse_rational(rows)
    if any(x.denominator != 1 for row in inv for x in row):
        raise InputError("matrix is not invertible over the integers")
    return [[int(x) for x in row] for row in inv]


def _matrix_inverse_mod(rows, m):
    n = len(rows)
    if m == 1:
        return [[0] * n for _ in range(n)]
    det = determinant(rows)
    try:
        u = pow(det % m, -1, m)
    except ValueError:
        raise InputError(f"matrix is not invertible modulo {m}") from None
    inv_q = matrix_inverse_rational(rows)
    # adjugate = det * inverse, integral
    return [[int(x * det) * u % m for x in row] for row in inv_q]


def matrix_inverse_rational(rows):
    n = len(rows)
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise InputError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def determinant(rows):
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = [list(r) for r in rows]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


@dataclass(frozen=True)
class AutomorphismAction:
    """Action of Q on K: one ``(forward, inverse)`` automorphism pair per Q generator.

    ``relators`` are optional signed-index words in Q's generators; each must act
    trivially on K.
    """

    pairs: tuple
    relators: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((f, b) for f, b in self.pairs))
        object.__setattr__(self, "relators", tuple(tuple(r) for r in self.relators))

    @classmethod
    def trivial(cls, K, Q):
        ident = K.endomorphism(K.generators())
        return cls(tuple((ident, ident) for _ in range(Q.ngens)))

    def apply(self, j, e, k):
        fwd, back = self.pairs[j]
        f = fwd if e > 0 else back
        for _ in range(abs(e)):
            k = f(k)
        return k

    def check(self, K, Q):
        """Validate against ``K`` and ``Q``; return the action status string."""
        if len(self.pairs) != Q.ngens:
            raise InputError(f"action lists {len(self.pairs)} automorphisms, Q has {Q.ngens} generators")
        gens = K.generators()
        for j, (fwd, back) in enumerate(self.pairs):
            if fwd.domain != K or back.domain != K:
                raise InputError(f"automorphism {j} is not defined on K")
            fwd.check_homomorphism()
            back.check_homomorphism()
            for x in gens:
                if fwd(back(x)) != x or back(fwd(x)) != x:
                    raise InputError(f"automorphism pair {j} does not compose to the identity")
        for r in self.relators:
            for x in gens:
                y = x
                for letter in reversed(r):
                    if letter == 0 or abs(letter) > len(self.pairs):
                        raise InputError(f"relator letter {letter} out of range")
                    y = self.apply(abs(letter) - 1, 1 if letter > 0 else -1, y)
                if y != x:
                    raise InputError(f"relator {list(r)} does not act trivially on K")
        if isinstance(Q, Free):
            return ACTION_VERIFIED
        if isinstance(Q, (FreeAbelian, ModAbelian)):
            for a in range(len(self.pairs)):
                for b in range(a + 1, len(self.pairs)):
                    fa, fb = self.pairs[a][0], self.pairs[b][0]
                    if any(fa(fb(x)) != fb(fa(x)) for x in gens):
                        raise InputError(f"automorphisms {a} and {b} do not commute")
            if isinstance(Q, ModAbelian):
                for j in range(len(self.pairs)):
                    if any(self.apply(j, Q.modulus, x) != x for x in gens):
                        raise InputError(f"automorphism {j} does not have order dividing {Q.modulus}")
            return ACTION_VERIFIED
        if isinstance(Q, FinitePerm):
            self._check_finite_quotient(K, Q)
            return ACTION_VERIFIED
        return ACTION_RELATORS if self.relators else ACTION_UNVERIFIED

    def _check_finite_quotient(self, K, Q):
        # walk Q's Cayley graph carrying alpha(q) as generator images of K
        gens = K.generators()
        start = tuple(gens)
        seen = {Q.identity(): start}
        queue = deque([Q.identity()])
        while queue:
            q = queue.popleft()
            current = K.endomorphism(seen[q])
            for j, s in enumerate(Q.generators()):
                images = tuple(current(self.pairs[j][0](x)) for x in gens)
                qs = Q.mul(q, s)
                known = seen.get(qs)
                if known is None:
                    seen[qs] = images
                    queue.append(qs)
                elif known != images:
                    raise InputError("action is not a homomorphism from Q")

    def to_json(self):
        out = {"automorphisms": [{"forward": f.to_json(), "inverse": b.to_json()} for f, b in self.pairs]}
        if self.relators:
            out["relators"] = [list(r) for r in self.relators]
        return out


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True, eq=False)
class Homomorphism:
    """Homomorphism given by one target element per source generator.

    Well-definedness is checked for free abelian and finite permutation
    sources; ``trusted=True`` skips the check for maps produced by
    constructions that guarantee it.
    """

    source: Group
    target: Group
    images: tuple
    trusted: bool = False

    def __post_init__(self):
        imgs = tuple(self.target.validate(x) for x in self.images)
        if len(imgs) != self.source.ngens:
            raise InputError(f"expected {self.source.ngens} images, got {len(imgs)}")
        object.__setattr__(self, "images", imgs)
        object.__setattr__(self, "_table", None)
        if self.trusted:
            return
        if isinstance(self.source, (FreeAbelian, ModAbelian)):
            t = self.target
            for a in range(len(imgs)):
                for b in range(a + 1, len(imgs)):
                    if t.mul(imgs[a], imgs[b]) != t.mul(imgs[b], imgs[a]):
                        raise InputError("images of an abelian group must commute")
            if isinstance(self.source, ModAbelian):
                m = self.source.modulus
                if any(power(t, x, m) != t.identity() for x in imgs):
                    raise InputError(f"images must have order dividing {m}")
        elif isinstance(self.source, FinitePerm):
            object.__setattr__(self, "_table", self.source.hom_table(self.target, imgs))

    def __call__(self, a):
        if self._table is not None:
            return self._table[a]
        return evaluate(self.target, self.images, self.source.factor(a))

    def to_json(self):
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "images": [self.target.element_to_json(x) for x in self.images],
        }


# ---------------------------------------------------------------------------
# module-level operations


def mul(desc, a, b):
    return desc.mul(desc.validate(a), desc.validate(b))


def inv(desc, a):
    return desc.inv(desc.validate(a))


def apply_hom(h, a):
    return h(h.source.validate(a))


def ball(desc, radius, max_size=DEFAULT_MAX_BALL):
    """All products of at most ``radius`` generators and their inverses."""
    if radius < 0:
        raise InputError("radius must be nonnegative")
    steps = []
    for g in desc.generators():
        steps.append(g)
        steps.append(desc.inv(g))
    seen = {desc.identity()}
    order = [desc.identity()]
    frontier = [desc.identity()]
    for _ in range(radius):
        nxt = []
        for a in frontier:
            for s in steps:
                b = desc.mul(a, s)
                if b not in seen:
                    seen.add(b)
                    order.append(b)
                    nxt.append(b)
                    if len(seen) > max_size:
                        raise LimitError("ball size", len(seen), max_size)
        frontier = nxt
    return order


def random_element(desc, rng, max_length=6):
    """Product of a random word of length at most ``max_length``."""
    gens = desc.generators()
    a = desc.identity()
    if not gens:
        return a
    for _ in range(rng.randint(0, max_length)):
        g = gens[rng.randrange(len(gens))]
        a = desc.mul(a, g if rng.random() < 0.5 else desc.inv(g))
    return a


# ---------------------------------------------------------------------------
# JSON


def _require(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise InputError(f"{where}: missing field {key!r}")
    return obj[key]


def descriptor_from_json(obj: Any) -> Group:
    kind = _require(obj, "kind", "descriptor")
    if kind == "free":
        return Free(_require(obj, "rank", "free"))
    if kind == "free_abelian":
        return FreeAbelian(_require(obj, "rank", "free_abelian"))
    if kind == "mod_abelian":
        return ModAbelian(_require(obj, "rank", "mod_abelian"), _require(obj, "modulus", "mod_abelian"))
    if kind == "finite_perm":
        gens = _require(obj, "generators", "finite_perm")
        if not isinstance(gens, list):
            raise InputError("finite_perm: generators must be a list")
        return FinitePerm(_require(obj, "degree", "finite_perm"), tuple(gens))
    if kind == "semidirect":
        K = descriptor_from_json(_require(obj, "K", "semidirect"))
        Q = descriptor_from_json(_require(obj, "Q", "semidirect"))
        action = action_from_json(obj.get("action", "trivial"), K, Q)
        return Semidirect(K, Q, action)
    raise InputError(f"unknown group kind {kind!r}")


def endomorphism_from_json(obj, K):
    if not isinstance(obj, dict):
        raise InputError(f"endomorphism must be an object, got {obj!r}")
    if "conjugator" in obj:
        if not isinstance(K, FinitePerm):
            raise InputError("conjugator form needs a permutation group")
        endo = ConjugationEndomorphism(K, obj["conjugator"])
        if "images" in obj and [K.validate(x) for x in obj["images"]] != list(endo.images):
            raise InputError("conjugator disagrees with listed images")
        return endo
    if "matrix" in obj:
        if not isinstance(K, (FreeAbelian, ModAbelian)):
            raise InputError("matrix form needs an abelian group")
        return MatrixEndomorphism(K, obj["matrix"])
    images = _require(obj, "images", "endomorphism")
    return K.endomorphism([K.element_from_json(x) for x in images])


def action_from_json(obj, K, Q):
    if obj == "trivial":
        return AutomorphismAction.trivial(K, Q)
    autos = _require(obj, "automorphisms", "action")
    if not isinstance(autos, list):
        raise InputError("action: automorphisms must be a list")
    pairs = []
    for a in autos:
        fwd = endomorphism_from_json(_require(a, "forward", "automorphism"), K)
        back = a.get("inverse")
        back = fwd.inverse() if back is None else endomorphism_from_json(back, K)
        pairs.append((fwd, back))
    relators = obj.get("relators", [])
    return AutomorphismAction(tuple(pairs), tuple(tuple(r) for r in relators))


def homomorphism_from_json(obj):
    src = descriptor_from_json(_require(obj, "source", "homomorphism"))
    tgt = descriptor_from_json(_require(obj, "target", "homomorphism"))
    images = [tgt.element_from_json(x) for x in _require(obj, "images", "homomorphism")]
    return Homomorphism(src, tgt, tuple(images))


def elements_from_json(desc, items: Sequence) -> list:
    if not isinstance(items, list):
        raise InputError("element list must be a JSON array")
    return [desc.element_from_json(x) for x in items]
