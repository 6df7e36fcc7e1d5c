"""Bernoulli shifts over finite groups, exhaustively.

Conventions: ``G`` acts on configurations by ``(g.x)(h) = x(g^-1 h)`` and a
cellular automaton with memory ``M`` reads ``x(g m)`` for ``m`` in ``M``,
which makes every cellular automaton commute with the shift.

Configurations over ``n`` cells and ``sigma`` letters are coded as integers,
big-endian base ``sigma`` (cell 0 is the most significant digit), so codes
enumerate in the same order as ``itertools.product``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .errors import InputError, LimitError, VerificationError
from .groups import perm_mul

DEFAULT_MAX_CONFIGS = 2**20


# ---------------------------------------------------------------------------
# groups as multiplication tables


@dataclass(frozen=True)
class FiniteGroupTable:
    """Group law on ``{0, ..., n-1}`` given by its full multiplication table."""

    table: tuple
    labels: tuple = field(default=(), compare=False)

    def __post_init__(self):
        t = tuple(tuple(row) for row in self.table)
        n = len(t)
        if n == 0 or any(len(row) != n for row in t):
            raise InputError("multiplication table must be a nonempty square")
        if any(not isinstance(x, int) or not 0 <= x < n for row in t for x in row):
            raise InputError("table entries must be element indices")
        ident = next((e for e in range(n) if all(t[e][a] == a and t[a][e] == a for a in range(n))), None)
        if ident is None:
            raise InputError("table has no identity element")
        inverse = []
        for a in range(n):
            b = next((b for b in range(n) if t[a][b] == ident), None)
            if b is None or t[b][a] != ident:
                raise InputError(f"element {a} has no two-sided inverse")
            inverse.append(b)
        for a in range(n):
            ta = t[a]
            for b in range(n):
                ab = ta[b]
                tab, tb = t[ab], t[b]
                for c in range(n):
                    if tab[c] != ta[tb[c]]:
                        raise InputError(f"table is not associative at ({a}, {b}, {c})")
        object.__setattr__(self, "table", t)
        object.__setattr__(self, "identity", ident)
        object.__setattr__(self, "inverse", tuple(inverse))

    @property
    def order(self):
        return len(self.table)

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self.inverse[a]

    def is_subgroup(self, H):
        H = set(H)
        return (
            bool(H)
            and all(0 <= h < self.order for h in H)
            and all(self.table[a][self.inverse[b]] in H for a in H for b in H)
        )

    def to_json(self):
        return {"table": [list(r) for r in self.table]}

    # -- constructors ---------------------------------------------------------

    @classmethod
    def cyclic(cls, n):
        return cls(tuple(tuple((a + b) % n for b in range(n)) for a in range(n)))

    @classmethod
    def from_permutations(cls, gens):
        """Closure of permutation generators; elements sorted lexicographically.

        The product follows the package convention (left factor applied first).
        """
        gens = [tuple(g) for g in gens]
        degree = len(gens[0]) if gens else 1
        e = tuple(range(degree))
        seen = {e}
        frontier = [e]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = perm_mul(a, g)
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
            frontier = nxt
        elems = sorted(seen)
        index = {p: i for i, p in enumerate(elems)}
        table = tuple(tuple(index[perm_mul(a, b)] for b in elems) for a in elems)
        return cls(table, labels=tuple(elems))

    @classmethod
    def direct_product(cls, A, B):
        """Element ``(a, b)`` has index ``a * |B| + b``."""
        nb = B.order
        pairs = [(a, b) for a in range(A.order) for b in range(nb)]
        table = tuple(
            tuple(A.mul(a1, a2) * nb + B.mul(b1, b2) for a2, b2 in pairs) for a1, b1 in pairs
        )
        return cls(table, labels=tuple(pairs))

    @classmethod
    def semidirect_cyclic(cls, n, m, r):
        """``Z/n ⋊ Z/m`` where the generator of ``Z/m`` multiplies by ``r``.

        Element ``(a, b)`` has index ``b * n + a``; ``(a1,b1)(a2,b2) = (a1 + r^b1 a2, b1 + b2)``.
        """
        if pow(r, m, n) != 1 % n:
            raise InputError(f"{r}^{m} is not 1 modulo {n}")
        pairs = [(a, b) for b in range(m) for a in range(n)]

        def idx(a, b):
            return (b % m) * n + a % n

        table = tuple(
            tuple(idx(a1 + pow(r, b1, n) * a2, b1 + b2) for a2, b2 in pairs) for a1, b1 in pairs
        )
        return cls(table, labels=tuple(pairs))


def group_from_json(obj):
    """Accepts ``{"table": ...}``, ``{"cyclic": n}``, ``{"permutations": [...]}``,
    ``{"product": [A, B]}`` or ``{"semidirect_cyclic": {"n", "m", "r"}}``."""
    if not isinstance(obj, dict):
        raise InputError(f"group spec must be an object, got {obj!r}")
    if "table" in obj:
        return FiniteGroupTable(obj["table"])
    if "cyclic" in obj:
        return FiniteGroupTable.cyclic(int(obj["cyclic"]))
    if "permutations" in obj:
        return FiniteGroupTable.from_permutations(obj["permutations"])
    if "product" in obj:
        A, B = obj["product"]
        return FiniteGroupTable.direct_product(group_from_json(A), group_from_json(B))
    if "semidirect_cyclic" in obj:
        p = obj["semidirect_cyclic"]
        return FiniteGroupTable.semidirect_cyclic(p["n"], p["m"], p["r"])
    raise InputError(f"unrecognized group spec {obj!r}")


# ---------------------------------------------------------------------------
# configurations


def encode(x, sigma):
    c = 0
    for v in x:
        c = c * sigma + v
    return c


def decode(code, n, sigma):
    out = [0] * n
    for i in range(n - 1, -1, -1):
        code, out[i] = divmod(code, sigma)
    return tuple(out)


def configurations(n, sigma):
    return itertools.product(range(sigma), repeat=n)


def _check_space(n, sigma, max_configs):
    total = sigma**n
    if total > max_configs:
        raise LimitError(f"configuration count {sigma}^{n}", total, max_configs)
    return total


def validate_configuration(Gt, sigma, x):
    x = tuple(x)
    if len(x) != Gt.order or any(not 0 <= v < sigma for v in x):
        raise InputError(f"configuration must have {Gt.order} entries below {sigma}")
    return x


def shift_act(Gt, g, x):
    """``(g.x)(h) = x(g^-1 h)``."""
    if not 0 <= g < Gt.order:
        raise InputError(f"group index {g} out of range")
    gi = Gt.inverse[g]
    row = Gt.table[gi]
    return tuple(x[row[h]] for h in range(Gt.order))


@dataclass(frozen=True)
class CellularAutomaton:
    """Memory set (group indices) and a local rule indexed by the coded pattern."""

    memory: tuple
    rule: tuple
    sigma: int

    def __post_init__(self):
        object.__setattr__(self, "memory", tuple(self.memory))
        object.__setattr__(self, "rule", tuple(self.rule))
        if len(self.rule) != self.sigma ** len(self.memory):
            raise InputError(f"rule needs {self.sigma ** len(self.memory)} entries, got {len(self.rule)}")
        if any(not 0 <= v < self.sigma for v in self.rule):
            raise InputError("rule values must lie in the alphabet")

    def check_group(self, Gt):
        if any(not 0 <= m < Gt.order for m in self.memory):
            raise InputError("memory index out of range")

    def to_json(self):
        return {"memory": list(self.memory), "rule": list(self.rule), "alphabet": self.sigma}


def ca_apply(Gt, A, x):
    """``y(g) = rule(x(g m) for m in M)``."""
    A.check_group(Gt)
    table, sigma = Gt.table, A.sigma
    out = []
    for g in range(Gt.order):
        row = table[g]
        c = 0
        for m in A.memory:
            c = c * sigma + x[row[m]]
        out.append(A.rule[c])
    return tuple(out)


def all_rules(Gt, sigma, max_memory):
    """Every cellular automaton whose memory is a subset of size at most ``max_memory``."""
    for size in range(max_memory + 1):
        for memory in itertools.combinations(range(Gt.order), size):
            for rule in itertools.product(range(sigma), repeat=sigma**size):
                yield CellularAutomaton(memory, rule, sigma)


def map_table(Gt, sigma, f, max_configs=DEFAULT_MAX_CONFIGS):
    """Codes of ``f(x)`` for every configuration ``x`` in code order."""
    _check_space(Gt.order, sigma, max_configs)
    return [encode(f(x), sigma) for x in configurations(Gt.order, sigma)]


def ca_table(Gt, A, max_configs=DEFAULT_MAX_CONFIGS):
    return map_table(Gt, A.sigma, lambda x: ca_apply(Gt, A, x), max_configs)


@dataclass(frozen=True)
class SweepRecord:
    injective: bool
    surjective: bool

    def to_json(self):
        return {"injective": self.injective, "surjective": self.surjective}


def table_properties(table, size):
    images = set(table)
    return SweepRecord(len(images) == len(table), len(images) == size)


def surjunctivity_check(Gt, sigma, A, max_configs=DEFAULT_MAX_CONFIGS):
    """Exhaustive injectivity and surjectivity of a cellular automaton."""
    table = ca_table(Gt, A, max_configs)
    rec = table_properties(table, sigma**Gt.order)
    if rec.injective and not rec.surjective:
        raise VerificationError("injective but not surjective map on a finite set")
    return rec


def is_equivariant(Gt, sigma, table, max_configs=DEFAULT_MAX_CONFIGS):
    """First ``(g, x_code)`` where ``F(g.x) != g.F(x)``, or ``None``."""
    n = Gt.order
    _check_space(n, sigma, max_configs)
    for code, x in enumerate(configurations(n, sigma)):
        fx = decode(table[code], n, sigma)
        for g in range(n):
            if table[encode(shift_act(Gt, g, x), sigma)] != encode(shift_act(Gt, g, fx), sigma):
                return (g, code)
    return None


# ---------------------------------------------------------------------------
# recoding along a subgroup


@dataclass(frozen=True)
class RecodingData:
    """Subgroup ``H`` with right transversal ``T``: each ``g`` is uniquely ``h t``."""

    group: FiniteGroupTable
    H: tuple
    T: tuple

    def __post_init__(self):
        Gt = self.group
        H, T = tuple(self.H), tuple(self.T)
        if not Gt.is_subgroup(H):
            raise InputError("H is not a subgroup")
        if len(H) * len(T) != Gt.order:
            raise InputError("|H| * |T| must equal |G|")
        factor = {}
        for hi, h in enumerate(H):
            for ti, t in enumerate(T):
                g = Gt.mul(h, t)
                if g in factor:
                    raise InputError("T is not a right transversal of H")
                factor[g] = (hi, ti)
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "factorization", factor)
        object.__setattr__(self, "h_position", {h: i for i, h in enumerate(H)})

    @classmethod
    def right_transversal(cls, Gt, H):
        """``T`` = the smallest element of each right coset ``H g``."""
        H = tuple(sorted(set(H)))
        covered, T = set(), []
        for g in range(Gt.order):
            if g not in covered:
                T.append(g)
                covered.update(Gt.mul(h, g) for h in H)
        return cls(Gt, H, tuple(T))

    def to_json(self):
        return {"group": self.group.to_json(), "H": list(self.H), "T": list(self.T)}


def recode(rd, sigma, x):
    """``y(h) = code of (x(h t) for t in T)`` over the alphabet of size ``sigma^|T|``."""
    Gt = rd.group
    return tuple(encode([x[Gt.mul(h, t)] for t in rd.T], sigma) for h in rd.H)


def recode_inverse(rd, sigma, y):
    Gt = rd.group
    x = [0] * Gt.order
    for hi, h in enumerate(rd.H):
        letters = decode(y[hi], len(rd.T), sigma)
        for ti, t in enumerate(rd.T):
            x[Gt.mul(h, t)] = letters[ti]
    return tuple(x)


def h_shift(rd, hp, y):
    """``H`` acting on ``H``-configurations: ``(h'.y)(h) = y(h'^-1 h)``."""
    Gt = rd.group
    hi = Gt.inv(hp)
    pos = rd.h_position
    return tuple(y[pos[Gt.mul(hi, h)]] for h in rd.H)


def conjugate_map(rd, sigma, table):
    """``recode ∘ F ∘ recode^-1`` as a table over coded ``H``-configurations."""
    n = rd.group.order
    big = sigma ** len(rd.T)
    out = [None] * len(table)
    for code, x in enumerate(configurations(n, sigma)):
        fx = decode(table[code], n, sigma)
        out[encode(recode(rd, sigma, x), big)] = encode(recode(rd, sigma, fx), big)
    return out


def is_h_equivariant(rd, sigma, table):
    """First ``(h, y_code)`` breaking ``F'(h.y) = h.F'(y)``, or ``None``."""
    big = sigma ** len(rd.T)
    k = len(rd.H)
    for code in range(len(table)):
        y = decode(code, k, big)
        fy = decode(table[code], k, big)
        for h in rd.H:
            if table[encode(h_shift(rd, h, y), big)] != encode(h_shift(rd, h, fy), big):
                return (h, code)
    return None


def recode_sweep(rd, sigma, max_configs=DEFAULT_MAX_CONFIGS):
    """Exhaustive bijectivity and ``H``-equivariance of :func:`recode`."""
    Gt = rd.group
    n = Gt.order
    total = _check_space(n, sigma, max_configs)
    big = sigma ** len(rd.T)
    images = set()
    round_trip = True
    counterexamples = []
    for x in configurations(n, sigma):
        y = recode(rd, sigma, x)
        images.add(encode(y, big))
        round_trip = round_trip and recode_inverse(rd, sigma, y) == x
        for h in rd.H:
            if recode(rd, sigma, shift_act(Gt, h, x)) != h_shift(rd, h, y):
                counterexamples.append([h, encode(x, sigma)])
    return {
        "configurations": total,
        "bijective": len(images) == total == big ** len(rd.H) and round_trip,
        "equivariant": not counterexamples,
        "pairs_checked": total * len(rd.H),
        "counterexamples": sorted(counterexamples),
    }


# ---------------------------------------------------------------------------
# embedding into Sym(cosets) x H


def finext_embed(Gt, H, r):
    """Embed ``G`` into ``Sym(H\\G) × H`` using a retraction ``r: G -> H``.

    ``g`` maps to (right translation by ``g`` on the right cosets ``H x``,
    ``r(g)``).  Raises :class:`InputError` unless ``r`` is a homomorphism onto
    ``H`` that fixes ``H`` pointwise.
    """
    H = tuple(sorted(set(H)))
    r = tuple(r)
    n = Gt.order
    if not Gt.is_subgroup(H):
        raise InputError("H is not a subgroup")
    if len(r) != n or any(v not in H for v in r):
        raise InputError("retraction must map every element into H")
    if any(r[h] != h for h in H):
        raise InputError("retraction must fix H pointwise")
    for a in range(n):
        for b in range(n):
            if r[Gt.mul(a, b)] != Gt.mul(r[a], r[b]):
                raise InputError(f"retraction is not a homomorphism at ({a}, {b})")
    coset_of = {}
    cosets = []
    for g in range(n):
        if g not in coset_of:
            idx = len(cosets)
            members = sorted(Gt.mul(h, g) for h in H)
            cosets.append(members[0])
            for x in members:
                coset_of[x] = idx
    images = []
    for g in range(n):
        perm = tuple(coset_of[Gt.mul(rep, g)] for rep in cosets)
        images.append((perm, r[g]))
    injective = len(set(images)) == n
    hom = all(
        images[Gt.mul(a, b)] == (perm_mul(images[a][0], images[b][0]), Gt.mul(images[a][1], images[b][1]))
        for a in range(n)
        for b in range(n)
    )
    ncosets = len(cosets)
    target_order = math.factorial(ncosets) * len(H)
    return {
        "cosets": ncosets,
        "images": [[list(p), h] for p, h in images],
        "injective": injective,
        "homomorphism": hom,
        "pairs_checked": n * n,
        "target_order": target_order,
        "index": target_order // n if target_order % n == 0 else None,
    }
