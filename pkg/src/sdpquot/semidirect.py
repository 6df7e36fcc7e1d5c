"""From ``G = K ⋊ Q`` and a finite ``S ⊆ G`` to a finite-kernel quotient ``G1 = N ⋊ Q``.

The construction:

1. ``F = S^-1 S`` and ``F_K`` its nontrivial members lying in K;
2. a finite quotient of K nontrivial on ``F_K`` (the witness, kernel ``K0``);
3. a characteristic ``K1 <= K0`` and ``N = K / K1`` with projection ``rho``;
4. the action of Q pushed down to N, giving ``G1 = N ⋊ Q`` and
   ``pi(k, q) = (rho(k), q)``.

The resulting :class:`Certificate` carries everything needed to re-check that
``pi`` is a homomorphism onto ``G1``, that it is injective on ``S`` and that
Q has index ``|N|`` in ``G1``; :func:`verify_certificate` does so from the
serialized document alone.
"""
from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field

from . import __version__
from .charcore import (
    ABELIAN,
    DEFAULT_MAX_HOMS,
    FINITE,
    FREE,
    CharacteristicQuotient,
    char_core_abelian,
    char_core_finite,
    char_core_free,
    free_containment,
    hom_index,
    pad,
    block_projection,
    induced_automorphism,
)
from .errors import FormatError, InputError, LimitError, SdpError
from .groups import (
    AutomorphismAction,
    FinitePerm,
    Free,
    FreeAbelian,
    Homomorphism,
    ModAbelian,
    Semidirect,
    action_from_json,
    descriptor_from_json,
    random_element,
)
from .permgroup import DEFAULT_MAX_DEGREE, PermGroup
from .separation import PER_WORD, FiniteIndexWitness, disjoint_union, separate

FORMAT_VERSION = 1
DEFAULT_SAMPLE_SIZE = 200
SAMPLE_WORD_LENGTH = 6


def semidirect_mul(G: Semidirect, a, b):
    return G.mul(G.validate(a), G.validate(b))


def semidirect_inv(G: Semidirect, a):
    return G.inv(G.validate(a))


def _dedupe(items):
    seen, out = set(), []
    for a in items:
        if a not in seen:
            seen.add(a)
            out.append(a)
    return out


@dataclass
class SeedSet:
    S: list
    F: list
    F_K: list


def seed_set(G: Semidirect, S, include_identity=True) -> SeedSet:
    """Deduplicated ``S``, ``F = S^-1 S`` and ``F_K = (F ∩ K) \\ {e}``.

    With ``include_identity`` the identity is put in front of ``S`` first, so the
    quotient is also injective on ``S ∪ {e}`` (no element of ``S`` dies).
    """
    S = [G.validate(a) for a in S]
    if include_identity:
        S = [G.identity()] + S
    S = _dedupe(S)
    F = _dedupe(G.mul(G.inv(a), b) for a in S for b in S)
    eq, ek = G.Q.identity(), G.K.identity()
    F_K = [k for k, q in F if q == eq and k != ek]
    return SeedSet(S, F, F_K)


def sample_pairs(G, seed, size):
    rng = random.Random(seed)
    return [
        (random_element(G, rng, SAMPLE_WORD_LENGTH), random_element(G, rng, SAMPLE_WORD_LENGTH))
        for _ in range(size)
    ]


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def document_digest(doc):
    body = {k: v for k, v in doc.items() if k != "digest"}
    return hashlib.sha256(canonical_json(body).encode()).hexdigest()


@dataclass(eq=False)
class Certificate:
    """Result of one run of :func:`theorem1_pipeline`.

    The live objects are kept for programmatic use; :meth:`to_json` gives the
    self-contained document that :func:`verify_certificate` checks.
    """

    G: Semidirect
    seeds: SeedSet
    witness: FiniteIndexWitness
    quotient: CharacteristicQuotient
    G1: Semidirect
    parameters: dict
    claims: dict
    order: int | None = None
    pi_S: list = field(default_factory=list)
    pi_generators: list = field(default_factory=list)

    def pi(self, g):
        k, q = g
        return (self.quotient.rho(k), q)

    @property
    def index(self):
        return self.order

    @property
    def passed(self):
        return all(v is not False for v in self.claims.values())

    def to_json(self):
        G, G1 = self.G, self.G1
        doc = {
            "format": FORMAT_VERSION,
            "tool": {"name": "sdpquot", "version": __version__},
            "parameters": dict(self.parameters),
            "group": G.to_json(),
            "action_status": G.action_status,
            "S": [G.element_to_json(a) for a in self.seeds.S],
            "F_K": [G.K.element_to_json(k) for k in self.seeds.F_K],
            "witness": self.witness.to_json(),
            "quotient": self.quotient.to_json(),
            "induced_action": G1.action.to_json()["automorphisms"],
            "pi": {
                "S": [G1.element_to_json(x) for x in self.pi_S],
                "generators": [G1.element_to_json(x) for x in self.pi_generators],
            },
            "order": self.order,
            "index": self.order,
            "claims": dict(self.claims),
        }
        doc["digest"] = document_digest(doc)
        return doc

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, indent=1) + "\n"


def _check_pi(G, G1, pi, pairs):
    for g, h in pairs:
        if pi(G.mul(g, h)) != G1.mul(pi(g), pi(h)):
            return False
    return True


def theorem1_pipeline(
    G: Semidirect,
    S,
    compute_order=False,
    max_homs=DEFAULT_MAX_HOMS,
    max_degree=DEFAULT_MAX_DEGREE,
    seed=0,
    sample_size=DEFAULT_SAMPLE_SIZE,
    separation=PER_WORD,
    include_identity=True,
) -> Certificate:
    """Build ``G1 = N ⋊ Q`` and ``pi: G -> G1`` injective on ``S``.

    Parameters
    ----------
    G : Semidirect
        K must be free, free abelian or a finite permutation group.
    S : iterable of G-elements
        Duplicates and the identity are allowed.
    compute_order : bool
        Also compute ``|N|`` (the index of Q in ``G1``) by Schreier-Sims.
    separation : {"per-word", "joint"}
        Free K only: one folded block per word (small degrees) or one folded
        prefix tree for the whole set.
    include_identity : bool
        Separate ``S ∪ {e}`` rather than ``S``.
    """
    if not isinstance(G, Semidirect):
        raise InputError("the pipeline needs a semidirect product descriptor")
    K, Q = G.K, G.Q
    if not isinstance(K, (Free, FreeAbelian, FinitePerm)):
        raise InputError(f"K of kind {K.kind!r} is not supported (free, free_abelian, finite_perm)")
    params = {
        "compute_order": bool(compute_order),
        "max_homs": max_homs,
        "max_degree": max_degree,
        "seed": seed,
        "sample_size": sample_size,
        "separation": separation,
        "include_identity": bool(include_identity),
    }
    seeds = seed_set(G, S, include_identity)
    witness = separate(K, seeds.F_K, strategy=separation)

    if isinstance(K, Free):
        d = max([1] + witness.block_degrees)
        cq = char_core_free(K.rank, d, max_homs=max_homs)
        cq.evidence = free_containment(cq, witness)
    elif isinstance(K, FreeAbelian):
        m0 = witness.modulus
        cq = char_core_abelian(K.rank, [[m0 * int(i == j) for j in range(K.rank)] for i in range(K.rank)])
        m = cq.parameter
        for rec, x in zip(cq.evidence, K.generators()):
            rec["in_kernel"] = witness.phi(tuple(m * c for c in x)) == witness.phi.target.identity()
    else:
        cq = char_core_finite(K)

    pairs = [induced_automorphism(cq, fwd, back) for fwd, back in G.action.pairs]
    G1 = Semidirect(cq.N, Q, AutomorphismAction(tuple(pairs)))

    def pi(g):
        return (cq.rho(g[0]), g[1])

    gens = list(G.generators())
    pool = seeds.S + gens
    test_pairs = [(a, b) for a in pool for b in pool] + sample_pairs(G, seed, sample_size)
    pi_gens = [pi(g) for g in gens]
    quotient_ok = (
        _check_pi(G, G1, pi, test_pairs)
        and pi_gens == list(G1.generators())
        and pi(G.identity()) == G1.identity()
    )
    pi_S = [pi(s) for s in seeds.S]
    eN = cq.N.identity()
    injective = (
        witness.is_sound()
        and all(cq.rho(w) != eN for w in seeds.F_K)
        and len(set(pi_S)) == len(pi_S)
        and all(rec["holds"] and rec.get("in_kernel", True) for rec in cq.evidence)
    )
    order = cq.order(max_degree=max_degree) if compute_order else None
    claims = {
        "quotient": quotient_ok,
        "injective_on_S": injective,
        "finite_index": (order is not None and order >= 1) if compute_order else None,
    }
    return Certificate(G, seeds, witness, cq, G1, params, claims, order, pi_S, pi_gens)


# ---------------------------------------------------------------------------
# verification


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)  # (name, passed, detail)

    def add(self, name, passed, detail=""):
        self.checks.append((name, bool(passed), detail))

    def get(self, name):
        for n, ok, _ in self.checks:
            if n == name:
                return ok
        return None

    @property
    def passed(self):
        return all(ok for _, ok, _ in self.checks)

    @property
    def failed(self):
        return [n for n, ok, _ in self.checks if not ok]

    def claims(self):
        def all_of(*names):
            vals = [self.get(n) for n in names]
            return all(v is not False for v in vals) and any(v is not None for v in vals)

        return {
            "(1) G1 is a quotient of G": all_of("induced_action", "multiplicativity"),
            "(2) S injects into G1": all_of("seeds", "witness_soundness", "containment", "injectivity"),
            "(3) Q has finite index in G1": self.get("order") if self.get("order") is not None else None,
        }

    def to_json(self):
        return {
            "passed": self.passed,
            "checks": [{"name": n, "passed": ok, "detail": d} for n, ok, d in self.checks],
            "claims": self.claims(),
        }

    def summary(self):
        lines = []
        for n, ok, d in self.checks:
            lines.append(f"  [{'PASS' if ok else 'FAIL'}] {n}" + (f": {d}" if d else ""))
        for claim, ok in self.claims().items():
            status = "not computed" if ok is None else ("verified" if ok else "FAILED")
            lines.append(f"  claim {claim}: {status}")
        lines.append("overall: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


_TOP_LEVEL = {
    "format": int,
    "parameters": dict,
    "group": dict,
    "S": list,
    "F_K": list,
    "witness": dict,
    "quotient": dict,
    "induced_action": list,
    "pi": dict,
    "claims": dict,
    "digest": str,
}


def _check_structure(doc):
    if not isinstance(doc, dict):
        raise FormatError("certificate must be a JSON object")
    if "format" not in doc:
        raise FormatError("certificate has no format version")
    if doc["format"] != FORMAT_VERSION:
        raise FormatError(f"unsupported certificate format {doc['format']!r} (expected {FORMAT_VERSION})")
    for key, typ in _TOP_LEVEL.items():
        if key not in doc:
            raise FormatError(f"certificate is missing {key!r}")
        if not isinstance(doc[key], typ):
            raise FormatError(f"certificate field {key!r} has the wrong type")


class _Loaded:
    """Certificate data rebuilt into group objects."""

    def __init__(self, doc):
        self.G = descriptor_from_json(doc["group"])
        if not isinstance(self.G, Semidirect):
            raise InputError("group is not a semidirect product")
        G, K = self.G, self.G.K
        self.S = [G.element_from_json(x) for x in doc["S"]]
        self.F_K = [K.element_from_json(x) for x in doc["F_K"]]
        self.witness = FiniteIndexWitness.from_json(doc["witness"], K)
        q = doc["quotient"]
        self.kind = q["kind"]
        self.parameter = q["parameter"]
        self.N = descriptor_from_json(q["N"])
        self.rho_images = tuple(self.N.element_from_json(x) for x in q["rho"])
        self.rho = Homomorphism(K, self.N, self.rho_images, trusted=True)
        self.evidence = q["evidence"]
        self.action = action_from_json({"automorphisms": doc["induced_action"]}, self.N, G.Q)
        self.params = doc["parameters"]


def verify_certificate(doc) -> VerificationReport:
    """Re-check a certificate document using only its own contents."""
    if isinstance(doc, Certificate):
        doc = doc.to_json()
    _check_structure(doc)
    report = VerificationReport()
    digest_ok = doc["digest"] == document_digest(doc)
    report.add("integrity", digest_ok, "" if digest_ok else "digest does not match contents")

    try:
        data = _Loaded(doc)
    except (SdpError, KeyError, TypeError, ValueError, IndexError, AttributeError) as exc:
        if not digest_ok:
            report.add("structure", False, f"tampered data unreadable: {exc}")
            return report
        raise FormatError(f"malformed certificate: {exc}") from None

    try:
        _run_checks(doc, data, report)
    except LimitError:
        raise
    except (SdpError, KeyError, TypeError, ValueError, IndexError, AttributeError) as exc:
        report.add("consistency", False, str(exc))
    return report


def _run_checks(doc, data, report):
    G, K, N = data.G, data.G.K, data.N
    params = data.params

    seeds = seed_set(G, data.S, params.get("include_identity", True))
    report.add(
        "seeds",
        seeds.S == data.S and seeds.F_K == data.F_K,
        "F_K recomputed from S",
    )

    w = data.witness
    eT = w.phi.target.identity()
    sound = list(w.separated) == data.F_K and all(w.phi(x) != eT for x in data.F_K)
    report.add("witness_soundness", sound, f"{len(data.F_K)} elements separated")

    eN = N.identity()
    contain = all(data.rho(x) != eN for x in data.F_K)
    if data.kind == FREE:
        d = data.parameter
        from math import factorial

        n_homs = factorial(d) ** K.rank
        contain = contain and N.degree == d * n_homs and tuple(N.generators()) == data.rho_images
        if w.blocks:
            union = disjoint_union(K, list(w.blocks))
            contain = contain and union.images == w.phi.images
        records = data.evidence
        contain = contain and len(records) == len(w.blocks)
        for rec, block in zip(records, w.blocks):
            padded = [pad(p, d) for p in block.images]
            j = hom_index(padded, d)
            contain = contain and rec["index"] == j and rec["holds"] is True and all(
                block_projection(data.rho_images[i], j, d) == padded[i] for i in range(K.rank)
            )
    elif data.kind == ABELIAN:
        m = data.parameter
        contain = contain and isinstance(N, ModAbelian) and N.modulus == m and N.rank == K.rank
        contain = contain and data.rho_images == N.generators()
        for x in K.generators():
            contain = contain and w.phi(tuple(m * c for c in x)) == eT
    elif data.kind == FINITE:
        contain = contain and N == K and data.rho_images == tuple(K.generators())
    else:
        contain = False
    report.add("containment", contain, f"kind {data.kind}")

    # induced action: rho ∘ theta must equal induced ∘ rho on K's generators
    ok = True
    for (fwd, back), (ifwd, iback) in zip(G.action.pairs, data.action.pairs):
        for x in K.generators():
            ok = ok and ifwd(data.rho(x)) == data.rho(fwd(x)) and iback(data.rho(x)) == data.rho(back(x))
    ok = ok and len(G.action.pairs) == len(data.action.pairs)
    G1 = Semidirect(N, G.Q, data.action)
    report.add("induced_action", ok, "")

    def pi(g):
        return (data.rho(g[0]), g[1])

    gens = list(G.generators())
    pool = data.S + gens
    pairs = [(a, b) for a in pool for b in pool] + sample_pairs(G, params["seed"], params["sample_size"])
    stored_gens = [G1.element_from_json(x) for x in doc["pi"]["generators"]]
    mult = (
        _check_pi(G, G1, pi, pairs)
        and stored_gens == [pi(g) for g in gens]
        and stored_gens == list(G1.generators())
        and pi(G.identity()) == G1.identity()
    )
    report.add("multiplicativity", mult, f"{len(pairs)} pairs, seed {params['seed']}")

    stored_S = [G1.element_from_json(x) for x in doc["pi"]["S"]]
    inj = stored_S == [pi(s) for s in data.S] and len(set(stored_S)) == len(stored_S)
    report.add("injectivity", inj, f"|S| = {len(data.S)}")

    if doc.get("order") is not None:
        if data.kind == ABELIAN:
            gens_p, degree = N.perm_generators(), N.rank * N.modulus
        else:
            gens_p, degree = list(N.generators()), N.degree
        order = PermGroup(gens_p, degree, max_degree=params.get("max_degree", DEFAULT_MAX_DEGREE)).order()
        report.add("order", order == doc["order"] and doc.get("index") == order, f"|N| = {order}")
    elif doc.get("index") is not None:
        report.add("order", False, "index given without order")

    claims = doc["claims"]
    expected = {
        "quotient": report.get("induced_action") and report.get("multiplicativity"),
        "injective_on_S": report.get("witness_soundness") and report.get("containment") and report.get("injectivity"),
        "finite_index": report.get("order"),
    }
    report.add("claims_record", claims == expected, "stored claim flags match the re-check")
