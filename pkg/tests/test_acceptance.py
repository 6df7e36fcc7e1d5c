"""Acceptance criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py`` (lines are printed even under
output capture) or directly with ``python tests/test_acceptance.py``.
"""
import contextlib
import copy
import io
import itertools
import json
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import make_catmap, make_free_nielsen, nielsen_battery  # noqa: E402
from oracles import (  # noqa: E402
    cat_oracle_mul,
    closure,
    diagonal_generators,
    eval_word_perm,
    free_reduce,
    int_det,
    int_matmul,
)
from sdpquot.charcore import block_projection, char_core_free, precompose_index  # noqa: E402
from sdpquot.cli import main  # noqa: E402
from sdpquot.errors import VerificationError  # noqa: E402
from sdpquot.groups import ball, random_element  # noqa: E402
from sdpquot.semidirect import theorem1_pipeline, verify_certificate  # noqa: E402
from sdpquot.separation import separate_abelian, separate_free  # noqa: E402
from sdpquot.shifts import (  # noqa: E402
    CellularAutomaton,
    FiniteGroupTable,
    RecodingData,
    all_rules,
    ca_table,
    conjugate_map,
    finext_embed,
    is_equivariant,
    is_h_equivariant,
    recode_sweep,
    surjunctivity_check,
    table_properties,
)
from sdpquot.smith import smith_normal_form  # noqa: E402

CONSTRUCT_DEMOS = ["catmap", "directproduct-Z", "finite-kernel", "free-nielsen"]


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
        assert ok, detail

    return emit


# ---------------------------------------------------------------------------


def criterion_1():
    G = make_catmap()
    S = [((1, 0), (0,)), ((0, 0), (1,))]
    t0 = time.perf_counter()
    cert = theorem1_pipeline(G, S, compute_order=True)
    elapsed = time.perf_counter() - t0
    rng = random.Random(1)
    oracle = all(
        cert.pi(G.mul(a, b)) == cat_oracle_mul(cert.pi(a), cert.pi(b))
        for a, b in ((random_element(G, rng), random_element(G, rng)) for _ in range(500))
    )
    classes = {cert.pi((v, (0,)))[0] for v in itertools.product(range(-3, 4), repeat=2)}
    pi_S = [cert.pi(s) for s in S]
    ok = (
        cert.quotient.parameter == 2
        and cert.order == 4
        and len(classes) == 4
        and cert.index == 4
        and len(set(pi_S)) == len(S)
        and all(cert.claims.values())
        and verify_certificate(cert.to_json()).passed
        and oracle
        and elapsed < 1.0
    )
    return ok, f"cat map m={cert.quotient.parameter} |N|={cert.order} index={cert.index} oracle={oracle} claims={cert.claims} {elapsed:.3f}s"


def criterion_2():
    G = make_free_nielsen()
    S = [(k, (0,)) for k in ball(G.K, 1)]
    t0 = time.perf_counter()
    plain = theorem1_pipeline(G, S)
    ordered = theorem1_pipeline(G, S, compute_order=True)
    elapsed = time.perf_counter() - t0
    d = ordered.quotient.parameter
    rep = verify_certificate(ordered.to_json()).claims()
    ok = (
        len(S) == 5
        and plain.claims["quotient"]
        and plain.claims["injective_on_S"]
        and d <= 3
        and ordered.order is not None
        and ordered.claims["finite_index"] is True
        and all(rep.values())
        and elapsed < 60
    )
    return ok, f"F2 x| Z, |S|=5, d={d}, |N|={ordered.order}, claims={ordered.claims} {elapsed:.2f}s"


def criterion_3():
    results = []
    for k, d, want in ((2, 2, 4), (1, 3, 6)):
        gens, degree = diagonal_generators(k, d)
        brute = len(closure(gens, degree))
        got = char_core_free(k, d).order()
        results.append(got == brute == want)
    cq = char_core_free(2, 2)
    F = cq.source
    closed = True
    for fwd, _ in nielsen_battery(F):
        hit = set()
        for j in range(cq.n_homs):
            s = precompose_index(cq, j, fwd)
            want = [block_projection(cq.rho(fwd(x)), j, 2) for x in F.generators()]
            closed &= [block_projection(g, s, 2) for g in cq.rho.images] == want
            hit.add(s)
        closed &= len(hit) == cq.n_homs
    ok = all(results) and closed
    return ok, f"|N(2,2)|=4 and |N(1,3)|=6 match closure: {results}; Nielsen precomposition closure: {closed}"


def criterion_4():
    rng = random.Random(2024)
    words_ok = 0
    for _ in range(100):
        w = ()
        while not w:
            w = free_reduce([rng.choice((1, -1)) * rng.randint(1, 2) for _ in range(rng.randint(1, 12))])
        wit = separate_free(2, [w])
        img = eval_word_perm(wit.phi.images, w, wit.degree)
        words_ok += img != tuple(range(wit.degree)) and wit.phi(w) == img
    sets_ok = 0
    for _ in range(100):
        vecs = []
        for _ in range(rng.randint(1, 6)):
            v = (0, 0, 0)
            while v == (0, 0, 0):
                v = tuple(rng.randint(-50, 50) for _ in range(3))
            vecs.append(v)
        m = separate_abelian(3, vecs).modulus
        sets_ok += all(any(c % m for c in v) for v in vecs)
    return words_ok == 100 and sets_ok == 100, f"words separated {words_ok}/100, vector sets separated {sets_ok}/100"


def criterion_5():
    rng = random.Random(5)
    good = 0
    for _ in range(200):
        n, m = rng.randint(1, 4), rng.randint(1, 4)
        A = [[rng.randint(-20, 20) for _ in range(m)] for _ in range(n)]
        U, S, V = smith_normal_form(A)
        diag = [S[i][i] for i in range(min(n, m))]
        chain = all((b == 0) if a == 0 else b % a == 0 for a, b in zip(diag, diag[1:]))
        diagonal = all(S[i][j] == 0 for i in range(n) for j in range(m) if i != j)
        good += (
            int_matmul(int_matmul(U, A), V) == S
            and int_det(U) in (1, -1)
            and int_det(V) in (1, -1)
            and chain
            and diagonal
        )
    return good == 200, f"Smith normal form oracle holds on {good}/200 matrices"


def criterion_6():
    G = FiniteGroupTable.semidirect_cyclic(3, 2, -1)
    rd = RecodingData.right_transversal(G, (0, 1, 2))
    sweep = recode_sweep(rd, 2)
    rng = random.Random(6)
    preserved = 0
    for _ in range(20):
        size = rng.randint(1, 3)
        A = CellularAutomaton(
            tuple(sorted(rng.sample(range(6), size))), tuple(rng.randrange(2) for _ in range(2**size)), 2
        )
        table = ca_table(G, A)
        assert is_equivariant(G, 2, table) is None
        conj = conjugate_map(rd, 2, table)
        preserved += table_properties(conj, 64) == table_properties(table, 64) and is_h_equivariant(rd, 2, conj) is None
    ok = (
        sweep["configurations"] == 64
        and sweep["bijective"]
        and sweep["pairs_checked"] == 192
        and sweep["equivariant"]
        and preserved == 20
    )
    return ok, f"recode bijective on 64 configs: {sweep['bijective']}, equivariant on 192 pairs: {sweep['equivariant']}, conjugation preserved {preserved}/20"


def criterion_7():
    G = FiniteGroupTable.semidirect_cyclic(3, 2, -1)
    out = finext_embed(G, (0, 3), (0, 0, 0, 3, 3, 3))
    ok = out["injective"] and out["homomorphism"] and out["pairs_checked"] == 36 and out["index"] == 2
    return ok, f"Sym(3) into Sym(3) x Z/2: injective={out['injective']}, homomorphism on {out['pairs_checked']} pairs={out['homomorphism']}, index={out['index']}"


def criterion_8():
    t0 = time.perf_counter()
    Z2 = FiniteGroupTable.cyclic(2)
    summary = []
    found = []
    for name, G in (("Z/4", FiniteGroupTable.cyclic(4)), ("Z/2xZ/2", FiniteGroupTable.direct_product(Z2, Z2))):
        count = 0
        for A in all_rules(G, 2, 2):
            count += 1
            try:
                rec = surjunctivity_check(G, 2, A)
            except VerificationError:
                found.append((name, A))
                continue
            if rec.injective and not rec.surjective:
                found.append((name, A))
        summary.append(f"{name}: {count} automata")
    elapsed = time.perf_counter() - t0
    return not found and elapsed < 10, f"{', '.join(summary)}; injective-not-surjective found: {len(found)}; {elapsed:.2f}s"


def _leaves(obj, path=()):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _leaves(v, path + (k,))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _leaves(v, path + (i,))
    else:
        yield path, obj


def _tamper(value):
    if isinstance(value, bool):
        return not value
    if isinstance(value, int):
        return value + 1
    if isinstance(value, str):
        return value + "x"
    return 0


def _run_cli(argv):
    with contextlib.redirect_stdout(io.StringIO()), contextlib.redirect_stderr(io.StringIO()):
        return main(argv)


def criterion_9(workdir):
    workdir = Path(workdir)
    cert_path = workdir / "cert.json"
    round_trips = 0
    tampers, caught = 0, 0
    missed = []
    for demo in CONSTRUCT_DEMOS:
        code_c = _run_cli(["construct", "--demo", demo, "--order", "--output", str(cert_path)])
        code_v = _run_cli(["verify", str(cert_path)])
        round_trips += code_c == 0 and code_v == 0
        doc = json.loads(cert_path.read_text())
        # the format version has its own explicit error (exit 2), tested elsewhere
        for path, value in _leaves(doc):
            if path == ("format",):
                continue
            bad = copy.deepcopy(doc)
            node = bad
            for p in path[:-1]:
                node = node[p]
            node[path[-1]] = _tamper(value)
            cert_path.write_text(json.dumps(bad))
            tampers += 1
            code = _run_cli(["verify", str(cert_path)])
            if code == 1:
                caught += 1
            else:
                missed.append((demo, path, code))
    ok = round_trips == len(CONSTRUCT_DEMOS) and caught == tampers
    return ok, f"round trips {round_trips}/{len(CONSTRUCT_DEMOS)}; single-field tampers exiting 1: {caught}/{tampers}" + (
        f"; missed e.g. {missed[:3]}" if missed else ""
    )


# ---------------------------------------------------------------------------


def test_criterion_1_catmap_pipeline(report):
    report(1, *criterion_1())


def test_criterion_2_free_pipeline(report):
    report(2, *criterion_2())


def test_criterion_3_characteristic_core(report):
    report(3, *criterion_3())


def test_criterion_4_separation_soundness(report):
    report(4, *criterion_4())


def test_criterion_5_smith_normal_form(report):
    report(5, *criterion_5())


def test_criterion_6_recoding(report):
    report(6, *criterion_6())


def test_criterion_7_finite_extension_embedding(report):
    report(7, *criterion_7())


def test_criterion_8_surjunctivity_exhaustion(report):
    report(8, *criterion_8())


def test_criterion_9_certificate_round_trip(report, tmp_path):
    report(9, *criterion_9(tmp_path))


if __name__ == "__main__":
    import tempfile

    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        for n, fn in enumerate(
            (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8),
            start=1,
        ):
            ok, detail = fn()
            failures += not ok
            print(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
        ok, detail = criterion_9(tmp)
        failures += not ok
        print(f"{'PASS' if ok else 'FAIL'} criterion 9: {detail}")
    sys.exit(1 if failures else 0)
