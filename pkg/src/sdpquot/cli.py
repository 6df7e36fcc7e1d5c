"""Command line: ``sdpquot {construct,verify,shift,separate,core,snf}``.

Exit codes: 0 success, 1 a claim or check failed, 2 input/format error,
3 a size cap was exceeded.  Human-readable summaries go to stdout; JSON only
goes to the file named by ``--output``.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources

from . import __version__
from .charcore import DEFAULT_MAX_HOMS, char_core_abelian, char_core_free
from .errors import InputError, SdpError
from .groups import Free, descriptor_from_json
from .permgroup import DEFAULT_MAX_DEGREE
from .semidirect import DEFAULT_SAMPLE_SIZE, theorem1_pipeline, verify_certificate
from .separation import JOINT, separate
from .shifts import (
    DEFAULT_MAX_CONFIGS,
    CellularAutomaton,
    RecodingData,
    all_rules,
    finext_embed,
    group_from_json,
    recode_sweep,
    surjunctivity_check,
)
from .smith import smith_normal_form
from .validation import check_elements, seed_elements

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3


def demo_names():
    return sorted(
        p.name[: -len(".json")] for p in resources.files("sdpquot.demos").iterdir() if p.name.endswith(".json")
    )


def load_json(path=None, demo=None):
    if demo is not None:
        ref = resources.files("sdpquot.demos") / f"{demo}.json"
        if not ref.is_file():
            raise InputError(f"unknown demo {demo!r}; available: {', '.join(demo_names())}")
        text = ref.read_text()
    elif path is not None:
        try:
            with open(path) as f:
                text = f.read()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from None
    else:
        raise InputError("give --input or --demo")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None


def write_json(path, obj):
    if path is None:
        return
    with open(path, "w") as f:
        json.dump(obj, f, sort_keys=True, indent=1)
        f.write("\n")


def _option(args, cfg, name, default):
    value = getattr(args, name, None)
    if value is not None:
        return value
    return cfg.get(name, default)


# ---------------------------------------------------------------------------
# commands


def cmd_construct(args):
    cfg = load_json(args.input, args.demo)
    if not isinstance(cfg, dict) or "group" not in cfg or "S" not in cfg:
        raise InputError("construct config needs 'group' and 'S'")
    G = descriptor_from_json(cfg["group"])
    if G.kind != "semidirect":
        raise InputError("construct needs a semidirect product")
    S = seed_elements(G, cfg["S"])
    opts = cfg.get("options", {})
    cert = theorem1_pipeline(
        G,
        S,
        compute_order=bool(args.order or opts.get("order", False)),
        max_homs=_option(args, opts, "max_homs", DEFAULT_MAX_HOMS),
        max_degree=_option(args, opts, "max_degree", DEFAULT_MAX_DEGREE),
        seed=_option(args, opts, "seed", 0),
        sample_size=opts.get("sample_size", DEFAULT_SAMPLE_SIZE),
        separation=opts.get("separation", "per-word"),
        include_identity=opts.get("include_identity", True),
    )
    doc = cert.to_json()
    write_json(args.output, doc)
    report = verify_certificate(doc)
    w, q = cert.witness, cert.quotient
    print(f"G = {G.K.kind} ⋊ {G.Q.kind} (action {G.action_status})")
    print(f"|S| = {len(cert.seeds.S)}, |F_K| = {len(cert.seeds.F_K)}")
    if w.kind == "stallings":
        print(f"witness: {w.kind}, degree {w.degree}, blocks {w.block_degrees}")
    elif w.kind == "modulus":
        print(f"witness: {w.kind}, modulus {w.modulus}")
    else:
        print(f"witness: {w.kind}")
    label = {"free": "d", "abelian": "m"}.get(q.kind, "parameter")
    print(f"characteristic quotient: {q.kind}, {label} = {q.parameter}")
    if cert.order is not None:
        print(f"|N| = [G1 : Q] = {cert.order}")
    for claim, ok in report.claims().items():
        status = "not computed" if ok is None else ("verified" if ok else "FAILED")
        print(f"claim {claim}: {status}")
    if args.output:
        print(f"certificate written to {args.output}")
    return EXIT_OK if report.passed and cert.passed else EXIT_FAIL


def cmd_verify(args):
    doc = load_json(args.certificate or args.input)
    report = verify_certificate(doc)
    print(report.summary())
    write_json(args.output, report.to_json())
    return EXIT_OK if report.passed else EXIT_FAIL


def _shift_group(cfg):
    if "group" not in cfg:
        raise InputError("shift config needs 'group'")
    return group_from_json(cfg["group"])


def cmd_shift(args):
    cfg = load_json(args.input, args.demo)
    Gt = _shift_group(cfg)
    sigma = int(cfg.get("alphabet", 2))
    max_configs = args.max_configs or DEFAULT_MAX_CONFIGS
    if args.action == "check":
        if "automaton" in cfg:
            a = cfg["automaton"]
            rules = [CellularAutomaton(a["memory"], a["rule"], sigma)]
        else:
            rules = all_rules(Gt, sigma, int(cfg.get("memory_max", 2)))
        count = 0
        tally = {"injective": 0, "surjective": 0}
        bad = []
        for A in rules:
            rec = surjunctivity_check(Gt, sigma, A, max_configs)
            count += 1
            tally["injective"] += rec.injective
            tally["surjective"] += rec.surjective
            if rec.injective and not rec.surjective:
                bad.append(A.to_json())
        report = {"group_order": Gt.order, "alphabet": sigma, "automata": count, **tally, "counterexamples": bad}
        print(f"|G| = {Gt.order}, alphabet {sigma}: {count} cellular automata swept")
        print(f"injective: {tally['injective']}, surjective: {tally['surjective']}")
        print("no injective-non-surjective map found" if not bad else f"{len(bad)} counterexamples")
        ok = not bad
    elif args.action == "recode":
        H = cfg.get("subgroup")
        if H is None:
            raise InputError("recode needs 'subgroup'")
        if "transversal" in cfg:
            rd = RecodingData(Gt, tuple(H), tuple(cfg["transversal"]))
        else:
            rd = RecodingData.right_transversal(Gt, H)
        report = recode_sweep(rd, sigma, max_configs)
        report.update({"H": list(rd.H), "T": list(rd.T)})
        print(f"|G| = {Gt.order}, |H| = {len(rd.H)}, T = {list(rd.T)}, alphabet {sigma}")
        print(f"recode bijective on {report['configurations']} configurations: {report['bijective']}")
        print(f"H-equivariant on {report['pairs_checked']} pairs: {report['equivariant']}")
        ok = report["bijective"] and report["equivariant"]
        print("pass" if ok else "FAIL")
    else:
        if "subgroup" not in cfg or "retraction" not in cfg:
            raise InputError("embed needs 'subgroup' and 'retraction'")
        report = finext_embed(Gt, cfg["subgroup"], cfg["retraction"])
        print(f"|G| = {Gt.order} into Sym({report['cosets']}) x H of order {report['target_order']}")
        print(f"injective: {report['injective']}, homomorphism on {report['pairs_checked']} pairs: {report['homomorphism']}")
        print(f"index {report['index']}")
        ok = report["injective"] and report["homomorphism"]
    write_json(args.output, report)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_separate(args):
    if args.word:
        K = Free(args.rank)
        elements = [K.parse(w) for w in args.word]
        strategy = args.strategy or JOINT
    else:
        cfg = load_json(args.input)
        K = descriptor_from_json(cfg.get("group"))
        elements = check_elements(K, cfg.get("elements", []))
        strategy = args.strategy or cfg.get("strategy", JOINT)
    witness = separate(K, elements, strategy=strategy)
    sound = witness.is_sound()
    report = {"witness": witness.to_json(), "sound": sound}
    write_json(args.output, report)
    print(f"witness kind {witness.kind}, degree/modulus {witness.degree}, {len(elements)} elements")
    print(f"soundness: {str(sound).lower()}")
    return EXIT_OK if sound else EXIT_FAIL


def cmd_core(args):
    if args.abelian is not None:
        try:
            L = json.loads(args.abelian)
        except json.JSONDecodeError as exc:
            raise InputError(f"lattice is not JSON: {exc}") from None
        cq = char_core_abelian(len(L), L)
        print(f"abelian core: m = {cq.parameter}")
        ok = all(r["holds"] for r in cq.evidence)
    else:
        if args.rank is None or args.degree is None:
            raise InputError("core --free needs -k and -d")
        cq = char_core_free(args.rank, args.degree, max_homs=args.max_homs or DEFAULT_MAX_HOMS)
        print(f"free core: k = {args.rank}, d = {args.degree}, {cq.n_homs} homomorphisms, degree {cq.N.degree}")
        ok = True
    order = cq.order(max_degree=args.max_degree or DEFAULT_MAX_DEGREE)
    print(f"|N| = {order}")
    report = cq.to_json()
    report["order"] = order
    write_json(args.output, report)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_snf(args):
    if args.matrix is not None:
        try:
            A = json.loads(args.matrix)
        except json.JSONDecodeError as exc:
            raise InputError(f"matrix is not JSON: {exc}") from None
    else:
        A = load_json(args.input).get("matrix")
    if not isinstance(A, list):
        raise InputError("matrix must be a list of rows")
    U, S, V = smith_normal_form(A)
    diag = [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0))]
    print(f"invariant factors: {diag}")
    write_json(args.output, {"U": U, "S": S, "V": V})
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="input JSON document")
    common.add_argument("--output", help="write the JSON result here")
    common.add_argument("--max-homs", type=int, dest="max_homs")
    common.add_argument("--max-degree", type=int, dest="max_degree")
    common.add_argument("--max-configs", type=int, dest="max_configs")
    common.add_argument("--seed", type=int)
    common.add_argument(
        "--threads", type=int, default=os.cpu_count(), help="worker bound (computations run in one thread)"
    )

    parser = argparse.ArgumentParser(prog="sdpquot", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="build a quotient and its certificate")
    p.add_argument("--demo", help="use a shipped demo config")
    p.add_argument("--order", action="store_true", default=None, help="compute |N|")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", parents=[common], help="re-check a certificate")
    p.add_argument("certificate", nargs="?")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("shift", parents=[common], help="exhaustive shift-space checks")
    p.add_argument("action", choices=["check", "recode", "embed"])
    p.add_argument("--demo")
    p.set_defaults(func=cmd_shift)

    p = sub.add_parser("separate", parents=[common], help="separation witness for a finite set")
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--word", action="append", help="free group word such as xyXY (repeatable)")
    p.add_argument("--strategy", choices=["joint", "per-word"])
    p.set_defaults(func=cmd_separate)

    p = sub.add_parser("core", parents=[common], help="characteristic quotient")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--free", action="store_true")
    mode.add_argument("--abelian", metavar="LATTICE", help="JSON square matrix, columns span K0")
    p.add_argument("-k", "--rank", type=int)
    p.add_argument("-d", "--degree", type=int)
    p.set_defaults(func=cmd_core)

    p = sub.add_parser("snf", parents=[common], help="Smith normal form")
    p.add_argument("--matrix", help="JSON matrix")
    p.set_defaults(func=cmd_snf)

    p = sub.add_parser("demos", help="list shipped demo configs")
    p.set_defaults(func=lambda args: print("\n".join(demo_names())) or EXIT_OK)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SdpError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return exc.exit_code
    except (KeyError, TypeError, ValueError) as exc:
        print(f"error (InputError): malformed input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
