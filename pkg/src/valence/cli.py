"""Command line interface.

Exit codes: 0 on success, 1 when a check subcommand reaches a negative
verdict, 2 on malformed or inconsistent input.  Results go to stdout as
canonical JSON; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import sys

from . import io
from .amalgam import identity_membership_trace, replay_derivation
from .automata import DEFAULT_STORAGE_CAP, accepts_bounded, enumerate_language, replay, to_dot
from .corpus import check_all, classify, load_corpus
from .monoids import DEFAULT_ORDER_CAP, MonoidError, TooLarge, equal, identity
from .semilinear import equal_on_box, points_in_box

OK, NEGATIVE, BAD_INPUT = 0, 1, 2


def default_enum_steps(A, max_len: int) -> int:
    """Runs of a word of length n rarely need more than 2·(n+1)·|Q| edges."""
    return 2 * (max_len + 1) * max(1, len(A.states))


def _load(path: str):
    """Raw JSON, or the payload of a corpus entry file."""
    data = io.load_file(path)
    if isinstance(data, dict) and {"kind", "data", "expect"} <= set(data):
        return data["data"]
    return data


def _emit(obj) -> None:
    print(io.dumps(obj))


def _word_text(word) -> str:
    return "".join(map(str, word))


def cmd_run(args) -> int:
    A = io.automaton_from_json(_load(args.automaton))
    res = accepts_bounded(A, args.word, args.max_steps, args.storage_cap)
    out = {
        "bounds": {"max_steps": args.max_steps, "storage_cap": args.storage_cap},
        "word": args.word,
        "verdict": res.verdict.value,
        "truncated": res.truncated,
    }
    if res.accepted:
        out["run"] = list(res.run)
        out["replayed"] = replay(A, res.run, args.word)
    _emit(out)
    return OK if res.accepted else NEGATIVE


def cmd_enum(args) -> int:
    A = io.automaton_from_json(_load(args.automaton))
    steps = args.max_steps if args.max_steps is not None else default_enum_steps(A, args.max_len)
    words = enumerate_language(A, args.max_len, steps, args.storage_cap)
    _emit(
        {
            "bounds": {"max_len": args.max_len, "max_steps": steps, "storage_cap": args.storage_cap},
            "words": sorted((_word_text(w) for w in words), key=lambda s: (len(A.tokenize(s)), s)),
        }
    )
    return OK


def cmd_classify(args) -> int:
    v = classify(_load(args.graph), args.which)
    _emit({"which": args.which, **v.as_dict()})
    return OK if v.holds else NEGATIVE


def cmd_extract(args) -> int:
    from .torsion import extract

    A = io.automaton_from_json(_load(args.automaton))
    res = extract(A, radius=args.radius, cap=args.order_cap, skeleton_bound=args.skeleton_bound)
    out = {
        "bounds": {
            "radius": "2·k·|Y_S| per state set" if args.radius is None else args.radius,
            "order_cap": args.order_cap,
            "skeleton_bound": res.skeleton_bound,
            "box": args.box,
        },
        "semilinear": io.semilinear_to_json(res.assembled),
        "complete_within_radius": res.complete_within_radius,
        "skeletons_truncated": res.truncated,
        "audit_violations": len(res.audit_violations),
        "derivations_ok": res.derivations_ok,
    }
    if args.emit_edge_level:
        out["edge_level"] = io.semilinear_to_json(res.edge_level)
    if args.box is not None:
        out["box_points"] = sorted(
            ({x: c for x, c in zip(A.alphabet, v) if c} for v in points_in_box(res.assembled, args.box)),
            key=lambda d: tuple(d.get(x, 0) for x in A.alphabet),
        )
    _emit(out)
    return OK


def cmd_amalgam(args) -> int:
    spec = io.amalgam_from_json(_load(args.spec))
    trace = identity_membership_trace(spec, args.word)
    out = {
        "word": args.word,
        "member": trace.accepted,
        "contractions": [
            {"block": _word_text(s.word[s.start : s.end]), "factor": s.factor, "f": s.f, "symbol": s.symbol}
            for s in trace.steps
        ],
    }
    if trace.accepted:
        out["derivation_ok"] = replay_derivation(spec, trace, args.word)
    _emit(out)
    return OK if trace.accepted else NEGATIVE


def cmd_wp(args) -> int:
    m = io.monoid_from_json(_load(args.monoid))
    x = io.element_from_json(m, args.word)
    trivial = equal(x, identity(m))
    _emit({"word": args.word, "normal_form": io.element_to_json(x), "identity": trivial})
    return OK if trivial else NEGATIVE


def cmd_slset(args) -> int:
    s = io.semilinear_from_json(_load(args.set))
    if args.op == "contains":
        if args.vector is None:
            raise io.InputError("contains needs --vector")
        t = io.multiset_from_json(s.alphabet, io.loads(args.vector, "--vector"))
        hit = s.contains_vector(t.counts)
        _emit({"vector": t.as_dict(), "contains": hit})
        return OK if hit else NEGATIVE
    if args.other is None or args.box is None:
        raise io.InputError("equal-box needs a second set and --box")
    t = io.semilinear_from_json(_load(args.other))
    if t.alphabet != s.alphabet:
        raise io.InputError(f"alphabets differ: {list(s.alphabet)} vs {list(t.alphabet)}")
    same, witness = equal_on_box(s, t, args.box)
    out = {"bounds": {"box": args.box}, "equal": same}
    if witness is not None:
        out["witness"] = witness.as_dict()
    _emit(out)
    return OK if same else NEGATIVE


def cmd_show(args) -> int:
    A = io.automaton_from_json(_load(args.automaton))
    if args.format == "dot":
        print(to_dot(A))
    else:
        _emit(io.automaton_to_json(A))
    return OK


def cmd_corpus(args) -> int:
    entries = load_corpus()
    if args.op == "list":
        _emit([{"name": e.name, "kind": e.kind, "note": e.note} for e in entries.values()])
        return OK
    if args.op == "show":
        if args.name not in entries:
            raise io.InputError(f"no corpus entry {args.name!r}")
        e = entries[args.name]
        _emit({"name": e.name, "kind": e.kind, "note": e.note, "data": e.data, "expect": list(e.expect)})
        return OK
    results = check_all()
    failed = [r for r in results if not r.ok]
    _emit(
        {
            "checks": [
                {"entry": r.entry, "check": r.check, "ok": r.ok, "detail": r.detail, "provenance": r.provenance}
                for r in results
            ],
            "failed": len(failed),
        }
    )
    return OK if not failed else NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="valence", description="Valence automata over monoids.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="bounded membership with a witness run")
    r.add_argument("automaton")
    r.add_argument("--word", required=True)
    r.add_argument("--max-steps", type=int, default=64)
    r.add_argument("--storage-cap", type=int, default=DEFAULT_STORAGE_CAP)
    r.set_defaults(func=cmd_run)

    e = sub.add_parser("enum", help="enumerate accepted words up to a length")
    e.add_argument("automaton")
    e.add_argument("--max-len", type=int, required=True)
    e.add_argument("--max-steps", type=int, default=None)
    e.add_argument("--storage-cap", type=int, default=DEFAULT_STORAGE_CAP)
    e.set_defaults(func=cmd_enum)

    c = sub.add_parser("classify", help="classify a storage graph")
    c.add_argument("graph")
    c.add_argument("--which", choices=("reg", "cf", "semilinear"), required=True)
    c.set_defaults(func=cmd_classify)

    x = sub.add_parser("parikh-extract", help="semilinear Parikh image over a torsion group")
    x.add_argument("automaton")
    x.add_argument("--radius", type=int, default=None)
    x.add_argument("--order-cap", type=int, default=DEFAULT_ORDER_CAP)
    x.add_argument("--skeleton-bound", type=int, default=None)
    x.add_argument("--box", type=int, default=None)
    x.add_argument("--emit-edge-level", action="store_true")
    x.set_defaults(func=cmd_extract)

    a = sub.add_parser("amalgam", help="identity membership in a free or amalgamated product")
    a.add_argument("spec")
    a.add_argument("--word", required=True)
    a.set_defaults(func=cmd_amalgam)

    w = sub.add_parser("wp", help="word problem: is a generator word the identity")
    w.add_argument("monoid")
    w.add_argument("--word", required=True)
    w.set_defaults(func=cmd_wp)

    s = sub.add_parser("slset", help="semilinear set membership and box comparison")
    s.add_argument("op", choices=("contains", "equal-box"))
    s.add_argument("set")
    s.add_argument("other", nargs="?")
    s.add_argument("--vector", default=None, help='JSON counts, e.g. \'{"a": 2}\'')
    s.add_argument("--box", type=int, default=None)
    s.set_defaults(func=cmd_slset)

    sh = sub.add_parser("show", help="print an automaton as canonical JSON or DOT")
    sh.add_argument("automaton")
    sh.add_argument("--format", choices=("json", "dot"), default="json")
    sh.set_defaults(func=cmd_show)

    co = sub.add_parser("corpus", help="list, show or check the bundled corpus")
    co.add_argument("op", choices=("list", "show", "check"))
    co.add_argument("name", nargs="?")
    co.set_defaults(func=cmd_corpus)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (io.InputError, MonoidError, TooLarge, ValueError, KeyError, TypeError) as e:
        print(f"valence: error: {e}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
