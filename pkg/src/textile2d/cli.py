"""Command-line front end.

Exit status: 0 on success, 1 on a domain error (bad input data, failed
hypothesis), 2 on a usage error.
"""
from __future__ import annotations

import argparse
import json
import sys

from .cli_io import BlockSet, SpecDocument, load_spec, serialize
from .errors import TextileError
from .graph import GraphInsplitPartition, graphs_isomorphic
from .moves import (roundtrip_equivalences, thm61_pipeline, thm_lr_insplit,
                    thm_main_iii, thm_priyanga, twograph_insplit_textile)
from .shiftspace import enumerate_blocks
from .textile import insplit_textile_jm, invert_textile, is_essential_textile, lifting_report
from .twograph import (TwoGraphInsplitPartition, enumerate_pairing_partitions, insplit_twograph,
                       is_essential_twograph, textile_to_twograph, twograph_to_textile)


class UsageError(Exception):
    pass


def _size(text):
    try:
        m, n = text.lower().split("x")
        return int(m), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"size must look like 2x3, got {text!r}") from None


def _system(doc, args):
    if getattr(args, "system", None):
        return args.system, doc.textile(args.system)
    if getattr(args, "twograph", None):
        return args.twograph, twograph_to_textile(doc.twograph(args.twograph))
    if len(doc.textiles) == 1:
        name = next(iter(doc.textiles))
        return name, doc.textile(name)
    raise UsageError("name a system with --system (or a 2-graph with --twograph)")


def _partition(doc, args, want=None):
    if not args.partition:
        raise UsageError("this command needs --partition")
    entry = doc.partition(args.partition)
    P = entry.partition
    if want == "twograph" and not isinstance(P, TwoGraphInsplitPartition):
        raise TextileError(f"partition {args.partition!r} is not a 2-graph partition")
    if want == "graph" and not isinstance(P, GraphInsplitPartition):
        raise TextileError(f"partition {args.partition!r} is not a graph partition")
    return entry


def cmd_validate(doc, args, out):
    summary = {}
    names = [args.system] if args.system else sorted(doc.textiles)
    if args.twograph and not args.system:
        names = []
    for n in names:
        T = doc.textile(n)
        rep = lifting_report(T)
        summary[f"textile {n}"] = {"valid": True, **rep.as_dict(), "essential": is_essential_textile(T),
                                  "lift_failures": [list(f) for f in rep.failures[:10]]}
    tnames = [args.twograph] if args.twograph else ([] if args.system else sorted(doc.twographs))
    for n in tnames:
        L = doc.twograph(n)
        summary[f"twograph {n}"] = {"valid": True, "essential": is_essential_twograph(L)}
    for n in sorted(doc.partitions) if not (args.system or args.twograph) else []:
        summary[f"partition {n}"] = {"valid": True, "kind": doc.partitions[n].kind}
    return summary


def cmd_invert(doc, args, out):
    name, T = _system(doc, args)
    Th = invert_textile(T)
    out.add_textile(f"{name}_hat", Th)
    return {"system": f"{name}_hat", "is_LR": lifting_report(Th).is_LR}


def cmd_insplit_jm(doc, args, out):
    name, T = _system(doc, args)
    TI = insplit_textile_jm(T, _partition(doc, args, "graph").partition)
    out.add_textile(f"{name}_I", TI)
    rep = lifting_report(TI)
    return {"system": f"{name}_I", "squares": len(TI.F.r), "is_LR": rep.is_LR,
            "lift_failures": [list(f) for f in rep.failures[:10]]}


def cmd_insplit_2g(doc, args, out):
    if not args.twograph:
        raise UsageError("insplit-2g needs --twograph")
    LI, _ = insplit_twograph(doc.twograph(args.twograph), _partition(doc, args, "twograph").partition)
    out.twographs[f"{args.twograph}_I"] = LI
    return {"twograph": f"{args.twograph}_I", "vertices": len(LI.vertices),
            "edges": [len(LI.skeleton.eps1), len(LI.skeleton.eps2)], "squares": len(LI.squares)}


def cmd_to_2graph(doc, args, out):
    name, T = _system(doc, args)
    L = textile_to_twograph(T)
    out.twographs[f"{name}_2g"] = L
    return {"twograph": f"{name}_2g", "squares": len(L.squares), "essential": is_essential_twograph(L)}


def cmd_to_textile(doc, args, out):
    if not args.twograph:
        raise UsageError("to-textile needs --twograph")
    T = twograph_to_textile(doc.twograph(args.twograph))
    out.add_textile(f"{args.twograph}_T", T)
    return {"system": f"{args.twograph}_T", "is_LR": lifting_report(T).is_LR}


def cmd_blocks(doc, args, out):
    name, T = _system(doc, args)
    m, n = args.size
    bs = enumerate_blocks(T, m, n)
    out.blocks[f"{name}_blocks_{m}x{n}"] = BlockSet(name, (m, n), list(bs))
    return {"system": name, "size": f"{m}x{n}", "count": len(bs)}


def _compare(A, B, k, rename=None):
    for m in range(1, k + 1):
        for n in range(1, k + 1):
            a = set(enumerate_blocks(A, m, n))
            if rename:
                a = {b.relabel(rename) for b in a}
            if a != set(enumerate_blocks(B, m, n)):
                return f"{m}x{n}"
    return None


def cmd_pipeline61(doc, args, out):
    name, T = _system(doc, args)
    G = _partition(doc, args, "twograph").partition
    res = thm61_pipeline(T, G)
    for tag, S in zip(("A", "B", "C", "D"), res[:4]):
        out.add_textile(f"{name}_{tag}", S)
    out.add_textile(f"{name}_pruned", res.pruned)
    TLI = twograph_insplit_textile(T, G)
    out.add_textile(f"{name}_LI", TLI)
    k = args.max_block
    diff = _compare(res.pruned, TLI, k)
    verdict = f"block sets EQUAL up to {k}x{k}" if diff is None else f"block sets DIFFER at {diff}"
    return {"stage_sizes": list(res.sizes), "excluded": list(res.excluded),
            "E_D_isomorphic_to_E_LI": graphs_isomorphic(res.T_D.E, TLI.E) is not None,
            "blocks": verdict}


def cmd_priyanga(doc, args, out):
    name, T = _system(doc, args)
    Tt = thm_priyanga(T, _partition(doc, args, "twograph").partition)
    out.add_textile(f"{name}_tilde", Tt)
    return {"system": f"{name}_tilde", "is_LR": lifting_report(Tt).is_LR, "squares": len(Tt.F.r)}


def cmd_lr_insplit(doc, args, out):
    name, T = _system(doc, args)
    Tt, G = thm_lr_insplit(T, _partition(doc, args, "graph").partition)
    out.add_textile(f"{name}_tilde", Tt)
    L = textile_to_twograph(T)
    out.twographs[f"{name}_2g"] = L
    out.add_partition(f"{name}_G", "twograph", f"{name}_2g", G)
    return {"system": f"{name}_tilde", "is_LR": lifting_report(Tt).is_LR}


def cmd_main_iii(doc, args, out):
    name, T = _system(doc, args)
    Fp, G, Tt = thm_main_iii(T, _partition(doc, args, "graph").partition)
    out.add_textile(f"{name}_tilde", Tt)
    out.graphs[f"{name}.F"] = T.F
    out.add_partition(f"{name}_Fpart", "graph", f"{name}.F", Fp)
    out.twographs[f"{name}_2g"] = textile_to_twograph(T)
    out.add_partition(f"{name}_G", "twograph", f"{name}_2g", G)
    return {"system": f"{name}_tilde", "is_LR": lifting_report(Tt).is_LR}


def _start_kind(doc, entry, T):
    if entry.kind == "twograph":
        return "G"
    g = doc.graphs[entry.target]
    if g == T.F:
        return "F"
    if g == T.E:
        return "E"
    raise TextileError(f"partition target {entry.target!r} is neither F nor E of the system")


def cmd_equiv_check(doc, args, out):
    name, T = _system(doc, args)
    entry = _partition(doc, args)
    start = args.start or _start_kind(doc, entry, T)
    rep = roundtrip_equivalences(T, start, entry.partition)
    if not rep.ok:
        raise TextileError("equivalence check failed: " + "; ".join(rep.mismatches))
    out.add_textile(f"{name}_tilde", rep.systems["G"])
    return {"start": start, "ok": rep.ok}


def cmd_compare_blocks(doc, args, out):
    if not args.other:
        raise UsageError("compare-blocks needs --other")
    name, T = _system(doc, args)
    diff = _compare(T, doc.textile(args.other), args.max_block)
    k = args.max_block
    return {"systems": [name, args.other],
            "blocks": f"block sets EQUAL up to {k}x{k}" if diff is None else f"block sets DIFFER at {diff}"}


def cmd_enum_partitions(doc, args, out):
    if not args.twograph:
        raise UsageError("enum-partitions needs --twograph")
    L = doc.twograph(args.twograph)
    Ps = enumerate_pairing_partitions(L, limit=args.limit)
    for i, P in enumerate(Ps, 1):
        out.add_partition(f"{args.twograph}_P{i}", "twograph", args.twograph, P)
    out.twographs[args.twograph] = L
    return {"twograph": args.twograph, "count": len(Ps),
            "nontrivial": sum(not P.is_trivial() for P in Ps)}


COMMANDS = {
    "validate": cmd_validate, "invert": cmd_invert, "insplit-jm": cmd_insplit_jm,
    "insplit-2g": cmd_insplit_2g, "to-2graph": cmd_to_2graph, "to-textile": cmd_to_textile,
    "blocks": cmd_blocks, "pipeline61": cmd_pipeline61, "priyanga": cmd_priyanga,
    "lr-insplit": cmd_lr_insplit, "main-iii": cmd_main_iii, "equiv-check": cmd_equiv_check,
    "compare-blocks": cmd_compare_blocks, "enum-partitions": cmd_enum_partitions,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="textile2d", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--input", required=True, help="spec file to read")
        sp.add_argument("--system", help="textile system name")
        sp.add_argument("--twograph", help="2-graph name")
        sp.add_argument("--partition", help="partition name")
        sp.add_argument("--output", help="write the result fragment here instead of stdout")
        sp.add_argument("--machine", action="store_true", help="emit JSON")
        if name == "blocks":
            sp.add_argument("--size", type=_size, required=True)
        if name in ("pipeline61", "compare-blocks"):
            sp.add_argument("--max-block", type=int, default=3)
        if name == "compare-blocks":
            sp.add_argument("--other", help="second textile system")
        if name == "equiv-check":
            sp.add_argument("--start", choices=("G", "F", "E"))
        if name == "enum-partitions":
            sp.add_argument("--limit", type=int)
    return ap


def _human(summary, indent=""):
    lines = []
    for k, v in summary.items():
        if isinstance(v, dict):
            lines.append(f"{indent}{k}:")
            lines += _human(v, indent + "  ")
        else:
            lines.append(f"{indent}{k}: {v}")
    return lines


def run_command(argv) -> tuple:
    """Run one command; returns ``(status, stdout_text, stderr_text)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), "", ""
    out = SpecDocument()
    try:
        doc = load_spec(args.input)
        summary = COMMANDS[args.command](doc, args, out)
    except OSError as exc:
        return _fail(args, 2, f"cannot read input: {exc}")
    except UsageError as exc:
        return _fail(args, 2, str(exc))
    except TextileError as exc:
        return _fail(args, 1, f"{type(exc).__name__}: {exc}")
    fragment = serialize(out) if (out.graphs or out.twographs or out.partitions or out.blocks) else ""
    if args.output and fragment:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(fragment)
        fragment = ""
    if args.machine:
        text = json.dumps({"command": args.command, "status": "ok", "summary": summary,
                           "fragment": fragment}, indent=2, sort_keys=True, default=str) + "\n"
    else:
        text = "\n".join(_human(summary)) + "\n" + (("\n" + fragment) if fragment else "")
    return 0, text, ""


def _fail(args, status, message):
    if getattr(args, "machine", False):
        return status, json.dumps({"command": args.command, "status": "error",
                                   "exit": status, "error": message}, sort_keys=True) + "\n", ""
    return status, "", f"error: {message}\n"


def main(argv=None) -> int:
    status, text, err = run_command(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(text)
    sys.stderr.write(err)
    return status


if __name__ == "__main__":
    sys.exit(main())
