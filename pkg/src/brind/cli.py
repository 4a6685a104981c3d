"""Command-line front end.

Subcommands: table, brauer, adams, lambda, restrict, moebius, eps, verify.
Results are deterministic: JSON payloads carry no floats, no timestamps
and no absolute paths, so identical inputs give byte-identical output.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from .characters import character_table, linear_characters, restrict
from .errors import BrindError, InputError
from .groups import DEFAULT_BOUND, load_group
from .lambda_adams import adams, lambda_op
from .monomial import MonomialElement, brauer_induction, evaluate, pair_poset, restrict_monomial
from .perms import parse_cycles
from .realeps import (
    AugmentedGroup,
    theta_rank_one,
    transfer_unit,
    twist_scalar,
)
from .verify import run_verification


def _hash_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _document(command: str, arguments: dict, input_hash: str, payload) -> dict:
    return {
        "command": command,
        "arguments": arguments,
        "input_hash": input_hash,
        "version": __version__,
        "payload": payload,
    }


def _emit(doc: dict, as_json: bool, human_lines) -> None:
    if as_json:
        sys.stdout.write(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")
    else:
        for line in human_lines:
            print(line)


def _load(args):
    G, desc = load_group(args.group, bound=args.bound)
    input_hash = _hash_bytes(Path(args.group).read_bytes())
    return G, desc, input_hash


def _selector(args, table):
    k = len(table.irreducibles)
    if args.irreducible is not None:
        if not 0 <= args.irreducible < k:
            raise InputError(f"irreducible index must be in 0..{k - 1}")
        return table.virtual([1 if j == args.irreducible else 0 for j in range(k)])
    if args.coords is not None:
        try:
            coords = [int(tok) for tok in args.coords.split(",")]
        except ValueError:
            raise InputError("coordinates must be comma-separated integers") from None
        if len(coords) != k:
            raise InputError(f"expected {k} coordinates, got {len(coords)}")
        return table.virtual(coords)
    raise InputError("select a character with --irreducible or --coords")


def _selector_echo(args) -> dict:
    if args.irreducible is not None:
        return {"irreducible": args.irreducible}
    return {"coords": args.coords}


def _parse_subgroup(G, text: str):
    text = text.strip()
    gens = []
    if text and text != "()":
        for part in text.split(","):
            gens.append(parse_cycles(part.strip(), G.degree))
    return G.subgroup(gens)


def _cmd_table(args) -> int:
    G, desc, input_hash = _load(args)
    table = character_table(G)
    payload = table.to_json()
    payload["orthogonality_ok"] = bool(
        table.row_orthogonality_ok() and table.column_orthogonality_ok()
    )
    doc = _document("table", {"group": Path(args.group).name}, input_hash, payload)
    lines = [
        f"group {desc.name or Path(args.group).name}: order {G.order},"
        f" {len(G.conjugacy_classes)} classes",
        f"degrees: {list(table.degrees)}",
        "rows:",
    ]
    for chi in table.irreducibles:
        lines.append("  " + "  ".join(str(v) for v in chi.values))
    lines.append(f"orthogonality: {'ok' if payload['orthogonality_ok'] else 'FAILED'}")
    _emit(doc, args.json, lines)
    return 0


def _cmd_brauer(args) -> int:
    G, _desc, input_hash = _load(args)
    table = character_table(G)
    x = _selector(args, table)
    element = brauer_induction(x)
    back = evaluate(element)
    payload = {
        "input_coords": list(x.coords),
        "element": element.to_json(),
        "evaluation_coords": list(back.coords),
        "roundtrip_ok": back == x,
    }
    doc = _document(
        "brauer",
        {"group": Path(args.group).name, **_selector_echo(args)},
        input_hash,
        payload,
    )
    lines = [
        f"b({list(x.coords)}) = {element}",
        f"ev(b(x)) coords: {list(back.coords)}",
        f"roundtrip: {'ok' if payload['roundtrip_ok'] else 'FAILED'}",
    ]
    _emit(doc, args.json, lines)
    return 0


def _cmd_adams(args) -> int:
    G, _desc, input_hash = _load(args)
    if args.n < 1:
        raise InputError("Adams operations need n >= 1")
    table = character_table(G)
    x = _selector(args, table)
    y = adams(args.n, x)
    payload = {"n": args.n, "input_coords": list(x.coords), "output_coords": list(y.coords)}
    doc = _document(
        "adams",
        {"group": Path(args.group).name, "n": args.n, **_selector_echo(args)},
        input_hash,
        payload,
    )
    _emit(doc, args.json, [f"psi^{args.n}({list(x.coords)}) = {list(y.coords)}"])
    return 0


def _cmd_lambda(args) -> int:
    G, _desc, input_hash = _load(args)
    if args.k < 0:
        raise InputError("lambda operations need k >= 0")
    table = character_table(G)
    x = _selector(args, table)
    y = lambda_op(args.k, x)
    payload = {"k": args.k, "input_coords": list(x.coords), "output_coords": list(y.coords)}
    doc = _document(
        "lambda",
        {"group": Path(args.group).name, "k": args.k, **_selector_echo(args)},
        input_hash,
        payload,
    )
    _emit(doc, args.json, [f"lambda^{args.k}({list(x.coords)}) = {list(y.coords)}"])
    return 0


def _cmd_restrict(args) -> int:
    G, _desc, input_hash = _load(args)
    table = character_table(G)
    H = _parse_subgroup(G, args.subgroup)
    HG = H.as_group()
    tH = character_table(HG)
    x = _selector(args, table)
    res = tH.from_class_function(restrict(x.as_class_function(), H))
    payload = {
        "subgroup_order": H.order,
        "input_coords": list(x.coords),
        "restricted_coords": list(res.coords),
    }
    lines = [f"Res({list(x.coords)}) = {list(res.coords)} on the order-{H.order} subgroup"]
    if args.monomial:
        lhs = restrict_monomial(brauer_induction(x), H)
        rhs = brauer_induction(res)
        payload["restricted_element"] = lhs.to_json()
        payload["naturality_ok"] = lhs == rhs
        lines.append(f"res b(x) = {lhs}")
        lines.append(f"naturality res b = b res: {'ok' if lhs == rhs else 'FAILED'}")
    doc = _document(
        "restrict",
        {
            "group": Path(args.group).name,
            "subgroup": args.subgroup,
            "monomial": bool(args.monomial),
            **_selector_echo(args),
        },
        input_hash,
        payload,
    )
    _emit(doc, args.json, lines)
    return 0


def _parse_pair(G, poset, text: str):
    parts = text.split(";")
    if len(parts) != 2:
        raise InputError("pair selector must look like '<generators>;<character index>'")
    H = _parse_subgroup(G, parts[0])
    try:
        ci = int(parts[1])
    except ValueError:
        raise InputError("character index must be an integer") from None
    if H.element_set not in poset._sub_index:
        raise InputError("subgroup not found in the pair poset")
    si = poset._sub_index[H.element_set]
    chars = poset.characters[si]
    if not 0 <= ci < len(chars):
        raise InputError(f"character index must be in 0..{len(chars) - 1}")
    return poset.pairs[poset.pair_index(si, ci)]


def _cmd_moebius(args) -> int:
    G, _desc, input_hash = _load(args)
    poset = pair_poset(G)
    lower = _parse_pair(G, poset, args.lower)
    upper = _parse_pair(G, poset, args.upper)
    value = poset.moebius(lower.index, upper.index)
    payload = {
        "lower": lower.label(),
        "upper": upper.label(),
        "moebius": value,
    }
    doc = _document(
        "moebius",
        {"group": Path(args.group).name, "lower": args.lower, "upper": args.upper},
        input_hash,
        payload,
    )
    _emit(doc, args.json, [f"mu({lower.label()}, {upper.label()}) = {value}"])
    return 0


def _cmd_eps(args) -> int:
    chosen = [x is not None for x in (args.theta,)] + [args.twist, args.transfer]
    if sum(bool(c) for c in chosen) != 1:
        raise InputError("choose exactly one of --theta, --twist, --transfer")
    if args.theta is not None:
        value = theta_rank_one(args.theta)
        payload = {"n": args.theta, "value": value.to_json()}
        doc = _document("eps", {"theta": args.theta}, _hash_bytes(str(args.theta).encode()), payload)
        _emit(doc, args.json, [f"theta({args.theta}) = {value}"])
        return 0
    if args.group is None:
        raise InputError("--twist and --transfer need --group")
    G, desc, input_hash = _load(args)
    signs = desc.augmentation if desc.augmentation is not None else (1,) * len(G.generators)
    aug = AugmentedGroup(G, signs)
    if args.twist:
        value = twist_scalar(aug)
        payload = {
            "augmentation": "trivial" if aug.is_trivial else "surjective",
            "kernel_order": aug.kernel.order,
            "twist": value.to_json(),
        }
        doc = _document("eps", {"twist": True, "group": Path(args.group).name}, input_hash, payload)
        _emit(doc, args.json, [f"twist 1 - alpha*(eps) = {value}"])
        return 0
    value = transfer_unit(aug)
    payload = {"transfer": value.to_json()}
    doc = _document("eps", {"transfer": True, "group": Path(args.group).name}, input_hash, payload)
    _emit(doc, args.json, [f"tr(1) = {value}"])
    return 0


def _cmd_verify(args) -> int:
    report = run_verification(
        corpus_dir=args.corpus,
        name_filter=args.filter,
        bound=args.bound,
        parallel=not args.serial,
    )
    if args.json:
        doc = {
            "command": "verify",
            "version": __version__,
            "ok": report.ok,
            "warning": report.warning,
            "results": [
                {
                    "group": r.group,
                    "suite": r.suite,
                    "identity": r.identity,
                    "ok": r.ok,
                    "detail": r.detail,
                }
                for r in report.results
            ],
        }
        sys.stdout.write(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")
    else:
        print(report.render())
    return 0 if report.ok else 1


def _add_common(sub, group_required=True):
    if group_required:
        sub.add_argument("--group", required=True, help="group description file")
    else:
        sub.add_argument("--group", help="group description file")
    sub.add_argument("--json", action="store_true", help="emit a JSON result document")
    sub.add_argument("--bound", type=int, default=DEFAULT_BOUND, help="enumeration cap")


def _add_selector(sub):
    sub.add_argument("--irreducible", type=int, help="index into the character table")
    sub.add_argument("--coords", help="comma-separated integer coordinates")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="brind",
        description="Exact Brauer induction, character tables and Adams operations",
    )
    parser.add_argument("--version", action="version", version=f"brind {__version__}")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    sp = subs.add_parser("table", help="character table of a group file")
    _add_common(sp)
    sp.set_defaults(fn=_cmd_table)

    sp = subs.add_parser("brauer", help="explicit Brauer induction b_G with roundtrip check")
    _add_common(sp)
    _add_selector(sp)
    sp.set_defaults(fn=_cmd_brauer)

    sp = subs.add_parser("adams", help="Adams operation psi^n")
    _add_common(sp)
    _add_selector(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(fn=_cmd_adams)

    sp = subs.add_parser("lambda", help="lambda operation lambda^k")
    _add_common(sp)
    _add_selector(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.set_defaults(fn=_cmd_lambda)

    sp = subs.add_parser("restrict", help="restrict a character (and optionally b_G) to a subgroup")
    _add_common(sp)
    _add_selector(sp)
    sp.add_argument("--subgroup", required=True, help="generators, e.g. '(0 1),(2 3)'")
    sp.add_argument("--monomial", action="store_true", help="also restrict b_G and check naturality")
    sp.set_defaults(fn=_cmd_restrict)

    sp = subs.add_parser("moebius", help="Moebius value between two monomial pairs")
    _add_common(sp)
    sp.add_argument("--lower", required=True, help="pair selector '<gens>;<char index>'")
    sp.add_argument("--upper", required=True, help="pair selector '<gens>;<char index>'")
    sp.set_defaults(fn=_cmd_moebius)

    sp = subs.add_parser("eps", help="Burnside-ring values: rank-one theta, twist, transfer")
    _add_common(sp, group_required=False)
    sp.add_argument("--theta", type=int, help="rank-one section value theta(n)")
    sp.add_argument("--twist", action="store_true", help="twist scalar of the group's augmentation")
    sp.add_argument("--transfer", action="store_true", help="transfer unit tr(1)")
    sp.set_defaults(fn=_cmd_eps)

    sp = subs.add_parser("verify", help="replay all identities over the corpus")
    sp.add_argument("--corpus", help="directory of .grp files (default: built-in corpus)")
    sp.add_argument("--filter", help="only groups whose name contains this substring")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    sp.add_argument("--serial", action="store_true", help="disable the per-group thread pool")
    sp.set_defaults(fn=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except BrindError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
