"""Command line access to every layer of the package.

Subcommands mirror the library: ``oracle`` (brute-force partition counts),
``ideal`` (membership, enumeration, matrix-product generating functions),
``qdiff`` (solve and check the attached q-difference system), ``multisum``
(evaluate H, apply a relation, shift, run side-condition checks), ``prove``
(derive certificate trees and assemble the factorization), ``verify``
(numeric re-check of a proved factorization) and ``export`` (certificate
trees to DOT or JSON).

Every report is plain text followed by a blank line and one JSON object, so
output is both readable and machine-parsable.  Exit codes: 0 success or a
check that came back true, 1 a check that came back false, 2 usage or input
errors, 3 certificate search exhaustion.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import ideals, multisum, partitions, prover, qdiff
from .series import Series

CLI_Q_MAX = 25


def _emit(lines: list[str], payload: dict) -> None:
    for line in lines:
        print(line)
    print()
    print(json.dumps(payload, sort_keys=True))


def _series_payload(s: Series) -> dict:
    return {
        "x_max": s.x_max,
        "q_max": s.q_max,
        "terms": [[m, n, c] for (m, n), c in s.terms()],
        "text": s.render(),
    }


def _parse_beta(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise ValueError(f"bad beta {text!r}, expected comma-separated integers") from None


def _orders(args) -> tuple[int, int]:
    q_max = args.qmax
    x_max = args.xmax if args.xmax is not None else q_max
    return x_max, q_max


# -- oracle ---------------------------------------------------------------


def cmd_oracle(args) -> int:
    x_max, q_max = _orders(args)
    if args.predicate == "gap":
        if args.d is None or args.k is None:
            raise ValueError("gap oracle needs --d and --k")
        pred = lambda p: partitions.satisfies_gap(p, args.d, args.k)
        name = f"gap(d={args.d}, k={args.k})"
    else:
        pred = partitions.kr_i1_predicate
        name = "kr-i1"
    s = partitions.oracle_genfun(pred, q_max, x_max)
    _emit(
        [f"oracle {name}  qmax={q_max} xmax={x_max}", f"genfun = {s}"],
        {"command": "oracle", "predicate": name, "series": _series_payload(s)},
    )
    return 0


# -- ideal ----------------------------------------------------------------


def cmd_ideal_genfun(args) -> int:
    x_max, q_max = _orders(args)
    ideal = ideals.load_ideal(args.file)
    vec = ideals.ideal_genfun_vec(ideal, x_max, q_max)
    total = vec[0]
    for s in vec[1:]:
        total = total + s
    lines = [f"ideal {args.file}  K={ideal.K} S={ideal.S}  qmax={q_max} xmax={x_max}"]
    lines += [f"G_{k + 1} = {s}" for k, s in enumerate(vec)]
    lines.append(f"total = {total}")
    _emit(
        lines,
        {
            "command": "ideal-genfun",
            "K": ideal.K,
            "S": ideal.S,
            "components": [_series_payload(s) for s in vec],
            "total": _series_payload(total),
        },
    )
    return 0


def cmd_ideal_members(args) -> int:
    ideal = ideals.load_ideal(args.file)
    genfun, members = ideals.enumerate_members(ideal, args.qmax)
    lines = [f"ideal {args.file}  members of size <= {args.qmax}: {len(members)}"]
    lines += [f"  {partitions.format_partition(p)}" for p in members]
    lines.append(f"genfun = {genfun}")
    _emit(
        lines,
        {
            "command": "ideal-members",
            "count": len(members),
            "members": [partitions.format_partition(p) for p in members],
            "genfun": _series_payload(genfun),
        },
    )
    return 0


def cmd_ideal_contains(args) -> int:
    ideal = ideals.load_ideal(args.file)
    lam = partitions.parse_partition(args.partition)
    chain = ideals.contains(ideal, lam)
    if chain is None:
        _emit(
            [f"{partitions.format_partition(lam)} is not a member"],
            {"command": "ideal-contains", "member": False},
        )
        return 1
    rendered = [partitions.format_partition(p) for p in chain]
    _emit(
        [
            f"{partitions.format_partition(lam)} is a member",
            "chain: " + (" -> ".join(rendered) if rendered else "(empty)"),
        ],
        {"command": "ideal-contains", "member": True, "chain": rendered},
    )
    return 0


# -- qdiff ----------------------------------------------------------------


def _load_qdiff_input(path: str) -> tuple[qdiff.QDiffSystem, ideals.SpanOneIdeal | None]:
    with open(path) as fh:
        data = json.load(fh)
    if "pi" in data:
        ideal = ideals.ideal_from_json(data)
        return qdiff.QDiffSystem.from_ideal(ideal), ideal
    return qdiff.system_from_json(data), None


def cmd_qdiff_solve(args) -> int:
    x_max, q_max = _orders(args)
    system, _ = _load_qdiff_input(args.file)
    F = qdiff.solve(system, x_max, q_max)
    lines = [f"system {args.file}  K={system.K} S={system.S}  qmax={q_max} xmax={x_max}"]
    lines += [f"F_{k + 1} = {s}" for k, s in enumerate(F)]
    _emit(
        lines,
        {
            "command": "qdiff-solve",
            "K": system.K,
            "S": system.S,
            "components": [_series_payload(s) for s in F],
        },
    )
    return 0


def cmd_qdiff_check(args) -> int:
    x_max, q_max = _orders(args)
    system, ideal = _load_qdiff_input(args.file)
    F = qdiff.solve(system, x_max, q_max)
    ok_solve = qdiff.check_system(system, F)
    lines = [
        f"system {args.file}  K={system.K} S={system.S}  qmax={q_max} xmax={x_max}",
        f"solve satisfies the system: {ok_solve}",
    ]
    payload = {
        "command": "qdiff-check",
        "solve_satisfies_system": ok_solve,
    }
    ok_routes = None
    if ideal is not None:
        G = ideals.ideal_genfun_vec(ideal, x_max, q_max)
        F2 = qdiff.f_from_g(system, G)
        ok_routes = all(a.eq_upto(b) for a, b in zip(F, F2))
        lines.append(f"solve agrees with the walk-product route: {ok_routes}")
        payload["routes_agree"] = ok_routes
    ok = ok_solve and ok_routes is not False
    lines.append(f"result: {'PASS' if ok else 'FAIL'}")
    payload["ok"] = ok
    _emit(lines, payload)
    return 0 if ok else 1


# -- multisum -------------------------------------------------------------


def cmd_multisum_eval(args) -> int:
    x_max, q_max = _orders(args)
    p = multisum.load_profile(args.file)
    beta = _parse_beta(args.beta)
    s = multisum.eval_H(p, beta, x_max, q_max)
    label = "H(" + ",".join(map(str, beta)) + ")"
    _emit(
        [f"profile {args.file}  qmax={q_max} xmax={x_max}", f"{label} = {s}"],
        {"command": "multisum-eval", "beta": list(beta), "series": _series_payload(s)},
    )
    return 0


def cmd_multisum_rec(args) -> int:
    x_max, q_max = _orders(args)
    p = multisum.load_profile(args.file)
    beta = _parse_beta(args.beta)
    left, (xe, qe), right = multisum.rec_children(p, beta, args.coord)
    ok = multisum.verify_recurrence_numeric(p, beta, args.coord, x_max, q_max)

    def lab(b):
        return "H(" + ",".join(map(str, b)) + ")"

    weight = prover._weight_label(xe, qe)
    lines = [
        f"{lab(beta)} = {lab(left)} + {weight} * {lab(right)}   [coordinate {args.coord}]",
        f"verified to qmax={q_max} xmax={x_max}: {ok}",
    ]
    _emit(
        lines,
        {
            "command": "multisum-rec",
            "beta": list(beta),
            "coord": args.coord,
            "left": list(left),
            "weight": [xe, qe],
            "right": list(right),
            "verified": ok,
        },
    )
    return 0 if ok else 1


def cmd_multisum_shift(args) -> int:
    p = multisum.load_profile(args.file)
    beta = _parse_beta(args.beta)
    shifted = multisum.shift_beta(p, beta, args.shift)
    _emit(
        [f"beta {beta} shifted by S={args.shift} -> {shifted}"],
        {
            "command": "multisum-shift",
            "beta": list(beta),
            "S": args.shift,
            "shifted": list(shifted),
        },
    )
    return 0


def cmd_multisum_check(args) -> int:
    p = multisum.load_profile(args.file)
    beta = _parse_beta(args.beta)
    pos = multisum.check_positivity(p, beta)
    lines = [f"positivity of beta {beta}: {pos}"]
    payload = {"command": "multisum-check", "beta": list(beta), "positivity": pos}
    ok = pos
    if args.shift is not None:
        add = multisum.check_additional(p, args.shift)
        lines.append(f"divisibility conditions at S={args.shift}: {add}")
        payload["additional"] = add
        ok = ok and add
    lines.append(f"result: {'PASS' if ok else 'FAIL'}")
    payload["ok"] = ok
    _emit(lines, payload)
    return 0 if ok else 1


# -- prove / verify / export ----------------------------------------------


def _root_slug(beta) -> str:
    return "_".join(str(b) for b in beta)


def cmd_prove(args) -> int:
    x_max, q_max = _orders(args)
    p, S, betas = prover.load_system_spec(args.file)
    fs = prover.assemble_system(p, S, betas, args.max_expansions)
    groups = prover._group_indices(p, S, fs.betas)
    for root, tree in fs.certs.items():
        prover.validate_tree(p, tree, frozenset(groups))
    rows_ok = prover.verify_numeric(fs, x_max, q_max)

    lines = [f"system {args.file}  K={fs.K} S={S}  max expansions={args.max_expansions}"]
    for root, tree in sorted(fs.certs.items()):
        n = prover.expansions(tree)
        lines.append(f"certificate for H({','.join(map(str, root))}): {n} expansions, {n + 1} leaves")
    for b in sorted(set(fs.betas)):
        lines.append(f"positivity of beta {b}: {multisum.check_positivity(p, b)}")
    lines.append(f"divisibility conditions at S={S}: {multisum.check_additional(p, S)}")
    lines.append("U =")
    lines += ["  " + " ".join(str(e) for e in row) for row in fs.U]
    lines.append("V = " + ", ".join(prover._weight_label(xe, qe) for xe, qe in fs.V))
    lines.append(f"verification at qmax={q_max} xmax={x_max}: " +
                 ("all rows ok" if all(rows_ok) else f"failures in rows {[i + 1 for i, r in enumerate(rows_ok) if not r]}"))

    payload = {
        "command": "prove",
        "result": prover.system_result_to_json(fs),
        "positivity": {",".join(map(str, b)): multisum.check_positivity(p, b) for b in sorted(set(fs.betas))},
        "additional": multisum.check_additional(p, S),
        "rows_verified": rows_ok,
        "qmax": q_max,
        "xmax": x_max,
    }

    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        sysfile = outdir / "system.json"
        sysfile.write_text(json.dumps(prover.system_result_to_json(fs), sort_keys=True, indent=1) + "\n")
        written = [str(sysfile)]
        for root, tree in sorted(fs.certs.items()):
            doc = prover.cert_to_json(p, S, tree)
            base = outdir / f"cert_{_root_slug(root)}"
            (base.with_suffix(".cert.json")).write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n")
            (base.with_suffix(".dot")).write_text(prover.tree_to_dot(p, tree))
            written += [str(base.with_suffix(".cert.json")), str(base.with_suffix(".dot"))]
        lines += [f"wrote {w}" for w in written]
        payload["written"] = written

    _emit(lines, payload)
    return 0 if all(rows_ok) else 1


def _load_factorization(path: str) -> prover.FactorizationSystem:
    with open(path) as fh:
        data = json.load(fh)
    p = multisum.profile_from_json(data["profile"])
    S = int(data["S"])
    betas = tuple(tuple(int(b) for b in row) for row in data["betas"])
    if "U" in data and "V" in data:
        U = tuple(tuple(int(e) for e in row) for row in data["U"])
        V = tuple((int(m), int(n)) for m, n in data["V"])
        certs = {}
        for entry in data.get("certs", []):
            certs[tuple(int(b) for b in entry["root"])] = prover.tree_from_json(entry["tree"])
        return prover.FactorizationSystem(profile=p, S=S, betas=betas, U=U, V=V, certs=certs)
    return prover.assemble_system(p, S, list(betas))


def cmd_verify(args) -> int:
    x_max, q_max = _orders(args)
    fs = _load_factorization(args.file)
    rows_ok = prover.verify_numeric(fs, x_max, q_max)
    lines = [f"system {args.file}  K={fs.K} S={fs.S}  qmax={q_max} xmax={x_max}"]
    for k, ok in enumerate(rows_ok):
        beta = ",".join(map(str, fs.betas[k]))
        lines.append(f"row {k + 1}: H({beta}) == selected combination: {'ok' if ok else 'MISMATCH'}")
    good = all(rows_ok)
    lines.append(f"result: {'PASS' if good else 'FAIL'}")
    _emit(
        lines,
        {
            "command": "verify",
            "qmax": q_max,
            "xmax": x_max,
            "rows": rows_ok,
            "ok": good,
        },
    )
    return 0 if good else 1


def cmd_export(args) -> int:
    p, S, tree = prover.load_cert(args.file)
    if args.format == "dot":
        text = prover.tree_to_dot(p, tree)
    else:
        text = json.dumps(prover.cert_to_json(p, S, tree), sort_keys=True, indent=1) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        _emit(
            [f"wrote {args.out}"],
            {"command": "export", "format": args.format, "out": args.out},
        )
    else:
        sys.stdout.write(text)
    return 0


# -- parser ----------------------------------------------------------------


def _add_orders(sp, qmax_default=CLI_Q_MAX):
    sp.add_argument("--qmax", type=int, default=qmax_default, help="q truncation order")
    sp.add_argument("--xmax", type=int, default=None, help="x truncation order (default: qmax)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spanone",
        description="generating functions and factorization certificates "
        "for span-one linked partition ideals",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("oracle", help="brute-force partition generating functions")
    sp.add_argument("predicate", choices=["gap", "kr-i1"])
    sp.add_argument("--d", type=int, default=None, help="minimum difference")
    sp.add_argument("--k", type=int, default=None, help="distance at which the difference applies")
    _add_orders(sp)
    sp.set_defaults(func=cmd_oracle)

    ideal = sub.add_parser("ideal", help="span-one linked partition ideals")
    isub = ideal.add_subparsers(dest="subcommand", required=True)
    sp = isub.add_parser("genfun", help="matrix-product generating function vector")
    sp.add_argument("file")
    _add_orders(sp)
    sp.set_defaults(func=cmd_ideal_genfun)
    sp = isub.add_parser("members", help="enumerate members up to a size bound")
    sp.add_argument("file")
    sp.add_argument("--qmax", type=int, default=CLI_Q_MAX)
    sp.set_defaults(func=cmd_ideal_members)
    sp = isub.add_parser("contains", help="membership test with chain decomposition")
    sp.add_argument("file")
    sp.add_argument("partition", help="partition literal, e.g. 6+4+1 or empty")
    sp.set_defaults(func=cmd_ideal_contains)

    qd = sub.add_parser("qdiff", help="q-difference systems of ideals and digraphs")
    qsub = qd.add_subparsers(dest="subcommand", required=True)
    sp = qsub.add_parser("solve", help="unique power-series solution")
    sp.add_argument("file", help="ideal json or {A, weights, S} json")
    _add_orders(sp)
    sp.set_defaults(func=cmd_qdiff_solve)
    sp = qsub.add_parser("check", help="consistency of solve and the walk product")
    sp.add_argument("file")
    _add_orders(sp)
    sp.set_defaults(func=cmd_qdiff_check)

    ms = sub.add_parser("multisum", help="Nahm-type multi-sum series")
    msub = ms.add_subparsers(dest="subcommand", required=True)
    sp = msub.add_parser("eval", help="truncated evaluation of H(beta)")
    sp.add_argument("file")
    sp.add_argument("--beta", required=True)
    _add_orders(sp)
    sp.set_defaults(func=cmd_multisum_eval)
    sp = msub.add_parser("rec", help="two-term relation at a coordinate")
    sp.add_argument("file")
    sp.add_argument("--beta", required=True)
    sp.add_argument("--coord", type=int, required=True)
    _add_orders(sp)
    sp.set_defaults(func=cmd_multisum_rec)
    sp = msub.add_parser("shift", help="beta after substituting x -> x q^S")
    sp.add_argument("file")
    sp.add_argument("--beta", required=True)
    sp.add_argument("--shift", type=int, required=True)
    sp.set_defaults(func=cmd_multisum_shift)
    sp = msub.add_parser("check", help="positivity and divisibility conditions")
    sp.add_argument("file")
    sp.add_argument("--beta", required=True)
    sp.add_argument("--shift", type=int, default=None)
    sp.set_defaults(func=cmd_multisum_check)

    sp = sub.add_parser("prove", help="derive certificates and assemble U, V")
    sp.add_argument("file", help="json with profile, S and betas")
    sp.add_argument("--max-expansions", type=int, default=64)
    sp.add_argument("--out", default=None, help="directory for certificates and matrices")
    _add_orders(sp)
    sp.set_defaults(func=cmd_prove)

    sp = sub.add_parser("verify", help="numeric check of a (proved) factorization")
    sp.add_argument("file", help="system spec or prove output json")
    _add_orders(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("export", help="certificate tree to DOT or JSON")
    sp.add_argument("file", help="certificate json written by prove --out")
    sp.add_argument("--format", choices=["dot", "json"], required=True)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except prover.SearchExhausted as exc:
        print(f"search exhausted: {exc}", file=sys.stderr)
        return 3
    except (ValueError, LookupError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
