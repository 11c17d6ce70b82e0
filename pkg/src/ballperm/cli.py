"""``bp``: batch front end over the JSON formats.

Exit codes: 0 success, 1 domain error (bad values, impossible postselection,
malformed JSON), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from collections.abc import Mapping, Sequence
from typing import Any, TextIO

import numpy as np

from . import classical, encoded, irreps, scatter, state
from .config import check_size
from .numfmt import fmt_complex, fmt_real, parse_angle
from .perm import Perm, format_perm, identity, parse_perm, rank


class UsageError(Exception):
    pass


def _load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_circuit(path: str) -> state.Circuit:
    c = state.circuit_from_json(_load_json(path))
    check_size(c.n)
    return c


def emit_distribution(dist: Mapping[Perm, float], fmt: str, out: TextIO) -> None:
    """TSV sorted by rank with a trailing checksum line, or a JSON object."""
    if not dist:
        raise ValueError("empty distribution")
    items = sorted(dist.items(), key=lambda kv: rank(kv[0]))
    total = sum(p for _, p in items)
    if fmt == "json":
        json.dump({format_perm(w): p for w, p in items}, out)
        out.write("\n")
        return
    for w, p in items:
        out.write(f"{format_perm(w)}\t{fmt_real(p)}\n")
    out.write(f"sum\t{fmt_real(total)}\n")


def _json_out(obj: Any, out: TextIO) -> None:
    json.dump(obj, out)
    out.write("\n")


def _matrix_lines(m: np.ndarray, out: TextIO) -> None:
    for row in np.atleast_2d(m):
        out.write("\t".join(fmt_complex(x) for x in row) + "\n")


def _rng(args: argparse.Namespace) -> np.random.Generator:
    return np.random.default_rng(args.seed)


# -- verbs ---------------------------------------------------------------------


def cmd_simulate(args: argparse.Namespace, out: TextIO) -> int:
    c = _load_circuit(args.circuit)
    s0 = state.init_state(c.n, parse_perm(args.init) if args.init else identity(c.n))
    if args.shots is None:
        emit_distribution(state.distribution(c, s0), args.format, out)
        return 0
    samples = state.run_and_sample(c, s0, args.shots, _rng(args))
    counts = Counter(w for _, w in samples)
    if args.format == "json":
        _json_out({format_perm(w): counts[w] for w in sorted(counts, key=rank)}, out)
    else:
        for w in sorted(counts, key=rank):
            out.write(f"{format_perm(w)}\t{counts[w]}\n")
        out.write(f"shots\t{args.shots}\n")
    return 0


def cmd_amplitude(args: argparse.Namespace, out: TextIO) -> int:
    c = _load_circuit(args.circuit)
    out.write(fmt_complex(state.amplitude(c, parse_perm(args.bra), parse_perm(args.ket))) + "\n")
    return 0


def cmd_trace(args: argparse.Namespace, out: TextIO) -> int:
    c = _load_circuit(args.circuit)
    out.write(fmt_complex(state.trace(c)) + "\n")
    if args.debug:
        out.write(f"diagonal\t{fmt_complex(state.trace_diagonal(c))}\n")
    if args.samples:
        est = state.dqc1_estimate(c, args.samples, _rng(args))
        out.write(f"dqc1\t{fmt_complex(est)}\n")
    return 0


def cmd_scatter(args: argparse.Namespace, out: TextIO) -> int:
    cfg = scatter.ScatterConfig.from_json(_load_json(args.config))
    compiled = scatter.compile_trajectories(cfg)
    _json_out(
        {
            "circuit": state.circuit_to_json(compiled.circuit),
            "signature": list(compiled.signature),
            "events": [
                {"time": e.time, "pos": e.pos, "lines": [e.left, e.right], "z": e.rapidity}
                for e in compiled.events
            ],
        },
        out,
    )
    return 0


def cmd_gadget(args: argparse.Namespace, out: TextIO) -> int:
    if args.circuit:
        prog = scatter.compile_x_circuit_to_scattering(_load_circuit(args.circuit))
    elif args.z1 is not None and args.z2 is not None:
        prog = scatter.compile_x_gadget(args.z1, args.z2)
    else:
        raise UsageError("gadget needs --circuit or both --z1 and --z2")
    dist, simulated = scatter.program_distribution(prog)
    _json_out(
        {
            "circuit": state.circuit_to_json(prog.circuit),
            "initial_word": list(prog.initial_word),
            "theta": list(prog.theta),
            "success_probability": prog.success_probability,
            "simulated_success_probability": simulated,
        },
        out,
    )
    emit_distribution(dist, "tsv", out)
    return 0


def cmd_ybe(args: argparse.Namespace, out: TextIO) -> int:
    res = scatter.ybe_residual(args.x, args.y)
    out.write(f"residual\t{res:.12e}\n")
    ok = res < 1e-12
    out.write("OK\n" if ok else "FAIL\n")
    return 0 if ok else 1


def cmd_irrep(args: argparse.Namespace, out: TextIO) -> int:
    lam = irreps.parse_partition(args.shape)
    check_size(sum(lam))
    if args.circuit:
        m = irreps.irrep_unitary(_load_circuit(args.circuit), lam)
    elif args.k is not None:
        m = irreps.yy_transposition(lam, args.k).astype(complex)
    else:
        raise UsageError("irrep needs --circuit or --k")
    _matrix_lines(m, out)
    out.write(f"trace\t{fmt_complex(np.trace(m))}\n")
    return 0


def cmd_tableaux(args: argparse.Namespace, out: TextIO) -> int:
    lam = irreps.parse_partition(args.shape)
    check_size(sum(lam))
    for t in irreps.syt_enumerate(lam):
        _json_out(t.to_json(), out)
    return 0


def cmd_project(args: argparse.Namespace, out: TextIO) -> int:
    lam = irreps.parse_partition(args.shape)
    n = sum(lam)
    s = state.init_state(n, parse_perm(args.init) if args.init else identity(n))
    out.write(f"norm2\t{fmt_real(irreps.project_norm(s, lam))}\n")
    if not args.init:
        out.write(f"expected\t{fmt_real(irreps.project_identity_norm(lam))}\n")
    return 0


def _decision_line(d: classical.Decision) -> str:
    if d.accepted:
        return "YES\twitness=" + ",".join(str(k + 1) for k in (d.witness or ()))
    return "NO"


def cmd_classical(args: argparse.Namespace, out: TextIO) -> int:
    action = args.action
    if action == "yb":
        res = classical.classical_yb_check(args.x, args.y)
        out.write(f"distance\t{res:.12e}\n")
        return 0 if res < 1e-12 else 1
    if not args.program:
        raise UsageError(f"classical {action} needs --program")
    prog = classical.SwapProgram.from_json(_load_json(args.program))
    if action == "run":
        out.write(format_perm(classical.dball_run(prog)) + "\n")
        return 0
    if action == "dist":
        emit_distribution(classical.rball_exact_dist(prog), args.format, out)
        return 0
    if action == "sample":
        rng = _rng(args)
        counts = Counter(classical.rball_sample_many(prog, args.shots, rng))
        for w in sorted(counts, key=rank):
            out.write(f"{format_perm(w)}\t{counts[w]}\n")
        out.write(f"shots\t{args.shots}\n")
        return 0
    if not args.target:
        raise UsageError(f"classical {action} needs --target")
    target = parse_perm(args.target)
    if action == "decide":
        out.write(_decision_line(classical.ball_decide_bruteforce(prog, target)) + "\n")
    elif action == "adjstar":
        out.write(_decision_line(classical.ball_adj_star_decide(prog, target)) + "\n")
    elif action == "edp":
        inst = classical.build_edp_instance(prog, target)
        out.write(f"internal_nodes\t{len(prog.swaps)}\n")
        out.write(f"edges\t{len(inst.edges)}\n")
        out.write(f"path_systems\t{classical.count_edp_path_systems(inst)}\n")
    return 0


def cmd_wppp(args: argparse.Namespace, out: TextIO) -> int:
    obj = _load_json(args.instance)
    n = int(obj["n"])
    sets = obj["sets"]
    target = tuple(int(x) for x in obj["target"])
    direct = classical.wppp_brute(sets, target, n)
    reduced = classical.ball_decide_bruteforce(classical.wppp_reduce(sets, n), target)
    out.write(("YES" if direct else "NO") + "\n")
    out.write(f"reduction\t{'YES' if reduced else 'NO'}\n")
    return 0 if direct == bool(reduced) else 1


def cmd_encode_qubits(args: argparse.Namespace, out: TextIO) -> int:
    qc = encoded.QubitCircuit.from_json(_load_json(args.circuit))
    check_size(2 * qc.n)
    ball = encoded.compile_qubit_circuit(qc)
    zero = encoded.QubitState(qc.n, {"0" * qc.n: 1.0})
    final = state.apply_unitary_circuit(ball, encoded.encode_pairs(zero))
    decoded, leak = encoded.decode_pairs(final)
    target = encoded.simulate_qubits(qc, zero)
    keys = set(decoded.amps) | set(target.amps)
    tvd = 0.5 * sum(abs(abs(decoded.amplitude(k)) ** 2 - abs(target.amplitude(k)) ** 2) for k in keys)
    _json_out({"circuit": state.circuit_to_json(ball), "leakage": leak, "tvd": tvd}, out)
    for k in sorted(keys):
        out.write(f"{k}\t{fmt_real(abs(decoded.amplitude(k)) ** 2)}\n")
    if args.samp_tqp:
        samples = encoded.samp_tqp_run(qc, args.samp_tqp, _rng(args))
        same = sum(x == y for x, y in samples)
        out.write(f"samp_tqp_equal_fraction\t{fmt_real(same / len(samples))}\n")
        out.write(f"normalized_trace\t{fmt_complex(encoded.samp_tqp_overlap(qc))}\n")
    return 0


# -- parser --------------------------------------------------------------------


def _angle(text: str) -> float:
    try:
        return parse_angle(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p = argparse.ArgumentParser(prog="bp", description="Ball-permuting circuit toolkit.")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("simulate", parents=[common], help="exact distribution or samples of a circuit")
    s.add_argument("--circuit", required=True)
    s.add_argument("--init", help="initial word, e.g. 2,1,3 (default identity)")
    s.add_argument("--shots", type=_positive)
    s.add_argument("--format", choices=("tsv", "json"), default="tsv")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("amplitude", parents=[common], help="<bra|C|ket>")
    s.add_argument("--circuit", required=True)
    s.add_argument("--bra", required=True)
    s.add_argument("--ket", required=True)
    s.set_defaults(func=cmd_amplitude)

    s = sub.add_parser("trace", parents=[common], help="Tr(C)")
    s.add_argument("--circuit", required=True)
    s.add_argument("--debug", action="store_true", help="also sum the diagonal directly")
    s.add_argument("--samples", type=_positive, help="also print a Monte-Carlo estimate of Tr(C)/n!")
    s.set_defaults(func=cmd_trace)

    s = sub.add_parser("scatter", parents=[common], help="compile a scattering configuration")
    s.add_argument("--config", required=True)
    s.set_defaults(func=cmd_scatter)

    s = sub.add_parser("gadget", parents=[common], help="postselected gadget or full scattering compilation")
    s.add_argument("--z1", type=float)
    s.add_argument("--z2", type=float)
    s.add_argument("--circuit")
    s.set_defaults(func=cmd_gadget)

    s = sub.add_parser("ybe", parents=[common], help="Yang-Baxter residual")
    s.add_argument("--x", type=float, required=True)
    s.add_argument("--y", type=float, required=True)
    s.set_defaults(func=cmd_ybe)

    s = sub.add_parser("irrep", parents=[common], help="image of a circuit in an irrep")
    s.add_argument("--shape", required=True)
    s.add_argument("--circuit")
    s.add_argument("--k", type=int, help="show the adjacent transposition (k, k+1) instead")
    s.set_defaults(func=cmd_irrep)

    s = sub.add_parser("tableaux", parents=[common], help="standard tableaux in canonical order")
    s.add_argument("--shape", required=True)
    s.set_defaults(func=cmd_tableaux)

    s = sub.add_parser("project", parents=[common], help="squared norm of an isotypic projection")
    s.add_argument("--shape", required=True)
    s.add_argument("--init", help="basis word to project (default identity)")
    s.set_defaults(func=cmd_project)

    s = sub.add_parser("classical", parents=[common], help="classical ball-permuting oracles")
    s.add_argument("action", choices=("run", "sample", "dist", "decide", "adjstar", "edp", "yb"))
    s.add_argument("--program")
    s.add_argument("--target")
    s.add_argument("--shots", type=_positive, default=1000)
    s.add_argument("--format", choices=("tsv", "json"), default="tsv")
    s.add_argument("--x", type=float, default=1.0)
    s.add_argument("--y", type=float, default=1.0)
    s.set_defaults(func=cmd_classical)

    s = sub.add_parser("wppp", parents=[common], help="decide a products-of-permutations instance")
    s.add_argument("--instance", required=True)
    s.set_defaults(func=cmd_wppp)

    s = sub.add_parser("encode-qubits", parents=[common], help="compile a real qubit circuit to label pairs")
    s.add_argument("--circuit", required=True)
    s.add_argument("--samp-tqp", type=_positive, metavar="SHOTS")
    s.set_defaults(func=cmd_encode_qubits)
    return p


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"bp: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, TypeError, ArithmeticError, IndexError) as exc:
        print(f"bp: error: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
