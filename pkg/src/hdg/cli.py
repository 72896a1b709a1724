"""Command-line entry point: ``hdg solve|generate|play|playout|verify|tournament|extremal``.

Exit codes: 0 success, 1 a check failed, 2 input error, 3 precondition error.
The default seed comes from the ``HDG_SEED`` environment variable (else 0).
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from pathlib import Path

from . import solver as S
from .covergame import (Player, Variant, apply_move, build, initial_state, is_terminal,
                        legal_moves, uncovered)
from .errors import HdgError, IllegalMoveError, InputError, PreconditionError
from .generators import AlonInstance, GenSpec, generate
from .hypergraph import Hypergraph, from_mask, read_hg, serialize, two_section
from .strategies import (WeightState, audit_lemmas, compute_residual, detect_phase, dominator_greedy,
                         dominator_optimal, format_trace, is_gstar, playout, staller_greedy_min,
                         staller_grid, staller_optimal, staller_pendant, staller_random)
from .verify import SUITES, extremal_search, random_corpus, run_suite, summary, write_csv

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_PRECONDITION = 0, 1, 2, 3


def default_seed() -> int:
    raw = os.environ.get("HDG_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"HDG_SEED must be an integer, got {raw!r}") from None


def _out(args):
    return open(args.out, "w", newline="") if getattr(args, "out", None) else sys.stdout


def _vertex_list(text: str) -> list[int]:
    if not text.strip():
        return []
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise InputError(f"expected comma-separated vertices, got {text!r}") from None


# --- solve -------------------------------------------------------------------------------

_NAMES = {Variant.DOMINATION: "gamma_g", Variant.TOTAL: "gamma_tg", Variant.TRANSVERSAL: "tau_g"}


def cmd_solve(args) -> int:
    H = read_hg(args.file)
    variant = Variant.parse(args.variant)
    sysm = build(H, variant)
    firsts = [Player.DOMINATOR, Player.STALLER] if args.both_starts else [Player.parse(args.first)]
    given = _vertex_list(args.given) if args.given is not None else None
    if given is not None and variant is not Variant.DOMINATION:
        raise InputError("--given applies to the domination variant only")
    parts, lines = [], []
    solver = S.Solver(sysm)
    for first in firsts:
        state = initial_state(sysm, first, given or ())
        val = solver.solve(state)
        name = _NAMES[variant] + ("'" if first is Player.STALLER else "")
        if given is not None:
            name += f"(H|{','.join(map(str, sorted(set(given))))})"
        parts.append(f"{name}={val.length}")
        if not args.no_line:
            lines.append(f"line[{first.value}-start]: " + " ".join(map(str, solver.optimal_line(state))))
    print(" ".join(parts))
    for line in lines:
        print(line)
    if args.static:
        stat = [f"gamma={S.gamma(H)}", f"tau={S.tau(H)}"]
        stat.append(f"gamma_t={S.gamma_t(H)}" if all(H.open_masks) else "gamma_t=undefined")
        print(" ".join(stat))
    if args.stats:
        m = solver.memo
        print(f"memo entries={len(m)} hits={m.hits} misses={m.misses} hit_rate={m.hit_rate:.3f}")
    return EXIT_OK


# --- generate ----------------------------------------------------------------------------

def cmd_generate(args) -> int:
    params = {k: getattr(args, k) for k in ("k", "t", "n", "m", "min_size", "max_size")
              if getattr(args, k) is not None}
    if args.isolate_free:
        params["isolate_free"] = 1
    seed = args.seed
    if seed is None and args.family in ("alon", "random", "random-mixed"):
        seed = default_seed()
    H, comments = generate(GenSpec(args.family, params, seed))
    text = serialize(H, comments)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --- strategies by name --------------------------------------------------------------------

def _alon_from_comments(path) -> tuple:
    pendants = None
    for line in Path(path).read_text().splitlines():
        if line.startswith("# pendants "):
            pendants = tuple(int(x) for x in line.split()[2:])
    return pendants


def make_strategy(name: str, side: Player, seed: int, path=None):
    name = name.strip()
    if side is Player.DOMINATOR:
        if name == "greedy":
            return dominator_greedy()
        if name == "optimal":
            return dominator_optimal()
        raise InputError(f"unknown Dominator strategy {name!r} (greedy, optimal)")
    if name == "random":
        return staller_random(seed)
    if name == "optimal":
        return staller_optimal()
    if name == "greedy-min":
        return staller_greedy_min()
    if name.startswith("grid:"):
        return staller_grid(int(name.split(":", 1)[1]))
    if name == "pendant":
        pendants = _alon_from_comments(path) if path else None
        if not pendants:
            raise InputError("the pendant strategy needs a file generated with --family alon")
        H = read_hg(path)
        core = min(pendants)
        return staller_pendant(AlonInstance(H, pendants, core))
    raise InputError(f"unknown Staller strategy {name!r} (random, optimal, greedy-min, grid:K, pendant)")


# --- play (interactive) --------------------------------------------------------------------

def _colors_line(G: Hypergraph, history) -> str:
    if not is_gstar(G):
        return ""
    view = compute_residual(G, history)
    marks = {"white": "W", "blue": "B", "red": "R"}
    return "colors: " + " ".join(f"{v}{marks[c.value]}" for v, c in enumerate(view.colors))


def cmd_play(args, stdin=None, stdout=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    H = read_hg(args.file)
    G = two_section(H)
    sysm = build(G, Variant.DOMINATION)
    human = Player.parse(args.human)
    engine_side = human.other
    if args.engine == "greedy":
        if engine_side is not Player.DOMINATOR:
            raise PreconditionError("the greedy engine plays Dominator only")
        if not is_gstar(G):
            raise PreconditionError("the greedy engine needs every vertex and edge in a triangle")
    engine = make_strategy(args.engine, engine_side, args.seed if args.seed is not None else default_seed())
    state = initial_state(sysm, Player.parse(args.first))
    ws = WeightState()
    turn = 1 if state.to_move is Player.DOMINATOR else 0

    def say(msg=""):
        stdout.write(msg + "\n")
        stdout.flush()

    say(f"game on n={G.n}; you are {'Dominator' if human is Player.DOMINATOR else 'Staller'}; 'quit' to stop")
    while not is_terminal(sysm, state):
        if state.to_move is human:
            say(f"legal: {' '.join(map(str, legal_moves(sysm, state)))}")
            stdout.write("your move> ")
            stdout.flush()
            raw = stdin.readline()
            if not raw or raw.strip().lower() in ("quit", "exit", "q"):
                say("")
                say(f"stopped after {len(state.history)} moves: {' '.join(map(str, state.history))}")
                return EXIT_OK
            try:
                v = int(raw.strip())
                state = apply_move(sysm, state, v)
            except ValueError:
                say(f"not a vertex: {raw.strip()!r}")
                continue
            except IllegalMoveError as exc:
                if 0 <= v < sysm.n_movers:
                    say(f"illegal: N[{v}] = {from_mask(sysm.covers[v])} is already dominated; "
                        f"undominated: {' '.join(map(str, uncovered(sysm, state)))}")
                else:
                    say(f"illegal: {exc}")
                continue
        else:
            view = None
            if is_gstar(G):
                view = compute_residual(G, state.history)
                if engine_side is Player.DOMINATOR and ws.phase == 1 and not detect_phase(view):
                    ws.enter_phase2(turn - 1, view)
            v = engine.choose(sysm, state, view, ws)
            state = apply_move(sysm, state, v)
            say(f"engine plays {v}")
        turn += 1
        line = _colors_line(G, state.history)
        if line:
            say(line)
    say(f"game over after {len(state.history)} moves: {' '.join(map(str, state.history))}")
    return EXIT_OK


# --- playout --------------------------------------------------------------------------------

def cmd_playout(args) -> int:
    H = read_hg(args.file)
    seed = args.seed if args.seed is not None else default_seed()
    dom = make_strategy(args.dom, Player.DOMINATOR, seed)
    stall = make_strategy(args.stall, Player.STALLER, seed, args.file)
    p = playout(H, dom, stall, Player.parse(args.first))
    out = _out(args)
    out.write(format_trace(p))
    code = EXIT_OK
    if args.audit:
        report = audit_lemmas(p)
        out.write("\n".join(f"# audit {c}" for c in report.checks) + "\n")
        code = EXIT_OK if report.ok else EXIT_FAIL
    if out is not sys.stdout:
        out.close()
    return code


# --- verify / tournament / extremal ---------------------------------------------------------

def cmd_verify(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    results = run_suite(args.suite, seed=seed, n_max=args.n_max, count=args.count)
    out = _out(args)
    write_csv(results, out)
    if out is not sys.stdout:
        out.close()
    print(f"# suite={args.suite} seed={seed} n_max={args.n_max} count={args.count}", file=sys.stderr)
    print(summary(results), file=sys.stderr)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


TOURNAMENT_COLUMNS = ("instance", "n", "dominator", "staller", "first", "length", "bound_5n9",
                      "within_bound", "audit")


def cmd_tournament(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    instances = []
    for path in args.files:
        instances.append((read_hg(path), str(path)))
    if args.gen_count:
        for H, prov in random_corpus(args.gen_count, args.n_max, seed):
            instances.append((H, prov))
    if not instances:
        raise InputError("empty instance set: pass .hg files or --gen-count")
    doms = [d for d in args.dom.split(",") if d]
    stalls = [s for s in args.stall.split(",") if s]
    firsts = [Player.DOMINATOR, Player.STALLER] if args.both_starts else [Player.DOMINATOR]
    out = _out(args)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(TOURNAMENT_COLUMNS)
    means: dict = {}
    failed = False
    for H, prov in instances:
        G = two_section(H)
        bound = 5 * G.n // 9
        for dname in doms:
            for sname in stalls:
                for first in firsts:
                    if dname == "greedy" and not is_gstar(G):
                        w.writerow([prov, G.n, dname, sname, first.value, "", bound, "", "skipped"])
                        continue
                    p = playout(G, make_strategy(dname, Player.DOMINATOR, seed),
                                make_strategy(sname, Player.STALLER, seed), first)
                    audit = ""
                    if dname == "greedy":
                        rep = audit_lemmas(p)
                        audit = "pass" if rep.ok else "fail"
                        failed |= not rep.ok
                    within = p.length <= bound
                    if dname == "greedy" and not within:
                        failed = True
                    w.writerow([prov, G.n, dname, sname, first.value, p.length, bound,
                                "yes" if within else "no", audit])
                    means.setdefault((dname, sname, first.value), []).append(p.length)
    if out is not sys.stdout:
        out.close()
    for (d, s, f), lens in sorted(means.items()):
        print(f"# {d} vs {s} ({f}-start): mean length {sum(lens) / len(lens):.3f} over {len(lens)}",
              file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_extremal(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    try:
        res = extremal_search(args.n_max, args.k, args.mode, args.budget, seed)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    print(res)
    if res.witness is not None:
        sys.stdout.write(serialize(res.witness, [f"extremal witness ratio={res.best_ratio}"]))
    for v in res.bound_violations:
        print(f"VIOLATION {v}")
    return EXIT_FAIL if res.bound_violations else EXIT_OK


# --- parser ----------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hdg", description="Domination game on hypergraphs: exact values, "
                                 "strategies and bound checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="exact game values of an .hg instance")
    p.add_argument("file")
    p.add_argument("--variant", default="dom", help="dom | total | transversal (default dom)")
    p.add_argument("--first", default="dom", help="who starts: dom | staller")
    p.add_argument("--both-starts", action="store_true", help="report both the D-start and S-start values")
    p.add_argument("--given", help="comma-separated vertices declared already dominated")
    p.add_argument("--static", action="store_true", help="also print gamma, tau and gamma_t")
    p.add_argument("--no-line", action="store_true", help="omit the optimal line of play")
    p.add_argument("--stats", action="store_true", help="print memo table statistics")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("generate", help="write an instance family as .hg")
    p.add_argument("--family", required=True, help="hk1 | hk2 | fcomp | alon | random | random-mixed")
    for name in ("k", "t", "n", "m", "seed"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--min-size", type=int)
    p.add_argument("--max-size", type=int)
    p.add_argument("--isolate-free", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("play", help="interactive game against an engine")
    p.add_argument("file")
    p.add_argument("--engine", default="optimal", help="optimal | greedy")
    p.add_argument("--human", default="staller", help="side you play: dominator | staller")
    p.add_argument("--first", default="dom")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("playout", help="play two strategies against each other and print the trace")
    p.add_argument("file")
    p.add_argument("--dom", default="greedy")
    p.add_argument("--stall", default="optimal")
    p.add_argument("--first", default="dom")
    p.add_argument("--seed", type=int)
    p.add_argument("--audit", action="store_true", help="append the lemma audit; exit 1 on failure")
    p.add_argument("--out")
    p.set_defaults(func=cmd_playout)

    p = sub.add_parser("verify", help="run a check suite; CSV columns: " + ",".join(
        ("check_id", "instance", "values", "bound", "verdict", "witness", "note")))
    p.add_argument("--suite", default="all", choices=SUITES)
    p.add_argument("--seed", type=int)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--count", type=int, default=30, help="random instances per sub-suite")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("tournament", help="cross-play strategy pairs; CSV columns: "
                       + ",".join(TOURNAMENT_COLUMNS))
    p.add_argument("files", nargs="*")
    p.add_argument("--dom", default="greedy")
    p.add_argument("--stall", default="random,optimal")
    p.add_argument("--both-starts", action="store_true")
    p.add_argument("--gen-count", type=int, default=0, help="add this many random 3-uniform instances")
    p.add_argument("--n-max", type=int, default=12)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_tournament)

    p = sub.add_parser("extremal", help="search small instances for a large gamma_g/n")
    p.add_argument("--n-max", type=int, default=7)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--mode", default="random", choices=("random", "exhaustive"))
    p.add_argument("--budget", type=int, default=200)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_extremal)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except HdgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
