"""Command-line interface: eval, bench, gen, replay, serve."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Optional

from .domain import SceneValidationError
from .generator import GeneratorParams, InvalidRates, generate_synthetic_corpus
from .harness import (Scenario, benchmark_runtime, evaluate, load_corpus,
                      render_benchmark_comparison, resolve_scene, save_corpus)
from .replay import RESOLVERS, SessionRuntime, TurnOutcome
from .scoring import ResolverConfig, TemporalMode

EXIT_BAD_FLAGS = 1
EXIT_VALIDATION = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse defaults to exit code 2
        _diagnostic("bad-flags", message)
        raise SystemExit(EXIT_BAD_FLAGS)


def _diagnostic(code: str, detail: Any) -> None:
    sys.stderr.write(json.dumps({"error": code, "detail": detail}) + "\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="mmref", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--temporal", choices=[m.value for m in TemporalMode],
                       default=TemporalMode.ORDERING.value)
        p.add_argument("--tau-ms", type=float, default=1000.0)
        p.add_argument("--ablate-cognitive", action="store_true")
        p.add_argument("--renormalize-table", action="store_true")

    p_eval = sub.add_parser("eval", help="replay a corpus and report accuracy by category")
    p_eval.add_argument("--corpus", required=True)
    p_eval.add_argument("--resolver", choices=sorted(RESOLVERS), default="greedy")
    p_eval.add_argument("--out", help="write the JSON report here")
    add_config_flags(p_eval)

    p_bench = sub.add_parser("bench", help="average resolver wall time per input")
    p_bench.add_argument("--corpus", required=True)
    p_bench.add_argument("--reps", type=int, default=1000)
    p_bench.add_argument("--resolver", action="append", choices=sorted(RESOLVERS),
                         help="repeatable; default compares greedy and graph")
    add_config_flags(p_bench)

    p_gen = sub.add_parser("gen", help="generate a synthetic corpus")
    p_gen.add_argument("--out", required=True)
    p_gen.add_argument("--turns", type=int, default=100)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--mix", help="e.g. simple-one-one=0.7,complex=0.3")
    p_gen.add_argument("--ambiguity", type=float, default=0.15)
    p_gen.add_argument("--gesture-first", type=float, default=0.85)
    p_gen.add_argument("--overlap", type=float, default=0.48)

    p_replay = sub.add_parser("replay", help="replay one scenario file verbosely")
    p_replay.add_argument("--scenario", required=True)
    p_replay.add_argument("--resolver", choices=sorted(RESOLVERS), default="greedy")
    p_replay.add_argument("--trace", action="store_true",
                          help="print per-stage score matrices")
    add_config_flags(p_replay)

    p_serve = sub.add_parser("serve", help="run the HTTP session service")
    p_serve.add_argument("--scene", default=os.environ.get("MMREF_SCENE", "golden"))
    p_serve.add_argument("--addr", default=os.environ.get("MMREF_ADDR", "127.0.0.1:8077"))
    return parser


def _config_from_args(args: argparse.Namespace) -> ResolverConfig:
    return ResolverConfig(
        temporal_mode=TemporalMode(args.temporal),
        tau_ms=args.tau_ms,
        ablate_cognitive=args.ablate_cognitive,
        renormalize_table=args.renormalize_table,
    )


def _load_corpus_or_exit(source: str) -> list[Scenario]:
    try:
        return load_corpus(source)
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        _diagnostic("corpus-load", str(exc))
        raise SystemExit(EXIT_VALIDATION)


def _cmd_eval(args: argparse.Namespace) -> int:
    corpus = _load_corpus_or_exit(args.corpus)
    config = _config_from_args(args)
    base = Path(args.corpus).resolve().parent if Path(args.corpus).exists() else None
    try:
        report = evaluate(args.resolver, corpus, config=config, base_dir=base)
    except SceneValidationError as exc:
        _diagnostic("scene-validation", [p.code for p in exc.problems])
        return EXIT_VALIDATION
    print(report.render_table())
    if args.out:
        Path(args.out).write_text(
            json.dumps(report.as_dict(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8")
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    corpus = _load_corpus_or_exit(args.corpus)
    config = _config_from_args(args)
    base = Path(args.corpus).resolve().parent if Path(args.corpus).exists() else None
    resolvers = args.resolver or ["greedy", "graph"]
    reports = [benchmark_runtime(name, corpus, args.reps, config=config, base_dir=base)
               for name in resolvers]
    print(render_benchmark_comparison(reports))
    print(json.dumps([r.as_dict() for r in reports], indent=2, sort_keys=True))
    return 0


def _parse_mix(raw: Optional[str]) -> Optional[dict[str, float]]:
    if not raw:
        return None
    mix = {}
    for part in raw.split(","):
        name, _, value = part.partition("=")
        mix[name.strip()] = float(value)
    return mix


def _cmd_gen(args: argparse.Namespace) -> int:
    try:
        params = GeneratorParams(
            turns=args.turns, seed=args.seed, mix=_parse_mix(args.mix),
            ambiguity_rate=args.ambiguity, gesture_first_rate=args.gesture_first,
            overlap_rate=args.overlap)
        corpus = generate_synthetic_corpus(params)
    except (InvalidRates, ValueError) as exc:
        _diagnostic("invalid-rates", str(exc))
        return EXIT_BAD_FLAGS
    save_corpus(corpus, args.out)
    print(f"wrote {len(corpus)} scenarios ({args.turns} turns) to {args.out}")
    return 0


def _format_matrix(stage) -> list[str]:
    matrix = stage.matrix
    stars = set(stage.stars)
    header = "  {:<22}".format("candidate") + "".join(
        f"{(e.surface or '(empty)')[:18]:>20}" for e in matrix.cols)
    lines = [f"{stage.name} matrix (* marks the chosen cell):", header]
    for i, cand in enumerate(matrix.rows):
        label = cand.object.id
        if cand.gesture_order_index is not None:
            label += f" @{cand.gesture_order_index}"
        label += f" p={cand.selection_probability:.3f}"
        cells = "".join(
            f"{matrix.cells[i][j]:>19.4f}{'*' if (i, j) in stars else ' '}"
            for j in range(len(matrix.cols)))
        lines.append(f"  {label:<22}" + cells)
    return lines


def _print_outcome(outcome: TurnOutcome, trace: bool) -> None:
    turn = outcome.turn
    words = " ".join(t.text for t in turn.tokens)
    v = outcome.vectors
    print(f"turn {outcome.turn_number} [{outcome.category}] "
          f"tokens={words!r} gestures={len(turn.gestures)}")
    print(f"  vectors: g={len(v.g)} f={len(v.f)} d={len(v.d)} r={len(v.r)}")
    if trace and outcome.trace is not None:
        for stage in outcome.trace.stages:
            for line in _format_matrix(stage):
                print("  " + line)
            for index, group in sorted(stage.assigned.items()):
                ids = ", ".join(a.object_id for a in group)
                print(f"  stage {stage.name}: expression {index} <- {ids}")
        for index, group in sorted(outcome.trace.identifier_assigned.items()):
            ids = ", ".join(a.object_id for a in group)
            print(f"  identifier lookup: expression {index} <- {ids}")
    for index, group in sorted(outcome.result.assignments.items()):
        parts = ", ".join(f"{a.object_id} ({a.source}, {a.score:.4f})" for a in group)
        print(f"  resolved {index}: {parts}")
    for index in outcome.result.unresolved:
        reason = outcome.result.reasons.get(index, "")
        print(f"  unresolved {index}: {reason}")
    print(f"  focus -> {', '.join(sorted(outcome.focus_after)) or '(empty)'}")


def _cmd_replay(args: argparse.Namespace) -> int:
    scenarios = _load_corpus_or_exit(args.scenario)
    config = _config_from_args(args)
    base = Path(args.scenario).resolve().parent if Path(args.scenario).exists() else None
    for scenario in scenarios:
        try:
            scene = resolve_scene(scenario.scene_name, base)
        except (SceneValidationError, OSError, KeyError) as exc:
            _diagnostic("scene-validation", str(exc))
            return EXIT_VALIDATION
        print(f"scenario {scenario.scenario_id} (scene {scenario.scene_name})")
        runtime = SessionRuntime(scene, args.resolver, config=config,
                                 with_trace=args.trace)
        for event in scenario.events:
            finalized = runtime.post_event(event)
            if finalized is not None:
                _print_outcome(finalized, args.trace)
        finalized = runtime.finalize_pending()
        if finalized is not None:
            _print_outcome(finalized, args.trace)
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    try:
        scene = resolve_scene(args.scene)
    except (SceneValidationError, OSError, KeyError) as exc:
        _diagnostic("scene-validation", str(exc))
        return EXIT_VALIDATION
    host, _, port = args.addr.partition(":")
    app = create_app(scene)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8077))
    return 0


_COMMANDS = {
    "eval": _cmd_eval,
    "bench": _cmd_bench,
    "gen": _cmd_gen,
    "replay": _cmd_replay,
    "serve": _cmd_serve,
}


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    return _COMMANDS[args.command](args)


if __name__ == "__main__":
    raise SystemExit(main())
