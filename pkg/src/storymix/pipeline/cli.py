"""Command-line interface: generate, refine, render, serve, eval-iea."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..backends.registry import load_config
from ..errors import StorymixError
from ..mix import write_wav
from ..refine import evaluate_iea, execute_refinement, load_corpus, reference_corpus
from .orchestrate import run_pipeline
from .project import EngineConfig, Project
from .registryless import gateway_for_project


def _load_engine_config(path) -> EngineConfig:
    return EngineConfig.from_dict(load_config(path)) if path else EngineConfig()


def cmd_generate(args) -> int:
    if args.prompt_file:
        prompt = Path(args.prompt_file).read_text().strip()
    elif args.prompt:
        prompt = args.prompt
    else:
        print("error: provide --prompt or --prompt-file", file=sys.stderr)
        return 2
    config = _load_engine_config(args.config)
    project = run_pipeline(prompt=prompt, root=args.out, project_id=args.project_id,
                           config=config, resume=args.resume)
    summary = project.summary()
    print(json.dumps(summary, indent=2, sort_keys=True))
    print(f"master: {project.render_path()}", file=sys.stderr)
    return 0


def cmd_refine(args) -> int:
    project = Project(Path(args.project))
    project.gateway = gateway_for_project(project.config)
    if project.last_render() is None and project.script_versions():
        project.rerender()
    round_ = execute_refinement(project, args.instruction, cursor_time=args.cursor,
                                mode=args.mode)
    if round_.no_parse:
        for item in round_.parse.unparsed:
            print(f"could not apply: {item.text!r} ({item.reason})", file=sys.stderr)
        for item in round_.rejected:
            print(f"rejected: {item.reason}", file=sys.stderr)
        return 1
    print(json.dumps({
        "version": round_.new_version,
        "applied": len(round_.edit.applied),
        "rejected": len(round_.edit.rejected),
        "regenerated": round_.edit.regen_plan,
        "render": str(project.render_path(round_.new_version)),
    }, indent=2, sort_keys=True))
    return 0


def cmd_render(args) -> int:
    project = Project(Path(args.project))
    result = project.rerender(args.version)
    out = Path(args.out) if args.out else \
        project.path / "renders" / f"export_v{args.version or project.current_version:04d}.wav"
    write_wav(out, result.master, args.bit_depth)
    print(out)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    host, _, port = args.bind.partition(":")
    app = create_app(args.project_root, frontend_dist=args.frontend)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8787), log_level="info")
    return 0


def cmd_eval_iea(args) -> int:
    items = load_corpus(args.corpus) if args.corpus else reference_corpus()
    gateway = gateway_for_project(EngineConfig()) if args.mode == "backend_llm" else None
    report = evaluate_iea(items, mode=args.mode, gateway=gateway)
    print(report.table())
    if args.report:
        Path(args.report).write_text(json.dumps({
            "overall_accuracy": report.overall_accuracy,
            "by_category": {
                cat: {"total": s.total, "correct": s.correct, "failures": s.failures}
                for cat, s in report.by_category.items()
            },
        }, indent=2, sort_keys=True) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="storymix",
                                     description="audio story production engine")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="run the full pipeline from a prompt")
    p.add_argument("--prompt")
    p.add_argument("--prompt-file")
    p.add_argument("--config", help="engine config JSON")
    p.add_argument("--out", required=True, help="project root directory")
    p.add_argument("--project-id")
    p.add_argument("--resume", action="store_true", help="resume an interrupted run")
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("refine", help="apply a natural-language edit to a project")
    p.add_argument("--project", required=True)
    p.add_argument("--instruction", required=True)
    p.add_argument("--cursor", type=float, help="cursor time in seconds for 'here'")
    p.add_argument("--mode", choices=["grammar", "backend_llm"], default="grammar")
    p.set_defaults(fn=cmd_refine)

    p = sub.add_parser("render", help="re-render a project master")
    p.add_argument("--project", required=True)
    p.add_argument("--version", type=int)
    p.add_argument("--bit-depth", choices=["float32", "pcm16"], default="float32")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_render)

    p = sub.add_parser("serve", help="serve the HTTP API (and studio UI if built)")
    p.add_argument("--project-root", required=True)
    p.add_argument("--bind", default="127.0.0.1:8787")
    p.add_argument("--frontend", help="path to frontend dist directory")
    p.set_defaults(fn=cmd_serve)

    p = sub.add_parser("eval-iea", help="score instruction execution accuracy")
    p.add_argument("--corpus", help="corpus JSON (defaults to the shipped corpus)")
    p.add_argument("--mode", choices=["grammar", "backend_llm"], default="grammar")
    p.add_argument("--report", help="write a JSON report here")
    p.set_defaults(fn=cmd_eval_iea)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except StorymixError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
