"""Command-line driver.

    rhetsum --doc doc.json --time 600 [--profile p.json] [--out m.json]
            [--markdown s.md] [--dot g.dot] [--config w.json]
            [--pre-weighted] [--interactive] [--strict-interactive]

Exit codes: 0 success, 1 input or validation error, 2 configuration error,
3 interaction failure under --strict-interactive. Outputs are written only
after the whole run succeeds, each through a temp file and a rename.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Sequence, TextIO

from .config import ConfigError, WeightConfig, load_weight_config
from .document_model import (
    DEFAULT_PROFILE,
    SpecError,
    SummaryBudget,
    parse_document_spec,
    parse_user_profile,
    validate_document,
)
from .pipeline import generate_summary
from .presentation import export_dot, render_markdown
from .tiebreak import InteractionError, TieCandidate

EXIT_OK, EXIT_INPUT, EXIT_CONFIG, EXIT_INTERACTION = 0, 1, 2, 3


@dataclass(frozen=True)
class RunOptions:
    doc_path: Path
    time_s: int
    profile_path: Path | None = None
    out_path: Path | None = None
    markdown_path: Path | None = None
    dot_path: Path | None = None
    config_path: Path | None = None
    pre_weighted: bool = False
    interactive: bool = False
    strict_interactive: bool = False


def prompt_tie(
    group: Sequence[str],
    candidates: Sequence[TieCandidate],
    input_fn: Callable[[str], str] = input,
    out: TextIO | None = None,
    attempts: int = 3,
) -> list[str]:
    """Ask the user to order a tie group; 1-based positions, e.g. ``2 1``."""
    out = out or sys.stderr
    print(f"{len(group)} units are tied on weight:", file=out)
    for i, c in enumerate(candidates, 1):
        media = c.media.value if c.media else "?"
        weight = "" if c.raw_weight is None else f", w={c.raw_weight:g}"
        print(f"  {i}) {c.id} [{media}, {c.duration_s:g} s{weight}]", file=out)
    expected = list(range(1, len(group) + 1))
    for _ in range(attempts):
        try:
            answer = input_fn("order (most important first): ")
        except EOFError:
            raise InteractionError("no answer (end of input)") from None
        try:
            picks = [int(tok) for tok in answer.replace(",", " ").split()]
        except ValueError:
            picks = []
        if sorted(picks) == expected:
            return [group[p - 1] for p in picks]
        print(f"  expected a permutation of {' '.join(map(str, expected))}", file=out)
    raise InteractionError(f"no valid ordering after {attempts} attempts")


def _report(path: Path | str, exc: SpecError, err: TextIO) -> None:
    if exc.diagnostics:
        for d in exc.diagnostics:
            print(f"{path}: {d}", file=err)
    else:
        print(f"{path}: error: {exc}", file=err)


def _write_atomically(outputs: dict[Path, str]) -> None:
    staged: list[tuple[str, Path]] = []
    try:
        for target, text in outputs.items():
            target.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
            staged.append((tmp, target))
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        for tmp, target in staged:
            os.replace(tmp, target)
    finally:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.unlink(tmp)


def run_summarize(opts: RunOptions, err: TextIO | None = None) -> int:
    err = err or sys.stderr

    def read(path: Path) -> bytes:
        return Path(path).read_bytes()

    try:
        doc = parse_document_spec(read(opts.doc_path))
    except OSError as exc:
        print(f"{opts.doc_path}: error: {exc.strerror or exc}", file=err)
        return EXIT_INPUT
    except SpecError as exc:
        _report(opts.doc_path, exc, err)
        return EXIT_INPUT

    profile = DEFAULT_PROFILE
    if opts.profile_path is not None:
        try:
            profile = parse_user_profile(read(opts.profile_path))
        except OSError as exc:
            print(f"{opts.profile_path}: error: {exc.strerror or exc}", file=err)
            return EXIT_INPUT
        except SpecError as exc:
            _report(opts.profile_path, exc, err)
            return EXIT_INPUT

    config = WeightConfig()
    if opts.config_path is not None:
        try:
            config = load_weight_config(read(opts.config_path))
        except OSError as exc:
            print(f"{opts.config_path}: error: {exc.strerror or exc}", file=err)
            return EXIT_CONFIG
        except ConfigError as exc:
            print(f"{opts.config_path}: error: {exc}", file=err)
            return EXIT_CONFIG

    diags = validate_document(doc)
    if diags:
        for d in diags:
            print(f"{opts.doc_path}: {d}", file=err)
        return EXIT_INPUT

    interactive = opts.interactive or opts.strict_interactive
    if interactive:
        profile = replace(profile, interactive=True)
    try:
        run = generate_summary(
            doc,
            SummaryBudget(float(opts.time_s)),
            profile,
            config,
            pre_weighted=opts.pre_weighted,
            prompt=prompt_tie if interactive else None,
            strict=opts.strict_interactive,
        )
    except ConfigError as exc:
        print(f"{opts.config_path or '<default config>'}: error: {exc}", file=err)
        return EXIT_CONFIG
    except SpecError as exc:
        _report(opts.doc_path, exc, err)
        return EXIT_INPUT
    except InteractionError as exc:
        print(f"{opts.doc_path}: interaction failed: {exc}", file=err)
        return EXIT_INTERACTION

    out_path = opts.out_path or Path(Path(opts.doc_path).stem + ".summary.json")
    outputs = {Path(out_path): run.manifest.to_json()}
    if opts.markdown_path is not None:
        outputs[Path(opts.markdown_path)] = render_markdown(run.manifest, doc)
    if opts.dot_path is not None:
        outputs[Path(opts.dot_path)] = export_dot(run.graph, run.weights, run.levels)
    try:
        _write_atomically(outputs)
    except OSError as exc:
        print(f"{exc.filename or out_path}: error: {exc.strerror or exc}", file=err)
        return EXIT_INPUT
    return EXIT_OK


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive number of seconds")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="rhetsum", description="Summarize a multimedia document under a time budget."
    )
    p.add_argument("--doc", required=True, type=Path, help="document (JSON)")
    p.add_argument("--time", required=True, type=_positive_int, help="budget in seconds")
    p.add_argument("--profile", type=Path, help="user profile (JSON)")
    p.add_argument("--out", type=Path, help="manifest path (default: <doc>.summary.json)")
    p.add_argument("--markdown", type=Path, help="also write a Markdown rendering")
    p.add_argument("--dot", type=Path, help="also write the relations graph as DOT")
    p.add_argument("--config", type=Path, help="weighting config (JSON)")
    p.add_argument("--pre-weighted", action="store_true", help="use preset_weight from the doc")
    p.add_argument("--interactive", action="store_true", help="ask the user on residual ties")
    p.add_argument(
        "--strict-interactive",
        action="store_true",
        help="like --interactive, but a failed prompt aborts with exit code 3",
    )
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    opts = RunOptions(
        doc_path=args.doc,
        time_s=args.time,
        profile_path=args.profile,
        out_path=args.out,
        markdown_path=args.markdown,
        dot_path=args.dot,
        config_path=args.config,
        pre_weighted=args.pre_weighted,
        interactive=args.interactive,
        strict_interactive=args.strict_interactive,
    )
    return run_summarize(opts)
