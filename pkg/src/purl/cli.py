"""Command-line front end: ``purl pattern.purl -o pattern.html``."""

from __future__ import annotations

import argparse
import html
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .compiler import compile_source
from .core import Severity

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_IO = 2

_EXTENSIONS = {"html": ".html", "text": ".txt"}

_DOCUMENT = """<!DOCTYPE html>
<html>
<head>
<meta charset="utf-8">
<title>{title}</title>
</head>
<body>
{body}
</body>
</html>
"""


@dataclass
class CliConfig:
    input_path: Path
    output_path: Optional[Path] = None
    format: str = "html"
    emit_ast_json: bool = False
    strict: bool = False

    def resolved_output(self) -> Path:
        if self.output_path is not None:
            return self.output_path
        return self.input_path.with_suffix(_EXTENSIONS[self.format])


def build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="purl",
        description="Compile a Purl knitting pattern to standard notation.",
    )
    ap.add_argument("input", type=Path, help="Purl source file")
    ap.add_argument("-o", "--output", type=Path, help="output file (default: input with .html/.txt)")
    ap.add_argument("--format", choices=sorted(_EXTENSIONS), default="html")
    ap.add_argument(
        "--emit-ast-json",
        action="store_true",
        help="print the syntax tree after each pass as JSON on stdout",
    )
    ap.add_argument(
        "--strict",
        action="store_true",
        help="fail on warnings and verification messages too",
    )
    return ap


def _write_atomic(path: Path, data: str) -> None:
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def run(config: CliConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        src = config.input_path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        print(f"purl: cannot read {config.input_path}: {exc}", file=stderr)
        return EXIT_IO

    result = compile_source(src, trace=config.emit_ast_json)

    if config.emit_ast_json:
        for i, dump in enumerate(result.passes, start=1):
            print(f"PASS {i}:" + "-" * 31, file=stdout)
            print(json.dumps(dump, indent=2), file=stdout)

    for msg in result.messages:
        print(msg.format(), file=stderr)

    if config.format == "html":
        pattern = result.root.pattern
        title = pattern.name if pattern is not None and pattern.name else "Purl pattern"
        rendered = _DOCUMENT.format(title=html.escape(title), body=result.html())
    else:
        rendered = result.text()

    out = config.resolved_output()
    try:
        _write_atomic(out, rendered)
    except OSError as exc:
        print(f"purl: cannot write {out}: {exc}", file=stderr)
        return EXIT_IO

    if result.has_errors:
        return EXIT_FAILED
    if config.strict and result.messages:
        return EXIT_FAILED
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_arg_parser().parse_args(argv)
    config = CliConfig(
        input_path=args.input,
        output_path=args.output,
        format=args.format,
        emit_ast_json=args.emit_ast_json,
        strict=args.strict,
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
