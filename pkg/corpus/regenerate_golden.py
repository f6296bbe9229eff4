"""Rewrite corpus/golden from corpus/commands.

Run after an intentional output change:  python3 corpus/regenerate_golden.py
Each line k of commands/<name>.cmds produces golden/<name>/<kk>.json (or .txt).
"""

import pathlib
import shutil
import sys

from relcm.cli import ToolError, golden_name, read_command_file, render

ROOT = pathlib.Path(__file__).resolve().parent


def main(names=None):
    for cmds in sorted((ROOT / "commands").glob("*.cmds")):
        name = cmds.stem
        if names and name not in names:
            continue
        out = ROOT / "golden" / name
        if out.exists():
            shutil.rmtree(out)
        out.mkdir(parents=True)
        ws = str(ROOT / "workspaces" / f"{name}.ws")
        for k, argv in enumerate(read_command_file(cmds)):
            try:
                data = render([ws] + argv)
            except ToolError as exc:
                sys.exit(f"{name} line {k}: {exc}")
            (out / golden_name(k, argv)).write_bytes(data)
        print(f"{name}: {k + 1} outputs")


if __name__ == "__main__":
    main(sys.argv[1:])
