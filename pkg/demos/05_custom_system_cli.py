"""Bring your own system: the JSON file format and the command-line interface.

Writes a small custom system description, then drives every CLI subcommand
against it in-process: a verdict, a reach tube (JSON and SVG), bounds with
the grid oracle, and the scenario catalogue.
"""

import json
import tempfile
from pathlib import Path

from resilience_kit.cli import main as cli


def run(*argv):
    print(f"\n$ resilience-kit {' '.join(argv)}")
    code = cli(list(argv))
    print(f"[exit code {code}]")


def main():
    workdir = Path(tempfile.mkdtemp(prefix="resilience-demo-"))
    system = {
        "name": "damped-oscillator",
        "A": [[-0.2, 1.0], [-1.0, -0.2]],
        "B_bar": [[1.0, 0.0, 0.3], [0.0, 1.0, 0.1]],
        "actuator_labels": ["thrust_x", "thrust_y", "auxiliary"],
        "state_labels": ["position", "velocity"],
    }
    sys_file = workdir / "oscillator.json"
    sys_file.write_text(json.dumps(system, indent=2))
    print(f"System description written to {sys_file}")

    run("check", "--system", str(sys_file), "--lost", "auxiliary")

    svg = workdir / "tube.svg"
    run("reach", "--system", str(sys_file), "--lost", "auxiliary",
        "--x0", "1.0,0.0", "--horizon", "2.0", "--steps", "8",
        "--dims", "0,1", "--format", "svg", "--output", str(svg))
    print(f"SVG rendering of the tube projection: {svg} "
          f"({svg.stat().st_size} bytes)")

    run("bounds", "--system", str(sys_file), "--lost", "auxiliary",
        "--x0", "1.0,0.0", "--samples", "200",
        "--oracle", "--horizon", "20", "--steps", "400")

    run("scenarios")


if __name__ == "__main__":
    main()
