"""
Entry point for `python -m bellbox`, running the `typer` `cli`.

The commands are:

1.  `analyze FILE`: classify the coincidence tables of a `JSON` file.
2.  `demo NAME`: report on a bundled dataset or model.
3.  `simulate MODEL`: run a classical mechanism and classify its statistics.
4.  `construct FILE`: build a Hilbert space model reproducing a `JSON` file.
"""
from .cli import cli

if __name__ == "__main__":
    cli(prog_name="bellbox")
