"""Commuting modulators driven by a slow sinusoid, via the built-in scenario.

Writes CSVs for the clean outputs, the noisy ones and the display composite
into ./out/example2, then prints the report.
"""
import sys

from ltvcommute.scenario import load_builtin, run

out = sys.argv[1] if len(sys.argv) > 1 else "out/example2"
report = run(load_builtin("example2"), out)
print("\n".join(report.lines()))
