"""Evaluate the three-agents-each worked rule in both representations.

Run with ``python3 demos/worked_rule.py`` from the repository root.
"""

from pathlib import Path

import numpy as np

from spdrules import Profile, load_rule, tabulate

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

median = load_rule(FIXTURES / "median_three_by_three.json")
coalition = load_rule(FIXTURES / "coalition_three_by_three.json")
space = median.space

# %% A profile is a tuple of peak indices and a tuple of dip indices.
for peaks, dips in [((1, 2, 2), (1, 1, 1)), ((1, 4, 4), (2, 2, 1)), ((1, 4, 4), (2, 2, 4))]:
    prof = Profile(tuple(space.index_of(v) for v in peaks), tuple(space.index_of(v) for v in dips))
    first = median.mixed_median(prof.peaks)
    print(f"peaks {peaks} dips {dips}: first step {space.label(first)}, "
          f"outcome {space.value(median.evaluate(prof))} / {space.value(coalition.evaluate(prof))}")

# %% The full outcome table is an integer array with one axis per agent.
table = tabulate(median)
print("table shape", table.shape)
counts = np.bincount(table.ravel(), minlength=space.m)
print("outcome frequencies", {str(space.value(i)): int(c) for i, c in enumerate(counts)})
print("both representations agree everywhere:", np.array_equal(table, tabulate(coalition)))
