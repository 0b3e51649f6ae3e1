"""Random valid rules of every representation, checked exhaustively.

Rules in threshold form are both strategy-proof and type-anonymous. The
general coalition form stays strategy-proof but often names agents.
"""

import time
from collections import Counter

import numpy as np

from spdrules import (
    AuditBudget,
    check_type_anonymity,
    convert_rule,
    find_group_manipulation,
    find_manipulation,
    random_setting,
    random_valid_rule,
)

budget = AuditBudget(max_exhaustive=10**7, max_coalition=6)
tally: Counter = Counter()
started = time.perf_counter()
for representation in ("median", "coalition", "general"):
    for seed in range(200):
        space, part = random_setting(seed)
        rule = random_valid_rule(space, part, seed, representation)
        tally[representation, "sp"] += find_manipulation(rule, budget).passed
        tally[representation, "anon"] += check_type_anonymity(rule, budget).passed
        if representation != "general":
            target = "coalition" if representation == "median" else "median"
            tally[representation, "converts"] += bool(convert_rule(rule, target)[1].equal)
        if part.n <= 4:
            tally[representation, "gsp checked"] += 1
            tally[representation, "gsp"] += find_group_manipulation(rule, budget).passed

for representation in ("median", "coalition", "general"):
    row = {k: v for (r, k), v in sorted(tally.items()) if r == representation}
    print(representation.ljust(10), row)
print(f"elapsed {time.perf_counter() - started:.1f}s")

# %% Profile counts grow as m ** n; this is why sampling exists.
sizes = np.array([[m ** n for n in range(1, 9)] for m in range(1, 6)])
print(sizes)
