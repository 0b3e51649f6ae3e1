"""Audit a coalition rule whose left coalitions name particular agents.

It is strategy-proof, yet swapping two dipped agents changes the outcome.
"""

from pathlib import Path

from spdrules import AuditBudget, check_type_anonymity, find_manipulation, load_profile, load_rule

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
rule = load_rule(FIXTURES / "coalition_nonanonymous.json")
budget = AuditBudget(max_exhaustive=10**6)

sp = find_manipulation(rule, budget)
print(f"manipulation search: {sp.status} over {sp.examined} profiles")

# The first violation in enumeration order swaps two peaked agents.
first = check_type_anonymity(rule, budget)
print("first anonymity witness:", first.witness.as_dict(rule.space))

# Starting from a chosen profile and swapping only dipped agents.
start = load_profile(FIXTURES / "profile_swap_before.json", rule.space, rule.partition)
dipped = check_type_anonymity(rule, budget, side="D", profiles=[start])
w = dipped.witness
print("dipped-side witness:", w.as_dict(rule.space))
print("replays:", w.replay(rule))
