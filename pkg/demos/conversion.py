"""Convert the worked median rule to left coalitions and back, printing each step."""

from pathlib import Path

from spdrules import convert_rule, dump_rule, load_rule

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

rule = load_rule(FIXTURES / "median_three_by_three.json")

coalition, report = convert_rule(rule, "coalition")
for line in report.trace:
    print("  ", line)
print(f"equal on {report.examined} profiles (exhaustive={report.exhaustive}):", report.equal)
print(dump_rule(coalition))

# %% Back again. Phantoms land wherever the winning threshold drops.
median, report = convert_rule(coalition, "median")
print("\n".join("   " + line for line in report.trace))
print("phantoms:", [rule.space.label(p) for p in median.phantoms])
print("recovered the original rule:", median == rule)

# %% A coalition system that depends on who is in a coalition has no phantom form.
try:
    convert_rule(load_rule(FIXTURES / "coalition_nonanonymous.json"), "median")
except ValueError as exc:
    print("refused:", exc)
