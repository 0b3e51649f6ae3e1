"""Strategy-proof, type-anonymous location rules on a line for societies of
single-peaked and single-dipped agents.

Two equivalent descriptions are provided: a generalized median over peaks
and phantoms followed by double-quota votes (:class:`MedianRule`), and a
left-coalition walk followed by left-decisive sets (:class:`CoalitionRule`).
"""

from .audit import (
    AuditBudget,
    AuditResult,
    BudgetExceeded,
    Witness,
    check_equivalence,
    check_type_anonymity,
    find_group_manipulation,
    find_manipulation,
    random_setting,
    random_valid_rule,
    tabulate,
)
from .coalition import (
    CoalitionRule,
    DecisiveSets,
    LeftCoalitionSystem,
    eval_coalition_rule,
    g_eval,
    omega_eval,
    validate_coalition_rule,
)
from .domain import (
    AgentPartition,
    AlternativeSpace,
    ExtElem,
    Kind,
    Profile,
    Ranking,
    Side,
    enumerate_rankings,
    extended_order_elements,
    pair_preference,
    restricted_extremum,
)
from .fileio import ParseError, dump_rule, load_profile, load_rule, parse_profile, parse_rule
from .median import (
    DoubleQuota,
    MedianRule,
    QuotaSet,
    count_phantoms_at,
    eval_median_rule,
    mixed_median,
    quota_decide,
    second_step_counts,
    validate_median_rule,
)
from .transform import (
    ConversionReport,
    InexpressibleConversion,
    convert_rule,
    decisive_to_quotas,
    lcs_to_phantoms,
    phantoms_to_lcs,
    quotas_to_decisive,
)
from .validation import ValidationReport, Violation

__all__ = [name for name in dir() if not name.startswith("_")]
