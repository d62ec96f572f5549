"""Stable string identifiers for subcommands, suites, formula families and jobs.

A leaf module (no imports) so any layer can use these IDs without reaching back
into the entry module.
"""

SCHEMA = "rigidity-lab/1"
TOOL = "rigidity-lab"

CMD_RANK_CHECK = "rank-check"
CMD_CODIM_SWEEP = "codim-sweep"
CMD_GRAPH_CHECK = "graph-check"
CMD_EXCLUDE = "exclude"

SUITE_LEMMA31 = "lemma31"
SUITE_LEMMA31_BASIS = "lemma31-basis"
SUITE_LINE = "line"
SUITE_PROP32 = "prop32"
RANK_SUITES = (SUITE_LEMMA31, SUITE_LEMMA31_BASIS, SUITE_LINE, SUITE_PROP32)

FAMILY_LINE = "line"
FAMILY_EX32 = "ex32"
FAMILY_EX33 = "ex33"
FAMILY_EX34 = "ex34"
FAMILY_EX35 = "ex35"
FAMILY_MASTER = "master"
FAMILY_THEOREM04 = "theorem04"
SWEEP_FAMILIES = (
    FAMILY_LINE,
    FAMILY_EX32,
    FAMILY_EX33,
    FAMILY_EX34,
    FAMILY_EX35,
    FAMILY_MASTER,
    FAMILY_THEOREM04,
)

MODE_SIGMA = "sigma"
MODE_FIBRE = "fibre"
MODE_CANONICAL = "canonical"

VERDICT_INFEASIBLE = "infeasible"
VERDICT_NOT_SUPERMAXIMAL = "not supermaximal"
VERDICT_FEASIBLE = "feasible"

ID_RANK_JOB = "rank-job"
ID_SWEEP_JOB = "sweep-job"
ID_GRAPH_JOB = "graph-job"
ID_EXCLUDE_JOB = "exclude-job"
