"""Non-parametric group comparisons of features."""

from lingforge.stats.association import (
    PLOT_COLUMNS,
    TABLE_COLUMNS,
    association_table,
    plot_rows,
    subject_rows,
    write_association_table,
    write_plot_data,
)
from lingforge.stats.consistency import (
    ConsistencyRow,
    RankingOverlap,
    importance_consistency,
    ranking_overlap,
)
from lingforge.stats.nonparametric import (
    GroupedSamples,
    MannWhitneyResult,
    benjamini_hochberg,
    cliffs_delta,
    mann_whitney_u,
    mwu_method,
)

__all__ = [
    "PLOT_COLUMNS",
    "TABLE_COLUMNS",
    "ConsistencyRow",
    "GroupedSamples",
    "MannWhitneyResult",
    "RankingOverlap",
    "association_table",
    "benjamini_hochberg",
    "cliffs_delta",
    "importance_consistency",
    "mann_whitney_u",
    "mwu_method",
    "plot_rows",
    "ranking_overlap",
    "subject_rows",
    "write_association_table",
    "write_plot_data",
]
