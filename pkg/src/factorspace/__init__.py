"""Correspondence analysis for large sparse term-document data."""

__version__ = "0.1.0"

from .corpus import (  # noqa: E402
    RecordSet, TokenStream, Vocabulary, build_vocabulary, split_records, tokenize,
    top_terms,
)
from .matrix import (  # noqa: E402
    ContingencyTable, RowGrouping, aggregate_rows, build_table, order_rows_by_scores,
    transpose,
)
from .ca import (  # noqa: E402
    CorrespondenceModel, contributions, eigen_report, fit, project_supplementary_cols,
    project_supplementary_rows,
)
from .powerlaw import PowerLawFit, RankFrequency, fit_loglog, rank_frequency  # noqa: E402
from .experiments import run_aggregation_protocol, ssd_principal_plane  # noqa: E402
from .neighbors import (  # noqa: E402
    full_space_sqdist, nearest, nn_chain_cluster, pair_links, reciprocal_pairs,
)
from .export_query import (  # noqa: E402
    BoundingBox, FactorRecord, bbox_query, center_box, export_xml, parse_xml,
)

__all__ = [
    "RecordSet", "TokenStream", "Vocabulary", "build_vocabulary", "split_records", "tokenize",
    "top_terms", "ContingencyTable", "RowGrouping", "aggregate_rows", "build_table",
    "order_rows_by_scores", "transpose", "CorrespondenceModel", "contributions",
    "eigen_report", "fit", "project_supplementary_cols", "project_supplementary_rows",
    "PowerLawFit", "RankFrequency", "fit_loglog", "rank_frequency",
    "run_aggregation_protocol", "ssd_principal_plane", "full_space_sqdist", "nearest",
    "nn_chain_cluster", "pair_links", "reciprocal_pairs", "BoundingBox", "FactorRecord",
    "bbox_query", "center_box", "export_xml", "parse_xml",
]
