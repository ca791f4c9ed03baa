"""Variable importance via dependency networks and graph centrality.

Workflow: load a numeric table, regress every column on all the others,
draw an edge to each selected predictor, rank the nodes of the resulting
directed graph with a centrality measure, and hand the Top-n columns to
k-means or Gaussian-mixture clustering.
"""

from netvars.ingest import DataTable, LoadResult, load_csv, drop_constant_columns, standardize, compute_returns
from netvars.linmod import SelectionMethod, FitResult, ols_fit, stepwise_select, forward_select, aic_select, lasso_fit
from netvars.depnet import DependencyNetwork, build_network
from netvars.centrality import CentralityScores, compute_centrality, rank_top_n, MEASURES
from netvars.cluster import KMeansResult, GmmResult, kmeans, elbow_curve, gmm_em, select_gmm
from netvars.metrics import Partition, davies_bouldin, adjusted_rand, pca_project

__version__ = "0.1.0"

__all__ = [
    "DataTable",
    "LoadResult",
    "load_csv",
    "drop_constant_columns",
    "standardize",
    "compute_returns",
    "SelectionMethod",
    "FitResult",
    "ols_fit",
    "stepwise_select",
    "forward_select",
    "aic_select",
    "lasso_fit",
    "DependencyNetwork",
    "build_network",
    "CentralityScores",
    "compute_centrality",
    "rank_top_n",
    "MEASURES",
    "KMeansResult",
    "GmmResult",
    "kmeans",
    "elbow_curve",
    "gmm_em",
    "select_gmm",
    "Partition",
    "davies_bouldin",
    "adjusted_rand",
    "pca_project",
]
