"""Linear inequality restrictions and truncated normal sampling."""

from .restrictions import LinearRestrictions
from .tmvn import TmvnSpec, gibbs_sweep, sample_tmvn, sample_tn_univariate

__all__ = [
    "LinearRestrictions",
    "TmvnSpec",
    "gibbs_sweep",
    "sample_tmvn",
    "sample_tn_univariate",
]
