"""Product quantization of time series under dynamic time warping."""

from ._core import (
    Codebook,
    DegenerateStroke,
    ParseError,
    adjusted_rand_index,
    cluster,
    dba,
    dba_kmeans,
    dtw,
    euclidean,
    keogh_envelope,
    knn,
    lb_keogh,
    lb_kim,
    memory_report,
    modwt_scale,
    nn_search,
    pairwise,
    preprocess,
    rand_index,
    random_walks,
    segment,
    segment_cuts,
    synthetic_sketches,
    train,
    window_from_percent,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
