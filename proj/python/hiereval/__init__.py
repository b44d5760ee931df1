"""Python façade over the C++ evaluation core."""

from _hiereval import (  # type: ignore[import-not-found]
    BitMask,
    BoxplotSummary,
    RegressionResult,
    __version__,
    boundary_complexity,
    boxplot,
    containment_ratio,
    count_holes,
    coverage,
    entails,
    evaluate_files,
    extent,
    fit_iou_size,
    general_of,
    image_coverage,
    iou,
    polygon_count,
    rasterize,
    rle_decode,
    rle_encode,
    size_bucket,
    taxonomy_counts,
    validate_dataset_file,
)

__all__ = [
    "BitMask",
    "BoxplotSummary",
    "RegressionResult",
    "__version__",
    "boundary_complexity",
    "boxplot",
    "containment_ratio",
    "count_holes",
    "coverage",
    "entails",
    "evaluate_files",
    "extent",
    "fit_iou_size",
    "general_of",
    "image_coverage",
    "iou",
    "polygon_count",
    "rasterize",
    "rle_decode",
    "rle_encode",
    "size_bucket",
    "taxonomy_counts",
    "validate_dataset_file",
]
