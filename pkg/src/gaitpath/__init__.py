"""Monocular gait pose-viewpoint estimation and trajectory reconstruction.

Pipeline: perspective correction (geometry) -> silhouette extraction
(segmentation) -> HOG features (hog) -> pose-viewpoint classification by
dynamic classifier selection (ecoc, states, dcs) -> path reconstruction
(trajectory) -> metrics (evaluation).  The synthgait module provides a
deterministic synthetic walker used as training corpus and test oracle.
"""

from .states import StateLabel, classes_for, cyc_add, cyc_sub, successors

__version__ = "0.1.0"

__all__ = [
    "StateLabel",
    "classes_for",
    "cyc_add",
    "cyc_sub",
    "successors",
    "__version__",
]
