"""Multi-label movie-genre classification from text reviews.

Pipeline: corpus loading -> preprocessing -> tf-idf vectorization ->
KNN / MLP classification -> multi-label evaluation.
"""

from . import corpus, metrics, models, preprocess, vectorize  # noqa: F401

__version__ = "0.1.0"
