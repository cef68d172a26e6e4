"""Chess960 corpora, region-count features, and opening-theme reports."""

__version__ = "0.1.0"
