"""Dataset ingestion."""

from .csv import INTERCEPT_NAME, load_csv

__all__ = ["INTERCEPT_NAME", "load_csv"]
