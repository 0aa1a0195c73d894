"""wikiner: NER corpus construction and evaluation from Wikipedia pages."""

__version__ = "0.1.0"
