"""millstone: desk-scale document embedding, indexing and search engine."""

from .model import Document, DocumentPart, SimilarityMetric, validate_document

__version__ = "0.1.0"

__all__ = ["Document", "DocumentPart", "SimilarityMetric", "validate_document", "__version__"]
