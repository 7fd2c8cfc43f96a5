"""Static operation schema: the nine operations, their arguments and response fields.

Drives parse-time validation, field projection, and the machine-readable
document served at GET /api/schema (which the explorer UI uses to build forms).
"""

from __future__ import annotations

from ..model import PART_KEYS

# documentParts sub-fields: "key"/"value" project part properties; a part name
# (title, abstract, ...) filters the list to parts with that key.
PART_FIELDS = ("key", "value") + PART_KEYS

DOC_FIELDS = {
    "id": None,
    "index": None,
    "documentParts": PART_FIELDS,
    "metadata": None,
    "vector": None,
}

HIT_FIELDS = dict(DOC_FIELDS, score=None)

MATRIX_FIELDS = {
    "sourceIds": None,
    "targetIds": None,
    "metric": None,
    "values": None,
}

ENCODED_FIELDS = {"id": None, "vector": None}

# arg name -> (type name, required)
OPERATIONS = {
    "Document": {
        "args": {"index": ("String", True), "id": ("String", True)},
        "fields": DOC_FIELDS,
        "returns": "Document",
    },
    "Documents": {
        "args": {
            "index": ("String", False),
            "keyword": ("String", False),
            "keys": ("[DocumentKey]", False),
        },
        "fields": DOC_FIELDS,
        "returns": "[Document]",
    },
    "searchDocuments": {
        "args": {"index": ("String", True), "keyword": ("String", True), "k": ("Int", False)},
        "fields": HIT_FIELDS,
        "returns": "[SearchHit]",
    },
    "encodeDocument": {
        "args": {"data": ("EncodeObject", True)},
        "fields": None,  # leaf: returns the vector itself
        "returns": "[Float]",
    },
    "encodeDocuments": {
        "args": {"data": ("[EncodeObject]", True)},
        "fields": ENCODED_FIELDS,
        "returns": "[EncodedDocument]",
    },
    "similarityCalculation": {
        "args": {
            "sources": ("[DocumentKey]", True),
            "targets": ("[DocumentKey]", True),
            "metric": ("String", False),
        },
        "fields": MATRIX_FIELDS,
        "returns": "SimilarityMatrix",
    },
    "encodeDocumentAndSimilarityCalculation": {
        "args": {"data": ("[EncodeObject]", True), "metric": ("String", False)},
        "fields": MATRIX_FIELDS,
        "returns": "SimilarityMatrix",
    },
    "SimilaritySearch": {
        "args": {
            "index": ("String", True),
            "id": ("String", True),
            "targetIndex": ("String", False),
            "k": ("Int", False),
        },
        "fields": HIT_FIELDS,
        "returns": "[SearchHit]",
    },
    "embedDocumentAndSimilaritySearch": {
        "args": {
            "data": ("EncodeObject", True),
            "targetIndex": ("String", True),
            "k": ("Int", False),
        },
        "fields": HIT_FIELDS,
        "returns": "[SearchHit]",
    },
}

INPUT_TYPES = {
    "DocumentKey": {"index": "String", "id": "String"},
    "EncodeObject": {"id": "String", "parts": "[DocumentPart]"},
    "DocumentPart": {"key": "String", "value": "String"},
}


def schema_document() -> dict:
    """JSON-serializable description of the API surface."""
    ops = {}
    for name, spec in OPERATIONS.items():
        fields = spec["fields"]
        ops[name] = {
            "args": {
                arg: {"type": t, "required": req} for arg, (t, req) in spec["args"].items()
            },
            "returns": spec["returns"],
            "fields": (
                {
                    f: (list(sub) if sub else None)
                    for f, sub in fields.items()
                }
                if fields
                else None
            ),
        }
    return {"operations": ops, "inputTypes": INPUT_TYPES}
