import numpy as np
import pytest

from millstone.encoder import EncodeRequest, EncoderConfig, encode
from millstone.engine import Engine
from millstone.model import Document, DocumentPart

FIXTURE_TEXTS = {
    "epo": [
        ("EP0000001A1", "Airbag module", "An inflatable restraint cushion for vehicle crash protection."),
        ("EP0000002A1", "Battery cooling plate", "Liquid cooling channels remove heat from lithium cells."),
        ("EP0000003A1", "Laser diode driver", "Pulsed current source for semiconductor laser emitters."),
    ],
    "semanticscholar": [
        ("ss1", "Protein folding kinetics", "Folding pathways of globular proteins measured by spectroscopy."),
        ("ss2", "Graph neural networks", "Message passing architectures for learning on graphs."),
    ],
}


def make_document(doc_id, corpus, title, abstract, cfg=None):
    parts = (DocumentPart("title", title), DocumentPart("abstract", abstract))
    emb = encode(EncodeRequest(doc_id, parts), cfg or EncoderConfig())
    return Document(doc_id, corpus, parts, {}, emb)


@pytest.fixture
def small_engine(tmp_path):
    """Engine over a tiny two-corpus store with encoded documents."""
    with Engine(tmp_path / "store") as engine:
        for corpus, rows in FIXTURE_TEXTS.items():
            for doc_id, title, abstract in rows:
                engine.load_document(make_document(doc_id, corpus, title, abstract))
        yield engine


def unit_vectors(n, dim, seed):
    rng = np.random.default_rng(seed)
    mat = rng.standard_normal((n, dim))
    return mat / np.linalg.norm(mat, axis=1, keepdims=True)
