import pytest

from millstone.errors import DuplicateId, EmptyQuery
from millstone.fulltext import STOPWORDS, InvertedIndex, analyze
from millstone.model import Document, DocumentPart

# Five tiny documents; expected scores computed by hand with an independent
# BM25 implementation (k1=1.2, b=0.75, idf = ln(1 + (N-df+0.5)/(df+0.5)),
# doc lengths 3,3,3,7,2, avgdl 3.4) and frozen here.
CORPUS = {
    "d1": "airbag sensor module",
    "d2": "airbag airbag deployment",
    "d3": "battery cell design",
    "d4": "airbag inflation cushion restraint safety sensor",
    "d5": "laser diode",
}


def build():
    idx = InvertedIndex()
    for doc_id, text in CORPUS.items():
        idx.index_document(Document(doc_id, "epo", (DocumentPart("title", text),)))
    return idx


def test_stopword_list_is_thirty_words():
    assert len(STOPWORDS) == 30
    assert {"the", "and", "of", "not"} <= STOPWORDS


def test_analyze_drops_stopwords():
    assert analyze("The airbag and the sensor") == ["airbag", "sensor"]


def test_bm25_frozen_single_term():
    hits = build().search_keyword("airbag", corpus="epo")
    assert [h.id for h in hits] == ["d2", "d1", "d4"]
    assert hits[0].score == pytest.approx(0.7664817159, abs=1e-9)
    assert hits[1].score == pytest.approx(0.5662491328, abs=1e-9)
    assert hits[2].score == pytest.approx(0.4105594527, abs=1e-9)


def test_bm25_frozen_two_terms_or_semantics():
    hits = build().search_keyword("airbag sensor", corpus="epo")
    assert [h.id for h in hits] == ["d1", "d4", "d2"]
    assert hits[0].score == pytest.approx(1.4859831434, abs=1e-9)
    assert hits[1].score == pytest.approx(1.0774134400, abs=1e-9)
    assert hits[2].score == pytest.approx(0.7664817159, abs=1e-9)


def test_unmatched_terms_are_ignored_not_fatal():
    hits = build().search_keyword("airbag zeppelin")
    assert [h.id for h in hits] == ["d2", "d1", "d4"]
    assert build().search_keyword("zeppelin") == []


def test_k_limits_results():
    assert len(build().search_keyword("airbag", k=2)) == 2


def test_empty_query_rejected():
    idx = build()
    with pytest.raises(EmptyQuery):
        idx.search_keyword("the and of")
    with pytest.raises(EmptyQuery):
        idx.search_keyword("  ")


def test_corpus_filter_scopes_statistics():
    idx = build()
    idx.index_document(Document("w1", "wipo", (DocumentPart("title", "airbag valve"),)))
    scoped = idx.search_keyword("airbag", corpus="wipo")
    assert [h.id for h in scoped] == ["w1"]
    assert all(h.corpus == "wipo" for h in scoped)
    # epo-scoped scores are unchanged by the other corpus's documents.
    hits = idx.search_keyword("airbag", corpus="epo")
    assert hits[0].score == pytest.approx(0.7664817159, abs=1e-9)


def test_duplicate_rejected_and_remove():
    idx = build()
    with pytest.raises(DuplicateId):
        idx.index_document(Document("d1", "epo", (DocumentPart("title", "x"),)))
    idx.remove_document("epo", "d2")
    assert ("epo", "d2") not in idx
    assert [h.id for h in idx.search_keyword("airbag")] == ["d1", "d4"]


def test_only_title_and_abstract_are_searchable():
    idx = InvertedIndex()
    idx.index_document(Document("p1", "epo", (
        DocumentPart("title", "airbag"),
        DocumentPart("claims", "zirconium"),
    )))
    assert idx.search_keyword("zirconium") == []
    assert [h.id for h in idx.search_keyword("airbag")] == ["p1"]
