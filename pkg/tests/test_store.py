import shutil

import numpy as np
import pytest

from millstone.errors import LockHeld, UnknownCorpus
from millstone.model import Document, DocumentPart
from millstone.store import Store


def doc(doc_id, corpus="epo", text="Airbag", vec=None):
    return Document(doc_id, corpus, (DocumentPart("title", text),), {"k": "v"},
                    np.asarray(vec) if vec is not None else None)


def test_put_get_round_trip(tmp_path):
    with Store(tmp_path) as store:
        d = doc("EP1", vec=[0.5, -0.25, 1.0 / 3.0])
        store.put(d)
        assert store.get("epo", "EP1") == d
        assert store.get("epo", "missing") is None
        assert store.count("epo") == 1


def test_embedding_survives_bit_for_bit(tmp_path):
    vec = np.random.default_rng(3).standard_normal(768)
    with Store(tmp_path) as store:
        store.put(doc("EP1", vec=vec))
    with Store(tmp_path) as store:
        assert np.array_equal(store.get("epo", "EP1").embedding, vec)


def test_reopen_sees_committed_documents(tmp_path):
    with Store(tmp_path) as store:
        for i in range(20):
            store.put(doc(f"EP{i}"))
    with Store(tmp_path) as store:
        assert store.count("epo") == 20


def test_upsert_last_write_wins(tmp_path):
    with Store(tmp_path) as store:
        store.put(doc("EP1", text="old"))
        store.put(doc("EP1", text="new"))
        assert store.get("epo", "EP1").title == "new"
        assert store.count("epo") == 1
    with Store(tmp_path) as store:
        assert store.get("epo", "EP1").title == "new"


def test_scan_is_id_ascending_snapshot(tmp_path):
    with Store(tmp_path) as store:
        for doc_id in ("c", "a", "b"):
            store.put(doc(doc_id))
        assert [d.id for d in store.scan("epo")] == ["a", "b", "c"]
        with pytest.raises(UnknownCorpus):
            list(store.scan("nope"))


def test_lock_excludes_second_writer(tmp_path):
    with Store(tmp_path):
        with pytest.raises(LockHeld):
            Store(tmp_path)
    # Lock released on close.
    Store(tmp_path).close()


def test_readonly_reader_coexists_with_writer(tmp_path):
    with Store(tmp_path) as writer:
        writer.put(doc("EP1"))
        reader = Store(tmp_path, readonly=True)
        assert reader.get("epo", "EP1").id == "EP1"
        with pytest.raises(LockHeld):
            reader.put(doc("EP2"))
        reader.close()


def test_truncated_tail_is_tolerated(tmp_path):
    with Store(tmp_path) as store:
        store.put(doc("EP1"))
        store.put(doc("EP2"))
    journal = tmp_path / "epo" / "journal.log"
    blob = journal.read_bytes()
    journal.write_bytes(blob + blob[: len(blob) // 3])  # interrupted final write
    with Store(tmp_path) as store:
        assert sorted(d.id for d in store.scan("epo")) == ["EP1", "EP2"]


def test_crash_after_acked_puts_loses_nothing(tmp_path):
    store = Store(tmp_path / "live")
    for i in range(10):
        store.put(doc(f"EP{i}", vec=[float(i)] * 4))
    # Simulate a crash: copy the on-disk state without closing, then clear the
    # stale lock the dead writer left behind.
    shutil.copytree(tmp_path / "live", tmp_path / "after")
    (tmp_path / "after" / "LOCK").unlink()
    with Store(tmp_path / "after") as recovered:
        assert recovered.count("epo") == 10
        assert recovered.get("epo", "EP7").embedding.tolist() == [7.0] * 4
    store.close()


def test_compact_folds_journal_into_segment(tmp_path):
    with Store(tmp_path) as store:
        for i in range(5):
            store.put(doc(f"EP{i}"))
        store.put(doc("EP0", text="updated"))
        store.compact("epo")
        assert not (tmp_path / "epo" / "journal.log").exists()
        segs = list((tmp_path / "epo" / "segments").glob("*.seg"))
        assert len(segs) == 1
        # Writes continue after compaction.
        store.put(doc("EP9"))
    with Store(tmp_path) as store:
        assert store.count("epo") == 6
        assert store.get("epo", "EP0").title == "updated"


def test_second_compact_replaces_segments(tmp_path):
    with Store(tmp_path) as store:
        store.put(doc("EP1"))
        store.compact("epo")
        store.put(doc("EP2"))
        store.compact("epo")
        segs = list((tmp_path / "epo" / "segments").glob("*.seg"))
        assert len(segs) == 1
    with Store(tmp_path) as store:
        assert store.count("epo") == 2


def test_get_many(tmp_path):
    with Store(tmp_path) as store:
        store.put(doc("EP1"))
        rows = store.get_many([("epo", "EP1"), ("epo", "nope")])
        assert rows[0][1].id == "EP1"
        assert rows[1][1] is None
