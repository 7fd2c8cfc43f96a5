import csv
import io
import json
from pathlib import Path

from click.testing import CliRunner

from millstone.ann import HnswIndex
from millstone.cli import EXIT_FATAL, main
from millstone.queryapi.auth import authenticate

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def run(*args, env=None):
    return CliRunner().invoke(main, list(args), env=env or {})


def test_help_on_every_command():
    for cmd in ("ingest", "serve", "bench", "token", "snapshot"):
        result = run(cmd, "--help")
        assert result.exit_code == 0, result.output


def test_ingest_fixture_dir(tmp_path):
    result = run(
        "ingest", "--store-root", str(tmp_path / "store"), "--corpus", "epo",
        "--format", "patent_xml", "--source", str(FIXTURES / "patents" / "epo"),
    )
    assert result.exit_code == 0, result.output
    report = json.loads(result.output[result.output.index("{"):])
    assert report["loaded"] == 21
    assert report["rejected"] == 0


def test_ingest_bad_path_exits_2(tmp_path):
    result = run(
        "ingest", "--store-root", str(tmp_path / "store"), "--corpus", "epo",
        "--format", "patent_xml", "--source", str(tmp_path / "missing"),
    )
    assert result.exit_code == EXIT_FATAL


def test_ingest_incremental_watermark(tmp_path):
    args = (
        "ingest", "--store-root", str(tmp_path / "store"), "--corpus", "wipo",
        "--format", "patent_xml", "--source", str(FIXTURES / "patents" / "wipo"),
        "--incremental",
    )
    first = run(*args)
    assert first.exit_code == 0, first.output
    assert json.loads(first.output[first.output.index("{"):])["loaded"] == 9
    second = run(*args)
    assert json.loads(second.output[second.output.index("{"):])["loaded"] == 0


def test_bench_csv_and_figure(tmp_path):
    figure = tmp_path / "bench.png"
    result = run(
        "bench", "-n", "200", "-q", "10", "-k", "5", "--dim", "32",
        "--ef", "10,50", "--seed", "7", "--figure", str(figure),
    )
    assert result.exit_code == 0, result.output
    rows = list(csv.DictReader(io.StringIO(result.output)))
    assert [r["ef"] for r in rows] == ["10", "50"]
    for row in rows:
        assert 0.0 <= float(row["recall_at_k"]) <= 1.0
        assert float(row["p95_ms"]) >= float(row["p50_ms"]) >= 0.0
    assert float(rows[1]["recall_at_k"]) >= float(rows[0]["recall_at_k"])
    assert figure.exists() and figure.stat().st_size > 0


def test_bench_deterministic_given_seed():
    a = run("bench", "-n", "100", "-q", "5", "--dim", "16", "--ef", "20", "--seed", "3")
    b = run("bench", "-n", "100", "-q", "5", "--dim", "16", "--ef", "20", "--seed", "3")
    # Latency columns are wall clock; the seeded columns must match exactly.
    trim = lambda out: [line.split(",")[:2] for line in out.splitlines()]
    assert trim(a.output) == trim(b.output)


def test_token_mint_and_verify():
    result = run("token", "--subject", "alice", "--signing-key", "k1")
    assert result.exit_code == 0
    principal = authenticate("Bearer " + result.output.strip(), "k1")
    assert principal.subject == "alice"


def test_token_requires_key():
    result = run("token", "--subject", "alice", env={"MILLSTONE_SIGNING_KEY": ""})
    assert result.exit_code == EXIT_FATAL


def test_token_key_from_env():
    result = run("token", "--subject", "bob", env={"MILLSTONE_SIGNING_KEY": "envkey"})
    assert result.exit_code == 0
    assert authenticate("Bearer " + result.output.strip(), "envkey").subject == "bob"


def test_snapshot_command(tmp_path):
    store_root = tmp_path / "store"
    run("ingest", "--store-root", str(store_root), "--corpus", "uspto",
        "--format", "patent_xml", "--source", str(FIXTURES / "patents" / "uspto"))
    out = tmp_path / "uspto.snap"
    result = run("snapshot", "--store-root", str(store_root), "--corpus", "uspto",
                 "--out", str(out))
    assert result.exit_code == 0, result.output
    restored = HnswIndex.restore(out.read_bytes())
    assert len(restored) == 10
    assert restored.check_invariants() == []


def test_serve_refuses_without_key(tmp_path):
    store_root = tmp_path / "store"
    store_root.mkdir()
    result = run("serve", "--store-root", str(store_root),
                 env={"MILLSTONE_SIGNING_KEY": ""})
    assert result.exit_code == EXIT_FATAL


def test_serve_refuses_missing_store(tmp_path):
    result = run("serve", "--store-root", str(tmp_path / "nope"),
                 "--signing-key", "k")
    assert result.exit_code == EXIT_FATAL


def test_serve_config_file_precedence(tmp_path):
    # Flags beat env beats file; here the file supplies nothing usable and the
    # flag wins over a bogus env value.
    cfg = tmp_path / "millstone.conf"
    cfg.write_text('signing_key = "filekey"\n# comment\n')
    result = run("serve", "--store-root", str(tmp_path / "nope"),
                 "--config", str(cfg))
    assert result.exit_code == EXIT_FATAL  # store missing, but key resolution ran
