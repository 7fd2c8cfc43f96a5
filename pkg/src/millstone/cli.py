"""Operator command line: ingest corpora, serve the API, benchmark the ANN
index, mint access tokens, and snapshot/restore indexes."""

from __future__ import annotations

import csv
import json
import os
import sys
import time
from pathlib import Path

import click
import numpy as np

from .ann import HnswIndex, HnswParams, exact_search
from .encoder import EncoderConfig
from .engine import Engine
from .errors import MillstoneError, SourceUnreadable
from .etl import (
    SourceSpec,
    incremental_update,
    read_watermark,
    run_pipeline,
    write_watermark,
)
from .queryapi.auth import mint_token
from .queryapi.service import SIGNING_KEY_ENV, serve
from .synth import clustered_corpus, perturbed_queries

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_FATAL = 2


def _read_config_file(path: str | None) -> dict[str, str]:
    """key=value lines; '#' starts a comment."""
    if not path:
        return {}
    cfg = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition("=")
        cfg[key.strip()] = value.strip().strip('"')
    return cfg


def _setting(flag, env_name: str, file_cfg: dict, file_key: str, default=None):
    # Precedence: flags > environment > config file > default.
    if flag is not None:
        return flag
    if env_name and os.environ.get(env_name):
        return os.environ[env_name]
    if file_key in file_cfg:
        return file_cfg[file_key]
    return default


@click.group()
def main():
    """Desk-scale document embedding, indexing and search engine."""


@main.command()
@click.option("--store-root", required=True, type=click.Path())
@click.option("--corpus", required=True)
@click.option("--format", "fmt", required=True,
              type=click.Choice(["publication_jsonl", "patent_xml"]))
@click.option("--source", required=True, type=click.Path())
@click.option("--incremental", is_flag=True, help="Process only files newer than the watermark.")
@click.option("--workers", default=1, show_default=True)
def ingest(store_root, corpus, fmt, source, incremental, workers):
    """Parse a source directory, encode documents, and load store + indexes."""
    try:
        spec = SourceSpec(corpus=corpus, format=fmt, location=Path(source))
        with Engine(store_root) as engine:
            if incremental:
                mark = read_watermark(store_root, corpus)
                report, new_mark = incremental_update(spec, engine, mark, workers)
                if new_mark:
                    write_watermark(store_root, corpus, new_mark)
            else:
                report = run_pipeline(spec, engine, workers)
    except SourceUnreadable as exc:
        click.echo(f"fatal: {exc.message}", err=True)
        sys.exit(EXIT_FATAL)
    except (MillstoneError, ValueError) as exc:
        click.echo(f"fatal: {exc}", err=True)
        sys.exit(EXIT_FATAL)
    click.echo(json.dumps(report.as_dict(), indent=2))
    sys.exit(EXIT_OK)


@main.command()
@click.option("--store-root", type=click.Path())
@click.option("--addr", default=None, help="host:port to listen on")
@click.option("--signing-key", default=None)
@click.option("--config", "config_path", default=None, type=click.Path(exists=True))
def serve_cmd(store_root, addr, signing_key, config_path):
    """Serve the query API over HTTP."""
    file_cfg = _read_config_file(config_path)
    store_root = _setting(store_root, "MILLSTONE_STORE_ROOT", file_cfg, "store_root")
    addr = _setting(addr, "MILLSTONE_ADDR", file_cfg, "addr", "127.0.0.1:8080")
    signing_key = _setting(signing_key, SIGNING_KEY_ENV, file_cfg, "signing_key")
    if not store_root or not Path(store_root).exists():
        click.echo("fatal: --store-root does not exist", err=True)
        sys.exit(EXIT_FATAL)
    if not signing_key:
        click.echo(f"fatal: no signing key (--signing-key or {SIGNING_KEY_ENV})", err=True)
        sys.exit(EXIT_FATAL)
    host, _, port = addr.partition(":")
    click.echo(f"serving store {store_root} on {addr}")
    try:
        with Engine(store_root) as engine:
            serve(engine, signing_key, host or "127.0.0.1", int(port or 8080))
    except OSError as exc:
        click.echo(f"fatal: cannot bind {addr}: {exc}", err=True)
        sys.exit(EXIT_FATAL)


main.add_command(serve_cmd, name="serve")


@main.command()
@click.option("-n", "corpus_size", default=20000, show_default=True)
@click.option("-q", "n_queries", default=100, show_default=True)
@click.option("-k", default=10, show_default=True)
@click.option("--dim", default=768, show_default=True)
@click.option("--ef", "ef_values", default="10,50,100,200", show_default=True,
              help="Comma-separated ef_search values.")
@click.option("--seed", default=42, show_default=True)
@click.option("--figure", type=click.Path(), default=None,
              help="Also render a recall/latency figure to this file.")
def bench(corpus_size, n_queries, k, dim, ef_values, seed, figure):
    """Recall and latency of the ANN index against the exact oracle (CSV to stdout)."""
    vectors, _ = clustered_corpus(corpus_size, dim, seed=seed)
    queries = perturbed_queries(vectors, n_queries, seed=seed + 1)

    idx = HnswIndex(dim, HnswParams(rng_seed=seed))
    t0 = time.perf_counter()
    for i in range(corpus_size):
        idx.insert(f"doc{i:06d}", vectors[i])
    build_s = time.perf_counter() - t0

    store = [(f"doc{i:06d}", vectors[i]) for i in range(corpus_size)]
    exact = [[h.id for h in exact_search(store, q, k)] for q in queries]

    writer = csv.writer(sys.stdout)
    writer.writerow(["ef", "recall_at_k", "p50_ms", "p95_ms", "build_s"])
    rows = []
    for ef in [int(e) for e in ef_values.split(",")]:
        latencies = []
        recalls = []
        for q, truth in zip(queries, exact):
            t0 = time.perf_counter()
            hits = idx.search(q, k, ef=ef)
            latencies.append((time.perf_counter() - t0) * 1000.0)
            recalls.append(len(set(h.id for h in hits) & set(truth)) / len(truth))
        row = (
            ef,
            round(float(np.mean(recalls)), 4),
            round(float(np.percentile(latencies, 50)), 3),
            round(float(np.percentile(latencies, 95)), 3),
            round(build_s, 2),
        )
        rows.append(row)
        writer.writerow(row)

    if figure:
        _render_bench_figure(rows, k, figure)


def _render_bench_figure(rows, k, path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    efs = [r[0] for r in rows]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
    ax1.plot(efs, [r[1] for r in rows], marker="o")
    ax1.set_xlabel("ef_search")
    ax1.set_ylabel(f"recall@{k}")
    ax1.set_ylim(0, 1.05)
    ax1.grid(True, alpha=0.3)
    ax2.plot(efs, [r[2] for r in rows], marker="o", label="p50")
    ax2.plot(efs, [r[3] for r in rows], marker="s", label="p95")
    ax2.set_xlabel("ef_search")
    ax2.set_ylabel("latency (ms)")
    ax2.legend()
    ax2.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


@main.command()
@click.option("--subject", required=True)
@click.option("--ttl", default=86400, show_default=True, help="Lifetime in seconds.")
@click.option("--signing-key", default=None)
def token(subject, ttl, signing_key):
    """Mint a signed bearer token."""
    key = signing_key or os.environ.get(SIGNING_KEY_ENV)
    if not key:
        click.echo(f"fatal: no signing key (--signing-key or {SIGNING_KEY_ENV})", err=True)
        sys.exit(EXIT_FATAL)
    click.echo(mint_token(subject, ttl, key))


@main.command()
@click.option("--store-root", required=True, type=click.Path(exists=True))
@click.option("--corpus", required=True)
@click.option("--out", required=True, type=click.Path())
def snapshot(store_root, corpus, out):
    """Write the ANN index of one corpus to a snapshot file."""
    with Engine(store_root, readonly=True) as engine:
        idx = engine.ann.get(corpus)
        if idx is None:
            click.echo(f"fatal: no ANN index for corpus {corpus!r}", err=True)
            sys.exit(EXIT_FATAL)
        Path(out).write_bytes(idx.snapshot())
    click.echo(f"wrote {out} ({len(idx)} nodes)")


if __name__ == "__main__":
    main()
