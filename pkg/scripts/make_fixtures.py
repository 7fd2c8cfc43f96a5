"""Regenerates the committed test fixtures under fixtures/.

Deterministic: a seeded word generator builds 60 publication JSONL records and
40 patent XML files (including EPO patent EP19164094B1 with the airbag text
used across the test suite).
"""

import json
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent / "fixtures"

TOPICS = {
    "airbag": "airbag vehicle crash restraint inflate sensor collision safety deployment cushion",
    "battery": "battery lithium anode cathode electrolyte charge cell energy density capacity",
    "laser": "laser optical beam photon wavelength cavity diode emission coherent amplifier",
    "protein": "protein enzyme binding receptor molecule amino acid folding structure assay",
    "network": "network packet routing latency bandwidth protocol node congestion throughput queue",
    "turbine": "turbine blade rotor stator airflow compressor efficiency cooling combustion stage",
}

JOURNALS = ["Journal of Applied Mechanics", "Nature Materials", "IEEE Transactions", "Physics Letters"]


def sentence(rng, words, n):
    return " ".join(rng.choice(words) for _ in range(n)).capitalize() + "."


def paragraph(rng, topic, n_sentences):
    words = TOPICS[topic].split()
    return " ".join(sentence(rng, words, rng.randint(8, 16)) for _ in range(n_sentences))


def make_publications():
    rng = random.Random(101)
    out_dir = ROOT / "publications"
    out_dir.mkdir(parents=True, exist_ok=True)
    topics = list(TOPICS)
    lines = []
    for i in range(60):
        topic = topics[i % len(topics)]
        rec = {
            "id": f"S2{i:06d}",
            "title": paragraph(rng, topic, 1).rstrip("."),
            "abstract": paragraph(rng, topic, 4),
            "year": rng.randint(1990, 2022),
            "journal": rng.choice(JOURNALS),
            "doi": f"10.1000/s2.{i:06d}",
            "authors": [f"Author {chr(65 + rng.randint(0, 25))}. {chr(65 + i % 26)}"],
        }
        if i % 17 == 3:
            del rec["title"]  # abstract-only records appear in real feeds
        lines.append(json.dumps(rec))
    (out_dir / "batch_001.jsonl").write_text("\n".join(lines[:30]) + "\n")
    (out_dir / "batch_002.jsonl").write_text("\n".join(lines[30:]) + "\n")


PATENT_XML = """<patent-document pub-number="{num}" country="{country}" kind="{kind}" date="{date}">
  <title>{title}</title>
  <abstract>{abstract}</abstract>
  <claims>{claims}</claims>
  <description>{description}</description>
  <classification>{cls}</classification>
</patent-document>
"""


def make_patents():
    rng = random.Random(202)
    topics = list(TOPICS)
    for sub in ("epo", "uspto", "wipo"):
        (ROOT / "patents" / sub).mkdir(parents=True, exist_ok=True)
    # The airbag patent referenced throughout the tests.
    (ROOT / "patents" / "epo" / "EP19164094B1.xml").write_text(
        PATENT_XML.format(
            num="EP19164094B1",
            country="EP",
            kind="B1",
            date="20220316",
            title="Airbags",
            abstract="Airbags are inflatable restraint devices that protect occupants during a crash.",
            claims="1. An airbag apparatus comprising an inflatable cushion and a crash sensor.",
            description=paragraph(rng, "airbag", 6),
            cls="B60R 21/36",
        )
    )
    for i in range(39):
        topic = topics[i % len(topics)]
        if i < 20:
            num, country, kind, sub = f"EP{19000000 + i * 7:d}A1", "EP", "A1", "epo"
        elif i < 30:
            num, country, kind, sub = f"2013{226000 + i:06d}", "US", "A1", "uspto"
        else:
            num, country, kind, sub = f"WO20180{52000 + i:05d}", "WO", "A1", "wipo"
        (ROOT / "patents" / sub / f"{num}.xml").write_text(
            PATENT_XML.format(
                num=num,
                country=country,
                kind=kind,
                date=f"20{rng.randint(10, 22)}{rng.randint(1, 12):02d}{rng.randint(1, 28):02d}",
                title=paragraph(rng, topic, 1).rstrip("."),
                abstract=paragraph(rng, topic, 3),
                claims="1. " + paragraph(rng, topic, 2),
                description=paragraph(rng, topic, 5),
                cls=f"{chr(65 + i % 8)}{rng.randint(1, 99):02d}{chr(65 + (i * 3) % 26)} {rng.randint(1, 99)}/{rng.randint(1, 99):02d}",
            )
        )


def make_dirty():
    out_dir = ROOT / "dirty"
    out_dir.mkdir(parents=True, exist_ok=True)
    lines = [
        json.dumps({"id": "OK1", "title": "Working record", "abstract": "Parses fine."}),
        "{not valid json",
        json.dumps({"id": "OK2", "abstract": "Abstract only record."}),
        json.dumps({"id": "NOTEXT1", "year": 2020}),
        json.dumps({"id": "OK3", "title": "Another fine record", "abstract": "Also parses."}),
        '["wrong shape"]',
    ]
    (out_dir / "mixed.jsonl").write_text("\n".join(lines) + "\n")
    (out_dir / "broken.xml").write_text("<patent-document pub-number='X'><title>Unclosed\n")


if __name__ == "__main__":
    make_publications()
    make_patents()
    make_dirty()
    n_pub = sum(
        len(p.read_text().splitlines()) for p in (ROOT / "publications").glob("*.jsonl")
    )
    n_pat = len(list((ROOT / "patents").rglob("*.xml")))
    print(f"wrote {n_pub} publication records, {n_pat} patent files")
