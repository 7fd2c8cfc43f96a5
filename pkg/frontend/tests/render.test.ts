import { describe, expect, it } from "vitest";

import { renderDocumentCard, renderMatrix, renderResult } from "../src/render.js";

describe("renderDocumentCard", () => {
  it("renders id, parts, score and follow-up attributes", () => {
    const html = renderDocumentCard({
      id: "EP1",
      index: "epo_cos",
      score: 0.987654321,
      documentParts: [{ key: "title", value: "Airbags" }],
    });
    expect(html).toContain("EP1");
    expect(html).toContain("Airbags");
    expect(html).toContain("score 0.987654");
    expect(html).toContain('data-follow-index="epo_cos"');
    expect(html).toContain('data-follow-id="EP1"');
  });

  it("escapes markup in document text", () => {
    const html = renderDocumentCard({
      id: "x",
      documentParts: [{ key: "title", value: "<script>alert(1)</script>" }],
    });
    expect(html).not.toContain("<script>");
    expect(html).toContain("&lt;script&gt;");
  });

  it("renders null as a missing card", () => {
    expect(renderDocumentCard(null)).toContain("not found");
  });
});

describe("renderMatrix", () => {
  it("renders sources x targets cells", () => {
    const html = renderMatrix({
      sourceIds: ["a", "b"],
      targetIds: ["c"],
      metric: "cosine",
      values: [[0.5], [0.25]],
    });
    expect(html).toContain("<caption>cosine</caption>");
    expect((html.match(/<td>/g) ?? []).length).toBe(2);
    expect(html).toContain("0.500000");
  });
});

describe("renderResult dispatch", () => {
  it("routes vectors, hit lists and matrices by shape", () => {
    expect(renderResult([0.1, 0.2, 0.3])).toContain("3 components");
    expect(renderResult([{ id: "a", score: 1 }])).toContain("hits");
    expect(renderResult({ values: [[1]] })).toContain("matrix");
    expect(renderResult(null)).toContain("not found");
  });
});
