import { describe, expect, it } from "vitest";

import type { BuiltQuery } from "../src/draft.js";
import { envelopeJson, generateSnippet, SNIPPET_FLAVORS } from "../src/snippets.js";

const BUILT: BuiltQuery = {
  query: '{\n  Document(index: "epo_cos", id: "EP19164094B1") {\n    id\n  }\n}',
  variables: null,
};

const WITH_VARS: BuiltQuery = {
  query: "query Document($id: String!) {\n  Document(index: \"epo_cos\", id: $id) {\n    id\n  }\n}",
  variables: { id: "EP19164094B1" },
};

const OPTS = { baseUrl: "http://127.0.0.1:8080" };

describe("envelopeJson", () => {
  it("omits variables when none are used", () => {
    expect(JSON.parse(envelopeJson(BUILT))).toEqual({ query: BUILT.query });
  });

  it("includes the variables object", () => {
    expect(JSON.parse(envelopeJson(WITH_VARS))).toEqual({
      query: WITH_VARS.query,
      variables: { id: "EP19164094B1" },
    });
  });
});

describe("generateSnippet", () => {
  it("embeds the exact query text in every flavor", () => {
    for (const flavor of SNIPPET_FLAVORS) {
      const snippet = generateSnippet(flavor, WITH_VARS, OPTS);
      expect(snippet).toContain("EP19164094B1");
      expect(snippet).toContain(OPTS.baseUrl);
    }
  });

  it("uses the XXX placeholder unless a token is explicitly embedded", () => {
    for (const flavor of SNIPPET_FLAVORS) {
      expect(generateSnippet(flavor, BUILT, OPTS)).toContain("XXX");
      const embedded = generateSnippet(flavor, BUILT, { ...OPTS, token: "secret-token" });
      expect(embedded).toContain("secret-token");
      expect(embedded).not.toContain("XXX");
    }
  });

  it("shell snippet carries the envelope verbatim in a heredoc", () => {
    const snippet = generateSnippet("shell", WITH_VARS, OPTS);
    expect(snippet).toContain(envelopeJson(WITH_VARS));
    expect(snippet).toContain("--data-binary @-");
  });

  it("python snippet follows the requests structure", () => {
    const snippet = generateSnippet("python", WITH_VARS, OPTS);
    expect(snippet).toContain("import requests");
    expect(snippet).toContain("'Authorization': 'Bearer ' + TOKEN");
    expect(snippet).toContain('query = """');
  });
});
