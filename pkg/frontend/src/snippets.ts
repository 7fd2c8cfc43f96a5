/** Client-code generation for the current draft. Every flavor embeds the exact
 * query text and variables of the draft; the token is the placeholder "XXX"
 * unless the caller explicitly opts in to embedding the real one. */

import type { BuiltQuery } from "./draft.js";

export type SnippetFlavor = "shell" | "python" | "r" | "go";

export const SNIPPET_FLAVORS: SnippetFlavor[] = ["shell", "python", "r", "go"];

export interface SnippetOptions {
  baseUrl: string;
  /** Omit (default) to keep the placeholder; set only on an explicit toggle. */
  token?: string;
}

/** The envelope a snippet must post: byte-identical to the in-UI request. */
export function envelopeJson(built: BuiltQuery): string {
  const payload: Record<string, unknown> = { query: built.query };
  if (built.variables !== null) payload["variables"] = built.variables;
  return JSON.stringify(payload);
}

function shellSnippet(built: BuiltQuery, opts: SnippetOptions): string {
  const token = opts.token ?? "XXX";
  return [
    `curl -s -X POST '${opts.baseUrl}/api' \\`,
    `  -H 'content-type: application/json' \\`,
    `  -H 'Authorization: Bearer ${token}' \\`,
    `  --data-binary @- <<'MILLSTONE_ENVELOPE'`,
    envelopeJson(built),
    `MILLSTONE_ENVELOPE`,
  ].join("\n");
}

function pythonSnippet(built: BuiltQuery, opts: SnippetOptions): string {
  const token = opts.token ?? "XXX";
  const lines = [
    "import requests",
    "",
    `TOKEN = '${token}'`,
    `ENDPOINT = '${opts.baseUrl}/api'`,
    "headers = {",
    "  'content-type': 'application/json',",
    "  'Authorization': 'Bearer ' + TOKEN,",
    "}",
    'query = """' + built.query + '"""',
  ];
  if (built.variables !== null) {
    lines.push(`variables = ${JSON.stringify(built.variables, null, 2)}`);
    lines.push("r = requests.post(ENDPOINT, headers=headers,");
    lines.push("    json={'query': query, 'variables': variables})");
  } else {
    lines.push("r = requests.post(ENDPOINT, headers=headers, json={'query': query})");
  }
  lines.push("print(r.json())");
  return lines.join("\n");
}

function rSnippet(built: BuiltQuery, opts: SnippetOptions): string {
  const token = opts.token ?? "XXX";
  const body = envelopeJson(built);
  return [
    "library(httr)",
    "",
    `url <- '${opts.baseUrl}/api'`,
    `token <- '${token}'`,
    `body <- '${body.replace(/'/g, "\\'")}'`,
    "res <- POST(url,",
    "  add_headers('content-type' = 'application/json',",
    "              Authorization = paste('Bearer', token)),",
    "  body = body)",
    "content(res)",
  ].join("\n");
}

function goSnippet(built: BuiltQuery, opts: SnippetOptions): string {
  const token = opts.token ?? "XXX";
  const body = envelopeJson(built);
  return [
    "package main",
    "",
    "import (",
    '\t"fmt"',
    '\t"io"',
    '\t"net/http"',
    '\t"strings"',
    ")",
    "",
    "func main() {",
    `\tbody := ${JSON.stringify(body)}`,
    `\treq, _ := http.NewRequest("POST", "${opts.baseUrl}/api", strings.NewReader(body))`,
    '\treq.Header.Set("content-type", "application/json")',
    `\treq.Header.Set("Authorization", "Bearer ${token}")`,
    "\tresp, err := http.DefaultClient.Do(req)",
    "\tif err != nil {",
    "\t\tpanic(err)",
    "\t}",
    "\tdefer resp.Body.Close()",
    "\tout, _ := io.ReadAll(resp.Body)",
    "\tfmt.Println(string(out))",
    "}",
  ].join("\n");
}

const GENERATORS: Record<SnippetFlavor, (b: BuiltQuery, o: SnippetOptions) => string> = {
  shell: shellSnippet,
  python: pythonSnippet,
  r: rSnippet,
  go: goSnippet,
};

export function generateSnippet(
  flavor: SnippetFlavor,
  built: BuiltQuery,
  opts: SnippetOptions,
): string {
  return GENERATORS[flavor](built, opts);
}
