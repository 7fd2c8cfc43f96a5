/** SPA wiring: schema-driven forms on the left, results and generated code on
 * the right. Clicking a result card pre-fills a Document follow-up query. */

import { ApiClient } from "./api.js";
import {
  buildQuery,
  followUpDraft,
  validateDraft,
  type QueryDraft,
  type SelectionNode,
} from "./draft.js";
import { renderErrors, renderResult } from "./render.js";
import type { SchemaDocument } from "./schema.js";
import { generateSnippet, SNIPPET_FLAVORS, type SnippetFlavor } from "./snippets.js";

interface AppState {
  schema: SchemaDocument;
  client: ApiClient;
  draft: QueryDraft;
  flavor: SnippetFlavor;
  embedToken: boolean;
  requestSeq: number;
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function defaultDraft(schema: SchemaDocument, operation: string): QueryDraft {
  const spec = schema.operations[operation]!;
  const selections: SelectionNode[] =
    spec.fields === null
      ? []
      : Object.keys(spec.fields)
          .filter((f) => f === "id" || f === "score" || f === "values")
          .map((name) => ({ name }));
  if (selections.length === 0 && spec.fields !== null) {
    selections.push({ name: Object.keys(spec.fields)[0]! });
  }
  return { operation, args: {}, selections, useVariables: false };
}

function renderArgForm(state: AppState): void {
  const spec = state.schema.operations[state.draft.operation]!;
  const form = el<HTMLDivElement>("args");
  form.innerHTML = "";
  for (const [name, arg] of Object.entries(spec.args)) {
    const row = document.createElement("label");
    row.className = "arg-row";
    row.textContent = `${name} (${arg.type}${arg.required ? ", required" : ""}) `;
    const input = document.createElement(
      arg.type.startsWith("[") || state.schema.inputTypes[arg.type.replace(/[[\]]/g, "")]
        ? "textarea"
        : "input",
    ) as HTMLInputElement | HTMLTextAreaElement;
    input.value = formatArg(state.draft.args[name]);
    input.addEventListener("input", () => {
      const parsed = parseArg(input.value, arg.type);
      if (parsed === undefined) delete state.draft.args[name];
      else state.draft.args[name] = parsed;
      refresh(state);
    });
    row.appendChild(input);
    form.appendChild(row);
  }
}

function formatArg(value: unknown): string {
  if (value === undefined) return "";
  if (typeof value === "string") return value;
  return JSON.stringify(value);
}

function parseArg(text: string, type: string): unknown {
  if (text.trim() === "") return undefined;
  if (type === "String") return text;
  if (type === "Int") {
    const n = Number.parseInt(text, 10);
    return Number.isNaN(n) ? undefined : n;
  }
  try {
    return JSON.parse(text);
  } catch {
    return undefined;
  }
}

function renderFieldBoxes(state: AppState): void {
  const spec = state.schema.operations[state.draft.operation]!;
  const box = el<HTMLDivElement>("fields");
  box.innerHTML = "";
  if (spec.fields === null) {
    box.textContent = "returns a scalar vector";
    return;
  }
  for (const field of Object.keys(spec.fields)) {
    const label = document.createElement("label");
    const check = document.createElement("input");
    check.type = "checkbox";
    check.checked = state.draft.selections.some((s) => s.name === field);
    check.addEventListener("change", () => {
      if (check.checked) {
        const sub = spec.fields === null ? null : spec.fields[field];
        const children = sub ? sub.map((name) => ({ name })) : undefined;
        state.draft.selections.push({ name: field, children });
      } else {
        state.draft.selections = state.draft.selections.filter((s) => s.name !== field);
      }
      refresh(state);
    });
    label.appendChild(check);
    label.appendChild(document.createTextNode(" " + field));
    box.appendChild(label);
  }
}

function refresh(state: AppState): void {
  const problems = validateDraft(state.draft, state.schema);
  const queryBox = el<HTMLPreElement>("query-text");
  const runButton = el<HTMLButtonElement>("run");
  el<HTMLDivElement>("validation").textContent = problems.join("; ");
  runButton.disabled = problems.length > 0;
  if (problems.length > 0) {
    queryBox.textContent = "";
    el<HTMLPreElement>("snippet").textContent = "";
    return;
  }
  const built = buildQuery(state.draft, state.schema);
  queryBox.textContent =
    built.query +
    (built.variables ? "\n\nvariables: " + JSON.stringify(built.variables, null, 2) : "");
  el<HTMLPreElement>("snippet").textContent = generateSnippet(state.flavor, built, {
    baseUrl: state.client.baseUrl,
    token: state.embedToken && state.client.token ? state.client.token : undefined,
  });
}

async function run(state: AppState): Promise<void> {
  const built = buildQuery(state.draft, state.schema);
  const seq = ++state.requestSeq;
  const resp = await state.client.runQuery(built.query, built.variables);
  if (seq !== state.requestSeq) return; // a newer request superseded this one
  const out = el<HTMLDivElement>("results");
  if (resp.status === 401) {
    out.innerHTML = `<p class="auth">Not authorized: paste a token above.</p>`;
    return;
  }
  if (resp.body.errors) {
    out.innerHTML = renderErrors(resp.body.errors);
    return;
  }
  const result = resp.body.data?.[state.draft.operation];
  out.innerHTML = renderResult(result);
}

function attachFollowUp(state: AppState): void {
  el<HTMLDivElement>("results").addEventListener("click", (event) => {
    const card = (event.target as HTMLElement).closest<HTMLElement>("[data-follow-id]");
    if (!card) return;
    state.draft = followUpDraft(card.dataset["followIndex"]!, card.dataset["followId"]!);
    el<HTMLSelectElement>("operation").value = "Document";
    renderArgForm(state);
    renderFieldBoxes(state);
    refresh(state);
  });
}

export async function start(baseUrl: string): Promise<void> {
  const client = new ApiClient(baseUrl, sessionStorage.getItem("millstone-token"));
  const schema = await client.fetchSchema();
  const state: AppState = {
    schema,
    client,
    draft: defaultDraft(schema, "Document"),
    flavor: "shell",
    embedToken: false,
    requestSeq: 0,
  };

  const opSelect = el<HTMLSelectElement>("operation");
  for (const name of Object.keys(schema.operations)) {
    const option = document.createElement("option");
    option.value = name;
    option.textContent = name;
    opSelect.appendChild(option);
  }
  opSelect.addEventListener("change", () => {
    state.draft = defaultDraft(schema, opSelect.value);
    renderArgForm(state);
    renderFieldBoxes(state);
    refresh(state);
  });

  const tokenInput = el<HTMLInputElement>("token");
  tokenInput.value = client.token ?? "";
  tokenInput.addEventListener("change", () => {
    client.token = tokenInput.value || null;
    sessionStorage.setItem("millstone-token", tokenInput.value);
  });

  const flavorSelect = el<HTMLSelectElement>("flavor");
  for (const flavor of SNIPPET_FLAVORS) {
    const option = document.createElement("option");
    option.value = flavor;
    option.textContent = flavor;
    flavorSelect.appendChild(option);
  }
  flavorSelect.addEventListener("change", () => {
    state.flavor = flavorSelect.value as SnippetFlavor;
    refresh(state);
  });
  el<HTMLInputElement>("embed-token").addEventListener("change", (event) => {
    state.embedToken = (event.target as HTMLInputElement).checked;
    refresh(state);
  });

  el<HTMLButtonElement>("run").addEventListener("click", () => void run(state));
  attachFollowUp(state);
  renderArgForm(state);
  renderFieldBoxes(state);
  refresh(state);
}
