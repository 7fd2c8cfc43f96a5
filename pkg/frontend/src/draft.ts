/** Query drafts: the form state behind the explorer, and the rendering of a
 * draft into query text + variables that the server parser accepts. */

import type { OperationSpec, SchemaDocument } from "./schema.js";

export interface SelectionNode {
  name: string;
  children?: SelectionNode[];
}

export interface QueryDraft {
  operation: string;
  /** Literal argument values; omitted args are simply not rendered. */
  args: Record<string, unknown>;
  selections: SelectionNode[];
  /** Render args as $variables with a query header instead of inline literals. */
  useVariables: boolean;
}

export interface BuiltQuery {
  query: string;
  variables: Record<string, unknown> | null;
}

/** Inline GraphQL value syntax: JSON except object keys are bare names. */
export function renderValue(value: unknown): string {
  if (value === null) return "null";
  if (Array.isArray(value)) {
    return "[" + value.map(renderValue).join(", ") + "]";
  }
  if (typeof value === "object") {
    const entries = Object.entries(value as Record<string, unknown>);
    return "{" + entries.map(([k, v]) => `${k}: ${renderValue(v)}`).join(", ") + "}";
  }
  return JSON.stringify(value);
}

function renderSelections(nodes: SelectionNode[], indent: number): string {
  const pad = "  ".repeat(indent);
  return nodes
    .map((n) => {
      if (n.children && n.children.length > 0) {
        return `${pad}${n.name} {\n${renderSelections(n.children, indent + 1)}\n${pad}}`;
      }
      return pad + n.name;
    })
    .join("\n");
}

/** Problems that make a draft unbuildable; empty list means buildQuery is safe. */
export function validateDraft(draft: QueryDraft, schema: SchemaDocument): string[] {
  const spec = schema.operations[draft.operation];
  if (!spec) return [`unknown operation ${draft.operation}`];
  const problems: string[] = [];
  for (const [name, arg] of Object.entries(spec.args)) {
    const value = draft.args[name];
    if (arg.required && (value === undefined || value === null || value === "")) {
      problems.push(`argument ${name} is required`);
    }
  }
  for (const name of Object.keys(draft.args)) {
    if (!(name in spec.args)) problems.push(`operation has no argument ${name}`);
  }
  if (spec.fields === null) {
    if (draft.selections.length > 0) problems.push("this operation returns a scalar");
  } else {
    if (draft.selections.length === 0) problems.push("select at least one response field");
    for (const sel of draft.selections) {
      const sub = spec.fields[sel.name];
      if (sub === undefined) problems.push(`unknown field ${sel.name}`);
      else if (sub === null && sel.children && sel.children.length > 0)
        problems.push(`field ${sel.name} has no sub-fields`);
      else if (Array.isArray(sub)) {
        if (!sel.children || sel.children.length === 0)
          problems.push(`field ${sel.name} needs at least one sub-field`);
        else
          for (const child of sel.children)
            if (!sub.includes(child.name)) problems.push(`unknown sub-field ${child.name}`);
      }
    }
  }
  return problems;
}

function presentArgs(draft: QueryDraft, spec: OperationSpec): [string, unknown][] {
  return Object.entries(spec.args)
    .filter(([name]) => {
      const v = draft.args[name];
      return v !== undefined && v !== null && v !== "";
    })
    .map(([name]) => [name, draft.args[name]]);
}

/** Render a validated draft. Throws on an invalid draft: the UI disables the
 * run button instead of ever emitting unparseable text. */
export function buildQuery(draft: QueryDraft, schema: SchemaDocument): BuiltQuery {
  const problems = validateDraft(draft, schema);
  if (problems.length > 0) {
    throw new Error("invalid draft: " + problems.join("; "));
  }
  const spec = schema.operations[draft.operation]!;
  const args = presentArgs(draft, spec);

  let header = "";
  let argText = "";
  let variables: Record<string, unknown> | null = null;
  if (draft.useVariables && args.length > 0) {
    const decls = args
      .map(([name]) => {
        const a = spec.args[name]!;
        return `$${name}: ${a.type}${a.required ? "!" : ""}`;
      })
      .join(", ");
    header = `query ${draft.operation}(${decls}) `;
    argText = "(" + args.map(([name]) => `${name}: $${name}`).join(", ") + ")";
    variables = Object.fromEntries(args);
  } else if (args.length > 0) {
    argText = "(" + args.map(([name, v]) => `${name}: ${renderValue(v)}`).join(", ") + ")";
  }

  let body = `  ${draft.operation}${argText}`;
  if (draft.selections.length > 0) {
    body += ` {\n${renderSelections(draft.selections, 2)}\n  }`;
  }
  return { query: `${header}{\n${body}\n}`, variables };
}

/** The feedback loop: clicking a result row pre-fills a Document query. */
export function followUpDraft(index: string, id: string): QueryDraft {
  return {
    operation: "Document",
    args: { index, id },
    selections: [
      { name: "id" },
      { name: "index" },
      { name: "documentParts", children: [{ name: "key" }, { name: "value" }] },
      { name: "metadata" },
    ],
    useVariables: false,
  };
}
