/** HTML rendering for query results: document cards, hit lists, similarity
 * matrix grids. Pure string functions so they can be unit tested headless. */

import type { ApiError } from "./api.js";

function esc(text: unknown): string {
  return String(text)
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

interface PartLike {
  key?: string;
  value?: string;
}

interface DocLike {
  id?: string;
  index?: string;
  documentParts?: PartLike[];
  metadata?: Record<string, string>;
  vector?: number[];
  score?: number;
}

function vectorPreview(vector: number[]): string {
  const head = vector.slice(0, 6).map((x) => x.toFixed(4)).join(", ");
  return `[${head}, …] (${vector.length} components)`;
}

export function renderDocumentCard(doc: DocLike | null): string {
  if (doc === null) return `<div class="card missing">not found</div>`;
  const rows: string[] = [];
  if (doc.id !== undefined) rows.push(`<div class="doc-id">${esc(doc.id)}</div>`);
  if (doc.index !== undefined) rows.push(`<div class="doc-index">${esc(doc.index)}</div>`);
  if (doc.score !== undefined)
    rows.push(`<div class="doc-score">score ${esc(doc.score.toFixed(6))}</div>`);
  for (const part of doc.documentParts ?? []) {
    const key = part.key !== undefined ? `<b>${esc(part.key)}</b> ` : "";
    rows.push(`<div class="doc-part">${key}${esc(part.value ?? "")}</div>`);
  }
  if (doc.metadata !== undefined) {
    const meta = Object.entries(doc.metadata)
      .map(([k, v]) => `${esc(k)}=${esc(v)}`)
      .join(" ");
    rows.push(`<div class="doc-meta">${meta}</div>`);
  }
  if (doc.vector !== undefined) {
    rows.push(`<div class="doc-vector">${esc(vectorPreview(doc.vector))}</div>`);
  }
  const follow =
    doc.id !== undefined && doc.index !== undefined
      ? ` data-follow-index="${esc(doc.index)}" data-follow-id="${esc(doc.id)}"`
      : "";
  return `<div class="card"${follow}>${rows.join("")}</div>`;
}

export function renderHitList(hits: DocLike[]): string {
  if (hits.length === 0) return `<p class="empty">no results</p>`;
  return `<div class="hits">${hits.map(renderDocumentCard).join("")}</div>`;
}

interface MatrixLike {
  sourceIds?: string[];
  targetIds?: string[];
  metric?: string;
  values?: number[][];
}

export function renderMatrix(matrix: MatrixLike): string {
  const sources = matrix.sourceIds ?? matrix.values?.map((_, i) => String(i)) ?? [];
  const targets = matrix.targetIds ?? matrix.values?.[0]?.map((_, j) => String(j)) ?? [];
  const head = targets.map((t) => `<th>${esc(t)}</th>`).join("");
  const rows = (matrix.values ?? [])
    .map((row, i) => {
      const cells = row.map((v) => `<td>${esc(v.toFixed(6))}</td>`).join("");
      return `<tr><th>${esc(sources[i] ?? i)}</th>${cells}</tr>`;
    })
    .join("");
  const caption = matrix.metric ? `<caption>${esc(matrix.metric)}</caption>` : "";
  return `<table class="matrix">${caption}<tr><th></th>${head}</tr>${rows}</table>`;
}

export function renderVector(vector: number[]): string {
  return `<div class="doc-vector">${esc(vectorPreview(vector))}</div>`;
}

export function renderErrors(errors: ApiError[]): string {
  const items = errors
    .map((e) => `<li><code>${esc(e.code)}</code> ${esc(e.message)}</li>`)
    .join("");
  return `<ul class="errors">${items}</ul>`;
}

/** Dispatch on the shape of one operation's result. */
export function renderResult(result: unknown): string {
  if (result === null || result === undefined) return renderDocumentCard(null);
  if (Array.isArray(result)) {
    if (result.length > 0 && typeof result[0] === "number")
      return renderVector(result as number[]);
    return renderHitList(result as DocLike[]);
  }
  if (typeof result === "object") {
    const obj = result as Record<string, unknown>;
    if ("values" in obj) return renderMatrix(obj as MatrixLike);
    return renderDocumentCard(obj as DocLike);
  }
  return `<pre>${esc(JSON.stringify(result))}</pre>`;
}
