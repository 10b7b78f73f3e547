// Pure view builders: engine JSON in, HTML strings out. Keeping these
// DOM-free makes the whole pipeline panel testable without a browser.

import {
    LedgerEntryJson,
    ModelJson,
    PipelineResponse,
    SavedQueryJson,
    StoreInfo,
    TokenStreamJson,
} from "./types.js";

/** Local pre-flight check; returns a problem description or null to send. */
export function rejectSubmission(text: string, activeStore: string | null): string | null {
    if (!text.trim()) return "type a request first";
    if (!activeStore) return "select a store first";
    return null;
}

export function escapeHtml(text: string): string {
    return text
        .replace(/&/g, "&amp;")
        .replace(/</g, "&lt;")
        .replace(/>/g, "&gt;")
        .replace(/"/g, "&quot;")
        .replace(/'/g, "&#39;");
}

const STAGES = ["input", "lexed", "parsed", "modeled", "resolved", "executed"];

export function renderTokens(tokens: TokenStreamJson, errorStage?: string): string {
    const failing = errorStage === "modeled";
    const badges = tokens.tokens
        .map((t) => {
            // on an agreement/composition failure the verb badge carries the blame
            const blame = failing && t.class === "B" ? " blamed" : "";
            return (
                `<span class="token cls-${escapeHtml(t.class)}${blame}">` +
                `<em>${escapeHtml(t.class)}</em>${escapeHtml(t.lexeme)}</span>`
            );
        })
        .join(" ");
    return `<div class="token-row">${badges || "<span class='muted'>no tokens</span>"}</div>`;
}

function renderModel(model: ModelJson): string {
    const bits = [`<strong>${escapeHtml(model.intent)}</strong>`];
    if (model.subject) bits.push(`subject <code>${escapeHtml(model.subject)}</code>`);
    if (model.predicate) bits.push(`verb <code>${escapeHtml(model.predicate)}</code>`);
    if (model.concept) bits.push(`concept <code>${escapeHtml(model.concept)}</code>`);
    const cond = model.condition;
    if (cond) {
        const parts: string[] = [cond.kind];
        if (cond.op) parts.push(`op ${cond.op}`);
        if (cond.lo && cond.hi) parts.push(`${cond.lo.text}..${cond.hi.text}`);
        if (cond.value) parts.push(`value ${cond.value.text}`);
        bits.push(`condition <code>${escapeHtml(parts.join(" "))}</code>`);
    }
    return `<li>${bits.join(" · ")}</li>`;
}

export function renderPipeline(resp: PipelineResponse): string {
    const errorStage = resp.error?.stage;
    const rows: string[] = [];

    rows.push(stageRow("lexed", resp.tokens !== null, errorStage,
        resp.tokens ? renderTokens(resp.tokens, errorStage) : ""));
    rows.push(stageRow("parsed", resp.rules !== null, errorStage,
        resp.rules
            ? resp.rules.map((r) => `<span class="rule">${escapeHtml(r)}</span>`).join(" ")
            : ""));
    rows.push(stageRow("modeled", resp.models !== null, errorStage,
        resp.models ? `<ul class="models">${resp.models.map(renderModel).join("")}</ul>` : ""));
    rows.push(stageRow("resolved", resp.query !== null, errorStage,
        resp.query
            ? `<code>${escapeHtml(resp.query.concepts.join(", "))}</code>` +
              (resp.query.params.length
                  ? ` <span class="hole">${resp.query.params.length} unbound</span>`
                  : "")
            : ""));
    rows.push(stageRow("executed", resp.sql !== null, errorStage,
        resp.sql ? `<pre class="sql">${escapeHtml(resp.sql)}</pre>` : ""));

    return `<div class="pipeline">${rows.join("")}</div>`;
}

function stageRow(stage: string, done: boolean, errorStage: string | undefined, body: string): string {
    let cls = done ? "done" : "pending";
    if (errorStage === stage) cls = "failed";
    // stages after the failing one are simply absent
    if (errorStage && STAGES.indexOf(stage) > STAGES.indexOf(errorStage)) cls = "skipped";
    return (
        `<div class="stage ${cls}" data-stage="${stage}">` +
        `<span class="stage-name">${stage}</span><div class="stage-body">${body}</div></div>`
    );
}

export function renderResults(resp: PipelineResponse): string {
    if (resp.results === null) {
        return `<p class="muted">no results</p>`;
    }
    if (resp.results.length === 0) {
        return `<p class="muted">0 rows</p>`;
    }
    const rows = resp.results
        .map(
            (r) =>
                `<tr><td>${r.id}</td><td>${escapeHtml(r.name)}</td>` +
                `<td>${escapeHtml(r.kind)}</td><td>${r.value}</td></tr>`,
        )
        .join("");
    return (
        `<table class="results"><thead><tr>` +
        `<th>id</th><th>name</th><th>kind</th><th>value</th></tr></thead>` +
        `<tbody>${rows}</tbody></table>`
    );
}

export function renderDiagnostics(resp: PipelineResponse): string {
    const notes = resp.diagnostics
        .map((d) => `<div class="note">${escapeHtml(d)}</div>`)
        .join("");
    if (!resp.error) {
        return `<div class="diagnostics">${notes}</div>`;
    }
    const err = resp.error;
    let hint = "";
    if (err.expected && err.expected.length) {
        hint = `<div class="hint">expected next: ${err.expected.map(escapeHtml).join(", ")}</div>`;
    }
    return (
        `<div class="diagnostics">${notes}` +
        `<div class="error">failed at <strong>${escapeHtml(err.stage)}</strong>: ` +
        `${escapeHtml(err.type)} — ${escapeHtml(err.message)}</div>${hint}</div>`
    );
}

export function renderBindingForm(params: [string, string][]): string {
    if (!params.length) return "";
    const fields = params
        .map(
            ([attr, op], i) =>
                `<label>${escapeHtml(attr)} ${escapeHtml(op)} ` +
                `<input class="binding" data-index="${i}" placeholder="value"></label>`,
        )
        .join("");
    return `<form class="bindings">${fields}<button type="submit">run with values</button></form>`;
}

export function renderStores(stores: StoreInfo[], active: string | null): string {
    const items = stores
        .map((s) => {
            const detached = s.state === "detached";
            const classes = [
                "store",
                detached ? "detached" : "",
                s.name === active ? "active" : "",
            ]
                .filter(Boolean)
                .join(" ");
            const count = s.records === null ? "—" : `${s.records}`;
            const select = detached
                ? `<span class="muted">(detached)</span>`
                : `<button data-action="select" data-store="${escapeHtml(s.name)}">select</button>`;
            const toggle = detached
                ? `<button data-action="attach" data-store="${escapeHtml(s.name)}">attach</button>`
                : `<button data-action="detach" data-store="${escapeHtml(s.name)}">detach</button>`;
            return (
                `<li class="${classes}"><span class="store-name">${escapeHtml(s.name)}</span>` +
                ` <span class="count">${count}</span> ${select} ${toggle}</li>`
            );
        })
        .join("");
    return `<ul class="stores">${items}</ul>`;
}

export function renderSavedQueries(queries: SavedQueryJson[]): string {
    if (!queries.length) return `<p class="muted">no saved queries</p>`;
    const items = queries
        .map(
            (q) =>
                `<li><span class="saved-name">${escapeHtml(q.name)}</span>` +
                ` <span class="kind">${q.kind}</span>` +
                ` <button data-action="run-saved" data-name="${escapeHtml(q.name)}">run</button>` +
                ` <button data-action="edit-saved" data-name="${escapeHtml(q.name)}">edit</button>` +
                ` <button data-action="delete-saved" data-name="${escapeHtml(q.name)}">delete</button></li>`,
        )
        .join("");
    return `<ul class="saved">${items}</ul>`;
}

export function renderHistory(entries: LedgerEntryJson[]): string {
    if (!entries.length) return `<p class="muted">no history yet</p>`;
    const byInput = new Map<number, string[]>();
    for (const e of entries) {
        const stages = byInput.get(e.input_id) ?? [];
        stages.push(e.stage);
        byInput.set(e.input_id, stages);
    }
    const items = [...byInput.entries()]
        .map(
            ([id, stages]) =>
                `<li><span class="input-id">#${id}</span> ${stages
                    .map((s) => `<span class="stage-chip">${escapeHtml(s)}</span>`)
                    .join("")}</li>`,
        )
        .join("");
    return `<ul class="history">${items}</ul>`;
}
