// DOM wiring for the query console. All state lives here; everything
// painted on screen comes from an API response.

import { ApiError, ConsoleApi } from "./api.js";
import {
    rejectSubmission,
    renderBindingForm,
    renderDiagnostics,
    renderHistory,
    renderPipeline,
    renderResults,
    renderSavedQueries,
    renderStores,
} from "./render.js";
import { PipelineResponse } from "./types.js";

const api = new ConsoleApi("");

function sessionId(): string {
    let sid = sessionStorage.getItem("isoas-session");
    if (!sid) {
        sid = `web-${Math.random().toString(36).slice(2, 10)}`;
        sessionStorage.setItem("isoas-session", sid);
    }
    return sid;
}

const state = {
    session: sessionId(),
    activeStore: null as string | null,
    lastResponse: null as PipelineResponse | null,
    pendingRun: null as string | null, // saved query awaiting bindings
};

function el<T extends HTMLElement>(id: string): T {
    const node = document.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node as T;
}

function banner(message: string, kind: "info" | "error" = "info"): void {
    const strip = el("banner");
    strip.className = `banner ${kind}`;
    strip.textContent = message;
    strip.hidden = false;
    setTimeout(() => (strip.hidden = true), 4000);
}

function showResponse(resp: PipelineResponse): void {
    state.lastResponse = resp;
    el("pipeline").innerHTML = renderPipeline(resp);
    el("results").innerHTML = renderResults(resp);
    el("diagnostics").innerHTML = renderDiagnostics(resp);
    const params = resp.query?.params ?? [];
    el("bindings").innerHTML = resp.error?.type === "UnboundParameter"
        ? renderBindingForm(params)
        : "";
    el("save-current").toggleAttribute("disabled", resp.query === null);
    void refreshHistory();
}

async function submitQuery(): Promise<void> {
    const input = el<HTMLInputElement>("query-text");
    const text = input.value.trim();
    const store = state.activeStore;
    const problem = rejectSubmission(text, store);
    if (problem || store === null) {
        banner(problem ?? "select a store first", "error");
        return;
    }
    try {
        const asSql = el<HTMLInputElement>("sql-mode").checked;
        const resp = asSql
            ? await api.sql(text, state.session, store)
            : await api.query(text, state.session, store);
        showResponse(resp);
    } catch (err) {
        banner(describe(err), "error");
    }
}

async function refreshStores(): Promise<void> {
    const { stores } = await api.listStores();
    if (!state.activeStore) {
        const attached = stores.find((s) => s.state === "attached");
        state.activeStore = attached ? attached.name : null;
    }
    el("stores").innerHTML = renderStores(stores, state.activeStore);
    el("active-store").textContent = state.activeStore ?? "none";
    const detachedActive = stores.find(
        (s) => s.name === state.activeStore && s.state === "detached",
    );
    const queryBox = el<HTMLInputElement>("query-text");
    queryBox.toggleAttribute("disabled", Boolean(detachedActive) || !state.activeStore);
    queryBox.placeholder = detachedActive
        ? `store ${state.activeStore} is detached; attach it to search`
        : "e.g. I am looking for document";
}

async function refreshSaved(): Promise<void> {
    const { queries } = await api.listSaved();
    el("saved-list").innerHTML = renderSavedQueries(queries);
}

async function refreshHistory(): Promise<void> {
    const { entries } = await api.history(state.session);
    el("history").innerHTML = renderHistory(entries);
}

function describe(err: unknown): string {
    if (err instanceof ApiError) {
        const detail = err.detail as { detail?: { message?: string } };
        return detail?.detail?.message ?? err.message;
    }
    return err instanceof Error ? err.message : String(err);
}

async function storeAction(action: string, store: string): Promise<void> {
    try {
        if (action === "select") {
            state.activeStore = store;
        } else if (action === "attach") {
            await api.attachStore(store);
        } else if (action === "detach") {
            await api.detachStore(store);
        }
        await refreshStores();
    } catch (err) {
        banner(describe(err), "error");
    }
}

async function savedAction(action: string, name: string): Promise<void> {
    try {
        if (action === "delete-saved") {
            await api.deleteSaved(name);
            await refreshSaved();
            return;
        }
        if (action === "edit-saved") {
            const current = await api.getSaved(name);
            const body = prompt(`body for ${name} (${current.kind})`, current.body);
            if (body !== null) {
                await api.saveQuery(name, body, current.kind, true);
                await refreshSaved();
            }
            return;
        }
        // run: a query with holes needs a binding form first
        const saved = await api.getSaved(name);
        let params: [string, string][] = [];
        if (saved.kind === "ir") {
            const parsed = JSON.parse(saved.body) as { params?: [string, string][] };
            params = parsed.params ?? [];
        }
        if (params.length) {
            state.pendingRun = name;
            el("bindings").innerHTML = renderBindingForm(params);
            banner(`"${name}" needs ${params.length} value(s); fill the form`);
            return;
        }
        showResponse(await api.runSaved(name, [], state.session, state.activeStore ?? undefined));
    } catch (err) {
        banner(describe(err), "error");
    }
}

async function saveCurrent(): Promise<void> {
    const query = state.lastResponse?.query;
    if (!query) return;
    const name = prompt("save query as");
    if (!name) return;
    try {
        await api.saveQuery(name, JSON.stringify(query), "ir", true);
        banner(`saved ${name}`);
        await refreshSaved();
    } catch (err) {
        banner(describe(err), "error");
    }
}

async function submitBindings(form: HTMLFormElement): Promise<void> {
    const values = [...form.querySelectorAll<HTMLInputElement>("input.binding")].map(
        (input) => input.value,
    );
    try {
        if (state.pendingRun) {
            showResponse(
                await api.runSaved(state.pendingRun, values, state.session,
                    state.activeStore ?? undefined),
            );
            state.pendingRun = null;
            return;
        }
        // bind the just-typed parameterized query by saving it under a scratch name
        const query = state.lastResponse?.query;
        if (!query) return;
        await api.saveQuery("scratch", JSON.stringify(query), "ir", true);
        showResponse(
            await api.runSaved("scratch", values, state.session,
                state.activeStore ?? undefined),
        );
        await refreshSaved();
    } catch (err) {
        banner(describe(err), "error");
    }
}

async function createStore(): Promise<void> {
    const name = prompt("new store name");
    if (!name) return;
    try {
        await api.createStore(name);
        state.activeStore = name;
        await refreshStores();
    } catch (err) {
        banner(describe(err), "error");
    }
}

async function uploadCsv(input: HTMLInputElement): Promise<void> {
    const file = input.files?.[0];
    if (!file || !state.activeStore) return;
    try {
        const { count } = await api.ingest(state.activeStore, await file.text());
        banner(`ingested ${count} record(s) into ${state.activeStore}`);
        await refreshStores();
    } catch (err) {
        banner(describe(err), "error");
    } finally {
        input.value = "";
    }
}

export function boot(): void {
    el<HTMLFormElement>("query-form").addEventListener("submit", (event) => {
        event.preventDefault();
        void submitQuery();
    });
    el("save-current").addEventListener("click", () => void saveCurrent());
    el("create-store").addEventListener("click", () => void createStore());
    el<HTMLInputElement>("csv-upload").addEventListener("change", (event) => {
        void uploadCsv(event.target as HTMLInputElement);
    });
    el("stores").addEventListener("click", (event) => {
        const button = (event.target as HTMLElement).closest<HTMLElement>("button[data-action]");
        if (button) void storeAction(button.dataset.action!, button.dataset.store!);
    });
    el("saved-list").addEventListener("click", (event) => {
        const button = (event.target as HTMLElement).closest<HTMLElement>("button[data-action]");
        if (button) void savedAction(button.dataset.action!, button.dataset.name!);
    });
    el("bindings").addEventListener("submit", (event) => {
        event.preventDefault();
        void submitBindings(event.target as HTMLFormElement);
    });
    void refreshStores().then(refreshSaved).then(refreshHistory)
        .catch((err) => banner(describe(err), "error"));
}

if (typeof document !== "undefined" && document.getElementById("query-form")) {
    boot();
}
