// Thin client over the engine's HTTP API. Every method maps to one
// documented endpoint; the console never computes results itself.

import {
    LedgerEntryJson,
    PipelineResponse,
    SavedQueryJson,
    StoreInfo,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
    constructor(public status: number, public detail: unknown) {
        super(`HTTP ${status}: ${JSON.stringify(detail)}`);
    }
}

export class ConsoleApi {
    constructor(
        private base: string = "",
        private fetchFn: FetchLike = (url, init) => fetch(url, init),
    ) {}

    private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
        const init: RequestInit = { method, headers: {} };
        if (body !== undefined) {
            init.headers = { "Content-Type": "application/json" };
            init.body = JSON.stringify(body);
        }
        const response = await this.fetchFn(this.base + path, init);
        const data = await response.json();
        if (!response.ok) {
            throw new ApiError(response.status, data);
        }
        return data as T;
    }

    query(text: string, session?: string, store?: string): Promise<PipelineResponse> {
        return this.request("POST", "/api/query", { text, session, store });
    }

    sql(sql: string, session?: string, store?: string): Promise<PipelineResponse> {
        return this.request("POST", "/api/sql", { sql, session, store });
    }

    history(session: string): Promise<{ session: string; entries: LedgerEntryJson[] }> {
        return this.request("GET", `/api/history?session=${encodeURIComponent(session)}`);
    }

    listSaved(): Promise<{ queries: SavedQueryJson[] }> {
        return this.request("GET", "/api/saved");
    }

    getSaved(name: string): Promise<SavedQueryJson> {
        return this.request("GET", `/api/saved/${encodeURIComponent(name)}`);
    }

    saveQuery(
        name: string,
        body: string,
        kind: "ir" | "sql",
        overwrite = false,
    ): Promise<SavedQueryJson> {
        return this.request("POST", "/api/saved", { name, body, kind, overwrite });
    }

    deleteSaved(name: string): Promise<{ deleted: string }> {
        return this.request("DELETE", `/api/saved/${encodeURIComponent(name)}`);
    }

    runSaved(
        name: string,
        bindings: (string | number)[],
        session?: string,
        store?: string,
    ): Promise<PipelineResponse> {
        return this.request("POST", `/api/saved/${encodeURIComponent(name)}/run`, {
            bindings,
            session,
            store,
        });
    }

    listStores(): Promise<{ stores: StoreInfo[] }> {
        return this.request("GET", "/api/stores");
    }

    createStore(name: string): Promise<StoreInfo> {
        return this.request("POST", "/api/stores", { name });
    }

    attachStore(name: string): Promise<StoreInfo> {
        return this.request("POST", `/api/stores/${encodeURIComponent(name)}/attach`);
    }

    detachStore(name: string): Promise<StoreInfo> {
        return this.request("POST", `/api/stores/${encodeURIComponent(name)}/detach`);
    }

    ingest(store: string, csv: string): Promise<{ store: string; count: number }> {
        return this.request("POST", "/api/ingest", { store, csv });
    }
}
