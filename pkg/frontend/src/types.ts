// Serialized engine types, as produced by the HTTP API.

export interface TokenJson {
    class: string;
    lexeme: string;
    surface: string;
    span: [number, number];
}

export interface TokenStreamJson {
    source: string;
    tokens: TokenJson[];
}

export interface LiteralJson {
    text: string;
    numeric: boolean;
}

export interface ConditionJson {
    kind: string;
    op: string | null;
    lo: LiteralJson | null;
    hi: LiteralJson | null;
    value: LiteralJson | null;
}

export interface ModelJson {
    intent: string;
    subject: string | null;
    predicate: string | null;
    concept: string | null;
    condition: ConditionJson | null;
    rule: string;
}

export interface FilterJson {
    type: string;
    op?: string;
    value?: LiteralJson;
    lo?: LiteralJson;
    hi?: LiteralJson;
    children?: FilterJson[];
}

export interface QueryJson {
    store: string;
    concepts: string[];
    attribute: string;
    filter: FilterJson | null;
    params: [string, string][];
    notes: string[];
}

export interface RecordJson {
    id: number;
    name: string;
    kind: string;
    description: string;
    value: number;
}

export interface ErrorJson {
    stage: string;
    type: string;
    message: string;
    expected?: string[];
    params?: [string, string][];
    [extra: string]: unknown;
}

export interface PipelineResponse {
    input_id: number | null;
    session: string | null;
    store: string | null;
    tokens: TokenStreamJson | null;
    rules: string[] | null;
    models: ModelJson[] | null;
    query: QueryJson | null;
    sql: string | null;
    results: RecordJson[] | null;
    diagnostics: string[];
    error: ErrorJson | null;
}

export interface StoreInfo {
    name: string;
    state: "attached" | "detached";
    condition_attribute?: string;
    records: number | null;
}

export interface SavedQueryJson {
    name: string;
    body: string;
    kind: "ir" | "sql";
    created: string;
    modified: string;
}

export interface LedgerEntryJson {
    input_id: number;
    session: string;
    stage: string;
    payload: unknown;
    ts: string;
}
