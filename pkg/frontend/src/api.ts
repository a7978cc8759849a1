/**
 * Typed client for the querytree session API.
 *
 * The console is a pure client: every question it shows comes from a
 * service response, never from local computation.
 */

export type Mode = "object" | "group";

export interface BuilderConfigDoc {
    lambda: number | "one" | "infinity";
    mode: Mode;
    prior?: "given" | "uniform";
    tiebreak?: "lowest" | { seed: number };
}

export interface InstanceSummary {
    id: string;
    objects: number;
    queries: number;
    groups: number | null;
}

export interface AwaitingStatus {
    state: "awaiting-answer";
    query: number;
    query_name: string;
}

export interface IdentifiedStatus {
    state: "identified";
    kind: "object" | "group";
    index: number;
    name: string;
}

export interface FailedStatus {
    state: "failed";
    reason: string;
}

export type SessionStatus = AwaitingStatus | IdentifiedStatus | FailedStatus;

export interface HistoryItem {
    query: number;
    query_name: string;
    bit: 0 | 1;
}

export interface SessionState {
    id: string;
    instance_id: string;
    config: BuilderConfigDoc;
    remaining: number[];
    remaining_names: string[];
    posterior: number[];
    history: HistoryItem[];
    questions_asked: number;
    status: SessionStatus;
}

export class ApiError extends Error {
    constructor(readonly status: number, message: string) {
        super(message);
    }
}

async function parseError(response: Response): Promise<never> {
    let message = `${response.status}`;
    try {
        const body = await response.json();
        if (body && typeof body.error === "string") message = body.error;
    } catch {
        // non-JSON error body; keep the status code
    }
    throw new ApiError(response.status, message);
}

export class ApiClient {
    constructor(
        readonly baseUrl: string = "",
        private readonly fetchImpl: typeof fetch = fetch,
    ) {}

    private async request<T>(path: string, init?: RequestInit): Promise<T> {
        const response = await this.fetchImpl(this.baseUrl + path, init);
        if (!response.ok) await parseError(response);
        if (response.status === 204) return undefined as T;
        return (await response.json()) as T;
    }

    private post<T>(path: string, body: unknown): Promise<T> {
        return this.request<T>(path, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(body),
        });
    }

    registerInstance(doc: unknown): Promise<InstanceSummary> {
        return this.post("/instances", doc);
    }

    listInstances(): Promise<InstanceSummary[]> {
        return this.request("/instances");
    }

    createSession(instanceId: string, config: BuilderConfigDoc): Promise<SessionState> {
        return this.post("/sessions", { instance_id: instanceId, config });
    }

    getSession(sessionId: string): Promise<SessionState> {
        return this.request(`/sessions/${sessionId}`);
    }

    /** Answers carry the question tag so retries are idempotent. */
    submitAnswer(sessionId: string, bit: 0 | 1, query: number): Promise<SessionState> {
        return this.post(`/sessions/${sessionId}/answers`, { bit, query });
    }

    deleteSession(sessionId: string): Promise<void> {
        return this.request(`/sessions/${sessionId}`, { method: "DELETE" });
    }
}
