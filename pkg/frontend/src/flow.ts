/**
 * Session flow state machine.
 *
 * Screens: picker -> question -> result (or failed). State renders only
 * from service responses (optimistic UI disabled); a lost submission can
 * be retried because answers are tagged with their question id.
 */

import { ApiClient, ApiError, BuilderConfigDoc, InstanceSummary, SessionState } from "./api.js";

export type Screen = "picker" | "question" | "result" | "failed";

export interface FlowView {
    screen: Screen;
    instances: InstanceSummary[];
    session: SessionState | null;
    banner: string | null;
    canRetry: boolean;
    busy: boolean;
}

type PendingAnswer = { sessionId: string; bit: 0 | 1; query: number };

export const LAMBDA_STOPS: Array<number | "one" | "infinity"> = [
    "one", 1.5, 2, 5, 10, "infinity",
];

export function lambdaStopLabel(stop: number | "one" | "infinity"): string {
    if (stop === "one") return "1";
    if (stop === "infinity") return "∞";
    return String(stop);
}

function screenFor(session: SessionState): Screen {
    switch (session.status.state) {
        case "awaiting-answer":
            return "question";
        case "identified":
            return "result";
        case "failed":
            return "failed";
    }
}

export class SessionFlow {
    private view: FlowView = {
        screen: "picker",
        instances: [],
        session: null,
        banner: null,
        canRetry: false,
        busy: false,
    };
    private lastAnswer: PendingAnswer | null = null;
    private listeners: Array<(view: FlowView) => void> = [];

    constructor(private readonly client: ApiClient) {}

    onChange(listener: (view: FlowView) => void): void {
        this.listeners.push(listener);
    }

    current(): FlowView {
        return this.view;
    }

    private update(patch: Partial<FlowView>): void {
        this.view = { ...this.view, ...patch };
        for (const listener of this.listeners) listener(this.view);
    }

    async refreshInstances(): Promise<void> {
        try {
            const instances = await this.client.listInstances();
            this.update({ instances, banner: null });
        } catch (error) {
            this.update({ banner: describe(error), canRetry: false });
        }
    }

    async registerInstance(doc: unknown): Promise<void> {
        this.update({ busy: true });
        try {
            await this.client.registerInstance(doc);
            await this.refreshInstances();
        } catch (error) {
            this.update({ banner: describe(error), canRetry: false });
        } finally {
            this.update({ busy: false });
        }
    }

    async start(instanceId: string, config: BuilderConfigDoc): Promise<void> {
        this.update({ busy: true });
        try {
            const session = await this.client.createSession(instanceId, config);
            this.lastAnswer = null;
            this.update({ session, screen: screenFor(session), banner: null, busy: false });
        } catch (error) {
            this.update({ banner: describe(error), canRetry: false, busy: false });
        }
    }

    async answer(bit: 0 | 1): Promise<void> {
        const session = this.view.session;
        if (!session || session.status.state !== "awaiting-answer" || this.view.busy) return;
        this.lastAnswer = { sessionId: session.id, bit, query: session.status.query };
        await this.submit(this.lastAnswer);
    }

    /** Re-send the last answer after a connectivity failure (idempotent). */
    async retry(): Promise<void> {
        if (this.lastAnswer) await this.submit(this.lastAnswer);
    }

    private async submit(pending: PendingAnswer): Promise<void> {
        this.update({ busy: true });
        try {
            const session = await this.client.submitAnswer(
                pending.sessionId, pending.bit, pending.query,
            );
            this.update({ session, screen: screenFor(session), banner: null, canRetry: false, busy: false });
        } catch (error) {
            if (error instanceof ApiError) {
                // conflict/invalid: re-sync from the service, no retry offered
                try {
                    const session = await this.client.getSession(pending.sessionId);
                    this.update({ session, screen: screenFor(session), banner: describe(error), canRetry: false, busy: false });
                    return;
                } catch {
                    // fall through to the generic banner
                }
            }
            this.update({ banner: describe(error), canRetry: true, busy: false });
        }
    }

    /** Surface a client-side problem (e.g. an unreadable upload). */
    reportError(message: string): void {
        this.update({ banner: message, canRetry: false });
    }

    async restart(): Promise<void> {
        const session = this.view.session;
        this.lastAnswer = null;
        this.update({ session: null, screen: "picker", banner: null, canRetry: false });
        if (session) {
            try {
                await this.client.deleteSession(session.id);
            } catch {
                // already evicted; nothing to clean up
            }
        }
    }
}

function describe(error: unknown): string {
    if (error instanceof ApiError) return `service error ${error.status}: ${error.message}`;
    if (error instanceof Error) return `connection failed: ${error.message}`;
    return String(error);
}
