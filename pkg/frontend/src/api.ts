import type { SessionPayload } from "./types.js";

export interface ApiErrorBody {
  code: string;
  message: string;
  detail?: unknown;
}

export class ServiceError extends Error {
  constructor(
    public readonly status: number,
    public readonly body: ApiErrorBody,
  ) {
    super(`${body.code}: ${body.message}`);
    this.name = "ServiceError";
  }
}

async function raiseForStatus(response: Response): Promise<void> {
  if (response.ok) return;
  let body: ApiErrorBody;
  try {
    body = (await response.json()) as ApiErrorBody;
  } catch {
    body = { code: "internal", message: `HTTP ${response.status}` };
  }
  throw new ServiceError(response.status, body);
}

export interface SessionOverrides {
  text?: string;
  epsilon?: number;
  rng_seed?: number;
  max_generations?: number;
}

/** Thin typed client for the session service. */
export class ServiceClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = (...args) => fetch(...args),
  ) {}

  resolve(path: string): string {
    return new URL(path, this.baseUrl).toString();
  }

  async createSession(overrides: SessionOverrides = {}): Promise<SessionPayload> {
    const response = await this.fetchFn(this.resolve("/v1/sessions"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(overrides),
    });
    await raiseForStatus(response);
    return (await response.json()) as SessionPayload;
  }

  async fetchClip(audioUrl: string): Promise<Blob> {
    const response = await this.fetchFn(this.resolve(audioUrl));
    await raiseForStatus(response);
    return await response.blob();
  }

  async submitJudgment(
    sessionId: string,
    chosen: string,
    generation: number,
  ): Promise<SessionPayload> {
    const response = await this.fetchFn(
      this.resolve(`/v1/sessions/${sessionId}/judgments`),
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ chosen, generation }),
      },
    );
    await raiseForStatus(response);
    return (await response.json()) as SessionPayload;
  }

  async finish(sessionId: string): Promise<{ blob: Blob; filename: string }> {
    const response = await this.fetchFn(
      this.resolve(`/v1/sessions/${sessionId}/finish`),
      { method: "POST" },
    );
    await raiseForStatus(response);
    const disposition = response.headers.get("content-disposition") ?? "";
    const match = /filename="([^"]+)"/.exec(disposition);
    return {
      blob: await response.blob(),
      filename: match?.[1] ?? `voice-${sessionId}.evvf`,
    };
  }

  audioUrlFor(sessionId: string, individualId: string): string {
    return `/v1/sessions/${sessionId}/audio/${individualId}`;
  }
}
