// Thin JSON client for the robot's documented endpoints. fetch is
// injectable so tests can capture the exact bytes that leave the panel.

import type { EventsSource } from "./events.js";
import type { WireEvent } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

interface ErrorBody {
  error?: string;
  message?: string;
}

export class ApiClient implements EventsSource {
  constructor(
    private readonly base: string = "/api/v1",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request(method: string, path: string, body?: unknown): Promise<unknown> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(`${this.base}${path}`, init);
    const data: unknown = await response.json();
    if (!response.ok) {
      const err = data as ErrorBody;
      throw new ApiError(response.status, err.error ?? "error", err.message ?? response.statusText);
    }
    return data;
  }

  async eventsSince(since: number): Promise<WireEvent[]> {
    const data = (await this.request("GET", `/events?since=${since}`)) as { events: WireEvent[] };
    return data.events;
  }

  state(): Promise<unknown> {
    return this.request("GET", "/state");
  }

  move(cmd: "forward" | "left" | "right"): Promise<unknown> {
    return this.request("POST", "/move", { cmd });
  }

  drive(left: number, right: number, durationMs: number): Promise<unknown> {
    return this.request("POST", "/drive", { left, right, duration_ms: durationMs });
  }

  async postProgram(source: string): Promise<number> {
    const data = (await this.request("POST", "/program", { source })) as { program_id: number };
    return data.program_id;
  }

  runProgram(id: number): Promise<{ outcome: string; steps: number }> {
    return this.request("POST", `/program/${id}/run`) as Promise<{ outcome: string; steps: number }>;
  }

  stepProgram(id: number): Promise<{ step: unknown; done: boolean }> {
    return this.request("POST", `/program/${id}/step`) as Promise<{ step: unknown; done: boolean }>;
  }

  tabooStart(seed: number): Promise<unknown> {
    return this.request("POST", "/taboo/start", { seed });
  }

  tabooGuess(word: string): Promise<unknown> {
    return this.request("POST", "/taboo/guess", { word });
  }

  tabooReplay(answer: "yes" | "no"): Promise<unknown> {
    return this.request("POST", "/taboo/replay", { answer });
  }

  feedback(rating: number): Promise<unknown> {
    return this.request("POST", "/feedback", { rating });
  }
}
