/** Typed client for the bot's HTTP interface. */

export interface EntityDto {
  type: string;
  surface: string;
  span: [number, number];
  value: unknown;
}

export interface PayloadDto {
  kind: string;
  rows: Record<string, unknown>[];
  scalar: number | null;
  truncated: boolean;
  matched_paths: string[];
  empty_denominator: boolean;
}

export interface ChatResponse {
  reply: string;
  intent: string;
  confidence: number;
  entities: EntityDto[];
  elapsed_ms: number;
  payload: PayloadDto | null;
}

export interface IntentInfo {
  intent_id: string;
  example: string;
}

export interface HealthInfo {
  status: string;
  commit_count: number;
  issue_count: number;
}

export class ApiError extends Error {
  constructor(message: string, readonly status?: number) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function errorFrom(response: Response): Promise<ApiError> {
  let detail = `HTTP ${response.status}`;
  try {
    const body = (await response.json()) as Record<string, unknown>;
    if (typeof body.detail === "string") detail = body.detail;
    else if (typeof body.error === "string") detail = body.error;
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(detail, response.status);
}

export class BotClient {
  private readonly fetchFn: FetchLike;

  constructor(readonly baseUrl: string, fetchFn?: FetchLike) {
    // bind so callers can pass the bare global without losing `this`
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private url(path: string): string {
    return `${this.baseUrl.replace(/\/+$/, "")}${path}`;
  }

  private async get<T>(path: string): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.url(path));
    } catch (cause) {
      throw new ApiError(`cannot reach the bot service: ${String(cause)}`);
    }
    if (!response.ok) throw await errorFrom(response);
    return (await response.json()) as T;
  }

  async health(): Promise<HealthInfo> {
    return this.get<HealthInfo>("/health");
  }

  async intents(): Promise<IntentInfo[]> {
    const body = await this.get<{ intents: IntentInfo[] }>("/intents");
    return body.intents;
  }

  async chat(text: string): Promise<ChatResponse> {
    let response: Response;
    try {
      response = await this.fetchFn(this.url("/chat"), {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ text }),
      });
    } catch (cause) {
      throw new ApiError(`cannot reach the bot service: ${String(cause)}`);
    }
    if (!response.ok) throw await errorFrom(response);
    return (await response.json()) as ChatResponse;
  }
}
