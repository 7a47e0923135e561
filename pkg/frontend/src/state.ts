/** Session state: an append-only message list plus one in-flight flag.
 *
 * Everything the UI shows is derived from this structure, so re-rendering
 * the whole list after any change keeps the DOM consistent by construction.
 */

import type { PayloadDto } from "./api.js";

export type Role = "user" | "bot" | "error";

export interface ChatMessage {
  role: Role;
  text: string;
  timestamp: number;
  /** bot only */
  payload?: PayloadDto | null;
  elapsedMs?: number;
  intent?: string;
  /** error only: the utterance to resend */
  retryText?: string;
  /** row tables past the fold start collapsed */
  expanded?: boolean;
}

export interface SessionState {
  messages: ChatMessage[];
  inFlight: boolean;
}

export function newSession(): SessionState {
  return { messages: [], inFlight: false };
}

export function pushUser(state: SessionState, text: string): ChatMessage {
  const message: ChatMessage = { role: "user", text, timestamp: Date.now() };
  state.messages.push(message);
  return message;
}

export function pushBot(
  state: SessionState,
  text: string,
  payload: PayloadDto | null,
  elapsedMs: number,
  intent: string,
): ChatMessage {
  const message: ChatMessage = {
    role: "bot",
    text,
    payload,
    elapsedMs,
    intent,
    timestamp: Date.now(),
    expanded: false,
  };
  state.messages.push(message);
  return message;
}

export function pushError(state: SessionState, text: string, retryText: string): ChatMessage {
  const message: ChatMessage = { role: "error", text, retryText, timestamp: Date.now() };
  state.messages.push(message);
  return message;
}
