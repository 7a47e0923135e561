/** Application wiring: composer, transcript, and the intents side panel. */

import { ApiError, BotClient } from "./api.js";
import { renderMessages } from "./render.js";
import {
  newSession,
  pushBot,
  pushError,
  pushUser,
  type ChatMessage,
  type SessionState,
} from "./state.js";

export interface AppOptions {
  baseUrl: string;
  fetchFn?: (input: string, init?: RequestInit) => Promise<Response>;
}

export interface App {
  state: SessionState;
  client: BotClient;
  /** resolves once the health line and intents panel settled */
  ready: Promise<void>;
  send(text: string): Promise<void>;
  elements: {
    messages: HTMLElement;
    input: HTMLInputElement;
    sendButton: HTMLButtonElement;
    intentsPanel: HTMLElement;
    status: HTMLElement;
  };
}

function scaffold(root: HTMLElement): App["elements"] {
  root.innerHTML = `
    <header class="top">
      <h1>msrbot</h1>
      <span class="status" data-role="status">connecting…</span>
    </header>
    <details class="intents" data-role="intents">
      <summary>Supported questions</summary>
      <div class="intents-body"></div>
    </details>
    <main class="messages" data-role="messages"></main>
    <form class="composer" data-role="composer">
      <input type="text" data-role="input" placeholder="Ask about commits, bugs, files…"
             autocomplete="off" />
      <button type="submit" data-role="send">Send</button>
    </form>`;
  const pick = <T extends HTMLElement>(role: string): T => {
    const node = root.querySelector(`[data-role="${role}"]`);
    if (!node) throw new Error(`missing ${role} element`);
    return node as T;
  };
  return {
    messages: pick("messages"),
    input: pick<HTMLInputElement>("input"),
    sendButton: pick<HTMLButtonElement>("send"),
    intentsPanel: pick("intents"),
    status: pick("status"),
  };
}

export function createApp(root: HTMLElement, options: AppOptions): App {
  const client = new BotClient(options.baseUrl, options.fetchFn);
  const state = newSession();
  const elements = scaffold(root);

  const redraw = () =>
    renderMessages(elements.messages, state, {
      onRetry: (text) => void send(text),
      onToggleRows: (message: ChatMessage) => {
        message.expanded = !message.expanded;
        redraw();
      },
    });

  const setBusy = (busy: boolean) => {
    state.inFlight = busy;
    elements.input.disabled = busy;
    elements.sendButton.disabled = busy;
  };

  async function send(text: string): Promise<void> {
    const trimmed = text.trim();
    if (trimmed === "" || state.inFlight) return;
    pushUser(state, trimmed);
    setBusy(true);
    redraw();
    try {
      const response = await client.chat(trimmed);
      pushBot(state, response.reply, response.payload, response.elapsed_ms, response.intent);
      elements.input.value = "";
    } catch (failure) {
      const reason = failure instanceof ApiError ? failure.message : String(failure);
      pushError(state, `The bot could not be reached (${reason}).`, trimmed);
      elements.input.value = trimmed; // typed text is never lost
    } finally {
      setBusy(false);
      redraw();
      elements.input.focus();
    }
  }

  const form = root.querySelector('[data-role="composer"]');
  form?.addEventListener("submit", (event) => {
    event.preventDefault();
    void send(elements.input.value);
  });

  async function loadStatus(): Promise<void> {
    try {
      const health = await client.health();
      elements.status.textContent =
        `connected · ${health.commit_count} commits · ${health.issue_count} issues`;
    } catch {
      elements.status.textContent = "backend unreachable";
    }
  }

  async function loadIntents(): Promise<void> {
    const body = elements.intentsPanel.querySelector(".intents-body");
    if (!body) return;
    try {
      const intents = await client.intents();
      const list = document.createElement("ul");
      for (const intent of intents) {
        const item = document.createElement("li");
        const button = document.createElement("button");
        button.type = "button";
        button.className = "example";
        button.textContent = intent.example;
        // prefill only; the user still presses send
        button.addEventListener("click", () => {
          elements.input.value = intent.example;
          elements.input.focus();
        });
        const tag = document.createElement("span");
        tag.className = "intent-id";
        tag.textContent = intent.intent_id;
        item.append(tag, button);
        list.appendChild(item);
      }
      body.replaceChildren(list);
    } catch {
      const notice = document.createElement("p");
      notice.className = "notice";
      notice.textContent = "Supported questions are unavailable right now.";
      body.replaceChildren(notice);
    }
  }

  const ready = Promise.all([loadStatus(), loadIntents()]).then(() => undefined);
  redraw();
  return { state, client, ready, send, elements };
}
