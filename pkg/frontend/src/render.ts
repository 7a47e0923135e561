/** DOM rendering: the whole transcript is rebuilt from session state. */

import type { PayloadDto } from "./api.js";
import { copyText, splitChips } from "./chips.js";
import type { ChatMessage, SessionState } from "./state.js";

export const TABLE_FOLD = 10;

export interface RenderHandlers {
  onRetry: (text: string) => void;
  onToggleRows: (message: ChatMessage) => void;
}

function timeLabel(timestamp: number): string {
  return new Date(timestamp).toLocaleTimeString([], {
    hour: "2-digit",
    minute: "2-digit",
  });
}

function chipSpan(value: string): HTMLElement {
  const chip = document.createElement("code");
  chip.className = "chip";
  chip.textContent = value;
  chip.title = "Click to copy";
  chip.addEventListener("click", () => {
    copyText(value);
    chip.classList.add("copied");
    setTimeout(() => chip.classList.remove("copied"), 800);
  });
  return chip;
}

function textWithChips(text: string): DocumentFragment {
  const fragment = document.createDocumentFragment();
  for (const line of text.split("\n")) {
    if (fragment.childNodes.length > 0) fragment.appendChild(document.createElement("br"));
    for (const run of splitChips(line)) {
      if (run.kind === "chip") fragment.appendChild(chipSpan(run.value));
      else fragment.appendChild(document.createTextNode(run.value));
    }
  }
  return fragment;
}

function rowTable(
  message: ChatMessage,
  payload: PayloadDto,
  handlers: RenderHandlers,
): HTMLElement {
  const wrapper = document.createElement("div");
  wrapper.className = "rows";
  const rows = payload.rows;
  const columns = Object.keys(rows[0] ?? {});
  const visible = message.expanded ? rows : rows.slice(0, TABLE_FOLD);

  const table = document.createElement("table");
  const head = table.createTHead().insertRow();
  for (const column of columns) {
    const cell = document.createElement("th");
    cell.textContent = column;
    head.appendChild(cell);
  }
  const body = table.createTBody();
  for (const row of visible) {
    const tr = body.insertRow();
    for (const column of columns) {
      const cell = tr.insertCell();
      cell.appendChild(textWithChips(String(row[column] ?? "")));
    }
  }
  wrapper.appendChild(table);

  if (rows.length > TABLE_FOLD) {
    const toggle = document.createElement("button");
    toggle.type = "button";
    toggle.className = "expand";
    toggle.textContent = message.expanded
      ? "Show fewer"
      : `Show ${rows.length - TABLE_FOLD} more`;
    toggle.addEventListener("click", () => handlers.onToggleRows(message));
    wrapper.appendChild(toggle);
  }
  return wrapper;
}

function bubble(message: ChatMessage, handlers: RenderHandlers): HTMLElement {
  const item = document.createElement("article");
  item.className = `bubble ${message.role}`;

  const body = document.createElement("div");
  body.className = "text";
  body.appendChild(
    message.role === "bot"
      ? textWithChips(message.text)
      : document.createTextNode(message.text),
  );
  item.appendChild(body);

  if (message.role === "bot" && message.payload && message.payload.rows.length > 0) {
    item.appendChild(rowTable(message, message.payload, handlers));
  }

  if (message.role === "error" && message.retryText !== undefined) {
    const retry = document.createElement("button");
    retry.type = "button";
    retry.className = "retry";
    retry.textContent = "Retry";
    const text = message.retryText;
    retry.addEventListener("click", () => handlers.onRetry(text));
    item.appendChild(retry);
  }

  const meta = document.createElement("footer");
  meta.className = "meta";
  meta.textContent = timeLabel(message.timestamp);
  if (message.role === "bot") {
    const badge = document.createElement("span");
    badge.className = "elapsed";
    badge.textContent = `${(message.elapsedMs ?? 0).toFixed(1)} ms`;
    meta.appendChild(badge);
  }
  item.appendChild(meta);
  return item;
}

export function renderMessages(
  container: HTMLElement,
  state: SessionState,
  handlers: RenderHandlers,
): void {
  container.replaceChildren();
  for (const message of state.messages) {
    container.appendChild(bubble(message, handlers));
  }
  container.scrollTop = container.scrollHeight;
}
