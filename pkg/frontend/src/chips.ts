/** Split reply text into plain runs and copyable chips (hashes, issue keys). */

export interface TextRun {
  kind: "text" | "chip";
  value: string;
}

// full or abbreviated commit hashes, and tracker keys like HHH-123
const CHIP_RE = /\b(?:[0-9a-f]{7,40}|[A-Z][A-Z0-9]*-[0-9]+)\b/g;

export function splitChips(text: string): TextRun[] {
  const runs: TextRun[] = [];
  let last = 0;
  for (const match of text.matchAll(CHIP_RE)) {
    const start = match.index ?? 0;
    if (start > last) runs.push({ kind: "text", value: text.slice(last, start) });
    runs.push({ kind: "chip", value: match[0] });
    last = start + match[0].length;
  }
  if (last < text.length) runs.push({ kind: "text", value: text.slice(last) });
  return runs;
}

/** Clipboard write with a fallback for environments without the async API. */
export function copyText(value: string): void {
  const clipboard = navigator.clipboard;
  if (clipboard && typeof clipboard.writeText === "function") {
    void clipboard.writeText(value).catch(() => fallbackCopy(value));
    return;
  }
  fallbackCopy(value);
}

function fallbackCopy(value: string): void {
  const area = document.createElement("textarea");
  area.value = value;
  area.setAttribute("readonly", "");
  area.style.position = "fixed";
  area.style.left = "-9999px";
  document.body.appendChild(area);
  area.select();
  try {
    document.execCommand("copy");
  } catch {
    // nothing else to fall back to
  } finally {
    area.remove();
  }
}
