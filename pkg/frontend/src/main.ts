/** Entry point: pick the backend URL and mount the app. */

import { createApp } from "./app.js";

declare global {
  interface Window {
    MSRBOT_API?: string;
  }
}

function backendUrl(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  if (fromQuery) return fromQuery;
  if (window.MSRBOT_API) return window.MSRBOT_API;
  return ""; // same origin
}

const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");
createApp(root, { baseUrl: backendUrl() });
