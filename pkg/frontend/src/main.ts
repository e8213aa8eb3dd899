import { ApiClient } from "./api.js";
import { createApp } from "./app.js";

const host = document.getElementById("app");
if (host) {
  const base = host.dataset.apiBase || "http://127.0.0.1:8000";
  createApp(host, new ApiClient(base));
}
