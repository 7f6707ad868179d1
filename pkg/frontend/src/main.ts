import { ApiClient } from "./api.js";
import { mountApp } from "./app.js";

const root = document.getElementById("app");
if (root !== null) {
  const meta = document.querySelector('meta[name="factalign-api"]');
  const base = meta?.getAttribute("content") ?? "";
  mountApp(root, new ApiClient(base));
}
