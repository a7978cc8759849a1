/** Console entry point: wire the API client, flow, and renderer together. */

import { ApiClient } from "./api.js";
import { SessionFlow } from "./flow.js";
import { render } from "./render.js";
import { toyInstance } from "./toy.js";

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("service") ?? "";

const client = new ApiClient(baseUrl);
const flow = new SessionFlow(client);
const root = document.getElementById("app");
if (!root) throw new Error("missing #app element");

flow.onChange((view) => render(root, view, flow));

const demoButton = document.getElementById("register-toy");
if (demoButton instanceof HTMLButtonElement) {
    demoButton.onclick = () => void flow.registerInstance(toyInstance);
}

void flow.refreshInstances().then(() => render(root, flow.current(), flow));
