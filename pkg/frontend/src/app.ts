// Entry point: tiny hash router over the two screens.
//   #annotate/<sample>/<annotator>   annotation queue
//   #adjudicate/<sample>/<thread id> side-by-side comparison
// Anything else shows the sample picker.

import { AdjudicationView } from "./adjudication.js";
import { AnnotatorSession } from "./annotator.js";
import { ApiClient } from "./api.js";

const client = new ApiClient("");

async function renderHome(root: HTMLElement): Promise<void> {
  const samples = await client.listSamples();
  const form = document.createElement("form");
  form.className = "home";
  const title = document.createElement("h1");
  title.textContent = "Annotation des fils de discussion";
  const sampleSelect = document.createElement("select");
  sampleSelect.name = "sample";
  for (const sample of samples) {
    const option = document.createElement("option");
    option.value = sample.name;
    option.textContent = `${sample.name} (${sample.rule}, ${sample.size} fils)`;
    sampleSelect.append(option);
  }
  const nameInput = document.createElement("input");
  nameInput.name = "annotator";
  nameInput.placeholder = "identifiant annotateur";
  nameInput.required = true;
  const go = document.createElement("button");
  go.type = "submit";
  go.textContent = "Commencer";
  form.append(title, sampleSelect, nameInput, go);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const sample = sampleSelect.value;
    const annotator = nameInput.value.trim();
    if (sample && annotator) {
      window.location.hash = `#annotate/${encodeURIComponent(sample)}/${encodeURIComponent(annotator)}`;
    }
  });
  root.replaceChildren(form);
}

async function route(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) {
    return;
  }
  const hash = window.location.hash.replace(/^#/, "");
  const [screen, rawSample, ...rest] = hash.split("/");
  const sample = rawSample ? decodeURIComponent(rawSample) : "";
  const tail = decodeURIComponent(rest.join("/"));
  if (screen === "annotate" && sample && tail) {
    const session = new AnnotatorSession(client, sample, tail);
    root.replaceChildren(session.element);
    await session.start();
  } else if (screen === "adjudicate" && sample && tail) {
    const view = new AdjudicationView(client, sample, tail);
    root.replaceChildren(view.element);
    await view.load();
  } else {
    await renderHome(root);
  }
}

window.addEventListener("hashchange", () => void route());
window.addEventListener("DOMContentLoaded", () => void route());
