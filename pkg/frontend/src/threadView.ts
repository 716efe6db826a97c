// Thread rendering: one card per message with the participant letter,
// author, timestamp and indentation. The third participant's first message
// is highlighted; long preludes (late arrivals) start collapsed with that
// message kept in view.

import type { MessageView, ThreadView } from "./types.js";

const COLLAPSE_THRESHOLD = 10; // collapse preludes when C arrives this late
const CONTEXT_BEFORE_C = 2;

export function formatTimestamp(iso: string | null): string {
  if (!iso) {
    return "non daté";
  }
  return iso.replace("T", " ");
}

export function authorDisplay(message: MessageView): string {
  if (message.author_id === null) {
    return "(non signé)";
  }
  return message.author_id;
}

function messageCard(message: MessageView): HTMLElement {
  const card = document.createElement("article");
  card.className = "message-card";
  card.dataset.rank = String(message.rank);
  if (message.is_c_first) {
    card.classList.add("c-first");
  }
  card.style.marginLeft = `${Math.min(message.indent_depth, 8) * 1.2}rem`;

  const header = document.createElement("header");
  const letter = document.createElement("span");
  letter.className = "letter";
  letter.textContent = message.letter;
  const author = document.createElement("span");
  author.className = "author";
  author.textContent = authorDisplay(message);
  const when = document.createElement("time");
  when.textContent = formatTimestamp(message.timestamp);
  header.append(letter, author, when);
  if (message.is_c_first) {
    const marker = document.createElement("span");
    marker.className = "c-marker";
    marker.textContent = "première intervention de C";
    header.append(marker);
  }

  const body = document.createElement("p");
  body.className = "message-text";
  body.textContent = message.text;

  card.append(header, body);
  return card;
}

export function renderThread(view: ThreadView): HTMLElement {
  const container = document.createElement("section");
  container.className = "thread";
  container.dataset.threadId = view.thread_id;

  const heading = document.createElement("h2");
  heading.textContent = view.title || "(sans titre)";
  const origin = document.createElement("p");
  origin.className = "thread-origin";
  origin.textContent = `${view.source_page} — schéma ${view.schema}`;
  container.append(heading, origin);

  const list = document.createElement("div");
  list.className = "messages";

  const cRank = view.c_first_rank;
  const collapseUpTo =
    cRank !== null && cRank >= COLLAPSE_THRESHOLD ? cRank - CONTEXT_BEFORE_C - 1 : 0;

  if (collapseUpTo > 0) {
    const hidden = document.createElement("div");
    hidden.className = "collapsed-prelude";
    hidden.hidden = true;
    for (const message of view.messages.slice(0, collapseUpTo)) {
      hidden.append(messageCard(message));
    }
    const toggle = document.createElement("button");
    toggle.type = "button";
    toggle.className = "prelude-toggle";
    toggle.textContent = `Afficher les ${collapseUpTo} messages précédents`;
    toggle.addEventListener("click", () => {
      hidden.hidden = !hidden.hidden;
      toggle.textContent = hidden.hidden
        ? `Afficher les ${collapseUpTo} messages précédents`
        : "Replier les messages précédents";
    });
    list.append(toggle, hidden);
    for (const message of view.messages.slice(collapseUpTo)) {
      list.append(messageCard(message));
    }
  } else {
    for (const message of view.messages) {
      list.append(messageCard(message));
    }
  }

  container.append(list);
  return container;
}
