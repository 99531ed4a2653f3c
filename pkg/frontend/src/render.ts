/**
 * Interface construction.
 *
 * The whole panel is a pure function of session state. Every capability flag
 * maps to exactly one control, tagged with `data-cap="<flag>"`, and a control
 * is in the tree if and only if its flag is set. Chrome that is not gated on
 * a flag (leave link, speaker icon, audio-required prompt, disconnect modal)
 * carries no data-cap tag.
 */

import { CAPABILITIES, Capability, RosterEntry } from "./protocol.js";
import { ClientSession } from "./session.js";

type Builder = (doc: Document, session: ClientSession) => HTMLElement;

function el(
  doc: Document,
  tag: string,
  className?: string,
  text?: string,
): HTMLElement {
  const node = doc.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function select(doc: Document, placeholder: string): HTMLElement {
  const menu = doc.createElement("select");
  const opt = doc.createElement("option");
  opt.value = "";
  opt.textContent = placeholder;
  menu.appendChild(opt);
  return menu;
}

function sendForm(doc: Document, buttonLabel: string): HTMLElement {
  const form = el(doc, "form");
  const input = doc.createElement("input");
  input.type = "text";
  form.appendChild(input);
  form.appendChild(el(doc, "button", undefined, buttonLabel));
  return form;
}

function checkboxRow(doc: Document, label: string, data: [string, string]): HTMLElement {
  const row = el(doc, "label", "checkbox-row");
  const box = doc.createElement("input");
  box.type = "checkbox";
  box.dataset[data[0]] = data[1];
  row.appendChild(box);
  row.appendChild(doc.createTextNode(label));
  return row;
}

function activityLog(doc: Document, session: ClientSession, title: string): HTMLElement {
  const section = el(doc, "section", "activity-log");
  section.appendChild(el(doc, "h2", undefined, title));
  const list = doc.createElement("ol");
  for (const line of session.activityLines) {
    // server-formatted lines are shown byte-for-byte
    list.appendChild(el(doc, "li", "activity-line", line));
  }
  section.appendChild(list);
  return section;
}

function rosterRoles(roster: RosterEntry[]): string[] {
  const roles: string[] = [];
  for (const entry of roster) {
    if (!roles.includes(entry.role)) {
      roles.push(entry.role);
    }
  }
  return roles;
}

const BUILDERS: Record<Capability, Builder> = {
  "send-text": (doc) => sendForm(doc, "Send Text"),
  "send-tts-live": (doc) => sendForm(doc, "Speak"),
  "send-image": (doc) => select(doc, "--SELECT IMAGE--"),
  "send-audio": (doc) => select(doc, "--SELECT AUDIO--"),
  "send-association": (doc) => select(doc, "--SELECT ASSOCIATION--"),
  "send-fraction": (doc, session) => {
    const box = el(doc, "fieldset", "fraction-controls");
    box.appendChild(el(doc, "legend", undefined, "Fractions"));
    const count = doc.createElement("input");
    count.type = "number";
    count.min = "2";
    count.value = "2";
    box.appendChild(count);
    const mode = doc.createElement("select");
    for (const m of ["persistent", "dynamic"]) {
      const opt = doc.createElement("option");
      opt.value = m;
      opt.textContent = m;
      mode.appendChild(opt);
    }
    box.appendChild(mode);
    void session;
    return box;
  },
  "send-osc": (doc) => sendForm(doc, "Send OSC"),
  "send-algorithm": (doc) => select(doc, "--SELECT ALGORITHM--"),
  "receive-text": (doc) => el(doc, "div", "text-display"),
  "receive-tts-live": (doc) => el(doc, "div", "tts-display"),
  "receive-image": (doc) => el(doc, "div", "image-display"),
  "receive-audio": (doc) => doc.createElement("audio"),
  "receive-interface": (doc) => el(doc, "div", "interface-display"),
  "receive-osc": (doc) => el(doc, "div", "osc-display"),
  "show-menu": (doc) => {
    const nav = el(doc, "nav", "menu");
    nav.appendChild(el(doc, "span", undefined, "Menu"));
    return nav;
  },
  "show-title": (doc, session) =>
    el(doc, "h1", "title", `${session.performance ?? ""} [LIVE]`),
  "role-list": (doc, session) => {
    const box = el(doc, "fieldset", "role-list");
    box.appendChild(el(doc, "legend", undefined, "Send to Group"));
    box.appendChild(checkboxRow(doc, "ALL", ["role", "ALL"]));
    for (const role of rosterRoles(session.roster)) {
      box.appendChild(checkboxRow(doc, role, ["role", role]));
    }
    return box;
  },
  "performer-list": (doc, session) => {
    const box = el(doc, "fieldset", "performer-list");
    box.appendChild(el(doc, "legend", undefined, "Send to Individual"));
    for (const entry of session.roster) {
      const me = entry.nickname === session.nickname;
      const label = `${me ? "ME: " : ""}${entry.nickname} [${entry.role}]`;
      box.appendChild(checkboxRow(doc, label, ["performer", entry.nickname]));
    }
    return box;
  },
  "performer-activity-log": (doc, session) =>
    activityLog(doc, session, "Activity Log"),
  "global-activity-log": (doc, session) =>
    activityLog(doc, session, "Global Activity Log"),
  "change-role": (doc, session) => {
    const box = el(doc, "fieldset", "change-role");
    box.appendChild(el(doc, "legend", undefined, "Change Role"));
    const menu = doc.createElement("select");
    for (const role of rosterRoles(session.roster)) {
      const opt = doc.createElement("option");
      opt.value = role;
      opt.textContent = role;
      menu.appendChild(opt);
    }
    box.appendChild(menu);
    return box;
  },
  "change-interface": (doc) => select(doc, "--SELECT INTERFACE--"),
  "change-functionality": (doc, session) => {
    const box = el(doc, "fieldset", "change-functionality");
    box.appendChild(el(doc, "legend", undefined, "Functionality"));
    for (const cap of CAPABILITIES) {
      const row = checkboxRow(doc, cap, ["flag", cap]);
      const input = row.querySelector("input") as HTMLInputElement;
      input.checked = session.capabilities[cap];
      box.appendChild(row);
    }
    const apply = el(doc, "button", undefined, "Apply");
    apply.addEventListener("click", () => {
      const flags: string[] = [];
      box.querySelectorAll("input[data-flag]").forEach((node) => {
        const input = node as HTMLInputElement;
        if (input.checked && input.dataset.flag) {
          flags.push(input.dataset.flag);
        }
      });
      session.functionalityChange(flags);
    });
    box.appendChild(apply);
    return box;
  },
  "test-functionality": (doc, session) => {
    const row = checkboxRow(doc, "Test Mode", ["test", "toggle"]);
    const input = row.querySelector("input") as HTMLInputElement;
    input.checked = session.testMode;
    input.addEventListener("change", () => session.testToggle(input.checked));
    return row;
  },
};

/** Build the full panel for the current session state. */
export function renderInterface(session: ClientSession, doc: Document): HTMLElement {
  const root = el(doc, "div", "telebrain-client");

  // top-left on every live performance, regardless of flags
  const leave = el(doc, "a", "leave-link", "X Leave Performance");
  leave.addEventListener("click", () => session.leave());
  root.appendChild(leave);

  const speaker = el(
    doc,
    "span",
    `speaker-icon ${session.audioEnabled ? "green" : "red"}`,
    session.audioEnabled ? "\u{1F50A}" : "\u{1F507}",
  );
  speaker.addEventListener("click", () =>
    session.setAudioEnabled(!session.audioEnabled),
  );
  root.appendChild(speaker);

  if (session.capabilities["receive-audio"] && !session.audioEnabled) {
    const prompt = el(doc, "a", "audio-required", "Audio Required");
    prompt.addEventListener("click", () => session.setAudioEnabled(true));
    root.appendChild(prompt);
  }

  for (const cap of CAPABILITIES) {
    if (!session.capabilities[cap]) {
      continue;
    }
    const control = BUILDERS[cap](doc, session);
    control.dataset.cap = cap;
    root.appendChild(control);
  }
  return root;
}

/** Shown when the socket drops; the only way forward is a rejoin. */
export function renderDisconnectModal(doc: Document, onRejoin: () => void): HTMLElement {
  const modal = el(doc, "div", "disconnect-modal");
  modal.appendChild(el(doc, "p", undefined, "Connection lost"));
  const button = el(doc, "button", "rejoin", "Rejoin");
  button.addEventListener("click", onRejoin);
  modal.appendChild(button);
  return modal;
}
