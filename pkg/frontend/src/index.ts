export * from "./protocol.js";
export * from "./clock.js";
export * from "./session.js";
export * from "./render.js";
export * from "./cues.js";
export * from "./main.js";
