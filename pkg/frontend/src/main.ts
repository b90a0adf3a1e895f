/** Browser bootstrap: looks up the fixed layout and starts the controller. */

import { ServiceClient } from "./client.js";
import { ConsoleController } from "./app.js";
import type { ConsoleElements } from "./view.js";

function must<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
}

export function boot(base: string = ""): ConsoleController {
  const els: ConsoleElements = {
    aspect: must("aspect"),
    connection: must("connection"),
    marking: must("marking"),
    feed: must("feed"),
    history: must("history"),
    canvas: must<HTMLCanvasElement>("world"),
    clock: must("clock"),
  };
  const controller = new ConsoleController(els, new ServiceClient(base), {}, must("history"));
  const input = must<HTMLInputElement>("command");
  const form = must<HTMLFormElement>("command-form");
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const text = input.value.trim();
    if (!text) return;
    void controller.submit(text).then((ok) => {
      if (ok) input.value = "";
    });
  });
  void controller.start();
  return controller;
}

if (typeof document !== "undefined" && document.getElementById("command-form")) {
  boot();
}
