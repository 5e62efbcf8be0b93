// Entry point: scenario picker plus the cockpit mount.

import { ArenaClient } from "./api.js";
import { Cockpit } from "./controller.js";
import { mountCockpit } from "./ui.js";

async function boot(): Promise<void> {
  const client = new ArenaClient("");
  const cockpit = new Cockpit(client);
  const setup = document.getElementById("setup")!;
  const root = document.getElementById("app")!;

  const { scenarios } = await client.listScenarios();
  setup.innerHTML = `
    <select id="scenario">
      ${scenarios.map((s) => `<option value="${s.id}">${s.id} (${s.horizon} months)</option>`).join("")}
    </select>
    <input id="seed" value="0" size="6" title="episode seed"/>
    <button id="start">start episode</button>`;

  document.getElementById("start")!.addEventListener("click", async () => {
    const scenarioId = (document.getElementById("scenario") as HTMLSelectElement).value;
    const seed = parseInt((document.getElementById("seed") as HTMLInputElement).value, 10) || 0;
    await cockpit.start(scenarioId, seed);
    mountCockpit(root, cockpit);
  });
}

void boot();
