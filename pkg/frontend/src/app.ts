/** Browser bootstrap: wires the toolbar to the API client and re-renders
 * from a fresh GET after every mutation, so a reload always reproduces the
 * exact same view.
 */

import { ApiError, ReelsmithClient } from "./api.js";
import { renderProject } from "./render.js";
import { activeScript } from "./state.js";
import type { Framing, ProjectDoc, Stage } from "./types.js";

const client = new ReelsmithClient();

function element<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function currentProjectId(): string | null {
  return new URLSearchParams(window.location.search).get("project");
}

function setStatus(message: string, isError = false): void {
  const status = element<HTMLElement>("status");
  status.textContent = message;
  status.className = isError ? "status error" : "status";
}

async function refresh(projectId: string): Promise<ProjectDoc> {
  const project = await client.getProject(projectId);
  element<HTMLElement>("main").innerHTML = renderProject(project);
  return project;
}

async function runAction(projectId: string, action: string): Promise<void> {
  const framing = (
    element<HTMLSelectElement>("framing").value || "comedic_analogy"
  ) as Framing;
  try {
    switch (action) {
      case "extract":
        await client.extract(projectId);
        break;
      case "premise":
        await client.generatePremise(projectId, framing);
        break;
      case "script_with_premise":
        await client.generateScript(projectId, "with_premise");
        break;
      case "highlights":
        await client.assignHighlights(projectId);
        break;
      case "board":
        await client.characterBoard(projectId);
        break;
      case "storyboard":
        await client.storyboard(projectId);
        break;
      case "star": {
        const project = await client.getProject(projectId);
        const script = activeScript(project);
        if (script) await client.starScript(projectId, script.id);
        break;
      }
      default:
        return;
    }
    setStatus(`${action} done`);
  } catch (error) {
    if (error instanceof ApiError) {
      setStatus(`[${error.code}] ${error.message}`, true);
    } else {
      setStatus(String(error), true);
    }
  }
  await refresh(projectId);
}

async function listProjects(): Promise<void> {
  const { projects } = await client.listProjects();
  element<HTMLElement>("projects").innerHTML = projects
    .map((id) => `<li><a href="?project=${id}">${id}</a></li>`)
    .join("");
}

async function createFromForm(): Promise<void> {
  const headline = element<HTMLInputElement>("headline").value.trim();
  const body = element<HTMLTextAreaElement>("body").value.trim();
  if (!headline || !body) {
    setStatus("headline and body are required", true);
    return;
  }
  const project = await client.createProject({ headline, body });
  window.location.search = `?project=${project.id}`;
}

export async function boot(): Promise<void> {
  await listProjects();
  element<HTMLButtonElement>("create").addEventListener("click", () => {
    void createFromForm();
  });

  const projectId = currentProjectId();
  if (!projectId) return;
  await refresh(projectId);

  element<HTMLElement>("main").addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const action = target.getAttribute("data-action");
    if (action) void runAction(projectId, action);
  });
  element<HTMLElement>("main").addEventListener("change", (event) => {
    const target = event.target as HTMLSelectElement;
    if (target.getAttribute("data-action") === "back" && target.value) {
      void client
        .back(projectId, target.value as Stage)
        .then(() => refresh(projectId))
        .catch((error: unknown) => setStatus(String(error), true));
    }
  });
}

if (typeof document !== "undefined" && document.getElementById("main")) {
  void boot();
}
