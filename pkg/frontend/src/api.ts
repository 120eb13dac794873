/** Thin typed client over the workspace HTTP API.
 *
 * The fetch function is injectable so tests can script entire sessions
 * without a server.
 */

import type {
  Condition,
  Framing,
  HighlightSetDoc,
  PremiseDoc,
  ProjectDoc,
  ScriptDoc,
  Stage,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(code: string, message: string, status: number) {
    super(message);
    this.code = code;
    this.status = status;
  }
}

async function unwrap<T>(response: Response): Promise<T> {
  if (response.ok) {
    return (await response.json()) as T;
  }
  let code = "error";
  let message = `HTTP ${response.status}`;
  try {
    const body = await response.json();
    if (body && body.error) {
      code = body.error.code ?? code;
      message = body.error.message ?? message;
    }
  } catch {
    // Non-JSON error body; keep the status-line message.
  }
  throw new ApiError(code, message, response.status);
}

export interface PremisePatch {
  characters?: string[];
  plot?: string;
  setting?: string;
  info_points?: string[];
}

export class ReelsmithClient {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  constructor(base = "", fetchFn: FetchLike = (input, init) => fetch(input, init)) {
    this.base = base.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  private get<T>(path: string): Promise<T> {
    return this.fetchFn(this.base + path).then((r) => unwrap<T>(r));
  }

  private send<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    return this.fetchFn(this.base + path, init).then((r) => unwrap<T>(r));
  }

  listProjects(): Promise<{ projects: string[] }> {
    return this.get("/projects");
  }

  createProject(article: {
    headline: string;
    body: string;
    source_url?: string | null;
  }): Promise<ProjectDoc> {
    return this.send("POST", "/projects", article);
  }

  getProject(id: string): Promise<ProjectDoc> {
    return this.get(`/projects/${id}`);
  }

  extract(id: string): Promise<ProjectDoc> {
    return this.send("POST", `/projects/${id}/extract`);
  }

  generatePremise(
    id: string,
    framing: Framing,
  ): Promise<{ project: ProjectDoc; premise: PremiseDoc }> {
    return this.send(
      "POST",
      `/projects/${id}/premises?framing=${encodeURIComponent(framing)}`,
    );
  }

  editPremise(
    id: string,
    premiseId: string,
    patch: PremisePatch,
  ): Promise<{ project: ProjectDoc; premise: PremiseDoc }> {
    return this.send("PATCH", `/projects/${id}/premises/${premiseId}`, patch);
  }

  generateScript(
    id: string,
    condition: Condition,
    options: { framing?: Framing; premiseId?: string } = {},
  ): Promise<{ project: ProjectDoc; script: ScriptDoc }> {
    const params = new URLSearchParams({ condition });
    if (options.framing) params.set("framing", options.framing);
    if (options.premiseId) params.set("premise_id", options.premiseId);
    return this.send("POST", `/projects/${id}/scripts?${params.toString()}`);
  }

  listScripts(
    id: string,
  ): Promise<{ scripts: ScriptDoc[]; active_script_id: string | null }> {
    return this.get(`/projects/${id}/scripts`);
  }

  starScript(
    id: string,
    scriptId: string,
  ): Promise<{ project: ProjectDoc; script: ScriptDoc }> {
    return this.send("POST", `/projects/${id}/scripts/${scriptId}/star`);
  }

  editScript(
    id: string,
    scriptId: string,
    text: string,
  ): Promise<{ project: ProjectDoc; script: ScriptDoc }> {
    return this.send("PATCH", `/projects/${id}/scripts/${scriptId}`, { text });
  }

  assignHighlights(
    id: string,
    threshold = 0.5,
  ): Promise<{ project: ProjectDoc; highlights: HighlightSetDoc }> {
    return this.send("POST", `/projects/${id}/highlights`, { threshold });
  }

  characterBoard(id: string): Promise<ProjectDoc> {
    return this.send("POST", `/projects/${id}/character-board`);
  }

  storyboard(id: string): Promise<ProjectDoc> {
    return this.send("POST", `/projects/${id}/storyboard`);
  }

  back(id: string, target: Stage): Promise<ProjectDoc> {
    return this.send("POST", `/projects/${id}/back?target=${target}`);
  }

  blobUrl(id: string, name: string): string {
    return `${this.base}/projects/${id}/blobs/${name}`;
  }
}
