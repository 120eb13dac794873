/** Canned API documents and a scripted in-memory server for tests. */

import type { FetchLike } from "../src/api.js";
import type {
  CharacterCardDoc,
  HighlightSetDoc,
  NewsFactsDoc,
  PremiseDoc,
  ProjectDoc,
  ScriptDoc,
  Stage,
  StoryboardPanelDoc,
} from "../src/types.js";

export const NEWS_FACTS: NewsFactsDoc = {
  setting: "a regional bank branch",
  stakeholders: [
    { name: "Ed Delaney", activity: "asks why his card stopped working" },
    { name: "Priya Shah", activity: "explains the outage to customers" },
  ],
  plot_summary: "A payment outage leaves cardholders stranded at checkout.",
  info_points: [
    "The outage lasted six hours.",
    "Debit cards were declined nationwide.",
    "The bank blamed a failed software update.",
    "Refunds for fees are automatic.",
  ],
  plot_elements: ["outage begins", "customers react", "bank responds"],
  warnings: [],
};

export const PREMISE: PremiseDoc = {
  id: "premise-1",
  framing: "comedic_analogy",
  characters: [
    { name: "Ed Delaney", role_label: "dominant" },
    { name: "Priya Shah", role_label: "supporting" },
  ],
  plot: "A cardholder confronts a teller about the outage.",
  setting: "the counter of a busy bank branch",
  info_points: NEWS_FACTS.info_points,
  candidate_plots: [],
  provenance: "generated",
};

export const SCRIPT: ScriptDoc = {
  id: "script-1",
  premise_id: "premise-1",
  condition: "with_premise",
  lines: [
    { kind: "scene_heading", text: "INT. BANK BRANCH - DAY" },
    { kind: "direction", text: "Ed slides his card across the counter." },
    {
      kind: "dialog",
      speaker: "Ed Delaney",
      parenthetical: "incredulous",
      text: "The outage lasted six hours.",
    },
    {
      kind: "dialog",
      speaker: "Priya Shah",
      parenthetical: null,
      text: "Debit cards were declined nationwide.",
    },
    {
      kind: "dialog",
      speaker: "Ed Delaney",
      parenthetical: null,
      text: "So what happened?",
    },
    {
      kind: "dialog",
      speaker: "Priya Shah",
      parenthetical: "reassuring",
      text: "The bank blamed a failed software update, and refunds are automatic.",
    },
  ],
  provenance: "generated",
  starred: false,
  created_at: "2000-01-01T00:00:05+00:00",
};

export const HIGHLIGHTS: HighlightSetDoc = {
  entries: [
    { info_point_index: 0, line_index: 2, score: 1.0, color_index: 0 },
    { info_point_index: 1, line_index: 3, score: 1.0, color_index: 1 },
    { info_point_index: 2, line_index: 5, score: 0.62, color_index: 2 },
    { info_point_index: 3, line_index: 5, score: 0.55, color_index: 3 },
  ],
};

export const BOARD: CharacterCardDoc[] = [
  {
    character_name: "Ed Delaney",
    description: "a retiree in a windbreaker",
    props: ["debit card", "grocery bag"],
    background_description: "bank lobby with a queue behind him",
    background_image_prompt: "bank lobby, waiting queue",
    portrait_image: "aaaa1111.png",
    background_image: "bbbb2222.png",
  },
  {
    character_name: "Priya Shah",
    description: "a composed teller in uniform",
    props: ["name badge", "terminal"],
    background_description: "teller counter with a status monitor",
    background_image_prompt: "teller counter, status monitor",
    portrait_image: "cccc3333.png",
    background_image: "dddd4444.png",
  },
];

export const STORYBOARD: StoryboardPanelDoc[] = [2, 3, 4, 5].map((line) => ({
  line_index: line,
  expression: "neutral",
  gesture: "hands on the counter",
  action: "leaning forward",
  image: `panel-${line}.png`,
}));

export function makeProject(overrides: Partial<ProjectDoc> = {}): ProjectDoc {
  return {
    id: "proj-1",
    article: {
      headline: "Card outage strands shoppers",
      body: "A failed software update took debit cards offline for six hours.",
      source_url: null,
      ingested_at: "2000-01-01T00:00:00+00:00",
    },
    stage: "article",
    news_facts: null,
    premises: [],
    scripts: [],
    active_script_id: null,
    highlights: null,
    character_board: null,
    board_generation: 0,
    storyboard: null,
    storyboard_board_generation: null,
    stale: [],
    provider_calls: 0,
    formatted_script: null,
    lint: [],
    ...overrides,
  };
}

function json(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

function apiError(code: string, message: string, status: number): Response {
  return json({ error: { code, message } }, status);
}

/**
 * A minimal scripted stand-in for the workspace server. It keeps one project
 * in memory, applies each mutation, and serves GETs from that state, so the
 * client and renderer can be exercised over a full session without a network.
 */
export class FakeServer {
  project: ProjectDoc = makeProject();
  readonly calls: Array<{ method: string; path: string }> = [];

  fetch: FetchLike = (input, init) => {
    const method = init?.method ?? "GET";
    const url = new URL(input, "http://testserver");
    const path = url.pathname;
    this.calls.push({ method, path: path + url.search });
    return Promise.resolve(this.route(method, path, url, init));
  };

  private route(
    method: string,
    path: string,
    url: URL,
    init?: RequestInit,
  ): Response {
    if (method === "GET" && path === "/projects") {
      return json({ projects: [this.project.id] });
    }
    if (method === "POST" && path === "/projects") {
      const body = JSON.parse(String(init?.body)) as {
        headline: string;
        body: string;
      };
      this.project = makeProject({
        article: { ...this.project.article, ...body },
      });
      return json(this.project, 201);
    }
    if (!path.startsWith(`/projects/${this.project.id}`)) {
      return apiError("not_found", "no such project", 404);
    }
    const rest = path.slice(`/projects/${this.project.id}`.length);
    switch (true) {
      case method === "GET" && rest === "":
        return json(this.project);
      case method === "POST" && rest === "/extract":
        this.project = {
          ...this.project,
          news_facts: NEWS_FACTS,
          stage: "extracted",
        };
        return json(this.project);
      case method === "POST" && rest === "/premises": {
        if (this.project.news_facts === null) {
          return apiError("stage_violation", "extract first", 409);
        }
        this.project = {
          ...this.project,
          premises: [...this.project.premises, PREMISE],
          stage: "premise_ready",
        };
        return json({ project: this.project, premise: PREMISE });
      }
      case method === "PATCH" && rest === "/premises/premise-1": {
        const patch = JSON.parse(String(init?.body)) as Partial<PremiseDoc>;
        const edited: PremiseDoc = {
          ...PREMISE,
          ...patch,
          characters: PREMISE.characters,
          id: "premise-2",
          provenance: "edited",
        };
        this.project = {
          ...this.project,
          premises: [...this.project.premises, edited],
        };
        return json({ project: this.project, premise: edited });
      }
      case method === "POST" && rest === "/scripts": {
        if (this.project.premises.length === 0) {
          return apiError("stage_violation", "no premise", 409);
        }
        this.project = {
          ...this.project,
          scripts: [...this.project.scripts, SCRIPT],
          active_script_id: SCRIPT.id,
          stage: "script_active",
          formatted_script: "INT. BANK BRANCH - DAY",
        };
        return json({ project: this.project, script: SCRIPT });
      }
      case method === "POST" && rest === "/scripts/script-1/star": {
        const starred = { ...SCRIPT, starred: true };
        this.project = { ...this.project, scripts: [starred] };
        return json({ project: this.project, script: starred });
      }
      case method === "POST" && rest === "/highlights": {
        this.project = { ...this.project, highlights: HIGHLIGHTS };
        return json({ project: this.project, highlights: HIGHLIGHTS });
      }
      case method === "POST" && rest === "/character-board":
        this.project = {
          ...this.project,
          character_board: BOARD,
          board_generation: 1,
          stage: "board_ready",
        };
        return json(this.project);
      case method === "POST" && rest === "/storyboard":
        this.project = {
          ...this.project,
          storyboard: STORYBOARD,
          storyboard_board_generation: 1,
          stage: "storyboard_ready",
        };
        return json(this.project);
      case method === "POST" && rest === "/back": {
        const target = url.searchParams.get("target") as Stage;
        this.project = {
          ...this.project,
          stage: target,
          stale: ["premise", "script", "character_board", "storyboard"],
        };
        return json(this.project);
      }
      default:
        return apiError("not_found", `no route for ${method} ${rest}`, 404);
    }
  }
}
