import { describe, expect, it } from "vitest";

import {
  COLOR_PALETTE,
  activeScript,
  backTargets,
  enabledActions,
  highlightColor,
  highlightsByLine,
  isStale,
  scriptHistory,
  stageIndex,
} from "../src/state.js";
import {
  HIGHLIGHTS,
  NEWS_FACTS,
  PREMISE,
  SCRIPT,
  makeProject,
} from "./fixtures.js";

describe("enabledActions", () => {
  it("only allows extraction on a fresh project", () => {
    expect(enabledActions(makeProject())).toEqual(new Set(["extract"]));
  });

  it("unlocks premise and premise-free scripting once facts exist", () => {
    const actions = enabledActions(makeProject({ news_facts: NEWS_FACTS }));
    expect(actions.has("premise")).toBe(true);
    expect(actions.has("script_without_premise")).toBe(true);
    expect(actions.has("script_with_premise")).toBe(false);
    expect(actions.has("highlights")).toBe(false);
  });

  it("unlocks premise-based scripting once a premise exists", () => {
    const actions = enabledActions(
      makeProject({ news_facts: NEWS_FACTS, premises: [PREMISE] }),
    );
    expect(actions.has("script_with_premise")).toBe(true);
    expect(actions.has("board")).toBe(false);
  });

  it("unlocks highlights and the board once a script is active", () => {
    const actions = enabledActions(
      makeProject({
        news_facts: NEWS_FACTS,
        premises: [PREMISE],
        scripts: [SCRIPT],
        active_script_id: SCRIPT.id,
      }),
    );
    expect(actions.has("highlights")).toBe(true);
    expect(actions.has("board")).toBe(true);
    expect(actions.has("storyboard")).toBe(false);
  });

  it("requires a non-empty character board for the storyboard", () => {
    const base = makeProject({
      news_facts: NEWS_FACTS,
      scripts: [SCRIPT],
      active_script_id: SCRIPT.id,
    });
    expect(enabledActions({ ...base, character_board: [] }).has("storyboard")).toBe(
      false,
    );
    const card = {
      character_name: "Ed",
      description: "d",
      props: [],
      background_description: "b",
      background_image_prompt: "p",
      portrait_image: null,
      background_image: null,
    };
    expect(
      enabledActions({ ...base, character_board: [card] }).has("storyboard"),
    ).toBe(true);
  });
});

describe("stage helpers", () => {
  it("offers every earlier stage as a back target", () => {
    expect(backTargets(makeProject({ stage: "article" }))).toEqual([]);
    expect(backTargets(makeProject({ stage: "script_active" }))).toEqual([
      "article",
      "extracted",
      "premise_ready",
    ]);
  });

  it("rejects unknown stages", () => {
    expect(() => stageIndex("bogus" as never)).toThrow(/unknown stage/);
  });
});

describe("highlight helpers", () => {
  it("cycles the palette when color indexes exceed it", () => {
    const entry = { info_point_index: 6, line_index: 1, score: 0.9 };
    expect(highlightColor({ ...entry, color_index: 0 })).toBe(COLOR_PALETTE[0]);
    expect(highlightColor({ ...entry, color_index: 5 })).toBe(COLOR_PALETTE[5]);
    expect(highlightColor({ ...entry, color_index: 6 })).toBe(COLOR_PALETTE[0]);
    expect(highlightColor({ ...entry, color_index: 13 })).toBe(COLOR_PALETTE[1]);
  });

  it("indexes highlight entries by dialog line", () => {
    const project = makeProject({ highlights: HIGHLIGHTS });
    const byLine = highlightsByLine(project);
    expect(byLine.size).toBe(3);
    expect(byLine.get(2)?.info_point_index).toBe(0);
    expect(byLine.get(5)?.info_point_index).toBe(3);
    expect(highlightsByLine(makeProject()).size).toBe(0);
  });
});

describe("script helpers", () => {
  it("finds the active script and tolerates its absence", () => {
    expect(activeScript(makeProject())).toBeNull();
    const project = makeProject({ scripts: [SCRIPT], active_script_id: SCRIPT.id });
    expect(activeScript(project)?.id).toBe("script-1");
    expect(activeScript({ ...project, active_script_id: "ghost" })).toBeNull();
  });

  it("sorts history by creation time, then id", () => {
    const later = { ...SCRIPT, id: "script-2", created_at: "2000-01-01T00:00:09+00:00" };
    const tied = { ...SCRIPT, id: "script-0" };
    const project = makeProject({ scripts: [later, SCRIPT, tied] });
    expect(scriptHistory(project).map((s) => s.id)).toEqual([
      "script-0",
      "script-1",
      "script-2",
    ]);
  });

  it("reports staleness from the project's stale list", () => {
    const project = makeProject({ stale: ["script", "storyboard"] });
    expect(isStale(project, "script")).toBe(true);
    expect(isStale(project, "premise")).toBe(false);
  });
});
