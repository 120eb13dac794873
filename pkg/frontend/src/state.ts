/** Pure view-model helpers: stage gating, highlight colors, staleness. */

import type { HighlightEntryDoc, ProjectDoc, ScriptDoc, Stage } from "./types.js";

/** Mirrors the server's six-color highlight palette. */
export const COLOR_PALETTE = [
  "#f94144",
  "#f8961e",
  "#f9c74f",
  "#90be6d",
  "#43aa8b",
  "#577590",
] as const;

export const STAGE_ORDER: Stage[] = [
  "article",
  "extracted",
  "premise_ready",
  "script_active",
  "board_ready",
  "storyboard_ready",
];

export function stageIndex(stage: Stage): number {
  const index = STAGE_ORDER.indexOf(stage);
  if (index < 0) throw new Error(`unknown stage: ${stage}`);
  return index;
}

export type WorkflowAction =
  | "extract"
  | "premise"
  | "script_with_premise"
  | "script_without_premise"
  | "highlights"
  | "board"
  | "storyboard";

/** Which forward actions the current project state permits. */
export function enabledActions(project: ProjectDoc): Set<WorkflowAction> {
  const enabled = new Set<WorkflowAction>(["extract"]);
  if (project.news_facts !== null) {
    enabled.add("premise");
    enabled.add("script_without_premise");
  }
  if (project.premises.length > 0) {
    enabled.add("script_with_premise");
  }
  if (project.active_script_id !== null) {
    enabled.add("highlights");
    enabled.add("board");
  }
  if (project.character_board !== null && project.character_board.length > 0) {
    enabled.add("storyboard");
  }
  return enabled;
}

/** Stages a backward jump may target from the current one. */
export function backTargets(project: ProjectDoc): Stage[] {
  const current = stageIndex(project.stage);
  return STAGE_ORDER.filter((_, index) => index < current);
}

export function highlightColor(entry: HighlightEntryDoc): string {
  const color = COLOR_PALETTE[entry.color_index % COLOR_PALETTE.length];
  if (!color) throw new Error(`bad color index: ${entry.color_index}`);
  return color;
}

/** Map line index -> highlight entry for the active script. */
export function highlightsByLine(
  project: ProjectDoc,
): Map<number, HighlightEntryDoc> {
  const byLine = new Map<number, HighlightEntryDoc>();
  for (const entry of project.highlights?.entries ?? []) {
    byLine.set(entry.line_index, entry);
  }
  return byLine;
}

export function activeScript(project: ProjectDoc): ScriptDoc | null {
  if (project.active_script_id === null) return null;
  return project.scripts.find((s) => s.id === project.active_script_id) ?? null;
}

export function isStale(project: ProjectDoc, artifact: string): boolean {
  return project.stale.includes(artifact);
}

/** Oldest-first script history, matching the server's ordering. */
export function scriptHistory(project: ProjectDoc): ScriptDoc[] {
  return [...project.scripts].sort((a, b) =>
    a.created_at === b.created_at
      ? a.id.localeCompare(b.id)
      : a.created_at.localeCompare(b.created_at),
  );
}
