/** Pure HTML rendering: project state in, markup string out.
 *
 * Keeping this free of DOM access makes the whole view testable in Node.
 */

import {
  activeScript,
  backTargets,
  enabledActions,
  highlightColor,
  highlightsByLine,
  isStale,
} from "./state.js";
import type { ProjectDoc, ScriptLineDoc } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function renderLine(
  line: ScriptLineDoc,
  index: number,
  project: ProjectDoc,
): string {
  if (line.kind === "scene_heading") {
    return `<div class="line heading" data-line="${index}">${escapeHtml(line.text)}</div>`;
  }
  if (line.kind === "direction") {
    return `<div class="line direction" data-line="${index}">[${escapeHtml(line.text)}]</div>`;
  }
  const entry = highlightsByLine(project).get(index);
  const style = entry ? ` style="background:${highlightColor(entry)}"` : "";
  const mark = entry ? ` data-info-point="${entry.info_point_index}"` : "";
  const paren = line.parenthetical
    ? `<span class="paren">(${escapeHtml(line.parenthetical)})</span> `
    : "";
  return (
    `<div class="line dialog" data-line="${index}"${mark}${style}>` +
    `<span class="speaker">${escapeHtml(line.speaker.toUpperCase())}:</span> ` +
    `${paren}${escapeHtml(line.text)}</div>`
  );
}

export function renderScript(project: ProjectDoc): string {
  const script = activeScript(project);
  if (!script) return `<p class="empty">No script yet.</p>`;
  const body = script.lines
    .map((line, index) => renderLine(line, index, project))
    .join("\n");
  const lint = project.lint
    .map((f) => `<li class="lint-${f.code}">${escapeHtml(f.message)}</li>`)
    .join("");
  const star = script.starred ? "&#9733;" : "&#9734;";
  return (
    `<section class="script${isStale(project, "script") ? " stale" : ""}" data-script="${script.id}">` +
    `<header>${script.id} <button data-action="star">${star}</button></header>` +
    `${body}<ul class="lint">${lint}</ul></section>`
  );
}

export function renderPremise(project: ProjectDoc): string {
  const premise = project.premises[project.premises.length - 1];
  if (!premise) return `<p class="empty">No premise yet.</p>`;
  const characters = premise.characters
    .map((c) => `<li>${escapeHtml(c.name)} <em>(${escapeHtml(c.role_label)})</em></li>`)
    .join("");
  const points = premise.info_points
    .map((p, i) => `<li data-info-point="${i}">${escapeHtml(p)}</li>`)
    .join("");
  return (
    `<section class="premise${isStale(project, "premise") ? " stale" : ""}" data-premise="${premise.id}">` +
    `<ul class="characters">${characters}</ul>` +
    `<p class="plot">${escapeHtml(premise.plot)}</p>` +
    `<p class="setting">${escapeHtml(premise.setting)}</p>` +
    `<ol class="info-points">${points}</ol></section>`
  );
}

export function renderBoard(project: ProjectDoc, projectId: string): string {
  if (!project.character_board) return `<p class="empty">No character board yet.</p>`;
  const cards = project.character_board
    .map((card) => {
      const portrait = card.portrait_image
        ? `<img src="/projects/${projectId}/blobs/${card.portrait_image}" alt="portrait">`
        : "";
      const props = card.props.map((p) => `<li>${escapeHtml(p)}</li>`).join("");
      return (
        `<article class="card"><h3>${escapeHtml(card.character_name)}</h3>` +
        `${portrait}<p>${escapeHtml(card.description)}</p><ul>${props}</ul></article>`
      );
    })
    .join("");
  const stale = isStale(project, "character_board") ? " stale" : "";
  return `<section class="board${stale}">${cards}</section>`;
}

export function renderStoryboard(project: ProjectDoc, projectId: string): string {
  if (!project.storyboard) return `<p class="empty">No storyboard yet.</p>`;
  const panels = project.storyboard
    .map((panel) => {
      const image = panel.image
        ? `<img src="/projects/${projectId}/blobs/${panel.image}" alt="panel">`
        : "";
      return (
        `<figure class="panel" data-line="${panel.line_index}">${image}` +
        `<figcaption>${escapeHtml(panel.expression)}; ${escapeHtml(panel.gesture)}; ` +
        `${escapeHtml(panel.action)}</figcaption></figure>`
      );
    })
    .join("");
  const stale = isStale(project, "storyboard") ? " stale" : "";
  return `<section class="storyboard${stale}">${panels}</section>`;
}

export function renderToolbar(project: ProjectDoc): string {
  const enabled = enabledActions(project);
  const buttons = (
    [
      ["extract", "Extract facts"],
      ["premise", "Generate premise"],
      ["script_with_premise", "Generate script"],
      ["highlights", "Assign highlights"],
      ["board", "Character board"],
      ["storyboard", "Storyboard"],
    ] as const
  )
    .map(([action, label]) => {
      const disabled = enabled.has(action) ? "" : " disabled";
      return `<button data-action="${action}"${disabled}>${label}</button>`;
    })
    .join("");
  const targets = backTargets(project)
    .map((stage) => `<option value="${stage}">${stage}</option>`)
    .join("");
  const back = targets
    ? `<select data-action="back"><option value="">back to...</option>${targets}</select>`
    : "";
  return `<nav class="toolbar" data-stage="${project.stage}">${buttons}${back}</nav>`;
}

export function renderProject(project: ProjectDoc): string {
  return (
    `<div class="project" data-project="${project.id}" data-stage="${project.stage}">` +
    `<h2>${escapeHtml(project.article.headline)}</h2>` +
    renderToolbar(project) +
    renderPremise(project) +
    renderScript(project) +
    renderBoard(project, project.id) +
    renderStoryboard(project, project.id) +
    `</div>`
  );
}
