import { describe, expect, it } from "vitest";

import {
  escapeHtml,
  renderBoard,
  renderPremise,
  renderProject,
  renderScript,
  renderStoryboard,
  renderToolbar,
} from "../src/render.js";
import { COLOR_PALETTE } from "../src/state.js";
import {
  BOARD,
  HIGHLIGHTS,
  NEWS_FACTS,
  PREMISE,
  SCRIPT,
  STORYBOARD,
  makeProject,
} from "./fixtures.js";

describe("escapeHtml", () => {
  it("neutralizes markup characters", () => {
    expect(escapeHtml(`<b>"A & B"</b>`)).toBe(
      "&lt;b&gt;&quot;A &amp; B&quot;&lt;/b&gt;",
    );
  });
});

describe("renderScript", () => {
  const project = makeProject({
    scripts: [SCRIPT],
    active_script_id: SCRIPT.id,
    highlights: HIGHLIGHTS,
  });

  it("renders each line kind distinctly", () => {
    const html = renderScript(project);
    expect(html).toContain(`class="line heading"`);
    expect(html).toContain("INT. BANK BRANCH - DAY");
    expect(html).toContain("[Ed slides his card across the counter.]");
    expect(html).toContain(`<span class="speaker">ED DELANEY:</span>`);
    expect(html).toContain(`<span class="paren">(incredulous)</span>`);
  });

  it("paints highlighted dialog lines with palette colors", () => {
    const html = renderScript(project);
    expect(html).toContain(
      `data-line="2" data-info-point="0" style="background:${COLOR_PALETTE[0]}"`,
    );
    expect(html).toContain(
      `data-line="3" data-info-point="1" style="background:${COLOR_PALETTE[1]}"`,
    );
    // Unhighlighted dialog carries neither marker.
    expect(html).toContain(`<div class="line dialog" data-line="4">`);
  });

  it("shows the star state and lint findings", () => {
    expect(renderScript(project)).toContain("&#9734;");
    const starred = {
      ...project,
      scripts: [{ ...SCRIPT, starred: true }],
      lint: [{ code: "too_many_lines", message: "13 dialog lines", line_index: null }],
    };
    const html = renderScript(starred);
    expect(html).toContain("&#9733;");
    expect(html).toContain(`<li class="lint-too_many_lines">13 dialog lines</li>`);
  });

  it("marks a stale script section", () => {
    const html = renderScript({ ...project, stale: ["script"] });
    expect(html).toContain(`class="script stale"`);
  });

  it("degrades gracefully without a script", () => {
    expect(renderScript(makeProject())).toContain("No script yet.");
  });
});

describe("renderPremise", () => {
  it("shows the latest premise with roles and numbered points", () => {
    const edited = { ...PREMISE, id: "premise-2", plot: "A calmer retelling." };
    const html = renderPremise(makeProject({ premises: [PREMISE, edited] }));
    expect(html).toContain(`data-premise="premise-2"`);
    expect(html).toContain("A calmer retelling.");
    expect(html).toContain("Ed Delaney <em>(dominant)</em>");
    expect(html).toContain(`<li data-info-point="0">The outage lasted six hours.</li>`);
  });
});

describe("renderBoard and renderStoryboard", () => {
  it("links card images through the blob endpoint", () => {
    const html = renderBoard(makeProject({ character_board: BOARD }), "proj-1");
    expect(html).toContain(`src="/projects/proj-1/blobs/aaaa1111.png"`);
    expect(html).toContain("<h3>Priya Shah</h3>");
    expect(html).toContain("<li>debit card</li>");
  });

  it("emits one panel per storyboarded line", () => {
    const html = renderStoryboard(makeProject({ storyboard: STORYBOARD }), "proj-1");
    for (const panel of STORYBOARD) {
      expect(html).toContain(`data-line="${panel.line_index}"`);
      expect(html).toContain(`blobs/${panel.image}`);
    }
    expect(html).toContain("neutral; hands on the counter; leaning forward");
  });
});

describe("renderToolbar", () => {
  it("disables actions the stage does not permit", () => {
    const html = renderToolbar(makeProject({ news_facts: NEWS_FACTS, stage: "extracted" }));
    expect(html).toContain(`<button data-action="extract">`);
    expect(html).toContain(`<button data-action="premise">`);
    expect(html).toContain(`<button data-action="highlights" disabled>`);
    expect(html).toContain(`<button data-action="storyboard" disabled>`);
    expect(html).toContain(`<option value="article">`);
  });

  it("offers no back control on a fresh project", () => {
    expect(renderToolbar(makeProject())).not.toContain("back to...");
  });
});

describe("renderProject", () => {
  it("is a pure function of the project document", () => {
    const project = makeProject({
      news_facts: NEWS_FACTS,
      premises: [PREMISE],
      scripts: [SCRIPT],
      active_script_id: SCRIPT.id,
      highlights: HIGHLIGHTS,
      character_board: BOARD,
      storyboard: STORYBOARD,
      stage: "storyboard_ready",
    });
    const fromPost = renderProject(project);
    const fromGet = renderProject(JSON.parse(JSON.stringify(project)));
    expect(fromGet).toBe(fromPost);
    expect(fromPost).toContain(`data-project="proj-1"`);
    expect(fromPost).toContain(`data-stage="storyboard_ready"`);
  });
});
