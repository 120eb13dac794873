/** Shapes of the JSON documents the workspace API serves. */

export type Stage =
  | "article"
  | "extracted"
  | "premise_ready"
  | "script_active"
  | "board_ready"
  | "storyboard_ready";

export type Framing = "expository_dialog" | "reenactment" | "comedic_analogy";

export type Condition = "with_premise" | "without_premise";

export interface ArticleDoc {
  headline: string;
  body: string;
  source_url: string | null;
  ingested_at: string;
}

export interface StakeholderDoc {
  name: string;
  activity: string;
}

export interface NewsFactsDoc {
  setting: string;
  stakeholders: StakeholderDoc[];
  plot_summary: string;
  info_points: string[];
  plot_elements: string[];
  warnings: string[];
}

export interface PremiseCharacterDoc {
  name: string;
  role_label: string;
}

export interface PremiseDoc {
  id: string;
  framing: Framing;
  characters: PremiseCharacterDoc[];
  plot: string;
  setting: string;
  info_points: string[];
  candidate_plots: string[];
  provenance: "generated" | "edited";
}

export interface DialogLineDoc {
  kind: "dialog";
  speaker: string;
  text: string;
  parenthetical: string | null;
}

export interface DirectionLineDoc {
  kind: "direction";
  text: string;
}

export interface SceneHeadingLineDoc {
  kind: "scene_heading";
  text: string;
}

export type ScriptLineDoc = DialogLineDoc | DirectionLineDoc | SceneHeadingLineDoc;

export interface ScriptDoc {
  id: string;
  premise_id: string | null;
  condition: Condition;
  lines: ScriptLineDoc[];
  provenance: "generated" | "edited";
  starred: boolean;
  created_at: string;
}

export interface HighlightEntryDoc {
  info_point_index: number;
  line_index: number;
  score: number;
  color_index: number;
}

export interface HighlightSetDoc {
  entries: HighlightEntryDoc[];
}

export interface CharacterCardDoc {
  character_name: string;
  description: string;
  props: string[];
  background_description: string;
  background_image_prompt: string;
  portrait_image: string | null;
  background_image: string | null;
}

export interface StoryboardPanelDoc {
  line_index: number;
  expression: string;
  gesture: string;
  action: string;
  image: string | null;
}

export interface LintFindingDoc {
  code: string;
  message: string;
  line_index: number | null;
}

export interface ProjectDoc {
  id: string;
  article: ArticleDoc;
  stage: Stage;
  news_facts: NewsFactsDoc | null;
  premises: PremiseDoc[];
  scripts: ScriptDoc[];
  active_script_id: string | null;
  highlights: HighlightSetDoc | null;
  character_board: CharacterCardDoc[] | null;
  board_generation: number;
  storyboard: StoryboardPanelDoc[] | null;
  storyboard_board_generation: number | null;
  stale: string[];
  provider_calls: number;
  formatted_script: string | null;
  lint: LintFindingDoc[];
}

export interface ApiErrorBody {
  error: { code: string; message: string };
}
