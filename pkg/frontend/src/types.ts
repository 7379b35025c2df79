/** Evaluation bundle schema, as emitted by the CLI and the service. */

export interface UtteranceDoc {
  speaker: string;
  text: string;
  start_ms?: number;
  end_ms?: number;
  overlap?: boolean;
}

export interface TranscriptDoc {
  speakers: string[];
  utterances: UtteranceDoc[];
}

export interface TokenRef {
  utt: number;
  tok: number;
}

export interface RefTokenRef extends TokenRef {
  speaker: string;
}

export type ColumnClass = "full" | "partial" | "mismatch" | "gap_hyp" | "gap_ref";

export interface AlignmentColumn {
  hyp: TokenRef | null;
  ref: RefTokenRef | null;
  class: ColumnClass;
}

export interface AlignmentDoc {
  rows: number;
  columns: AlignmentColumn[];
}

export interface MappingDoc {
  mapped: Record<string, string>;
  unmapped_hyp: string[];
  unmapped_ref: string[];
}

export interface SideStats {
  tokens: number;
  speakers: number;
}

export interface ReportDoc {
  wer?: number | null;
  wder?: number | null;
  tder?: number | null;
  df1?: { precision: number; recall: number; f1: number } | null;
  [key: string]: unknown;
}

export interface Bundle {
  reference: TranscriptDoc;
  hypothesis: TranscriptDoc;
  stats: { reference: SideStats; hypothesis: SideStats };
  alignment: AlignmentDoc;
  mapping: MappingDoc;
  report: ReportDoc;
}

export const METRIC_NAMES = ["WDER", "WER", "TDER", "DF1"] as const;
export type MetricName = (typeof METRIC_NAMES)[number];

export class BundleError extends Error {}

function isObject(value: unknown): value is Record<string, unknown> {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

function checkTranscript(value: unknown, where: string): TranscriptDoc {
  if (!isObject(value)) throw new BundleError(`${where}: not an object`);
  if (!Array.isArray(value.speakers)) throw new BundleError(`${where}.speakers: missing`);
  if (!Array.isArray(value.utterances)) throw new BundleError(`${where}.utterances: missing`);
  for (const [i, utt] of value.utterances.entries()) {
    if (!isObject(utt) || typeof utt.speaker !== "string" || typeof utt.text !== "string") {
      throw new BundleError(`${where}.utterances[${i}]: needs speaker and text`);
    }
  }
  return value as unknown as TranscriptDoc;
}

/** Validate an uploaded document; throws BundleError with a readable message. */
export function validateBundle(value: unknown): Bundle {
  if (!isObject(value)) throw new BundleError("bundle: not a JSON object");
  const reference = checkTranscript(value.reference, "reference");
  const hypothesis = checkTranscript(value.hypothesis, "hypothesis");
  if (!isObject(value.stats)) throw new BundleError("stats: missing");
  const alignment = value.alignment;
  if (!isObject(alignment) || !Array.isArray(alignment.columns)) {
    throw new BundleError("alignment.columns: missing");
  }
  for (const [i, col] of alignment.columns.entries()) {
    if (!isObject(col) || typeof col.class !== "string") {
      throw new BundleError(`alignment.columns[${i}]: malformed`);
    }
    if (col.hyp === undefined || col.ref === undefined) {
      throw new BundleError(`alignment.columns[${i}]: needs hyp and ref slots`);
    }
  }
  const mapping = value.mapping;
  if (!isObject(mapping) || !isObject(mapping.mapped)) {
    throw new BundleError("mapping.mapped: missing");
  }
  if (!isObject(value.report)) throw new BundleError("report: missing");
  return value as unknown as Bundle;
}

const PAIR_CLASSES: ReadonlySet<string> = new Set(["full", "partial", "mismatch"]);

export function isPairColumn(col: AlignmentColumn): boolean {
  return PAIR_CLASSES.has(col.class) && col.hyp !== null && col.ref !== null;
}

/** Hypothesis speaker a column's token belongs to, via its utterance. */
export function columnHypSpeaker(bundle: Bundle, col: AlignmentColumn): string | null {
  if (col.hyp === null) return null;
  const utt = bundle.hypothesis.utterances[col.hyp.utt];
  return utt ? utt.speaker : null;
}

/** Column indices whose mapped hypothesis speaker disagrees with the reference. */
export function speakerIncorrectColumns(bundle: Bundle): Set<number> {
  const wrong = new Set<number>();
  bundle.alignment.columns.forEach((col, index) => {
    if (!isPairColumn(col)) return;
    const hypSpeaker = columnHypSpeaker(bundle, col);
    const mappedTo = hypSpeaker === null ? undefined : bundle.mapping.mapped[hypSpeaker];
    if (mappedTo !== col.ref!.speaker) wrong.add(index);
  });
  return wrong;
}
