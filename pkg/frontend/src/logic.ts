import type { Dialogue, ExplanationPayload, LiteralPayload } from "./types.js";

export interface FoilOption {
  index: number;
  name: string;
}

/** Contrast classes the user may ask about: every class except the
 * predicted one. The predicted class is never a valid contrast. */
export function foilOptions(classNames: string[], factIndex: number): FoilOption[] {
  return classNames
    .map((name, index) => ({ index, name }))
    .filter((option) => option.index !== factIndex);
}

export interface DialogueView {
  lines: string[];
  /** Index of the first line revealed by drilling down, or -1 when the
   * drill-down adds nothing (no thresholds to reveal). */
  newTurnStart: number;
  canDrillDown: boolean;
}

/** Staged rendering: the qualitative exchange first, the quantitative
 * follow-up (bounds filled in) only after an explicit drill-down. */
export function dialogueView(dialogue: Dialogue, drilledDown: boolean): DialogueView {
  const { qualitative, quantitative } = dialogue;
  const canDrillDown = quantitative.length > qualitative.length;
  if (!drilledDown || !canDrillDown) {
    return { lines: qualitative, newTurnStart: -1, canDrillDown };
  }
  return { lines: quantitative, newTurnStart: qualitative.length, canDrillDown };
}

/** Bounds in the order the quantitative answer spells them out: literal by
 * literal, an interval contributing its lower bound before its upper. */
export function literalBounds(literals: LiteralPayload[]): number[] {
  const out: number[] = [];
  for (const lit of literals) {
    if (lit.lower !== null && lit.upper !== null) {
      out.push(lit.lower, lit.upper);
    } else if (lit.upper !== null) {
      out.push(lit.upper);
    } else if (lit.lower !== null) {
      out.push(lit.lower);
    }
  }
  return out;
}

const NUMBER_RE = /-?\d+(?:\.\d+)?(?:e-?\d+)?/gi;

/** Numbers appearing in a dialogue line, in reading order. */
export function extractNumbers(line: string): number[] {
  const matches = line.match(NUMBER_RE);
  return matches ? matches.map(Number) : [];
}

/** True when the quantitative answer's numbers are exactly the literal
 * bounds from the structured payload, in order. A mismatch means the text
 * and the data disagree and the UI must not pretend otherwise. */
export function numbersMatchPayload(dialogue: Dialogue, explanation: ExplanationPayload): boolean {
  const expected = literalBounds(explanation.literals);
  if (expected.length === 0) {
    // nothing quantitative to check: zero-length and no-contrast dialogues
    return dialogue.quantitative.length === dialogue.qualitative.length;
  }
  const last = dialogue.quantitative[dialogue.quantitative.length - 1];
  if (last === undefined) return false;
  const found = extractNumbers(last);
  return found.length === expected.length && found.every((v, i) => v === expected[i]);
}

/** Short rule text for a literal chip, e.g. "2.45 < petal length (cm) <= 4.15". */
export function describeLiteral(lit: LiteralPayload, featureNames: string[]): string {
  const name = lit.feature_name ?? featureNames[lit.feature] ?? `feature ${lit.feature}`;
  if (lit.lower !== null && lit.upper !== null) {
    return `${formatNumber(lit.lower)} < ${name} ≤ ${formatNumber(lit.upper)}`;
  }
  if (lit.upper !== null) {
    return `${name} ≤ ${formatNumber(lit.upper)}`;
  }
  return `${name} > ${formatNumber(lit.lower as number)}`;
}

/** Exact decimal rendering; JavaScript's default float printing is already
 * the shortest round-tripping form. */
export function formatNumber(v: number): string {
  return String(v);
}

export function formatPercent(p: number): string {
  return `${(p * 100).toFixed(1)}%`;
}
