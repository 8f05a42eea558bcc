import { describe, expect, it } from "vitest";
import {
  dialogueView,
  describeLiteral,
  extractNumbers,
  foilOptions,
  formatNumber,
  formatPercent,
  literalBounds,
  numbersMatchPayload,
} from "../src/logic.js";
import type { Dialogue, ExplanationPayload, LiteralPayload } from "../src/types.js";

const CLASSES = ["setosa", "versicolor", "virginica"];

function explanationWith(literals: LiteralPayload[]): ExplanationPayload {
  return {
    fact: 0,
    foil: 1,
    literals,
    x_q: [5.0, 3.4, 1.5, 0.2],
    fact_leaf: 1,
    foil_leaf: 2,
    fidelity: 0.99,
    zero_length: false,
    foil_region_found: true,
    length: literals.length,
  };
}

describe("foilOptions", () => {
  it("never offers the predicted class", () => {
    for (let fact = 0; fact < CLASSES.length; fact += 1) {
      const options = foilOptions(CLASSES, fact);
      expect(options.map((o) => o.index)).not.toContain(fact);
      expect(options).toHaveLength(CLASSES.length - 1);
    }
  });

  it("keeps the class order and pairs names with indices", () => {
    expect(foilOptions(CLASSES, 0)).toEqual([
      { index: 1, name: "versicolor" },
      { index: 2, name: "virginica" },
    ]);
    expect(foilOptions(CLASSES, 1)).toEqual([
      { index: 0, name: "setosa" },
      { index: 2, name: "virginica" },
    ]);
  });

  it("handles a two-class problem with a single option", () => {
    expect(foilOptions(["no", "yes"], 1)).toEqual([{ index: 0, name: "no" }]);
  });
});

describe("dialogueView", () => {
  const dialogue: Dialogue = {
    qualitative: ["System: a", "User: b", "System: c"],
    quantitative: ["System: a", "User: b", "System: c", "User: d", "System: e"],
  };

  it("shows only the qualitative exchange before drilling down", () => {
    const view = dialogueView(dialogue, false);
    expect(view.lines).toEqual(dialogue.qualitative);
    expect(view.newTurnStart).toBe(-1);
    expect(view.canDrillDown).toBe(true);
  });

  it("reveals the quantitative turns after drilling down", () => {
    const view = dialogueView(dialogue, true);
    expect(view.lines).toEqual(dialogue.quantitative);
    expect(view.newTurnStart).toBe(3);
    expect(view.lines.slice(0, view.newTurnStart)).toEqual(dialogue.qualitative);
  });

  it("offers no drill-down when both levels coincide", () => {
    const flat: Dialogue = {
      qualitative: ["System: nothing to change."],
      quantitative: ["System: nothing to change."],
    };
    for (const drilled of [false, true]) {
      const view = dialogueView(flat, drilled);
      expect(view.lines).toEqual(flat.qualitative);
      expect(view.canDrillDown).toBe(false);
      expect(view.newTurnStart).toBe(-1);
    }
  });
});

describe("literalBounds", () => {
  it("emits one value per single-sided literal", () => {
    expect(
      literalBounds([
        { feature: 3, lower: null, upper: 0.8 },
        { feature: 1, lower: 3.05, upper: null },
      ]),
    ).toEqual([0.8, 3.05]);
  });

  it("emits lower before upper for an interval literal", () => {
    expect(literalBounds([{ feature: 2, lower: 2.45, upper: 4.15 }])).toEqual([2.45, 4.15]);
  });

  it("is empty for no literals", () => {
    expect(literalBounds([])).toEqual([]);
  });
});

describe("extractNumbers", () => {
  it("pulls decimals, integers and negatives in reading order", () => {
    expect(extractNumbers("between 2.45 and 4.15, then -3 and 1e-4")).toEqual([
      2.45, 4.15, -3, 1e-4,
    ]);
  });

  it("returns nothing for prose without digits", () => {
    expect(extractNumbers("System: the value should be smaller.")).toEqual([]);
  });
});

describe("numbersMatchPayload", () => {
  const literals: LiteralPayload[] = [
    { feature: 3, lower: null, upper: 0.8 },
    { feature: 2, lower: 2.45, upper: 4.15 },
  ];
  const dialogue: Dialogue = {
    qualitative: ["System: p", "User: q", "System: r"],
    quantitative: [
      "System: p",
      "User: q",
      "System: r",
      "User: what exactly?",
      "System: the 'petal width (cm)' should be smaller than or equal to 0.8" +
        " and the 'petal length (cm)' should be between 2.45 and 4.15.",
    ],
  };

  it("accepts when the final line's numbers equal the payload bounds in order", () => {
    expect(numbersMatchPayload(dialogue, explanationWith(literals))).toBe(true);
  });

  it("rejects a tampered bound", () => {
    const tampered: Dialogue = {
      ...dialogue,
      quantitative: [
        ...dialogue.quantitative.slice(0, -1),
        "System: the 'petal width (cm)' should be smaller than or equal to 0.9" +
          " and the 'petal length (cm)' should be between 2.45 and 4.15.",
      ],
    };
    expect(numbersMatchPayload(tampered, explanationWith(literals))).toBe(false);
  });

  it("rejects a dropped bound", () => {
    const short: Dialogue = {
      ...dialogue,
      quantitative: [
        ...dialogue.quantitative.slice(0, -1),
        "System: the 'petal width (cm)' should be smaller than or equal to 0.8.",
      ],
    };
    expect(numbersMatchPayload(short, explanationWith(literals))).toBe(false);
  });

  it("treats a zero-length explanation as matching when no follow-up exists", () => {
    const flat: Dialogue = {
      qualitative: ["System: a", "User: b", "System: already there."],
      quantitative: ["System: a", "User: b", "System: already there."],
    };
    expect(numbersMatchPayload(flat, explanationWith([]))).toBe(true);
  });

  it("flags a quantitative follow-up that should not exist", () => {
    expect(numbersMatchPayload(dialogue, explanationWith([]))).toBe(false);
  });
});

describe("describeLiteral", () => {
  const names = ["sepal length (cm)", "sepal width (cm)", "petal length (cm)", "petal width (cm)"];

  it("renders upper, lower and interval forms", () => {
    expect(describeLiteral({ feature: 3, lower: null, upper: 0.8 }, names)).toBe(
      "petal width (cm) ≤ 0.8",
    );
    expect(describeLiteral({ feature: 1, lower: 3.05, upper: null }, names)).toBe(
      "sepal width (cm) > 3.05",
    );
    expect(describeLiteral({ feature: 2, lower: 2.45, upper: 4.15 }, names)).toBe(
      "2.45 < petal length (cm) ≤ 4.15",
    );
  });

  it("prefers the payload's own feature_name and falls back to an index", () => {
    expect(describeLiteral({ feature: 0, feature_name: "alias", lower: null, upper: 1 }, names)).toBe(
      "alias ≤ 1",
    );
    expect(describeLiteral({ feature: 9, lower: null, upper: 1 }, names)).toBe("feature 9 ≤ 1");
  });
});

describe("formatting", () => {
  it("prints numbers exactly as JSON parsed them", () => {
    expect(formatNumber(0.8)).toBe("0.8");
    expect(formatNumber(2.45)).toBe("2.45");
    expect(formatNumber(3)).toBe("3");
  });

  it("prints percentages with one decimal", () => {
    expect(formatPercent(0.985)).toBe("98.5%");
    expect(formatPercent(1)).toBe("100.0%");
  });
});
