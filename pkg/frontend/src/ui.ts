import {
  describeLiteral,
  formatNumber,
  formatPercent,
  type DialogueView,
  type FoilOption,
} from "./logic.js";
import type {
  DatasetSummary,
  ExplainResponse,
  InstancePayload,
  ModelInfo,
  Prediction,
} from "./types.js";

function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function datasetOptions(datasets: DatasetSummary[], selected: string | null): string {
  return datasets
    .map(
      (d) =>
        `<option value="${escapeHtml(d.id)}"${d.id === selected ? " selected" : ""}>` +
        `${escapeHtml(d.name)} (${d.n_features} features, ${d.n_classes} classes)</option>`,
    )
    .join("");
}

export function modelSummary(model: ModelInfo): string {
  const warn = model.converged ? "" : ` <span class="warn">did not converge</span>`;
  return (
    `<span class="model-kind">${escapeHtml(model.kind)}</span> on ` +
    `${escapeHtml(model.dataset_id)} — test F1 ${model.f1.toFixed(3)}${warn}`
  );
}

export function instanceRows(instances: InstancePayload[], selected: number | null): string {
  return instances
    .map((inst) => {
      const cls = inst.index === selected ? ` class="selected"` : "";
      const values = inst.values.map((v) => formatNumber(v)).join(", ");
      return (
        `<tr data-index="${inst.index}"${cls}>` +
        `<td>#${inst.index}</td><td>${escapeHtml(inst.true_class_name)}</td>` +
        `<td class="values">${escapeHtml(values)}</td></tr>`
      );
    })
    .join("");
}

export function instanceDetail(inst: InstancePayload): string {
  const rows = inst.feature_names
    .map(
      (name, i) =>
        `<tr><td>${escapeHtml(name)}</td><td>${formatNumber(inst.values[i] ?? NaN)}</td></tr>`,
    )
    .join("");
  return (
    `<table class="features"><tbody>${rows}</tbody></table>` +
    `<p class="truth">labeled <strong>${escapeHtml(inst.true_class_name)}</strong> in the data</p>`
  );
}

export function distributionBars(prediction: Prediction): string {
  return prediction.class_names
    .map((name, i) => {
      const p = prediction.distribution[i] ?? 0;
      const predicted = i === prediction.predicted_class ? " predicted" : "";
      return (
        `<div class="dist-row${predicted}">` +
        `<span class="dist-name">${escapeHtml(name)}</span>` +
        `<span class="dist-bar"><span style="width:${Math.round(p * 100)}%"></span></span>` +
        `<span class="dist-value">${formatPercent(p)}</span></div>`
      );
    })
    .join("");
}

/** Radio buttons for the contrast class; the predicted class is absent by
 * construction of the option list. */
export function foilSelector(options: FoilOption[], selected: number | null): string {
  return options
    .map((opt) => {
      const checked = opt.index === selected ? " checked" : "";
      return (
        `<label class="foil-option"><input type="radio" name="foil" value="${opt.index}"${checked}/>` +
        `Why not <strong>${escapeHtml(opt.name)}</strong>?</label>`
      );
    })
    .join("");
}

export function dialogueTurns(view: DialogueView): string {
  return view.lines
    .map((line, i) => {
      const speaker = line.startsWith("User:") ? "user" : "system";
      const fresh = view.newTurnStart >= 0 && i >= view.newTurnStart ? " fresh" : "";
      const text = line.replace(/^(System|User):\s*/, "");
      return `<div class="turn ${speaker}${fresh}"><p>${escapeHtml(text)}</p></div>`;
    })
    .join("");
}

export function literalChips(result: ExplainResponse): string {
  if (result.explanation.literals.length === 0) return "";
  return result.explanation.literals
    .map(
      (lit) =>
        `<span class="chip">${escapeHtml(describeLiteral(lit, result.feature_names))}</span>`,
    )
    .join("");
}

export function explanationMeta(result: ExplainResponse): string {
  const e = result.explanation;
  const pieces = [
    `${e.length} condition${e.length === 1 ? "" : "s"}`,
    `local fidelity ${(e.fidelity * 100).toFixed(1)}%`,
  ];
  if (e.zero_length) pieces.push("instance already sits in a contrast region");
  if (!e.foil_region_found) pieces.push("no contrast region nearby");
  return pieces.map((p) => `<span>${escapeHtml(p)}</span>`).join(" · ");
}
