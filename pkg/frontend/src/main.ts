import { ApiClient, ApiError } from "./api.js";
import { dialogueView, foilOptions } from "./logic.js";
import { renderTreeSvg } from "./treeview.js";
import * as ui from "./ui.js";
import type {
  DatasetSummary,
  ExplainResponse,
  InstancePayload,
  ModelInfo,
  Prediction,
  TreeResponse,
} from "./types.js";

const INSTANCE_PREVIEW = 15;
const MODEL_KINDS = ["logistic-regression", "random-forest", "mlp", "linear-svm"];

interface AppState {
  datasets: DatasetSummary[];
  datasetId: string | null;
  model: ModelInfo | null;
  instances: InstancePayload[];
  instanceIndex: number | null;
  prediction: Prediction | null;
  foilIndex: number | null;
  result: ExplainResponse | null;
  tree: TreeResponse | null;
  drilledDown: boolean;
}

const state: AppState = {
  datasets: [],
  datasetId: null,
  model: null,
  instances: [],
  instanceIndex: null,
  prediction: null,
  foilIndex: null,
  result: null,
  tree: null,
  drilledDown: false,
};

const api = new ApiClient("");

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function setStatus(message: string, isError = false): void {
  const bar = el<HTMLElement>("status");
  bar.textContent = message;
  bar.classList.toggle("error", isError);
}

function reportError(err: unknown): void {
  if (err instanceof ApiError) {
    setStatus(`${err.code}: ${err.message}`, true);
  } else {
    setStatus(String(err), true);
  }
}

function resetFrom(level: "model" | "instance" | "question"): void {
  if (level === "model") {
    state.model = null;
    el<HTMLElement>("model-summary").innerHTML = "";
  }
  if (level === "model" || level === "instance") {
    state.instances = [];
    state.instanceIndex = null;
    state.prediction = null;
    el<HTMLElement>("instance-rows").innerHTML = "";
    el<HTMLElement>("instance-detail").innerHTML = "";
    el<HTMLElement>("prediction").innerHTML = "";
  }
  state.foilIndex = null;
  state.result = null;
  state.tree = null;
  state.drilledDown = false;
  el<HTMLElement>("foil-selector").innerHTML = "";
  el<HTMLElement>("dialogue").innerHTML = "";
  el<HTMLElement>("literal-chips").innerHTML = "";
  el<HTMLElement>("explanation-meta").innerHTML = "";
  el<HTMLElement>("tree-svg").innerHTML = "";
  el<HTMLElement>("tree-caption").textContent = "";
  el<HTMLButtonElement>("drill-btn").hidden = true;
  el<HTMLButtonElement>("explain-btn").disabled = true;
}

async function loadDatasets(): Promise<void> {
  state.datasets = await api.listDatasets();
  state.datasetId = state.datasets[0]?.id ?? null;
  el<HTMLSelectElement>("dataset-select").innerHTML = ui.datasetOptions(
    state.datasets,
    state.datasetId,
  );
}

async function trainModel(): Promise<void> {
  if (!state.datasetId) return;
  const kind = el<HTMLSelectElement>("model-kind").value;
  setStatus("training...");
  resetFrom("model");
  state.model = await api.trainModel(state.datasetId, kind);
  el<HTMLElement>("model-summary").innerHTML = ui.modelSummary(state.model);
  await loadInstances();
  setStatus("model ready, pick a test instance");
}

async function loadInstances(): Promise<void> {
  if (!state.datasetId) return;
  const detail = await api.datasetDetail(state.datasetId);
  const count = Math.min(INSTANCE_PREVIEW, detail.n_test);
  const fetched: InstancePayload[] = [];
  for (let i = 0; i < count; i += 1) {
    fetched.push(await api.instance(state.datasetId, i));
  }
  state.instances = fetched;
  el<HTMLElement>("instance-rows").innerHTML = ui.instanceRows(fetched, null);
}

async function selectInstance(index: number): Promise<void> {
  if (!state.model || !state.datasetId) return;
  resetFrom("question");
  state.instanceIndex = index;
  const inst = state.instances.find((x) => x.index === index);
  if (!inst) return;
  el<HTMLElement>("instance-rows").innerHTML = ui.instanceRows(state.instances, index);
  el<HTMLElement>("instance-detail").innerHTML = ui.instanceDetail(inst);
  state.prediction = await api.predict(state.model.model_id, index);
  el<HTMLElement>("prediction").innerHTML =
    `<p>model says <strong>${state.prediction.predicted_class_name}</strong></p>` +
    ui.distributionBars(state.prediction);
  const options = foilOptions(state.prediction.class_names, state.prediction.predicted_class);
  el<HTMLElement>("foil-selector").innerHTML = ui.foilSelector(options, null);
  setStatus("ask a contrastive question");
}

async function explain(): Promise<void> {
  if (!state.model || state.instanceIndex === null || state.foilIndex === null) return;
  setStatus("building a local tree...");
  state.drilledDown = false;
  state.result = await api.explain(state.model.model_id, state.instanceIndex, {
    foil: state.foilIndex,
  });
  state.tree = await api.tree(state.result.tree_id);
  renderDialogue();
  renderTree();
  setStatus("explanation ready");
}

function renderDialogue(): void {
  if (!state.result) return;
  const view = dialogueView(state.result.dialogue, state.drilledDown);
  el<HTMLElement>("dialogue").innerHTML = ui.dialogueTurns(view);
  el<HTMLButtonElement>("drill-btn").hidden = !view.canDrillDown;
  el<HTMLElement>("literal-chips").innerHTML = state.drilledDown
    ? ui.literalChips(state.result)
    : "";
  el<HTMLElement>("explanation-meta").innerHTML = ui.explanationMeta(state.result);
}

function renderTree(): void {
  if (!state.result || !state.tree) return;
  el<HTMLElement>("tree-svg").innerHTML = renderTreeSvg(state.tree);
  const n = state.tree.literal_nodes.length;
  el<HTMLElement>("tree-caption").textContent =
    `${state.tree.tree.nodes.length} nodes; ` +
    `${n} highlighted decision node${n === 1 ? "" : "s"} back the answer`;
}

function wireEvents(): void {
  el<HTMLSelectElement>("dataset-select").addEventListener("change", (ev) => {
    state.datasetId = (ev.target as HTMLSelectElement).value;
    resetFrom("model");
  });
  el<HTMLButtonElement>("train-btn").addEventListener("click", () => {
    trainModel().catch(reportError);
  });
  el<HTMLElement>("instance-rows").addEventListener("click", (ev) => {
    const row = (ev.target as HTMLElement).closest("tr[data-index]");
    if (!row) return;
    selectInstance(Number(row.getAttribute("data-index"))).catch(reportError);
  });
  el<HTMLElement>("foil-selector").addEventListener("change", (ev) => {
    const input = ev.target as HTMLInputElement;
    if (input.name !== "foil") return;
    state.foilIndex = Number(input.value);
    el<HTMLButtonElement>("explain-btn").disabled = false;
  });
  el<HTMLButtonElement>("explain-btn").addEventListener("click", () => {
    explain().catch(reportError);
  });
  el<HTMLButtonElement>("drill-btn").addEventListener("click", () => {
    state.drilledDown = true;
    renderDialogue();
  });
}

async function boot(): Promise<void> {
  el<HTMLSelectElement>("model-kind").innerHTML = MODEL_KINDS.map(
    (k) => `<option value="${k}">${k}</option>`,
  ).join("");
  wireEvents();
  resetFrom("model");
  await api.health();
  await loadDatasets();
  setStatus("pick a dataset and train a model");
}

boot().catch(reportError);
