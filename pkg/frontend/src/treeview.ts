import { formatNumber } from "./logic.js";
import type { TreeExport, TreeNodePayload, TreeResponse } from "./types.js";

const NODE_RADIUS = 14;
const ROW_HEIGHT = 78;
const COL_WIDTH = 46;
const MARGIN = 28;

export interface NodePosition {
  id: number;
  x: number;
  y: number;
}

interface IndexedTree {
  byId: Map<number, TreeNodePayload>;
  root: TreeNodePayload;
}

function index(tree: TreeExport): IndexedTree {
  const byId = new Map(tree.nodes.map((n) => [n.id, n]));
  const root = byId.get(tree.root);
  if (!root) throw new Error(`tree has no root node ${tree.root}`);
  return { byId, root };
}

/** Classic tidy layout: leaves take consecutive columns left to right,
 * every internal node sits midway between its children, depth sets the row. */
export function layoutTree(tree: TreeExport): Map<number, NodePosition> {
  const { byId, root } = index(tree);
  const positions = new Map<number, NodePosition>();
  let nextLeafSlot = 0;

  const place = (node: TreeNodePayload): number => {
    const y = MARGIN + node.depth * ROW_HEIGHT;
    if (node.is_leaf || node.left === null || node.right === null) {
      const x = MARGIN + nextLeafSlot * COL_WIDTH;
      nextLeafSlot += 1;
      positions.set(node.id, { id: node.id, x, y });
      return x;
    }
    const left = byId.get(node.left);
    const right = byId.get(node.right);
    if (!left || !right) throw new Error(`node ${node.id} points at missing children`);
    const x = (place(left) + place(right)) / 2;
    positions.set(node.id, { id: node.id, x, y });
    return x;
  };

  place(root);
  return positions;
}

/** Node ids on the root-to-leaf path of the given leaf. */
export function pathToRoot(tree: TreeExport, leafId: number): number[] {
  const { byId } = index(tree);
  const path: number[] = [];
  let cursor: TreeNodePayload | undefined = byId.get(leafId);
  while (cursor) {
    path.push(cursor.id);
    cursor = cursor.parent === null ? undefined : byId.get(cursor.parent);
  }
  return path.reverse();
}

function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function nodeClasses(node: TreeNodePayload, view: TreeResponse, factPath: Set<number>): string[] {
  const classes = ["node", node.is_leaf ? "leaf" : "internal"];
  classes.push(node.label === "foil" ? "label-foil" : "label-notfoil");
  if (factPath.has(node.id)) classes.push("fact-path");
  if (view.complement_nodes.includes(node.id)) classes.push("complement");
  if (view.literal_nodes.includes(node.id)) classes.push("literal");
  if (node.id === view.fact_leaf) classes.push("fact-leaf");
  if (view.foil_leaf !== null && node.id === view.foil_leaf) classes.push("foil-leaf");
  return classes;
}

function nodeTitle(node: TreeNodePayload, view: TreeResponse): string {
  const total = node.foil_weight + node.notfoil_weight;
  const parts = [
    `node ${node.id} (depth ${node.depth})`,
    node.is_leaf
      ? `leaf: ${node.label}`
      : `split: ${view.feature_names[node.feature as number]} ≤ ${formatNumber(node.threshold as number)}`,
    `weight ${total.toFixed(2)} (contrast ${node.foil_weight.toFixed(2)})`,
    `accuracy ${(node.accuracy * 100).toFixed(1)}%`,
  ];
  return parts.join("\n");
}

/** Standalone SVG drawing of one explanation tree. The questioned
 * instance's path is bold, the contrasting branch is dashed, and the nodes
 * whose conditions appear in the explanation carry the "literal" class so
 * styling (and tests) can count them. */
export function renderTreeSvg(view: TreeResponse): string {
  const tree = view.tree;
  const positions = layoutTree(tree);
  const factPath = new Set(pathToRoot(tree, view.fact_leaf));
  const foilPath = view.foil_leaf === null ? new Set<number>() : new Set(pathToRoot(tree, view.foil_leaf));

  const xs = [...positions.values()].map((p) => p.x);
  const ys = [...positions.values()].map((p) => p.y);
  const width = Math.max(...xs) + MARGIN + NODE_RADIUS;
  const height = Math.max(...ys) + MARGIN + NODE_RADIUS * 2;

  const edges: string[] = [];
  const nodes: string[] = [];
  for (const node of tree.nodes) {
    const pos = positions.get(node.id);
    if (!pos) continue;
    if (!node.is_leaf && node.left !== null && node.right !== null) {
      for (const [childId, sign] of [
        [node.left, "≤"],
        [node.right, ">"],
      ] as const) {
        const child = positions.get(childId);
        if (!child) continue;
        const onFactPath = factPath.has(node.id) && factPath.has(childId);
        const onFoilPath = foilPath.has(node.id) && foilPath.has(childId);
        const classes = ["edge"];
        if (onFactPath) classes.push("fact-path");
        if (onFoilPath) classes.push("foil-path");
        edges.push(
          `<line class="${classes.join(" ")}" x1="${pos.x}" y1="${pos.y}" x2="${child.x}" y2="${child.y}" />`,
        );
        const lx = (pos.x + child.x) / 2;
        const ly = (pos.y + child.y) / 2 - 4;
        edges.push(
          `<text class="edge-label" x="${lx}" y="${ly}">${escapeXml(sign)} ${formatNumber(node.threshold as number)}</text>`,
        );
      }
    }
    const classes = nodeClasses(node, view, factPath);
    const caption = node.is_leaf
      ? node.label === "foil"
        ? view.class_names[tree.foil_class] ?? "contrast"
        : "other"
      : `f${node.feature}`;
    nodes.push(
      `<g class="${classes.join(" ")}" data-node-id="${node.id}">` +
        `<title>${escapeXml(nodeTitle(node, view))}</title>` +
        `<circle cx="${pos.x}" cy="${pos.y}" r="${NODE_RADIUS}" />` +
        `<text x="${pos.x}" y="${pos.y + NODE_RADIUS + 13}">${escapeXml(caption)}</text>` +
        `</g>`,
    );
  }

  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
    `width="${width}" height="${height}" role="img" aria-label="local explanation tree">` +
    edges.join("") +
    nodes.join("") +
    `</svg>`
  );
}

/** How many nodes the drawing highlights as explanation conditions; kept
 * equal to the number of merged literals by the service contract. */
export function countLiteralHighlights(svg: string): number {
  const matches = svg.match(/class="[^"]*\bliteral\b[^"]*"/g);
  return matches ? matches.length : 0;
}
