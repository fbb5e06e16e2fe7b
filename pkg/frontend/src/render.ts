// DOM rendering of the view model.  Replication nodes are clickable
// (tree-node click emits the replication move), choice templates get a
// numeric input.

import type { Snapshot } from "./api.js";
import {
  buildTree,
  conjunctViews,
  instantiate,
  isChainElement,
  moleculeClass,
  moleculeText,
  moveOptions,
  phaseBanner,
  verdictView,
  type TreeNode,
} from "./viewmodel.js";

export interface Handlers {
  onMove(move: string): void;
}

function el(tag: string, cls?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderTree(node: TreeNode, onLeaf: (bits: string) => void): HTMLElement {
  const li = el("li", node.isLeaf ? "tree-leaf" : "tree-node");
  const label = el("span", "tree-label", node.label);
  if (node.isLeaf) {
    label.title = "replicate this leaf";
    label.addEventListener("click", () => onLeaf(node.bits));
  }
  li.appendChild(label);
  if (node.children.length) {
    const ul = el("ul", "tree-children");
    for (const kid of node.children) {
      ul.appendChild(renderTree(kid, onLeaf));
    }
    li.appendChild(ul);
  }
  return li;
}

export function renderSnapshot(root: HTMLElement, snap: Snapshot, handlers: Handlers): void {
  root.innerHTML = "";
  root.appendChild(el("div", "banner", phaseBanner(snap)));

  const conjuncts = el("div", "conjuncts");
  for (const view of conjunctViews(snap)) {
    const box = el("div", "conjunct");
    box.appendChild(el("h3", undefined, `conjunct ${view.i} (${view.family})`));
    const treeRoot = el("ul", "tree");
    treeRoot.appendChild(
      renderTree(view.tree, (bits) => handlers.onMove(`1.${view.i}.${bits || "e"}:`)),
    );
    box.appendChild(treeRoot);
    const mols = el("ul", "molecules");
    for (const m of view.molecules) {
      const item = el("li", moleculeClass(m), moleculeText(m));
      if (isChainElement(snap, m.id)) {
        item.classList.add("mol-master-chain");
      }
      mols.appendChild(item);
    }
    box.appendChild(mols);
    conjuncts.appendChild(box);
  }
  root.appendChild(conjuncts);

  const wmol = snap.molecules.find((m) => m.metatype === "W");
  if (wmol) {
    const wbox = el("div", "consequent " + moleculeClass(wmol), moleculeText(wmol));
    if (isChainElement(snap, wmol.id)) {
      wbox.classList.add("mol-master-chain");
    }
    root.appendChild(wbox);
  }

  if (snap.status === "AWAITING_HUMAN") {
    const picker = el("div", "picker");
    picker.appendChild(el("h3", undefined, "your move"));
    for (const option of moveOptions(snap.legal_moves)) {
      const row = el("div", "move-option");
      row.appendChild(el("span", undefined, option.describe + " "));
      if (option.needsConstant) {
        const input = el("input") as HTMLInputElement;
        input.type = "number";
        input.min = "1";
        input.value = "1";
        const btn = el("button", undefined, "play");
        btn.addEventListener("click", () =>
          handlers.onMove(instantiate(option, Number(input.value))),
        );
        row.appendChild(input);
        row.appendChild(btn);
      } else {
        const btn = el("button", undefined, "replicate");
        btn.addEventListener("click", () => handlers.onMove(option.template));
        row.appendChild(btn);
      }
      picker.appendChild(row);
    }
    root.appendChild(picker);
  }

  const verdict = verdictView(snap);
  if (verdict) {
    const box = el("div", "verdict");
    box.appendChild(
      el(
        "h3",
        undefined,
        verdict.verdict === "B" ? "verdict: bottom (engine) wins" : "verdict: top wins",
      ),
    );
    if (verdict.falsified.length) {
      box.appendChild(
        el("div", "falsified", `falsified contents: ${verdict.falsified.join(", ")}`),
      );
    } else {
      box.appendChild(el("div", "falsified", "no contents falsified (virgin consequent)"));
    }
    if (verdict.masterChain) {
      box.appendChild(
        el("div", "master-chain", `master chain: ${verdict.masterChain.join(" -> ")}`),
      );
    }
    root.appendChild(box);
  }

  const history = el("div", "history");
  history.appendChild(el("h3", undefined, "move history"));
  const list = el("ol");
  for (const entry of snap.run) {
    list.appendChild(
      el(
        "li",
        entry.label === "B" ? "engine-move" : "human-move",
        `${entry.label === "B" ? "engine" : "you"}: ${entry.move}`,
      ),
    );
  }
  history.appendChild(list);
  root.appendChild(history);
}
