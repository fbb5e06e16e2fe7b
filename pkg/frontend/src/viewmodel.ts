// Pure snapshot-to-view transforms; everything here is renderable data
// derived from one GET of the session, nothing is computed locally.

import type { LegalMove, MoleculeView, Snapshot } from "./api.js";

export interface TreeNode {
  bits: string; // "" is the root, shown as "e"
  label: string;
  isLeaf: boolean;
  children: TreeNode[];
}

export function buildTree(nodes: string[]): TreeNode {
  const set = new Set(nodes.map((n) => (n === "e" ? "" : n)));
  const make = (bits: string): TreeNode => {
    const kids: TreeNode[] = [];
    for (const b of ["0", "1"]) {
      if (set.has(bits + b)) {
        kids.push(make(bits + b));
      }
    }
    return {
      bits,
      label: bits === "" ? "e" : bits,
      isLeaf: kids.length === 0,
      children: kids,
    };
  };
  return make("");
}

export function moleculeClass(m: MoleculeView): string {
  return {
    VIRGIN: "mol-virgin",
    DEVIRGINIZED: "mol-devirginized",
    MATCHED: "mol-matched",
  }[m.state];
}

export function moleculeText(m: MoleculeView): string {
  const content =
    m.constant === null ? `${m.letter}(?)` : `${m.letter}(${m.constant})`;
  return `${m.id} ${content}`;
}

export interface ConjunctView {
  i: number;
  family: "two-atom" | "nested";
  tree: TreeNode;
  molecules: MoleculeView[];
}

export function conjunctViews(snap: Snapshot): ConjunctView[] {
  const s = snap.form.s;
  return snap.state.conjuncts.map((c) => ({
    i: c.i,
    family: c.i <= s ? "two-atom" : "nested",
    tree: buildTree(c.nodes),
    molecules: snap.molecules.filter(
      (m) =>
        m.metatype !== "W" &&
        (m.metatype === "P" || ["X", "Y", "Z"].includes(m.metatype)
          ? (m.metatype === "P" ? s + (m.row ?? 0) : m.row) === c.i
          : s + (m.row ?? 0) === c.i),
    ),
  }));
}

export function phaseBanner(snap: Snapshot): string {
  if (snap.status === "FINISHED") {
    return `finished: ${snap.verdict === "B" ? "engine (bottom) wins" : "top wins"}`;
  }
  return `phase ${snap.phase}${snap.delta !== null ? " (long branch)" : ""}`;
}

export interface MoveOption {
  template: string;
  needsConstant: boolean;
  describe: string;
}

export function moveOptions(moves: LegalMove[]): MoveOption[] {
  return moves.map((m) => ({
    template: m.template,
    needsConstant: m.kind === "choice",
    describe:
      m.kind === "choice"
        ? `choose a constant in ${m.slot ?? "?"} via ${m.template}`
        : `replicate ${m.template}`,
  }));
}

export function instantiate(option: MoveOption, constant?: number): string {
  if (!option.needsConstant) {
    return option.template;
  }
  if (constant === undefined || !Number.isInteger(constant) || constant < 1) {
    throw new Error("a positive choice constant is required");
  }
  return option.template.replace("<a>", String(constant));
}

export interface VerdictView {
  verdict: string;
  falsified: string[];
  masterChain: string[] | null;
}

export function verdictView(snap: Snapshot): VerdictView | null {
  if (snap.status !== "FINISHED" || !snap.verdict) {
    return null;
  }
  const falsified = (snap.interpretation?.exceptions ?? []).map(
    (e) => `${e.letter}(${e.constant})`,
  );
  return {
    verdict: snap.verdict,
    falsified,
    masterChain: snap.chains.master_chain ?? null,
  };
}

export function isChainElement(snap: Snapshot, moleculeId: string): boolean {
  const chain = snap.chains.master_chain;
  return !!chain && chain.includes(moleculeId);
}
