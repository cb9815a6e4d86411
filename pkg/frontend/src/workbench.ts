/**
 * Gesture model of the annotation workbench.
 *
 * The sentence is a row of character blocks. Dragging a block reorders
 * (Switch), clicking marks a block deleted (Delete), and the insert/modify
 * gestures attach labels to a block (Insert after it / Modify a span
 * starting at it). Each reference tab holds one independent gesture state;
 * at most five tabs may exist.
 *
 * The browser holds no correction logic: every state change is previewed
 * through GET /v1/preview, and the *normalized* operations returned by the
 * server are what gets submitted — so a submission body is byte-identical
 * to what the CLI derives for the same (source, realized target) pair.
 */

import { WorkbenchClient, PreviewResult, SubmissionResult } from "./client.js";
import { Operation, EditItem, isIdentity } from "./operations.js";

export const MAX_REFERENCE_TABS = 5;

export class ReferenceTab {
  /** order[k] = original index of the k-th displayed block */
  order: number[];
  deletes = new Set<number>();
  inserts = new Map<number, string>();
  modifies = new Map<number, { span: number; label: string }>();

  constructor(public readonly source: string) {
    this.order = Array.from(source, (_, index) => index);
  }

  /** Drag the block currently displayed at `from` to display slot `to`. */
  dragBlock(from: number, to: number): void {
    if (from < 0 || from >= this.order.length || to < 0 || to >= this.order.length) {
      throw new RangeError(`drag ${from} -> ${to} outside the sentence`);
    }
    const [moved] = this.order.splice(from, 1);
    this.order.splice(to, 0, moved!);
  }

  /** Toggle the deleted mark on the block for original index `pos`. */
  clickDelete(pos: number): void {
    if (this.deletes.has(pos)) this.deletes.delete(pos);
    else this.deletes.add(pos);
  }

  /** Attach characters to be inserted after original index `pos`. */
  setInsert(pos: number, label: string): void {
    if (label.length === 0) this.inserts.delete(pos);
    else this.inserts.set(pos, label);
  }

  /** Replace the `span` blocks starting at original index `pos`. */
  setModify(pos: number, span: number, label: string): void {
    if (label.length === 0) this.modifies.delete(pos);
    else this.modifies.set(pos, { span, label });
  }

  /** Current gesture state as one operation-grammar object. */
  toOperation(): Operation {
    const op: Operation = {};
    if (!isIdentity(this.order)) op.Switch = [...this.order];
    if (this.deletes.size > 0) op.Delete = [...this.deletes].sort((a, b) => a - b);
    const inserts: EditItem[] = [...this.inserts.entries()]
      .sort(([a], [b]) => a - b)
      .map(([pos, label]) => ({ pos, tag: `INS_${label.length}`, label: [...label] }));
    if (inserts.length > 0) op.Insert = inserts;
    const modifies: EditItem[] = [...this.modifies.entries()]
      .sort(([a], [b]) => a - b)
      .map(([pos, { span, label }]) => ({ pos, tag: `MOD_${span}`, label: [...label] }));
    if (modifies.length > 0) op.Modify = modifies;
    return op;
  }
}

export class Workbench {
  readonly tabs: ReferenceTab[] = [];
  activeTab = 0;
  /** Server-normalized operations and realized previews, one per tab. */
  normalized: Operation[] = [];
  previews: string[] = [];

  constructor(
    public readonly taskId: string,
    public readonly source: string,
    private readonly client: WorkbenchClient,
  ) {
    this.addTab();
  }

  addTab(): ReferenceTab {
    if (this.tabs.length >= MAX_REFERENCE_TABS) {
      throw new Error(`at most ${MAX_REFERENCE_TABS} reference tabs`);
    }
    const tab = new ReferenceTab(this.source);
    this.tabs.push(tab);
    this.activeTab = this.tabs.length - 1;
    return tab;
  }

  get active(): ReferenceTab {
    const tab = this.tabs[this.activeTab];
    if (tab === undefined) throw new Error("no active tab");
    return tab;
  }

  /** Refresh the live label/preview panel from the server. */
  async refreshPreview(): Promise<PreviewResult> {
    const result = await this.client.preview(
      this.source,
      this.tabs.map((tab) => tab.toOperation()),
    );
    this.normalized = result.operations;
    this.previews = result.preview;
    return result;
  }

  /** Submit the server-normalized references for this task. */
  async submit(annotator: string): Promise<SubmissionResult> {
    await this.refreshPreview();
    return this.client.submit(this.taskId, annotator, this.normalized);
  }
}
