/**
 * Operation JSON grammar shared with the service and CLI.
 *
 * Canonical serialization is byte-compatible with the backend's compact
 * JSON: operation keys in the order Switch, Delete, Insert, Modify; item
 * keys in the order pos, tag, label; no whitespace.
 */

export interface EditItem {
  pos: number;
  tag: string;
  label: string[];
}

export interface Operation {
  Switch?: number[];
  Delete?: number[];
  Insert?: EditItem[];
  Modify?: EditItem[];
}

function canonicalItem(item: EditItem): EditItem {
  return { pos: item.pos, tag: item.tag, label: [...item.label] };
}

/** Rebuild an operation with the canonical key order. */
export function canonicalOperation(op: Operation): Operation {
  const out: Operation = {};
  if (op.Switch !== undefined) out.Switch = [...op.Switch];
  if (op.Delete !== undefined) out.Delete = [...op.Delete];
  if (op.Insert !== undefined) out.Insert = op.Insert.map(canonicalItem);
  if (op.Modify !== undefined) out.Modify = op.Modify.map(canonicalItem);
  return out;
}

/** Compact, key-ordered JSON — identical bytes to the CLI's output. */
export function serializeOperation(op: Operation): string {
  return JSON.stringify(canonicalOperation(op));
}

export function serializeOperations(ops: Operation[]): string {
  return JSON.stringify(ops.map(canonicalOperation));
}

export function isIdentity(order: number[]): boolean {
  return order.every((value, index) => value === index);
}
