// Canonical derivation, written from scratch against the parse policy the
// harness pins: scan function-word occurrences left to right and apply the
// first whose full-span match works (unary rules are postfix and claim the
// whole span, binary rules are infix with both sides non-empty); if no rule
// spans, concatenate two derivable parts, preferring the shortest derivable
// prefix and backtracking rightward.

import { Grammar, FunctionRule, SlotKind } from "./grammar";

export function canonicalDerive(g: Grammar, input: string[]): string[] | null {
  if (input.length === 0) return null;
  const memo = new Map<number, string[] | null>();
  const width = input.length + 1;

  function derive(lo: number, hi: number): string[] | null {
    const key = lo * width + hi;
    const cached = memo.get(key);
    if (cached !== undefined) return cached;
    memo.set(key, null);
    const result = uncached(lo, hi);
    memo.set(key, result);
    return result;
  }

  function slotYield(kind: SlotKind, lo: number, hi: number): string[] | null {
    if (kind === "token") {
      if (hi - lo !== 1) return null;
      const color = g.primitives.get(input[lo]);
      return color === undefined ? null : [color];
    }
    return hi > lo ? derive(lo, hi) : null;
  }

  function uncached(lo: number, hi: number): string[] | null {
    if (hi - lo === 1) {
      const color = g.primitives.get(input[lo]);
      return color === undefined ? null : [color];
    }
    for (let i = lo; i < hi; i++) {
      const rule = g.functions.get(input[i]);
      if (rule === undefined) continue;
      const out = applyAt(rule, lo, hi, i);
      if (out !== null) return out;
    }
    for (let cut = lo + 1; cut < hi; cut++) {
      const left = derive(lo, cut);
      if (left === null) continue;
      const right = derive(cut, hi);
      if (right !== null) return left.concat(right);
    }
    return null;
  }

  function applyAt(rule: FunctionRule, lo: number, hi: number, i: number): string[] | null {
    let parts: Array<string[] | null>;
    if (rule.slots.length === 1) {
      if (i !== hi - 1 || i === lo) return null;
      parts = [slotYield(rule.slots[0], lo, i)];
    } else {
      if (i === lo || i === hi - 1) return null;
      parts = [slotYield(rule.slots[0], lo, i), slotYield(rule.slots[1], i + 1, hi)];
    }
    if (parts.some((p) => p === null)) return null;
    const out: string[] = [];
    for (const ref of rule.rhs) {
      out.push(...(parts[ref - 1] as string[]));
    }
    return out;
  }

  return derive(0, input.length);
}
