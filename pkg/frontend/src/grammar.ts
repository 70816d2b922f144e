// Rule grammar for pseudoword -> color transduction, read from the textual
// rule form ("wif -> BLUE", "x1 fep -> x1 x1", "u1 zup x1 -> u1 x1", ...) or
// from an episode JSON file's "grammar" field.  Token slots are named u1/u2,
// string slots x1/x2, numbered per kind in left-hand-side order.

export type SlotKind = "token" | "string";

export interface FunctionRule {
  word: string;
  slots: SlotKind[];
  rhs: number[]; // 1-based slot references
}

export interface Grammar {
  primitives: Map<string, string>;
  functions: Map<string, FunctionRule>;
}

const SLOT_NAME = /^[ux][12]$/;

function slotNames(slots: SlotKind[]): string[] {
  const counts = { token: 0, string: 0 };
  return slots.map((kind) => {
    counts[kind] += 1;
    return (kind === "token" ? "u" : "x") + counts[kind];
  });
}

export function parseRuleLine(line: string, grammar: Grammar): void {
  const tokens = line.trim().split(/\s+/);
  const arrow = tokens.indexOf("->");
  if (arrow < 0) throw new Error(`rule ${JSON.stringify(line)} lacks '->'`);
  const lhs = tokens.slice(0, arrow);
  const rhs = tokens.slice(arrow + 1);
  if (lhs.length === 0 || rhs.length === 0) {
    throw new Error(`rule ${JSON.stringify(line)} has an empty side`);
  }
  if (lhs.length === 1) {
    if (rhs.length !== 1) {
      throw new Error(`primitive rule ${JSON.stringify(line)} must map to one color`);
    }
    grammar.primitives.set(lhs[0], rhs[0]);
    return;
  }
  let names: string[];
  let word: string;
  if (lhs.length === 2) {
    names = [lhs[0]];
    word = lhs[1];
  } else if (lhs.length === 3) {
    names = [lhs[0], lhs[2]];
    word = lhs[1];
  } else {
    throw new Error(`rule ${JSON.stringify(line)} has an unsupported left-hand side`);
  }
  for (const name of names) {
    if (!SLOT_NAME.test(name)) {
      throw new Error(`bad slot name ${JSON.stringify(name)} in ${JSON.stringify(line)}`);
    }
  }
  const slots: SlotKind[] = names.map((n) => (n.startsWith("u") ? "token" : "string"));
  const expected = slotNames(slots);
  if (names.join(" ") !== expected.join(" ")) {
    throw new Error(`slot names in ${JSON.stringify(line)} must be ${expected.join(" ")}`);
  }
  const byName = new Map(expected.map((n, i) => [n, i + 1]));
  const refs = rhs.map((ref) => {
    const slot = byName.get(ref);
    if (slot === undefined) {
      throw new Error(`rhs reference ${JSON.stringify(ref)} is not a declared slot`);
    }
    return slot;
  });
  grammar.functions.set(word, { word, slots, rhs: refs });
}

export function parseGrammar(lines: string[]): Grammar {
  const grammar: Grammar = { primitives: new Map(), functions: new Map() };
  for (const line of lines) {
    if (line.trim().length > 0) parseRuleLine(line, grammar);
  }
  return grammar;
}

export function grammarFromFileText(text: string): Grammar {
  const trimmed = text.trimStart();
  if (trimmed.startsWith("{")) {
    const doc = JSON.parse(text);
    if (!Array.isArray(doc.grammar)) {
      throw new Error("episode file carries no grammar rule lines");
    }
    return parseGrammar(doc.grammar as string[]);
  }
  return parseGrammar(text.split("\n"));
}
