import { describe, expect, it } from "vitest";

import { canonicalDerive } from "../src/derive";
import { grammarFromFileText, parseGrammar } from "../src/grammar";
import { answerLine, EchoTransducer, OracleTransducer } from "../src/protocol";

const NESTING = parseGrammar([
  "wif -> BLUE",
  "tufa -> RED",
  "kiki -> PINK",
  "lug -> PURPLE",
  "u1 zup x1 -> u1 x1",
  "x1 gazzer -> x1 x1 x1",
  "x1 fep -> x1 x1",
]);

const WRAPPING = parseGrammar([
  "blicket -> RED",
  "kiki -> GREEN",
  "zup -> YELLOW",
  "lug -> BLUE",
  "x1 dax -> x1 x1 x1 x1",
  "u1 fep x1 -> x1 u1 u1 x1",
  "x1 gazzer -> x1 x1",
]);

const REORDERING = parseGrammar([
  "tufa -> RED",
  "zup -> YELLOW",
  "kiki -> GREEN",
  "lug -> PURPLE",
  "x1 dax u1 -> u1 x1",
  "x1 gazzer x2 -> x1 x2",
  "x1 wif x2 -> x1 x1 x2 x2 x2 x1",
]);

function run(grammar: typeof NESTING, input: string) {
  return canonicalDerive(grammar, input.split(" "));
}

describe("grammar parsing", () => {
  it("reads primitives and both function shapes", () => {
    expect(NESTING.primitives.get("wif")).toBe("BLUE");
    expect(NESTING.functions.get("zup")).toEqual({
      word: "zup",
      slots: ["token", "string"],
      rhs: [1, 2],
    });
    expect(WRAPPING.functions.get("fep")).toEqual({
      word: "fep",
      slots: ["token", "string"],
      rhs: [2, 1, 1, 2],
    });
  });

  it("rejects malformed lines", () => {
    expect(() => parseGrammar(["wif BLUE"])).toThrow("lacks '->'");
    expect(() => parseGrammar(["x2 fep -> x2"])).toThrow("slot names");
    expect(() => parseGrammar(["x1 fep -> x2"])).toThrow("not a declared slot");
  });

  it("reads the grammar field of an episode file", () => {
    const text = JSON.stringify({ id: "x", grammar: ["wif -> BLUE"], support: [], query: [] });
    const g = grammarFromFileText(text);
    expect(g.primitives.get("wif")).toBe("BLUE");
  });
});

describe("canonical derivation", () => {
  it("answers primitives and concatenations", () => {
    expect(run(NESTING, "wif")).toEqual(["BLUE"]);
    expect(run(NESTING, "wif kiki")).toEqual(["BLUE", "PINK"]);
  });

  it("applies repetition rules postfix", () => {
    expect(run(NESTING, "wif gazzer")).toEqual(["BLUE", "BLUE", "BLUE"]);
    expect(run(NESTING, "lug gazzer fep")).toEqual(Array(6).fill("PURPLE"));
  });

  it("prefers the leftmost spanning rule", () => {
    expect(run(NESTING, "wif zup kiki fep")).toEqual(["BLUE", "PINK", "PINK"]);
    expect(run(NESTING, "kiki zup wif zup tufa fep")).toEqual(["PINK", "BLUE", "RED", "RED"]);
  });

  it("falls back to token-slot-compatible splits", () => {
    expect(run(NESTING, "tufa tufa zup tufa")).toEqual(["RED", "RED", "RED"]);
    expect(run(NESTING, "kiki kiki kiki zup kiki zup tufa"))
      .toEqual(["PINK", "PINK", "PINK", "PINK", "RED"]);
  });

  it("prefers the shortest derivable prefix when splitting", () => {
    expect(run(WRAPPING, "blicket blicket fep zup lug"))
      .toEqual(["RED", "YELLOW", "BLUE", "RED", "RED", "YELLOW", "BLUE"]);
  });

  it("wraps the token argument inside the string argument", () => {
    expect(run(WRAPPING, "blicket fep blicket gazzer")).toEqual(Array(6).fill("RED"));
    expect(run(WRAPPING, "lug fep blicket")).toEqual(["RED", "BLUE", "BLUE", "RED"]);
  });

  it("handles string-then-token rules and slot-dropping patterns", () => {
    expect(run(REORDERING, "tufa dax kiki dax zup")).toEqual(["YELLOW", "GREEN", "RED"]);
    expect(run(REORDERING, "kiki tufa lug gazzer kiki gazzer lug"))
      .toEqual(["GREEN", "RED", "PURPLE", "GREEN", "PURPLE"]);
    expect(run(REORDERING, "lug wif kiki"))
      .toEqual(["PURPLE", "PURPLE", "GREEN", "GREEN", "GREEN", "PURPLE"]);
  });

  it("returns null for non-derivable inputs", () => {
    expect(run(NESTING, "zup wif")).toBeNull();
    expect(run(NESTING, "blork")).toBeNull();
    expect(canonicalDerive(NESTING, [])).toBeNull();
  });
});

describe("wire protocol", () => {
  const request = (query: string[]) =>
    JSON.stringify({ support: [], query, sample: 0 });

  it("answers oracle requests", async () => {
    const oracle = new OracleTransducer(NESTING);
    const reply = await answerLine(request(["wif", "fep"]), oracle);
    expect(JSON.parse(reply)).toEqual({ out: ["BLUE", "BLUE"] });
  });

  it("answers echo requests with the query words", async () => {
    const reply = await answerLine(request(["wif", "fep"]), new EchoTransducer());
    expect(JSON.parse(reply)).toEqual({ out: ["wif", "fep"] });
  });

  it("always answers exactly one line, even on errors", async () => {
    const oracle = new OracleTransducer(NESTING);
    for (const bad of ["not json", "{}", request(["zup", "wif"])]) {
      const reply = await answerLine(bad, oracle);
      expect(reply).not.toContain("\n");
      expect(JSON.parse(reply)).toHaveProperty("error");
    }
  });
});
