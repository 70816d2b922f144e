// Harness wire protocol, shared by both transports.
//
//   request:  {"support": [{"in": [...], "out": [...]}], "query": [...], "sample": n}
//   response: {"out": [...]}   or   {"error": "..."}
//
// A Transducer is the pluggable core: the oracle and echo modes below are the
// built-ins, and any seq2seq model can be wired in by implementing the same
// interface (see the plugin mode in stub.ts).

import { Grammar } from "./grammar";
import { canonicalDerive } from "./derive";

export interface SupportPair {
  in: string[];
  out: string[];
}

export interface TransduceRequest {
  support: SupportPair[];
  query: string[];
  sample: number;
}

export interface Transducer {
  transduce(request: TransduceRequest): Promise<string[]> | string[];
}

export class OracleTransducer implements Transducer {
  constructor(private readonly grammar: Grammar) {}

  transduce(request: TransduceRequest): string[] {
    const out = canonicalDerive(this.grammar, request.query);
    if (out === null) {
      throw new Error(`query is not derivable: ${request.query.join(" ")}`);
    }
    return out;
  }
}

export class EchoTransducer implements Transducer {
  transduce(request: TransduceRequest): string[] {
    return request.query.slice();
  }
}

function parseRequest(raw: unknown): TransduceRequest {
  if (typeof raw !== "object" || raw === null) throw new Error("request must be an object");
  const doc = raw as Record<string, unknown>;
  if (!Array.isArray(doc.query) || !doc.query.every((t) => typeof t === "string")) {
    throw new Error("request.query must be a list of words");
  }
  if (!Array.isArray(doc.support)) throw new Error("request.support must be a list");
  return {
    support: doc.support as SupportPair[],
    query: doc.query as string[],
    sample: typeof doc.sample === "number" ? doc.sample : 0,
  };
}

/** One request line in, exactly one response line out, whatever happens. */
export async function answerLine(line: string, transducer: Transducer): Promise<string> {
  try {
    const request = parseRequest(JSON.parse(line));
    const out = await transducer.transduce(request);
    return JSON.stringify({ out });
  } catch (err) {
    return JSON.stringify({ error: err instanceof Error ? err.message : String(err) });
  }
}
