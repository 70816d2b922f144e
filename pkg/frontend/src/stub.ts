// Reference external transducer speaking the harness wire protocol.
//
//   node dist/stub.js --mode oracle --grammar episode.json            # stdio
//   node dist/stub.js --mode oracle --grammar rules.txt --transport http --port 8111
//   node dist/stub.js --mode echo
//   node dist/stub.js --mode plugin --module ./my-model.js
//
// Stdio answers one JSON line per request line; HTTP answers POST /transduce.
// Plugin mode loads a CommonJS module whose default export implements the
// Transducer interface from protocol.ts, which is the hook for wiring in a
// real seq2seq model.

import * as fs from "fs";
import * as http from "http";
import * as path from "path";
import * as readline from "readline";
import { parseArgs } from "util";

import { grammarFromFileText } from "./grammar";
import { answerLine, EchoTransducer, OracleTransducer, Transducer } from "./protocol";

function buildTransducer(mode: string, grammarPath?: string, modulePath?: string): Transducer {
  switch (mode) {
    case "oracle": {
      if (!grammarPath) throw new Error("oracle mode needs --grammar <file>");
      const text = fs.readFileSync(grammarPath, "utf8");
      return new OracleTransducer(grammarFromFileText(text));
    }
    case "echo":
      return new EchoTransducer();
    case "plugin": {
      if (!modulePath) throw new Error("plugin mode needs --module <file>");
      // eslint-disable-next-line @typescript-eslint/no-var-requires
      const loaded = require(path.resolve(modulePath));
      const transducer: Transducer = loaded.default ?? loaded;
      if (typeof transducer.transduce !== "function") {
        throw new Error("plugin module must export a Transducer");
      }
      return transducer;
    }
    default:
      throw new Error(`unknown mode ${JSON.stringify(mode)}`);
  }
}

function serveStdio(transducer: Transducer): void {
  const lines = readline.createInterface({ input: process.stdin, terminal: false });
  let pending: Promise<void> = Promise.resolve();
  lines.on("line", (line) => {
    if (line.trim().length === 0) return;
    pending = pending.then(async () => {
      process.stdout.write((await answerLine(line, transducer)) + "\n");
    });
  });
}

function serveHttp(transducer: Transducer, port: number): void {
  const server = http.createServer((req, res) => {
    if (req.method !== "POST" || req.url !== "/transduce") {
      res.writeHead(404).end();
      return;
    }
    let body = "";
    req.on("data", (chunk) => (body += chunk));
    req.on("end", async () => {
      const payload = await answerLine(body, transducer);
      res.writeHead(200, { "Content-Type": "application/json" });
      res.end(payload);
    });
  });
  server.listen(port, () => {
    process.stderr.write(`listening on :${port}\n`);
  });
}

function main(): void {
  const { values } = parseArgs({
    options: {
      mode: { type: "string", default: "oracle" },
      grammar: { type: "string" },
      module: { type: "string" },
      transport: { type: "string", default: "stdio" },
      port: { type: "string", default: "8111" },
    },
  });
  const transducer = buildTransducer(values.mode as string,
                                     values.grammar as string | undefined,
                                     values.module as string | undefined);
  if (values.transport === "http") {
    serveHttp(transducer, parseInt(values.port as string, 10));
  } else if (values.transport === "stdio") {
    serveStdio(transducer);
  } else {
    throw new Error(`unknown transport ${JSON.stringify(values.transport)}`);
  }
}

main();
