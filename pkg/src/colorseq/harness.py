"""Model adapters and simulated transducers.

The harness feeds an adapter one request per (query, sample): the episode's
support pairs plus the query input, never the grammar.  Both transports carry
the same JSON body:

    request:  {"support": [{"in": [...], "out": [...]}], "query": [...], "sample": n}
    response: {"out": [...]}

Stdio adapters answer one line per request line; HTTP adapters answer
``POST /transduce``.  Whatever comes back is kept verbatim in the run record,
including out-of-alphabet tokens, so the classifier can inspect exact wrong
outputs.
"""

from __future__ import annotations

import json
import random
import select
import subprocess
import urllib.error
import urllib.request
from dataclasses import dataclass, field

from .derive import ParsePolicy, canonical_derive, enumerate_outputs, Seq
from .episodes import Episode
from .errors import AdapterTimeout, CapExceeded, NotTranslatable, ProtocolError
from .evaluate import RunRecord
from .grammar import Grammar, Rule


@dataclass(frozen=True)
class AdapterSpec:
    transport: str  # "stdio" or "http"
    command: tuple[str, ...] | None = None
    endpoint: str | None = None
    samples: int = 10
    timeout: float = 10.0

    def __post_init__(self):
        if self.transport not in ("stdio", "http"):
            raise ValueError(f"unknown transport {self.transport!r}")
        if self.samples < 1 or self.timeout <= 0:
            raise ValueError("samples must be >= 1 and timeout positive")
        if self.transport == "stdio" and not self.command:
            raise ValueError("stdio transport needs a command line")
        if self.transport == "http" and not self.endpoint:
            raise ValueError("http transport needs an endpoint")


def _request_body(e: Episode, query: Seq, sample: int) -> bytes:
    body = {
        "support": [{"in": list(p.inp), "out": list(p.out)} for p in e.support],
        "query": list(query),
        "sample": sample,
    }
    return json.dumps(body).encode()


def _decode_response(raw: str) -> Seq:
    """Pull the output tokens out of a response line; anything malformed is
    preserved verbatim as a single-token output rather than dropped."""
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError:
        return (raw.strip(),)
    if isinstance(doc, dict) and isinstance(doc.get("out"), list):
        return tuple(str(t) for t in doc["out"])
    return (raw.strip(),)


class _StdioAdapter:
    def __init__(self, spec: AdapterSpec):
        self.spec = spec
        try:
            self.proc = subprocess.Popen(
                spec.command, stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True)
        except OSError as exc:
            raise ProtocolError(f"could not start adapter: {exc}") from exc

    def ask(self, payload: bytes) -> str:
        proc = self.proc
        if proc.poll() is not None:
            raise ProtocolError("adapter process exited early")
        try:
            proc.stdin.write(payload.decode() + "\n")
            proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise ProtocolError(f"adapter pipe closed: {exc}", payload) from exc
        ready, _, _ = select.select([proc.stdout], [], [], self.spec.timeout)
        if not ready:
            raise AdapterTimeout(f"no response within {self.spec.timeout}s")
        line = proc.stdout.readline()
        if line == "":
            raise ProtocolError("adapter closed its output stream", payload)
        return line

    def close(self):
        try:
            self.proc.stdin.close()
            self.proc.wait(timeout=2)
        except Exception:
            self.proc.kill()


class _HttpAdapter:
    def __init__(self, spec: AdapterSpec):
        self.spec = spec
        self.url = spec.endpoint.rstrip("/") + "/transduce"

    def ask(self, payload: bytes) -> str:
        req = urllib.request.Request(
            self.url, data=payload, headers={"Content-Type": "application/json"})
        try:
            with urllib.request.urlopen(req, timeout=self.spec.timeout) as resp:
                return resp.read().decode()
        except urllib.error.HTTPError as exc:
            raise ProtocolError(f"adapter answered {exc.code}", exc.read()) from exc
        except urllib.error.URLError as exc:
            if isinstance(exc.reason, TimeoutError):
                raise AdapterTimeout(str(exc)) from exc
            raise AdapterTimeout(f"adapter unreachable: {exc.reason}") from exc
        except TimeoutError as exc:
            raise AdapterTimeout("adapter timed out") from exc

    def close(self):
        pass


def run_model(spec: AdapterSpec, e: Episode, model: str | None = None) -> RunRecord:
    """One request per (query, sample); responses collected in order."""
    adapter = _StdioAdapter(spec) if spec.transport == "stdio" else _HttpAdapter(spec)
    try:
        responses = []
        for q in e.query:
            samples = []
            for k in range(spec.samples):
                raw = adapter.ask(_request_body(e, q.inp, k))
                samples.append(_decode_response(raw))
            responses.append(tuple(samples))
    finally:
        adapter.close()
    return RunRecord(e.id, spec.samples, tuple(responses), model)


# ---------------------------------------------------------------------------
# Simulated transducers


@dataclass(frozen=True)
class SimulatedTransducer:
    """Grammar oracle with seeded, injectable error modes.

    Per sample one mode is drawn: emit the canonical output of a grammar with
    one substituted rule, emit a non-canonical parse of the true grammar, emit
    random noise, or answer correctly.  Mode probabilities must sum to at
    most 1; the remainder is the oracle.
    """

    grammar: Grammar
    substitute: tuple[str, Rule] | None = None
    substitution_prob: float = 0.0
    alt_parse_prob: float = 0.0
    noise_prob: float = 0.0
    seed: int = 0
    policy: ParsePolicy = field(default_factory=ParsePolicy)

    def __post_init__(self):
        probs = (self.substitution_prob, self.alt_parse_prob, self.noise_prob)
        if any(not 0.0 <= p <= 1.0 for p in probs) or sum(probs) > 1.0 + 1e-9:
            raise ValueError("error-mode probabilities must lie in [0,1] and sum to <= 1")
        if self.substitution_prob > 0 and self.substitute is None:
            raise ValueError("substitution mode needs a (word, rule) to plant")


def _noise(rng: random.Random, g: Grammar, cap: int) -> Seq:
    length = rng.randint(1, cap)
    return tuple(rng.choice(g.alphabet.colors) for _ in range(length))


def simulate(t: SimulatedTransducer, e: Episode, samples: int = 10) -> RunRecord:
    """Deterministic in the transducer's seed; one independent mode draw per
    sample.  When a drawn mode cannot apply (no alternative parse exists, or
    the substituted grammar cannot answer), the oracle output is used."""
    if e.grammar != t.grammar:
        raise ValueError("simulator grammar must match the episode's")
    rng = random.Random(t.seed)
    swapped = None
    if t.substitute is not None:
        swapped = t.grammar.replace_rule(t.substitute[0], t.substitute[1])
    responses = []
    for q in e.query:
        oracle = canonical_derive(t.grammar, q.inp, t.policy)
        row = []
        for _ in range(samples):
            roll = rng.random()
            out = oracle
            if roll < t.substitution_prob:
                try:
                    out = canonical_derive(swapped, q.inp, t.policy)
                except (NotTranslatable, CapExceeded):
                    out = oracle
            elif roll < t.substitution_prob + t.alt_parse_prob:
                others = sorted(enumerate_outputs(t.grammar, q.inp, t.policy) - {oracle})
                if others:
                    out = others[rng.randrange(len(others))]
            elif roll < t.substitution_prob + t.alt_parse_prob + t.noise_prob:
                out = _noise(rng, t.grammar, t.policy.output_cap)
            row.append(out)
        responses.append(tuple(row))
    return RunRecord(e.id, samples, tuple(responses), model="simulated")
