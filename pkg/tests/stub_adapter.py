"""Tiny stdio adapter used by the harness tests.

Modes: ``oracle <fixture-id>`` answers with the fixture grammar's canonical
output, ``oracle-episode <path>`` the same for an episode file's grammar,
``echo`` answers with the query words, ``garbage`` answers with unparseable
text, ``silent`` never answers.
"""

import json
import sys
import time

from colorseq.derive import canonical_derive
from colorseq.episodes import read_episode
from colorseq.errors import CapExceeded, NotTranslatable
from colorseq.fixtures import fixture_grammar


def main() -> int:
    mode = sys.argv[1]
    grammar = None
    if mode == "oracle":
        grammar = fixture_grammar(sys.argv[2])
    elif mode == "oracle-episode":
        grammar = read_episode(open(sys.argv[2]).read()).grammar
        mode = "oracle"
    for line in sys.stdin:
        if mode == "silent":
            time.sleep(3600)
        request = json.loads(line)
        if mode == "garbage":
            sys.stdout.write("this is not json\n")
        elif mode == "echo":
            sys.stdout.write(json.dumps({"out": request["query"]}) + "\n")
        else:
            try:
                out = canonical_derive(grammar, tuple(request["query"]))
                sys.stdout.write(json.dumps({"out": list(out)}) + "\n")
            except (NotTranslatable, CapExceeded) as exc:
                sys.stdout.write(json.dumps({"error": str(exc)}) + "\n")
        sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
