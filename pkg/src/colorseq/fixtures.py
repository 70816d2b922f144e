"""Bundled reference episodes with recorded 10-sample evaluation runs.

Four episodes (ids 133, 1, 32, 122) ship with this package, each a hidden
grammar, its SUPPORT set, QUERY targets, and a transcribed run of ten model
samples per query.  Transcription notes, kept out of the data itself:

* Episode 1's three-fold rule and episode 122's wrap rule are stored in the
  encoding the support pairs force; the published rule lines for both carry
  slot-name misprints that would contradict their own support sets.
* Episode 32's ninth query target is stored grammar-consistently (the
  published cell has one token misprinted; the episode's other wrap query
  confirms the rule as printed).
* Episode 122's last query prints six sample counts (4+2+1+1+1+1 = 10) but
  only five legible output rows in our source; the lost wrong output is
  stood in for by an arbitrary underivable sequence so the counts stay as
  printed.  The aggregate stays at the 50/100 the transcription yields.

``REPORTED_RATES`` holds the success rates published for these runs; episode
122's transcription disagrees with its published figure, and
``verify_fixtures`` surfaces that as a discrepancy rather than adjusting
either number.
"""

from __future__ import annotations

from dataclasses import dataclass

from .derive import Seq
from .episodes import Episode, QueryPair, SupportPair
from .evaluate import RunRecord, ScoreReport, score_run
from .grammar import Grammar, parse_grammar

FIXTURE_IDS = ("133", "1", "32", "122")

REPORTED_RATES = {"133": 41, "32": 52, "122": 54}

_ABBR = {"R": "RED", "G": "GREEN", "B": "BLUE", "Y": "YELLOW", "U": "PURPLE", "K": "PINK"}


def _c(text: str) -> Seq:
    return tuple(_ABBR[t] for t in text.split())


def _w(text: str) -> Seq:
    return tuple(text.split())


def _support(rows: list[tuple[str, str]]) -> tuple[SupportPair, ...]:
    return tuple(SupportPair(_w(i), _c(o)) for i, o in rows)


def _queries(rows: list[tuple[str, str]]) -> tuple[QueryPair, ...]:
    return tuple(QueryPair(_w(i), _c(o)) for i, o in rows)


def _samples(rows: list[tuple[str, int]]) -> tuple[Seq, ...]:
    out: list[Seq] = []
    for text, count in rows:
        out.extend([_c(text)] * count)
    return tuple(out)


_GRAMMARS: dict[str, list[str]] = {
    "133": [
        "wif -> BLUE",
        "tufa -> RED",
        "kiki -> PINK",
        "lug -> PURPLE",
        "u1 zup x1 -> u1 x1",
        "x1 gazzer -> x1 x1 x1",
        "x1 fep -> x1 x1",
    ],
    "1": [
        "tufa -> YELLOW",
        "wif -> BLUE",
        "lug -> PURPLE",
        "fep -> RED",
        "x1 gazzer -> x1 x1 x1",
        "x1 kiki u1 -> x1 u1 x1",
        "x1 zup -> x1 x1",
    ],
    "32": [
        "tufa -> RED",
        "zup -> YELLOW",
        "kiki -> GREEN",
        "lug -> PURPLE",
        "x1 dax u1 -> u1 x1",
        "x1 gazzer x2 -> x1 x2",
        "x1 wif x2 -> x1 x1 x2 x2 x2 x1",
    ],
    "122": [
        "blicket -> RED",
        "kiki -> GREEN",
        "zup -> YELLOW",
        "lug -> BLUE",
        "x1 dax -> x1 x1 x1 x1",
        "u1 fep x1 -> x1 u1 u1 x1",
        "x1 gazzer -> x1 x1",
    ],
}

# Human-readable names for the function words, as used in the published runs.
DECODINGS: dict[str, dict[str, str]] = {
    "133": {"zup": "before", "gazzer": "thrice", "fep": "twice"},
    "1": {"gazzer": "thrice", "kiki": "around", "zup": "twice"},
    "32": {"dax": "after", "gazzer": "before", "wif": "wrap-2-3"},
    "122": {"dax": "four-times", "fep": "twice-within", "gazzer": "twice"},
}

_SUPPORT: dict[str, list[tuple[str, str]]] = {
    "133": [
        ("wif", "B"),
        ("tufa", "R"),
        ("kiki", "K"),
        ("lug", "U"),
        ("wif wif", "B B"),
        ("kiki tufa", "K R"),
        ("wif gazzer", "B B B"),
        ("kiki tufa gazzer", "K R K R K R"),
        ("tufa tufa zup tufa", "R R R"),
        ("tufa wif zup wif", "R B B"),
        ("wif zup tufa gazzer", "B R R R"),
        ("lug zup lug zup lug", "U U U"),
        ("kiki kiki kiki zup kiki zup tufa", "K K K K R"),
        ("lug gazzer fep", "U U U U U U"),
    ],
    "1": [
        ("wif", "B"),
        ("lug", "U"),
        ("tufa tufa", "Y Y"),
        ("fep zup", "R R"),
        ("fep gazzer", "R R R"),
        ("fep wif zup", "R B R B"),
        ("fep fep gazzer", "R R R R R R"),
        ("lug fep zup", "U R U R"),
        ("tufa fep gazzer", "Y R Y R Y R"),
        ("wif kiki lug", "B U B"),
        ("tufa kiki tufa", "Y Y Y"),
        ("fep kiki fep kiki wif", "R R R B R R R"),
        ("tufa kiki wif zup", "Y B Y Y B Y"),
        ("wif gazzer kiki lug", "B B B U B B B"),
    ],
    "32": [
        ("tufa", "R"),
        ("zup", "Y"),
        ("lug", "U"),
        ("tufa tufa", "R R"),
        ("kiki kiki", "G G"),
        ("lug lug", "U U"),
        ("tufa lug", "R U"),
        ("tufa kiki lug", "R G U"),
        ("kiki dax kiki", "G G"),
        ("lug gazzer lug", "U U"),
        ("lug zup dax zup", "Y U Y"),
        ("tufa dax kiki dax zup", "Y G R"),
        ("tufa dax lug dax lug", "U U R"),
        ("lug zup dax tufa dax zup", "Y R U Y"),
    ],
    "122": [
        ("lug", "B"),
        ("kiki", "G"),
        ("blicket", "R"),
        ("kiki zup", "G Y"),
        ("zup kiki", "Y G"),
        ("lug gazzer", "B B"),
        ("kiki gazzer", "G G"),
        ("blicket dax", "R R R R"),
        ("kiki dax", "G G G G"),
        ("lug zup gazzer", "B Y B Y"),
        ("kiki zup gazzer", "G Y G Y"),
        ("kiki lug lug zup gazzer", "G B B Y G B B Y"),
        ("blicket fep blicket gazzer", "R R R R R R"),
        ("lug blicket lug lug blicket zup", "B R B B R Y"),
    ],
}

_QUERY: dict[str, list[tuple[str, str]]] = {
    "133": [
        ("tufa fep", "R R"),
        ("wif fep", "B B"),
        ("kiki zup wif zup tufa fep", "K B R R"),
        ("lug wif fep", "U B U B"),
        ("tufa zup lug zup wif fep", "R U B B"),
        ("wif zup kiki fep", "B K K"),
        ("wif kiki", "B K"),
        ("lug zup lug", "U U"),
        ("wif zup tufa", "B R"),
        ("wif zup wif", "B B"),
    ],
    "1": [
        ("fep gazzer kiki wif lug", "R R R B R R R U"),
        ("fep gazzer kiki wif tufa", "R R R B R R R Y"),
        ("fep gazzer kiki wif wif", "R R R B R R R B"),
        ("wif gazzer kiki tufa fep", "B B B Y B B B R"),
        ("wif gazzer kiki lug wif", "B B B U B B B B"),
        ("wif gazzer kiki wif wif", "B B B B B B B B"),
        ("fep kiki wif lug zup", "R B R U R B R U"),
        ("fep kiki wif wif zup", "R B R B R B R B"),
        ("wif kiki fep wif zup", "B R B B B R B B"),
        ("wif kiki wif fep zup", "B B B R B B B R"),
        ("wif kiki wif wif zup", "B B B B B B B B"),
    ],
    "32": [
        ("kiki", "G"),
        ("kiki dax zup", "Y G"),
        ("tufa zup gazzer zup", "R Y Y"),
        ("zup zup", "Y Y"),
        ("kiki dax zup dax kiki gazzer zup", "G Y G Y"),
        ("kiki lug dax tufa dax zup", "Y R G U"),
        ("kiki tufa lug gazzer kiki gazzer lug", "G R U G U"),
        ("lug wif kiki", "U U G G G U"),
        ("lug wif zup", "U U Y Y Y U"),
        ("zup tufa tufa dax kiki gazzer lug", "G Y R R U"),
    ],
    "122": [
        ("blicket lug", "R B"),
        ("lug lug", "B B"),
        ("zup", "Y"),
        ("zup dax", "Y Y Y Y"),
        ("zup gazzer", "Y Y"),
        ("blicket blicket dax", "R R R R R R R R"),
        ("blicket blicket fep zup lug", "R Y B R R Y B"),
        ("kiki fep lug gazzer", "B B G G B B"),
        ("lug fep blicket", "R B B R"),
        ("zup zup dax", "Y Y Y Y Y Y Y Y"),
    ],
}

_RUNS: dict[str, list[list[tuple[str, int]]]] = {
    "133": [
        [("R R R", 5), ("R K", 2), ("R U", 2), ("R B", 1)],
        [("B B B", 9), ("B U", 1)],
        [("K B R R R", 6), ("K B R K B R", 2), ("K B R R", 1), ("K B R R R R", 1)],
        [("U B U B U B", 7), ("G B U B", 1), ("U B K", 1), ("U B U U U B", 1)],
        [("R U B B B", 3), ("R U B B", 2), ("R U B R U B", 2), ("R U B B B B", 1),
         ("R U B R B B", 1), ("R R U K B G", 1)],
        [("B K B K B K", 4), ("B B K G", 1), ("B K", 1), ("B K K", 1), ("B K K K", 1),
         ("B K K K K K", 1), ("B Y K Y", 1)],
        [("B K", 10)],
        [("U U", 9), ("U B U", 1)],
        [("B R", 8), ("B G R", 1), ("B K R", 1)],
        [("B B", 10)],
    ],
    "1": [
        [("R R R B U R R R", 10)],
        [("R R R B Y R R R", 8), ("G G B B B", 1), ("R R", 1)],
        [("R R R B B R R R", 8), ("B B B R B B B", 1), ("G U U B B", 1)],
        [("B B B Y R B B B", 9), ("B B B Y B B B", 1)],
        [("B B B U B B B", 8), ("B G G U B", 1), ("B Y Y U B", 1)],
        [("B B B B B B B", 9), ("B B", 1)],
        [("R B U R R B U R", 8), ("K R B U U", 1), ("U R B U G", 1)],
        [("R B B R R B B R", 8), ("B B R B B R", 1), ("K R B B", 1)],
        [("B R B B B R B B", 6), ("B R B B B", 1), ("B R B B R B", 1), ("B Y G B U", 1),
         ("R B B B R B B B", 1)],
        [("B B R B B B R B", 7), ("B R B G B", 1), ("B R B R B B", 1), ("B Y B K U", 1)],
        [("B B B B B B", 5), ("B B B B B B B B", 2), ("B B B B B B B", 1),
         ("B B B B Y", 1), ("B U B B U", 1)],
    ],
    "32": [
        [("G", 8), ("B", 1), ("K", 1)],
        [("Y G", 8), ("G Y", 2)],
        [("R Y Y", 9), ("R Y G Y", 1)],
        [("Y Y", 10)],
        [("Y G Y G", 5), ("G Y G Y", 3), ("G G Y Y", 1), ("Y G G Y", 1)],
        [("Y R G U", 8), ("Y", 1), ("Y R U U", 1)],
        [("G R U G U", 4), ("U G G R U", 4), ("B R U G U", 1), ("R R U B G B U", 1)],
        [("G U", 2), ("G G G U U", 1), ("G G U G U", 1), ("G G U U", 1), ("G U G G U", 1),
         ("G U G U", 1), ("U G U G", 1), ("U U G U G U U", 1), ("U R G", 1)],
        [("Y U", 3), ("Y Y Y U", 2), ("U U Y Y", 1), ("U R U", 1), ("Y U Y U Y", 1),
         ("Y Y Y U U", 1), ("Y Y Y U U U", 1)],
        [("G U Y R R", 4), ("G Y R R U", 2), ("U G Y R R", 1), ("Y R G K R R U", 1),
         ("Y R G R U", 1), ("Y R R R K U U", 1)],
    ],
    "122": [
        [("R B", 9), ("R", 1)],
        [("B B", 10)],
        [("Y", 8), ("U", 2)],
        [("Y Y Y Y", 8), ("Y Y U Y", 1), ("Y Y Y K", 1)],
        [("Y Y", 9), ("K R", 1)],
        [("R R R R R", 5), ("R R R R R R R R", 4), ("R R R", 1)],
        [("R R B B R B Y B", 1), ("R R R R R R Y B", 1), ("R R R R Y B R R", 1),
         ("R R R R Y B Y B", 1), ("R R Y B Y B B", 1), ("R R Y B Y B R R", 1),
         ("R Y B R", 1), ("Y B R R Y B", 1), ("Y B Y B R R R R", 1), ("Y B Y B R R Y B", 1)],
        [("B G B G", 2), ("B B G B B G", 1), ("B B G G G B", 1), ("B G B G B G", 1),
         ("B G G B B G", 1), ("B G G G G G", 1), ("G B B G", 1), ("G B B G B B", 1),
         ("G G B B G B", 1)],
        [("B R B", 3), ("B B B R", 1), ("B B R", 1), ("B R", 1), ("B R R", 1),
         ("B R R R", 1), ("R B B", 1), ("R B B B", 1)],
        [("G U Y R R", 4), ("Y Y Y Y Y Y Y Y", 2), ("Y Y Y Y Y", 1), ("B K G", 1),
         ("K R Y", 1), ("U K", 1)],
    ],
}


def fixture_grammar(fid: str) -> Grammar:
    return parse_grammar(_GRAMMARS[fid])


def fixture_episode(fid: str) -> Episode:
    if fid not in FIXTURE_IDS:
        raise KeyError(f"no fixture episode {fid!r}")
    return Episode(
        id=fid,
        grammar=fixture_grammar(fid),
        support=_support(_SUPPORT[fid]),
        query=_queries(_QUERY[fid]),
    )


def fixture_run(fid: str) -> RunRecord:
    if fid not in FIXTURE_IDS:
        raise KeyError(f"no fixture run {fid!r}")
    responses = tuple(_samples(rows) for rows in _RUNS[fid])
    return RunRecord(fid, 10, responses, model="reference-run")


@dataclass(frozen=True)
class FixtureCheck:
    fid: str
    support_ok: bool
    queries_ok: bool
    score: ScoreReport | None
    reported_rate: int | None
    discrepancy: bool

    @property
    def ok(self) -> bool:
        return self.support_ok and self.queries_ok


def verify_fixtures() -> list[FixtureCheck]:
    """Re-derive every bundled pair and score every bundled run.

    A reported-rate mismatch is surfaced, not failed: the run transcription
    is the record, the published figure is the claim, and episode 122's two
    simply disagree.
    """
    from .derive import canonical_derive
    from .episodes import episode_problems

    checks = []
    for fid in FIXTURE_IDS:
        e = fixture_episode(fid)
        problems = episode_problems(e, require_coverage=False)
        query_problems = [p for p in problems if p.startswith("query")]
        support_ok = len(problems) == len(query_problems)
        queries_ok = not query_problems
        for q in e.query:
            if canonical_derive(e.grammar, q.inp) != q.target:
                queries_ok = False
        score = None
        discrepancy = False
        reported = REPORTED_RATES.get(fid)
        if fid in _RUNS:
            score = score_run(e, fixture_run(fid))
            if reported is not None:
                discrepancy = round(100 * score.rate) != reported
        checks.append(FixtureCheck(fid, support_ok, queries_ok, score, reported, discrepancy))
    return checks
