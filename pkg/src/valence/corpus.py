"""The bundled example corpus and its regression checks.

Each entry is a JSON file holding one automaton, storage graph or amalgam
together with expectations.  Every expectation carries a ``provenance`` tag:
``published`` (taken from the literature), ``derived`` (computed by an
independent oracle, named after the colon) or ``trivial``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from . import io
from .amalgam import identity_membership
from .automata import accepts_bounded, enumerate_language, replay
from .graphs import classify_context_free, classify_regular, classify_semilinear
from .semilinear import equal_on_box

PROVENANCE = ("published", "derived", "trivial")


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    kind: str
    data: dict
    expect: tuple
    note: str = ""

    def build(self):
        if self.kind == "automaton":
            return io.automaton_from_json(self.data)
        if self.kind == "graph":
            return self.data
        if self.kind == "amalgam":
            return io.amalgam_from_json(self.data)
        raise io.InputError(f"unknown corpus kind {self.kind!r}")


@dataclass(frozen=True)
class CheckResult:
    entry: str
    check: str
    ok: bool
    detail: str
    provenance: str


def entry_from_json(data: dict) -> CorpusEntry:
    for e in data.get("expect", []):
        tag = str(e.get("provenance", "")).split(":")[0]
        if tag not in PROVENANCE:
            raise io.InputError(f"{data.get('name')}: expectation without provenance tag: {e}")
    return CorpusEntry(data["name"], data["kind"], data["data"], tuple(data.get("expect", [])), data.get("note", ""))


def load_corpus() -> dict:
    out = {}
    for f in sorted(resources.files("valence").joinpath("corpus").iterdir(), key=lambda p: p.name):
        if f.name.endswith(".json"):
            entry = entry_from_json(json.loads(f.read_text(encoding="utf-8")))
            out[entry.name] = entry
    return out


def storage_annotations(data: dict) -> dict:
    """Graph JSON for the context-free classifier.

    Vertices without an explicit annotation are copies of 𝔹 or ℤ: neither is
    FRI, both have context-free valence languages and nontrivial J.
    """
    vs = []
    for v in data["vertices"]:
        v = dict(v) if isinstance(v, dict) else {"id": v}
        v.setdefault("annot", {"is_fri": False, "is_context_free": True, "j_trivial": False})
        vs.append(v)
    return {"vertices": vs, "edges": data.get("edges", [])}


def classify(data: dict, which: str):
    if which == "cf":
        return classify_context_free(io.annotated_from_json(storage_annotations(data)))
    g = io.graph_from_json(data)
    if which == "reg":
        return classify_regular(g)
    if which == "semilinear":
        return classify_semilinear(g)
    raise io.InputError(f"unknown classification {which!r}")


def check_entry(entry: CorpusEntry) -> list:
    obj = entry.build()
    results = []
    for e in entry.expect:
        ok, detail = _check(entry, obj, e)
        results.append(CheckResult(entry.name, e["check"], ok, detail, e["provenance"]))
    return results


def _join(word) -> str:
    return "".join(map(str, word))


def _check(entry, obj, e):
    kind = e["check"]
    if kind == "run":
        res = accepts_bounded(obj, e["word"], e["max_steps"])
        got = res.verdict.value
        if res.accepted and not replay(obj, res.run, e["word"]):
            return False, f"{e['word']!r}: witness run does not replay"
        return got == e["expected"], f"{e['word']!r}: {got}"
    if kind == "enum":
        got = sorted(_join(w) for w in enumerate_language(obj, e["max_len"], e["max_steps"]))
        want = sorted(e["expected"])
        return got == want, f"{len(got)} words, expected {len(want)}"
    if kind == "parikh-extract":
        from .torsion import extract

        res = extract(obj)
        want = io.semilinear_from_json(e["expected"])
        same, witness = equal_on_box(res.assembled, want, e["box"])
        return same and not res.audit_violations, "agrees on box" if same else f"differs at {witness}"
    if kind == "classify":
        v = classify(entry.data, e["which"])
        ok = v.name == e["expected"] and e.get("condition") in (None, v.condition)
        return ok, f"{v.name} {v.condition or ''}".strip()
    if kind == "amalgam":
        got = identity_membership(obj, e["word"])
        return got == e["expected"], f"{e['word']!r}: {got}"
    raise io.InputError(f"unknown check {kind!r}")


def check_all() -> list:
    out = []
    for entry in load_corpus().values():
        out.extend(check_entry(entry))
    return out
