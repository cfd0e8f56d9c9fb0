from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SAMPLES
from ewopt.document import DocumentError, EwsDocument, dumps, loads
from ewopt.frontends import FORMATS, load
from ewopt.ewsys import ExplicitModule
from ewopt.solver import solve
from ewopt.transforms import TRANSFORMS, replace_modules
from ewopt.verify import RandomSystemParams, random_system

SAMPLE_FORMATS = {".gpw": "gpw", ".omt": "omt", ".lp": "op", ".cc21": "cc21", ".cc22": "cc22",
                  ".cc3": "cc3", ".ilp": "ilp", ".wcnf": "wcnf"}


def documents():
    for path in sorted(SAMPLES.iterdir()):
        fmt = SAMPLE_FORMATS[path.suffix]
        system, f = load(path.read_text(encoding="utf-8"), fmt)
        yield path.name, EwsDocument(system, f.sense, f.extended)


@pytest.mark.parametrize("name,doc", list(documents()))
def test_round_trip_is_byte_identical(name, doc):
    text = dumps(doc)
    again = loads(text)
    assert dumps(again) == text
    assert (again.sense, again.extended, again.strict) == (doc.sense, doc.extended, doc.strict)
    before = solve(doc.system, doc.sense, doc.extended)
    after = solve(again.system, again.sense, again.extended)
    assert before.optimal == after.optimal


@pytest.mark.parametrize("name,doc", list(documents()))
def test_every_transform_serializes(name, doc):
    for fn in TRANSFORMS.values():
        text = dumps(EwsDocument(fn(doc.system), doc.sense, doc.extended))
        assert dumps(loads(text)) == text


def test_explicit_modules_serialize():
    name, doc = next(documents())
    tab = EwsDocument(replace_modules(doc.system, ExplicitModule.tabulate), doc.sense)
    assert solve(loads(dumps(tab)).system, doc.sense).optimal == solve(doc.system, doc.sense).optimal


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_random_systems_round_trip(seed):
    import random

    system = random_system(random.Random(seed), RandomSystemParams())
    text = dumps(EwsDocument(system))
    assert dumps(loads(text)) == text


def _sample_json():
    _, doc = next(documents())
    return json.loads(dumps(doc))


@pytest.mark.parametrize("mutate", [
    lambda d: d.update(version="ews/0"),
    lambda d: d.pop("soft"),
    lambda d: d.update(extra=1),
    lambda d: d["flags"].update(sense="best"),
    lambda d: d["vocabulary"].append({"atom": "zz", "kind": "odd"}),
    lambda d: d["soft"][0].update(level=0),
    lambda d: d["soft"][0]["module"].update(logic="quantum"),
    lambda d: d["denotation"].clear(),
    lambda d: d["specification"].update(x=[]),
])
def test_malformed_documents(mutate):
    data = _sample_json()
    mutate(data)
    with pytest.raises(DocumentError):
        loads(json.dumps(data))


def test_invalid_json():
    with pytest.raises(DocumentError, match="line 1"):
        loads("{")


def test_formats_cover_samples():
    assert set(SAMPLE_FORMATS.values()) == set(FORMATS)
