import json

import pytest

from heightlab.errors import ParseError
from heightlab.families import jordan_alpha, jordan_beta, jordan_rep
from heightlab.serialization import (
    ProblemDocument,
    canonical_json,
    document_json,
    load_document,
    parse_document,
)

BASE = {"schema_version": "1", "rep": {"rank": 2, "r": 1, "N": [[["0", "0"], ["1", "0"]]]}}


def test_round_trip_document():
    doc = ProblemDocument(jordan_rep(3), jordan_alpha((0, 1, 2)), jordan_beta((1, 1, 0)), t=(1, 2, 3))
    text = canonical_json(document_json(doc))
    again = load_document(text)
    assert canonical_json(document_json(again)) == text
    assert again.rep == doc.rep and again.alpha == doc.alpha


def test_rationals_are_strings():
    out = document_json(ProblemDocument(jordan_rep(1)))
    assert out["rep"]["T"] == [[["1", "0"], ["1", "1"]]]
    assert out["schema_version"] == "1"


def test_canonical_json_is_sorted():
    assert canonical_json({"b": 1, "a": [1]}) == '{\n  "a": [\n    1\n  ],\n  "b": 1\n}\n'


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.update(extra=1),
        lambda d: d["rep"].update(colour="red"),
        lambda d: d.update(schema_version="2"),
        lambda d: d["rep"]["N"][0][0].__setitem__(0, 0.5),
        lambda d: d["rep"]["N"][0][0].__setitem__(0, "1/0"),
        lambda d: d["rep"]["N"][0].append(["0", "0"]),
        lambda d: d.update(alpha=[["1"]]),
        lambda d: d.update(query={"t": ["1", "2"]}),
    ],
)
def test_rejections(mutate):
    doc = json.loads(json.dumps(BASE))
    mutate(doc)
    with pytest.raises(ParseError):
        parse_document(doc)


def test_invalid_json():
    with pytest.raises(ParseError):
        load_document("{not json")


def test_query_fields():
    doc = dict(BASE, query={"t": ["1/2"], "pairing": "hQ", "l": ["t1/2", "0"], "stratum": [1]})
    parsed = parse_document(doc)
    assert parsed.pairing == "hQ" and parsed.stratum == (1,) and len(parsed.l) == 2
