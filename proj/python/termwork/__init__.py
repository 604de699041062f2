"""Terminology thesaurus workbench: term ranking, relation mining, thesaurus store and API."""

import json as _json

from . import _termwork
from ._termwork import Error, lexsim, logdice, normalize_phrase, strip_diacritics, term_rank, tokenize

__all__ = [
    "Api",
    "Error",
    "Store",
    "dedup",
    "lexsim",
    "logdice",
    "normalize_phrase",
    "rank",
    "run_stage",
    "strip_diacritics",
    "term_rank",
    "tokenize",
]


def rank(domain, reference, language="en", rules=None, n=1.0, min_count=2):
    """Ranks grammar-matching phrases of the domain texts against the reference texts."""
    return _json.loads(_termwork.rank(list(domain), list(reference), language, rules, n, min_count))


def dedup(documents, shingle_len=5, threshold=0.9):
    """Removes duplicate documents and paragraphs.

    Each document is a dict with "id" and "paragraphs" (strings or
    {"text", "quality"} dicts). Returns {"kept": [...], "report": {...}}.
    """
    docs = []
    for d in documents:
        paragraphs = [p if isinstance(p, dict) else {"text": p, "quality": "good"} for p in d["paragraphs"]]
        docs.append({**d, "paragraphs": paragraphs})
    return _json.loads(_termwork.dedup(_json.dumps(docs), shingle_len, threshold))


def run_stage(stage, config_path):
    return _json.loads(_termwork.run_stage(stage, str(config_path)))


class Store:
    """Thesaurus store with entries as plain dicts."""

    def __init__(self, _core=None):
        self._core = _core if _core is not None else _termwork.Store()

    @classmethod
    def restore(cls, dump):
        return cls(_termwork.Store.restore(_json.dumps(dump)))

    @classmethod
    def load(cls, path):
        return cls(_termwork.Store.load(str(path)))

    @classmethod
    def from_skos_rdfxml(cls, xml):
        return cls(_termwork.Store.from_skos_rdfxml(xml))

    def upsert(self, entry, editor, expected_revisions=None):
        return self._core.upsert(_json.dumps(entry), editor, expected_revisions)

    def get(self, entry_id):
        return _json.loads(self._core.get(entry_id))

    def find(self, term):
        return self._core.find(term)

    def __len__(self):
        return len(self._core)

    def validate(self):
        return self._core.validate()

    def dump(self):
        return _json.loads(self._core.dump())

    def tree(self, root=None, include_rejected=False, depth=0):
        return _json.loads(self._core.tree(root, include_rejected, depth))

    def import_dataset(self, content, mapping, editor):
        return _json.loads(self._core.import_dataset(content, _json.dumps(mapping), editor))

    def close_terms(self, term, threshold=0.8):
        return _json.loads(self._core.close_terms(term, threshold))

    def skos_rdfxml(self):
        return self._core.skos_rdfxml()

    def skos_jsonld(self):
        return _json.loads(self._core.skos_jsonld())


class Api:
    """In-process JSON API over a snapshot of a store."""

    def __init__(self, store, config=None):
        self._core = _termwork.Api(store._core, _json.dumps(config or {}))

    def request(self, method, path, query=None, headers=None, body=None):
        payload = body if isinstance(body, str) else ("" if body is None else _json.dumps(body))
        status, content_type, text = self._core.handle(method, path, query or {}, headers or {}, payload)
        data = _json.loads(text) if content_type.startswith("application/") and "json" in content_type else text
        return status, data
