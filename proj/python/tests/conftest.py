import json
import os
import pathlib

import pytest

FIXTURES = pathlib.Path(os.environ.get(
    "CSTRUCT_FIXTURES", pathlib.Path(__file__).resolve().parents[2] / "tests" / "fixtures"))


def _inline(doc, base):
    if isinstance(doc, dict):
        out = {}
        for k, v in doc.items():
            if k in ("signature", "structure") and isinstance(v, str):
                out[k] = _inline(json.loads((base / v).read_text()), base)
            else:
                out[k] = _inline(v, base)
        return out
    if isinstance(doc, list):
        return [_inline(v, base) for v in doc]
    return doc


@pytest.fixture
def fx():
    def load(name):
        return _inline(json.loads((FIXTURES / name).read_text()), FIXTURES)
    return load
