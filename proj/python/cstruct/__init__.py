"""Finite continuous structures: classification, amalgamation, Katetov
extensions, EPPA witnesses and group actions.

Inputs are dicts in the CLI's JSON format (rationals as "p/q" strings) with
every reference inlined; results come back as dicts.
"""

import json

from . import _cstruct
from ._cstruct import BudgetExceeded, Error, ParseError, PreconditionError

__version__ = _cstruct.__version__

__all__ = [
    "BudgetExceeded",
    "Error",
    "ParseError",
    "PreconditionError",
    "check_extension_property",
    "check_partial",
    "classical_reduction",
    "classify",
    "conservative_extension",
    "eppa_search",
    "extend_action",
    "fraisse_build",
    "induced_du",
    "joint_embed",
    "joint_embed_actions",
    "katetov_amalgam",
    "katetov_de",
    "strong_amalgam",
    "validate",
    "validate_action",
    "value_pair_for",
]


def _enc(doc):
    return "" if doc is None else json.dumps(doc)


def _call(fn, *docs, **kwargs):
    return json.loads(fn(*(_enc(d) for d in docs), **kwargs))


def classify(sig):
    return _call(_cstruct.classify, sig)


def validate(structure):
    return _call(_cstruct.validate, structure)


def check_partial(partial):
    return _call(_cstruct.check_partial, partial)


def induced_du(structure, relation, arg=0):
    return json.loads(_cstruct.induced_du(_enc(structure), relation, arg))


def conservative_extension(partial):
    return _call(_cstruct.conservative_extension, partial)


def strong_amalgam(m, p, q, phi, psi, pair=None):
    return _call(_cstruct.strong_amalgam, m, p, q, phi, psi, pair)


def joint_embed(m, n, pair=None):
    return _call(_cstruct.joint_embed, m, n, pair)


def value_pair_for(structure):
    return _call(_cstruct.value_pair_for, structure)


def fraisse_build(sig, pair, rounds, size_cap=1, mode="canonical"):
    if mode not in ("canonical", "saturating"):
        raise ValueError("mode must be 'canonical' or 'saturating'")
    return _call(_cstruct.fraisse_build, sig, pair, rounds=rounds, size_cap=size_cap,
                 saturating=mode == "saturating")


def check_extension_property(structure, pair, m=1):
    return _call(_cstruct.check_extension_property, structure, pair, m=m)


def katetov_de(base, x, y):
    return _call(_cstruct.katetov_de, base, x, y)


def katetov_amalgam(base, x, y):
    return _call(_cstruct.katetov_amalgam, base, x, y)


def eppa_search(m, pair, max_size=None, budget=100_000):
    return _call(_cstruct.eppa_search, m, pair, max_size=max_size or 0, budget=budget)


def classical_reduction(m):
    return _call(_cstruct.classical_reduction, m)


def validate_action(action):
    return _call(_cstruct.validate_action, action)


def extend_action(gamma_on_m, lambda_on_n, inclusion):
    return _call(_cstruct.extend_action, gamma_on_m, lambda_on_n, inclusion)


def joint_embed_actions(a, b, pair=None):
    return _call(_cstruct.joint_embed_actions, a, b, pair)
