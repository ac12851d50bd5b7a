import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from twistkl.coxeter import build_group, named_matrix  # noqa: E402
from twistkl.hecke import HeckeAlgebra  # noqa: E402
from twistkl.invmod import InvolutionModule  # noqa: E402

_CACHE = {}


def module_for(name, star=None):
    """Shared (group, module) per (type, star); columns are memoized inside."""
    key = (name, tuple(star) if star else None)
    if key not in _CACHE:
        g = build_group(named_matrix(name), star)
        _CACHE[key] = InvolutionModule(HeckeAlgebra(g))
    return _CACHE[key]


@pytest.fixture
def mod():
    return module_for
