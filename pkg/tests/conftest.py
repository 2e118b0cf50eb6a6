import os
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

from uordkit import _accel
from uordkit.relcore import BinRel, Carrier
from uordkit.uord import Basis, from_basis

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "uordkit" / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"


def uord(n, *rels, names=None):
    """Uniform preorder on ``n`` points generated by the identity plus boolean matrices."""
    c = Carrier(names) if names else Carrier.of_size(n)
    basis = [("id", BinRel.identity(c))]
    basis += [(f"r{i}", BinRel(c, c, np.asarray(r, dtype=bool))) for i, r in enumerate(rels)]
    return from_basis(Basis(c, basis))


def order_uord(bits):
    bits = np.asarray(bits, dtype=bool)
    c = Carrier.of_size(bits.shape[0])
    return from_basis(Basis(c, [("leq", BinRel(c, c, bits))]))


CHAIN2 = [[1, 1], [0, 1]]


@pytest.fixture(params=["numpy", "numba"] if _accel.HAVE_NUMBA else ["numpy"])
def backend(request):
    prev = _accel.set_backend(request.param)
    yield request.param
    _accel.set_backend(prev)


#: One line per acceptance criterion, filled in by ``tests/test_acceptance.py``.
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
