import random
from pathlib import Path

import pytest

from linkedchains import zrep
from linkedchains.exactlin import Q, Matrix
from linkedchains.zrep import TailKind, ZRep

FIXTURES = Path(__file__).parent / "fixtures"

_ACCEPTANCE_LINES: list[str] = []


def record_acceptance(number: int, ok: bool, detail: str) -> None:
    line = f"ACCEPTANCE {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    _ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def colinked_rep(lo, dims, up, down):
    """Window rep with ForwardIso on the left and BackwardIso on the right."""
    fwd = [Matrix.from_rows(Q, m, dims[k]) for k, m in enumerate(up)]
    bwd = [Matrix.from_rows(Q, m, dims[k + 1]) for k, m in enumerate(down)]
    return ZRep(Q, lo, lo + len(dims) - 1, dims, fwd, bwd, TailKind.FORWARD_ISO, TailKind.BACKWARD_ISO)


def hilb_fixture(kind: int) -> ZRep:
    """The three 2-dimensional examples on [0, 1] with diagonal maps."""
    zero = [[0, 0], [0, 0]]
    up = [[1, 0], [0, 0]]
    if kind == 1:
        return colinked_rep(0, [2, 2], [up], [[[0, 0], [0, 1]]])
    if kind == 2:
        return colinked_rep(0, [2, 2], [up], [zero])
    return colinked_rep(0, [2, 2], [zero], [zero])


def sub_colinked_fixture() -> ZRep:
    return colinked_rep(
        0,
        [3, 3, 3],
        [[[0, 0, 0], [0, 1, 0], [0, 0, 1]], [[0, 0, 0], [0, 0, 0], [0, 0, 1]]],
        [[[1, 0, 0], [0, 0, 0], [0, 0, 0]], [[1, 0, 0], [0, 1, 0], [0, 0, 0]]],
    )


@pytest.fixture
def rng():
    return random.Random(20261014)


@pytest.fixture(scope="session")
def conjugate_instances():
    """100 random vertex-wise conjugates of u(r) for every r with r <= 4, d <= 3."""
    gen = random.Random(1)
    out = []
    for r in zrep.all_type_vectors(4, 3):
        base = zrep.make_u_of_r(r)
        for _ in range(100):
            v, changes = zrep.random_conjugate(base, gen)
            out.append((r, base, v, changes))
    return out
