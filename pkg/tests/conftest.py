import pytest

from twistorcy.polytope import Polyhedron
from twistorcy.toric import CutSpec, apply_cut

E3 = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def model_p() -> Polyhedron:
    return Polyhedron.from_inequalities([(1, 1, -1, 0), (1, -1, 1, 0), (-1, 1, 1, 0)])


def model_r() -> Polyhedron:
    return apply_cut(model_p(), CutSpec.symmetric(E3, 1))


def model_a1() -> Polyhedron:
    return Polyhedron.from_inequalities([(2, -1, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)])


def unit_cube() -> Polyhedron:
    return Polyhedron.box((0, 0, 0), (1, 1, 1))


@pytest.fixture
def P():
    return model_p()


@pytest.fixture
def R():
    return model_r()


@pytest.fixture
def A1():
    return model_a1()


@pytest.fixture
def cube():
    return unit_cube()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, elapsed, budget in sorted(RESULTS):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {title}  ({elapsed:.2f}s, budget {budget:g}s)")
