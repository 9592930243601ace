#
# For licensing see accompanying LICENSE file.
#
import pytest

from heffter_loops.arrays import AffineDesign, PartiallyFilledArray
from heffter_loops.loops import PartialLoop
from heffter_loops.readers import (
    fixture_path,
    load_array,
    load_design,
    load_loop,
    load_polys,
)
from heffter_loops.sumpoly import PolynomialSet


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "uncollect_if(*, func): function to unselect tests from parametrization",
    )


def pytest_collection_modifyitems(config, items):
    removed = []
    kept = []
    for item in items:
        m = item.get_closest_marker("uncollect_if")
        if m:
            func = m.kwargs["func"]
            if func(**item.callspec.params):
                removed.append(item)
                continue
        kept.append(item)
    if removed:
        config.hook.pytest_deselected(items=removed)
        items[:] = kept


@pytest.fixture
def array_a() -> PartiallyFilledArray:
    return load_array(fixture_path("example-2-1", "array.json"))


@pytest.fixture
def design_a(array_a: PartiallyFilledArray) -> AffineDesign:
    return load_design(fixture_path("example-2-1", "design.json"), array_a)


@pytest.fixture
def array_b() -> PartiallyFilledArray:
    return load_array(fixture_path("example-2-2", "array.json"))


@pytest.fixture
def design_b(array_b: PartiallyFilledArray) -> AffineDesign:
    return load_design(fixture_path("example-2-2", "design.json"), array_b)


@pytest.fixture
def design_b_all(array_b: PartiallyFilledArray) -> AffineDesign:
    return load_design(fixture_path("example-2-2", "design_all.json"), array_b)


@pytest.fixture
def sparse_loop() -> PartialLoop:
    return load_loop(fixture_path("example-3-1", "loop.json"))


@pytest.fixture
def row_polys() -> PolynomialSet:
    return load_polys(fixture_path("example-3-1", "polys.json"))


@pytest.fixture
def loop_7_3() -> PartialLoop:
    return load_loop(fixture_path("example-4-2", "loop.json"))


@pytest.fixture
def blocked_loop() -> PartialLoop:
    return load_loop(fixture_path("example-4-4", "loop.json"))


@pytest.fixture
def array_natural() -> PartiallyFilledArray:
    return load_array(fixture_path("example-5-1", "array.json"))


@pytest.fixture
def design_natural(array_natural: PartiallyFilledArray) -> AffineDesign:
    return load_design(fixture_path("example-5-1", "design.json"), array_natural)


@pytest.fixture
def forced_partial() -> PartialLoop:
    return load_loop(fixture_path("example-6-1", "partial.json"))


@pytest.fixture
def forced_completion() -> PartialLoop:
    return load_loop(fixture_path("example-6-1", "completion.json"))
