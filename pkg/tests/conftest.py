import pytest

from smallcancel.construct import ConstructionParams, Presentation, build_theorem_a, member
from smallcancel.freeprod import FactorFamily
from smallcancel.groups import cyclic_group


@pytest.fixture(scope="session")
def c2c3():
    return FactorFamily.of(A=cyclic_group(2, "a"), B=cyclic_group(3, "b"))


def triangle(fam, m):
    return Presentation.from_words(fam, [fam.parse(f"(A.a B.b)^{m}")])


@pytest.fixture(scope="session")
def tri7(c2c3):
    return triangle(c2c3, 7)


@pytest.fixture(scope="session")
def tri10(c2c3):
    return triangle(c2c3, 10)


@pytest.fixture(scope="session")
def pair_members():
    return (member(cyclic_group(2)), member(cyclic_group(3)))


@pytest.fixture(scope="session")
def pair23(pair_members):
    return build_theorem_a(ConstructionParams(23, pair_members))


@pytest.fixture(scope="session")
def pair5(pair_members):
    return build_theorem_a(ConstructionParams(5, pair_members, force=True))


def pytest_configure(config):
    config.acceptance_lines = []


@pytest.fixture(scope="session")
def acceptance(request):
    lines = request.config.acceptance_lines

    def record(tag, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {tag}: {detail}"
        lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    if config.acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in config.acceptance_lines:
            terminalreporter.write_line(line)
