import numpy as np
import pytest

from fcmclf import make_model
from fcmclf.data import RawTable

# The two worked example maps used throughout the tests.
EXAMPLE_B_W = np.array([[0.28, -0.31, -0.09],
                        [1.17, 0.45, -0.66],
                        [-2.43, 3.65, -1.92]])
EXAMPLE_B_b = np.array([0.28, 0.57, -1.62])
EXAMPLE_MC_W = np.array([[2.89, -1.50, -0.29, -1.01],
                         [5.77, -1.43, 5.61, -4.42],
                         [3.31, -6.80, 0.96, 0.75],
                         [5.03, 6.75, -1.02, -0.46]])
EXAMPLE_MC_b = np.array([-3.14, -1.38, 3.01, -2.18])


@pytest.fixture
def fcmb_example():
    return make_model(EXAMPLE_B_W, EXAMPLE_B_b, n=2, depth=3, lam=5.0, variant="FCMB")


@pytest.fixture
def fcmmc_example():
    return make_model(EXAMPLE_MC_W, EXAMPLE_MC_b, n=2, depth=3, lam=2.0, variant="FCMMC")


def sklearn_table(loader):
    d = loader()
    return RawTable(d.data.astype(np.float64), d.target.astype(np.int64),
                    tuple(str(t) for t in d.target_names),
                    tuple(f"f{i}" for i in range(d.data.shape[1])))


def write_table_csv(path, X, labels, header=None):
    header = header or [f"f{i}" for i in range(X.shape[1])] + ["label"]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row, lab in zip(X, labels):
            fh.write(",".join(repr(float(v)) for v in row) + f",{lab}\n")
    return path


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    def report(number, name, ok, detail):
        ACCEPTANCE_LINES.append(f"criterion {number} [{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        return ok
    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
