import math
import sys
from pathlib import Path

import numpy as np
import pytest

# tests import the library the same way run_measures.py does
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from lib.linalg import DimSignature
from lib.optimize import OptimizerBudget
from lib.states import DensityMatrix, ExampleFamilyParams, PureState, bell_state


@pytest.fixture
def qubits():
    return DimSignature((2, 2), ('a', 'b'))


@pytest.fixture
def bell():
    return bell_state()


@pytest.fixture
def bell_rho():
    return bell_state().density()


@pytest.fixture
def product_rho(qubits):
    """|0><0| (x) I/2."""
    return DensityMatrix(np.kron(np.diag([1.0, 0.0]), np.eye(2) / 2), qubits)


@pytest.fixture
def classical_quantum_rho(qubits):
    """(|0><0| (x) |+><+| + |1><1| (x) |0><0|) / 2: classical on a, quantum on b."""
    plus = np.full((2, 2), 0.5)
    zero = np.diag([1.0, 0.0])
    matrix = 0.5 * np.kron(np.diag([1.0, 0.0]), plus) + 0.5 * np.kron(np.diag([0.0, 1.0]), zero)
    return DensityMatrix(matrix, qubits)


@pytest.fixture
def product_pure(qubits):
    return PureState(np.array([1.0, 0.0, 0.0, 0.0]), qubits)


@pytest.fixture
def fast_budget():
    return OptimizerBudget(starts=6, iterations=300)


@pytest.fixture
def quarter_point():
    """theta = pi/2, phi = pi/4: E_C = 0.600876, E_D = 0.399124."""
    return ExampleFamilyParams(math.pi / 2, math.pi / 4)


@pytest.fixture
def write_json(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding='utf-8')
        return path
    return _write
