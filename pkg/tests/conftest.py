import numpy as np
import pytest

from regkit import DenseOperator, DiagonalOperator, MatrixFreeOperator


def philox(seed):
    return np.random.default_rng(np.random.Philox(seed))


def matrix_free_view(op):
    """Re-expose any operator through callbacks only (hides its kind)."""
    return MatrixFreeOperator(
        op.range_dim, op.domain_dim, op.apply, op.apply_adjoint
    )


def operator_zoo():
    """Named operators covering kinds, shapes, and rank deficiency."""
    rng = philox(11)
    tall = rng.standard_normal((9, 5))
    wide = rng.standard_normal((4, 7))
    zoo = [
        ("identity3", DenseOperator(np.eye(3))),
        ("shear", DenseOperator([[1.0, 1.0], [0.0, 1.0]])),
        ("tall_dense", DenseOperator(tall)),
        ("wide_dense", DenseOperator(wide)),
        ("diag_mixed", DiagonalOperator([2.0, 0.5, 0.0, 1.0])),
        ("matrix_free_tall", matrix_free_view(DenseOperator(tall))),
    ]
    return zoo


@pytest.fixture(scope="session")
def zoo():
    return operator_zoo()
