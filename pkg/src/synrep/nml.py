"""Nuclear-norm maximization loss over the full label-embedding table.

The loss is the negated, size-normalized nuclear norm

    loss = -(1/N) * sum_i sigma_i(table)

so driving it down spreads the embedding rows toward higher effective
rank. The (sub)gradient is -(1/N) * U @ V.T from the thin SVD; at rank
deficiency the completed thin-SVD factors are used as-is, which is the
standard subgradient selection and deterministic given the SVD.
"""

from dataclasses import dataclass

import numpy as np

from .encoder import EmbeddingTable
from .numerics import svd


@dataclass
class NmlResult:
    loss: float
    grad_table: np.ndarray
    singular_values: np.ndarray


def nuclear_norm(a) -> float:
    """Sum of singular values."""
    return float(svd(a)[1].sum())


def nml_loss(table: EmbeddingTable) -> NmlResult:
    """Loss, its gradient w.r.t. every table entry, and the spectrum."""
    u, s, v = svd(table.weights)
    n = table.size
    loss = -float(s.sum()) / n
    grad = -(u @ v.T) / n
    return NmlResult(loss, grad, s)
