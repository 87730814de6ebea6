"""Small dense linear-algebra kernel: SVD, PCA, gradient checking, seeded RNG.

Everything runs in float64 on plain 2-D numpy arrays. The SVD is a
one-sided Jacobi, which is accurate and simple for the matrix sizes used
here (label-embedding tables of at most a few hundred rows); it is not
meant to compete with LAPACK on large inputs.
"""

import math

import numpy as np

from .errors import DegenerateInput, NoConvergence, NonFiniteEvaluation, NonFiniteInput

#: Hard cap on Jacobi sweeps before giving up.
MAX_SWEEPS = 100

#: A pair of columns counts as orthogonal when their normalized inner
#: product falls below this; drives both rotation skipping and convergence.
_ORTH_TOL = 1e-15


def make_rng(seed: int) -> np.random.Generator:
    """Deterministic generator used everywhere in the package.

    The bit generator is PCG64, so the stream is reproducible bit for bit
    for a given seed on any platform.
    """
    return np.random.Generator(np.random.PCG64(seed))


def svd(a) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD by one-sided Jacobi rotations: a = U @ diag(s) @ V.T.

    Returns (U, s, V) with s non-negative and sorted descending, and with
    U (m x k) and V (n x k) having orthonormal columns, k = min(m, n).

    Raises NonFiniteInput for nan/inf entries and NoConvergence if the
    rotation sweeps fail to settle within MAX_SWEEPS (not observed in
    practice at these sizes).
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise DegenerateInput("svd expects a non-empty 2-D array")
    if not np.isfinite(a).all():
        raise NonFiniteInput("svd input contains nan or inf")
    if a.shape[0] < a.shape[1]:
        # Work on the transpose so we always orthogonalize <= m columns.
        ut, s, vt = svd(a.T)
        return vt, s, ut

    m, n = a.shape
    w = a.copy()
    v = np.eye(n)

    converged = False
    for _ in range(MAX_SWEEPS):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                wp = w[:, p]
                wq = w[:, q]
                alpha = float(wp @ wp)
                beta = float(wq @ wq)
                gamma = float(wp @ wq)
                if abs(gamma) <= _ORTH_TOL * math.sqrt(alpha * beta):
                    continue
                zeta = (beta - alpha) / (2.0 * gamma)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.hypot(1.0, zeta))
                c = 1.0 / math.hypot(1.0, t)
                s_ = c * t
                new_p = c * wp - s_ * wq
                new_q = s_ * wp + c * wq
                w[:, p] = new_p
                w[:, q] = new_q
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s_ * vq
                v[:, q] = s_ * vp + c * vq
                rotated = True
        if not rotated:
            converged = True
            break
    if not converged:
        raise NoConvergence(f"Jacobi SVD did not converge in {MAX_SWEEPS} sweeps")

    norms = np.sqrt((w * w).sum(axis=0))
    order = np.argsort(-norms, kind="stable")
    sigma = norms[order]
    w = w[:, order]
    v = v[:, order]

    u = np.zeros((m, n))
    cutoff = np.finfo(np.float64).eps * max(m, n) * (sigma[0] if sigma[0] > 0 else 1.0)
    pending = []
    for j in range(n):
        if sigma[j] > cutoff:
            u[:, j] = w[:, j] / sigma[j]
        else:
            pending.append(j)
    for j in pending:
        u[:, j] = _orthonormal_completion(u)
    return u, sigma, v


def _orthonormal_completion(u: np.ndarray) -> np.ndarray:
    # Pick the standard basis vector farthest from the span of the filled
    # columns (zero columns contribute nothing), then Gram-Schmidt twice.
    resid = np.eye(u.shape[0]) - u @ u.T
    k = int(np.argmax(np.sqrt((resid * resid).sum(axis=0))))
    cand = resid[:, k]
    cand = cand - u @ (u.T @ cand)
    return cand / np.sqrt(cand @ cand)


def nuclear_norm_of(a) -> float:
    """Sum of singular values of ``a``."""
    return float(svd(a)[1].sum())


def pca_2d(points) -> np.ndarray:
    """Scores of each row along the top-2 principal directions.

    Rows are centered first; directions come from the SVD of the centered
    matrix. Each direction is sign-fixed so its largest-magnitude
    coordinate is positive, making the output deterministic. A matrix of
    identical rows yields all-zero scores.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 2:
        raise DegenerateInput("pca_2d needs at least 2 rows")
    if pts.shape[1] < 2:
        raise DegenerateInput("pca_2d needs at least 2 columns")
    centered = pts - pts.mean(axis=0)
    _, _, v = svd(centered)
    directions = v[:, :2].copy()
    for j in range(2):
        k = int(np.argmax(np.abs(directions[:, j])))
        if directions[k, j] < 0:
            directions[:, j] = -directions[:, j]
    return centered @ directions


def check_gradient(f, analytic_grad, at, eps: float = 1e-5) -> float:
    """Compare an analytic gradient against central finite differences.

    ``f`` maps an array like ``at`` to a scalar and must not mutate or
    retain its argument. Returns the worst per-coordinate relative error

        |analytic - numeric| / max(1, |analytic| + |numeric|)

    over all coordinates of ``at``.
    """
    if not 0.0 < eps <= 1e-2:
        raise ValueError(f"eps must be in (0, 1e-2], got {eps}")
    x = np.array(at, dtype=np.float64)
    grad = np.asarray(analytic_grad, dtype=np.float64)
    if grad.shape != x.shape:
        raise ValueError(f"gradient shape {grad.shape} != point shape {x.shape}")
    worst = 0.0
    for idx in np.ndindex(*x.shape):
        orig = x[idx]
        x[idx] = orig + eps
        f_plus = float(f(x))
        x[idx] = orig - eps
        f_minus = float(f(x))
        x[idx] = orig
        if not (math.isfinite(f_plus) and math.isfinite(f_minus)):
            raise NonFiniteEvaluation(f"f is not finite near coordinate {idx}")
        numeric = (f_plus - f_minus) / (2.0 * eps)
        analytic = float(grad[idx])
        rel = abs(analytic - numeric) / max(1.0, abs(analytic) + abs(numeric))
        worst = max(worst, rel)
    return worst
