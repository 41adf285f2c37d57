"""Dense determinants and linear solves for Nystrom systems."""
import warnings

import numpy as np
from scipy import linalg as sla


class SingularResolventError(np.linalg.LinAlgError):
    pass


def _square(M):
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise ValueError("need a nonempty square matrix")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def lu_determinant(M) -> complex:
    """det(M) from a partially pivoted LU factorization; exactly singular
    matrices give 0."""
    M = _square(M)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(M, check_finite=False)
    sign = -1.0 if np.count_nonzero(piv != np.arange(len(piv))) % 2 else 1.0
    return complex(sign * np.prod(np.diag(lu)))


def solve(M, b):
    """Solve M x = b by LU with one step of iterative refinement."""
    M = _square(M)
    b = np.asarray(b)
    with warnings.catch_warnings():
        warnings.simplefilter("error", sla.LinAlgWarning)
        try:
            fac = sla.lu_factor(M, check_finite=False)
        except (sla.LinAlgWarning, np.linalg.LinAlgError) as exc:
            raise SingularResolventError("singular resolvent") from exc
    if np.any(np.diag(fac[0]) == 0):
        raise SingularResolventError("singular resolvent")
    x = sla.lu_solve(fac, b, check_finite=False)
    x = x + sla.lu_solve(fac, b - M @ x, check_finite=False)
    if not np.all(np.isfinite(x)):
        raise SingularResolventError("singular resolvent")
    return x
