"""Scikit-learn interface to interpolation with Buhmann's kernels."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted, validate_data

from .exceptions import DomainError
from .rbf import RbfSpec, certify_spec, evaluate_interpolant, fit_interpolant

__all__ = ["BuhmannRBFInterpolator"]


class BuhmannRBFInterpolator(RegressorMixin, BaseEstimator):
    """Exact scattered-data interpolation with a compactly supported kernel.

    The kernel is ``W(|x - y| / support_radius)``; its dimension ``n`` is
    taken from the training data.

    Parameters
    ----------
    delta, rho, lam, alpha : float
        Kernel parameters; ``alpha > -1`` is needed for a finite diagonal.
        ``rho=None`` means ``(n + 3) / 2``. With the other defaults this is
        the Wendland kernel with ``sigma = 1``, certified in every dimension.
    support_radius : float
        Points farther apart than this do not interact.
    require_certified : bool
        Refuse parameters that no region theorem proves positive definite
        in the data dimension.
    pivot_tol : float
        Relative Cholesky pivot floor.
    n_jobs : int or None
        Threads for kernel evaluation; ``None`` reads ``BESSELPOS_THREADS``.

    Attributes
    ----------
    spec_ : RbfSpec
    region_ : RegionId or None
        Region theorem certifying the kernel.
    centers_ : ndarray of shape (m, n)
        Training points scaled by ``1 / support_radius``.
    coef_ : ndarray of shape (m,)
    """

    def __init__(self, delta=0.5, rho=None, lam=0.0, alpha=0.0, support_radius=1.0,
                 require_certified=True, pivot_tol=1e-13, n_jobs=None):
        self.delta = delta
        self.rho = rho
        self.lam = lam
        self.alpha = alpha
        self.support_radius = support_radius
        self.require_certified = require_certified
        self.pivot_tol = pivot_tol
        self.n_jobs = n_jobs

    def fit(self, X, y):
        X, y = validate_data(self, X, y, y_numeric=True, dtype=np.float64)
        if not self.support_radius > 0:
            raise DomainError(f"support_radius must be > 0, got {self.support_radius}")
        n = X.shape[1]
        rho = (n + 3) / 2 if self.rho is None else self.rho
        spec = RbfSpec(n, self.delta, rho, self.lam, self.alpha)
        region = certify_spec(spec)
        if self.require_certified and region is None:
            raise DomainError(f"no region theorem certifies {spec}; pass require_certified=False to try anyway")
        centers = X / self.support_radius
        self.coef_ = fit_interpolant(spec, centers, y, tol=self.pivot_tol, n_jobs=self.n_jobs)
        self.spec_, self.region_, self.centers_ = spec, region, centers
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = validate_data(self, X, reset=False, dtype=np.float64)
        return evaluate_interpolant(self.spec_, self.centers_, self.coef_, X / self.support_radius,
                                    n_jobs=self.n_jobs)
