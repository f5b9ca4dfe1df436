"""Two-parameter families with a scalar tested parameter.

Both families here are orthogonal (kappa_phibeta = 0) with closed-form
fits, so they exercise the nuisance-parameter machinery end to end
without any iterative optimization.

Normal, testing the mean with unknown variance: with T1 = (xbar - phi0)^2
and T2 = mean((x - xbar)^2), the statistic collapses to

    S = n T1 / (T1 + T2),

so S/n is exactly Beta(1/2, (n-1)/2) under the null -- a rare case where
every approximation in this package can be compared to truth.

Two-sample exponential, testing the mean ratio phi = mu2/mu1 with the
geometric-mean scale beta = sqrt(mu1 mu2) as nuisance: equal sample
sizes n/2 each, n total.  At phi0 = 1 the statistic is
S = n (xbar1 - xbar2)^2 / (4 xbar1 xbar), xbar the pooled mean.
"""

from __future__ import annotations

import numpy as np

from ..cumulants import CumulantBundle
from ..expansion import (OrthogonalCoefficients, OrthogonalCumulants,
                         coefficients_orthogonal)
from ._build import pair_fill, sym_fill
from .base import FitError, ModelFamily

__all__ = ["NormalMeanTest", "TwoSampleExponential"]


class NormalMeanTest(ModelFamily):
    """Normal(phi, beta), testing the mean phi; variance beta unknown."""

    name = "two-parameter-normal"
    p = 2
    q = 1
    param_names = ("phi", "beta")
    default_theta = (0.0, 1.0)

    @staticmethod
    def _check_theta(theta) -> tuple:
        phi, beta = (float(v) for v in np.atleast_1d(theta))
        if not beta > 0.0:
            raise ValueError(f"variance must be positive, got {beta}")
        return phi, beta

    def sample(self, theta, n, rng):
        phi, beta = self._check_theta(theta)
        return rng.normal(phi, np.sqrt(beta), size=n)

    def validate_data(self, data):
        x = np.asarray(data, dtype=float)
        if x.ndim != 1:
            raise ValueError(f"{self.name}: data must be one-dimensional")
        for i, v in enumerate(x):
            if not np.isfinite(v):
                raise ValueError(f"observation {i + 1}: not finite ({v})")
        if len(x) < 2:
            raise ValueError(f"{self.name}: need at least 2 observations")

    def fit_unrestricted(self, data):
        x = np.asarray(data, dtype=float)
        mu = float(x.mean())
        var = float(np.mean((x - mu) ** 2))
        if not var > 0.0:
            raise FitError(f"{self.name}: degenerate sample, variance 0")
        return np.array([mu, var])

    def fit_restricted(self, data, theta10):
        x = np.asarray(data, dtype=float)
        phi0 = float(np.atleast_1d(theta10)[0])
        var = float(np.mean((x - phi0) ** 2))
        if not var > 0.0:
            raise FitError(f"{self.name}: degenerate sample, variance 0")
        return np.array([phi0, var])

    def score(self, data, theta):
        x = np.asarray(data, dtype=float)
        phi, beta = self._check_theta(theta)
        m2 = float(np.mean((x - phi) ** 2))
        return np.array([(x.mean() - phi) / beta,
                         0.5 * (m2 / beta - 1.0) / beta])

    def orthogonal_cumulants(self, theta) -> OrthogonalCumulants:
        _, b = self._check_theta(theta)
        return OrthogonalCumulants(
            kpp=-1.0 / b, kppp=0.0, kpppp=0.0,
            kpp_p=0.0, kppp_p=0.0, kpp_pp=0.0,
            kbb=-0.5 / b**2, kbbb=2.0 / b**3,
            kpbb=0.0, kppb=1.0 / b**2, kppbb=-2.0 / b**3,
            kpp_b=1.0 / b**2, kppb_b=-2.0 / b**3, kpbb_p=0.0,
            kbb_b=1.0 / b**3, kbb_p=0.0)

    def cumulants(self, theta) -> CumulantBundle:
        _, b = self._check_theta(theta)
        k2 = np.zeros((2, 2))
        k2[0, 0] = -1.0 / b
        k2[1, 1] = -0.5 / b**2
        k3 = np.zeros((2, 2, 2))
        sym_fill(k3, (0, 0, 1), 1.0 / b**2)
        k3[1, 1, 1] = 2.0 / b**3
        k4 = np.zeros((2, 2, 2, 2))
        sym_fill(k4, (0, 0, 1, 1), -2.0 / b**3)
        k4[1, 1, 1, 1] = -9.0 / b**4
        d2 = np.zeros((2, 2, 2))                  # [k,l,u] = D_u kappa_{kl}
        d2[0, 0, 1] = 1.0 / b**2
        d2[1, 1, 1] = 1.0 / b**3
        d3 = np.zeros((2, 2, 2, 2))               # [j,r,s,u] = D_j kappa_{rsu}
        sym_fill(d3[1], (0, 0, 1), -2.0 / b**3)
        d3[1, 1, 1, 1] = -6.0 / b**4
        dd2 = np.zeros((2, 2, 2, 2))              # [j,r,s,u] = D_j D_r kappa_{su}
        pair_fill(dd2, (1, 1), (0, 0), -2.0 / b**3)
        pair_fill(dd2, (1, 1), (1, 1), -3.0 / b**4)
        return CumulantBundle(kappa2=k2, kappa3=k3, kappa4=k4,
                              d_kappa2=d2, d_kappa3=d3, dd_kappa2=dd2)

    def specialized_coefficients(self, theta) -> OrthogonalCoefficients:
        return coefficients_orthogonal(self.orthogonal_cumulants(theta))

    def closed_form_coefficients(self, theta) -> OrthogonalCoefficients:
        self._check_theta(theta)
        return OrthogonalCoefficients(A1=0.0, A2=-18.0, A3=0.0,
                                      A1_phi=0.0, A1_phibeta=0.0,
                                      A2_phi=0.0, A2_phibeta=-18.0)

    def batch_statistics(self, theta, theta10, n, rngs, count):
        phi, beta = self._check_theta(theta)
        phi0 = float(np.atleast_1d(theta10)[0])
        sd = np.sqrt(beta)
        x = np.empty((count, n))
        for i, rng in zip(range(count), rngs):
            x[i] = rng.normal(phi, sd, size=n)
        xbar = x.mean(axis=1)
        t1 = (xbar - phi0) ** 2
        t2 = ((x - xbar[:, None]) ** 2).mean(axis=1)
        tot = t1 + t2
        bad = ~(tot > 0.0)
        with np.errstate(invalid="ignore", divide="ignore"):
            S = n * t1 / tot
        S[bad] = np.nan
        return S, int(bad.sum())


class TwoSampleExponential(ModelFamily):
    """Exponential mean ratio test on two independent balanced samples."""

    name = "two-sample-exponential"
    p = 2
    q = 1
    samples = 2
    param_names = ("phi", "beta")
    default_theta = (1.0, 1.0)

    @staticmethod
    def _check_theta(theta) -> tuple:
        phi, beta = (float(v) for v in np.atleast_1d(theta))
        if not phi > 0.0 or not beta > 0.0:
            raise ValueError(f"both parameters must be positive, "
                             f"got ({phi}, {beta})")
        return phi, beta

    @staticmethod
    def _split(data) -> tuple:
        x1, x2 = data
        return np.asarray(x1, dtype=float), np.asarray(x2, dtype=float)

    def nobs(self, data) -> int:
        x1, x2 = self._split(data)
        return len(x1) + len(x2)

    def sample(self, theta, n, rng):
        phi, beta = self._check_theta(theta)
        if n % 2 != 0:
            raise ValueError(f"total sample size must be even, got {n}")
        m = n // 2
        rp = np.sqrt(phi)
        return (rng.exponential(beta / rp, size=m),
                rng.exponential(beta * rp, size=m))

    def validate_data(self, data):
        x1, x2 = self._split(data)
        if len(x1) != len(x2):
            raise ValueError(f"{self.name}: samples must have equal length "
                             f"({len(x1)} vs {len(x2)})")
        for label, x in (("sample 1", x1), ("sample 2", x2)):
            for i, v in enumerate(x):
                if not np.isfinite(v):
                    raise ValueError(f"{label}, observation {i + 1}: "
                                     f"not finite ({v})")
                if not v > 0.0:
                    raise ValueError(f"{label}, observation {i + 1}: "
                                     f"must be positive ({v})")

    def fit_unrestricted(self, data):
        x1, x2 = self._split(data)
        m1, m2 = float(x1.mean()), float(x2.mean())
        if not (m1 > 0.0 and m2 > 0.0):
            raise FitError(f"{self.name}: nonpositive sample mean")
        return np.array([m2 / m1, np.sqrt(m1 * m2)])

    def fit_restricted(self, data, theta10):
        x1, x2 = self._split(data)
        phi0 = float(np.atleast_1d(theta10)[0])
        if not phi0 > 0.0:
            raise ValueError(f"null ratio must be positive, got {phi0}")
        rp = np.sqrt(phi0)
        beta = 0.5 * (float(x1.mean()) * rp + float(x2.mean()) / rp)
        if not beta > 0.0:
            raise FitError(f"{self.name}: nonpositive pooled scale")
        return np.array([phi0, beta])

    def score(self, data, theta):
        x1, x2 = self._split(data)
        phi, beta = self._check_theta(theta)
        m1, m2 = float(x1.mean()), float(x2.mean())
        rp = np.sqrt(phi)
        return np.array([
            (-m1 / rp + m2 / (phi * rp)) / (4.0 * beta),
            -1.0 / beta + (m1 * rp + m2 / rp) / (2.0 * beta**2)])

    def orthogonal_cumulants(self, theta) -> OrthogonalCumulants:
        f, b = self._check_theta(theta)
        return OrthogonalCumulants(
            kpp=-0.25 / f**2, kppp=0.75 / f**3, kpppp=-45.0 / (16.0 * f**4),
            kpp_p=0.5 / f**3, kppp_p=-2.25 / f**4, kpp_pp=-1.5 / f**4,
            kbb=-1.0 / b**2, kbbb=4.0 / b**3,
            kpbb=0.0, kppb=0.25 / (b * f**2), kppbb=-0.5 / (b**2 * f**2),
            kpp_b=0.0, kppb_b=-0.25 / (b**2 * f**2), kpbb_p=0.0,
            kbb_b=2.0 / b**3, kbb_p=0.0)

    def cumulants(self, theta) -> CumulantBundle:
        f, b = self._check_theta(theta)
        k2 = np.zeros((2, 2))
        k2[0, 0] = -0.25 / f**2
        k2[1, 1] = -1.0 / b**2
        k3 = np.zeros((2, 2, 2))
        k3[0, 0, 0] = 0.75 / f**3
        sym_fill(k3, (0, 0, 1), 0.25 / (b * f**2))
        k3[1, 1, 1] = 4.0 / b**3
        k4 = np.zeros((2, 2, 2, 2))
        k4[0, 0, 0, 0] = -45.0 / (16.0 * f**4)
        sym_fill(k4, (0, 0, 0, 1), -0.75 / (b * f**3))
        sym_fill(k4, (0, 0, 1, 1), -0.5 / (b**2 * f**2))
        k4[1, 1, 1, 1] = -18.0 / b**4
        d2 = np.zeros((2, 2, 2))
        d2[0, 0, 0] = 0.5 / f**3
        d2[1, 1, 1] = 2.0 / b**3
        d3 = np.zeros((2, 2, 2, 2))
        d3[0, 0, 0, 0] = -2.25 / f**4
        sym_fill(d3[0], (0, 0, 1), -0.5 / (b * f**3))
        sym_fill(d3[1], (0, 0, 1), -0.25 / (b**2 * f**2))
        d3[1, 1, 1, 1] = -12.0 / b**4
        dd2 = np.zeros((2, 2, 2, 2))
        pair_fill(dd2, (0, 0), (0, 0), -1.5 / f**4)
        pair_fill(dd2, (1, 1), (1, 1), -6.0 / b**4)
        return CumulantBundle(kappa2=k2, kappa3=k3, kappa4=k4,
                              d_kappa2=d2, d_kappa3=d3, dd_kappa2=dd2)

    def specialized_coefficients(self, theta) -> OrthogonalCoefficients:
        return coefficients_orthogonal(self.orthogonal_cumulants(theta))

    def closed_form_coefficients(self, theta) -> OrthogonalCoefficients:
        self._check_theta(theta)
        return OrthogonalCoefficients(A1=24.0, A2=63.0, A3=45.0,
                                      A1_phi=24.0, A1_phibeta=0.0,
                                      A2_phi=72.0, A2_phibeta=-9.0)

    def batch_statistics(self, theta, theta10, n, rngs, count):
        phi, beta = self._check_theta(theta)
        phi0 = float(np.atleast_1d(theta10)[0])
        if n % 2 != 0:
            raise ValueError(f"total sample size must be even, got {n}")
        m = n // 2
        rp_true = np.sqrt(phi)
        m1 = np.empty(count)
        m2 = np.empty(count)
        for i, rng in zip(range(count), rngs):
            m1[i] = rng.exponential(beta / rp_true, size=m).mean()
            m2[i] = rng.exponential(beta * rp_true, size=m).mean()
        rp = np.sqrt(phi0)
        bt = 0.5 * (m1 * rp + m2 / rp)
        u_phi = (-m1 / rp + m2 / (phi0 * rp)) / (4.0 * bt)
        S = n * u_phi * (m2 / m1 - phi0)
        return np.maximum(S, 0.0), 0
