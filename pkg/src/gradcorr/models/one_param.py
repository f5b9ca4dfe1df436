"""One-parameter exponential-family models.

Each family writes its density as f(x; phi) = xi(phi) exp{-alpha(phi) d(x) + gamma(x)},
so the per-observation score is U = -alpha'(phi)(d(x) + beta(phi)) with
beta = -(log xi)'/alpha' and E d(X) = -beta(phi).  The full MLE solves
beta(phi_hat) = -dbar, which every family here inverts in closed form,
and the statistic reduces to S = n (phi0 - phi_hat) alpha'(phi0) (beta(phi0) + dbar).

Cumulant arrays come from the chain rule on ell = -alpha d + log xi:

    k_pp    = -a1 b1            k_pp^(p)   = -(a2 b1 + a1 b2)
    k_ppp   = -(2 a2 b1 + a1 b2)  k_ppp^(p) = -(2 a3 b1 + 3 a2 b2 + a1 b3)
    k_pppp  = -(3 a2 b2 + 3 a3 b1 + a1 b3)  k_pp^(pp) = -(a3 b1 + 2 a2 b2 + a1 b3)

where a_i, b_i are the i-th derivatives of alpha and beta.  Ten concrete
families are provided as factory functions; fixed shape constants (a known
mean, rate index, support endpoint) are bound at construction time.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..cumulants import CumulantBundle
from ..expansion import (ExpansionCoefficients, OneParamCumulants,
                         coefficients_one_param)
from .base import FitError, ModelFamily

__all__ = ["OneParamExpFamily", "exponential", "normal_mean_known",
           "normal_variance_known", "inverse_normal_mean_known",
           "inverse_normal_shape_known", "gamma_rate",
           "truncated_extreme_value", "pareto_shape", "power_shape",
           "laplace_scale"]


@dataclass(frozen=True)
class _FamilySpec:
    name: str
    d: Callable[[np.ndarray], np.ndarray]
    alpha_derivs: Callable[[float], tuple]    # (a1, a2, a3) at phi
    beta: Callable[[float], float]
    beta_derivs: Callable[[float], tuple]     # (b1, b2, b3) at phi
    mle_from_dbar: Callable[[float], float]
    sampler: Callable[[float, int, np.random.Generator], np.ndarray]
    closed_A: Callable[[float], tuple]
    data_error: Callable[[float], str]        # reason string, or ""
    phi_min: float = 0.0                      # open lower bound for phi
    param_name: str = "phi"
    default_phi: float = 1.0


class OneParamExpFamily(ModelFamily):
    """Adapter turning the closures above into the ModelFamily interface."""

    p = 1
    q = 1

    def __init__(self, spec: _FamilySpec):
        self._spec = spec
        self.name = spec.name
        self.param_names = (spec.param_name,)
        self.default_theta = (spec.default_phi,)

    def _check_phi(self, theta) -> float:
        phi = float(np.atleast_1d(theta)[0])
        if not phi > self._spec.phi_min:
            raise ValueError(f"{self.name}: parameter must exceed "
                             f"{self._spec.phi_min}, got {phi}")
        return phi

    def sample(self, theta, n, rng):
        return self._spec.sampler(self._check_phi(theta), n, rng)

    def validate_data(self, data):
        x = np.asarray(data, dtype=float)
        if x.ndim != 1:
            raise ValueError(f"{self.name}: data must be one-dimensional")
        for i, v in enumerate(x):
            if not np.isfinite(v):
                raise ValueError(f"observation {i + 1}: not finite ({v})")
            reason = self._spec.data_error(v)
            if reason:
                raise ValueError(f"observation {i + 1}: {reason} ({v})")

    def fit_unrestricted(self, data):
        dbar = float(np.mean(self._spec.d(np.asarray(data, dtype=float))))
        phi_hat = self._spec.mle_from_dbar(dbar)
        if not np.isfinite(phi_hat) or not phi_hat > self._spec.phi_min:
            raise FitError(f"{self.name}: MLE left the parameter space "
                           f"(dbar={dbar})")
        return np.array([phi_hat])

    def fit_restricted(self, data, theta10):
        return np.array([self._check_phi(theta10)])

    def score(self, data, theta):
        phi = self._check_phi(theta)
        dbar = float(np.mean(self._spec.d(np.asarray(data, dtype=float))))
        a1, _, _ = self._spec.alpha_derivs(phi)
        return np.array([-a1 * (dbar + self._spec.beta(phi))])

    def scalar_cumulants(self, theta) -> OneParamCumulants:
        phi = self._check_phi(theta)
        a1, a2, a3 = self._spec.alpha_derivs(phi)
        b1, b2, b3 = self._spec.beta_derivs(phi)
        return OneParamCumulants(
            kpp=-a1 * b1,
            kppp=-(2.0 * a2 * b1 + a1 * b2),
            kpppp=-(3.0 * a2 * b2 + 3.0 * a3 * b1 + a1 * b3),
            kpp_p=-(a2 * b1 + a1 * b2),
            kppp_p=-(2.0 * a3 * b1 + 3.0 * a2 * b2 + a1 * b3),
            kpp_pp=-(a3 * b1 + 2.0 * a2 * b2 + a1 * b3),
        )

    def alpha_beta_derivatives(self, theta) -> tuple:
        """(alpha', alpha'', alpha''', beta', beta'', beta''') at theta."""
        phi = self._check_phi(theta)
        return self._spec.alpha_derivs(phi) + self._spec.beta_derivs(phi)

    def cumulants(self, theta) -> CumulantBundle:
        return self.scalar_cumulants(theta).to_bundle()

    def specialized_coefficients(self, theta) -> ExpansionCoefficients:
        return coefficients_one_param(self.scalar_cumulants(theta))

    def closed_form_coefficients(self, theta) -> ExpansionCoefficients:
        phi = self._check_phi(theta)
        a1, a2, a3 = self._spec.closed_A(phi)
        return ExpansionCoefficients(A1=a1, A2=a2, A3=a3)

    def batch_statistics(self, theta, theta10, n, rngs, count):
        phi = self._check_phi(theta)
        phi0 = self._check_phi(theta10)
        spec = self._spec
        dbar = np.empty(count)
        for i, rng in zip(range(count), rngs):
            dbar[i] = float(np.mean(spec.d(spec.sampler(phi, n, rng))))
        phi_hat = np.array([spec.mle_from_dbar(v) for v in dbar])
        bad = ~(np.isfinite(phi_hat) & (phi_hat > spec.phi_min))
        a1 = spec.alpha_derivs(phi0)[0]
        with np.errstate(invalid="ignore"):
            S = n * (phi0 - phi_hat) * a1 * (spec.beta(phi0) + dbar)
            S = np.where(S < 0.0, 0.0, S)
        S[bad] = np.nan
        return S, int(bad.sum())


def _positive(v: float) -> str:
    return "" if v > 0.0 else "must be positive"


def _any_finite(v: float) -> str:
    return ""


def exponential() -> OneParamExpFamily:
    """Exponential with mean phi."""
    return OneParamExpFamily(_FamilySpec(
        name="exponential",
        d=lambda x: x,
        alpha_derivs=lambda phi: (-1.0 / phi**2, 2.0 / phi**3, -6.0 / phi**4),
        beta=lambda phi: -phi,
        beta_derivs=lambda phi: (-1.0, 0.0, 0.0),
        mle_from_dbar=lambda dbar: dbar,
        sampler=lambda phi, n, rng: rng.exponential(phi, size=n),
        closed_A=lambda phi: (0.0, 18.0, 20.0),
        data_error=_positive,
    ))


def normal_mean_known(mu: float = 0.0) -> OneParamExpFamily:
    """Normal with known mean; the tested parameter is the variance."""
    return OneParamExpFamily(_FamilySpec(
        name="normal-mean-known",
        d=lambda x: (x - mu)**2,
        alpha_derivs=lambda phi: (-0.5 / phi**2, 1.0 / phi**3, -3.0 / phi**4),
        beta=lambda phi: -phi,
        beta_derivs=lambda phi: (-1.0, 0.0, 0.0),
        mle_from_dbar=lambda dbar: dbar,
        sampler=lambda phi, n, rng: rng.normal(mu, np.sqrt(phi), size=n),
        closed_A=lambda phi: (0.0, 36.0, 40.0),
        data_error=_any_finite,
    ))


def normal_variance_known(variance: float = 1.0) -> OneParamExpFamily:
    """Normal with known variance; the tested parameter is the mean."""
    if not variance > 0.0:
        raise ValueError("variance must be positive")
    return OneParamExpFamily(_FamilySpec(
        name="normal-variance-known",
        d=lambda x: x,
        alpha_derivs=lambda mu: (-1.0 / variance, 0.0, 0.0),
        beta=lambda mu: -mu,
        beta_derivs=lambda mu: (-1.0, 0.0, 0.0),
        mle_from_dbar=lambda dbar: dbar,
        sampler=lambda mu, n, rng: rng.normal(mu, np.sqrt(variance), size=n),
        closed_A=lambda mu: (0.0, 0.0, 0.0),
        data_error=_any_finite,
        phi_min=-np.inf,
        param_name="mu",
        default_phi=0.0,
    ))


def inverse_normal_mean_known(mu: float = 1.0) -> OneParamExpFamily:
    """Inverse Gaussian with known mean; the tested parameter is the shape."""
    if not mu > 0.0:
        raise ValueError("mu must be positive")
    return OneParamExpFamily(_FamilySpec(
        name="inverse-normal-mean-known",
        d=lambda x: (x - mu)**2 / (2.0 * mu**2 * x),
        alpha_derivs=lambda phi: (1.0, 0.0, 0.0),
        beta=lambda phi: -0.5 / phi,
        beta_derivs=lambda phi: (0.5 / phi**2, -1.0 / phi**3, 3.0 / phi**4),
        mle_from_dbar=lambda dbar: 0.5 / dbar if dbar > 0.0 else np.nan,
        sampler=lambda phi, n, rng: rng.wald(mu, phi, size=n),
        closed_A=lambda phi: (24.0, 30.0, 10.0),
        data_error=_positive,
    ))


def inverse_normal_shape_known(shape: float = 1.0) -> OneParamExpFamily:
    """Inverse Gaussian with known shape; the tested parameter is the mean."""
    if not shape > 0.0:
        raise ValueError("shape must be positive")
    return OneParamExpFamily(_FamilySpec(
        name="inverse-normal-shape-known",
        d=lambda x: x,
        alpha_derivs=lambda mu: (-shape / mu**3, 3.0 * shape / mu**4,
                                 -12.0 * shape / mu**5),
        beta=lambda mu: -mu,
        beta_derivs=lambda mu: (-1.0, 0.0, 0.0),
        mle_from_dbar=lambda dbar: dbar,
        sampler=lambda mu, n, rng: rng.wald(mu, shape, size=n),
        closed_A=lambda mu: (0.0, 45.0 * mu / shape, 45.0 * mu / shape),
        data_error=_positive,
        param_name="mu",
    ))


def gamma_rate(k: float = 1.0) -> OneParamExpFamily:
    """Gamma with known index k; the tested parameter is the rate."""
    if not k > 0.0:
        raise ValueError("k must be positive")
    return OneParamExpFamily(_FamilySpec(
        name="gamma-rate",
        d=lambda x: x,
        alpha_derivs=lambda phi: (1.0, 0.0, 0.0),
        beta=lambda phi: -k / phi,
        beta_derivs=lambda phi: (k / phi**2, -2.0 * k / phi**3,
                                 6.0 * k / phi**4),
        mle_from_dbar=lambda dbar: k / dbar if dbar > 0.0 else np.nan,
        sampler=lambda phi, n, rng: rng.gamma(k, 1.0 / phi, size=n),
        closed_A=lambda phi: (12.0 / k, 15.0 / k, 5.0 / k),
        data_error=_positive,
    ))


def truncated_extreme_value() -> OneParamExpFamily:
    """Truncated extreme value: exp(X) - 1 is exponential with mean phi."""
    return OneParamExpFamily(_FamilySpec(
        name="truncated-extreme-value",
        d=lambda x: np.expm1(x),
        alpha_derivs=lambda phi: (-1.0 / phi**2, 2.0 / phi**3, -6.0 / phi**4),
        beta=lambda phi: -phi,
        beta_derivs=lambda phi: (-1.0, 0.0, 0.0),
        mle_from_dbar=lambda dbar: dbar,
        sampler=lambda phi, n, rng: np.log1p(rng.exponential(phi, size=n)),
        closed_A=lambda phi: (0.0, 12.0, 20.0),
        data_error=_positive,
    ))


def pareto_shape(k: float = 1.0) -> OneParamExpFamily:
    """Pareto on (k, inf) with known scale k; the tested parameter is the shape."""
    if not k > 0.0:
        raise ValueError("k must be positive")
    return OneParamExpFamily(_FamilySpec(
        name="pareto-shape",
        d=lambda x: np.log(x),
        alpha_derivs=lambda phi: (1.0, 0.0, 0.0),
        beta=lambda phi: -1.0 / phi - np.log(k),
        beta_derivs=lambda phi: (1.0 / phi**2, -2.0 / phi**3, 6.0 / phi**4),
        mle_from_dbar=lambda dbar: (1.0 / (dbar - np.log(k))
                                    if dbar > np.log(k) else np.nan),
        sampler=lambda phi, n, rng: k * np.exp(rng.exponential(1.0 / phi,
                                                               size=n)),
        closed_A=lambda phi: (12.0, 15.0, 5.0),
        data_error=lambda v: "" if v > k else f"must exceed the scale {k}",
    ))


def power_shape(theta: float = 1.0) -> OneParamExpFamily:
    """Power distribution on (0, theta) with known endpoint."""
    if not theta > 0.0:
        raise ValueError("theta must be positive")
    return OneParamExpFamily(_FamilySpec(
        name="power-shape",
        d=lambda x: np.log(x),
        alpha_derivs=lambda phi: (-1.0, 0.0, 0.0),
        beta=lambda phi: 1.0 / phi - np.log(theta),
        beta_derivs=lambda phi: (-1.0 / phi**2, 2.0 / phi**3, -6.0 / phi**4),
        mle_from_dbar=lambda dbar: (1.0 / (np.log(theta) - dbar)
                                    if dbar < np.log(theta) else np.nan),
        sampler=lambda phi, n, rng: theta * np.exp(-rng.exponential(1.0 / phi,
                                                                    size=n)),
        closed_A=lambda phi: (12.0, 15.0, 5.0),
        data_error=lambda v: ("" if 0.0 < v < theta
                              else f"must lie strictly inside (0, {theta})"),
    ))


def laplace_scale(center: float = 0.0) -> OneParamExpFamily:
    """Laplace with known center; the tested parameter is the scale."""
    return OneParamExpFamily(_FamilySpec(
        name="laplace-scale",
        d=lambda x: np.abs(x - center),
        alpha_derivs=lambda theta: (-1.0 / theta**2, 2.0 / theta**3,
                                    -6.0 / theta**4),
        beta=lambda theta: -theta,
        beta_derivs=lambda theta: (-1.0, 0.0, 0.0),
        mle_from_dbar=lambda dbar: dbar if dbar > 0.0 else np.nan,
        sampler=lambda theta, n, rng: rng.laplace(center, theta, size=n),
        closed_A=lambda theta: (0.0, 18.0, 20.0),
        data_error=_any_finite,
        param_name="theta",
    ))
