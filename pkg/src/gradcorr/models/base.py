"""Model family interface and the gradient statistic.

A family bundles everything a test or a simulation needs: a sampler, the
two maximum likelihood fits, the per-observation score, the analytic
cumulant arrays, and (where available) hard-coded closed-form expansion
coefficients.  Data is a 1-D float array for one-sample families; the
two-sample family takes a pair of equal-length arrays and counts both
samples in n.

The statistic itself is the inner product of the restricted score with
the tested-component estimate shift,

    S = n * U_1(theta_tilde)' (theta_hat_1 - theta10),

using that the nuisance score components vanish at theta_tilde.  S is
asymptotically nonnegative but finite samples can push it slightly below
zero through MLE tolerance (or, at very small n, through genuine
finite-sample sign disagreement of the two factors); the value is
clamped to zero with a flag and the raw number kept.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from ..cumulants import CumulantBundle, HypothesisSpec
from ..expansion import (ExpansionCoefficients, coefficients_general)

__all__ = ["ModelFamily", "GradientStatistic", "FitError",
           "gradient_statistic"]


class FitError(RuntimeError):
    """Maximum likelihood fit failed to converge."""


@dataclass(frozen=True)
class GradientStatistic:
    """Gradient test statistic with its sample size."""

    value: float
    n: int
    raw: float
    clamped: bool = False


class ModelFamily(ABC):
    """Interface every built-in family implements."""

    name: str = ""
    p: int = 1
    q: int = 1
    samples: int = 1            # independent samples per data set
    # display names of the components of theta, and a sensible default
    # evaluation point (used by the command line when none is given)
    param_names: tuple = ("phi",)
    default_theta: tuple = (1.0,)

    @abstractmethod
    def sample(self, theta, n: int, rng: np.random.Generator):
        """Draw n observations at theta."""

    @abstractmethod
    def fit_unrestricted(self, data) -> np.ndarray:
        """Full MLE theta_hat."""

    @abstractmethod
    def fit_restricted(self, data, theta10) -> np.ndarray:
        """MLE theta_tilde with the first q components fixed at theta10."""

    @abstractmethod
    def score(self, data, theta) -> np.ndarray:
        """Per-observation-scale score vector U(theta)."""

    @abstractmethod
    def cumulants(self, theta) -> CumulantBundle:
        """Analytic per-observation cumulant arrays at theta."""

    def closed_form_coefficients(self, theta) -> ExpansionCoefficients:
        """Hard-coded coefficient values, where known in closed form."""
        raise NotImplementedError(f"{self.name} has no closed-form coefficients")

    def specialized_coefficients(self, theta) -> ExpansionCoefficients:
        """The scalar-formula route (one-parameter or orthogonal)."""
        raise NotImplementedError(f"{self.name} has no specialized route")

    def validate_data(self, data) -> None:
        """Raise ValueError naming the first offending observation."""

    def nobs(self, data) -> int:
        return len(data)

    def hypothesis(self, theta10) -> HypothesisSpec:
        theta10 = np.atleast_1d(np.asarray(theta10, dtype=float))
        return HypothesisSpec(p=self.p, q=self.q, theta10=tuple(theta10))

    def general_coefficients(self, theta) -> ExpansionCoefficients:
        """Full tensor-contraction route on this family's cumulants."""
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        dummy_null = tuple(theta[:self.q])
        return coefficients_general(self.cumulants(theta),
                                    HypothesisSpec(p=self.p, q=self.q,
                                                   theta10=dummy_null))

    def batch_statistics(self, theta, theta10, n, rngs, count):
        """S per replicate (NaN where a fit failed) and the failure count.

        Families with closed-form fits override this with a vectorized
        path; equality with the generic loop is a tested property.
        """
        theta10 = np.atleast_1d(np.asarray(theta10, dtype=float))
        S = np.empty(count)
        failed = 0
        for i, rng in zip(range(count), rngs):
            data = self.sample(theta, n, rng)
            try:
                S[i] = gradient_statistic(self, data, theta10).value
            except FitError:
                S[i] = np.nan
                failed += 1
        return S, failed


def gradient_statistic(model: ModelFamily, data, theta10) -> GradientStatistic:
    """S = n U_1(theta_tilde)'(theta_hat_1 - theta10), clamped at zero."""
    theta10 = np.atleast_1d(np.asarray(theta10, dtype=float))
    if theta10.shape != (model.q,):
        raise ValueError(f"theta10 must have length q={model.q}")
    n = model.nobs(data)
    theta_tilde = np.atleast_1d(model.fit_restricted(data, theta10))
    theta_hat = np.atleast_1d(model.fit_unrestricted(data))
    u1 = np.atleast_1d(model.score(data, theta_tilde))[:model.q]
    raw = float(n * u1 @ (theta_hat[:model.q] - theta10))
    if raw < 0.0:
        return GradientStatistic(value=0.0, n=n, raw=raw, clamped=True)
    return GradientStatistic(value=raw, n=n, raw=raw, clamped=False)
