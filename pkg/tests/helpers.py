"""Shared test-side reparameterizations of the correction formulas.

The production functions take an integer sample size n.  The first-order
cancellation check needs the same formulas as smooth functions of
eps = 1/n so that a derivative at eps = 0 makes sense; these copies do
exactly that substitution and nothing else.  A consistency test pins
them to the production code at eps = 1/n.
"""

from gradcorr.expansion import ExpansionCoefficients
from gradcorr.special import chi2_cdf, chi2_quantile


def expanded_cdf_eps(x: float, coef: ExpansionCoefficients, q: int,
                     eps: float) -> float:
    tail = sum(r * chi2_cdf(x, q + 2 * i)
               for i, r in enumerate((coef.R0, coef.R1, coef.R2, coef.R3)))
    return chi2_cdf(x, q) + eps * tail / 24.0


def modified_quantile_eps(gamma: float, coef: ExpansionCoefficients, q: int,
                          eps: float) -> float:
    x = chi2_quantile(1.0 - gamma, q)
    a = eps * coef.A3 / (12.0 * q * (q + 2) * (q + 4))
    b = eps * (coef.A2 - 2.0 * coef.A3) / (12.0 * q * (q + 2))
    c = eps * (coef.A1 - coef.A2 + coef.A3) / (12.0 * q)
    return x * (1.0 + c + b * x + a * x * x)


def cancellation_derivative(coef: ExpansionCoefficients, q: int,
                            gamma: float, step: float = 1e-5) -> float:
    """d/d eps at 0 of the expanded CDF evaluated at the modified quantile.

    The modified quantile shifts the percentile by +delta/n at the same
    time as the expanded CDF shifts the distribution by -delta/n, so the
    composition g(eps) must be flat at eps = 0; the derivative is the
    size of any leftover first-order term.
    """
    def g(eps: float) -> float:
        return expanded_cdf_eps(modified_quantile_eps(gamma, coef, q, eps),
                                coef, q, eps)
    return (g(step) - g(-step)) / (2.0 * step)
