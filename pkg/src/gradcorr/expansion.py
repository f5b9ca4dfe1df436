"""Expansion coefficients A1, A2, A3 of the gradient statistic's null CDF.

Three routes compute the same triple:

* ``coefficients_general`` -- the full tensor contraction over a
  CumulantBundle for any p, q.  O(p^6) explicit loops, no symmetry
  pruning; p <= 10 in every intended use, so simplicity wins.
* ``coefficients_one_param`` / ``coefficients_expfam`` -- scalar closed
  forms for p = q = 1 models.
* ``coefficients_orthogonal`` -- closed forms for two-parameter models
  with block-diagonal information (kappa_phibeta = 0), testing phi with
  beta as nuisance.

The general contraction was pinned down against the divergence form of
the coefficients (exact rational arithmetic, random bundles over p <= 4
and every q); the closed forms are sympy reductions of that contraction.
The test suite re-derives both checks numerically.

From the A's the CDF expansion weights follow:

    R1 = 3 A3 - 2 A2 + A1,  R2 = A2 - 3 A3,  R3 = A3,
    R0 = -(R1 + R2 + R3),

so that Pr(S <= x) = G_q(x) + (1/24n) sum_i Ri G_{q+2i}(x).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .cumulants import (CumulantBundle, HypothesisSpec, build_geometry,
                        derive_mixed_cumulants)

__all__ = ["ExpansionCoefficients", "OrthogonalCoefficients",
           "OneParamCumulants", "OrthogonalCumulants",
           "coefficients_general", "coefficients_one_param",
           "coefficients_expfam", "coefficients_orthogonal"]


@dataclass(frozen=True)
class ExpansionCoefficients:
    """A1, A2, A3 plus the chi-square mixture weights R0..R3 they imply."""

    A1: float
    A2: float
    A3: float
    R0: float = field(init=False)
    R1: float = field(init=False)
    R2: float = field(init=False)
    R3: float = field(init=False)

    def __post_init__(self):
        r1 = 3.0 * self.A3 - 2.0 * self.A2 + self.A1
        r2 = self.A2 - 3.0 * self.A3
        r3 = self.A3
        object.__setattr__(self, "R1", r1)
        object.__setattr__(self, "R2", r2)
        object.__setattr__(self, "R3", r3)
        object.__setattr__(self, "R0", -(r1 + r2 + r3))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.A1, self.A2, self.A3)


@dataclass(frozen=True)
class OrthogonalCoefficients(ExpansionCoefficients):
    """ExpansionCoefficients with the phi / phi-beta split exposed."""

    A1_phi: float = 0.0
    A1_phibeta: float = 0.0
    A2_phi: float = 0.0
    A2_phibeta: float = 0.0


@dataclass(frozen=True)
class OneParamCumulants:
    """Scalar cumulants of a one-parameter model at phi.

    kpp    = kappa_phiphi            kpp_p   = d kappa_phiphi / d phi
    kppp   = kappa_phiphiphi         kppp_p  = d kappa_phiphiphi / d phi
    kpppp  = kappa_phiphiphiphi      kpp_pp  = d^2 kappa_phiphi / d phi^2
    """

    kpp: float
    kppp: float
    kpppp: float
    kpp_p: float
    kppp_p: float
    kpp_pp: float

    def to_bundle(self) -> CumulantBundle:
        """The equivalent p=1 CumulantBundle (for the general engine)."""
        shape = lambda v, k: np.full((1,) * k, float(v))
        return CumulantBundle(kappa2=shape(self.kpp, 2),
                              kappa3=shape(self.kppp, 3),
                              kappa4=shape(self.kpppp, 4),
                              d_kappa2=shape(self.kpp_p, 3),
                              d_kappa3=shape(self.kppp_p, 4),
                              dd_kappa2=shape(self.kpp_pp, 4))


@dataclass(frozen=True)
class OrthogonalCumulants:
    """The sixteen scalars the orthogonal closed forms consume.

    Naming: p and b in field names stand for the tested parameter phi and
    the nuisance beta; a trailing ``_x`` marks a derivative with respect
    to x.  So kppb_b is d kappa_phiphibeta / d beta and kpp_pp is
    d^2 kappa_phiphi / d phi^2.
    """

    kpp: float
    kppp: float
    kpppp: float
    kpp_p: float
    kppp_p: float
    kpp_pp: float
    kbb: float
    kbbb: float
    kpbb: float
    kppb: float
    kppbb: float
    kpp_b: float
    kppb_b: float
    kpbb_p: float
    kbb_b: float
    kbb_p: float

    def phi_part(self) -> OneParamCumulants:
        return OneParamCumulants(kpp=self.kpp, kppp=self.kppp,
                                 kpppp=self.kpppp, kpp_p=self.kpp_p,
                                 kppp_p=self.kppp_p, kpp_pp=self.kpp_pp)


def coefficients_general(b: CumulantBundle,
                         h: HypothesisSpec) -> ExpansionCoefficients:
    """Full contraction of the cumulant arrays against Kinv, A, M.

    Evaluates the three A-sums term by term.  Two details in the A1 sum
    are easy to get wrong and are fixed here by the divergence-form
    oracle (tests/test_expansion.py): the first summand carries
    m^{jr}(m^{sk} + 2 a^{sk}), not kappa^{s,k} in place of m^{sk}, and
    the kappa_{jrs,u} m^{jr} a^{su} term enters with a minus sign.
    """
    geo = build_geometry(b, h)
    Ki, Am, Mm = geo.Kinv, geo.A, geo.M
    k3, k4 = b.kappa3, b.kappa4
    d2 = b.d_kappa2                                   # [k,l,u] = D_u k_{kl}
    mix = derive_mixed_cumulants(b)
    k31 = mix.kappa_31                                # [j,r,s,u] = k_{jrs,u}
    p = b.p
    idx6 = list(itertools.product(range(p), repeat=6))
    idx4 = list(itertools.product(range(p), repeat=4))

    # k_{jrsu} + k_{j,rsu} + k_{jsu,r} + (k_{ju,rs} + k_{j,u,rs}), the
    # cumulant mix multiplying the final A1 factor
    five = k4 + mix.kappa_13 + k31.transpose(0, 3, 1, 2) + mix.T

    A1 = 0.0
    for j, r, s, k, l, u in idx6:
        c = k3[j, r, s] * k3[k, l, u] * Am[l, u]
        if c != 0.0:
            A1 += 3.0 * c * (3.0 * Mm[j, k] * Am[r, s]
                             + Mm[j, r] * (Mm[s, k] + 2.0 * Am[s, k]))
    for j, r, s, u in idx4:
        A1 -= 6.0 * k31[j, r, s, u] * Mm[j, r] * Am[s, u]
        A1 -= 6.0 * (k4[j, r, s, u] + k31[j, r, s, u]) * (
            Mm[j, r] * Ki[s, u] + 2.0 * Mm[j, u] * Am[r, s])
        A1 += 12.0 * five[j, r, s, u] * (Ki[j, s] * Ki[u, r]
                                         - Am[j, s] * Am[u, r])
    for j, r, s, k, l, u in idx6:
        dklu = d2[k, l, u]                            # k_{klu} + k_{kl,u}
        if dklu == 0.0:
            continue
        inner = 2.0 * d2[j, r, s] * (
            Ki[s, j] * Ki[r, k] * Ki[l, u] - Am[s, j] * Am[r, k] * Am[l, u]
            + Ki[s, k] * Ki[l, j] * Ki[r, u] - Am[s, k] * Am[l, j] * Am[r, u])
        inner -= k3[j, r, s] * (
            (Ki[s, u] + Am[s, u]) * (Ki[j, k] * Ki[l, r] - Am[j, k] * Am[l, r])
            + Mm[j, r] * (Am[s, k] * Am[l, u] + Ki[s, k] * Ki[l, u])
            + 2.0 * Am[r, s] * (Ki[j, k] * Ki[l, u] - Am[j, k] * Am[l, u])
            + 2.0 * Am[r, k] * Am[l, s] * Mm[j, u])
        A1 += 6.0 * dklu * inner

    A2 = 0.0
    for j, r, s, k, l, u in idx6:
        c = k3[j, r, s]
        if c == 0.0:
            continue
        A2 -= 3.0 * c * (
            k3[k, l, u] * (Mm[j, r] * (Mm[s, k] * Am[l, u]
                                       + 0.75 * Mm[s, k] * Mm[l, u]
                                       + 3.0 * Mm[k, l] * Am[s, u])
                           + 0.5 * Mm[j, k] * Mm[r, l] * Mm[s, u])
            - 2.0 * d2[k, l, u] * (
                Mm[s, u] * (Ki[j, k] * Ki[l, r] - Am[j, k] * Am[l, r])
                + Mm[j, r] * (Ki[s, k] * Ki[l, u] - Am[s, k] * Am[l, u])))
    for j, r, s, u in idx4:
        A2 += 3.0 * (k4[j, r, s, u] + 2.0 * k31[j, r, s, u]) \
            * Mm[j, r] * Mm[s, u]

    A3 = 0.0
    for j, r, s, k, l, u in idx6:
        c = k3[j, r, s] * k3[k, l, u]
        if c != 0.0:
            A3 += (c / 12.0) * (9.0 * Mm[j, r] * Mm[s, k] * Mm[l, u]
                                + 6.0 * Mm[j, k] * Mm[r, l] * Mm[s, u])

    return ExpansionCoefficients(A1=A1, A2=A2, A3=A3)


def coefficients_one_param(c: OneParamCumulants) -> ExpansionCoefficients:
    """Scalar closed forms for p = q = 1."""
    k2 = c.kpp
    if k2 >= 0:
        raise ValueError(f"kappa_phiphi must be negative, got {k2}")
    k2c = k2 ** 3
    A1 = (6.0 * k2 * (2.0 * c.kpp_pp - c.kppp_p)
          + 12.0 * c.kpp_p * (c.kppp - 2.0 * c.kpp_p)) / k2c
    A2 = (12.0 * k2 * (2.0 * c.kppp_p - c.kpppp)
          + 3.0 * c.kppp * (5.0 * c.kppp - 16.0 * c.kpp_p)) / (4.0 * k2c)
    A3 = -5.0 * c.kppp ** 2 / (4.0 * k2c)
    assert A3 >= 0.0
    return ExpansionCoefficients(A1=A1, A2=A2, A3=A3)


def coefficients_expfam(a1: float, a2: float, a3: float,
                        b1: float, b2: float, b3: float) -> ExpansionCoefficients:
    """Closed forms for the one-parameter exponential family.

    Density exp{-alpha(phi) d(x) + v(x)} / xi(phi); the arguments are
    alpha', alpha'', alpha''' and beta', beta'', beta''' at phi0, where
    beta = xi'/(xi alpha') = -E d(x).
    """
    if a1 == 0.0 or b1 == 0.0:
        raise ValueError("alpha' and beta' must both be nonzero")
    ra = a2 / a1
    rb = b2 / b1
    A1 = 6.0 / (a1 * b1) * (2.0 * rb ** 2 + ra * rb - b3 / b1)
    A2 = 3.0 / (a1 * b1) * (rb * (4.0 * ra - rb / 4.0)
                            + 3.0 * (ra ** 2 + rb ** 2)
                            - (a3 / a1 + b3 / b1))
    A3 = 5.0 / (a1 * b1) * (ra + rb / 2.0) ** 2
    return ExpansionCoefficients(A1=A1, A2=A2, A3=A3)


def coefficients_orthogonal(c: OrthogonalCumulants) -> OrthogonalCoefficients:
    """Closed forms for orthogonal (phi, beta) models testing phi.

    Orthogonality kappa_phibeta = 0 is assumed by contract, not checked;
    the formulas are invalid without it.
    """
    if c.kpp >= 0 or c.kbb >= 0:
        raise ValueError("kappa_phiphi and kappa_betabeta must be negative")
    phi = coefficients_one_param(c.phi_part())
    kpp, kbb = c.kpp, c.kbb
    A1pb = (3.0 * (4.0 * c.kppb * c.kpp_b
                   + c.kpbb * (4.0 * c.kpp_p - c.kppp)) / (kpp ** 2 * kbb)
            + 6.0 * (c.kppbb - 2.0 * c.kppb_b - 2.0 * c.kpbb_p) / (kpp * kbb)
            + 3.0 * (2.0 * c.kppb * (2.0 * c.kbb_b - c.kbbb)
                     + c.kpbb * (4.0 * c.kbb_p - 3.0 * c.kpbb))
            / (kpp * kbb ** 2))
    A2pb = (3.0 * c.kppp * c.kpbb + 9.0 * c.kppb ** 2) / (kpp ** 2 * kbb)
    A3 = phi.A3
    assert A3 >= 0.0
    return OrthogonalCoefficients(A1=phi.A1 + A1pb, A2=phi.A2 + A2pb, A3=A3,
                                  A1_phi=phi.A1, A1_phibeta=A1pb,
                                  A2_phi=phi.A2, A2_phibeta=A2pb)
