"""Cumulant arrays of log-likelihood derivatives and the information geometry.

A model is summarized, at a parameter point, by six dense arrays of joint
cumulants of the per-observation log-likelihood derivatives (sample-size
scaling lives in the statistic formulas, never here):

    kappa2[j,r]      = E(U_jr)
    kappa3[j,r,s]    = E(U_jrs)
    kappa4[j,r,s,u]  = E(U_jrsu)
    d_kappa2[j,r,s]  = D_s kappa2[j,r]
    d_kappa3[j,r,s,u]  = D_j kappa3[r,s,u]   (derivative index FIRST)
    dd_kappa2[j,r,s,u] = D_j D_r kappa2[s,u] (derivative pair FIRST)

Mixed cumulants such as kappa_{jr,s} = cum(U_jr, U_s) are not stored; they
are all recoverable from the arrays above through the functional relations
between cumulants and their parameter derivatives, which is what
derive_mixed_cumulants does.  The genuinely bivariate covariance
kappa_{jr,su} = cum(U_jr, U_su) is never needed at all: the expansion
consumes it only through the sum T_jrsu = kappa_{ju,rs} + kappa_{j,u,rs},
and expanding kappa_{j,u,rs} via

    kappa_{j,u,rs} = kappa_{jurs} - kappa_{jrs}^{(u)} - kappa_{urs}^{(j)}
                     + kappa_{rs}^{(ju)} - kappa_{ju,rs}

cancels it, leaving T in terms of stored arrays only.  (Dropping the
-kappa_{urs}^{(j)} term breaks the cancellation: the assembled coefficient
then disagrees with its divergence form on every test bundle, which is how
the expression above was pinned down by exact rational arithmetic.)
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["HypothesisSpec", "CumulantBundle", "DerivedCumulants",
           "FisherGeometry", "IllConditionedInformationError",
           "derive_mixed_cumulants", "build_geometry"]

_SYM_TOL = 1e-9


class IllConditionedInformationError(ValueError):
    """Information matrix is singular or numerically untrustworthy."""


@dataclass(frozen=True)
class HypothesisSpec:
    """Null hypothesis theta_1 = theta10 on the first q of p components."""

    p: int
    q: int
    theta10: tuple[float, ...] = ()

    def __post_init__(self):
        if not 1 <= self.q <= self.p:
            raise ValueError(f"need 1 <= q <= p, got q={self.q}, p={self.p}")
        if self.theta10 and len(self.theta10) != self.q:
            raise ValueError("theta10 must have length q")


def _sym_ok(arr: np.ndarray, axes: tuple[int, ...]) -> bool:
    """True when arr is symmetric under every transposition of the given axes."""
    for i in range(len(axes)):
        for k in range(i + 1, len(axes)):
            perm = list(range(arr.ndim))
            perm[axes[i]], perm[axes[k]] = perm[axes[k]], perm[axes[i]]
            if not np.allclose(arr, arr.transpose(perm), atol=_SYM_TOL,
                               rtol=_SYM_TOL):
                return False
    return True


@dataclass(frozen=True)
class CumulantBundle:
    """Per-observation cumulant arrays; see module docstring for layouts."""

    kappa2: np.ndarray
    kappa3: np.ndarray
    kappa4: np.ndarray
    d_kappa2: np.ndarray
    d_kappa3: np.ndarray
    dd_kappa2: np.ndarray

    def __post_init__(self):
        p = self.p
        shapes = {"kappa2": (p, p), "kappa3": (p, p, p),
                  "kappa4": (p, p, p, p), "d_kappa2": (p, p, p),
                  "d_kappa3": (p, p, p, p), "dd_kappa2": (p, p, p, p)}
        for name, want in shapes.items():
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != want:
                raise ValueError(f"{name} has shape {arr.shape}, expected {want}")
            object.__setattr__(self, name, arr)
        checks = [("kappa2", (0, 1)), ("kappa3", (0, 1, 2)),
                  ("kappa4", (0, 1, 2, 3)), ("d_kappa2", (0, 1)),
                  ("d_kappa3", (1, 2, 3)), ("dd_kappa2", (2, 3))]
        for name, axes in checks:
            if not _sym_ok(getattr(self, name), axes):
                raise ValueError(f"{name} violates its index symmetry")
        if np.any(np.linalg.eigvalsh(self.kappa2) >= 0):
            raise ValueError("kappa2 must be negative definite")

    @property
    def p(self) -> int:
        return np.asarray(self.kappa2).shape[0]


@dataclass(frozen=True)
class DerivedCumulants:
    """Mixed cumulants recovered from a CumulantBundle.

    kappa_21[j,r,s]   = kappa_{jr,s}  = cum(U_jr, U_s)
    kappa_31[j,r,s,u] = kappa_{jrs,u} = cum(U_jrs, U_u)
    kappa_13[j,r,s,u] = kappa_{j,rsu} = cum(U_j, U_rsu)
    T[j,r,s,u]        = kappa_{ju,rs} + kappa_{j,u,rs}
    """

    kappa_21: np.ndarray
    kappa_31: np.ndarray
    kappa_13: np.ndarray
    T: np.ndarray


def derive_mixed_cumulants(b: CumulantBundle) -> DerivedCumulants:
    """Recover the mixed cumulants the expansion needs from a bundle."""
    # kappa_{jrs}^{(u)} reindexed so the derivative index comes last,
    # kappa_{urs}^{(j)} with j first, kappa_{rs}^{(ju)} with (j,u) outer
    d3_u_last = b.d_kappa3.transpose(1, 2, 3, 0)      # [j,r,s,u] = D_u k_{jrs}
    d3_j_first = b.d_kappa3.transpose(0, 2, 3, 1)     # [j,r,s,u] = D_j k_{urs}
    dd2_ju = b.dd_kappa2.transpose(0, 2, 3, 1)        # [j,r,s,u] = D_jD_u k_{rs}
    kappa_21 = b.d_kappa2 - b.kappa3
    kappa_31 = d3_u_last - b.kappa4
    kappa_13 = b.d_kappa3 - b.kappa4                  # [j,r,s,u] = k_{j,rsu}
    T = b.kappa4 - d3_u_last - d3_j_first + dd2_ju
    return DerivedCumulants(kappa_21=kappa_21, kappa_31=kappa_31,
                            kappa_13=kappa_13, T=T)


@dataclass(frozen=True)
class FisherGeometry:
    """K = -kappa2, its inverse, the nuisance block inverse A, and M = Kinv - A."""

    K: np.ndarray
    Kinv: np.ndarray
    A: np.ndarray
    M: np.ndarray
    q: int = field(default=0)


def build_geometry(b: CumulantBundle, h: HypothesisSpec) -> FisherGeometry:
    """Information geometry induced by the hypothesis partition.

    A is zero except for the lower-right (p-q)x(p-q) block, which holds
    the inverse of the nuisance sub-information K22; with q = p there is
    no nuisance block and A = 0, M = Kinv.
    """
    if h.p != b.p:
        raise ValueError(f"bundle has p={b.p} but hypothesis has p={h.p}")
    K = -b.kappa2
    if np.linalg.cond(K) >= 1e12:
        raise IllConditionedInformationError(
            "information matrix condition number exceeds 1e12")
    Kinv = np.linalg.inv(K)
    A = np.zeros_like(K)
    if h.q < h.p:
        K22 = K[h.q:, h.q:]
        if np.linalg.cond(K22) >= 1e12:
            raise IllConditionedInformationError(
                "nuisance information block condition number exceeds 1e12")
        A[h.q:, h.q:] = np.linalg.inv(K22)
    M = Kinv - A
    return FisherGeometry(K=K, Kinv=Kinv, A=A, M=M, q=h.q)
