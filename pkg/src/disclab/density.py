"""Optimal one-dimensional sampling densities.

Solves the variational problem

    minimize  J(rho) = int_0^1 ( int_0^x 1/rho(t) dt )^{p/2} dx
    subject to rho >= 0,  int_0^1 rho = 1,

whose minimizer rho* is the optimal marginal for importance sampling of the
generalized L_p-discrepancy.  The minimizer satisfies the implicit equation

    t = (1 - rho * p/(p+1))^{2/p} * (1 + rho * 2/(p+1)),           (*)

with closed forms for p = 1 (trigonometric Cardano branch) and p = 2
(rho*(t) = (3/2) sqrt(1-t)).  For other p the curve is obtained by bracketed
root-finding in rho at each requested t.

Useful facts used throughout (all following from the first integral of the
Euler-Lagrange equation):

    S(x)  := int_0^x 1/rho*      = S1 * (1 - rho*(x) * p/(p+1))^{2/p}
    S1    := S(1)                = (p+2)/(p+1)
    J_min                        = (1/(p+1)) * ((p+2)/(p+1))^{p/2}
    rho*(0) = (p+1)/p,  rho*(1) = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .errors import (
    InvalidArgumentError,
    IntegrationFailureError,
    NumericalInconsistencyError,
    SolverFailureError,
)

__all__ = [
    "Density1D",
    "VariationalSolution",
    "optimal_density",
    "residual_eq_rho",
    "curve_residual",
    "S_of_x",
    "J_functional",
    "cdf_inverse",
    "variational_solution",
]

P_MAX = 1e6
DEFAULT_TABLE_NODES = 4096


def rho_at_zero(p: float) -> float:
    """Boundary value rho*(0) = (p+1)/p, the upper end of the rho range."""
    return (p + 1.0) / p


def residual_eq_rho(p: float, t: float, rho_val: float) -> float:
    """Residual of the implicit optimal-density equation (*) at (t, rho_val).

    Returns t - (1 - rho*p/(p+1))^(2/p) * (1 + rho*2/(p+1)); zero exactly
    when (t, rho_val) lies on the optimal-density curve.  rho_val may range
    over the full closed interval [0, (p+1)/p]; beyond the upper end the base
    of the 2/p power turns negative and the expression is undefined.
    """
    if not (1.0 <= p <= P_MAX):
        raise InvalidArgumentError(f"p must be in [1, {P_MAX:g}], got {p}")
    if not (0.0 <= t <= 1.0):
        raise InvalidArgumentError(f"t must be in [0, 1], got {t}")
    rmax = rho_at_zero(p)
    if rho_val < 0.0 or rho_val > rmax * (1.0 + 1e-12):
        raise InvalidArgumentError(
            f"rho_val must be in [0, {rmax}], got {rho_val}"
        )
    base = max(1.0 - rho_val * p / (p + 1.0), 0.0)
    rhs = base ** (2.0 / p) * (1.0 + rho_val * 2.0 / (p + 1.0))
    return t - rhs


def _solve_rho_u(p: float, t: float) -> tuple[float, float]:
    """Solve (*) at one t, returning (rho, u) with u = rho(0) - rho.

    For large p the curve hugs rho(0) = (p+1)/p over most of [0,1], and the
    complement u = rho(0) - rho is the quantity that carries the precision
    (the naive 1 - rho*p/(p+1) cancels catastrophically).  The equation in
    u-form is  t^{p/2} = u*c * B^{p/2}  with c = p/(p+1) and
    B = 1 + 2*rho/(p+1): solved by a contracting fixed point when u is small
    and by bracketed root-finding in rho otherwise.
    """
    rmax = rho_at_zero(p)
    c = p / (p + 1.0)
    if t <= 0.0:
        return rmax, 0.0
    if t >= 1.0:
        return 0.0, rmax

    def bfun(rho):
        return 1.0 + 2.0 * rho / (p + 1.0)

    tp = t ** (p / 2.0)
    if tp == 0.0:
        # curve point is closer to rho(0) than one underflow quantum
        return rmax, 0.0
    u0 = tp / (c * bfun(rmax) ** (p / 2.0))
    if u0 < 0.25 * rmax:
        # fixed point u <- t^{p/2} / (c B(rmax-u)^{p/2}); contraction
        # factor u*c/B < 1/4 in this regime
        u = u0
        for _ in range(200):
            unew = tp / (c * bfun(rmax - u) ** (p / 2.0))
            if abs(unew - u) <= 1e-15 * unew:
                u = unew
                break
            u = unew
        else:
            raise SolverFailureError(
                f"fixed-point solve did not converge at t={t}", t=t
            )
        rho = rmax - u
    else:
        # rho*c is bounded away from 1 here, so the direct form is safe
        root = brentq(
            lambda r: tp - (1.0 - r * c) * bfun(r) ** (p / 2.0),
            0.0,
            rmax,
            xtol=1e-15,
            rtol=4.0 * np.finfo(float).eps,
            maxiter=200,
        )
        rho = float(root)
        # one Newton polish; d/drho [(1-rho c) B^{p/2}] = -p(p+2)rho/(p+1)^2 B^{p/2-1}
        fval = tp - (1.0 - rho * c) * bfun(rho) ** (p / 2.0)
        fprime = p * (p + 2.0) * rho / (p + 1.0) ** 2 * bfun(rho) ** (p / 2.0 - 1.0)
        if fprime > 0.0:
            rho = min(max(rho - fval / fprime, 0.0), rmax)
        u = rmax - rho
    res = t - (u * c) ** (2.0 / p) * bfun(rmax - u)
    if abs(res) > 1e-9:
        raise SolverFailureError(
            f"optimal-density solve failed at t={t}: residual {res:.3e}", t=t
        )
    return rho, u


def _solve_rho(p: float, t: float) -> float:
    return _solve_rho_u(p, t)[0]


def curve_residual(p: float, t: float) -> float:
    """Residual of (*) at (t, rho*(t)), evaluated at full precision.

    The residual is computed through the complement u = rho(0) - rho*(t),
    which carries the relative precision that a bare float64 rho cannot: for
    large p the curve is so steep in rho that adjacent float64 rho values
    straddle t-intervals far wider than machine epsilon, so plugging the
    rounded rho into ``residual_eq_rho`` measures that quantization, not the
    solver.  When t^{p/2} underflows, rho(0) is the correctly rounded density
    value and the residual is reported as 0.
    """
    if not (1.0 <= p <= P_MAX):
        raise InvalidArgumentError(f"p must be in [1, {P_MAX:g}], got {p}")
    if not (0.0 <= t <= 1.0):
        raise InvalidArgumentError(f"t must be in [0, 1], got {t}")
    rho, u = _solve_rho_u(p, t)
    c = p / (p + 1.0)
    if u == 0.0:
        return 0.0
    return t - (u * c) ** (2.0 / p) * (1.0 + 2.0 * rho / (p + 1.0))


def _chebyshev_grid(n: int) -> np.ndarray:
    """n Chebyshev-extrema nodes on [0,1], clustered at both endpoints."""
    i = np.arange(n)
    return 0.5 * (1.0 - np.cos(np.pi * i / (n - 1)))


def _rho_p1(t: np.ndarray) -> np.ndarray:
    """Closed form for p=1: the k=2 branch of the trigonometric cubic root."""
    arg = np.clip(2.0 * np.asarray(t, dtype=float) - 1.0, -1.0, 1.0)
    rho = 1.0 + 2.0 * np.cos(np.arccos(arg) / 3.0 + 4.0 * np.pi / 3.0)
    return np.clip(rho, 0.0, None)


class Density1D:
    """A probability density on [0,1] with CDF and inverse-CDF access.

    ``form`` is one of ``uniform``, ``closed_form_p1``, ``closed_form_p2``,
    ``tabulated`` (optimal density for a general exponent, solved on a
    Chebyshev grid) or ``custom`` (user-supplied pdf, tabulated CDF).
    Instances are immutable; all evaluation methods are pure.
    """

    def __init__(self, form, p=None, pdf_fn=None, table=None):
        self.form = form
        self.p = p
        self._pdf_fn = pdf_fn
        if table is not None:
            t, rho, cdf = table
            self._table_t = np.asarray(t, dtype=float)
            self._table_rho = np.asarray(rho, dtype=float)
            self._table_cdf = np.asarray(cdf, dtype=float)
        else:
            self._table_t = self._table_rho = self._table_cdf = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def uniform(cls) -> "Density1D":
        return cls("uniform")

    @classmethod
    def closed_form_p1(cls, n_nodes: int = DEFAULT_TABLE_NODES) -> "Density1D":
        t = _chebyshev_grid(n_nodes)
        rho = _rho_p1(t)
        return cls("closed_form_p1", p=1.0, table=(t, rho, _cdf_table(t, rho)))

    @classmethod
    def closed_form_p2(cls) -> "Density1D":
        return cls("closed_form_p2", p=2.0)

    @classmethod
    def tabulated(cls, p: float, n_nodes: int = DEFAULT_TABLE_NODES) -> "Density1D":
        t = _chebyshev_grid(n_nodes)
        rho = np.array([_solve_rho(p, ti) for ti in t])
        return cls("tabulated", p=float(p), table=(t, rho, _cdf_table(t, rho)))

    @classmethod
    def from_table(cls, t, rho) -> "Density1D":
        """Custom density from a tabulated (t, rho) grid; pdf is interpolated
        linearly and the CDF is the renormalized cumulative trapezoid."""
        t = np.asarray(t, dtype=float)
        rho = np.asarray(rho, dtype=float)
        if t.ndim != 1 or t.shape != rho.shape or t.size < 2:
            raise InvalidArgumentError("need matching 1-d (t, rho) arrays")
        if np.any(np.diff(t) <= 0.0) or t[0] != 0.0 or t[-1] != 1.0:
            raise InvalidArgumentError("t grid must increase strictly from 0 to 1")
        if np.any(rho < 0.0):
            raise InvalidArgumentError("custom density must be non-negative")
        pdf_fn = lambda x: np.interp(x, t, rho)
        return cls("custom", pdf_fn=pdf_fn, table=(t, rho, _cdf_table(t, rho)))

    @classmethod
    def from_callable(cls, pdf_fn, n_nodes: int = 8193) -> "Density1D":
        t = np.linspace(0.0, 1.0, n_nodes)
        rho = np.asarray(pdf_fn(t), dtype=float)
        if np.any(rho < 0.0):
            raise InvalidArgumentError("custom density must be non-negative")
        cdf = _cdf_table(t, rho)
        return cls("custom", pdf_fn=pdf_fn, table=(t, rho, cdf))

    # -- evaluation ---------------------------------------------------------

    def pdf(self, t):
        """Density value(s) at t.  Exact for every form (tabulated densities
        re-solve the implicit equation at the requested t)."""
        arr = np.asarray(t, dtype=float)
        scalar = arr.ndim == 0
        x = np.atleast_1d(arr)
        if np.any(x < 0.0) or np.any(x > 1.0):
            raise InvalidArgumentError("t must lie in [0, 1]")
        if self.form == "uniform":
            out = np.ones_like(x)
        elif self.form == "closed_form_p1":
            out = _rho_p1(x)
        elif self.form == "closed_form_p2":
            out = 1.5 * np.sqrt(np.clip(1.0 - x, 0.0, None))
        elif self.form == "tabulated":
            out = np.array([_solve_rho(self.p, xi) for xi in x])
        else:
            out = np.asarray(self._pdf_fn(x), dtype=float)
        return float(out[0]) if scalar else out

    def pdf_fast(self, t):
        """Table-interpolated pdf for bulk sampling paths (falls back to
        the exact pdf when no table exists)."""
        if self._table_t is None:
            return self.pdf(t)
        arr = np.asarray(t, dtype=float)
        scalar = arr.ndim == 0
        out = np.interp(np.atleast_1d(arr), self._table_t, self._table_rho)
        return float(out[0]) if scalar else out

    def cdf(self, t):
        arr = np.asarray(t, dtype=float)
        scalar = arr.ndim == 0
        x = np.atleast_1d(arr)
        if np.any(x < 0.0) or np.any(x > 1.0):
            raise InvalidArgumentError("t must lie in [0, 1]")
        if self.form == "uniform":
            out = x.copy()
        elif self.form == "closed_form_p2":
            out = 1.0 - (1.0 - x) ** 1.5
        else:
            out = np.interp(x, self._table_t, self._table_cdf)
        return float(out[0]) if scalar else out

    def ppf(self, u):
        """Inverse CDF; closed form for the uniform and p=2 densities,
        monotone interpolation of the tabulated CDF otherwise."""
        arr = np.asarray(u, dtype=float)
        scalar = arr.ndim == 0
        x = np.atleast_1d(arr)
        if np.any(x < 0.0) or np.any(x > 1.0):
            raise InvalidArgumentError("u must lie in [0, 1]")
        if self.form == "uniform":
            out = x.copy()
        elif self.form == "closed_form_p2":
            out = 1.0 - (1.0 - x) ** (2.0 / 3.0)
        else:
            out = np.interp(x, self._table_cdf, self._table_t)
        return float(out[0]) if scalar else out

    def normalization(self) -> float:
        """int_0^1 pdf, by adaptive quadrature on the exact pdf."""
        val, err = quad(lambda s: self.pdf(s), 0.0, 1.0,
                        epsabs=1e-12, epsrel=1e-12, limit=200)
        if not math.isfinite(val):
            raise IntegrationFailureError("density normalization diverged")
        return val

    def export_csv(self, path, n: int = 257) -> None:
        """Write an n-row (t, rho, cdf) table for plotting."""
        t = np.linspace(0.0, 1.0, n)
        rho = np.atleast_1d(self.pdf(t))
        cdf = np.atleast_1d(self.cdf(t))
        with open(path, "w") as fh:
            fh.write("t,rho,cdf\n")
            for row in zip(t, rho, cdf):
                fh.write("{:.17g},{:.17g},{:.17g}\n".format(*row))

    def __repr__(self):
        ptag = "" if self.p is None else f", p={self.p}"
        return f"Density1D({self.form!r}{ptag})"


def _cdf_table(t: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Cumulative trapezoid of rho on the grid, renormalized so F(1) = 1."""
    cdf = np.concatenate(
        ([0.0], np.cumsum(0.5 * (rho[1:] + rho[:-1]) * np.diff(t)))
    )
    if cdf[-1] <= 0.0:
        raise InvalidArgumentError("density integrates to zero")
    cdf /= cdf[-1]
    return cdf


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------

def optimal_density(p: float) -> Density1D:
    """The minimizer rho* of J for the given exponent p in [1, 1e6]."""
    if not (1.0 <= p <= P_MAX):
        raise InvalidArgumentError(f"p must be in [1, {P_MAX:g}], got {p}")
    if abs(p - 1.0) <= 1e-12:
        return Density1D.closed_form_p1()
    if abs(p - 2.0) <= 1e-12:
        return Density1D.closed_form_p2()
    return Density1D.tabulated(p)


def S_of_x(density: Density1D, x: float) -> float:
    """S(x) = int_0^x 1/rho.

    For the optimal densities the improper endpoint (rho(1) = 0) is removed
    analytically: combining the first integral
    S(x) = S1 (1 - rho p/(p+1))^{2/p} with the implicit curve equation gives
    S(x) = S1 * x / (1 + 2 rho(x)/(p+1)), which stays fully conditioned even
    for large p.  Uniform is the identity; custom densities are integrated
    numerically.
    """
    if not (0.0 <= x <= 1.0):
        raise InvalidArgumentError(f"x must lie in [0, 1], got {x}")
    if density.form == "uniform":
        return float(x)
    if density.form == "closed_form_p2":
        return (4.0 / 3.0) * (1.0 - math.sqrt(max(1.0 - x, 0.0)))
    if density.form in ("closed_form_p1", "tabulated"):
        p = density.p
        s1 = (p + 2.0) / (p + 1.0)
        rho = float(density.pdf(x))
        return s1 * x / (1.0 + 2.0 * rho / (p + 1.0))
    # custom: direct quadrature, with a divergence check
    val, err = quad(lambda s: 1.0 / density.pdf(s), 0.0, x,
                    epsabs=1e-10, epsrel=1e-10, limit=200)
    if not math.isfinite(val) or err > 1e-6 * max(1.0, abs(val)):
        raise IntegrationFailureError(
            f"integral of 1/rho up to x={x} did not converge (err={err:.1e})"
        )
    return val


def J_functional(density: Density1D, p: float) -> float:
    """J(rho) = int_0^1 S(x)^{p/2} dx by adaptive quadrature."""
    if p < 1.0:
        raise InvalidArgumentError(f"p must be >= 1, got {p}")
    val, err = quad(lambda x: S_of_x(density, x) ** (p / 2.0), 0.0, 1.0,
                    epsabs=1e-10, epsrel=1e-10, limit=200)
    if not math.isfinite(val):
        raise IntegrationFailureError("J functional diverged")
    return val


def cdf_inverse(density: Density1D, u: float):
    """Quantile t with F(t) = u; thin wrapper over Density1D.ppf."""
    return density.ppf(u)


@dataclass(frozen=True)
class VariationalSolution:
    """Optimal constants of the variational problem for one exponent.

    lambda2 stores the quantity 2*lambda (the Lagrange-multiplier combination
    that appears in the first integral).
    """

    p: float
    S1: float
    mu: float
    lambda2: float
    Jmin: float


def variational_solution(p: float) -> VariationalSolution:
    """Closed-form optimum: S1 = (p+2)/(p+1) and the implied mu, 2*lambda,
    J_min, with the two first-integral identities re-verified numerically."""
    if not (1.0 <= p <= P_MAX):
        raise InvalidArgumentError(f"p must be in [1, {P_MAX:g}], got {p}")
    s1 = (p + 2.0) / (p + 1.0)
    sq = math.sqrt(s1 - 1.0)  # = 1/sqrt(p+1)
    s1_p2 = s1 ** (p / 2.0)
    mu = s1_p2 / (p + 2.0) * (2.0 + p / (math.sqrt(p + 1.0) * sq))
    lambda2 = p / ((p + 2.0) * math.sqrt(p + 1.0)) * s1_p2 * s1 / sq
    jmin = s1_p2 / (p + 1.0)

    res_a = lambda2 - (mu * s1 - 2.0 / (p + 2.0) * s1_p2 * s1)
    res_b = lambda2 ** 2 - (
        mu ** 2 * s1 - 4.0 * mu / (p + 2.0) * s1_p2 * s1 + s1 ** (p + 1.0) / (p + 1.0)
    )
    scale = max(1.0, abs(lambda2))
    if abs(res_a) > 1e-10 * scale or abs(res_b) > 1e-10 * scale ** 2:
        raise NumericalInconsistencyError(
            f"first-integral identities violated at p={p}: {res_a:.2e}, {res_b:.2e}"
        )
    return VariationalSolution(p=float(p), S1=s1, mu=mu, lambda2=lambda2, Jmin=jmin)
