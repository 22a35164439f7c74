"""Cubic-regularized second-order steps.

One step minimizes the quadratic Taylor model plus a cubic distance
penalty,

    m(s) = <g, s> + 1/2 s'Hs + (reg/6) ||s||^3,

which is globally solvable despite non-convexity.  The global minimizer
is characterized by

    (H + (reg/2) ||s|| I) s = -g   with   H + (reg/2) ||s|| I  psd,

so the solver reduces H to its eigenbasis and finds the radius r = ||s||
from the scalar secular equation r = ||(H + (reg r / 2) I)^{-1} g|| by
safeguarded bisection with Newton refinement.  When g has no component
on the bottom eigenspace and the secular equation undershoots (the hard
case), a bottom-eigenvector component tops the step up to the required
radius.  The stationarity and eigenvalue certificate above makes every
returned solution checkable independently of the method.

``stationarity`` packages the progress measure that combines the
gradient norm with the most negative Hessian eigenvalue; it vanishes
exactly at second-order stationary points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .polynomials import Objective, as_point
from .spectral import EigenDecomp, eig_sym

# Bottom-eigenspace gradient components below this relative size are
# treated as zero, which routes the solve through the hard-case branch.
_HARD_CASE_REL = 1e-12


@dataclass(frozen=True)
class CubicSolution:
    """Global minimizer of the cubic-regularized model.

    ``model_value`` is the model at the step (the constant f(x) omitted);
    ``radius`` is the step norm.
    """

    step: np.ndarray
    model_value: float
    radius: float


def _secular_root(psi, lo: float, hi0: float) -> float:
    """Solve psi(r) = r for the decreasing psi on [lo, inf)."""
    hi = max(hi0, lo + 1.0, 2.0 * lo)
    for _ in range(200):
        if psi(hi) <= hi:
            break
        hi *= 2.0
    lo_b, hi_b = lo, hi
    for _ in range(200):
        mid = 0.5 * (lo_b + hi_b)
        if mid <= lo_b or mid >= hi_b:
            break
        if psi(mid) > mid:
            lo_b = mid
        else:
            hi_b = mid
        if hi_b - lo_b <= 1e-15 * max(1.0, hi_b):
            break
    return 0.5 * (lo_b + hi_b)


def solve_cubic_model(grad, hess, reg: float) -> CubicSolution:
    """Globally minimize <g,s> + 1/2 s'Hs + (reg/6)||s||^3.

    Args:
        grad: gradient vector g.
        hess: symmetric matrix H.
        reg: cubic regularization weight, must be positive.

    Returns:
        CubicSolution whose step satisfies the stationarity equation and
        the eigenvalue certificate lambda_min(H) + (reg/2)||s|| >= 0 up
        to roundoff.
    """
    g = np.asarray(grad, dtype=float)
    if reg <= 0 or not math.isfinite(reg):
        raise ValueError(f"regularization weight must be positive, got {reg}")
    if not np.isfinite(g).all():
        raise ValueError("gradient has non-finite entries")
    decomp = eig_sym(hess)
    lam = decomp.eigenvalues
    if not np.isfinite(lam).all():
        raise ValueError("hessian has non-finite entries")
    v = decomp.eigenvectors
    g_hat = v.T @ g
    g_norm = float(np.linalg.norm(g))
    lam_min = float(lam[-1])
    spectral = decomp.spectral_scale()

    r_floor = max(0.0, -2.0 * lam_min / reg)
    bottom = (lam - lam_min) <= 1e-12 * spectral
    g_bottom = float(np.linalg.norm(g_hat[bottom]))
    hard_candidate = g_bottom <= _HARD_CASE_REL * max(1.0, g_norm)

    def shifted(r: float) -> np.ndarray:
        return lam + 0.5 * reg * r

    if g_norm == 0.0 and lam_min >= -1e-15 * spectral:
        s_hat = np.zeros_like(g_hat)
    elif hard_candidate:
        # Solve on the complement of the bottom eigenspace only.
        g_top = np.where(bottom, 0.0, g_hat)

        def psi_top(r: float) -> float:
            d = shifted(r)
            with np.errstate(divide="ignore", invalid="ignore"):
                y = np.where(bottom, 0.0, g_top / d)
            return float(np.linalg.norm(y))

        d_floor = shifted(r_floor)
        with np.errstate(divide="ignore", invalid="ignore"):
            y_floor = np.where(bottom, 0.0, g_top / d_floor)
        p = float(np.linalg.norm(y_floor))
        if p >= r_floor:
            r = _secular_root(psi_top, r_floor, math.sqrt(2.0 * g_norm / reg) if g_norm else 1.0)
            with np.errstate(divide="ignore", invalid="ignore"):
                s_hat = -np.where(bottom, 0.0, g_top / shifted(r))
        else:
            # Hard case: sit at the floor radius and fill the deficit
            # along one bottom eigenvector.
            alpha = math.sqrt(max(r_floor * r_floor - p * p, 0.0))
            s_hat = -y_floor
            s_hat[int(np.argmax(bottom))] += alpha
    else:

        def psi(r: float) -> float:
            d = shifted(r)
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                y = g_hat / d
            norm = float(np.linalg.norm(y))
            return norm if math.isfinite(norm) else math.inf

        r = _secular_root(psi, r_floor, math.sqrt(2.0 * g_norm / reg))
        # Newton polish on phi(r) = psi(r) - r.
        for _ in range(4):
            d = shifted(r)
            if np.any(d <= 0):
                break
            y = g_hat / d
            p = float(np.linalg.norm(y))
            if p == 0.0:
                break
            dp = -0.5 * reg * float(np.sum(g_hat**2 / d**3)) / p
            denom = dp - 1.0
            if denom == 0.0:
                break
            r_new = r - (p - r) / denom
            if not math.isfinite(r_new) or r_new <= r_floor:
                break
            r = r_new
        s_hat = -g_hat / shifted(r)

    step = v @ s_hat
    radius = float(np.linalg.norm(step))
    hess_s = (v * lam) @ s_hat
    model_value = float(g @ step + 0.5 * step @ hess_s + reg * radius**3 / 6.0)

    # Internal sanity certificate; scale-aware so legitimate large-norm
    # inputs do not trip it on roundoff.
    residual = float(np.linalg.norm(g + hess_s + 0.5 * reg * radius * step))
    margin = lam_min + 0.5 * reg * radius
    res_scale = max(1.0, g_norm, spectral * max(1.0, radius))
    if residual > 1e-9 * res_scale or margin < -1e-9 * spectral:
        raise ArithmeticError(
            f"cubic subproblem certificate failed (residual {residual:.3e}, margin {margin:.3e})"
        )
    return CubicSolution(step=step, model_value=model_value, radius=radius)


def cubic_step(objective: Objective, x, reg: float) -> np.ndarray:
    """One cubic-regularized step from ``x``; returns the new point.

    At a point with zero gradient and positive-semidefinite Hessian the
    model is minimized by the zero step, so the iterate does not move;
    escaping such points requires third-order information.
    """
    x = as_point(x, objective.dim)
    b = objective.bundle(x, 2)
    return x + solve_cubic_model(b.grad, b.hess, reg).step


@dataclass(frozen=True)
class Stationarity:
    """Second-order progress measure at a point.

    ``value`` is the max of a gradient term sqrt(||g||/reg) and a
    curvature term -(2/(3 reg)) lambda_min clamped at zero; it is zero
    exactly when the gradient vanishes and the Hessian is psd.
    """

    value: float
    grad_part: float
    eig_part: float


def stationarity_parts(grad_norm: float, min_eig: float, reg: float) -> Stationarity:
    if reg <= 0:
        raise ValueError("regularization weight must be positive")
    grad_part = math.sqrt(grad_norm / reg)
    eig_part = max(0.0, -2.0 * min_eig / (3.0 * reg))
    return Stationarity(value=max(grad_part, eig_part), grad_part=grad_part, eig_part=eig_part)


def stationarity(objective: Objective, z, reg: float) -> Stationarity:
    z = as_point(z, objective.dim)
    b = objective.bundle(z, 2)
    decomp = eig_sym(b.hess)
    return stationarity_parts(
        float(np.linalg.norm(b.grad)), float(decomp.eigenvalues[-1]), reg
    )


def decomposed_stationarity(grad: np.ndarray, decomp: EigenDecomp, reg: float) -> Stationarity:
    """Variant for callers that already hold the Hessian eigendecomposition."""
    return stationarity_parts(float(np.linalg.norm(grad)), float(decomp.eigenvalues[-1]), reg)
