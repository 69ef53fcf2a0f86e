"""Shared numerical kernels: log-gamma, modified Bessel I, Gauss-Legendre
quadrature with adaptive panel refinement, and a dense complex matrix
exponential.

All routines are pure and operate at desk scale; accuracy contracts are
stated as testable tolerances, not ulp guarantees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg

from .errors import ParameterError, QuadratureError


@dataclass(frozen=True)
class NumericsConfig:
    """Tolerances shared by the series and quadrature kernels."""

    series_tail: float = 1e-14
    quad_target: float = 1e-10
    max_refine_depth: int = 12


DEFAULT_NUMERICS = NumericsConfig()


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0."""
    if not x > 0:
        raise ParameterError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def log_factorial(n: int) -> float:
    return math.lgamma(n + 1.0)


def bessel_i(order: int, x: float, tail: float = 1e-17) -> float:
    """Modified Bessel function of the first kind, integer order >= 0,
    real argument x >= 0.

    Evaluated by the ascending series sum_k (x/2)^(2k+order) / (k! (k+order)!)
    with the summation stopped once the next term falls below ``tail``
    relative to the running sum.  Terms are generated by ratio recursion,
    so no factorial overflows occur at desk scale (x up to ~60).
    """
    if order < 0 or int(order) != order:
        raise ParameterError(f"bessel_i requires integer order >= 0, got {order}")
    if x < 0:
        raise ParameterError(f"bessel_i requires x >= 0, got {x}")
    if x == 0.0:
        return 1.0 if order == 0 else 0.0
    h = 0.5 * x
    # leading term (x/2)^order / order!
    term = math.exp(order * math.log(h) - math.lgamma(order + 1.0))
    total = term
    k = 0
    while True:
        k += 1
        term *= h * h / (k * (k + order))
        total += term
        if term < tail * abs(total):
            return total
        if k > 10000:  # unreachable for the contracted domain
            raise QuadratureError("bessel_i series failed to terminate")


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre nodes/weights on [0, upper].

    For ``upper = inf`` the rule holds the image of the reference nodes
    under x = t/(1-t), with weights carrying the 1/(1-t)^2 Jacobian, so that
    weights . f(nodes) still approximates the half-line integral.
    """

    nodes: np.ndarray
    weights: np.ndarray
    order: int
    upper: float

    @property
    def half_line(self) -> bool:
        return math.isinf(self.upper)


def gauss_rule(order: int, upper: float = 1.0) -> QuadratureRule:
    """Build a Gauss-Legendre rule on [0, upper]; upper = inf maps the rule
    through x = t/(1-t)."""
    if order < 1:
        raise ParameterError("quadrature order must be >= 1")
    if upper <= 0:
        raise ParameterError("integration domain must be [0, R] with R > 0")
    t, w = np.polynomial.legendre.leggauss(order)
    if math.isinf(upper):
        t01 = 0.5 * (t + 1.0)
        w01 = 0.5 * w
        nodes = t01 / (1.0 - t01)
        weights = w01 / (1.0 - t01) ** 2
    else:
        nodes = 0.5 * upper * (t + 1.0)
        weights = 0.5 * upper * w
    return QuadratureRule(nodes=nodes, weights=weights, order=order, upper=float(upper))


def _panel_sum(f: Callable, a: float, b: float, t: np.ndarray, w: np.ndarray,
               transform: bool) -> float:
    """Apply the reference Gauss rule to one parameter panel [a, b]."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    u = mid + half * t
    if transform:
        x = u / (1.0 - u)
        vals = np.asarray(f(x)) / (1.0 - u) ** 2
    else:
        vals = np.asarray(f(u))
    return half * float(np.dot(w, vals))


def integrate(f: Callable, rule: QuadratureRule,
              target: float | None = None,
              max_depth: int | None = None) -> float:
    """Integrate f over the rule's domain.

    The composite rule starts from one panel over the parameter domain
    ([0, R], or t in [0, 1) for half-line rules) and doubles the panel count
    until successive refinements agree to ``target`` (relative where the
    integral is not tiny).  Non-convergence raises QuadratureError rather
    than returning silently.

    ``f`` must accept numpy arrays.
    """
    target = DEFAULT_NUMERICS.quad_target if target is None else target
    max_depth = DEFAULT_NUMERICS.max_refine_depth if max_depth is None else max_depth
    t, w = np.polynomial.legendre.leggauss(rule.order)
    transform = rule.half_line
    top = 1.0 if transform else rule.upper

    previous = None
    panels = 1
    for _ in range(max_depth + 1):
        edges = np.linspace(0.0, top, panels + 1)
        if transform:
            # keep the last node strictly inside t < 1
            edges[-1] = 1.0 - 1e-14
        total = sum(_panel_sum(f, edges[i], edges[i + 1], t, w, transform)
                    for i in range(panels))
        if previous is not None:
            if abs(total - previous) <= target * max(1.0, abs(total)):
                return total
        previous = total
        panels *= 2
    raise QuadratureError(
        f"quadrature did not converge to {target:g} within {max_depth} refinements"
    )


@dataclass(frozen=True)
class WeightFunction:
    """Radial weight sigma(x) >= 0 whose moments reproduce a factorial-moment
    sequence; the carrier of the resolution-of-identity check.

    kind is 'closed_form' for weights stated in elementary form,
    'derived_closed_form' for weights reduced here from a special-function
    representation, and 'unavailable' when no quadrature-friendly form is
    known (the check is then skipped or routed through an algebraic
    identity).  support_radius is the upper end of the support (inf for
    half-line weights).
    """

    model: object
    kind: str
    evaluator: Callable | None
    support_radius: float
    note: str = ""

    @property
    def available(self) -> bool:
        return self.kind != "unavailable"


# ---------------------------------------------------------------------------
# matrix exponential
# ---------------------------------------------------------------------------


def matrix_exp(m: np.ndarray) -> np.ndarray:
    """Dense complex matrix exponential.

    Diagonal inputs are detected structurally and exponentiated entrywise
    (the evolution phases and Hamiltonians used here are diagonal, which
    makes those exponentials exact); everything else goes through the
    scaling-and-squaring Pade core.
    """
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ParameterError("matrix_exp expects a square matrix")
    if not np.all(np.isfinite(a)):
        raise ParameterError("matrix_exp requires finite entries")
    off_diag = a - np.diag(np.diag(a))
    if not np.any(off_diag):
        return np.diag(np.exp(np.diag(a)))
    return scipy.linalg.expm(a)
