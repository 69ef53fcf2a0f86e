"""Coherent-state families on truncated Fock spaces.

Every constructor returns a unit-norm `FockVector` whose amplitudes follow

    c_n  ~  z^n exp(-i alpha e_n) / sqrt(rho(n))        (gk family)
    c_n  ~  z^n exp(-i alpha eps_n) / sqrt(mu(n))       (dual family)

with the cutoff chosen so that the neglected probability mass falls below a
configurable tolerance (finite-dimensional models keep their full space and
carry a zero tail).  Amplitudes are assembled in the log domain: mu(n) for
the hydrogen-like entry grows like n!(n+1)! and would overflow doubles long
before the truncation tail is reached.

Superpositions (even/odd, real/imaginary cat) reuse the dual-family
amplitudes rather than fresh series, so their two-step lowering property
holds structurally.  Time-labeled families reuse the same machinery via the
exact correspondence (J, theta, t)  <->  (z = sqrt(J) e^{i theta},
alpha = omega t).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import logsumexp

from .errors import (
    DegenerateStateError,
    ParameterError,
    RadiusError,
    ShapeMismatchError,
    SpectrumValidationError,
    TruncationError,
)
from . import spectra
from .spectra import SpectrumModel

FAMILIES = (
    "gk",
    "dual_gk",
    "even_dual",
    "odd_dual",
    "cat_real",
    "cat_imag",
    "generalized_gk",
    "generalized_dual",
)

_DUAL_FAMILIES = frozenset(
    {"dual_gk", "even_dual", "odd_dual", "cat_real", "cat_imag", "generalized_dual"}
)


def family_is_dual(family: str) -> bool:
    if family not in FAMILIES:
        raise ParameterError(f"unknown state family {family!r}")
    return family in _DUAL_FAMILIES


@dataclass(frozen=True)
class TruncConfig:
    """Truncation policy for the adaptive series cutoff."""

    tail_tol: float = 1e-14
    max_cutoff: int = 5000
    initial_cutoff: int = 32
    radius_margin: float = 0.02  # labels within this fraction of the radius are rejected


DEFAULT_TRUNC = TruncConfig()

_LOOKAHEAD = 16  # levels inspected past the cutoff for the geometric tail bound


@dataclass(frozen=True)
class StateLabel:
    """Point (z, alpha) plus family/model bookkeeping; time is set only for
    the explicitly time-labeled families."""

    z: complex
    alpha: float
    family: str
    model: SpectrumModel
    time: float | None = None

    @property
    def J(self) -> float:
        return abs(self.z) ** 2

    @property
    def theta(self) -> float:
        return cmath.phase(self.z)


@dataclass(frozen=True)
class FockVector:
    """Unit-norm complex amplitude vector on the basis |0..N>.

    norm_constant is the value of the normalization series actually used
    (sum x^n/rho(n) for the gk family, its mu analogue for the dual family,
    the squared norm of the raw superposition for even/odd/cat states);
    log_norm_constant carries the same number safely for magnitudes beyond
    double range.  tail_bound is an upper estimate of the truncated
    probability mass (exactly 0 for finite-dimensional models).
    """

    amplitudes: np.ndarray
    cutoff: int
    label: StateLabel
    norm_constant: float
    log_norm_constant: float
    tail_bound: float

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def unnormalized(self) -> np.ndarray:
        """Amplitudes of the raw series (z^n/sqrt(rho) form), i.e. the unit
        vector rescaled by sqrt(norm_constant)."""
        return self.amplitudes * math.exp(0.5 * self.log_norm_constant)


# ---------------------------------------------------------------------------
# core series builder
# ---------------------------------------------------------------------------


def _guard_radius(model: SpectrumModel, z: complex, dual: bool, cfg: TruncConfig) -> None:
    if model.finite:
        return
    radius = spectra.estimate_radius(model, dual=dual)
    if math.isinf(radius):
        return
    if abs(z) >= (1.0 - cfg.radius_margin) * radius:
        raise RadiusError(
            f"|z| = {abs(z):.6g} is at or beyond {1 - cfg.radius_margin:.0%} of the "
            f"estimated convergence radius {radius:.6g} for {model.spec_string()} "
            f"({'dual' if dual else 'gk'} family)"
        )


def _validate_custom(model: SpectrumModel) -> None:
    if model.name != "custom":
        return
    report = spectra.validate_spectrum(model, model.dimension - 1)
    if not (report.e_strictly_increasing and report.eps_strictly_increasing):
        raise SpectrumValidationError(
            f"custom spectrum fails monotonicity: first violations {report.first_violation}"
        )


def _log_weights(levels: np.ndarray) -> np.ndarray:
    """Running log-products ln rho(n) (or ln mu(n)) from a level array."""
    out = np.zeros(levels.size)
    out[1:] = np.cumsum(np.log(levels[1:]))
    return out


def _series_state(
    get_levels: Callable[[int], np.ndarray],
    finite_top: int | None,
    z: complex,
    alpha: float,
    cfg: TruncConfig,
    min_cutoff: int = 0,
):
    """Shared series assembly.  Returns (amplitudes, cutoff, norm_constant,
    log_norm_constant, tail_bound)."""
    x = abs(z) ** 2

    if finite_top is not None:
        n_top = max(finite_top, min_cutoff if min_cutoff <= finite_top else finite_top)
        levels = get_levels(n_top)
        return _assemble(levels, z, alpha, tail_bound=0.0)

    if x == 0.0:
        n_top = max(min_cutoff, 1)
        levels = get_levels(n_top)
        return _assemble(levels, z, alpha, tail_bound=0.0)

    n = max(cfg.initial_cutoff, min_cutoff)
    log_x = math.log(x)
    while True:
        levels = get_levels(n + _LOOKAHEAD)
        log_w = _log_weights(levels)
        idx = np.arange(n + 1)
        log_terms = idx * log_x - log_w[: n + 1]
        window = levels[n + 1 : n + 1 + _LOOKAHEAD]
        ratio = x / float(window.min())
        if ratio < 0.95:
            # t_{n+1} = t_n * x/e_{n+1}; later ratios stay below `ratio`
            log_tail = log_terms[n] + (log_x - math.log(levels[n + 1])) - math.log1p(-ratio)
            log_sum = float(logsumexp(log_terms))
            tail_bound = math.exp(min(log_tail - log_sum, 0.0))
            if tail_bound <= cfg.tail_tol:
                return _assemble(levels[: n + 1], z, alpha, tail_bound)
        if n >= cfg.max_cutoff:
            raise TruncationError(
                f"tail tolerance {cfg.tail_tol:g} unreachable below cutoff {cfg.max_cutoff} "
                f"(|z| = {abs(z):.6g})"
            )
        n = min(2 * n, cfg.max_cutoff)


def _assemble(levels: np.ndarray, z: complex, alpha: float, tail_bound: float):
    n_top = levels.size - 1
    idx = np.arange(n_top + 1)
    log_w = _log_weights(levels)
    if z == 0:
        amps = np.zeros(n_top + 1, dtype=complex)
        amps[0] = 1.0
        return amps, n_top, 1.0, 0.0, tail_bound
    log_mag = idx * math.log(abs(z)) - 0.5 * log_w
    phase = idx * cmath.phase(z) - alpha * levels
    peak = float(log_mag.max())
    raw = np.exp(log_mag - peak) * np.exp(1j * phase)
    norm_sq = float(np.vdot(raw, raw).real)
    amps = raw / math.sqrt(norm_sq)
    log_norm_constant = 2.0 * peak + math.log(norm_sq)
    norm_constant = math.exp(log_norm_constant) if log_norm_constant < 709 else math.inf
    return amps, n_top, norm_constant, log_norm_constant, tail_bound


def _model_state(
    model: SpectrumModel,
    z: complex,
    alpha: float,
    dual: bool,
    family: str,
    cfg: TruncConfig,
    min_cutoff: int = 0,
    time: float | None = None,
) -> FockVector:
    _validate_custom(model)
    _guard_radius(model, z, dual, cfg)
    if dual:
        get_levels = lambda c: spectra.dual_eigenvalues(model, c)  # noqa: E731
    else:
        get_levels = lambda c: spectra.eigenvalues(model, c)  # noqa: E731
    amps, cutoff, norm_const, log_norm, tail = _series_state(
        get_levels, model.max_index(), complex(z), alpha, cfg, min_cutoff
    )
    label = StateLabel(complex(z), float(alpha), family, model, time)
    return FockVector(amps, cutoff, label, norm_const, log_norm, tail)


# ---------------------------------------------------------------------------
# public constructors
# ---------------------------------------------------------------------------


def gkcs(
    model: SpectrumModel,
    z: complex,
    alpha: float = 0.0,
    trunc: TruncConfig = DEFAULT_TRUNC,
    min_cutoff: int = 0,
) -> FockVector:
    """Coherent state with amplitudes z^n e^{-i alpha e_n}/sqrt(rho(n))."""
    return _model_state(model, z, alpha, dual=False, family="gk", cfg=trunc, min_cutoff=min_cutoff)


def dgkcs(
    model: SpectrumModel,
    z: complex,
    alpha: float = 0.0,
    trunc: TruncConfig = DEFAULT_TRUNC,
    min_cutoff: int = 0,
) -> FockVector:
    """Dual-family state with amplitudes z^n e^{-i alpha eps_n}/sqrt(mu(n))."""
    return _model_state(model, z, alpha, dual=True, family="dual_gk", cfg=trunc, min_cutoff=min_cutoff)


def state(model: SpectrumModel, family: str, z: complex, alpha: float = 0.0,
          trunc: TruncConfig = DEFAULT_TRUNC) -> FockVector:
    """Dispatch on family name (the even/odd/cat families take their defining
    z and alpha exactly as the plain constructors do)."""
    if family == "gk":
        return gkcs(model, z, alpha, trunc)
    if family == "dual_gk":
        return dgkcs(model, z, alpha, trunc)
    if family == "even_dual":
        return even_odd(model, z, alpha, "+", trunc)
    if family == "odd_dual":
        return even_odd(model, z, alpha, "-", trunc)
    if family == "cat_real":
        return cat(model, z, alpha, "real", trunc)
    if family == "cat_imag":
        return cat(model, z, alpha, "imaginary", trunc)
    raise ParameterError(f"unknown or non-constructible family {family!r}")


def normalization(model: SpectrumModel, x: float, family: str = "gk",
                  trunc: TruncConfig = DEFAULT_TRUNC) -> float:
    """Value of the normalization series sum_n x^n / rho(n) (family 'gk') or
    sum_n x^n / mu(n) (family 'dual') at x = |z|^2."""
    if x < 0:
        raise ParameterError("x = |z|^2 must be >= 0")
    if family in ("gk", "generalized_gk"):
        dual = False
    elif family in ("dual", "dual_gk", "generalized_dual"):
        dual = True
    else:
        raise ParameterError(f"normalization series is defined for gk/dual, not {family!r}")
    s = _model_state(model, math.sqrt(x), 0.0, dual, "gk", trunc)
    return s.norm_constant


def photon_distribution(s: FockVector) -> np.ndarray:
    """p_n = |c_n|^2 (independent of alpha for every family here)."""
    return s.probabilities()


def overlap(a: FockVector, b: FockVector) -> complex:
    """Inner product <a|b>, padding the shorter vector with zeros."""
    ma, mb = a.label.model, b.label.model
    if ma.spec_string() != mb.spec_string() or ma.omega != mb.omega:
        raise ShapeMismatchError(
            f"overlap requires matching models, got {ma.spec_string()} vs {mb.spec_string()}"
        )
    n = max(a.cutoff, b.cutoff) + 1
    va = np.zeros(n, dtype=complex)
    vb = np.zeros(n, dtype=complex)
    va[: a.cutoff + 1] = a.amplitudes
    vb[: b.cutoff + 1] = b.amplitudes
    return complex(np.vdot(va, vb))


# ---------------------------------------------------------------------------
# superpositions of the dual family
# ---------------------------------------------------------------------------


def even_odd(model: SpectrumModel, z: complex, alpha: float = 0.0, parity: str = "+",
             trunc: TruncConfig = DEFAULT_TRUNC) -> FockVector:
    """Normalized (|z~,a> +- |-z~,a>): support on even (+) or odd (-) levels."""
    if parity not in ("+", "-"):
        raise ParameterError("parity must be '+' or '-'")
    base = dgkcs(model, z, alpha, trunc)
    signs = np.where(np.arange(base.cutoff + 1) % 2 == 0, 1.0, -1.0)
    raw = base.amplitudes + (signs * base.amplitudes if parity == "+" else -signs * base.amplitudes)
    norm_sq = float(np.vdot(raw, raw).real)
    if norm_sq < 1e-300:
        raise DegenerateStateError(f"parity {parity} superposition of z = {z} is the zero vector")
    amps = raw / math.sqrt(norm_sq)
    family = "even_dual" if parity == "+" else "odd_dual"
    label = StateLabel(complex(z), float(alpha), family, model)
    log_norm = base.log_norm_constant + math.log(norm_sq)
    tail = min(1.0, base.tail_bound * 4.0 / norm_sq) if base.tail_bound else 0.0
    return FockVector(amps, base.cutoff, label, math.exp(min(log_norm, 709.0)), log_norm, tail)


def cat(model: SpectrumModel, z: complex, alpha: float = 0.0, kind: str = "real",
        trunc: TruncConfig = DEFAULT_TRUNC) -> FockVector:
    """Normalized (|z~,a> +- |z*~,a>): the real (+) and imaginary (-)
    conjugate-pair superpositions, with amplitude profiles r^n cos(n theta)
    and r^(n+1) sin((n+1) theta)."""
    if kind not in ("real", "imaginary"):
        raise ParameterError("cat kind must be 'real' or 'imaginary'")
    base = dgkcs(model, z, alpha, trunc)
    theta = cmath.phase(complex(z))
    n = np.arange(base.cutoff + 1)
    # amplitudes of the z* partner differ by e^{-2 i n theta}
    partner = base.amplitudes * np.exp(-2j * n * theta)
    raw = base.amplitudes + partner if kind == "real" else base.amplitudes - partner
    norm_sq = float(np.vdot(raw, raw).real)
    if norm_sq < 1e-300:
        raise DegenerateStateError(
            f"{kind} conjugate-pair superposition is the zero vector at theta = {theta:.6g}"
        )
    amps = raw / math.sqrt(norm_sq)
    family = "cat_real" if kind == "real" else "cat_imag"
    label = StateLabel(complex(z), float(alpha), family, model)
    log_norm = base.log_norm_constant + math.log(norm_sq)
    tail = min(1.0, base.tail_bound * 4.0 / norm_sq) if base.tail_bound else 0.0
    return FockVector(amps, base.cutoff, label, math.exp(min(log_norm, 709.0)), log_norm, tail)


def cat_distribution(model: SpectrumModel, r: float, theta: float, kind: str,
                     cutoff: int) -> np.ndarray:
    """Closed-form photon distribution of the conjugate-pair superpositions:
    p_n  ~  r^(2n) (1 +- cos(2 n theta)) / mu(n), normalized over 0..cutoff."""
    table = spectra.moment_table(model, cutoff)
    n = np.arange(cutoff + 1)
    sign = 1.0 if kind == "real" else -1.0
    with np.errstate(divide="ignore"):
        log_r2n = np.where(n == 0, 0.0, 2.0 * n * (math.log(r) if r > 0 else -math.inf))
    weights = np.exp(log_r2n - table.log_mu) * (1.0 + sign * np.cos(2.0 * n * theta))
    total = weights.sum()
    if total <= 0:
        raise DegenerateStateError("degenerate superposition: distribution has zero mass")
    return weights / total


# ---------------------------------------------------------------------------
# nonlinear deformation interface
# ---------------------------------------------------------------------------


def temporally_stable_nonlinear(
    source: SpectrumModel | Callable[[int], float],
    z: complex,
    alpha: float = 0.0,
    dual: bool = False,
    trunc: TruncConfig = DEFAULT_TRUNC,
) -> FockVector:
    """State built from a deformation profile f(n) > 0 via e_n = n f(n)^2
    (dual: eps_n = n / f(n)^2).  Accepts either a catalog model (whose
    profile is f(n) = sqrt(e_n/n)) or a callable f; f identically 1
    reproduces the canonical coherent state for either flag."""
    if isinstance(source, SpectrumModel):
        return dgkcs(source, z, alpha, trunc) if dual else gkcs(source, z, alpha, trunc)

    f = source

    def get_levels(c: int) -> np.ndarray:
        vals = np.empty(c + 1)
        vals[0] = 0.0
        for k in range(1, c + 1):
            fk = f(k)
            if not fk > 0:
                raise ParameterError(f"deformation profile must be positive, got f({k}) = {fk}")
            vals[k] = k / fk**2 if dual else k * fk**2
        return vals

    # radius guard from the synthesized levels
    probe = spectra.RADIUS_PROBE
    w1 = get_levels(probe)[-spectra.RADIUS_TAIL_WINDOW:]
    w2 = get_levels(2 * probe)[-spectra.RADIUS_TAIL_WINDOW:]
    r1 = 0.5 * float(np.mean(np.log(w1)))
    r2 = 0.5 * float(np.mean(np.log(w2)))
    radius = math.inf if r2 > r1 + math.log(1.05) else math.exp(r2)
    if not math.isinf(radius) and abs(z) >= (1.0 - trunc.radius_margin) * radius:
        raise RadiusError(
            f"|z| = {abs(z):.6g} at or beyond estimated radius {radius:.6g} for deformed family"
        )

    amps, cutoff, norm_const, log_norm, tail = _series_state(
        get_levels, None, complex(z), alpha, trunc
    )
    synthetic = spectra.custom_spectrum(get_levels(cutoff), omega=1.0)
    family = "dual_gk" if dual else "gk"
    label = StateLabel(complex(z), float(alpha), family, synthetic)
    return FockVector(amps, cutoff, label, norm_const, log_norm, tail)


# ---------------------------------------------------------------------------
# time-labeled families
# ---------------------------------------------------------------------------


def generalized_gkcs(
    model: SpectrumModel,
    J: float,
    theta: float,
    t: float,
    dual: bool = False,
    trunc: TruncConfig = DEFAULT_TRUNC,
    min_cutoff: int = 0,
) -> FockVector:
    """Time-evolved state |J, theta, t> with amplitudes
    J^{n/2} e^{i n theta} e^{-i omega e_n t} / sqrt(rho(n)); at theta = 0 it
    coincides with gkcs(sqrt(J), alpha = omega t), and at t = 0 with the
    plain (alpha = 0) nonlinear state."""
    if J < 0:
        raise ParameterError("J = |z|^2 must be >= 0")
    z = math.sqrt(J) * cmath.exp(1j * theta)
    family = "generalized_dual" if dual else "generalized_gk"
    return _model_state(
        model, z, model.omega * t, dual=dual, family=family, cfg=trunc,
        min_cutoff=min_cutoff, time=float(t),
    )
