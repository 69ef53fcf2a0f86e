"""Criteria harness: eigenstate property, temporal stability, action
identity, resolution of identity via the radial moment problem, duality
structure, and closed-form cross-checks, reported as machine-readable
entries.

Residuals are relative wherever the reference value is nonzero and absolute
otherwise; each entry records which.  A skipped entry (no known weight or
closed form) never counts as passed, and never fails a report either.
Boundary rows of truncated operators are excluded from pass/fail residuals
and reported separately in the details, so truncation artifacts cannot
masquerade as algebra failures.  The resolution-of-identity check works at
the level of the radial moment problem: the angular integral reduces
analytically and the phase-label direction is fixed, which is the reduction
the construction itself rests on.

On finite-dimensional spectra two checks deserve a warning.  The level
chain e_n of the Morse-type entry is a downward parabola in n, so it is not
strictly increasing over the full level range, and the action identity
<H> = omega |z|^2 picks up a finite-size defect equal to the occupation of
the top level; both effects are real properties of the finite model, are
reported honestly, and make strict suites fail for that entry.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import closed_forms, numerics, operators, spectra, states
from .errors import GkdualError, ParameterError
from .spectra import SpectrumModel
from .states import TruncConfig


@dataclass(frozen=True)
class CheckEntry:
    """One criterion outcome.  residual is None only for skipped entries."""

    name: str
    residual: float | None
    tolerance: float | None
    passed: bool | None
    details: str
    kind: str = "relative"  # or "absolute"
    skipped: bool = False

    def __post_init__(self):
        # numpy scalars sneak in through vectorized residual math; keep the
        # report strictly JSON-serializable (finite numbers or null only)
        if self.residual is not None:
            r = float(self.residual)
            if not (r >= 0 and math.isfinite(r)):
                raise GkdualError(f"residual for {self.name} must be finite and >= 0, got {r}")
            object.__setattr__(self, "residual", r)
        if self.tolerance is not None:
            object.__setattr__(self, "tolerance", float(self.tolerance))
        if self.passed is not None:
            object.__setattr__(self, "passed", bool(self.passed))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "details": self.details,
        }


@dataclass(frozen=True)
class CriteriaReport:
    model: SpectrumModel
    family: str
    entries: tuple

    @property
    def passed(self) -> bool:
        return all(e.passed is not False for e in self.entries) and any(
            e.passed for e in self.entries
        )

    def entry(self, name: str) -> CheckEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "model": self.model.spec_string(),
            "family": self.family,
            "entries": [e.to_dict() for e in self.entries],
            "pass": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"


@dataclass(frozen=True)
class VerifyConfig:
    """Deterministic grids and tolerances for `run_suite`."""

    radial_fractions: tuple = (0.1, 0.2142857142857143, 0.32857142857142857,
                               0.44285714285714284, 0.5571428571428572,
                               0.6714285714285715, 0.7857142857142857, 0.9)
    n_angles: int = 4
    alphas: tuple = (0.0, 0.7, 2.3)
    times: tuple = (0.0, 0.5, 3.1)
    moment_n_max: int = 15
    series_tol: float = 1e-9          # identities mediated by series summation
    matexp_tol: float = 1e-6          # identities mediated by matrix exponentials
    quad_tol: float = 1e-10
    derived_weight_tol: float = 1e-8
    unbounded_grid_radius: float = 2.0
    trunc: TruncConfig = field(default_factory=TruncConfig)
    validation_cutoff: int = 50


DEFAULT_VERIFY = VerifyConfig()


def _family_dual(family: str) -> bool:
    if family in ("gk", "generalized_gk"):
        return False
    if family in ("dual", "dual_gk", "generalized_dual"):
        return True
    raise ParameterError(f"criteria run on the gk/dual families, not {family!r}")


def z_grid(model: SpectrumModel, family: str, config: VerifyConfig = DEFAULT_VERIFY) -> list:
    """Deterministic complex grid: radial fractions of the family's radius
    (a fixed reference scale when the radius is unbounded) crossed with
    equally spaced angles."""
    radius = spectra.estimate_radius(model, dual=_family_dual(family))
    scale = config.unbounded_grid_radius if math.isinf(radius) else radius
    pts = []
    for frac in config.radial_fractions:
        for k in range(config.n_angles):
            pts.append(frac * scale * cmath.exp(2j * math.pi * k / config.n_angles))
    return pts


def _build(model, family, z, alpha, cfg: VerifyConfig, min_cutoff=0):
    if _family_dual(family):
        return states.dgkcs(model, z, alpha, cfg.trunc, min_cutoff=min_cutoff)
    return states.gkcs(model, z, alpha, cfg.trunc, min_cutoff=min_cutoff)


# ---------------------------------------------------------------------------
# individual checks
# ---------------------------------------------------------------------------


def check_action_identity(
    model: SpectrumModel,
    family: str,
    z_values,
    alpha: float = 0.0,
    config: VerifyConfig = DEFAULT_VERIFY,
    min_cutoff: int = 0,
) -> CheckEntry:
    """max over the grid of |<H> - omega |z|^2| / (omega |z|^2), with the
    Hamiltonian matching the family.  On finite-dimensional models the
    identity has an inherent defect equal to the top-level occupation; the
    analytic size of that defect is recorded in the details."""
    dual = _family_dual(family)
    worst = 0.0
    worst_z = None
    top_defect = 0.0
    for z in z_values:
        x = abs(z) ** 2
        if x == 0:
            continue
        s = _build(model, family, z, alpha, config, min_cutoff)
        h = operators.hamiltonian(model, s.cutoff, dual=dual)
        mean = operators.expectation(h, s).real
        res = abs(mean - x) / x
        if res > worst:
            worst, worst_z = res, z
        if model.finite:
            top_defect = max(top_defect, float(s.probabilities()[-1]))
    details = f"worst z = {worst_z}"
    if model.finite:
        details += (
            f"; finite level range: identity defect equals top-level occupation"
            f" (= {top_defect:.3e} here)"
        )
    return CheckEntry("action_identity", worst, config.series_tol,
                      worst <= config.series_tol, details)


def check_temporal_stability(
    model: SpectrumModel,
    family: str,
    z: complex,
    alpha: float,
    t_values,
    config: VerifyConfig = DEFAULT_VERIFY,
    base_time: float = 0.0,
    min_cutoff: int = 0,
) -> CheckEntry:
    """max over t of || S(omega t) state(z, alpha) - state(z, alpha + omega t) ||.

    For the explicitly time-labeled families the same statement is checked
    as evolution |J, theta, t0> -> |J, theta, t0 + t|."""
    dual = _family_dual(family)
    generalized = family.startswith("generalized")
    worst = 0.0
    for t in t_values:
        if generalized:
            J, theta = abs(z) ** 2, cmath.phase(z)
            s0 = states.generalized_gkcs(model, J, theta, base_time, dual=dual,
                                         trunc=config.trunc, min_cutoff=min_cutoff)
            s1 = states.generalized_gkcs(model, J, theta, base_time + t, dual=dual,
                                         trunc=config.trunc, min_cutoff=s0.cutoff)
        else:
            s0 = _build(model, family, z, alpha, config, min_cutoff)
            s1 = _build(model, family, z, alpha + model.omega * t, config, s0.cutoff)
        sop = operators.evolution(model, model.omega * t, s0.cutoff, dual=dual)
        evolved = sop.entries @ s0.amplitudes
        worst = max(worst, float(np.linalg.norm(evolved - s1.amplitudes)))
    return CheckEntry("temporal_stability", worst, config.series_tol,
                      worst <= config.series_tol, f"t grid {tuple(t_values)}",
                      kind="absolute")


def check_eigenstate(
    model: SpectrumModel,
    family: str,
    z: complex,
    alpha: float = 0.0,
    config: VerifyConfig = DEFAULT_VERIFY,
    min_cutoff: int = 0,
) -> CheckEntry:
    """|| ladder . state - z state || on the truncation interior; for the
    parity superpositions the squared lowering with eigenvalue z^2.  The
    excluded boundary rows are reported in the details."""
    s = state_for_family(model, family, z, alpha, config.trunc, min_cutoff)
    which = "dualA" if states.family_is_dual(s.label.family) else "A"
    a_op = operators.ladder(model, alpha, s.cutoff, which)
    if s.label.family in ("even_dual", "odd_dual"):
        mat = a_op.entries @ a_op.entries
        lam = z * z
        n_boundary = 2
    else:
        mat = a_op.entries
        lam = z
        n_boundary = 1
    diff = mat @ s.amplitudes - lam * s.amplitudes
    interior = float(np.linalg.norm(diff[:-n_boundary])) if s.cutoff + 1 > n_boundary else 0.0
    boundary = float(np.linalg.norm(diff[-n_boundary:]))
    tol = max(config.series_tol, 10.0 * s.tail_bound)
    details = f"boundary rows ({n_boundary}) residual {boundary:.3e}; tail bound {s.tail_bound:.3e}"
    return CheckEntry("eigenstate", interior, tol, interior <= tol, details, kind="absolute")


def state_for_family(model, family, z, alpha, trunc, min_cutoff=0):
    if family in ("gk", "generalized_gk"):
        return states.gkcs(model, z, alpha, trunc, min_cutoff=min_cutoff)
    if family in ("dual", "dual_gk", "generalized_dual"):
        return states.dgkcs(model, z, alpha, trunc, min_cutoff=min_cutoff)
    if family == "even_dual":
        return states.even_odd(model, z, alpha, "+", trunc)
    if family == "odd_dual":
        return states.even_odd(model, z, alpha, "-", trunc)
    if family == "cat_real":
        return states.cat(model, z, alpha, "real", trunc)
    if family == "cat_imag":
        return states.cat(model, z, alpha, "imaginary", trunc)
    raise ParameterError(f"unknown family {family!r}")


def check_resolution_identity(
    model: SpectrumModel,
    family: str,
    n_values=None,
    config: VerifyConfig = DEFAULT_VERIFY,
) -> CheckEntry:
    """Quadrature of the registered weight against the moment table:
    max_n |integral x^n sigma(x) dx - moment(n)| / moment(n).

    The hydrogen-like dual moments have no quadrature-friendly weight; they
    are checked against their factorial rewrite 2 n! ((n+1)!)^2 / (n+2)!
    instead.  Families with no known weight are skipped.
    """
    dual = _family_dual(family)
    top = model.max_index()
    if n_values is None:
        n_values = range(0, config.moment_n_max + 1)
    n_values = [n for n in n_values if top is None or n <= top]
    n_max = max(n_values)
    table = spectra.moment_table(model, n_max)
    log_moments = table.log_mu if dual else table.log_rho

    if model.name == "hydrogen" and dual:
        worst = 0.0
        for n in n_values:
            ref = (math.log(2.0) + numerics.log_factorial(n)
                   + 2.0 * numerics.log_factorial(n + 1) - numerics.log_factorial(n + 2))
            worst = max(worst, abs(log_moments[n] - ref))
        return CheckEntry(
            "resolution_identity", worst, config.quad_tol, worst <= config.quad_tol,
            "algebraic factorial-moment identity (weight has no elementary form); "
            "verified at fixed phase label via the reduced radial moment problem",
        )

    weight = closed_forms.moment_weight(model, family)
    if not weight.available:
        return CheckEntry(
            "resolution_identity", None, config.quad_tol, None,
            "skipped: no closed-form weight registered for this family",
            skipped=True,
        )

    rule = numerics.gauss_rule(40, weight.support_radius)
    tol = config.derived_weight_tol if weight.kind == "derived_closed_form" else config.quad_tol
    worst = 0.0
    for n in n_values:
        integral = numerics.integrate(lambda x, n=n: x**n * weight.evaluator(x), rule,
                                      target=min(tol, 1e-11))
        moment = math.exp(log_moments[n])
        worst = max(worst, abs(integral - moment) / moment)
    return CheckEntry(
        "resolution_identity", worst, tol, worst <= tol,
        f"{weight.kind} weight, moments n <= {n_max}; "
        "verified at fixed phase label via the reduced radial moment problem",
    )


_CROSS_DUAL = {"su11_gp": "su11_bg", "su11_bg": "su11_gp"}


def check_self_duality(
    model: SpectrumModel,
    config: VerifyConfig = DEFAULT_VERIFY,
    z_values=None,
    alphas=(0.0, 0.7),
) -> CheckEntry:
    """Elementwise distance between gk and dual amplitudes over a small
    (z, alpha) grid.  Expected to vanish only for the self-dual harmonic
    entry; for the SU(1,1) pair the dual of one member is compared against
    the other member (cross-duality); anywhere else the distance is
    informational."""
    if z_values is None:
        z_values = [0.3, 0.55 * cmath.exp(0.9j)]
    partner_name = _CROSS_DUAL.get(model.name)
    worst = 0.0
    for z in z_values:
        for alpha in alphas:
            a = states.gkcs(model, z, alpha, config.trunc)
            if partner_name is None:
                b = states.dgkcs(model, z, alpha, config.trunc, min_cutoff=a.cutoff)
                a = states.gkcs(model, z, alpha, config.trunc, min_cutoff=b.cutoff)
            else:
                partner = replace(model, name=partner_name)
                b = states.dgkcs(partner, z, alpha, config.trunc, min_cutoff=a.cutoff)
                a = states.gkcs(model, z, alpha, config.trunc, min_cutoff=b.cutoff)
            n = min(a.cutoff, b.cutoff) + 1
            worst = max(worst, float(np.max(np.abs(a.amplitudes[:n] - b.amplitudes[:n]))))
    if model.name == "harmonic":
        tol = 1e-13
        return CheckEntry("self_duality", worst, tol, worst <= tol,
                          "self-dual spectrum", kind="absolute")
    if partner_name is not None:
        tol = 1e-12
        return CheckEntry("self_duality", worst, tol, worst <= tol,
                          f"cross-duality against {partner_name}", kind="absolute")
    return CheckEntry("self_duality", worst, None, None,
                      f"expected: not self-dual (distance {worst:.3e})",
                      kind="absolute", skipped=True)


def check_closed_forms(
    model: SpectrumModel,
    family: str,
    config: VerifyConfig = DEFAULT_VERIFY,
    x_fractions=(0.1, 0.3, 0.5, 0.7, 0.9),
    pair_count: int = 5,
) -> tuple:
    """Two entries: series normalization against the registered closed form
    over an x grid, and direct overlaps against the registered kernel over
    deterministic (z, z') pairs.  Skipped where nothing is registered."""
    dual = _family_dual(family)
    fam = "dual_gk" if dual else "gk"

    norm_entry: CheckEntry
    cf = closed_forms.normalization_closed_form(model, family)
    if cf is None:
        norm_entry = CheckEntry("normalization_closed_form", None, config.series_tol, None,
                                "skipped: no closed form registered", skipped=True)
    else:
        fn, radius_x, tol = cf
        scale = radius_x if math.isfinite(radius_x) else 1.0
        worst = 0.0
        for frac in x_fractions:
            x = frac * scale
            series = states.normalization(model, x, fam, config.trunc)
            ref = fn(x)
            worst = max(worst, abs(series - ref) / abs(ref))
        norm_entry = CheckEntry("normalization_closed_form", worst, tol, worst <= tol,
                                f"x grid fractions {x_fractions} of scale {scale:g}")

    kernel = closed_forms.overlap_kernel_closed_form(model, family)
    if kernel is None:
        overlap_entry = CheckEntry("overlap_closed_form", None, 1e-8, None,
                                   "skipped: no closed form registered", skipped=True)
    else:
        gfun, tol = kernel
        radius = spectra.estimate_radius(model, dual=dual)
        scale = min(radius, 1.0) if math.isfinite(radius) else 1.0
        pairs = []
        for k in range(pair_count):
            r1 = 0.15 + 0.6 * k / max(pair_count - 1, 1)
            r2 = 0.75 - 0.5 * k / max(pair_count - 1, 1)
            phi = 0.4 * k
            pairs.append((0.9 * scale * r1 * cmath.exp(1j * phi),
                          0.9 * scale * r2 * cmath.exp(1j * phi)))
        worst = 0.0
        for z1, z2 in pairs:
            a = state_for_family(model, fam, z1, 0.3, config.trunc)
            b = state_for_family(model, fam, z2, 0.3, config.trunc)
            direct = states.overlap(a, b)
            w = np.conj(z1) * z2
            ref = gfun(w) / math.sqrt(a.norm_constant * b.norm_constant)
            worst = max(worst, abs(direct - ref) / abs(ref))
        overlap_entry = CheckEntry("overlap_closed_form", worst, tol, worst <= tol,
                                   f"{pair_count} label pairs at scale {scale:g}")
    return norm_entry, overlap_entry


# ---------------------------------------------------------------------------
# suite
# ---------------------------------------------------------------------------


def _validation_entry(model: SpectrumModel, family: str, config: VerifyConfig) -> CheckEntry:
    dual = _family_dual(family)
    top = model.max_index()
    cutoff = config.validation_cutoff if top is None else min(config.validation_cutoff, top)
    report = spectra.validate_spectrum(model, cutoff)
    ok = report.chain_ok(dual)
    details = (
        f"e chain increasing: {report.e_strictly_increasing}; "
        f"eps chain increasing: {report.eps_strictly_increasing}; "
        f"ratio bound: {report.ratio_bound_ok}; "
        f"first violations: {report.first_violation}"
    )
    return CheckEntry("validate_spectrum", 0.0 if ok else 1.0, 0.5, ok, details,
                      kind="absolute")


def run_suite(
    model: SpectrumModel,
    family: str,
    config: VerifyConfig = DEFAULT_VERIFY,
) -> CriteriaReport:
    """Run every applicable check on deterministic grids and assemble the
    entries in canonical order.  User-supplied spectra that fail the level
    validation abort immediately with a partial report."""
    family = "dual_gk" if family in ("dual", "dual_gk") else ("gk" if family == "gk" else family)
    dual = _family_dual(family)
    entries = [_validation_entry(model, family, config)]
    if model.name == "custom" and not entries[0].passed:
        return CriteriaReport(model, family, tuple(entries))

    grid = z_grid(model, family, config)
    probe = _build(model, family, max(grid, key=abs), 0.0, config)

    def with_retruncation(make_entry):
        """Classify a failing entry by doubling the cutoff once: a >= 10x
        residual drop marks it truncation-limited, anything else persistent."""
        entry = make_entry(0)
        if entry.passed is False:
            doubled = make_entry(2 * probe.cutoff)
            if doubled.residual is not None and entry.residual and (
                doubled.residual <= 0.1 * entry.residual
            ):
                entry = replace(entry, details=entry.details + "; truncation-limited "
                                f"(residual {doubled.residual:.3e} at doubled cutoff)")
            else:
                entry = replace(entry, details=entry.details + "; persistent at doubled cutoff")
        return entry

    # action identity over the full grid and all alphas
    def action(min_cutoff):
        worst = None
        for alpha in config.alphas:
            e = check_action_identity(model, family, grid, alpha, config, min_cutoff)
            if worst is None or e.residual > worst.residual:
                worst = e
        return worst

    entries.append(with_retruncation(action))

    def temporal(min_cutoff):
        worst = None
        for z in grid:
            for alpha in config.alphas:
                e = check_temporal_stability(model, family, z, alpha,
                                             [t for t in config.times if t],
                                             config, min_cutoff=min_cutoff)
                if worst is None or e.residual > worst.residual:
                    worst = e
        return worst

    entries.append(with_retruncation(temporal))

    def eigen(min_cutoff):
        worst = None
        for z in grid:
            for alpha in config.alphas:
                e = check_eigenstate(model, family, z, alpha, config, min_cutoff)
                if worst is None or e.residual > worst.residual:
                    worst = e
        return worst

    entries.append(with_retruncation(eigen))

    entries.append(check_resolution_identity(model, family, config=config))
    entries.extend(check_closed_forms(model, family, config))
    entries.append(check_self_duality(model, config))

    return CriteriaReport(model, family, tuple(entries))
