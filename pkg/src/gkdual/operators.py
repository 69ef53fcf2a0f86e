"""Truncated-Fock-basis operator realizations.

All operators are dense complex (N+1) x (N+1) matrices over |0..N>.  The
truncation boundary convention: a creation-type matrix has no output for
|N> -> |N+1>, so operator-identity checks exclude the last row/column and
report the boundary residual separately; truncation artifacts must not
masquerade as algebra failures.

Operators that carry the phase parameter alpha freeze it at construction
(each instance lives in one fixed-alpha sector); instances with different
alpha never combine implicitly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import IndexRangeError, ParameterError, ShapeMismatchError
from . import numerics, spectra
from .spectra import SpectrumModel
from .states import FockVector

LADDER_KINDS = ("A", "A_dag", "dualA", "dualA_dag")
CONJUGATE_KINDS = ("B", "B_dag", "dualB", "dualB_dag")
DISPLACEMENT_VARIANTS = ("D", "dualD", "V", "dualV")


@dataclass(frozen=True)
class TruncatedOperator:
    """Dense operator on the truncated basis, tagged with its construction."""

    entries: np.ndarray
    cutoff: int
    tag: str
    model: SpectrumModel | None = None
    alpha: float | None = None
    log_diag: np.ndarray | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.cutoff + 1

    def dagger(self) -> "TruncatedOperator":
        return TruncatedOperator(
            self.entries.conj().T.copy(), self.cutoff, self.tag + "^dag", self.model, self.alpha
        )

    def __matmul__(self, other: "TruncatedOperator") -> "TruncatedOperator":
        _check_same_shape(self, other)
        return TruncatedOperator(
            self.entries @ other.entries, self.cutoff, f"({self.tag} {other.tag})",
            self.model, self.alpha,
        )


def _check_same_shape(a: TruncatedOperator, b: TruncatedOperator) -> None:
    if a.cutoff != b.cutoff:
        raise ShapeMismatchError(f"operator cutoffs differ: {a.cutoff} vs {b.cutoff}")


def _check_operator_cutoff(model: SpectrumModel, cutoff: int) -> None:
    if cutoff < 1:
        raise IndexRangeError("operator cutoff must be >= 1")
    top = model.max_index()
    if top is not None and cutoff > top:
        raise IndexRangeError(
            f"{model.spec_string()} supports cutoffs up to N = {top}, got {cutoff}"
        )


def _phase_steps(levels: np.ndarray, alpha: float) -> np.ndarray:
    """exp(i alpha (e_n - e_{n-1})) for n = 1..N."""
    return np.exp(1j * alpha * np.diff(levels))


# ---------------------------------------------------------------------------
# ladder operators and relatives
# ---------------------------------------------------------------------------


def ladder(model: SpectrumModel, alpha: float, cutoff: int, which: str = "A") -> TruncatedOperator:
    """Deformed ladder operator.

    A|n>      = sqrt(e_n)   e^{i alpha (e_n - e_{n-1})} |n-1>
    dualA|n>  = sqrt(eps_n) e^{i alpha (eps_n - eps_{n-1})} |n-1>

    and the _dag variants are their exact conjugate transposes.
    """
    if which not in LADDER_KINDS:
        raise ParameterError(f"which must be one of {LADDER_KINDS}")
    _check_operator_cutoff(model, cutoff)
    dual = which.startswith("dual")
    levels = spectra.dual_eigenvalues(model, cutoff) if dual else spectra.eigenvalues(model, cutoff)
    band = np.sqrt(levels[1:]) * _phase_steps(levels, alpha)
    entries = np.diag(band, k=1)
    op = TruncatedOperator(entries, cutoff, "dualA" if dual else "A", model, alpha)
    return op.dagger() if which.endswith("_dag") else op


def check_a(model: SpectrumModel, cutoff: int, dag: bool = False) -> TruncatedOperator:
    """Spectrum-weighted ladder without phase: |n> -> sqrt(e_n)|n-1>."""
    _check_operator_cutoff(model, cutoff)
    levels = spectra.eigenvalues(model, cutoff)
    op = TruncatedOperator(np.diag(np.sqrt(levels[1:]), k=1), cutoff, "check_a", model, None)
    return op.dagger() if dag else op


def conjugate_b(model: SpectrumModel, alpha: float, cutoff: int, which: str = "B") -> TruncatedOperator:
    """Canonical conjugate of the deformed ladder pair:

    B|n> = (n/sqrt(e_n)) e^{i alpha (e_n - e_{n-1})} |n-1>

    so that [A, B^dag] = [B, A^dag] = I on the truncation interior.  The
    deformation enters through 1/f(-alpha, n); the sign flip on alpha is what
    makes the pair canonically conjugate rather than mutually adjoint.
    """
    if which not in CONJUGATE_KINDS:
        raise ParameterError(f"which must be one of {CONJUGATE_KINDS}")
    _check_operator_cutoff(model, cutoff)
    dual = which.startswith("dual")
    levels = spectra.dual_eigenvalues(model, cutoff) if dual else spectra.eigenvalues(model, cutoff)
    n = np.arange(1, cutoff + 1, dtype=float)
    band = (n / np.sqrt(levels[1:])) * _phase_steps(levels, alpha)
    entries = np.diag(band, k=1)
    op = TruncatedOperator(entries, cutoff, "dualB" if dual else "B", model, alpha)
    return op.dagger() if which.endswith("_dag") else op


def hamiltonian(model: SpectrumModel, cutoff: int, dual: bool = False) -> TruncatedOperator:
    """diag(e_n) (dual: diag(eps_n)); equals A^dag A on rows 0..N-1."""
    _check_operator_cutoff(model, cutoff)
    levels = spectra.dual_eigenvalues(model, cutoff) if dual else spectra.eigenvalues(model, cutoff)
    tag = "H_dual" if dual else "H"
    return TruncatedOperator(np.diag(levels.astype(complex)), cutoff, tag, model, None)


def number_operator(cutoff: int) -> TruncatedOperator:
    return TruncatedOperator(np.diag(np.arange(cutoff + 1, dtype=complex)), cutoff, "n")


def evolution(model: SpectrumModel, alpha: float, cutoff: int, dual: bool = False) -> TruncatedOperator:
    """Diagonal phase map S(alpha) = diag(e^{-i alpha e_n}); unitary by
    construction, with S(a)S(b) = S(a+b)."""
    _check_operator_cutoff(model, cutoff)
    levels = spectra.dual_eigenvalues(model, cutoff) if dual else spectra.eigenvalues(model, cutoff)
    entries = np.diag(np.exp(-1j * alpha * levels))
    tag = "S_dual" if dual else "S"
    return TruncatedOperator(entries, cutoff, tag, model, alpha)


def interpolator(model: SpectrumModel, cutoff: int) -> TruncatedOperator:
    """Diagonal positive map T = diag(sqrt(rho(n)/mu(n))): sends unnormalized
    gk amplitudes (alpha = 0) to unnormalized dual amplitudes.

    The diagonal is kept in the log domain (rho/mu ratios overflow doubles by
    n ~ 30 for the hydrogen-like entry); linear entries saturate to inf/0
    where out of range, so apply through `log_diag` for extreme cutoffs.
    """
    _check_operator_cutoff(model, cutoff)
    table = spectra.moment_table(model, cutoff)
    log_diag = 0.5 * (table.log_rho - table.log_mu)
    with np.errstate(over="ignore"):
        entries = np.diag(np.exp(log_diag).astype(complex))
    return TruncatedOperator(entries, cutoff, "T", model, None, log_diag=log_diag)


def displacement(
    model: SpectrumModel,
    z: complex,
    alpha: float,
    cutoff: int,
    variant: str = "D",
    margin: int = 15,
) -> TruncatedOperator:
    """Exponential displacement built from the conjugate pair:

    D = exp(z B^dag - z* A)        dualD = exp(z dualB^dag - z* dualA)
    V = exp(z A^dag - z* B)        dualV = exp(z dualA^dag - z* dualB)

    Normalized D|0> (dualD|0>) reproduces the gk (dual) state up to a global
    constant; the V variants generate orbit states outside both families and
    are exposed without any further claims.

    The exponential is evaluated at cutoff + margin and cropped back to
    reduce boundary leakage.
    """
    if variant not in DISPLACEMENT_VARIANTS:
        raise ParameterError(f"variant must be one of {DISPLACEMENT_VARIANTS}")
    _check_operator_cutoff(model, cutoff)
    top = model.max_index()
    big = cutoff + margin if top is None else min(cutoff + margin, top)
    dual = variant.startswith("dual")
    a_kind = "dualA" if dual else "A"
    b_kind = "dualB" if dual else "B"
    a_op = ladder(model, alpha, big, a_kind)
    b_dag = conjugate_b(model, alpha, big, b_kind).dagger()
    if variant.endswith("D"):
        gen = z * b_dag.entries - np.conj(z) * a_op.entries
    else:
        a_dag = a_op.dagger()
        b_op = conjugate_b(model, alpha, big, b_kind)
        gen = z * a_dag.entries - np.conj(z) * b_op.entries
    full = numerics.matrix_exp(gen)
    entries = full[: cutoff + 1, : cutoff + 1].copy()
    return TruncatedOperator(entries, cutoff, variant, model, alpha)


def commutator(a: TruncatedOperator, b: TruncatedOperator) -> TruncatedOperator:
    """ab - ba.  The last row/column is truncation-affected by construction;
    compare identities on the interior."""
    _check_same_shape(a, b)
    entries = a.entries @ b.entries - b.entries @ a.entries
    return TruncatedOperator(entries, a.cutoff, f"[{a.tag},{b.tag}]", a.model, a.alpha)


# ---------------------------------------------------------------------------
# application to states
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AppliedVector:
    """Raw (possibly unnormalized) result of op @ state, with a heuristic
    upper estimate of how much truncation-boundary content it contains."""

    amplitudes: np.ndarray
    cutoff: int
    boundary_contamination: float

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def apply(op: TruncatedOperator, s: FockVector) -> AppliedVector:
    if op.cutoff != s.cutoff:
        raise ShapeMismatchError(
            f"operator cutoff {op.cutoff} does not match state cutoff {s.cutoff}"
        )
    out = op.entries @ s.amplitudes
    top = abs(s.amplitudes[-1])
    col_scale = float(np.max(np.abs(op.entries[:, -1]))) if op.dim else 0.0
    contamination = top * col_scale + math.sqrt(max(s.tail_bound, 0.0)) * col_scale
    return AppliedVector(out, op.cutoff, contamination)


def expectation(op: TruncatedOperator, s: FockVector) -> complex:
    if op.cutoff != s.cutoff:
        raise ShapeMismatchError(
            f"operator cutoff {op.cutoff} does not match state cutoff {s.cutoff}"
        )
    return complex(np.vdot(s.amplitudes, op.entries @ s.amplitudes))


# ---------------------------------------------------------------------------
# diagnostic: reconstruction of the number basis from repeated raising
# ---------------------------------------------------------------------------


def dual_basis_reconstruction(model: SpectrumModel, alpha: float, cutoff: int) -> dict:
    """Apply (dualA^dag)^n with the phase factor e^{i alpha eps_n} to |0> and
    divide by each of the two candidate normalizers, sqrt(rho(n)) and
    sqrt(mu(n)); report how far each lands from |n>.

    Returns per-convention arrays of distances ||v - |n>|| and modulus-only
    distances | ||v|| - 1 |, plus which convention reproduces the basis.
    The dual-moment normalizer sqrt(mu(n)) restores unit modulus for all n
    (and the exact basis vector at alpha = 0); the sqrt(rho(n)) normalizer
    does not, except for self-dual spectra.
    """
    _check_operator_cutoff(model, cutoff)
    a_dag = ladder(model, alpha, cutoff, "dualA_dag")
    table = spectra.moment_table(model, cutoff)
    dist_rho = np.zeros(cutoff + 1)
    dist_mu = np.zeros(cutoff + 1)
    mod_rho = np.zeros(cutoff + 1)
    mod_mu = np.zeros(cutoff + 1)
    v = np.zeros(cutoff + 1, dtype=complex)
    v[0] = 1.0
    for n in range(cutoff + 1):
        if n > 0:
            v = a_dag.entries @ v
        basis = np.zeros(cutoff + 1, dtype=complex)
        basis[n] = 1.0
        phase = cmath.exp(1j * alpha * table.eps[n])
        for log_w, dist, mod in (
            (table.log_rho[n], dist_rho, mod_rho),
            (table.log_mu[n], dist_mu, mod_mu),
        ):
            cand = v * phase * math.exp(-0.5 * log_w)
            dist[n] = float(np.linalg.norm(cand - basis))
            mod[n] = abs(float(np.linalg.norm(cand)) - 1.0)
    return {
        "distance_rho_normalizer": dist_rho,
        "distance_mu_normalizer": dist_mu,
        "modulus_error_rho_normalizer": mod_rho,
        "modulus_error_mu_normalizer": mod_mu,
        "unit_modulus_convention": "mu" if mod_mu.max() < mod_rho.max() else "rho",
    }
