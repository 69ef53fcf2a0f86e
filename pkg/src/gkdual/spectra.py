"""Catalog of physical energy spectra and their factorial-moment machinery.

Every construction in this package starts from a sequence of dimensionless,
pre-shifted level values ``e_0 = 0 < e_1 < e_2 < ...``.  The catalog:

    harmonic            e_n = n
    poschl_teller       e_n = n(n + nu),          nu > 2
    infinite_well       e_n = n(n + 2)
    morse               e_n = n(M + 1 - n)/(M + 2),   integer M >= 1, n = 0..M
    hydrogen            e_n = 1 - 1/(n + 1)^2
    penson_solomon      e_n = n q^(2(1 - n)),     q > 0
    su11_gp             e_n = n/(n + 2k - 1),     2k integer >= 2
    su11_bg             e_n = n(n + 2k - 1)
    custom              user-supplied table

Each spectrum carries a dual sequence ``eps_n = n^2/e_n`` and two factorial
moments: ``rho(n)`` (running product of e) and ``mu(n)`` (running product of
eps, equal to (n!)^2/rho(n)).  Moments are stored in the log domain because
mu grows like n!(n+1)! for the hydrogen-like entry and overflows doubles
well before n = 100.

The SU(1,1) entries use the running-product convention rho(n) = [e_n]!,
which differs from the textbook coefficient n!/Gamma(n+2k) by the constant
Gamma(2k); the constant is z-independent and cancels after normalization,
so state amplitudes are unaffected.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import IndexRangeError, ParameterError

CATALOG_NAMES = (
    "harmonic",
    "poschl_teller",
    "infinite_well",
    "morse",
    "hydrogen",
    "penson_solomon",
    "su11_gp",
    "su11_bg",
)

_PARAM_KEYS = {
    "harmonic": (),
    "poschl_teller": ("nu",),
    "infinite_well": (),
    "morse": ("M",),
    "hydrogen": (),
    "penson_solomon": ("q",),
    "su11_gp": ("kappa",),
    "su11_bg": ("kappa",),
    "custom": (),
}


@dataclass(frozen=True)
class SpectrumModel:
    """A named eigenvalue sequence with parameters.

    ``dimension`` is None for unbounded spectra and M+1 for the Morse entry
    (levels n = 0..M; the dual value eps_{M+1} is singular, so the level
    range stops at M).  Custom models carry their table in ``e_table``.
    """

    name: str
    params: tuple = ()
    omega: float = 1.0
    dimension: int | None = None
    e_table: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if self.name not in CATALOG_NAMES and self.name != "custom":
            raise ParameterError(f"unknown spectrum model {self.name!r}")
        if self.omega <= 0:
            raise ParameterError("omega must be positive")

    def param(self, key: str) -> float:
        for k, v in self.params:
            if k == key:
                return v
        raise KeyError(key)

    @property
    def finite(self) -> bool:
        return self.dimension is not None

    def max_index(self) -> int | None:
        """Largest admissible level index, or None when unbounded."""
        return None if self.dimension is None else self.dimension - 1

    def spec_string(self) -> str:
        if not self.params:
            return self.name
        args = ",".join(f"{k}={_fmt_param(v)}" for k, v in self.params)
        return f"{self.name}:{args}"

    def __str__(self) -> str:
        return self.spec_string()


def _fmt_param(v) -> str:
    if isinstance(v, float) and v.is_integer():
        return str(int(v))
    return str(v)


def harmonic(omega: float = 1.0) -> SpectrumModel:
    return SpectrumModel("harmonic", omega=omega)


def poschl_teller(nu: float, omega: float = 1.0) -> SpectrumModel:
    if not nu > 2:
        raise ParameterError(f"poschl_teller requires nu > 2, got nu={nu}")
    return SpectrumModel("poschl_teller", (("nu", float(nu)),), omega=omega)


def infinite_well(omega: float = 1.0) -> SpectrumModel:
    return SpectrumModel("infinite_well", omega=omega)


def morse(M: int, omega: float = 1.0) -> SpectrumModel:
    if int(M) != M or M < 1:
        raise ParameterError(f"morse requires integer M >= 1, got M={M}")
    return SpectrumModel("morse", (("M", int(M)),), omega=omega, dimension=int(M) + 1)


def hydrogen(omega: float = 1.0) -> SpectrumModel:
    return SpectrumModel("hydrogen", omega=omega)


def penson_solomon(q: float, omega: float = 1.0) -> SpectrumModel:
    if not q > 0:
        raise ParameterError(f"penson_solomon requires q > 0, got q={q}")
    return SpectrumModel("penson_solomon", (("q", float(q)),), omega=omega)


def _check_kappa(kappa: float) -> float:
    two_k = 2.0 * kappa
    if abs(two_k - round(two_k)) > 1e-12 or round(two_k) < 2:
        raise ParameterError(
            f"SU(1,1) representation label must be in {{1, 3/2, 2, 5/2, ...}}, got kappa={kappa}"
        )
    return float(kappa)


def su11_gp(kappa: float, omega: float = 1.0) -> SpectrumModel:
    return SpectrumModel("su11_gp", (("kappa", _check_kappa(kappa)),), omega=omega)


def su11_bg(kappa: float, omega: float = 1.0) -> SpectrumModel:
    return SpectrumModel("su11_bg", (("kappa", _check_kappa(kappa)),), omega=omega)


def custom_spectrum(e_values: Sequence[float], omega: float = 1.0) -> SpectrumModel:
    """Wrap an explicit level table.  The table is accepted as given;
    monotonicity is checked later, by `validate_spectrum` and by the state
    constructors (so that deliberately broken spectra can be fed to the
    verification suite as negative controls)."""
    e = tuple(float(v) for v in e_values)
    if len(e) < 2:
        raise ParameterError("custom spectrum needs at least levels e_0, e_1")
    if e[0] != 0.0:
        raise ParameterError(f"custom spectrum must be pre-shifted: e_0 = 0, got {e[0]}")
    if any(v <= 0 for v in e[1:]):
        raise ParameterError("custom spectrum must have e_n > 0 for n >= 1")
    return SpectrumModel("custom", omega=omega, dimension=len(e), e_table=e)


def custom_from_json(path: str, omega: float | None = None) -> SpectrumModel:
    """Load ``{"e": [0, e1, ...], "omega": 1.0}`` from a JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    if "e" not in payload:
        raise ParameterError(f"{path}: missing 'e' array")
    w = omega if omega is not None else float(payload.get("omega", 1.0))
    return custom_spectrum(payload["e"], omega=w)


# ---------------------------------------------------------------------------
# model-spec grammar:  name[:key=value[,key=value]...]
# ---------------------------------------------------------------------------

_SPEC_BUILDERS = {
    "harmonic": lambda kw: harmonic(**kw),
    "poschl_teller": lambda kw: poschl_teller(**kw),
    "infinite_well": lambda kw: infinite_well(**kw),
    "morse": lambda kw: morse(**kw),
    "hydrogen": lambda kw: hydrogen(**kw),
    "penson_solomon": lambda kw: penson_solomon(**kw),
    "su11_gp": lambda kw: su11_gp(**kw),
    "su11_bg": lambda kw: su11_bg(**kw),
}

_SPEC_KEY_ALIASES = {"nu": "nu", "m": "M", "q": "q", "kappa": "kappa", "k": "kappa", "omega": "omega"}


def parse_model_spec(spec: str) -> SpectrumModel:
    """Parse a model spec string such as ``poschl_teller:nu=3`` or
    ``custom:file=spectrum.json``."""
    name, _, argstr = spec.partition(":")
    name = name.strip()
    kwargs: dict = {}
    if argstr:
        for item in argstr.split(","):
            key, eq, value = item.partition("=")
            if not eq:
                raise ParameterError(f"bad model argument {item!r} in {spec!r} (expected key=value)")
            kwargs[key.strip()] = value.strip()
    if name == "custom":
        path = kwargs.pop("file", None)
        if path is None:
            raise ParameterError("custom model spec needs file=<path to JSON spectrum>")
        omega = float(kwargs.pop("omega")) if "omega" in kwargs else None
        if kwargs:
            raise ParameterError(f"unknown custom-model arguments {sorted(kwargs)}")
        return custom_from_json(path, omega=omega)
    if name not in _SPEC_BUILDERS:
        raise ParameterError(f"unknown spectrum model {name!r} (catalog: {', '.join(CATALOG_NAMES)})")
    typed: dict = {}
    for key, value in kwargs.items():
        canon = _SPEC_KEY_ALIASES.get(key.lower())
        if canon is None:
            raise ParameterError(f"unknown parameter {key!r} for model {name!r}")
        typed[canon] = int(value) if canon == "M" else float(value)
    return _SPEC_BUILDERS[name](typed)


# ---------------------------------------------------------------------------
# eigenvalues
# ---------------------------------------------------------------------------


def _check_index(model: SpectrumModel, n: int) -> None:
    if n < 0:
        raise IndexRangeError(f"level index must be >= 0, got {n}")
    top = model.max_index()
    if top is not None and n > top:
        raise IndexRangeError(f"{model.spec_string()} has levels n = 0..{top}, got n={n}")


def eigenvalue(model: SpectrumModel, n: int) -> float:
    """Level value e_n of the model (dimensionless; e_0 = 0)."""
    _check_index(model, n)
    name = model.name
    if name == "harmonic":
        return float(n)
    if name == "poschl_teller":
        return n * (n + model.param("nu"))
    if name == "infinite_well":
        return float(n * (n + 2))
    if name == "morse":
        M = model.param("M")
        return n * (M + 1 - n) / (M + 2)
    if name == "hydrogen":
        return 1.0 - 1.0 / (n + 1) ** 2
    if name == "penson_solomon":
        return n * model.param("q") ** (2.0 * (1 - n))
    if name == "su11_gp":
        return 0.0 if n == 0 else n / (n + 2.0 * model.param("kappa") - 1.0)
    if name == "su11_bg":
        return n * (n + 2.0 * model.param("kappa") - 1.0)
    return model.e_table[n]


def dual_eigenvalue(model: SpectrumModel, n: int) -> float:
    """Dual level value eps_n = n^2/e_n, with eps_0 = 0."""
    _check_index(model, n)
    if n == 0:
        return 0.0
    return n * n / eigenvalue(model, n)


def eigenvalues(model: SpectrumModel, cutoff: int) -> np.ndarray:
    """Vector (e_0, ..., e_cutoff)."""
    _check_index(model, cutoff)
    n = np.arange(cutoff + 1, dtype=float)
    name = model.name
    if name == "harmonic":
        return n
    if name == "poschl_teller":
        return n * (n + model.param("nu"))
    if name == "infinite_well":
        return n * (n + 2)
    if name == "morse":
        M = model.param("M")
        return n * (M + 1 - n) / (M + 2)
    if name == "hydrogen":
        return 1.0 - 1.0 / (n + 1) ** 2
    if name == "penson_solomon":
        # n * q^(2(1-n)) evaluated in the log domain to dodge overflow for q < 1
        q = model.param("q")
        out = np.zeros_like(n)
        out[1:] = np.exp(np.log(n[1:]) + 2.0 * (1 - n[1:]) * math.log(q))
        return out
    if name == "su11_gp":
        out = np.zeros_like(n)
        out[1:] = n[1:] / (n[1:] + 2.0 * model.param("kappa") - 1.0)
        return out
    if name == "su11_bg":
        return n * (n + 2.0 * model.param("kappa") - 1.0)
    return np.asarray(model.e_table[: cutoff + 1], dtype=float)


def dual_eigenvalues(model: SpectrumModel, cutoff: int) -> np.ndarray:
    """Vector (eps_0, ..., eps_cutoff) with eps_n = n^2/e_n."""
    e = eigenvalues(model, cutoff)
    n = np.arange(cutoff + 1, dtype=float)
    eps = np.zeros_like(e)
    eps[1:] = n[1:] ** 2 / e[1:]
    return eps


# ---------------------------------------------------------------------------
# factorial moments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MomentTable:
    """Precomputed spectra and log-domain factorial moments up to a cutoff.

    log_rho[n] = sum_{k<=n} ln e_k  (so rho(0) = 1, rho(n)/rho(n-1) = e_n)
    log_mu[n]  = sum_{k<=n} ln eps_k
    """

    model: SpectrumModel
    cutoff: int
    e: np.ndarray
    eps: np.ndarray
    log_rho: np.ndarray
    log_mu: np.ndarray

    def rho(self, n: int) -> float:
        return math.exp(self.log_rho[n])

    def mu(self, n: int) -> float:
        return math.exp(self.log_mu[n])

    def rho_values(self) -> np.ndarray:
        return np.exp(self.log_rho)

    def mu_values(self) -> np.ndarray:
        return np.exp(self.log_mu)


def moment_table(model: SpectrumModel, cutoff: int) -> MomentTable:
    if cutoff < 0:
        raise IndexRangeError("cutoff must be >= 0")
    e = eigenvalues(model, cutoff)
    eps = dual_eigenvalues(model, cutoff)
    log_rho = np.zeros(cutoff + 1)
    log_mu = np.zeros(cutoff + 1)
    if cutoff >= 1:
        if np.any(e[1:] <= 0):
            raise ParameterError(f"{model.spec_string()}: e_n must be positive for n >= 1")
        log_rho[1:] = np.cumsum(np.log(e[1:]))
        log_mu[1:] = np.cumsum(np.log(eps[1:]))
    return MomentTable(model, cutoff, e, eps, log_rho, log_mu)


# ---------------------------------------------------------------------------
# nonlinearity functions (modulus sqrt(e_n/n), intensity-dependent phase)
# ---------------------------------------------------------------------------


def nonlinearity(model: SpectrumModel, n: int, alpha: float = 0.0) -> complex:
    """Deformation factor turning a into the spectrum-adapted lowering
    operator: modulus sqrt(e_n/n), phase alpha*(e_n - e_{n-1}).  Undefined at
    n = 0 (the value 1 assigned to [f(0)]! lives in the state sums)."""
    if n < 1:
        raise IndexRangeError("nonlinearity is defined for n >= 1")
    _check_index(model, n)
    en = eigenvalue(model, n)
    em = eigenvalue(model, n - 1)
    return math.sqrt(en / n) * complex(math.cos(alpha * (en - em)), math.sin(alpha * (en - em)))


def dual_nonlinearity(model: SpectrumModel, n: int, alpha: float = 0.0) -> complex:
    """As `nonlinearity`, with the dual levels eps_n in place of e_n."""
    if n < 1:
        raise IndexRangeError("dual_nonlinearity is defined for n >= 1")
    _check_index(model, n)
    en = dual_eigenvalue(model, n)
    em = dual_eigenvalue(model, n - 1)
    return math.sqrt(en / n) * complex(math.cos(alpha * (en - em)), math.sin(alpha * (en - em)))


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumValidation:
    """Outcome of the monotonicity and ratio-bound checks on a spectrum.

    ``first_violation`` maps check name to the smallest offending index
    (None when the check passes).  Failures are reported, never raised.
    """

    model: SpectrumModel
    cutoff: int
    e_strictly_increasing: bool
    eps_strictly_increasing: bool
    ratio_bound_ok: bool
    f_ratio_bound_ok: bool
    first_violation: dict

    @property
    def ok(self) -> bool:
        return (
            self.e_strictly_increasing
            and self.eps_strictly_increasing
            and self.ratio_bound_ok
            and self.f_ratio_bound_ok
        )

    def chain_ok(self, dual: bool) -> bool:
        return self.eps_strictly_increasing if dual else self.e_strictly_increasing


def validate_spectrum(model: SpectrumModel, cutoff: int) -> SpectrumValidation:
    """Check, over n = 0..cutoff: both level chains strictly increasing, and
    for n >= 1 the two-sided ratio bound 1 > e_n/e_{n+1} > n^2/(n+1)^2
    together with its equivalent restatement for |f(n)/f(n+1)|."""
    if cutoff < 2:
        raise IndexRangeError("validation needs cutoff >= 2")
    top = model.max_index()
    if top is not None:
        cutoff = min(cutoff, top)
    e = eigenvalues(model, cutoff)
    eps = dual_eigenvalues(model, cutoff)
    first: dict = {}

    def chain_violation(values: np.ndarray) -> int | None:
        bad = np.nonzero(np.diff(values) <= 0)[0]
        return int(bad[0] + 1) if bad.size else None

    first["e_chain"] = chain_violation(e)
    first["eps_chain"] = chain_violation(eps)

    ratio_bad = None
    f_ratio_bad = None
    for n in range(1, cutoff):
        r = e[n] / e[n + 1]
        lo = n * n / ((n + 1.0) * (n + 1.0))
        if not (lo < r < 1.0) and ratio_bad is None:
            ratio_bad = n
        # |f(n)/f(n+1)|^2 = (e_n/e_{n+1}) * (n+1)/n must sit inside (n/(n+1), (n+1)/n)
        fr = r * (n + 1.0) / n
        if not (n / (n + 1.0) < fr < (n + 1.0) / n) and f_ratio_bad is None:
            f_ratio_bad = n
    first["ratio_bound"] = ratio_bad
    first["f_ratio_bound"] = f_ratio_bad

    return SpectrumValidation(
        model=model,
        cutoff=cutoff,
        e_strictly_increasing=first["e_chain"] is None,
        eps_strictly_increasing=first["eps_chain"] is None,
        ratio_bound_ok=ratio_bad is None,
        f_ratio_bound_ok=f_ratio_bad is None,
        first_violation=first,
    )


# ---------------------------------------------------------------------------
# convergence radii
# ---------------------------------------------------------------------------

RADIUS_PROBE = 256
RADIUS_TAIL_WINDOW = 16


def estimate_radius(model: SpectrumModel, dual: bool = False, probe: int = RADIUS_PROBE) -> float:
    """Numerical estimate of the convergence radius in z of the family's
    series: the square root of the geometric mean of the last few level
    values, evaluated at two probe depths.  Growth between the probes marks
    the radius as infinite.  Finite-dimensional models always return inf
    (their series are polynomials)."""
    if model.finite:
        return math.inf

    def half_log_tail_mean(cut: int) -> float:
        ev = dual_eigenvalues(model, cut) if dual else eigenvalues(model, cut)
        window = ev[-RADIUS_TAIL_WINDOW:]
        return 0.5 * float(np.mean(np.log(window)))

    r1 = half_log_tail_mean(probe)
    r2 = half_log_tail_mean(2 * probe)
    if r2 > r1 + math.log(1.05):
        return math.inf
    return math.exp(r2)
