"""Monte Carlo harness for finite-sample size and size-corrected power.

Two rolling-forecast data-generating processes, each comparing a zero
forecast against a rolling-window mean over the preceding ``R_tilde``
observations of the target series:

* unconditional-rolling: the target is an MA(h-1) with weights 0.5^k around
  a nonzero mean calibrated so both forecasts have equal population MSE
  when the estimation window matches ``R_tilde``;
* conditional-rolling: the target follows a zero-mean autoregression whose
  lag-h..lag-(h+R-1) coefficients are all 1/(2R), making the rolling mean
  informative; equal MSE again holds exactly at R = R_tilde.

Off-diagonal combinations (R != R_tilde) violate equal predictive ability
and map out power. Replications are archived as absolute statistics so
size-corrected power can be computed against the matched null cell.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import signal

from .dmtests import (
    DegenerateVarianceError,
    dm_test_bt,
    dm_test_bt_fb,
    dm_test_ewc_fb,
    dm_test_im,
    dm_test_m,
    dm_test_r,
)

__all__ = [
    "DgpSpec",
    "ExperimentResult",
    "DEFAULT_METHODS",
    "DEFAULT_H_SET",
    "DEFAULT_R_SET",
    "DEFAULT_P_SET",
    "CR_BURN_IN",
    "ma_weights",
    "ma_autocovariances",
    "calibrate_mu",
    "make_spec",
    "experiment_grid",
    "simulate_ucr",
    "simulate_cr",
    "run_experiment",
    "size_corrected_critical_value",
    "size_corrected_power",
]

DEFAULT_H_SET = (1, 3, 12)
DEFAULT_R_SET = (25, 75, 125, 175)
DEFAULT_P_SET = (25, 75, 125, 175, 1000)
CR_BURN_IN = 10_000

# Methods evaluated per replication. The periodogram test is a small-sample
# liability on short series and is excluded from the default battery.
DEFAULT_METHODS = (
    "dm_r",
    "dm_m",
    "dm_nw",
    "dm_nw_l",
    "dm_fb",
    "dm_ewc",
    "dm_im_q2",
    "dm_im_q5",
    "dm_im_q10",
)

_METHOD_RUNNERS = {
    "dm_r": lambda d, h, cl: dm_test_r(d, h=h, cl=cl),
    "dm_m": lambda d, h, cl: dm_test_m(d, h=h, cl=cl),
    "dm_nw": lambda d, h, cl: dm_test_bt(d, cl=cl),
    "dm_nw_l": lambda d, h, cl: dm_test_bt(d, rule="llsw", cl=cl),
    "dm_fb": lambda d, h, cl: dm_test_bt_fb(d, cl=cl),
    "dm_ewc": lambda d, h, cl: dm_test_ewc_fb(d, cl=cl),
    "dm_im_q2": lambda d, h, cl: dm_test_im(d, q=2, cl=cl),
    "dm_im_q5": lambda d, h, cl: dm_test_im(d, q=5, cl=cl),
    "dm_im_q10": lambda d, h, cl: dm_test_im(d, q=10, cl=cl),
}

_FAMILY_CODES = {"ucr": 0, "cr": 1}


@dataclass(frozen=True)
class DgpSpec:
    """One simulation cell: DGP family and its design parameters.

    ``R`` parameterizes the data-generating process (the MSE-equalizing
    window for the unconditional family, the autoregressive lag span for
    the conditional one); ``R_tilde`` is the window the rolling forecast
    actually uses. ``mu`` is the target-series mean, nonzero only for the
    unconditional family.
    """

    family: str
    h: int
    R: int
    R_tilde: int
    P: int
    mu: float = 0.0

    def __post_init__(self):
        if self.family not in _FAMILY_CODES:
            raise ValueError(f"unknown DGP family {self.family!r}; expected 'ucr' or 'cr'")
        for name in ("h", "R", "R_tilde", "P"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
        if self.family == "cr" and self.mu != 0.0:
            raise ValueError("the conditional-rolling target series has mean zero")


def ma_weights(h: int) -> np.ndarray:
    """Moving-average weights (1, 0.5, ..., 0.5^{h-1}) shared by both DGPs."""
    if h < 1:
        raise ValueError(f"horizon must be at least 1, got {h}")
    return 0.5 ** np.arange(h)


def ma_autocovariances(h: int) -> np.ndarray:
    """Autocovariances gamma_0..gamma_{h-1} of the MA(h-1) with weights 0.5^k."""
    theta = ma_weights(h)
    return np.array([np.dot(theta[: h - j], theta[j:]) for j in range(h)])


def calibrate_mu(h: int, R: int) -> float:
    """Target-series mean that equalizes the two population MSEs.

    The zero forecast errs by the full series (mean plus noise); the
    R-window rolling mean errs by independent noise plus its own sampling
    variance. Equality of mean squared errors requires
    mu^2 = Var(rolling mean) = R^{-2} [R gamma_0 + 2 sum_{j=1}^{h-1} (R-j) gamma_j].
    """
    if h < 1:
        raise ValueError(f"horizon must be at least 1, got {h}")
    if R < h:
        raise ValueError(
            f"the variance formula assumes the window covers the MA dependence; "
            f"need R >= h, got R={R}, h={h}"
        )
    gamma = ma_autocovariances(h)
    acc = R * gamma[0]
    for j in range(1, h):
        acc += 2.0 * (R - j) * gamma[j]
    return float(np.sqrt(acc) / R)


def make_spec(family: str, h: int, R: int, R_tilde: int, P: int) -> DgpSpec:
    """Build a :class:`DgpSpec`, auto-calibrating ``mu`` for the unconditional family."""
    mu = calibrate_mu(h, R) if family == "ucr" else 0.0
    return DgpSpec(family=family, h=h, R=R, R_tilde=R_tilde, P=P, mu=mu)


def experiment_grid(
    families=("ucr", "cr"),
    h_set=DEFAULT_H_SET,
    r_set=DEFAULT_R_SET,
    rt_set=DEFAULT_R_SET,
    p_set=DEFAULT_P_SET,
) -> list[DgpSpec]:
    """Cartesian product of cell parameters as a list of specs."""
    return [
        make_spec(fam, h, R, Rt, P)
        for fam in families
        for h in h_set
        for R in r_set
        for Rt in rt_set
        for P in p_set
    ]


def _ucr_series(spec: DgpSpec, rng: np.random.Generator) -> np.ndarray:
    T_tot = spec.R_tilde + spec.P + spec.h - 1
    theta = ma_weights(spec.h)
    # h-1 presample innovations so the first retained value already has the
    # full MA window behind it.
    eps = rng.standard_normal(T_tot + spec.h - 1)
    return spec.mu + np.convolve(eps, theta, mode="valid")


def _cr_series(spec: DgpSpec, rng: np.random.Generator) -> np.ndarray:
    T_tot = spec.R_tilde + spec.P + spec.h - 1
    eps = rng.standard_normal(CR_BURN_IN + T_tot)
    return _cr_recursion(eps, spec.h, spec.R)[CR_BURN_IN:]


def _cr_recursion(eps: np.ndarray, h: int, R: int) -> np.ndarray:
    """Run the conditional-rolling recursion from zero initial conditions."""
    x = signal.lfilter(ma_weights(h), [1.0], eps)
    a = np.zeros(h + R)
    a[0] = 1.0
    a[h:] = -1.0 / (2.0 * R)
    return signal.lfilter([1.0], a, x)


def _forecasts_from_path(y: np.ndarray, spec: DgpSpec):
    """Targets and the two competing forecasts along one simulated path.

    Forecast origins are the ``P`` dates with a full ``R_tilde`` window of
    past values; each targets the value ``h`` steps ahead. Forecast 1 is
    identically zero, forecast 2 the rolling mean of the window.
    """
    Rt, P, h = spec.R_tilde, spec.P, spec.h
    csum = np.concatenate(([0.0], np.cumsum(y)))
    rolling_mean = (csum[Rt : Rt + P] - csum[:P]) / Rt
    target = y[Rt + h - 1 : Rt + h - 1 + P]
    return target, np.zeros(P), rolling_mean


def simulate_ucr(spec: DgpSpec, rng):
    """One unconditional-rolling replication: (target, forecast1, forecast2)."""
    if spec.family != "ucr":
        raise ValueError(f"spec has family {spec.family!r}, expected 'ucr'")
    rng = np.random.default_rng(rng)
    return _forecasts_from_path(_ucr_series(spec, rng), spec)


def simulate_cr(spec: DgpSpec, rng):
    """One conditional-rolling replication: (target, forecast1, forecast2)."""
    if spec.family != "cr":
        raise ValueError(f"spec has family {spec.family!r}, expected 'cr'")
    rng = np.random.default_rng(rng)
    return _forecasts_from_path(_cr_series(spec, rng), spec)


_SIMULATORS = {"ucr": simulate_ucr, "cr": simulate_cr}


def simulate(spec: DgpSpec, rng):
    """Dispatch to the family's simulator."""
    return _SIMULATORS[spec.family](spec, rng)


@dataclass
class ExperimentResult:
    """Rejection rates and per-replication statistic archives for a grid run.

    Keys are ``(method, family, R, R_tilde, h, P)``. Archives hold the
    absolute statistic of every replication (0.0 for replications whose
    variance estimate degenerated; those are counted as non-rejections and
    tallied in ``degenerate_counts``).
    """

    rejection_rates: dict = field(default_factory=dict)
    archives: dict = field(default_factory=dict)
    degenerate_counts: dict = field(default_factory=dict)
    n_reps: int = 0
    cl: float = 0.05
    seed: int = 0
    methods: tuple = ()
    specs: tuple = ()


def _cell_key(spec: DgpSpec) -> tuple:
    return (spec.family, spec.R, spec.R_tilde, spec.h, spec.P)


def run_experiment(
    specs,
    methods=DEFAULT_METHODS,
    n_reps: int = 5000,
    cl: float = 0.05,
    seed: int = 0,
) -> ExperimentResult:
    """Run every method on ``n_reps`` replications of every cell in ``specs``.

    Replication streams are keyed by (seed, family, h, R, R_tilde, P, rep),
    so each cell's draws are independent of which other cells are in the
    grid and of the method list; rerunning any subset reproduces the full
    run's numbers exactly.
    """
    specs = tuple(specs)
    methods = tuple(methods)
    for m in methods:
        if m not in _METHOD_RUNNERS:
            known = ", ".join(sorted(_METHOD_RUNNERS))
            raise ValueError(f"unknown method {m!r}; expected one of: {known}")
    if n_reps < 100:
        raise ValueError(
            f"rejection rates need at least 100 replications, got {n_reps}"
        )
    if seed < 0:
        raise ValueError(f"seed must be nonnegative, got {seed}")
    result = ExperimentResult(
        n_reps=n_reps, cl=cl, seed=seed, methods=methods, specs=specs
    )
    for spec in specs:
        cell = _cell_key(spec)
        simulator = _SIMULATORS[spec.family]
        famcode = _FAMILY_CODES[spec.family]
        stats_abs = {m: np.empty(n_reps) for m in methods}
        rej_counts = dict.fromkeys(methods, 0)
        degen = dict.fromkeys(methods, 0)
        for rep in range(n_reps):
            rng = np.random.default_rng(
                [seed, famcode, spec.h, spec.R, spec.R_tilde, spec.P, rep]
            )
            target, f1, f2 = simulator(spec, rng)
            e1 = target - f1
            e2 = target - f2
            d = e1 * e1 - e2 * e2
            for m in methods:
                try:
                    out = _METHOD_RUNNERS[m](d, spec.h, cl)
                except DegenerateVarianceError:
                    stats_abs[m][rep] = 0.0
                    degen[m] += 1
                    continue
                stats_abs[m][rep] = abs(out.stat)
                rej_counts[m] += out.rej
        for m in methods:
            key = (m,) + cell
            result.rejection_rates[key] = rej_counts[m] / n_reps
            result.archives[key] = stats_abs[m]
            result.degenerate_counts[key] = degen[m]
    return result


def size_corrected_critical_value(abs_stats) -> float:
    """Empirical 95th-percentile critical value from archived null statistics.

    Returns the ceil(0.95 n)-th order statistic (1-based) of the absolute
    statistics; the index is computed in integer arithmetic so sample sizes
    divisible by 20 land exactly on the intended element.
    """
    a = np.asarray(abs_stats, dtype=float)
    if a.ndim != 1 or a.size == 0:
        raise ValueError("need a nonempty 1-D array of absolute statistics")
    idx = -(-19 * a.size // 20)
    return float(np.sort(a)[idx - 1])


def size_corrected_power(result: ExperimentResult, cell: tuple, method: str) -> float:
    """Share of a cell's archived statistics exceeding its matched null critical value.

    ``cell`` is (R, R_tilde, h, P) — or (family, R, R_tilde, h, P) when the
    result mixes both families. The matched null is the diagonal cell with
    the same estimation-window length, (family, R, R, h, P), which must be
    present in the same result (identical replication streams make the
    correction internally consistent). On the diagonal itself this returns
    1 - ceil(0.95 n)/n by construction.
    """
    cell = tuple(cell)
    if len(cell) == 4:
        families = {s.family for s in result.specs}
        if len(families) != 1:
            raise ValueError(
                "cell (R, R_tilde, h, P) is ambiguous over a multi-family result; "
                "pass (family, R, R_tilde, h, P)"
            )
        cell = (next(iter(families)),) + cell
    elif len(cell) != 5:
        raise ValueError(
            "cell must be (R, R_tilde, h, P) or (family, R, R_tilde, h, P), "
            f"got {cell!r}"
        )
    family, R, R_tilde, h, P = cell
    diag_key = (method, family, R, R, h, P)
    if diag_key not in result.archives:
        raise KeyError(
            f"diagonal null cell {diag_key[1:]} for method {method!r} is not in the "
            "experiment; include R_tilde == R cells in the same run"
        )
    cell_key = (method,) + cell
    if cell_key not in result.archives:
        raise KeyError(f"cell {cell!r} for method {method!r} is not in the experiment")
    crit = size_corrected_critical_value(result.archives[diag_key])
    return float(np.mean(result.archives[cell_key] > crit))
