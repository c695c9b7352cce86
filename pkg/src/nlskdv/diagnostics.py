"""Functionals, boundary traces, fluxes, virial quantities, law residuals.

Sign conventions.  Arrays are ordered away from x = 0, so all one-sided
stencils at node 0 are multiplied by the grid orientation where they
approximate odd derivatives.  The evolution laws carry direction-dependent
signs: with s = +1 on the right half-line and s = -1 on the left,

    M(t) = M(0) + s * 2 Im int_0^t u_x(0) conj(u(0)) ds'
    Q(t) = Q(0) - s * int_0^t (Qu + Qv) ds'
    E(t) = E(0) - s * int_0^t (E1 + E2) ds'

Residuals are normalized by max(1, scale of the tracked quantity) so that
zero-solution runs do not divide by zero.  Cumulative time integrals use
the trapezoid rule on the diagnostic cadence, and spatial derivatives use
the same stencil family as trace extraction, so residuals measure the law
rather than stencil mismatch.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .grid import (
    CouplingParams,
    Direction,
    FieldState,
    HalfLineGrid,
    first_derivative,
    trapezoid,
)

CSV_COLUMNS = (
    "t", "M", "Q", "E", "Qu", "Qv", "E1", "E2",
    "w_u1", "w_v1", "w_u2", "eta", "eta_d2_fd", "eta_d2_rhs", "P",
    "r_mass", "r_moment", "r_energy",
)


# ---------------------------------------------------------------------------
# per-state quantities

@dataclass
class BoundaryTraces:
    """One-sided traces at x = 0; time derivatives are filled from history."""

    u0: complex
    ux0: complex
    v0: float
    vx0: float
    vxx0: float
    ut0: complex = 0.0
    vt0: float = 0.0
    vxt0: float = 0.0


def extract_traces(state: FieldState, grid: HalfLineGrid) -> BoundaryTraces:
    """Second-order one-sided stencils at the boundary node.

    The first-derivative stencil is exact on linear functions and the
    second-derivative stencil on quadratics.  Time derivatives cannot be
    formed from a single state; they are attached by the series
    post-processing (centered differences over the diagnostic cadence,
    one-sided at the first/last samples).
    """
    h = grid.spacing
    s = grid.sign
    u, v = state.u, state.v
    return BoundaryTraces(
        u0=complex(u[0]),
        ux0=complex(s * (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h)),
        v0=float(v[0]),
        vx0=float(s * (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)),
        vxx0=float((2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h**2),
    )


def mass(state: FieldState, grid: HalfLineGrid) -> float:
    return trapezoid(np.abs(state.u) ** 2, grid)


def moment_Q(state: FieldState, grid: HalfLineGrid, params: CouplingParams) -> float:
    ux = first_derivative(state.u, grid)
    integrand = params.ratio * state.v**2 + 2.0 * np.imag(state.u * np.conj(ux))
    return trapezoid(integrand, grid)


def energy_E(state: FieldState, grid: HalfLineGrid, params: CouplingParams) -> float:
    ux = first_derivative(state.u, grid)
    vx = first_derivative(state.v, grid)
    au2 = np.abs(state.u) ** 2
    integrand = (
        params.alpha * state.v * au2
        - params.alpha / (6.0 * params.gamma) * state.v**3
        + params.beta / 2.0 * au2**2
        + params.alpha / (2.0 * params.gamma) * vx**2
        + np.abs(ux) ** 2
    )
    return trapezoid(integrand, grid)


def fluxes(traces: BoundaryTraces, params: CouplingParams):
    """The four boundary fluxes (Qu, Qv, E1, E2) from the traces at x = 0."""
    r = params.ratio
    au0_sq = abs(traces.u0) ** 2
    qu = (2.0 * abs(traces.ux0) ** 2
          + 2.0 * np.imag(traces.u0 * np.conj(traces.ut0))
          - params.beta * au0_sq**2)
    qv = (r * traces.vx0**2
          - 2.0 * r * traces.vxx0 * traces.v0
          - 2.0 * r / 3.0 * traces.v0**3)
    e1 = 2.0 * np.real(traces.ux0 * np.conj(traces.ut0)) + r * traces.vx0 * traces.vt0
    e2 = r / 2.0 * (traces.vxx0 + traces.v0**2 / 2.0 - params.gamma * au0_sq) ** 2
    return float(qu), float(qv), float(e1), float(e2)


def p_functional(state: FieldState, grid: HalfLineGrid, params: CouplingParams) -> float:
    """First-moment combination of both fields (left half-line quantity)."""
    if grid.direction is not Direction.LEFT:
        raise ValueError("P is defined on the left half-line")
    ax = np.abs(grid.nodes)
    wu1 = trapezoid(ax * np.abs(state.u) ** 2, grid)
    wv1 = trapezoid(ax * state.v**2, grid)
    return wu1 + 2.0 * abs(params.ratio) * wv1


def initial_virial_data(state: FieldState, grid: HalfLineGrid, params: CouplingParams):
    """(eta(0), eta'(0)) from the initial data on the left half-line."""
    if grid.direction is not Direction.LEFT:
        raise ValueError("the virial functional is defined on the left half-line")
    x = grid.nodes
    au2 = np.abs(state.u) ** 2
    ux = first_derivative(state.u, grid)
    eta0 = trapezoid(x**2 * au2, grid)
    eta0_d1 = (
        4.0 * np.imag(trapezoid(x * np.conj(state.u) * ux, grid))
        + 2.0 * params.ratio * trapezoid(np.abs(x) * state.v**2, grid)
        - trapezoid(np.abs(x) * au2, grid)
    )
    return float(eta0), float(eta0_d1)


# ---------------------------------------------------------------------------
# run recording

_SCALARS = (
    "int_u2", "int_v2", "int_ux_sq", "int_vx_sq", "int_u4", "int_v3",
    "int_vu2", "im_uux", "w_u2", "Xu", "Xv", "v0", "vx0", "vxx0", "outer_sup",
)


class RecordedSeries:
    """Raw per-sample integrals and traces accumulated during a run."""

    def __init__(self) -> None:
        self.t: list[float] = []
        self.u0: list[complex] = []
        self.ux0: list[complex] = []
        for name in _SCALARS:
            setattr(self, name, [])

    def append(self, state: FieldState, grid: HalfLineGrid) -> None:
        x = grid.nodes
        u, v = state.u, state.v
        au2 = np.abs(u) ** 2
        ux = first_derivative(u, grid)
        vx = first_derivative(v, grid)
        tr = extract_traces(state, grid)
        self.t.append(state.t)
        self.u0.append(tr.u0)
        self.ux0.append(tr.ux0)
        self.v0.append(tr.v0)
        self.vx0.append(tr.vx0)
        self.vxx0.append(tr.vxx0)
        self.int_u2.append(trapezoid(au2, grid))
        self.int_v2.append(trapezoid(v**2, grid))
        self.int_ux_sq.append(trapezoid(np.abs(ux) ** 2, grid))
        self.int_vx_sq.append(trapezoid(vx**2, grid))
        self.int_u4.append(trapezoid(au2**2, grid))
        self.int_v3.append(trapezoid(v**3, grid))
        self.int_vu2.append(trapezoid(v * au2, grid))
        self.im_uux.append(np.imag(trapezoid(u * np.conj(ux), grid)))
        self.w_u2.append(trapezoid(x**2 * au2, grid))
        self.Xu.append(trapezoid(x * au2, grid))
        self.Xv.append(trapezoid(x * v**2, grid))
        k = grid.outer_band_start
        self.outer_sup.append(float(max(np.max(np.abs(u[k:])), np.max(np.abs(v[k:])))))

    def finalize(self) -> dict:
        out = {"t": np.asarray(self.t, dtype=float),
               "u0": np.asarray(self.u0, dtype=complex),
               "ux0": np.asarray(self.ux0, dtype=complex)}
        for name in _SCALARS:
            out[name] = np.asarray(getattr(self, name), dtype=float)
        return out


def _time_derivative(values: np.ndarray, ts: np.ndarray) -> np.ndarray:
    if len(ts) < 2:
        return np.zeros_like(values)
    return np.gradient(values, ts)


def _second_difference(values: np.ndarray, ts: np.ndarray) -> np.ndarray:
    out = np.zeros_like(values, dtype=float)
    if len(ts) < 3:
        return out
    dt = ts[1] - ts[0]
    out[1:-1] = (values[2:] - 2.0 * values[1:-1] + values[:-2]) / dt**2
    out[0] = (values[0] - 2.0 * values[1] + values[2]) / dt**2
    out[-1] = (values[-1] - 2.0 * values[-2] + values[-3]) / dt**2
    return out


def virial_eta_terms(raw: dict, params: CouplingParams, direction: Direction):
    """Series of (eta, eta', eta''_fd, eta''_rhs) on the left half-line.

    eta is the tracked virial functional: the second moment of |u|^2 plus
    the cumulative first moments of |u|^2 and (scaled) v^2.  Its second
    derivative is compared against the closed-form right side assembled
    from the recorded spatial integrals.
    """
    if direction is not Direction.LEFT:
        raise ValueError("the virial functional is defined on the left half-line")
    ts = raw["t"]
    r = params.ratio
    cum_xu = cumulative_trapezoid(raw["Xu"], ts, initial=0.0) if len(ts) > 1 else np.zeros_like(ts)
    cum_xv = cumulative_trapezoid(raw["Xv"], ts, initial=0.0) if len(ts) > 1 else np.zeros_like(ts)
    eta = raw["w_u2"] + cum_xu - 2.0 * r * cum_xv
    eta_d1 = _time_derivative(eta, ts)
    eta_d2_fd = _second_difference(eta, ts)
    eta_d2_rhs = (
        8.0 * raw["int_ux_sq"]
        + 6.0 * r * raw["int_vx_sq"]
        + 2.0 * params.beta * raw["int_u4"]
        - 4.0 / 3.0 * r * raw["int_v3"]
        + 4.0 * params.alpha * raw["int_vu2"]
        - 2.0 * raw["im_uux"]
    )
    return eta, eta_d1, eta_d2_fd, eta_d2_rhs


@dataclass
class LawResiduals:
    """Normalized discrepancies between tracked functionals and the laws."""

    r_mass: float = 0.0
    r_moment: float = 0.0
    r_energy: float = 0.0
    r_first_moment_rate: float = 0.0
    r_virial: float = 0.0
    mass_flux_integral: np.ndarray = field(default_factory=lambda: np.zeros(0))
    moment_flux_integral: np.ndarray = field(default_factory=lambda: np.zeros(0))
    energy_flux_integral: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def as_dict(self) -> dict:
        return {
            "r_mass": self.r_mass,
            "r_moment": self.r_moment,
            "r_energy": self.r_energy,
            "r_first_moment_rate": self.r_first_moment_rate,
            "r_virial": self.r_virial,
        }


@dataclass
class FunctionalRecord:
    """One diagnostic sample; invariants M >= 0, w_* >= 0, P >= 0."""

    t: float
    M: float
    Q: float
    E: float
    Qu: float
    Qv: float
    E1: float
    E2: float
    w_u1: float
    w_v1: float
    w_u2: float
    eta: float
    eta_d1: float
    eta_d2_fd: float
    eta_d2_rhs: float
    P: float


class TimeSeries:
    """Assembled diagnostic series with the fixed CSV column contract."""

    def __init__(self, columns: dict, residuals: LawResiduals, direction: Direction):
        self.columns = columns
        self.residuals = residuals
        self.direction = direction
        self.t = columns["t"]

    def __len__(self) -> int:
        return len(self.t)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]

    def record(self, i: int) -> FunctionalRecord:
        c = self.columns
        return FunctionalRecord(
            t=c["t"][i], M=c["M"][i], Q=c["Q"][i], E=c["E"][i],
            Qu=c["Qu"][i], Qv=c["Qv"][i], E1=c["E1"][i], E2=c["E2"][i],
            w_u1=c["w_u1"][i], w_v1=c["w_v1"][i], w_u2=c["w_u2"][i],
            eta=c["eta"][i], eta_d1=c["eta_d1"][i],
            eta_d2_fd=c["eta_d2_fd"][i], eta_d2_rhs=c["eta_d2_rhs"][i],
            P=c["P"][i],
        )

    def to_csv(self, path) -> None:
        # repr() floats give shortest round-trip values; byte-identical
        # output for identical runs.
        with open(path, "w") as fh:
            fh.write(",".join(CSV_COLUMNS) + "\n")
            cols = [self.columns[name] for name in CSV_COLUMNS]
            for i in range(len(self.t)):
                fh.write(",".join(repr(float(col[i])) for col in cols) + "\n")


def build_timeseries(raw: dict, grid: HalfLineGrid, params: CouplingParams) -> TimeSeries:
    """Derive every reported functional and residual from the raw recording."""
    ts = raw["t"]
    n = len(ts)
    sgn = grid.sign
    r = params.ratio

    M = raw["int_u2"]
    Q = r * raw["int_v2"] + 2.0 * raw["im_uux"]
    E = (params.alpha * raw["int_vu2"]
         - params.alpha / (6.0 * params.gamma) * raw["int_v3"]
         + params.beta / 2.0 * raw["int_u4"]
         + params.alpha / (2.0 * params.gamma) * raw["int_vx_sq"]
         + raw["int_ux_sq"])
    w_u1 = sgn * raw["Xu"]
    w_v1 = sgn * raw["Xv"]
    w_u2 = raw["w_u2"]

    ut0 = _time_derivative(raw["u0"], ts)
    vt0 = _time_derivative(raw["v0"], ts)
    vxt0 = _time_derivative(raw["vx0"], ts)
    au0_sq = np.abs(raw["u0"]) ** 2
    Qu = (2.0 * np.abs(raw["ux0"]) ** 2
          + 2.0 * np.imag(raw["u0"] * np.conj(ut0))
          - params.beta * au0_sq**2)
    Qv = (r * raw["vx0"] ** 2
          - 2.0 * r * raw["vxx0"] * raw["v0"]
          - 2.0 * r / 3.0 * raw["v0"] ** 3)
    E1 = 2.0 * np.real(raw["ux0"] * np.conj(ut0)) + r * raw["vx0"] * vt0
    E2 = r / 2.0 * (raw["vxx0"] + raw["v0"] ** 2 / 2.0 - params.gamma * au0_sq) ** 2

    if grid.direction is Direction.LEFT:
        eta, eta_d1, eta_d2_fd, eta_d2_rhs = virial_eta_terms(raw, params, grid.direction)
        P = w_u1 + 2.0 * abs(r) * w_v1
    else:
        eta = eta_d1 = eta_d2_fd = eta_d2_rhs = np.zeros(n)
        P = np.zeros(n)

    residuals = LawResiduals()
    r_mass_t = np.zeros(n)
    r_moment_t = np.zeros(n)
    r_energy_t = np.zeros(n)
    if n >= 2:
        mass_flux = cumulative_trapezoid(np.imag(raw["ux0"] * np.conj(raw["u0"])), ts, initial=0.0)
        moment_flux = cumulative_trapezoid(Qu + Qv, ts, initial=0.0)
        energy_flux = cumulative_trapezoid(E1 + E2, ts, initial=0.0)
        r_mass_t = np.abs(M - M[0] - sgn * 2.0 * mass_flux) / max(1.0, np.max(np.abs(M)))
        r_moment_t = np.abs(Q - Q[0] + sgn * moment_flux) / max(1.0, np.max(np.abs(Q)))
        r_energy_t = np.abs(E - E[0] + sgn * energy_flux) / max(1.0, np.max(np.abs(E)))
        residuals.mass_flux_integral = mass_flux
        residuals.moment_flux_integral = moment_flux
        residuals.energy_flux_integral = energy_flux
        residuals.r_mass = float(np.max(r_mass_t))
        residuals.r_moment = float(np.max(r_moment_t))
        residuals.r_energy = float(np.max(r_energy_t))
    if n >= 3:
        mid = n // 2
        # homogeneous-law rate of the first moment, per direction
        hom_flux = cumulative_trapezoid(2.0 * np.abs(raw["ux0"]) ** 2 + r * raw["vx0"] ** 2,
                                        ts, initial=0.0)
        rate_obs = float((w_u1[mid + 1] - w_u1[mid - 1]) / (ts[mid + 1] - ts[mid - 1]))
        if grid.direction is Direction.RIGHT:
            rate_law = r * raw["int_v2"][mid] - Q[0] + hom_flux[mid]
        else:
            rate_law = Q[0] + hom_flux[mid] - r * raw["int_v2"][mid]
        residuals.r_first_moment_rate = abs(rate_obs - rate_law) / max(1.0, abs(rate_obs))
        if grid.direction is Direction.LEFT:
            residuals.r_virial = float(
                abs(eta_d2_fd[mid] - eta_d2_rhs[mid]) / max(1.0, abs(eta_d2_rhs[mid]))
            )

    columns = {
        "t": ts, "M": M, "Q": Q, "E": E, "Qu": Qu, "Qv": Qv, "E1": E1, "E2": E2,
        "w_u1": w_u1, "w_v1": w_v1, "w_u2": w_u2,
        "eta": eta, "eta_d1": eta_d1, "eta_d2_fd": eta_d2_fd, "eta_d2_rhs": eta_d2_rhs,
        "P": P,
        "r_mass": r_mass_t, "r_moment": r_moment_t, "r_energy": r_energy_t,
        "outer_sup": raw["outer_sup"],
    }
    return TimeSeries(columns, residuals, grid.direction)


def law_residuals(raw: dict, grid: HalfLineGrid, params: CouplingParams) -> LawResiduals:
    """Residuals of the evolution laws for a recorded series.

    Series with fewer than two samples return all-zero residuals by
    convention.
    """
    return build_timeseries(raw, grid, params).residuals
