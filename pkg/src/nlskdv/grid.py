"""Half-line domains, field storage, and weighted integrals.

The spatial domain is a truncated half-line discretized by N+1 equally
spaced nodes with the physical boundary x = 0 always at node index 0.
On the right half-line nodes run 0, h, 2h, ..., +L; on the left half-line
they run 0, -h, -2h, ..., -L, i.e. arrays are always ordered *away* from
the boundary.  All integrals use the composite trapezoid rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Callable

import numpy as np

from .errors import ConfigError

MIN_CELLS = 16

# Initial data must be numerically dead on the outer 10% of the grid; the
# run monitor warns if anything above RADIATION_TOL shows up there later.
OUTER_BAND_FRACTION = 0.1
INITIAL_BAND_TOL = 1e-10
RADIATION_TOL = 1e-6

COMPAT_TOL = 1e-8


class Direction(Enum):
    RIGHT = "right"
    LEFT = "left"

    @classmethod
    def parse(cls, value) -> "Direction":
        if isinstance(value, Direction):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ConfigError(f"unknown direction {value!r}; use 'right' or 'left'") from None


@dataclass(frozen=True)
class HalfLineGrid:
    """Uniform grid on (0, L) or (-L, 0) with x = 0 at node index 0."""

    direction: Direction
    length: float
    cells: int

    def __post_init__(self) -> None:
        if not np.isfinite(self.length) or self.length <= 0:
            raise ConfigError(f"grid length must be positive, got {self.length}")
        if self.cells < MIN_CELLS:
            raise ConfigError(f"grid needs at least {MIN_CELLS} cells, got {self.cells}")

    @property
    def spacing(self) -> float:
        return self.length / self.cells

    @property
    def sign(self) -> float:
        """Physical orientation of increasing node index: +1 right, -1 left."""
        return 1.0 if self.direction is Direction.RIGHT else -1.0

    @cached_property
    def nodes(self) -> np.ndarray:
        x = self.sign * self.spacing * np.arange(self.cells + 1)
        x[-1] = self.sign * self.length
        x.flags.writeable = False
        return x

    @property
    def n_nodes(self) -> int:
        return self.cells + 1

    @property
    def outer_band_start(self) -> int:
        return int(np.ceil((1.0 - OUTER_BAND_FRACTION) * self.cells))


def build_grid(direction, length: float, cells: int) -> HalfLineGrid:
    return HalfLineGrid(Direction.parse(direction), float(length), int(cells))


@dataclass(frozen=True)
class CouplingParams:
    """Coupling constants of the system; gamma must not vanish."""

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self) -> None:
        if self.gamma == 0.0:
            raise ConfigError("gamma must be nonzero (the moment/energy laws divide by it)")

    @property
    def ratio(self) -> float:
        return self.alpha / self.gamma

    @property
    def sign_product(self) -> str:
        prod = self.alpha * self.gamma
        if prod > 0:
            return "positive"
        if prod < 0:
            return "negative"
        return "zero"


@dataclass
class FieldState:
    """The field pair at one instant: complex u and real v on the grid nodes."""

    t: float
    u: np.ndarray
    v: np.ndarray

    def copy(self) -> "FieldState":
        return FieldState(self.t, self.u.copy(), self.v.copy())

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.u)) and np.all(np.isfinite(self.v)))


# ---------------------------------------------------------------------------
# boundary signals

def zero_signal(t):
    return np.zeros_like(np.asarray(t, dtype=float)) if np.ndim(t) else 0.0


def poly_exp_signal(amplitude: float, power: int = 2, rate: float = 1.0) -> Callable:
    """amplitude * t^power * exp(-rate t) for t >= 0, zero before."""
    if power < 0 or rate <= 0:
        raise ConfigError("poly_exp signal needs power >= 0 and rate > 0")

    def sig(t):
        tt = np.asarray(t, dtype=float)
        out = np.where(tt > 0, amplitude * tt**power * np.exp(-rate * tt), 0.0)
        return out if np.ndim(t) else float(out)

    return sig


def table_signal(path: str) -> Callable:
    """Sampled signal with linear interpolation; zero outside the table range."""
    data = np.loadtxt(path, ndmin=2)
    if data.shape[1] < 2:
        raise ConfigError(f"signal table {path} needs at least two columns (t, value)")
    ts, vals = data[:, 0], data[:, 1]
    if np.any(np.diff(ts) <= 0):
        raise ConfigError(f"signal table {path} must have strictly increasing t")

    def sig(t):
        return np.interp(t, ts, vals, left=0.0, right=0.0)

    return sig


SIGNAL_KINDS = ("zero", "poly_exp", "table")


@dataclass(frozen=True)
class SignalSpec:
    """Catalog entry for a boundary signal: closed-form or sampled table."""

    kind: str = "zero"
    amplitude: float = 1.0
    power: int = 2
    rate: float = 1.0
    path: str = ""

    def __post_init__(self) -> None:
        if self.kind not in SIGNAL_KINDS:
            raise ConfigError(f"unknown signal kind {self.kind!r}; choose from {SIGNAL_KINDS}")
        if self.kind == "table" and not self.path:
            raise ConfigError("table signal needs a path")

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero" or (self.kind == "poly_exp" and self.amplitude == 0.0)

    def build(self) -> Callable:
        if self.kind == "zero":
            return zero_signal
        if self.kind == "poly_exp":
            return poly_exp_signal(self.amplitude, self.power, self.rate)
        return table_signal(self.path)


@dataclass
class BoundarySignals:
    """Boundary data f (for u), g (for v), and the left-only slope h."""

    f: Callable = zero_signal
    g: Callable = zero_signal
    h: Callable = zero_signal
    homogeneous: bool = True

    @classmethod
    def zero(cls) -> "BoundarySignals":
        return cls()

    @classmethod
    def of(cls, f=None, g=None, h=None) -> "BoundarySignals":
        homog = f is None and g is None and h is None
        return cls(f or zero_signal, g or zero_signal, h or zero_signal, homog)

    @classmethod
    def from_specs(cls, f: SignalSpec, g: SignalSpec, h: SignalSpec) -> "BoundarySignals":
        homog = f.is_zero and g.is_zero and h.is_zero
        return cls(f.build(), g.build(), h.build(), homog)


# ---------------------------------------------------------------------------
# initial-data catalog

FIELD_SPEC_KINDS = ("zero", "gaussian", "sech", "file")


@dataclass(frozen=True)
class FieldSpec:
    """Catalog entry for an initial profile.

    gaussian: amplitude * exp(-((x-center)/width)^2) * exp(i k x)
    sech:     amplitude * sech((x-center)/width)     * exp(i k x)
    The phase factor k is only meaningful for the complex field u.
    """

    kind: str = "zero"
    amplitude: float = 1.0
    center: float = 0.0
    width: float = 1.0
    wavenumber: float = 0.0
    path: str = ""

    def __post_init__(self) -> None:
        if self.kind not in FIELD_SPEC_KINDS:
            raise ConfigError(f"unknown initial-data kind {self.kind!r}; choose from {FIELD_SPEC_KINDS}")
        if self.kind in ("gaussian", "sech") and self.width <= 0:
            raise ConfigError("initial profile width must be positive")
        if self.kind == "file" and not self.path:
            raise ConfigError("file initial data needs a path")

    def evaluate(self, x: np.ndarray, complex_field: bool) -> np.ndarray:
        if self.kind == "zero":
            vals = np.zeros_like(x, dtype=complex if complex_field else float)
        elif self.kind == "gaussian":
            envelope = self.amplitude * np.exp(-(((x - self.center) / self.width) ** 2))
            vals = self._modulate(envelope, x, complex_field)
        elif self.kind == "sech":
            envelope = self.amplitude / np.cosh((x - self.center) / self.width)
            vals = self._modulate(envelope, x, complex_field)
        else:
            vals = _read_profile_table(self.path, x, complex_field)
        if not np.all(np.isfinite(vals)):
            raise ConfigError(f"initial profile {self.kind!r} produced non-finite samples")
        return vals

    def _modulate(self, envelope: np.ndarray, x: np.ndarray, complex_field: bool) -> np.ndarray:
        if not complex_field:
            if self.wavenumber != 0.0:
                raise ConfigError("wavenumber modulation only applies to the complex field")
            return envelope
        return envelope * np.exp(1j * self.wavenumber * x)


def _read_profile_table(path: str, x: np.ndarray, complex_field: bool) -> np.ndarray:
    data = np.loadtxt(path, ndmin=2)
    if data.shape[1] < 2:
        raise ConfigError(f"profile table {path} needs (x, value) or (x, re, im) columns")
    xs = data[:, 0]
    if np.any(np.diff(xs) <= 0):
        raise ConfigError(f"profile table {path} must have strictly increasing x")
    lo, hi = min(x.min(), x.max()), max(x.min(), x.max())
    if xs[0] > lo or xs[-1] < hi:
        raise ConfigError(
            f"profile table {path} covers [{xs[0]:g}, {xs[-1]:g}] "
            f"but the grid needs [{lo:g}, {hi:g}]"
        )
    if complex_field and data.shape[1] >= 3:
        return np.interp(x, xs, data[:, 1]) + 1j * np.interp(x, xs, data[:, 2])
    vals = np.interp(x, xs, data[:, 1])
    return vals.astype(complex) if complex_field else vals


def init_state(
    grid: HalfLineGrid,
    u0_spec: FieldSpec,
    v0_spec: FieldSpec,
    signals: BoundarySignals | None = None,
) -> FieldState:
    """Sample the initial profiles at the nodes and impose boundary values.

    When boundary signals are attached, the node-0 values are overwritten by
    f(0), g(0) after checking they are compatible with the sampled profiles.
    """
    x = grid.nodes
    u = np.asarray(u0_spec.evaluate(x, complex_field=True), dtype=complex)
    v = np.asarray(v0_spec.evaluate(x, complex_field=False), dtype=float)
    if signals is not None:
        f0 = complex(signals.f(0.0))
        g0 = float(signals.g(0.0))
        tol_u = COMPAT_TOL * max(1.0, float(np.max(np.abs(u))))
        tol_v = COMPAT_TOL * max(1.0, float(np.max(np.abs(v))))
        if abs(u[0] - f0) > tol_u:
            raise ConfigError(
                f"incompatible data: u0(0) = {u[0]:.6g} but f(0) = {f0:.6g}"
            )
        if abs(v[0] - g0) > tol_v:
            raise ConfigError(
                f"incompatible data: v0(0) = {v[0]:.6g} but g(0) = {g0:.6g}"
            )
        u[0] = f0
        v[0] = g0
    return FieldState(0.0, u, v)


# ---------------------------------------------------------------------------
# integrals and derivatives

def trapezoid(values: np.ndarray, grid: HalfLineGrid):
    """Composite trapezoid of node samples over the (truncated) half-line.

    Orientation-free: returns the integral over the interval between x = 0
    and x = +/-L, which is positive-measure in both directions.  Complex
    integrands give complex values.
    """
    val = np.trapezoid(values, dx=grid.spacing)
    return complex(val) if np.iscomplexobj(values) else float(val)


def first_derivative(values: np.ndarray, grid: HalfLineGrid) -> np.ndarray:
    """Physical d/dx at the nodes: centered interior, one-sided second-order ends."""
    h = grid.spacing
    out = np.empty_like(values)
    out[1:-1] = (values[2:] - values[:-2]) / (2 * h)
    out[0] = (-3 * values[0] + 4 * values[1] - values[2]) / (2 * h)
    out[-1] = (3 * values[-1] - 4 * values[-2] + values[-3]) / (2 * h)
    return grid.sign * out


def weighted_norm_sq(state: FieldState, grid: HalfLineGrid, field: str = "u", p: int = 0) -> float:
    """Trapezoid value of the weighted square integral of one field.

    p = 0 is the plain L^2 mass-type integral, p = 1 weights by |x|,
    p = 2 by x^2.
    """
    if p not in (0, 1, 2):
        raise ValueError(f"weight power must be 0, 1 or 2, got {p}")
    if field == "u":
        sq = np.abs(state.u) ** 2
    elif field == "v":
        sq = state.v**2
    else:
        raise ValueError(f"field must be 'u' or 'v', got {field!r}")
    if not np.all(np.isfinite(sq)):
        raise ValueError(f"non-finite {field} field in weighted_norm_sq")
    if p:
        sq = sq * np.abs(grid.nodes) ** p
    return trapezoid(sq, grid)


def outer_band_sup(state: FieldState, grid: HalfLineGrid) -> float:
    """Sup of |u| and |v| over the outer 10% of the grid (radiation monitor)."""
    k = grid.outer_band_start
    return float(max(np.max(np.abs(state.u[k:])), np.max(np.abs(state.v[k:]))))
