"""Implicit one-step solvers for the linear half-line problems.

Both propagators are Crank-Nicolson in time (unconditionally stable,
second order) around centered difference operators:

* Schrodinger  i u_t + u_xx = 0: tridiagonal second difference, Dirichlet
  value u = f(t) at x = 0 and u = 0 at the artificial far node.
* Airy / linear KdV  v_t + v_xxx = 0: five-point third difference with the
  boundary-condition count of the half-line problem -- one condition at
  x = 0 on the right half-line (v = g, plus v = 0 and one-sided v_x = 0 at
  the far node), two at x = 0 on the left half-line (v = g and one-sided
  v_x = h, plus v = 0 at the far node).  PDE rows adjacent to constraint
  rows use shifted stencils of matching (second) order.

Whole-line references evolve zero-padded data by exact symbol
multiplication; they are cross-validation oracles, not production steppers.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .grid import Direction, HalfLineGrid

SUPPORT_TOL = 1e-10
PAD_FACTOR = 4


def _third_difference(n: int, h: float) -> sp.lil_matrix:
    """Index-space third difference on rows 1..n-1; constraint rows stay empty.

    Rows 1 and n-1 use the shifted five-point stencils (offsets -1..3 and
    -3..1), both second-order accurate like the centered interior stencil.
    """
    c = 1.0 / (2.0 * h**3)
    D = sp.lil_matrix((n + 1, n + 1))
    for j in range(2, n - 1):
        D[j, j - 2] = -c
        D[j, j - 1] = 2 * c
        D[j, j + 1] = -2 * c
        D[j, j + 2] = c
    D[1, 0], D[1, 1], D[1, 2], D[1, 3], D[1, 4] = -3 * c, 10 * c, -12 * c, 6 * c, -c
    D[n - 1, n - 4], D[n - 1, n - 3], D[n - 1, n - 2], D[n - 1, n - 1], D[n - 1, n] = (
        c, -6 * c, 12 * c, -10 * c, 3 * c,
    )
    return D


def _clear_rows(mat: sp.lil_matrix, rows) -> None:
    for r in rows:
        mat.rows[r] = []
        mat.data[r] = []


class SchrodingerPropagator:
    """Crank-Nicolson step of i u_t + u_xx = 0 with Dirichlet rows at both ends."""

    def __init__(self, grid: HalfLineGrid, dt: float):
        if dt == 0:
            raise ValueError("dt must be nonzero")
        self.grid = grid
        self.dt = dt
        n = grid.cells
        c = 1j * dt / (2.0 * grid.spacing**2)
        main = np.full(n + 1, 1.0 + 2.0 * c, dtype=complex)
        lower = np.full(n, -c, dtype=complex)
        upper = np.full(n, -c, dtype=complex)
        main[0] = main[n] = 1.0
        upper[0] = 0.0
        lower[n - 1] = 0.0
        A = sp.diags([lower, main, upper], (-1, 0, 1), format="csc")
        bmain = np.full(n + 1, 1.0 - 2.0 * c, dtype=complex)
        bmain[0] = bmain[n] = 0.0
        blower = np.full(n, c, dtype=complex)
        bupper = np.full(n, c, dtype=complex)
        bupper[0] = 0.0
        blower[n - 1] = 0.0
        self._B = sp.diags([blower, bmain, bupper], (-1, 0, 1), format="csr")
        self._lu = spla.splu(A)

    def step(self, u: np.ndarray, f_new: complex) -> np.ndarray:
        """Advance one dt; f_new is the boundary value at the new time level.

        The boundary value at the old level enters through the current u[0],
        so the interior rows see the Crank-Nicolson average of both endpoint
        values.
        """
        rhs = self._B.dot(u.astype(complex, copy=False))
        rhs[0] = f_new
        rhs[-1] = 0.0
        return self._lu.solve(rhs)


class KdvPropagator:
    """Crank-Nicolson step of v_t + v_xxx = 0 with direction-dependent closures."""

    def __init__(self, grid: HalfLineGrid, dt: float):
        if dt == 0:
            raise ValueError("dt must be nonzero")
        self.grid = grid
        self.dt = dt
        n = grid.cells
        h = grid.spacing
        D = _third_difference(n, h)
        # On the left grid node j sits at x = -j h, so d/dx = -d/d(index);
        # the odd operator flips sign: v_t = -v_xxx becomes v_t = +D3 v.
        theta = dt / 2.0
        eye = sp.identity(n + 1, format="lil")
        if grid.direction is Direction.RIGHT:
            A = (eye + theta * D).tolil()
            B = (eye - theta * D).tolil()
            self.bc_rows = (0, n - 1, n)
        else:
            A = (eye - theta * D).tolil()
            B = (eye + theta * D).tolil()
            self.bc_rows = (0, 1, n)
        _clear_rows(A, self.bc_rows)
        _clear_rows(B, self.bc_rows)
        w = 1.0 / (2.0 * h)
        A[0, 0] = 1.0
        A[n, n] = 1.0
        if grid.direction is Direction.RIGHT:
            # one-sided v_x = 0 at the far node
            A[n - 1, n - 2], A[n - 1, n - 1], A[n - 1, n] = w, -4 * w, 3 * w
        else:
            # one-sided v_x(0) = h(t); on the left grid d/dx at node 0 is
            # (3 v0 - 4 v1 + v2) / (2h)
            A[1, 0], A[1, 1], A[1, 2] = 3 * w, -4 * w, w
        self._B = B.tocsr()
        self._lu = spla.splu(A.tocsc())

    def step(self, v: np.ndarray, g_new: float, h_new: float = 0.0) -> np.ndarray:
        """Advance one dt with boundary values sampled at the new time level."""
        rhs = self._B.dot(v)
        if self.grid.direction is Direction.RIGHT:
            rhs[0] = g_new
            rhs[-2] = 0.0
            rhs[-1] = 0.0
        else:
            rhs[0] = g_new
            rhs[1] = h_new
            rhs[-1] = 0.0
        return self._lu.solve(rhs)


# Factorizations are reused only while (direction, N, h, dt) is unchanged;
# the boundary-row layout is a function of the direction.
_CACHE: dict = {}
_CACHE_LIMIT = 32


def get_schrodinger_propagator(grid: HalfLineGrid, dt: float) -> SchrodingerPropagator:
    key = ("schrodinger", grid.direction, grid.cells, grid.spacing, dt)
    if key not in _CACHE:
        if len(_CACHE) >= _CACHE_LIMIT:
            _CACHE.clear()
        _CACHE[key] = SchrodingerPropagator(grid, dt)
    return _CACHE[key]


def get_kdv_propagator(grid: HalfLineGrid, dt: float) -> KdvPropagator:
    key = ("kdv", grid.direction, grid.cells, grid.spacing, dt)
    if key not in _CACHE:
        if len(_CACHE) >= _CACHE_LIMIT:
            _CACHE.clear()
        _CACHE[key] = KdvPropagator(grid, dt)
    return _CACHE[key]


# ---------------------------------------------------------------------------
# whole-line spectral references

def _check_support(values: np.ndarray, grid: HalfLineGrid) -> None:
    k = grid.outer_band_start
    tail = float(np.max(np.abs(values[k:])))
    scale = max(1.0, float(np.max(np.abs(values))))
    if tail > SUPPORT_TOL * scale:
        raise ValueError(
            f"reference evolution needs data supported away from the far boundary "
            f"(outer-band sup {tail:.3g})"
        )


def _padded_physical(values: np.ndarray, grid: HalfLineGrid):
    """Embed node samples, in increasing-x order, into a zero-padded buffer."""
    phys = values if grid.direction is Direction.RIGHT else values[::-1]
    m = len(phys)
    size = 1 << int(np.ceil(np.log2(PAD_FACTOR * m)))
    buf = np.zeros(size, dtype=complex)
    buf[:m] = phys
    return buf, m


def free_schrodinger_reference(u0: np.ndarray, grid: HalfLineGrid, t: float) -> np.ndarray:
    """Whole-line evolution of i u_t + u_xx = 0 by the symbol exp(-i t xi^2)."""
    _check_support(u0, grid)
    buf, m = _padded_physical(np.asarray(u0, dtype=complex), grid)
    xi = 2.0 * np.pi * np.fft.fftfreq(len(buf), d=grid.spacing)
    out = np.fft.ifft(np.fft.fft(buf) * np.exp(-1j * t * xi**2))[:m]
    return out if grid.direction is Direction.RIGHT else out[::-1]


def free_airy_reference(v0: np.ndarray, grid: HalfLineGrid, t: float) -> np.ndarray:
    """Whole-line evolution of v_t + v_xxx = 0 by the symbol exp(i t xi^3)."""
    _check_support(v0, grid)
    buf, m = _padded_physical(np.asarray(v0, dtype=float), grid)
    xi = 2.0 * np.pi * np.fft.fftfreq(len(buf), d=grid.spacing)
    out = np.fft.ifft(np.fft.fft(buf) * np.exp(1j * t * xi**3)).real[:m]
    return out if grid.direction is Direction.RIGHT else out[::-1]
