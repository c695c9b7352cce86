import numpy as np
import pytest

from nlskdv.errors import BlowUpError, ConfigError
from nlskdv.grid import (
    BoundarySignals,
    CouplingParams,
    FieldSpec,
    FieldState,
    SignalSpec,
    build_grid,
    init_state,
)
from nlskdv.stepper import SimConfig, Sources, nonlinear_substep, run, strang_step


def make_state(grid, u=None, v=None):
    n = grid.n_nodes
    return FieldState(
        0.0,
        np.zeros(n, dtype=complex) if u is None else np.asarray(u, dtype=complex),
        np.zeros(n) if v is None else np.asarray(v, dtype=float),
    )


def test_nonlinear_substep_zero_state():
    g = build_grid("right", 20.0, 64)
    p = CouplingParams(1.0, 1.0, 1.0)
    out = nonlinear_substep(make_state(g), g, p, 1e-3)
    assert not out.u.any() and not out.v.any()


def test_nonlinear_substep_identity_without_nonlinearity():
    # with all couplings off the substep must not move a state whose
    # self-advection vanishes (constant v has v v_x = 0 pointwise)
    g = build_grid("right", 20.0, 64)
    p = CouplingParams(0.0, 0.0, 1e-30)  # gamma must be nonzero; use a dead value
    st = make_state(g, u=np.exp(1j * g.nodes), v=np.full(g.n_nodes, 0.7))
    out = nonlinear_substep(st, g, p, 1e-2)
    assert np.array_equal(out.u, st.u)
    assert np.allclose(out.v, st.v, atol=1e-16)


def test_nonlinear_substep_exact_phase_rotation():
    # constant v, beta = 0: every interior node gains the same phase and
    # |u| is unchanged to machine precision
    g = build_grid("right", 20.0, 128)
    alpha, c, tau = 2.0, 0.5, 1e-2
    p = CouplingParams(alpha, 0.0, 1.0)
    u0 = np.exp(-((g.nodes - 10.0) ** 2)) * np.exp(0.3j * g.nodes)
    st = make_state(g, u=u0, v=np.full(g.n_nodes, c))
    out = nonlinear_substep(st, g, p, tau)
    phase = np.exp(-1j * alpha * c * tau)
    assert np.max(np.abs(out.u[1:-1] - u0[1:-1] * phase)) < 1e-15
    assert np.max(np.abs(np.abs(out.u) - np.abs(u0))) < 1e-15


def test_nonlinear_substep_blowup_flag():
    g = build_grid("right", 20.0, 64)
    p = CouplingParams(1.0, 1.0, 1.0)
    v = np.zeros(g.n_nodes)
    v[10] = 1e200
    v[11] = -1e200
    st = make_state(g, v=v)
    with pytest.raises(BlowUpError):
        nonlinear_substep(st, g, p, 1.0)


def test_strang_zero_state_zero_signals():
    g = build_grid("left", 20.0, 64)
    p = CouplingParams(1.0, 1.0, -1.0)
    st = make_state(g)
    sig = BoundarySignals.zero()
    for _ in range(5):
        st = strang_step(st, g, p, sig, 1e-2)
    assert not st.u.any() and not st.v.any()
    assert st.t == pytest.approx(5e-2)


def test_strang_mass_exact_homogeneous():
    # phase rotation conserves |u| pointwise and Crank-Nicolson conserves the
    # discrete norm: mass drift is pure roundoff
    cfg = SimConfig(
        direction=build_grid("right", 50.0, 512).direction,
        length=50.0, cells=512,
        u0=FieldSpec(kind="gaussian", center=25.0, width=1.0, wavenumber=1.0),
        v0=FieldSpec(kind="gaussian", amplitude=0.5, center=25.0, width=2.0),
        dt=1e-3, t_final=0.2, sample_stride=20,
    )
    result = run(cfg)
    M = result.series["M"]
    assert np.max(np.abs(M - M[0])) / M[0] < 1e-10


def test_linear_time_reversal_through_propagators():
    # linear flow only: dt then -dt returns the state (nonlinear parts off)
    from nlskdv.linprop import KdvPropagator, SchrodingerPropagator

    g = build_grid("right", 40.0, 512)
    u0 = (np.exp(-((g.nodes - 20.0) ** 2)) * np.exp(1j * g.nodes)).astype(complex)
    v0 = np.exp(-(((g.nodes - 20.0) / 1.5) ** 2))
    sp, sb = SchrodingerPropagator(g, 2e-3), SchrodingerPropagator(g, -2e-3)
    kp, kb = KdvPropagator(g, 2e-3), KdvPropagator(g, -2e-3)
    u, v = u0.copy(), v0.copy()
    for _ in range(25):
        u, v = sp.step(u, 0.0), kp.step(v, 0.0, 0.0)
    for _ in range(25):
        u, v = sb.step(u, 0.0), kb.step(v, 0.0, 0.0)
    assert np.max(np.abs(u - u0)) < 1e-10
    assert np.max(np.abs(v - v0)) < 1e-10


def test_run_zero_tfinal_single_record():
    cfg = SimConfig(length=20.0, cells=64, t_final=0.0, dt=1e-3,
                    u0=FieldSpec(kind="zero"), v0=FieldSpec(kind="zero"))
    result = run(cfg)
    assert len(result.series) == 1
    assert result.series.t[0] == 0.0
    assert result.completed


def test_run_rejects_fractional_tfinal_below_dt():
    with pytest.raises(ConfigError):
        SimConfig(t_final=1e-5, dt=1e-3)


def test_run_blowup_halts_with_time():
    # steep v data with a large time step: the explicit nonlinear kick blows up
    cfg = SimConfig(
        direction=build_grid("left", 20.0, 256).direction,
        length=20.0, cells=256, alpha=1.0, beta=0.0, gamma=-1.0,
        v0=FieldSpec(kind="gaussian", amplitude=40.0, center=-10.0, width=0.25),
        dt=0.05, t_final=2.0, sample_stride=1,
    )
    result = run(cfg)
    assert result.halted
    assert result.halt_time is not None and 0 < result.halt_time <= 2.0
    assert result.summary()["halted"] is True


def test_run_outer_band_guard():
    cfg = SimConfig(length=20.0, cells=128,
                    u0=FieldSpec(kind="gaussian", center=19.0), dt=1e-3, t_final=1e-3,
                    sample_stride=1)
    with pytest.raises(ConfigError, match="outer 10%"):
        run(cfg)


def test_strang_second_order_with_sources():
    # joint manufactured forcing exercises the source paths of both substeps
    from nlskdv.scenarios import convergence_study

    rep = convergence_study([(256, 4e-3), (512, 2e-3), (1024, 1e-3)], t_final=0.25)
    assert rep["monotone"]
    assert 1.7 < rep["fitted_order"] < 2.3


def test_nonhomogeneous_boundary_values_imposed():
    cfg = SimConfig(
        length=30.0, cells=300,
        u0=FieldSpec(kind="zero"), v0=FieldSpec(kind="zero"),
        f=SignalSpec(kind="poly_exp", amplitude=0.5, power=2, rate=1.0),
        g=SignalSpec(kind="poly_exp", amplitude=0.3, power=2, rate=1.0),
        dt=1e-3, t_final=0.5, sample_stride=100,
    )
    result = run(cfg)
    t_end = result.final_state.t
    assert result.final_state.u[0] == pytest.approx(0.5 * t_end**2 * np.exp(-t_end), abs=1e-12)
    assert result.final_state.v[0] == pytest.approx(0.3 * t_end**2 * np.exp(-t_end), abs=1e-12)


def test_sim_config_validation():
    with pytest.raises(ConfigError):
        SimConfig(dt=-1e-3)
    with pytest.raises(ConfigError):
        SimConfig(sample_stride=0)
    cfg = SimConfig()
    assert cfg.to_dict()["direction"] == "right"
