"""Long-time growth of weighted norms against their predicted lower bounds.

Three scripted scenarios:

* t13  (right, positive coupling): after checking Q0 < 0, the second-moment
  norm of u must grow at least linearly at rate |Q0|.
* t14a (left, negative coupling): with Q0 > 0, the first-moment norm of u
  grows at rate Q0.
* t14b (left, negative coupling): with Q0 > 8 E0 and beta >= 2|alpha gamma|,
  the running sup of P = ||..u..|| + 2|alpha/gamma| ||..v..|| beats the
  quadratic-over-linear chain on the second half of the run.

The scenarios run here at reduced resolution to stay quick; the acceptance
suite runs them at the defaults.
"""

from nlskdv import scenario_global_right, scenario_growth_left

quick = ["grid.cells=512", "time.dt=1e-3"]

for label, call in [
    ("t13", lambda: scenario_global_right(quick)),
    ("t14a", lambda: scenario_growth_left("a", quick)),
    ("t14b", lambda: scenario_growth_left(
        "b", ["grid.cells=2048", "grid.length=150.0", "time.dt=2e-3", "time.t_final=10.0"])),
]:
    verdict, result = call()
    print(f"scenario {label}: {verdict.status}")
    for key, value in verdict.hypotheses.items():
        if isinstance(value, float):
            print(f"    {key:>16} = {value:.5f}")
        else:
            print(f"    {key:>16} = {value}")
    if verdict.margin is not None:
        print(f"    raw margin {verdict.margin:.4f} (slack allowance {verdict.slack:.4f})")
    if verdict.bound_samples:
        t, pred, obs = verdict.bound_samples[-1]
        print(f"    at t = {t:g}: observed {obs:.4f} vs predicted bound {pred:.4f}")
    print()
