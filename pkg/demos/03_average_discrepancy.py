"""Reproduce the average-discrepancy identities by seeded Monte Carlo.

For p=2 the normalized average discrepancy of N i.i.d. points has closed
forms: 3^{d/2} sqrt((2^{-d}-3^{-d})/N) under uniform sampling and
3^{d/2} sqrt(((4/9)^d-3^{-d})/N) under the optimal density -- an improvement
factor approaching (8/9)^{d/2}.  The harness also demonstrates the c* weight
rescaling, whose expected-squared-error ratio equals c* exactly.
"""

import math

from disclab.experiments import (
    ExperimentConfig,
    asymptotic_scaling_probe,
    c_rescale_experiment,
    exact_nav2,
    run_average_discrepancy,
)

REPS = 4000
print(f"p=2 identities, M={REPS} replications (z = standardized deviation)")
print(f"{'N':>4} {'d':>2} {'density':>8} {'observed':>10} {'exact':>10} {'z':>6}")
for n, d in ((4, 1), (16, 2), (16, 3)):
    for kind in ("uniform", "optimal"):
        cfg = ExperimentConfig(p=2.0, d=d, N=n, density_kind=kind,
                               replications=REPS, seed=99, evaluator="kernel_p2")
        rep = run_average_discrepancy(cfg)
        exact = exact_nav2(n, d, kind)
        c1 = 0.5 if kind == "uniform" else 4.0 / 9.0
        z = (rep.mean_Lp_p - (c1 ** d - 3.0 ** (-d)) / n) / rep.std_error
        print(f"{n:>4} {d:>2} {kind:>8} {rep.n_av_p:>10.6f} {exact:>10.6f} {z:>+6.2f}")

print("\nimprovement ratio optimal/uniform vs the (8/9)^{d/2} envelope")
for d in (1, 2, 3, 5, 10):
    ratio = exact_nav2(16, d, "optimal") / exact_nav2(16, d, "uniform")
    print(f"  d={d:<2} exact ratio {ratio:.4f}   (8/9)^(d/2) = {(8/9)**(d/2):.4f}")

print("\nc* rescaling: E[e^2 rescaled]/E[e^2] = c* = N/(N-1+3^d C)")
for n, d in ((4, 1), (8, 2)):
    out = c_rescale_experiment(n, d, "optimal", replications=REPS, seed=17)
    z = (out.ratio - out.c_star) / out.std_error
    print(f"  N={n} d={d}: MC ratio {out.ratio:.6f}  c* {out.c_star:.6f}  z={z:+.2f}")

print("\nasymptotic scaling sqrt(N) n-av_1 in d=1 (one-sided limits)")
for kind, limit in (("uniform", math.sqrt(2 / math.pi) * 4 / 3),
                    ("optimal", math.sqrt(2 / math.pi) * math.sqrt(1.5))):
    rows = asymptotic_scaling_probe(1.0, 1, kind, [64, 256, 1024], 500, 5)
    path = " -> ".join(f"{r['scaled']:.4f}" for r in rows)
    print(f"  {kind:>8}: {path}   (limit {limit:.5f})")
