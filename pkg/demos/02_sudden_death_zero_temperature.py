"""Entanglement sudden death under zero-temperature amplitude damping.

Pure superpositions sqrt(a)|ee> + sqrt(1-a)|gg> all lose coherence at the
same exponential rate, yet their entanglement ends in two qualitatively
different ways: for a <= 1/2 it decays forever without vanishing, while
for a > 1/2 it hits exactly zero at the finite time

    t* = -ln(1 - sqrt((1-a)/a))

and stays zero.  The deciding quantity is the population balance, not the
coherence: decay feeds the inner levels |eg>, |ge>, and once their
product b(t) c(t) outgrows |w(t)|^2 the state is separable.
"""

import numpy as np

from esdkit import IndependentDecay, death_time, make_x, simulate

channel = IndependentDecay(1.0, 1.0, nbar=0.0)


def pure_family(a):
    return make_x(a, 0.0, 0.0, 1.0 - a, w=np.sqrt(a * (1.0 - a)))


# --- one trajectory in detail ----------------------------------------------

x = pure_family(0.7)
traj = simulate(x, channel, horizon=3.0, sample_every=250)
print("t        negativity   |w|        b*c")
for i in range(len(traj.times)):
    print(f"{traj.times[i]:7.3f}  {traj.negativity[i]:10.6f}  "
          f"{traj.abs_w[i]:9.6f}  {traj.b[i] * traj.c[i]:9.6f}")

# --- the death-time law across the family ----------------------------------

print("\na      verdict      t*          -ln(1 - sqrt((1-a)/a))")
for a in (0.3, 0.5, 0.55, 0.7, 0.9):
    report = death_time(pure_family(a), channel, horizon=50.0)
    if report.t_star is None:
        print(f"{a:.2f}   {report.verdict:10s}  {'-':10s}  -")
    else:
        exact = -np.log(1.0 - np.sqrt((1.0 - a) / a))
        print(f"{a:.2f}   {report.verdict:10s}  {report.t_star:.8f}  {exact:.8f}")

# Note the knife edge: at a = 1/2 the death time diverges, so the verdict
# switches from a finite t* to asymptotic decay between a = 0.50 and 0.55.
