#!/usr/bin/env python3
"""Independent reference computations for the C++ test suite.

Everything here is written directly from the model equations with numpy/scipy
and shares no code with the engine. The printed values are frozen into
tests/*.cpp; rerun this script if a fixture changes.
"""
import csv
import math
import pathlib

import numpy as np
from scipy import integrate, stats

ROOT = pathlib.Path(__file__).resolve().parents[2]
LAMBDA = 0.03114
AREAL = 10.0  # Bq/kg * g/cm^2 -> Bq/m^2


def load(name):
    with open(ROOT / "data" / name) as fh:
        rows = list(csv.DictReader(fh))
    return [(float(r["depth_cm"]), float(r["pb210_bqkg"]),
             float(r["sigma_bqkg"]), float(r["density"])) for r in rows]


def show(label, value):
    print(f"{label:<48s} {value!r}")


def tail(values):
    arr = np.array(values)
    return arr.mean(), arr.std(ddof=1)


hp1c = load("hp1c.csv")
table2 = load("table2.csv")

print("# supported tail estimates")
m, s = tail([r[1] for r in hp1c[-4:]])
show("hp1c tail4 mean", m)
show("hp1c tail4 sd", s)
m3, s3 = tail([r[1] for r in table2[-3:]])
show("table2 tail3 mean", m3)
show("table2 tail3 sd", s3)

print("# unsupported activity")
f = lambda tau, phi: phi * math.exp(-LAMBDA * tau)
closed = 150 / LAMBDA * (1 - math.exp(-LAMBDA * 0.8333))
quad, _ = integrate.quad(f, 0, 0.8333, args=(150,), epsabs=0, epsrel=1e-13)
show("phi150 0..0.8333 closed", closed)
show("phi150 0..0.8333 quad", quad)
show("phi150 0..inf", 150 / LAMBDA)

print("# chronology limit (exact inversion)")
frac = (1 - math.exp(-LAMBDA)) / LAMBDA
show("(1-e^-l)/l", frac)
show("t_l(50, 0.1)", math.log(frac * 50 / 0.1) / LAMBDA)
show("t_l(50, 0.1) approx form", math.log(50 / 0.1) / LAMBDA)
show("t_l(150, 0.1)", math.log(frac * 150 / 0.1) / LAMBDA)

print("# gamma prior at mode")
show("gamma(2, mean 50) logpdf at 25",
     stats.gamma(a=2, scale=50 / 2).logpdf(25))

print("# CRS zero-noise on table2 chronology (depths 1..27), tail-3 mean")
chron = table2[:-3]
unsup = [(d, (p - m3) * rho) for d, p, _, rho in chron]
kept = [(d, a) for d, a in unsup if a > 0]
dropped = [d for d, a in unsup if a <= 0]
total = sum(a for _, a in kept)
show("dropped", dropped)
show("A0", total)
for i, (d, _) in enumerate(kept[:-1]):
    below = sum(a for _, a in kept[i + 1:])
    print(f"    {{{d:g}, {math.log(total / below) / LAMBDA!r}}},")
show("terminal depth (no age)", kept[-1][0])

print("# CRS two-sample toy")
show("ln2/lambda", math.log(2) / LAMBDA)

print("# log-likelihood on table2 chronology at truth vs half supply")
truth = lambda x: x * x / 3 + x / 2


def loglik(phi, ps):
    total = 0.0
    for d, p, sig, rho in chron:
        y = AREAL * p * rho
        mu = AREAL * ps * rho + phi / LAMBDA * (
            math.exp(-LAMBDA * truth(d - 1)) - math.exp(-LAMBDA * truth(d)))
        total -= (y - mu) ** 2 / (2 * (AREAL * sig * rho) ** 2)
    for _, p, sig, _ in table2[-3:]:
        total -= (p - ps) ** 2 / (2 * sig ** 2)
    return total


show("loglik(phi=150, ps=20)", loglik(150, 20))
show("loglik(phi=75, ps=20)", loglik(75, 20))

print("# simulator zero-noise truth vs table2")
rho = lambda x: 1.5 - 0.05 * math.cos(math.pi * x / 30)
worst = 0.0
for d, p, sig, col in table2:
    mean_rho, _ = integrate.quad(rho, d - 1, d)
    unsup_areal = 150 / LAMBDA * (
        math.exp(-LAMBDA * truth(d - 1)) - math.exp(-LAMBDA * truth(d)))
    conc = 20 + unsup_areal / mean_rho
    worst = max(worst, abs(p - conc) / sig)
    if d in (1, 10, 30):
        show(f"sim conc depth {d:g}", conc)
        show(f"sim density column depth {d:g}", mean_rho / AREAL)
show("max |table2 - truth| / sigma", worst)
show("t(10)", truth(10))
show("rho(10) with pi*x/30", rho(10))
show("rho(10) with x/(30*pi)", 1.5 - 0.05 * math.cos(10 / (30 * math.pi)))
