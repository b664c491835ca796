#!/usr/bin/env python3
"""End-to-end check of the bench-data pipeline on the bundled synthetic set.

data/steady_23mm_synthetic.csv was generated from known model constants with
1% measurement noise (see data/ref_23mm.json, which records the truth and
labels the set as synthetic).  Running the full reduction chain on it shows
how well each constant comes back:

  steady records -> motor constants
                 -> figure of merit + ceiling-factor points
                 -> asymmetry (ceiling model)
                 -> lumped blade constants
"""

from pathlib import Path

from ceilprop import (
    Environment,
    fit_blade_coefficients,
    fit_ceiling_params,
    fit_eta_gamma,
    flight_coefficient_points,
    identify_motor,
    read_params,
    read_steady_csv,
)

here = Path(__file__).resolve().parent
data = here.parent / "data"
env = Environment(air_density=1.2)

records = read_steady_csv(data / "steady_23mm_synthetic.csv")
truth = read_params(data / "ref_23mm.json")
print(f"{len(records)} steady records across {len({r.distance for r in records})} ceiling distances")

motor, motor_report = identify_motor(records)
eta, points = fit_eta_gamma(records, env)
ceiling, ceiling_report = fit_ceiling_params(points, reduced=True)
ct_points, ctau_points = flight_coefficient_points(records)
coeffs, blade_report = fit_blade_coefficients(
    ct_points, ctau_points, radius=truth.geometry.radius, figure_of_merit=eta, ceiling=ceiling, env=env
)

rows = [
    ("resistance [ohm]", motor.resistance, truth.motor.resistance),
    ("back-EMF [V s/rad]", motor.back_emf, truth.motor.back_emf),
    ("figure of merit", eta, truth.geometry.figure_of_merit),
    ("asymmetry", ceiling.asymmetry, truth.ceiling.asymmetry),
    ("c0", coeffs[0], truth.geometry.blade_coeffs[0]),
    ("c1", coeffs[1], truth.geometry.blade_coeffs[1]),
    ("c2", coeffs[2], truth.geometry.blade_coeffs[2]),
]
print()
print(f"{'constant':<20} {'fitted':>12} {'truth':>12} {'error':>8}")
for name, fitted, true in rows:
    print(f"{name:<20} {fitted:12.5g} {true:12.5g} {abs(fitted - true) / true:8.2%}")

print()
print(f"ceiling fit converged: {ceiling_report.converged} ({ceiling_report.iterations} iterations)")
print(f"blade fit converged:   {blade_report.converged} ({blade_report.iterations} iterations)")
print()
print("Empirical ceiling factors (every sixth distance):")
for p in points[::6]:
    print(f"  delta {p.delta:7.3f}: factor {p.gamma:6.3f} +/- {p.stderr:.3f}")
