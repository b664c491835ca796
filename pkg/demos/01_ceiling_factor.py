#!/usr/bin/env python3
"""How a nearby ceiling changes the momentum-theory picture of a propeller.

Walks through the core quantities for a 23-mm micro propeller: the ceiling
factor versus gap ratio, the induced-power drop it implies, the suction force
pulling the rotor toward the surface, and the momentum balance that defines
the model.
"""

import numpy as np

from ceilprop import (
    CeilingParams,
    Environment,
    aerodynamic_power,
    ceiling_coefficient,
    flow_state,
    holding_force,
    induced_velocity,
    momentum_residual,
)

env = Environment(air_density=1.2)
radius = 0.023  # [m]
area = np.pi * radius**2
thrust = 0.0785  # [N] ~ 8 g per propeller, hover share of a 28-g quadrotor

single = CeilingParams(asymmetry=1.60)  # single 23-mm propeller
quad = CeilingParams(asymmetry=2.2, recirculation=0.004)  # quad-like, stronger interaction

print("Ceiling factor vs gap ratio (delta = radius / gap distance)")
print(f"{'delta':>6} {'gap [mm]':>9} {'single':>8} {'quad-like':>10}")
for delta in (0.0, 1.0, 2.0, 4.0, 8.0, 11.5, 16.0, 23.0):
    gap_mm = np.inf if delta == 0 else 1e3 * radius / delta
    g1 = ceiling_coefficient(delta, single)
    g2 = ceiling_coefficient(delta, quad)
    print(f"{delta:6.1f} {gap_mm:9.2f} {g1:8.3f} {g2:10.3f}")

print()
print("Same thrust, less power: aerodynamic power at 78.5 mN")
for delta in (0.0, 8.0, 23.0):
    g = ceiling_coefficient(delta, single)
    p = aerodynamic_power(thrust, g, env, area)
    v = induced_velocity(thrust, g, env, area)
    print(f"  delta {delta:5.1f}: factor {g:5.2f} -> {p * 1e3:6.1f} mW  (induced flow {v:4.2f} m/s)")

print()
print("Suction force toward the ceiling (1 mm gap, delta = 23)")
g = ceiling_coefficient(23.0, single)
v_i = induced_velocity(thrust, g, env, area)
f = holding_force(v_i, 23.0, single.asymmetry, env, area)
print(f"  induced flow {v_i:.2f} m/s -> holding force {f * 1e3:.1f} mN vs thrust {thrust * 1e3:.1f} mN")

print()
print("Momentum balance closes at terminal velocity = 2 * factor * induced velocity:")
for delta in (0.0, 10.0, 23.0):
    g = ceiling_coefficient(delta, single)
    res = momentum_residual(1.0, 2.0 * g, delta, single)
    print(f"  delta {delta:5.1f}: residual {res:+.2e}  (factor {g:.3f})")

print()
state = flow_state(thrust, 23.0, single, env, area)
print("Full flow state at a 1 mm gap:")
print(f"  upstream pressure  {state.upstream_pressure:10.1f} Pa (ambient {state.ambient_pressure:.0f} Pa)")
print(f"  downstream pressure {state.downstream_pressure:9.1f} Pa")
print(f"  induced / terminal flow {state.induced_velocity:.2f} / {state.terminal_velocity:.2f} m/s")
