import re

import pytest

from ceilprop import CeilingParams, Environment, MotorParams, PropellerGeometry

# Bench-characterized constants for the two reference propellers and the
# coreless drive motor, reused across the suite.
GEOM_23MM = dict(radius=0.023, figure_of_merit=0.50, blade_coeffs=(0.154, 0.846, 0.022))
GEOM_50MM = dict(radius=0.050, figure_of_merit=0.68, blade_coeffs=(0.058, 0.095, 0.011))
MOTOR_REF = dict(resistance=1.58, back_emf=1.1e-3)


@pytest.fixture
def env():
    return Environment(air_density=1.2)


@pytest.fixture
def geom_23mm():
    return PropellerGeometry(**GEOM_23MM)


@pytest.fixture
def geom_50mm():
    return PropellerGeometry(**GEOM_50MM)


@pytest.fixture
def bench_motor():
    return MotorParams(**MOTOR_REF)


@pytest.fixture
def single_prop_ceiling():
    return CeilingParams(asymmetry=1.60, recirculation=0.0)


ACCEPTANCE_LABELS = {
    1: "flight-coefficient reproduction for both reference propellers",
    2: "hover input-power anchors from the motor model",
    3: "equal-power thrust amplification factors",
    4: "momentum-theory consistency suite",
    5: "synthesize-and-fit round trip recovers all constants",
    6: "iterative fits match the brute-force grid oracle",
    7: "motor identification, exact and under noise",
    8: "resonance-scaling product for the 50-mm propeller",
    9: "ceiling-factor dip flagging",
}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    verdicts = {}
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if getattr(report, "when", "call") != "call" or "test_acceptance" not in nodeid:
                continue
            match = re.search(r"test_c(\d+)", nodeid)
            if not match:
                continue
            criterion = int(match.group(1))
            verdicts[criterion] = verdicts.get(criterion, True) and outcome == "passed"
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(verdicts):
        status = "PASS" if verdicts[criterion] else "FAIL"
        label = ACCEPTANCE_LABELS.get(criterion, "")
        terminalreporter.write_line(f"criterion {criterion}: {status}  {label}")
