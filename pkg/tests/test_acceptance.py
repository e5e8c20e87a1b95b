"""Quantitative acceptance suite: one test per criterion, tolerances pinned
in slabdecay.acceptance.  Details of any failure are carried into the
assertion message for diagnosis."""

from slabdecay import acceptance

JOBS = 4


def check(result):
    assert result.passed, f"criterion {result.cid} ({result.name}): {result.details}"


def test_criterion_01_dispersion_bracket():
    check(acceptance.criterion_1())


def test_criterion_02_low_frequency_limit():
    check(acceptance.criterion_2())


def test_criterion_03_cross_validation():
    check(acceptance.criterion_3())


def test_criterion_04_zero_mode_heat_rate():
    check(acceptance.criterion_4())


def test_criterion_05_energy_dissipation_identity():
    check(acceptance.criterion_5())


def test_criterion_06_lyapunov_monotonicity():
    check(acceptance.criterion_6())


def test_criterion_07_torus_exponential():
    check(acceptance.criterion_7(jobs=JOBS))


def test_criterion_08_torus_algebraic():
    check(acceptance.criterion_8(jobs=JOBS))


def test_criterion_09_transition_laws():
    check(acceptance.criterion_9(jobs=JOBS))


def test_criterion_10_plane_rates():
    check(acceptance.criterion_10(jobs=JOBS))


def test_criterion_11_inequality_suite():
    check(acceptance.criterion_11(seed=7))


def test_criterion_12_trivial_and_degenerate():
    check(acceptance.criterion_12())
