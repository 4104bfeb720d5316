import numpy as np
import pytest

from hamid import (
    CONTINUATION_OK,
    ContinuationConfig,
    HamiltonianPair,
    NewtonConfig,
    SinSqEnvelope,
    TimeGrid,
    continuation_identify,
    decompose_target,
    intermediate_target,
    m0_seed,
    propagate_final,
    sample_field,
    singularity_probe,
    spec_norm,
    unitary_exp,
)
from hamid.experiments import BENCH_TWO_LEVEL_DELTA, BENCH_TWO_LEVEL_SKEW
from hamid.models import TwoLevelParams, two_level_model

from helpers import SIGMA_X, haar_unitary, random_pair


def test_intermediate_target_endpoints(rng):
    u_tar = haar_unitary(4, rng)
    dec = decompose_target(u_tar)
    n_c = 7
    np.testing.assert_allclose(
        intermediate_target(dec, 0, n_c), unitary_exp(1j * dec.s), atol=1e-10
    )
    assert spec_norm(intermediate_target(dec, n_c, n_c) - u_tar) < 1e-10


def test_intermediate_target_constant_path_when_a_zero():
    dec = decompose_target(SIGMA_X.astype(complex))
    assert spec_norm(dec.a) < 1e-13
    u0 = intermediate_target(dec, 0, 5)
    for m in range(1, 6):
        np.testing.assert_allclose(intermediate_target(dec, m, 5), u0, atol=1e-12)


def test_intermediate_target_range_check(rng):
    dec = decompose_target(haar_unitary(2, rng))
    with pytest.raises(ValueError):
        intermediate_target(dec, -1, 5)
    with pytest.raises(ValueError):
        intermediate_target(dec, 6, 5)


def test_m0_seed_zero_target():
    dec = decompose_target(np.eye(3, dtype=complex))
    pair = m0_seed(dec, 100.0)
    assert spec_norm(pair.h0) < 1e-14 and spec_norm(pair.h1) == 0.0


def test_m0_seed_sigma_x():
    t_f = 9000.0
    dec = decompose_target(SIGMA_X.astype(complex))
    pair = m0_seed(dec, t_f)
    expected = -np.pi / (2 * t_f) * np.array([[1.0, -1.0], [-1.0, 1.0]])
    np.testing.assert_allclose(pair.h0, expected, atol=1e-15)
    np.testing.assert_allclose(pair.h1, 0.0)


def test_m0_seed_diagonal_phases():
    theta = 0.7
    t_f = 10.0
    dec = decompose_target(np.diag([np.exp(1j * theta), np.exp(-1j * theta)]))
    pair = m0_seed(dec, t_f)
    np.testing.assert_allclose(pair.h0, np.diag([-theta, theta]) / t_f, atol=1e-14)


def test_m0_seed_reproduces_target_in_free_evolution():
    # propagating (-S/t_f, 0) under any field gives exp(iS) up to time
    # discretization error
    rng = np.random.default_rng(3)
    u_tar = haar_unitary(3, rng)
    dec = decompose_target(u_tar)
    t_f = 50.0
    pair = m0_seed(dec, t_f)
    grid = TimeGrid(t_f=t_f, n_steps=20000)
    samples = rng.normal(size=20000)
    u_n = propagate_final(np.eye(3, dtype=complex), pair, samples, grid)
    assert spec_norm(u_n - unitary_exp(1j * dec.s)) < 1e-6


def _benchmark_setup(n_steps=2000):
    p = TwoLevelParams(delta=BENCH_TWO_LEVEL_DELTA, envelope_skew=BENCH_TWO_LEVEL_SKEW)
    pair, fld = two_level_model(p)
    grid = TimeGrid(p.t_f, n_steps)
    return pair, sample_field(fld, grid), grid


def test_continuation_rejects_non_identity_start():
    pair, samples, grid = _benchmark_setup()
    u_tar = propagate_final(np.eye(2, dtype=complex), pair, samples, grid)
    with pytest.raises(ValueError):
        continuation_identify(
            np.diag([1.0, 1j]).astype(complex), u_tar, samples, grid, ContinuationConfig()
        )


def test_continuation_two_level_short_path():
    pair, samples, grid = _benchmark_setup()
    u0 = np.eye(2, dtype=complex)
    u_tar = propagate_final(u0, pair, samples, grid)
    cfg = ContinuationConfig(n_intermediate=5, newton=NewtonConfig(tol=1e-12, max_iters=30))
    recovered, report = continuation_identify(u0, u_tar, samples, grid, cfg, truth=pair)
    assert report.flag == CONTINUATION_OK
    assert len(report.stages) == 6
    assert all(st.dev_u_stage <= 1e-10 for st in report.stages)
    assert report.stages[-1].dev_h0 <= 1e-10
    assert report.stages[-1].dev_h1 <= 1e-8


def test_continuation_m0_refinement_polishes():
    pair, samples, grid = _benchmark_setup()
    u0 = np.eye(2, dtype=complex)
    u_tar = propagate_final(u0, pair, samples, grid)
    cfg = ContinuationConfig(n_intermediate=1, newton=NewtonConfig(tol=1e-12, max_iters=30))
    _, report = continuation_identify(u0, u_tar, samples, grid, cfg)
    # stage 0 must reach its own target within tol * 10
    assert report.stages[0].dev_u_stage <= 1e-11


def test_continuation_report_csv(tmp_path):
    pair, samples, grid = _benchmark_setup()
    u0 = np.eye(2, dtype=complex)
    u_tar = propagate_final(u0, pair, samples, grid)
    cfg = ContinuationConfig(n_intermediate=2, newton=NewtonConfig(max_iters=30))
    _, report = continuation_identify(u0, u_tar, samples, grid, cfg, truth=pair)
    path = tmp_path / "stages.csv"
    report.write_csv(path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "m,newton_iterations,dev_U_stage,dev_H0,dev_H1"
    assert len(lines) == 4  # header + stages 0..2


def test_continuation_failure_reported_and_retry_doubles():
    pair, samples, grid = _benchmark_setup()
    u0 = np.eye(2, dtype=complex)
    u_tar = propagate_final(u0, pair, samples, grid)
    # one-iteration budget cannot satisfy the stage tolerance
    strangled = NewtonConfig(tol=1e-30, max_iters=1)
    cfg = ContinuationConfig(n_intermediate=2, newton=strangled)
    _, report = continuation_identify(u0, u_tar, samples, grid, cfg)
    assert report.flag == "failed"
    assert report.failed_stage == 0
    cfg_retry = ContinuationConfig(n_intermediate=2, newton=strangled, retry_doubled=True)
    _, report2 = continuation_identify(u0, u_tar, samples, grid, cfg_retry)
    # the retry reruns the path with twice the stages before giving up
    assert report2.flag == "failed"


def test_singularity_probe_appendix_case():
    # target sigma_x, seed pair (-S/t_f, 0), plain sin^2 field: rank 3 of 4,
    # stable across the rank-tolerance range
    t_f = 9000.0
    dec = decompose_target(SIGMA_X.astype(complex))
    pair = m0_seed(dec, t_f)
    grid = TimeGrid(t_f=t_f, n_steps=2000)
    samples = sample_field(SinSqEnvelope(e0=2.0), grid)
    for tol in (1e-10, 1e-8, 1e-6):
        diag = singularity_probe(pair, samples, grid, SIGMA_X.astype(complex), rank_tolerance=tol)
        assert diag.numerical_rank == 3
        assert diag.condition_estimate > 1e12
        assert len(diag.singular_values) == 4


def test_singularity_probe_no_coupling_no_field():
    # H1 = 0 and E = 0 with distinct diagonal phases: coupling columns carry
    # no imaginary structure, so the system is rank deficient
    pair = HamiltonianPair(np.diag([0.3, -0.4]), np.zeros((2, 2)))
    grid = TimeGrid(t_f=5.0, n_steps=64)
    samples = np.zeros(64)
    u_tar = propagate_final(np.eye(2, dtype=complex), pair, samples, grid)
    diag = singularity_probe(pair, samples, grid, u_tar)
    assert diag.numerical_rank < 4


def test_singularity_probe_generic_full_rank(rng):
    pair = random_pair(2, rng)
    grid = TimeGrid(t_f=1.0, n_steps=64)
    samples = rng.normal(size=64)
    u_tar = propagate_final(np.eye(2, dtype=complex), pair, samples, grid)
    diag = singularity_probe(pair, samples, grid, u_tar)
    assert diag.numerical_rank == 4
    assert diag.condition_estimate < 1e6
