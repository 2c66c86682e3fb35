"""Monte-Carlo cross-checks that avoid every closed-form average.

Each estimator draws photon directions from the dipole pattern and atom
displacements from the thermal Gaussians, pushes them through the per-sample
operator pipeline and only then averages.  Agreement with the quadrature and
closed-form routes (within a few standard errors) validates both sides.

Reproducibility contract: sampling is split into chunks of cfg.chunk_size;
chunk i uses the substream SeedSequence(cfg.seed, spawn_key=(i,)) and the
partial sums are reduced in chunk order.  Results are therefore bit-identical
for a fixed (seed, chunk_size, n_samples) no matter how many workers run the
chunks.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .gates import BRANCH_ATOM1, BRANCH_ATOM2, b2_matrix, raman_matrix
from .motion import OpticsParams, TrapParams, axis_variance

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class McConfig:
    n_samples: int = 100_000
    seed: int = 0
    chunk_size: int = 10_000

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if self.chunk_size < 1:
            raise ValueError("chunk_size must be >= 1")


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n: int


@dataclass(frozen=True)
class DecoherenceEstimate:
    """Decoherence estimate plus the sine-average symmetry diagnostic."""

    estimate: McEstimate
    imaginary_part: McEstimate


@dataclass(frozen=True)
class MatrixEstimate:
    mean: np.ndarray
    std_error: np.ndarray
    n: int
    row_sum_max_dev: float | None = None


def _chunk_counts(cfg: McConfig) -> list[int]:
    full, rem = divmod(cfg.n_samples, cfg.chunk_size)
    return [cfg.chunk_size] * full + ([rem] if rem else [])


def _chunk_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def _map_chunks(fn, cfg: McConfig, workers: int) -> list:
    tasks = list(enumerate(_chunk_counts(cfg)))
    if workers <= 1:
        return [fn(_chunk_rng(cfg.seed, i), count) for i, count in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda t: fn(_chunk_rng(cfg.seed, t[0]), t[1]), tasks))


def _estimate(total: float, total_sq: float, n: int) -> McEstimate:
    mean = total / n
    if n > 1:
        var = max(total_sq - n * mean * mean, 0.0) / (n - 1)
        se = float(np.sqrt(var / n))
    else:
        se = float("nan")
    return McEstimate(float(mean), se, n)


def _matrix_estimate(total, total_sq, n, row_dev=None) -> MatrixEstimate:
    mean = total / n
    if n > 1:
        var = np.maximum(total_sq - n * mean * mean, 0.0) / (n - 1)
        se = np.sqrt(var / n)
    else:
        se = np.full_like(mean, np.nan)
    return MatrixEstimate(mean, se, n, row_dev)


def sample_displacement(trap: TrapParams, rng: np.random.Generator,
                        size: int, mode: str = "classical") -> np.ndarray:
    """(size, 3) thermal displacements in inverse-wavenumber units."""
    stds = np.sqrt([axis_variance(trap, ax, mode) for ax in ("x", "y", "z")])
    return rng.standard_normal((size, 3)) * stds


def sample_photon_direction(optics: OpticsParams, rng: np.random.Generator,
                            size: int) -> tuple[np.ndarray, np.ndarray]:
    """Directions (theta, phi) of registered photons inside the cone.

    Rejection sampling: uniform on the spherical cap, thinned by the
    x-dipole pattern 1 - sin^2(theta) cos^2(phi).
    """
    cos_lo = np.cos(optics.theta0)
    thetas = np.empty(size)
    phis = np.empty(size)
    have = 0
    while have < size:
        batch = max(2 * (size - have), 64)
        theta = np.arccos(rng.uniform(cos_lo, 1.0, batch))
        phi = rng.uniform(0.0, 2.0 * np.pi, batch)
        keep = rng.uniform(0.0, 1.0, batch) < 1.0 - np.sin(theta) ** 2 * np.cos(phi) ** 2
        take = min(int(keep.sum()), size - have)
        thetas[have:have + take] = theta[keep][:take]
        phis[have:have + take] = phi[keep][:take]
        have += take
    return thetas, phis


def sample_dipole_direction(rng: np.random.Generator, size: int,
                            exclude_theta0: float | None = None
                            ) -> tuple[np.ndarray, np.ndarray]:
    """Directions from the full-sphere x-dipole pattern (missed photons).

    With exclude_theta0 set, directions inside that cone are rejected too,
    restricting the missed photon to the complement of the collection cone.
    """
    thetas = np.empty(size)
    phis = np.empty(size)
    have = 0
    while have < size:
        batch = max(2 * (size - have), 64)
        theta = np.arccos(rng.uniform(-1.0, 1.0, batch))
        phi = rng.uniform(0.0, 2.0 * np.pi, batch)
        keep = rng.uniform(0.0, 1.0, batch) < 1.0 - np.sin(theta) ** 2 * np.cos(phi) ** 2
        if exclude_theta0 is not None:
            keep &= theta > exclude_theta0
        take = min(int(keep.sum()), size - have)
        thetas[have:have + take] = theta[keep][:take]
        phis[have:have + take] = phi[keep][:take]
        have += take
    return thetas, phis


def momentum_kick(theta, phi) -> np.ndarray:
    """(n, 3) components of q/k for excitation along x, photon at (theta, phi)."""
    st = np.sin(theta)
    return np.stack(
        [1.0 - st * np.cos(phi), -st * np.sin(phi), -np.cos(theta)], axis=-1)


def _bell_batch(p1: np.ndarray, p2: np.ndarray) -> np.ndarray:
    """(n, 4, 4) Bell operators for per-sample motional phases."""
    return (np.exp(1j * p1)[:, None, None] * BRANCH_ATOM1
            + np.exp(1j * p2)[:, None, None] * BRANCH_ATOM2) / SQRT2


def _motion_phases(trap, optics, rng, count, mode):
    """One stage of draws: photon direction, then both atom displacements."""
    theta, phi = sample_photon_direction(optics, rng, count)
    q = momentum_kick(theta, phi)
    dr1 = sample_displacement(trap, rng, count, mode)
    dr2 = sample_displacement(trap, rng, count, mode)
    return np.einsum("ij,ij->i", q, dr1), np.einsum("ij,ij->i", q, dr2)


def mc_decoherence(trap: TrapParams, optics: OpticsParams, cfg: McConfig,
                   mode: str = "classical", workers: int = 1) -> DecoherenceEstimate:
    """Estimate D = 1 - <cos(q.(dr1 - dr2))> by direct sampling.

    The sine average is returned as a diagnostic; it vanishes by symmetry,
    so the cosine alone carries the dephasing.
    """

    def chunk(rng, count):
        p1, p2 = _motion_phases(trap, optics, rng, count, mode)
        delta = p1 - p2
        c, s = np.cos(delta), np.sin(delta)
        return (c.sum(), (c * c).sum(), s.sum(), (s * s).sum())

    c1 = c2 = s1 = s2 = 0.0
    for pc1, pc2, ps1, ps2 in _map_chunks(chunk, cfg, workers):
        c1 += pc1
        c2 += pc2
        s1 += ps1
        s2 += ps2
    n = cfg.n_samples
    cos_est = _estimate(c1, c2, n)
    return DecoherenceEstimate(
        estimate=McEstimate(1.0 - cos_est.mean, cos_est.std_error, n),
        imaginary_part=_estimate(s1, s2, n))


def mc_probabilities(trap: TrapParams, optics: OpticsParams,
                     theta1: float, theta2: float, cfg: McConfig,
                     mode: str = "classical", workers: int = 1) -> MatrixEstimate:
    """Outcome probability matrix estimated sample by sample.

    Each sample builds the Bell operator at its drawn motional phases,
    composes it with the analysis rotation and squares entry moduli.  Rows
    sum to 1 per sample (the composition preserves row norms); the largest
    per-sample deviation is reported in row_sum_max_dev.
    """
    r = raman_matrix(theta1, theta2)

    def chunk(rng, count):
        p1, p2 = _motion_phases(trap, optics, rng, count, mode)
        composed = _bell_batch(p1, p2) @ r
        probs = composed.real**2 + composed.imag**2
        dev = float(np.max(np.abs(probs.sum(axis=2) - 1.0)))
        return probs.sum(axis=0), (probs**2).sum(axis=0), dev

    total = np.zeros((4, 4))
    total_sq = np.zeros((4, 4))
    worst = 0.0
    for p_sum, p_sq, dev in _map_chunks(chunk, cfg, workers):
        total += p_sum
        total_sq += p_sq
        worst = max(worst, dev)
    return _matrix_estimate(total, total_sq, cfg.n_samples, worst)


def mc_f_squared(trap: TrapParams, optics: OpticsParams, cfg: McConfig,
                 mode: str = "classical", missed_outside_cone: bool = False,
                 workers: int = 1) -> McEstimate:
    """Mean squared modulus of the double-emission interference factor.

    f adds the two assignments of (registered, missed) photons to the two
    atoms.  It is 4 for frozen atoms and decays to 2 once motion scrambles
    the relative phase.  The missed photon is drawn from the full-sphere
    dipole pattern by default (it is unobserved); missed_outside_cone
    restricts it to the complement of the collection cone instead.
    """
    exclude = optics.theta0 if missed_outside_cone else None

    def chunk(rng, count):
        theta, phi = sample_photon_direction(optics, rng, count)
        q = momentum_kick(theta, phi)
        theta_m, phi_m = sample_dipole_direction(rng, count, exclude)
        q_miss = momentum_kick(theta_m, phi_m)
        dr1 = sample_displacement(trap, rng, count, mode)
        dr2 = sample_displacement(trap, rng, count, mode)
        f = (np.exp(1j * (np.einsum("ij,ij->i", q, dr1) + np.einsum("ij,ij->i", q_miss, dr2)))
             + np.exp(1j * (np.einsum("ij,ij->i", q, dr2) + np.einsum("ij,ij->i", q_miss, dr1))))
        v = f.real**2 + f.imag**2
        return (v.sum(), (v * v).sum())

    s1 = s2 = 0.0
    for p1, p2 in _map_chunks(chunk, cfg, workers):
        s1 += p1
        s2 += p2
    return _estimate(s1, s2, cfg.n_samples)


def mc_bell_measurement(trap: TrapParams, optics: OpticsParams, xi: float,
                        cfg: McConfig, mode: str = "classical",
                        workers: int = 1) -> MatrixEstimate:
    """Prepare-then-measure probability matrix with independent stage draws.

    The measurement stage projects onto the Bell states decorated with its
    own motional phases, so its bracket is the conjugate transpose of the
    second-stage Bell operator (identical to the inverse once the atoms are
    frozen).  The four field states - clean/clean, double/clean,
    clean/double, double/double - are orthogonal, so their branch
    probabilities add; the double-excitation brackets carry the mean branch
    weight sqrt(2 xi) and the whole table is normalized by (1 + 2 xi)^2.

    Row sums equal 1 on average (exactly 1 at T = 0); per sample they
    fluctuate with the overlap of the two stages' decorated bases.
    """
    if xi < 0:
        raise ValueError("scattering ratio must be >= 0")
    double = b2_matrix(xi)
    norm = (1.0 + 2.0 * xi) ** 2

    def chunk(rng, count):
        p1, p2 = _motion_phases(trap, optics, rng, count, mode)
        q1, q2 = _motion_phases(trap, optics, rng, count, mode)
        prep = _bell_batch(p1, p2)
        meas = _bell_batch(q1, q2).conj().transpose(0, 2, 1)
        branches = (
            prep @ meas,
            double[None, :, :] @ meas,
            prep @ double[None, :, :],
            np.broadcast_to(double @ double, (count, 4, 4)),
        )
        probs = sum(b.real**2 + b.imag**2 for b in branches) / norm
        return probs.sum(axis=0), (probs**2).sum(axis=0)

    total = np.zeros((4, 4))
    total_sq = np.zeros((4, 4))
    for p_sum, p_sq in _map_chunks(chunk, cfg, workers):
        total += p_sum
        total_sq += p_sq
    return _matrix_estimate(total, total_sq, cfg.n_samples)


__all__ = [
    "DecoherenceEstimate",
    "MatrixEstimate",
    "McConfig",
    "McEstimate",
    "mc_bell_measurement",
    "mc_decoherence",
    "mc_f_squared",
    "mc_probabilities",
    "momentum_kick",
    "sample_dipole_direction",
    "sample_displacement",
    "sample_photon_direction",
]
