"""Shot-based measurement simulation for Q-operators.

Jobs carry a (generally non-Hermitian) operator and its site support.  Jobs
whose supports are disjoint are grouped by greedy colouring and notionally
measured on shared state copies; the copies-of-rho accounting is
chi * shots with chi the number of groups.
"""

from __future__ import annotations

import csv
import zlib
from dataclasses import dataclass, field

import numpy as np

from .spectral import GibbsState, SpectralData


@dataclass(frozen=True)
class ShotEstimate:
    mean: complex
    shots: int
    std_error: float


@dataclass(frozen=True)
class ObservableJob:
    label: str
    q_op: np.ndarray
    support: frozenset[int]


@dataclass
class MeasurementPlan:
    groups: list[list[ObservableJob]]
    shots_per_job: int
    seed: int

    @property
    def chi(self) -> int:
        return len(self.groups)

    @property
    def total_copies(self) -> int:
        return self.chi * self.shots_per_job

    @property
    def job_count(self) -> int:
        return sum(len(g) for g in self.groups)

    def labels(self) -> list[str]:
        return [j.label for g in self.groups for j in g]


def hermitian_split(q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """q = h1 + i h2 with h1, h2 Hermitian."""
    h1 = (q + q.conj().T) / 2
    h2 = (q - q.conj().T) / (2j)
    return h1, h2


def build_plan(jobs: list[ObservableJob], shots: int, seed: int) -> MeasurementPlan:
    """Greedy-colour jobs so no group has overlapping supports.

    Deterministic: jobs are processed in label order and take the first
    compatible group, so chi never exceeds (max overlap degree) + 1.
    """
    labels = [j.label for j in jobs]
    if len(set(labels)) != len(labels):
        raise ValueError("job labels must be unique")
    groups: list[list[ObservableJob]] = []
    occupied: list[set[int]] = []
    for job in sorted(jobs, key=lambda j: j.label):
        placed = False
        for g, occ in zip(groups, occupied):
            if not (occ & job.support):
                g.append(job)
                occ.update(job.support)
                placed = True
                break
        if not placed:
            groups.append([job])
            occupied.append(set(job.support))
    return MeasurementPlan(groups=groups, shots_per_job=int(shots), seed=int(seed))


def _rho_matrix(rho) -> np.ndarray:
    if isinstance(rho, GibbsState):
        return rho.rho
    return np.asarray(rho, dtype=complex)


def sample_expectation(
    h_obs: np.ndarray,
    rho,
    shots: int,
    seed,
    grouping_tol: float | None = None,
) -> ShotEstimate:
    """Born-rule estimate of Tr[rho h_obs] for Hermitian h_obs.

    Draws `shots` i.i.d. eigenvalue outcomes with p_j = Tr[rho Pi_j] over the
    eigenprojectors of h_obs; returns the sample mean and sample std error.
    """
    if shots < 1:
        raise ValueError("shots must be positive")
    r = _rho_matrix(rho)
    sd = SpectralData(h_obs, grouping_tol=grouping_tol)
    diag = np.real(np.einsum("ij,ji->i", sd.basis.conj().T @ r, sd.basis))
    levels = sd.group_energies
    probs = np.array([diag[idx].sum() for idx in sd.groups])
    if probs.min() < -1e-9:
        raise ValueError("state has a negative outcome probability")
    probs = np.clip(probs, 0.0, None)
    total = probs.sum()
    if abs(total - 1.0) > 1e-8:
        raise ValueError(f"outcome probabilities sum to {total}, not 1")
    probs = probs / total
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, probs)
    mean = float(counts @ levels) / shots
    if shots > 1:
        var = float(counts @ (levels - mean) ** 2) / (shots - 1)
        std_error = np.sqrt(var / shots)
    else:
        std_error = 0.0
    return ShotEstimate(mean=mean, shots=shots, std_error=float(std_error))


def run_plan(
    plan: MeasurementPlan,
    rho,
    mode: str = "shots",
    transcript_path=None,
) -> dict[str, ShotEstimate]:
    """Execute a plan against a state.

    exact mode returns Tr[q_op rho] with zero error; shots mode samples the
    two Hermitian parts of each job separately, each with its own stream
    derived from (plan.seed, label), and combines them as mean_re + i mean_im.
    """
    if mode not in ("shots", "exact"):
        raise ValueError(f"unknown mode {mode!r}")
    r = _rho_matrix(rho)
    out: dict[str, ShotEstimate] = {}
    rows = []
    for gi, group in enumerate(plan.groups):
        for job in group:
            if mode == "exact":
                mean = complex(np.trace(job.q_op @ r))
                est = ShotEstimate(mean=mean, shots=0, std_error=0.0)
            else:
                h1, h2 = hermitian_split(job.q_op)
                tag = zlib.crc32(job.label.encode())
                e1 = sample_expectation(
                    h1, r, plan.shots_per_job, seed=[plan.seed, tag, 1]
                )
                e2 = sample_expectation(
                    h2, r, plan.shots_per_job, seed=[plan.seed, tag, 2]
                )
                mean = e1.mean + 1j * e2.mean
                err = float(np.hypot(e1.std_error, e2.std_error))
                est = ShotEstimate(mean=mean, shots=plan.shots_per_job, std_error=err)
            out[job.label] = est
            rows.append(
                {
                    "label": job.label,
                    "group": gi,
                    "shots": est.shots,
                    "mean_re": np.real(est.mean),
                    "mean_im": np.imag(est.mean),
                    "std_error": est.std_error,
                }
            )
    if transcript_path is not None:
        with open(transcript_path, "w", newline="") as fh:
            writer = csv.DictWriter(
                fh,
                fieldnames=["label", "group", "shots", "mean_re", "mean_im", "std_error"],
            )
            writer.writeheader()
            writer.writerows(rows)
    return out
