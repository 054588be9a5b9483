"""Exact and effective time evolution, amplitude reconstruction and Rabi frequencies."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .elimination import EffectiveModel, Order, estimate_irrelevant
from .errors import GridMismatch, GridTooCoarse, InitialStateOutsideRelevant
from .model import BlockHamiltonian
from .numkernel import dagger, herm_eig, herm_sqrt_pair, op_norm, symmetrize

NORM_ATOL = 1e-12


def time_grid(t_max: float, steps: int) -> np.ndarray:
    """Uniform grid ``0, h, ..., t_max`` with ``steps + 1`` points."""
    if steps < 1 or not t_max > 0:
        raise ValueError("need t_max > 0 and at least one step")
    return np.linspace(0.0, float(t_max), int(steps) + 1)


@dataclass(frozen=True)
class Trajectory:
    """Amplitudes on a time grid, always in the original basis order."""

    times: np.ndarray
    amplitudes: np.ndarray
    labels: tuple[str, ...]
    method: str
    conserved_norm: np.ndarray
    rabi: float | None = None

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def _propagate(generator, start: np.ndarray, times: np.ndarray) -> np.ndarray:
    """Rows ``exp(-i G t) start`` for every t, from one eigendecomposition."""
    eig = herm_eig(generator)
    coeff = dagger(eig.eigenvectors) @ start
    phases = np.exp(-1j * np.outer(times, eig.eigenvalues))
    return (phases * coeff) @ eig.eigenvectors.T


def _check_unit(psi0: np.ndarray) -> None:
    norm = np.linalg.norm(psi0)
    if abs(norm - 1.0) > NORM_ATOL:
        raise ValueError(f"initial state must be normalized (norm {norm:.15f})")


def evolve_exact(
    h,
    psi0,
    times,
    labels: Sequence[str] | None = None,
    relevant: Sequence[int] | None = None,
) -> Trajectory:
    """Exact propagation; ``relevant`` only steers which gap is reported as ``rabi``."""
    h = symmetrize(h)
    psi0 = np.asarray(psi0, dtype=np.complex128)
    _check_unit(psi0)
    times = np.asarray(times, dtype=float)
    amps = _propagate(h, psi0, times)
    labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(h.shape[0]))
    rabi = rabi_exact(h, relevant) if h.shape[0] >= 2 else None
    return Trajectory(times, amps, labels, "exact", np.sum(np.abs(amps) ** 2, axis=1), rabi)


def fill_irrelevant(model: EffectiveModel, psi: np.ndarray, dim: int) -> np.ndarray:
    """Full-basis amplitudes from relevant amplitudes ``psi`` (one row per time).

    Eliminated amplitudes come from the zeroth-order estimate of each
    stage, applied from the last stage back to the first.
    """
    psi = np.atleast_2d(psi)
    full = np.zeros((psi.shape[0], dim), dtype=np.complex128)
    perm = model.source.permutation
    full[:, perm[: model.source.m]] = psi
    full[:, perm[model.source.m :]] = estimate_irrelevant(model.source, psi)
    for inner in reversed(model.inner):
        kept = list(inner.source.permutation[: inner.source.m])
        phi = full[:, kept]
        if inner.order is Order.M1D:
            inv_sqrt, _ = herm_sqrt_pair(inner.metric)
            phi = phi @ inv_sqrt.T
            full[:, kept] = phi
        full[:, list(inner.source.permutation[inner.source.m :])] = estimate_irrelevant(inner.source, phi)
    return full


def evolve_effective(
    model: EffectiveModel, psi0_full, times, labels: Sequence[str] | None = None
) -> Trajectory:
    """Propagate an effective model and reconstruct the eliminated amplitudes.

    The relevant part of ``psi0_full`` is rescaled to unit norm in the
    model's metric, so first-order curves start below one and the
    eliminated states carry the balance.
    """
    psi0_full = np.asarray(psi0_full, dtype=np.complex128)
    _check_unit(psi0_full)
    dim = psi0_full.shape[0]
    rel = list(model.source.permutation[: model.source.m])
    outside = np.delete(psi0_full, rel)
    if np.sum(np.abs(outside) ** 2) > NORM_ATOL:
        raise InitialStateOutsideRelevant("initial state has weight on eliminated states")
    psi_raw = psi0_full[rel]
    metric = model.metric
    psi_start = psi_raw / np.sqrt(np.real(np.vdot(psi_raw, metric @ psi_raw)))

    if model.order is Order.M0:
        psi = _propagate(model.h_eff, psi_start, times)
    else:
        inv_sqrt, sqrt_m = herm_sqrt_pair(metric)
        dressed = _propagate(model.hermitian_form(), sqrt_m @ psi_start, times)
        psi = dressed @ inv_sqrt.T

    amps = fill_irrelevant(model, psi, dim)
    conserved = np.real(np.einsum("ti,ij,tj->t", psi.conj(), metric, psi))
    labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(dim))
    rabi = rabi_effective(model) if model.source.m >= 2 else None
    method = {Order.M0: "markov0", Order.M1: "markov1", Order.M1D: "markov1d"}[model.order]
    return Trajectory(np.asarray(times, dtype=float), amps, labels, method, conserved, rabi)


def reconstruct_history(block: BlockHamiltonian, psi_samples, times) -> np.ndarray:
    """Irrelevant amplitudes from the exact memory integral over a sampled history.

    Composite trapezoid rule for
    ``eps(t) = -(i/2) int_0^t exp(-i delta (t - s)) Omega^dag psi(s) ds``,
    accumulated recursively so the cost is linear in the number of samples.
    """
    times = np.asarray(times, dtype=float)
    psi = np.asarray(psi_samples, dtype=np.complex128).reshape(len(times), block.m)
    if len(times) < 2:
        return np.zeros((len(times), block.n), dtype=np.complex128)
    steps = np.diff(times)
    h = steps[0]
    if not np.allclose(steps, h, rtol=1e-9, atol=0):
        raise ValueError("reconstruct_history needs a uniform grid")
    if h * op_norm(block.delta) > 1.0:
        raise GridTooCoarse(f"step {h:.3g} too coarse for |delta| = {op_norm(block.delta):.3g}")
    eig = herm_eig(block.delta)
    step_prop = eig.apply(np.exp(-1j * eig.eigenvalues * h))
    source = psi @ block.coupling.conj()  # rows: Omega^dag psi(t_k)
    acc = np.zeros(block.n, dtype=np.complex128)
    out = np.zeros((len(times), block.n), dtype=np.complex128)
    for k in range(1, len(times)):
        acc = step_prop @ (acc + 0.5 * h * source[k - 1]) + 0.5 * h * source[k]
        out[k] = acc
    return -0.5j * out


def rabi_exact(h, relevant: Sequence[int] | None = None) -> float:
    """Smallest adjacent eigenvalue spacing of ``h``.

    With ``relevant`` given, only the ``len(relevant)`` eigenstates with
    the largest weight on those basis states are considered.  This picks
    the transfer frequency when an unrelated pair of eliminated states
    happens to be closer together.
    """
    eig = herm_eig(h)
    lam = eig.eigenvalues
    if lam.size < 2:
        raise ValueError("need at least two levels")
    if relevant is not None:
        weight = np.sum(np.abs(eig.eigenvectors[list(relevant), :]) ** 2, axis=0)
        keep = np.sort(np.argsort(-weight, kind="stable")[: len(relevant)])
        lam = lam[keep]
    return float(np.min(np.diff(lam)))


def effective_gaps(model: EffectiveModel) -> np.ndarray:
    lam = herm_eig(model.hermitian_form()).eigenvalues
    return np.diff(lam)


def rabi_effective(model: EffectiveModel) -> float:
    gaps = effective_gaps(model)
    if gaps.size == 0:
        raise ValueError("need at least two relevant states")
    return float(gaps.min())


@dataclass(frozen=True)
class ComparisonReport:
    labels: tuple[str, ...]
    max_abs: np.ndarray
    rms: np.ndarray
    rabi_relative: float | None

    @property
    def worst(self) -> float:
        return float(self.max_abs.max())


def compare_trajectories(a: Trajectory, b: Trajectory) -> ComparisonReport:
    """Population differences of ``b`` against reference ``a``."""
    if a.times.shape != b.times.shape or not np.allclose(a.times, b.times, rtol=0, atol=1e-12):
        raise GridMismatch("trajectories use different time grids")
    if a.labels != b.labels:
        raise GridMismatch("trajectories use different basis labels")
    diff = np.abs(a.populations - b.populations)
    rel = None
    if a.rabi is not None and b.rabi is not None and a.rabi != 0:
        rel = (b.rabi - a.rabi) / a.rabi
    return ComparisonReport(a.labels, diff.max(axis=0), np.sqrt(np.mean(diff**2, axis=0)), rel)
