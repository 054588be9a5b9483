"""Interaction-picture Hamiltonians, block partitions and scenario presets.

Conventions: hbar = 1, every entry is an angular frequency.  A
:class:`BlockHamiltonian` stores the relevant/irrelevant coupling as the
full ``Omega`` (not ``Omega/2``), so the assembled matrix is always::

    [[omega,        Omega / 2],
     [Omega^dag / 2, delta   ]]
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import sqrt
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateAdjacentLevels, SingularBlock
from .numkernel import ComplexMatrix, as_matrix, dagger, herm_inverse, symmetrize


@dataclass(frozen=True)
class LevelLadder:
    """Lab-frame cascade: ``d`` level energies and ``d - 1`` driving lasers."""

    level_energies: tuple[float, ...]
    laser_frequencies: tuple[float, ...]
    rabi_frequencies: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "level_energies", tuple(float(x) for x in self.level_energies))
        object.__setattr__(self, "laser_frequencies", tuple(float(x) for x in self.laser_frequencies))
        object.__setattr__(self, "rabi_frequencies", tuple(float(x) for x in self.rabi_frequencies))
        d = len(self.level_energies)
        if d < 2:
            raise ValueError("a ladder needs at least two levels")
        if len(self.laser_frequencies) != d - 1 or len(self.rabi_frequencies) != d - 1:
            raise ValueError("need exactly d - 1 laser and Rabi frequencies")
        if any(w <= 0 for w in self.laser_frequencies):
            raise ValueError("laser frequencies must be positive")
        if any(r <= 0 for r in self.rabi_frequencies):
            raise ValueError("Rabi frequencies must be positive")

    @property
    def dim(self) -> int:
        return len(self.level_energies)


def detunings_from_lab(ladder: LevelLadder) -> tuple[list[int], list[float]]:
    """Photon signs ``q_i`` and detunings ``q_i (w_{i+1} - w_i) - wL_i``."""
    q, det = [], []
    w = ladder.level_energies
    for i, wl in enumerate(ladder.laser_frequencies):
        gap = w[i + 1] - w[i]
        if gap == 0:
            raise DegenerateAdjacentLevels(f"levels {i} and {i + 1} are degenerate")
        qi = 1 if gap > 0 else -1
        q.append(qi)
        det.append(qi * gap - wl)
    return q, det


def cascade_matrix(
    signed_detunings: Sequence[float], rabi: Sequence[float]
) -> ComplexMatrix:
    """Tridiagonal interaction-picture matrix from ``q_i Delta_i`` and ``Omega_i``."""
    if len(signed_detunings) != len(rabi):
        raise ValueError("need one detuning per Rabi frequency")
    d = len(rabi) + 1
    h = np.zeros((d, d), dtype=np.complex128)
    h[np.arange(1, d), np.arange(1, d)] = np.cumsum(signed_detunings)
    half = np.asarray(rabi, dtype=float) / 2
    h[np.arange(d - 1), np.arange(1, d)] = half
    h[np.arange(1, d), np.arange(d - 1)] = half
    return h


def build_cascade(ladder: LevelLadder) -> ComplexMatrix:
    q, det = detunings_from_lab(ladder)
    return cascade_matrix([qi * di for qi, di in zip(q, det)], ladder.rabi_frequencies)


def shift_picture(h, shift: float) -> ComplexMatrix:
    """Picture change ``H_0 -> H_0 - shift``, i.e. ``h -> h + shift * 1``."""
    m = as_matrix(h, "h")
    if m.shape[0] != m.shape[1]:
        raise ValueError("h must be square")
    return m + shift * np.eye(m.shape[0])


@dataclass(frozen=True)
class PartitionPlan:
    """Relevant indices plus the irrelevant indices grouped into elimination stages.

    A single stage means one-shot elimination; several stages are peeled
    off in the listed order.
    """

    relevant: tuple[int, ...]
    stages: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "relevant", tuple(int(i) for i in self.relevant))
        object.__setattr__(self, "stages", tuple(tuple(int(i) for i in s) for s in self.stages))

    @property
    def irrelevant(self) -> tuple[int, ...]:
        return tuple(i for s in self.stages for i in s)

    @property
    def order(self) -> tuple[int, ...]:
        """Basis permutation applied by :func:`partition`."""
        return self.relevant + self.irrelevant

    def validate(self, dim: int) -> None:
        if not self.relevant:
            raise IndexError("plan has no relevant states")
        if not self.stages or any(len(s) == 0 for s in self.stages):
            raise IndexError("plan needs at least one non-empty elimination stage")
        idx = self.order
        if any(i < 0 or i >= dim for i in idx):
            raise IndexError(f"plan index out of range for dimension {dim}")
        if len(set(idx)) != len(idx):
            raise IndexError("plan index sets overlap")
        if len(idx) != dim:
            raise IndexError("plan does not cover every basis state")


@dataclass(frozen=True)
class BlockHamiltonian:
    """Relevant block ``omega``, coupling ``Omega`` and irrelevant block ``delta``.

    ``permutation`` lists, for relevant then irrelevant states, the index
    in the basis the block was cut from.
    """

    omega: ComplexMatrix
    coupling: ComplexMatrix
    delta: ComplexMatrix
    relevant_labels: tuple[str, ...] = ()
    irrelevant_labels: tuple[str, ...] = ()
    permutation: tuple[int, ...] = ()
    delta_inv: ComplexMatrix = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        omega = symmetrize(self.omega)
        delta = symmetrize(self.delta)
        coupling = as_matrix(self.coupling, "coupling")
        m, n = omega.shape[0], delta.shape[0]
        if m < 1 or n < 1:
            raise ValueError("both sectors must hold at least one state")
        if coupling.shape != (m, n):
            raise ValueError(f"coupling has shape {coupling.shape}, expected {(m, n)}")
        rl = tuple(self.relevant_labels) or tuple(f"r{i}" for i in range(m))
        il = tuple(self.irrelevant_labels) or tuple(f"i{i}" for i in range(n))
        if len(rl) != m or len(il) != n:
            raise ValueError("label count does not match block sizes")
        if set(rl) & set(il):
            raise ValueError("relevant and irrelevant labels overlap")
        perm = tuple(self.permutation) or tuple(range(m + n))
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "coupling", coupling)
        object.__setattr__(self, "relevant_labels", rl)
        object.__setattr__(self, "irrelevant_labels", il)
        object.__setattr__(self, "permutation", perm)
        object.__setattr__(self, "delta_inv", herm_inverse(delta))

    @property
    def m(self) -> int:
        return self.omega.shape[0]

    @property
    def n(self) -> int:
        return self.delta.shape[0]

    @property
    def labels(self) -> tuple[str, ...]:
        return self.relevant_labels + self.irrelevant_labels

    def assemble(self) -> ComplexMatrix:
        half = self.coupling / 2
        return np.block([[self.omega, half], [dagger(half), self.delta]])

    def shifted(self, shift: float) -> BlockHamiltonian:
        """Same block in the picture shifted by ``shift``."""
        if shift == 0:
            return self
        return BlockHamiltonian(
            self.omega + shift * np.eye(self.m),
            self.coupling,
            self.delta + shift * np.eye(self.n),
            self.relevant_labels,
            self.irrelevant_labels,
            self.permutation,
        )


def partition(h, plan: PartitionPlan, labels: Sequence[str] | None = None) -> BlockHamiltonian:
    m = symmetrize(h)
    d = m.shape[0]
    plan.validate(d)
    labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(d))
    if len(labels) != d:
        raise ValueError("need one label per basis state")
    rel, irr = list(plan.relevant), list(plan.irrelevant)
    return BlockHamiltonian(
        omega=m[np.ix_(rel, rel)],
        coupling=2 * m[np.ix_(rel, irr)],
        delta=m[np.ix_(irr, irr)],
        relevant_labels=tuple(labels[i] for i in rel),
        irrelevant_labels=tuple(labels[i] for i in irr),
        permutation=plan.order,
    )


# --- scenario presets -------------------------------------------------------


@dataclass(frozen=True)
class Scenario:
    """A preset Hamiltonian with its basis labels and named partition plans.

    The first entry of ``plans`` is the default split.
    """

    name: str
    hamiltonian: ComplexMatrix
    labels: tuple[str, ...]
    plans: dict[str, PartitionPlan]

    @property
    def plan(self) -> PartitionPlan:
        return next(iter(self.plans.values()))


def light_shift_detuning(rabi0: float, rabi1: float, detuning: float) -> float:
    """Two-photon detuning that equalizes the adiabatic-elimination light shifts."""
    if detuning == 0:
        raise SingularBlock("light shifts are undefined at zero detuning")
    return (rabi1**2 - rabi0**2) / (4 * detuning)


def scenario_lambda(rabi0: float, rabi1: float, detuning: float, two_photon_detuning: float) -> Scenario:
    """Raman Lambda system in the basis (g, t, e), picture centred on the g-t pair."""
    if detuning == 0:
        raise ValueError("intermediate-state detuning must be nonzero")
    d = two_photon_detuning
    h = np.array(
        [
            [-d / 2, 0, rabi0 / 2],
            [0, d / 2, rabi1 / 2],
            [rabi0 / 2, rabi1 / 2, detuning],
        ],
        dtype=np.complex128,
    )
    return Scenario("lambda", h, ("g", "t", "e"), {"2+1": PartitionPlan((0, 1), ((2,),))})


def scenario_four_level(
    rabi0: float, rabi1: float, rabi2: float, detuning0: float, detuning1: float, detuning2: float
) -> Scenario:
    """Three-photon cascade, reordered to the basis (0, 3, 1, 2)."""
    full = cascade_matrix([detuning0, detuning1, detuning2], [rabi0, rabi1, rabi2])
    order = [0, 3, 1, 2]
    h = full[np.ix_(order, order)]
    plan = PartitionPlan((0, 1), ((2, 3),))
    partition(h, plan)  # surfaces SingularBlock early
    return Scenario("four-level", h, ("0", "3", "1", "2"), {"2+2": plan})


def _rydberg_matrix(rabi0, rabi1, detuning, d, blockade) -> ComplexMatrix:
    # basis: gg, gr, ge, re, ee, rr
    s2 = sqrt(2)
    h = np.diag([0, d, detuning + d / 2, detuning + 1.5 * d, 2 * detuning + d, blockade + 2 * d]).astype(
        np.complex128
    )
    for i, j, v in [
        (0, 2, rabi0 / s2),
        (1, 2, rabi1 / 2),
        (1, 3, rabi0 / 2),
        (2, 4, rabi0 / s2),
        (3, 4, rabi1 / s2),
        (3, 5, rabi1 / s2),
    ]:
        h[i, j] = h[j, i] = v
    return h


def scenario_rydberg_pair(
    rabi0: float, rabi1: float, detuning: float, two_photon_detuning: float, blockade: float
) -> Scenario:
    """Two cascade atoms with a blockade shift on the doubly excited Rydberg state."""
    h = _rydberg_matrix(rabi0, rabi1, detuning, two_photon_detuning, blockade)
    plans = {
        "2+4": PartitionPlan((0, 1), ((2, 3, 4, 5),)),
        "2+2+2": PartitionPlan((0, 1), ((4, 5), (2, 3))),
    }
    for plan in plans.values():
        partition(h, plan)
    return Scenario("rydberg", h, ("gg", "gr", "ge", "re", "ee", "rr"), plans)


def scenario_two_atom(rabi0: float, rabi1: float, detuning: float, two_photon_detuning: float) -> Scenario:
    """Two three-level atoms without blockade, basis (gg, gt, tt, ge, te, ee)."""
    ryd = _rydberg_matrix(rabi0, rabi1, detuning, two_photon_detuning, 0.0)
    # rydberg order gg, gr, ge, re, ee, rr with r -> t
    order = [0, 1, 5, 2, 3, 4]
    h = ryd[np.ix_(order, order)]
    plan = PartitionPlan((0, 1, 2), ((3, 4, 5),))
    partition(h, plan)
    return Scenario("two-atom", h, ("gg", "gt", "tt", "ge", "te", "ee"), {"3+3": plan})


@dataclass(frozen=True)
class PresetInfo:
    build: Callable[..., Scenario]
    parameters: tuple[str, ...]
    defaults: dict[str, float]
    description: str


def _with_light_shift(build):
    def wrapped(**kw):
        if "two_photon_detuning" not in kw:
            kw["two_photon_detuning"] = light_shift_detuning(kw["rabi0"], kw["rabi1"], kw["detuning"])
        return build(**kw)

    return wrapped


PRESETS: dict[str, PresetInfo] = {
    "lambda": PresetInfo(
        _with_light_shift(scenario_lambda),
        ("rabi0", "rabi1", "detuning", "two_photon_detuning"),
        {"rabi0": 0.4, "rabi1": 0.3, "detuning": 1.0},
        "three-level Raman transition (g, t | e)",
    ),
    "four-level": PresetInfo(
        scenario_four_level,
        ("rabi0", "rabi1", "rabi2", "detuning0", "detuning1", "detuning2"),
        {"rabi0": 0.4, "rabi1": 0.3, "rabi2": 0.4, "detuning0": 1.0, "detuning1": 0.0, "detuning2": -1.0},
        "three-photon transition in a four-level cascade (0, 3 | 1, 2)",
    ),
    "rydberg": PresetInfo(
        _with_light_shift(scenario_rydberg_pair),
        ("rabi0", "rabi1", "detuning", "two_photon_detuning", "blockade"),
        {"rabi0": 0.3, "rabi1": 0.2, "detuning": 1.0, "blockade": 5.0},
        "two cascade atoms with Rydberg blockade (gg, gr | ge, re, ee, rr)",
    ),
    "two-atom": PresetInfo(
        _with_light_shift(scenario_two_atom),
        ("rabi0", "rabi1", "detuning", "two_photon_detuning"),
        {"rabi0": 0.3, "rabi1": 0.2, "detuning": 1.0},
        "two three-level atoms without blockade (gg, gt, tt | ge, te, ee)",
    ),
}
