"""Effective Hamiltonians of the Markov hierarchy.

Zeroth order is standard adiabatic elimination::

    h0 = omega - Omega (4 delta)^-1 Omega^dag

First order keeps the linear memory term, which introduces the metric::

    M = 1 + Omega (4 delta^2)^-1 Omega^dag

and comes in two equivalent forms: ``M^-1 h0`` acting on the plain
amplitudes (Hermitian for the inner product weighted by ``M``), and
``M^-1/2 h0 M^-1/2`` acting on the dressed amplitudes ``M^+1/2 psi``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import SingularBlock, UnsupportedOrder
from .model import BlockHamiltonian, PartitionPlan, partition, shift_picture
from .numkernel import ComplexMatrix, dagger, herm_sqrt_pair, symmetrize


class Order(str, Enum):
    M0 = "M0"
    M1 = "M1"
    M1D = "M1D"

    @classmethod
    def parse(cls, value: "Order | str") -> "Order":
        if isinstance(value, Order):
            return value
        key = str(value).strip().upper()
        aliases = {"MARKOV0": "M0", "MARKOV1": "M1", "MARKOV1D": "M1D", "0": "M0", "1": "M1"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            if key in ("M2", "MARKOV2", "2"):
                raise UnsupportedOrder(
                    "the second-order Markov approximation is not implemented; "
                    "no closed-form effective Hamiltonian is available for it"
                ) from None
            raise UnsupportedOrder(f"unknown approximation order {value!r}") from None


@dataclass(frozen=True)
class EffectiveModel:
    """Effective Hamiltonian on the relevant sector plus reconstruction data.

    ``inner`` holds the models of earlier stages for a multi-step
    elimination (in elimination order); it is empty for one-shot models.
    """

    order: Order
    h_eff: ComplexMatrix
    metric: ComplexMatrix
    dressing: ComplexMatrix
    source: BlockHamiltonian
    shift: float = 0.0
    inner: tuple["EffectiveModel", ...] = ()

    @property
    def labels(self) -> tuple[str, ...]:
        return self.source.relevant_labels

    @property
    def stage_orders(self) -> tuple[Order, ...]:
        return tuple(m.order for m in self.inner) + (self.order,)

    def hermitian_form(self) -> ComplexMatrix:
        """Hermitian generator with the same spectrum as ``h_eff``."""
        if self.order is Order.M1:
            inv_sqrt, _ = herm_sqrt_pair(self.metric)
            return symmetrize(inv_sqrt @ (self.metric @ self.h_eff) @ inv_sqrt)
        return self.h_eff


def _zeroth(block: BlockHamiltonian) -> ComplexMatrix:
    c = block.coupling
    return symmetrize(block.omega - c @ block.delta_inv @ dagger(c) / 4)


def metric(block: BlockHamiltonian) -> ComplexMatrix:
    a = block.coupling @ block.delta_inv
    return symmetrize(np.eye(block.m) + a @ dagger(a) / 4)


def heff0(block: BlockHamiltonian) -> EffectiveModel:
    eye = np.eye(block.m, dtype=np.complex128)
    return EffectiveModel(Order.M0, _zeroth(block), eye, eye, block)


def heff1(block: BlockHamiltonian) -> EffectiveModel:
    h0, m = _zeroth(block), metric(block)
    herm_sqrt_pair(m)  # positive-definiteness check
    eye = np.eye(block.m, dtype=np.complex128)
    return EffectiveModel(Order.M1, np.linalg.solve(m, h0), m, eye, block)


def heff1_dressed(block: BlockHamiltonian) -> EffectiveModel:
    h0, m = _zeroth(block), metric(block)
    inv_sqrt, sqrt_m = herm_sqrt_pair(m)
    return EffectiveModel(Order.M1D, symmetrize(inv_sqrt @ h0 @ inv_sqrt), m, sqrt_m, block)


_BUILDERS = {Order.M0: heff0, Order.M1: heff1, Order.M1D: heff1_dressed}


def effective(block: BlockHamiltonian, order: Order | str) -> EffectiveModel:
    return _BUILDERS[Order.parse(order)](block)


def estimate_irrelevant(block: BlockHamiltonian, psi) -> np.ndarray:
    """Irrelevant amplitudes ``-(2 delta)^-1 Omega^dag psi``.

    ``psi`` may be a single column of length ``m`` or an array of shape
    ``(..., m)`` holding one amplitude vector per row.
    """
    psi = np.asarray(psi, dtype=np.complex128)
    if psi.shape[-1] != block.m:
        raise ValueError(f"expected {block.m} relevant amplitudes, got {psi.shape[-1]}")
    op = -block.delta_inv @ dagger(block.coupling) / 2
    return psi @ op.T


def compose_elimination(
    h,
    plan: PartitionPlan,
    orders: Sequence[Order | str],
    labels: Sequence[str] | None = None,
    shift: float = 0.0,
) -> EffectiveModel:
    """Eliminate ``plan.stages`` one after another.

    Every stage treats all states not yet eliminated as relevant.  Inner
    stages must produce a Hermitian generator, so they are limited to
    ``M0`` and ``M1D``; the last stage may use any order.  ``shift`` is a
    picture shift applied to the full matrix before the first stage.
    """
    full = shift_picture(symmetrize(h), shift)
    d = full.shape[0]
    plan.validate(d)
    orders = [Order.parse(o) for o in orders]
    if len(orders) != len(plan.stages):
        raise ValueError(f"need {len(plan.stages)} stage orders, got {len(orders)}")
    labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(d))

    current, index, names = full, list(range(d)), labels
    models: list[EffectiveModel] = []
    for k, (stage, order) in enumerate(zip(plan.stages, orders)):
        last = k == len(plan.stages) - 1
        if not last and order is Order.M1:
            raise UnsupportedOrder(f"stage {k}: inner stages need a Hermitian generator (M0 or M1D)")
        keep = list(plan.relevant) + [i for s in plan.stages[k + 1 :] for i in s]
        pos = {orig: p for p, orig in enumerate(index)}
        sub = PartitionPlan(tuple(pos[i] for i in keep), (tuple(pos[i] for i in stage),))
        try:
            block = partition(current, sub, names)
            block = dataclasses.replace(block, permutation=tuple(index[p] for p in block.permutation))
            model = effective(block, order)
        except SingularBlock as exc:
            raise SingularBlock(str(exc), stage=k) from exc
        models.append(model)
        current, index, names = model.h_eff, keep, block.relevant_labels
    return dataclasses.replace(models[-1], shift=shift, inner=tuple(models[:-1]))
