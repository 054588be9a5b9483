"""Choice of the scalar interaction-picture shift.

Adding ``w * 1`` to the interaction Hamiltonian leaves exact dynamics
untouched (global phase) but changes every approximate effective
Hamiltonian.  Three rules are offered: make the relevant block traceless
(condition ``a``), or minimize the operator norm (``b``) or trace norm
(``c``) of the shifted effective Hamiltonian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Iterable

import numpy as np

from .elimination import EffectiveModel, Order, effective
from .errors import NotPositiveDefinite, SearchFailed, SingularBlock
from .model import BlockHamiltonian
from .numkernel import herm_eig, op_norm, spectral_norms

SCAN_POINTS = 2001
REFINE_RTOL = 1e-10
POLE_RTOL = 1e-8
PLATEAU_RTOL = 1e-12
INVPHI = (math.sqrt(5) - 1) / 2


class ShiftRule(str, Enum):
    TRACE_ZERO = "a"
    MIN_OP_NORM = "b"
    MIN_TRACE_NORM = "c"
    FIXED = "fixed"


@dataclass(frozen=True)
class PictureCondition:
    kind: ShiftRule
    order: Order = Order.M0
    value: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ShiftRule(self.kind))
        object.__setattr__(self, "order", Order.parse(self.order))
        if self.kind is ShiftRule.FIXED:
            if self.value is None or not math.isfinite(self.value):
                raise ValueError("a fixed picture shift needs a finite value")

    @classmethod
    def parse(cls, text: str, order: Order | str = Order.M0) -> PictureCondition:
        """Parse ``a``, ``b``, ``c`` or ``fixed:<value>``."""
        text = str(text).strip()
        if text.lower().startswith("fixed:"):
            try:
                value = float(text.split(":", 1)[1])
            except ValueError:
                raise ValueError(f"bad fixed shift {text!r}") from None
            return cls(ShiftRule.FIXED, order, value)
        try:
            return cls(ShiftRule(text.lower()), order)
        except ValueError:
            raise ValueError(f"unknown picture condition {text!r} (use a, b, c or fixed:<value>)") from None


def shifted_effective(block: BlockHamiltonian, shift: float, order: Order | str = Order.M0) -> EffectiveModel:
    model = effective(block.shifted(shift), order)
    return replace(model, shift=float(shift))


def shift_condition_a(block: BlockHamiltonian) -> float:
    return -float(np.trace(block.omega).real) / block.m + 0.0


def norm_objective(model: EffectiveModel, rule: ShiftRule) -> float:
    op, tr = spectral_norms(model.hermitian_form())
    return op if rule is ShiftRule.MIN_OP_NORM else tr


class ShiftFamily:
    """Spectra of the shifted effective Hamiltonians of one block.

    Diagonalizes ``delta`` once, so each shift costs one small Hermitian
    eigensolve instead of a full rebuild of the block.
    """

    def __init__(self, block: BlockHamiltonian, order: Order | str = Order.M0):
        self.order = Order.parse(order)
        eig = herm_eig(block.delta)
        self.lam = eig.eigenvalues
        self.g = block.coupling @ eig.eigenvectors
        self.omega = block.omega
        self.eye = np.eye(block.m)
        self.scale = float(np.max(np.abs(self.lam)))

    def spectrum(self, shift: float) -> np.ndarray:
        d = self.lam + shift
        if np.min(np.abs(d)) <= 1e-10 * max(self.scale, abs(shift)):
            raise SingularBlock("picture shift hits an eigenvalue of -delta")
        g = self.g
        h0 = self.omega + shift * self.eye - (g / (4 * d)) @ g.conj().T
        h0 = (h0 + h0.conj().T) / 2
        if self.order is Order.M0:
            return np.linalg.eigvalsh(h0)
        metric = self.eye + (g / (4 * d * d)) @ g.conj().T
        low = np.linalg.cholesky((metric + metric.conj().T) / 2)
        x = np.linalg.solve(low, h0)
        x = np.linalg.solve(low, x.conj().T)
        return np.linalg.eigvalsh((x + x.conj().T) / 2)

    def norm(self, shift: float, rule: ShiftRule) -> float:
        lam = np.abs(self.spectrum(shift))
        return float(lam.max() if rule is ShiftRule.MIN_OP_NORM else lam.sum())


def search_bound(block: BlockHamiltonian) -> float:
    return 2.0 * (op_norm(block.omega) + op_norm(block.delta) + op_norm(block.coupling))


def _golden(f: Callable[[float], float], a: float, b: float, width: float) -> tuple[float, float]:
    best_x, best_f = a, f(a)
    fb = f(b)
    if fb < best_f:
        best_x, best_f = b, fb
    c, d = b - INVPHI * (b - a), a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > width:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = f(d)
        for x, fx in ((c, fc), (d, fd)):
            if fx < best_f:
                best_x, best_f = x, fx
    mid = 0.5 * (a + b)
    fm = f(mid)
    if fm <= best_f:
        best_x, best_f = mid, fm
    return best_x, best_f


def _edge(inside: float, outside: float, is_in: Callable[[float], bool], width: float) -> float:
    while abs(outside - inside) > width:
        mid = 0.5 * (inside + outside)
        if is_in(mid):
            inside = mid
        else:
            outside = mid
    return inside


def minimize_shift(
    objective: Callable[[float], float],
    bound: float,
    poles: Iterable[float] = (),
    pole_tol: float = 0.0,
) -> float:
    """Global minimizer of a piecewise-smooth scalar objective on ``[-bound, bound]``.

    Coarse uniform scan, then golden-section refinement inside the best
    grid bracket.  ``poles`` are shifts where the objective is undefined;
    samples within ``pole_tol`` of a pole are skipped and no bracket
    crosses one.  Flat minima (plateaus) resolve to their midpoint; among
    distinct minima of equal value the smallest ``|shift|`` wins.
    """
    if not bound > 0:
        bound = 1.0
    poles = sorted(float(p) for p in poles)

    def f(x: float) -> float:
        if any(abs(x - p) <= pole_tol for p in poles):
            return math.inf
        try:
            value = objective(x)
        except (SingularBlock, NotPositiveDefinite):
            return math.inf
        return value if math.isfinite(value) else math.inf

    xs = np.linspace(-bound, bound, SCAN_POINTS)
    fs = np.array([f(x) for x in xs])
    valid = np.isfinite(fs)
    if not valid.any():
        raise SearchFailed("every scan sample hit a singular picture shift")
    fmin = float(fs[valid].min())
    tol = PLATEAU_RTOL * max(1.0, abs(fmin))
    near = valid & (fs <= fmin + tol)
    width = REFINE_RTOL * bound

    def clip(lo: float, hi: float, centre: float) -> tuple[float, float]:
        for p in poles:
            if lo < p < centre:
                lo = p + pole_tol
            elif centre < p < hi:
                hi = p - pole_tol
        return lo, hi

    candidates = []
    i = 0
    while i < SCAN_POINTS:
        if not near[i]:
            i += 1
            continue
        j = i
        while j + 1 < SCAN_POINTS and near[j + 1]:
            j += 1
        if i == j:
            lo = xs[i - 1] if i > 0 and valid[i - 1] else xs[i]
            hi = xs[i + 1] if i + 1 < SCAN_POINTS and valid[i + 1] else xs[i]
            lo, hi = clip(lo, hi, xs[i])
            candidates.append(_golden(f, lo, hi, width) if hi > lo else (xs[i], fs[i]))
        else:
            level = float(fs[i : j + 1].max())

            def inside(x: float) -> bool:
                return f(x) <= level + tol

            left = _edge(xs[i], xs[i - 1], inside, width) if i > 0 and valid[i - 1] else xs[i]
            right = _edge(xs[j], xs[j + 1], inside, width) if j + 1 < SCAN_POINTS and valid[j + 1] else xs[j]
            mid = 0.5 * (left + right)
            candidates.append((mid, f(mid)))
        i = j + 1

    best = min(fx for _, fx in candidates)
    ties = [x for x, fx in candidates if fx <= best + tol]
    return float(min(ties, key=abs))


def shift_minimize(
    block: BlockHamiltonian, rule: ShiftRule | str, order: Order | str = Order.M0
) -> float:
    rule = ShiftRule(rule)
    if rule not in (ShiftRule.MIN_OP_NORM, ShiftRule.MIN_TRACE_NORM):
        raise ValueError("shift_minimize handles the norm conditions b and c only")
    family = ShiftFamily(block, order)
    return minimize_shift(
        lambda x: family.norm(x, rule), search_bound(block), poles=-family.lam, pole_tol=POLE_RTOL * family.scale
    )


def select_shift(block: BlockHamiltonian, condition: PictureCondition) -> float:
    kind = condition.kind
    if kind is ShiftRule.FIXED:
        return float(condition.value)
    if kind is ShiftRule.TRACE_ZERO:
        return shift_condition_a(block)
    return shift_minimize(block, kind, condition.order)
