"""Check the Lambda-system Rabi frequencies against their closed forms and series.

With ``x = (W0^2 + W1^2) / 4 D^2`` and ``alpha = (W0^2 - W1^2) / (W0^2 + W1^2)``
the Lambda system at ``D = 1`` is parametrized by ``W0^2 = 2x(1 + alpha)``,
``W1^2 = 2x(1 - alpha)``.  For ``alpha = 0`` the two-photon detuning is zero;
otherwise it is set to cancel the adiabatic-elimination light shifts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dynamics import rabi_effective, rabi_exact
from .elimination import Order
from .model import light_shift_detuning, partition, scenario_lambda
from .picture import ShiftRule, shift_condition_a, shift_minimize, shifted_effective

DEFAULT_X = (0.01, 0.04, 0.08, 0.16, 0.25)
DEFAULT_ALPHA = (0.28, 0.5)
CLOSED_TOL = 1e-10
MINIMIZED_TOL = 1e-6


@dataclass(frozen=True)
class Table1Row:
    case: str
    x: float
    alpha: float
    value: float
    expected: float
    tolerance: float

    @property
    def residual(self) -> float:
        return self.value - self.expected

    @property
    def passed(self) -> bool:
        return abs(self.residual) <= self.tolerance


def lambda_block(x: float, alpha: float = 0.0):
    rabi0 = math.sqrt(2 * x * (1 + alpha))
    rabi1 = math.sqrt(2 * x * (1 - alpha))
    detuning = 0.0 if alpha == 0 else light_shift_detuning(rabi0, rabi1, 1.0)
    sc = scenario_lambda(rabi0, rabi1, 1.0, detuning)
    return sc.hamiltonian, partition(sc.hamiltonian, sc.plan, sc.labels)


def table1_rabi(x: float, alpha: float, order: Order | str, rule: ShiftRule | str) -> float:
    """Effective Rabi frequency (units of the detuning) for one table cell."""
    _, block = lambda_block(x, alpha)
    rule = ShiftRule(rule)
    shift = shift_condition_a(block) if rule is ShiftRule.TRACE_ZERO else shift_minimize(block, rule, order)
    return rabi_effective(shifted_effective(block, shift, order))


def _zero_detuning_rows(x: float) -> list[Table1Row]:
    h, _ = lambda_block(x)
    exact_closed = (math.sqrt(1 + 4 * x) - 1) / 2
    exact = rabi_exact(h)
    series_b1 = x - x**2 + 1.75 * x**3 - 3.75 * x**4
    return [
        Table1Row("exact", x, 0.0, exact, exact_closed, CLOSED_TOL),
        Table1Row("markov0/a", x, 0.0, table1_rabi(x, 0, "M0", "a"), x, CLOSED_TOL),
        Table1Row("markov0/b", x, 0.0, table1_rabi(x, 0, "M0", "b"), math.sqrt(1 + 2 * x) - 1, MINIMIZED_TOL),
        Table1Row("markov0/c", x, 0.0, table1_rabi(x, 0, "M0", "c"), exact_closed, MINIMIZED_TOL),
        Table1Row("markov0/c=exact", x, 0.0, table1_rabi(x, 0, "M0", "c"), exact, MINIMIZED_TOL),
        Table1Row("markov1/a", x, 0.0, table1_rabi(x, 0, "M1", "a"), x / (1 + x), CLOSED_TOL),
        # only the series to fourth order is known; remainder is O(x^5)
        Table1Row("markov1/b series", x, 0.0, table1_rabi(x, 0, "M1", "b"), series_b1, 10 * x**5),
        Table1Row("markov1/c", x, 0.0, table1_rabi(x, 0, "M1", "c"), x / (1 + x), MINIMIZED_TOL),
    ]


def _light_shift_rows(x: float, alpha: float) -> list[Table1Row]:
    h, _ = lambda_block(x, alpha)
    root = math.sqrt(1 - alpha**2)
    slack = 3 * x + alpha**2

    def second_order(value: float) -> float:
        return (value / root - x) / x**2

    return [
        Table1Row("markov0/a", x, alpha, table1_rabi(x, alpha, "M0", "a"), root * x, CLOSED_TOL),
        Table1Row("exact leading", x, alpha, rabi_exact(h), root * x, 1.5 * root * x**2),
        Table1Row("exact x^2 coeff", x, alpha, second_order(rabi_exact(h)), -1.0, slack),
        Table1Row("markov0/b x^2 coeff", x, alpha, second_order(table1_rabi(x, alpha, "M0", "b")), -0.5, slack),
        Table1Row("markov0/c x^2 coeff", x, alpha, second_order(table1_rabi(x, alpha, "M0", "c")), -1.0, slack),
        Table1Row("markov1/a x^2 coeff", x, alpha, second_order(table1_rabi(x, alpha, "M1", "a")), -1.0, slack),
    ]


def verify_table1(x_grid=DEFAULT_X, alpha_grid=DEFAULT_ALPHA) -> list[Table1Row]:
    rows: list[Table1Row] = []
    for x in x_grid:
        rows.extend(_zero_detuning_rows(x))
    for alpha in alpha_grid:
        if alpha == 0:
            continue
        for x in x_grid:
            rows.extend(_light_shift_rows(x, alpha))
    return rows


def format_report(rows: list[Table1Row]) -> str:
    head = f"{'case':<22} {'x':>7} {'alpha':>6} {'value':>14} {'expected':>14} {'residual':>10}  result"
    lines = [head, "-" * len(head)]
    for r in rows:
        lines.append(
            f"{r.case:<22} {r.x:>7.4g} {r.alpha:>6.3g} {r.value:>14.9g} {r.expected:>14.9g} "
            f"{r.residual:>10.2e}  {'PASS' if r.passed else 'FAIL'}"
        )
    failed = sum(not r.passed for r in rows)
    lines.append(f"{len(rows) - failed}/{len(rows)} rows passed")
    return "\n".join(lines)
