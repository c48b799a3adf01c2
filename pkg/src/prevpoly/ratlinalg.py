"""Exact rational linear algebra and linear programming.

Gaussian elimination, rank, unique-solution solving and a dense two-phase
simplex, all over exact rationals.  These primitives back every other
module; none of them ever touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from ._rat import ONE, ZERO, Rat, rat
from .errors import DependentColumns, DimensionMismatch

__all__ = [
    "RatMatrix",
    "rank",
    "is_independent",
    "solve_unique",
    "LPResult",
    "lp_optimize",
    "OPTIMAL",
    "UNBOUNDED",
    "INFEASIBLE",
]


@dataclass(frozen=True)
class RatMatrix:
    """Immutable rectangular matrix of exact rationals."""

    entries: tuple[tuple[Rat, ...], ...]

    def __post_init__(self) -> None:
        widths = {len(row) for row in self.entries}
        if len(widths) > 1:
            raise DimensionMismatch("matrix rows have unequal lengths")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "RatMatrix":
        return cls(tuple(tuple(rat(v) for v in row) for row in rows))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def row(self, i: int) -> tuple[Rat, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[Rat, ...]:
        return tuple(row[j] for row in self.entries)

    def transpose(self) -> "RatMatrix":
        return RatMatrix(tuple(zip(*self.entries))) if self.entries else self


def _as_rows(m) -> list[list[Rat]]:
    entries = m.entries if isinstance(m, RatMatrix) else m
    # Coerce up front: plain ints would fall into float true-division later.
    return [[rat(v) for v in row] for row in entries]


def _pick_pivot(rows: list[list[Rat]], start: int, col: int) -> int | None:
    """Pivot row with the largest absolute numerator in `col` (growth heuristic)."""
    best = None
    best_key = None
    for i in range(start, len(rows)):
        v = rows[i][col]
        if v:
            key = abs(int(v.numerator))
            if best is None or key > best_key:
                best, best_key = i, key
    return best


def rank(m) -> int:
    """Row-space dimension, by exact pivoted Gaussian elimination."""
    rows = _as_rows(m)
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for col in range(ncols):
        piv = _pick_pivot(rows, r, col)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        pval = prow[col]
        for i in range(r + 1, len(rows)):
            f = rows[i][col]
            if f:
                scale = f / pval
                rows[i] = [a - scale * b for a, b in zip(rows[i], prow)]
        r += 1
        if r == len(rows):
            break
    return r


def is_independent(vectors: Sequence[Sequence[Rat]]) -> bool:
    """True iff the vectors are linearly independent (the empty family is)."""
    vecs = list(vectors)
    if not vecs:
        return True
    return rank(vecs) == len(vecs)


def solve_unique(
    columns: Sequence[Sequence[Rat]], target: Sequence[Rat]
) -> tuple[Rat, ...] | None:
    """Solve ``sum_j lam_j * columns[j] == target`` for the unique ``lam``.

    The columns must be linearly independent (violations raise
    :class:`DependentColumns`); returns None when the target lies outside
    their span.
    """
    ncols = len(columns)
    if ncols == 0:
        return () if not any(target) else None
    nrows = len(columns[0])
    if any(len(c) != nrows for c in columns) or len(target) != nrows:
        raise DimensionMismatch("column/target lengths differ")
    # Augmented system [columns | target], eliminated by rows.
    rows = [
        [rat(columns[j][i]) for j in range(ncols)] + [rat(target[i])]
        for i in range(nrows)
    ]
    pivot_rows: list[int] = []
    r = 0
    for col in range(ncols):
        piv = _pick_pivot(rows, r, col)
        if piv is None:
            raise DependentColumns("columns are linearly dependent")
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        pval = prow[col]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                scale = rows[i][col] / pval
                rows[i] = [a - scale * b for a, b in zip(rows[i], prow)]
        pivot_rows.append(r)
        r += 1
    # Any leftover row with a nonzero rhs marks an inconsistent system.
    for i in range(r, nrows):
        if rows[i][-1]:
            return None
    return tuple(rows[pivot_rows[c]][-1] / rows[pivot_rows[c]][c] for c in range(ncols))


def rref(rows_in: Sequence[Sequence[Rat]]) -> tuple[list[list[Rat]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot column indices)."""
    rows = [[rat(v) for v in r] for r in rows_in]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = _pick_pivot(rows, r, col)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pval = rows[r][col]
        if pval != 1:
            rows[r] = [v / pval for v in rows[r]]
        prow = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def nullspace_basis(rows: Sequence[Sequence[Rat]], ncols: int) -> list[tuple[Rat, ...]]:
    """Basis of {x : rows @ x = 0}, one vector per free column."""
    red, pivots = rref(rows)
    pivot_set = set(pivots)
    free = [j for j in range(ncols) if j not in pivot_set]
    basis = []
    for j in free:
        vec = [ZERO] * ncols
        vec[j] = ONE
        for rrow, pcol in zip(red, pivots):
            vec[pcol] = -rrow[j]
        basis.append(tuple(vec))
    return basis


def solve_affine(
    rows: Sequence[Sequence[Rat]], rhs: Sequence[Rat]
) -> tuple[Rat, ...] | None:
    """One solution of ``rows @ x = rhs``, or None when inconsistent."""
    if not rows:
        return None
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    x = [ZERO] * ncols
    for rrow, pcol in zip(red, pivots):
        if pcol == ncols:  # pivot in the rhs column: 0 = 1
            return None
        x[pcol] = rrow[-1]
    return tuple(x)


def invert_matrix(rows: Sequence[Sequence[Rat]]) -> list[list[Rat]]:
    """Exact inverse of a square nonsingular matrix."""
    n = len(rows)
    aug = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(rows)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise DependentColumns("matrix is singular")
    return [row[n:] for row in red]


# ---------------------------------------------------------------------------
# Exact linear programming
# ---------------------------------------------------------------------------

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"
ABOVE = "above"  # early exit: a feasible point above the requested threshold


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Rat | None = None
    point: tuple[Rat, ...] | None = None

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL


class _Simplex:
    """Dense tableau simplex, maximizing, over exact rationals.

    Entering column: largest objective improvement among the highest
    reduced costs; after a run of consecutive degenerate pivots the rule
    switches to Bland's, which cannot cycle.  Exact arithmetic makes every
    comparison reliable, so the heuristic only affects speed.
    """

    _HEURISTIC_WIDTH = 12

    def __init__(self, tableau: list[list], cost: list, basis: list[int], enterable: int):
        self.t = tableau
        self.cost = cost  # cost[j] = reduced cost; cost[-1] = -objective
        self.basis = basis
        self.enterable = enterable
        self.bland = False
        self._degenerate_streak = 0
        # Streaks are bounded by the basis combinatorics, not the width.
        self._bland_after = 2 * len(tableau) + 16

    def value(self) -> Rat:
        return -self.cost[-1]

    def _entering(self) -> int | None:
        cost = self.cost
        if self.bland:
            for j in range(self.enterable):
                if cost[j] > 0:
                    return j
            return None
        improving = [j for j in range(self.enterable) if cost[j] > 0]
        if not improving:
            return None
        if len(improving) > self._HEURISTIC_WIDTH:
            improving.sort(key=lambda j: (-cost[j], j))
            improving = improving[: self._HEURISTIC_WIDTH]
        best_j, best_gain = None, None
        for j in improving:
            ratio = self._min_ratio(j)
            if ratio is None:  # unbounded direction: take it immediately
                return j
            gain = cost[j] * ratio
            if best_gain is None or gain > best_gain:
                best_j, best_gain = j, gain
        return best_j

    def _min_ratio(self, col: int) -> Rat | None:
        best = None
        for row in self.t:
            a = row[col]
            if a > 0:
                r = row[-1] / a
                if best is None or r < best:
                    best = r
        return best

    def _leaving(self, col: int) -> int | None:
        best_ratio = None
        best_row = None
        for i, row in enumerate(self.t):
            a = row[col]
            if a > 0:
                r = row[-1] / a
                if best_ratio is None or r < best_ratio:
                    best_ratio, best_row = r, i
                elif r == best_ratio and self.bland and self.basis[i] < self.basis[best_row]:
                    best_row = i
        return best_row

    def _pivot(self, pr: int, pc: int) -> None:
        t = self.t
        prow = t[pr]
        pval = prow[pc]
        if pval != 1:
            inv = ONE / pval
            prow = [v * inv for v in prow]
            t[pr] = prow
        for i in range(len(t)):
            if i != pr:
                f = t[i][pc]
                if f:
                    t[i] = [a - f * b for a, b in zip(t[i], prow)]
        f = self.cost[pc]
        if f:
            self.cost = [a - f * b for a, b in zip(self.cost, prow)]
        self.basis[pr] = pc

    def run(self, stop_above=None) -> str:
        while True:
            if stop_above is not None and self.value() > stop_above:
                return ABOVE
            pc = self._entering()
            if pc is None:
                return OPTIMAL
            pr = self._leaving(pc)
            if pr is None:
                return UNBOUNDED
            degenerate = self.t[pr][-1] == 0
            self._pivot(pr, pc)
            if degenerate:
                self._degenerate_streak += 1
                if self._degenerate_streak > self._bland_after:
                    self.bland = True
            else:
                self._degenerate_streak = 0


def solve_standard(
    ineq: Sequence[tuple[Sequence[Rat], Rat]],
    eq: Sequence[tuple[Sequence[Rat], Rat]],
    objective: Sequence[Rat],
    stop_above=None,
    with_duals: bool = False,
) -> tuple[str, Rat | None, list[Rat] | None, list[Rat] | None]:
    """max objective.x  s.t.  ineq rows <= rhs, eq rows == rhs, x >= 0.

    Dense two-phase simplex; artificial variables are introduced only for
    equality rows and for inequality rows with a negative right-hand side.
    Returns (status, value, x, duals); with ``stop_above`` set, may stop
    early at a feasible x whose objective already exceeds the threshold
    (status ABOVE).  ``with_duals`` asks for the simplex multipliers of the
    input rows (ineq first, then eq), read off the final reduced costs of
    each row's slack or artificial column.
    """
    n = len(objective)
    n_ineq = len(ineq)
    rows: list[list] = []
    rhs: list = []
    needs_art: list[bool] = []
    # Coerce once: raw int rows must not reach the ratio test's division.
    for coeffs, b in ineq:
        rows.append([rat(v) for v in coeffs])
        rhs.append(rat(b))
        needs_art.append(b < 0)
    for coeffs, b in eq:
        rows.append([rat(v) for v in coeffs])
        rhs.append(rat(b))
        needs_art.append(True)
    m = len(rows)
    n_art = sum(needs_art)
    width = n + n_ineq + n_art + 1
    tableau: list[list] = []
    basis: list[int] = []
    next_art = n + n_ineq
    art_cols: list[int] = []
    flipped: list[bool] = []
    unit_col: list[int] = []  # per row: a column that started as +/- e_row
    for i in range(m):
        flip = rhs[i] < 0
        flipped.append(flip)
        row = [(-v if flip else v) for v in rows[i]]
        row += [ZERO] * (width - n)
        if i < n_ineq:
            row[n + i] = -ONE if flip else ONE
        if needs_art[i]:
            row[next_art] = ONE
            basis.append(next_art)
            art_cols.append(next_art)
            unit_col.append(next_art)
            next_art += 1
        else:
            basis.append(n + i)
            unit_col.append(n + i)
        row[-1] = -rhs[i] if flip else rhs[i]
        tableau.append(row)

    if n_art:
        cost = [ZERO] * width
        for j in art_cols:
            cost[j] = -ONE
        for i, b in enumerate(basis):
            if cost[b]:
                f = cost[b]
                cost = [a - f * br for a, br in zip(cost, tableau[i])]
        phase1 = _Simplex(tableau, cost, basis, enterable=width - 1)
        phase1.run()
        if phase1.value() != 0:
            return INFEASIBLE, None, None, None
        tableau, basis = phase1.t, phase1.basis
        # Drive leftover artificials out of the basis; all-zero rows are redundant.
        art_start = n + n_ineq
        drop = []
        for i in range(len(tableau)):
            if basis[i] >= art_start:
                pc = next((j for j in range(art_start) if tableau[i][j]), None)
                if pc is None:
                    drop.append(i)
                    continue
                prow = tableau[i]
                pval = prow[pc]
                if pval != 1:
                    prow = [v / pval for v in prow]
                    tableau[i] = prow
                for k in range(len(tableau)):
                    if k != i and tableau[k][pc]:
                        f = tableau[k][pc]
                        tableau[k] = [a - f * b for a, b in zip(tableau[k], prow)]
                basis[i] = pc
        for i in reversed(drop):
            tableau.pop(i)
            basis.pop(i)

    cost = [rat(v) for v in objective] + [ZERO] * (width - n)
    for i, b in enumerate(basis):
        if cost[b]:
            f = cost[b]
            cost = [a - f * br for a, br in zip(cost, tableau[i])]
    phase2 = _Simplex(tableau, cost, basis, enterable=n + n_ineq)
    status = phase2.run(stop_above=stop_above)
    if status == UNBOUNDED:
        return UNBOUNDED, None, None, None
    x = [ZERO] * n
    for i, b in enumerate(phase2.basis):
        if b < n:
            x[b] = phase2.t[i][-1]
    duals = None
    if with_duals:
        # The cost row stays the original objective minus a combination of
        # the initial rows; each row's unit column (slack or artificial,
        # initial value +e_row) exposes that row's coefficient.
        cost = phase2.cost
        duals = []
        for i in range(m):
            ui = -cost[unit_col[i]]
            duals.append(-ui if flipped[i] else ui)
    return status, phase2.value(), x, duals


def optimize_via_dual(rows: Sequence[tuple[Sequence[Rat], Rat]], objective) -> LPResult:
    """max objective.x over a consistent system ``A x <= b``.

    Solves the dual program (one variable per constraint row, one equality
    per dimension) and reads the primal witness off the equality-row
    multipliers, so systems with many rows in few dimensions stay cheap.
    An infeasible dual reports the primal objective as unbounded.  Optimal
    witnesses are verified exactly before returning.
    """
    rows = [(list(c), rat(b)) for c, b in rows]
    m = len(rows)
    dim = len(objective)
    eq = [([rows[i][0][j] for i in range(m)], objective[j]) for j in range(dim)]
    neg_b = [-rows[i][1] for i in range(m)]
    status, value, _mu, duals = solve_standard([], eq, neg_b, with_duals=True)
    if status == INFEASIBLE:
        return LPResult(UNBOUNDED)
    if status == UNBOUNDED:
        return LPResult(INFEASIBLE)
    optimum = -value
    x = tuple(-duals[j] for j in range(dim))
    if sum(c * v for c, v in zip(objective, x)) != optimum:
        raise RuntimeError("dual witness does not reproduce the optimum")
    for coeffs, b in rows:
        if sum(c * v for c, v in zip(coeffs, x)) > b:
            raise RuntimeError("dual witness violates the system")
    return LPResult(OPTIMAL, optimum, x)


def maximize_with_subset_growth(
    rows: Sequence[tuple[Sequence[Rat], Rat]],
    objective,
    seed: int = 0,
    grow: int = 64,
) -> LPResult:
    """max objective.x over many rows, working on a growing active subset.

    Optimizes over a deterministic starting subset, checks the remaining
    rows at the witness, pulls in a batch of violated rows and repeats, so
    no single program ever sees the full row count.  The system must be
    consistent; unboundedness over a subset is reported as unbounded.
    """
    rows = [(list(c), rat(b)) for c, b in rows]
    m = len(rows)
    seed = seed or 4 * (len(objective) + 2)
    active = list(range(min(seed, m)))
    in_active = [i < len(active) for i in range(m)]
    while True:
        res = optimize_via_dual([rows[i] for i in active], objective)
        if not res.is_optimal:
            return res
        x = res.point
        added = 0
        for i in range(m):
            if in_active[i]:
                continue
            coeffs, b = rows[i]
            if sum(c * v for c, v in zip(coeffs, x)) > b:
                active.append(i)
                in_active[i] = True
                added += 1
                if added >= grow:
                    break
        if not added:
            return res


def _constraint_rows(h) -> tuple[list, int]:
    """Accept an HRep-like object (``.constraints``/``.dim``) or a raw list of pairs."""
    if hasattr(h, "constraints"):
        return list(h.constraints), h.dim
    rows = list(h)
    dim = len(rows[0][0]) if rows else 0
    return rows, dim


def lp_optimize(objective: Sequence[Rat], h, sense: str = "max", stop_above=None) -> LPResult:
    """Exact simplex: optimize objective over ``{x : coeffs.x <= rhs}``.

    Variables are free; all sign restrictions live in the constraint rows.
    Returns the exact optimum with a witness point, or an infeasible or
    unbounded status.
    """
    if sense not in ("max", "min"):
        raise ValueError(f"sense must be 'max' or 'min', not {sense!r}")
    constraints, dim = _constraint_rows(h)
    obj = [rat(v) for v in objective]
    if len(obj) != dim:
        raise DimensionMismatch(
            f"objective has length {len(obj)}, constraints have dimension {dim}"
        )
    for coeffs, _ in constraints:
        if len(coeffs) != dim:
            raise DimensionMismatch("constraint dimension mismatch")
    if sense == "min":
        obj = [-v for v in obj]
    # Free variables are split as x = u - w with u, w >= 0.
    split_rows = [(list(c) + [-v for v in c], b) for c, b in constraints]
    std_obj = obj + [-v for v in obj]
    status, value, xsplit, _ = solve_standard(split_rows, [], std_obj, stop_above=stop_above)
    if status not in (OPTIMAL, ABOVE):
        return LPResult(status)
    point = tuple(xsplit[j] - xsplit[dim + j] for j in range(dim))
    if sense == "min":
        return LPResult(status, -value, point)
    return LPResult(status, value, point)


def implied_by(rows: Sequence, cand_coeffs: Sequence[Rat], cand_rhs: Rat) -> bool:
    """Whether ``cand.x <= rhs`` holds everywhere on a *consistent* system.

    Decided through the dual: the inequality is implied exactly when it is a
    nonnegative combination of the system's rows whose combined offset is at
    most ``cand_rhs``.  Such combinations are typically very sparse, so the
    feasibility program is solved by column generation: a small restricted
    pool of rows, grown by exact pricing over the excluded ones, decides the
    full system without ever building a wide tableau.
    """
    rows = list(rows)
    dim = len(cand_coeffs)
    m = len(rows)
    if m == 0:
        return not any(cand_coeffs) and cand_rhs >= 0
    if m <= 60:  # narrow systems: one direct solve beats pricing rounds
        eq = [([rows[i][0][j] for i in range(m)], cand_coeffs[j]) for j in range(dim)]
        ineq = [([rows[i][1] for i in range(m)], cand_rhs)]
        status, _, _, _ = solve_standard(ineq, eq, [ZERO] * m)
        return status == OPTIMAL
    nr = dim + 1
    target = [rat(v) for v in cand_coeffs] + [rat(cand_rhs)]
    sigma = [-ONE if t < 0 else ONE for t in target]

    def column(i: int) -> list[Rat]:
        if i == m:  # offset slack: the combination may undershoot the rhs
            return [ZERO] * dim + [ONE]
        coeffs, b = rows[i]
        return [rat(v) for v in coeffs] + [rat(b)]

    # Tableau layout: pool columns, then one artificial per row, then rhs.
    # Rows are pre-scaled by sigma so the artificial block is an identity.
    tableau = [
        [ONE if r == j else ZERO for j in range(nr)] + [sigma[r] * target[r]]
        for r in range(nr)
    ]
    basis = list(range(nr))
    cost = [-ONE] * nr + [ZERO]
    for r in range(nr):
        cost = [a - (-ONE) * b for a, b in zip(cost, tableau[r])]
    art_start = 0
    in_pool: set[int] = set()
    pending = [m]  # seed with the slack column
    add_width = 12

    while True:
        # Splice pending columns in front of the artificial block.
        for cid in pending:
            col = column(cid)
            rep = [
                sum(sigma[r] * col[r] * tableau[i][art_start + r] for r in range(nr))
                for i in range(nr)
            ]
            # Artificials carry objective -1, so their multiplier reads
            # pi_r = obj_r - cost_r = -1 - cost[art_r].
            red = ZERO
            for r in range(nr):
                pi = -ONE - cost[art_start + r]
                red -= sigma[r] * pi * col[r]
            for i in range(nr):
                tableau[i].insert(art_start, rep[i])
            cost.insert(art_start, red)
            basis = [b + 1 if b >= art_start else b for b in basis]
            art_start += 1
            in_pool.add(cid)
        pending = []
        sx = _Simplex(tableau, cost, basis, enterable=art_start)
        sx.run()
        tableau, cost, basis = sx.t, sx.cost, sx.basis
        if sx.value() == 0:
            return True
        pi = [sigma[r] * (-ONE - cost[art_start + r]) for r in range(nr)]
        priced = []
        for i in range(m):
            if i in in_pool:
                continue
            col = rows[i]
            red = -(sum(p * v for p, v in zip(pi, col[0])) + pi[dim] * col[1])
            if red > 0:
                priced.append((red, i))
        if not priced:
            return False
        priced.sort(key=lambda t: (-t[0], t[1]))
        pending = [i for _, i in priced[:add_width]]
