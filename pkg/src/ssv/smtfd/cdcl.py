"""Small CDCL SAT core: two watched literals, 1UIP learning, VSIDS-style
activities with phase saving, and Luby restarts. Instances produced by the
bit-blaster are small; there is no clause deletion."""

from __future__ import annotations

import time


def _luby(x: int) -> int:
    size, seq = 1, 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) // 2
        seq -= 1
        x = x % size
    return 1 << seq


class SatSolver:
    def __init__(self):
        self.clauses: list[list[int]] = []
        self.watches: dict[int, list[int]] = {}
        self.values = [0]  # 1-indexed: 0 unassigned, +1 true, -1 false
        self.levels = [0]
        self.reasons = [-1]
        self.activity = [0.0]
        self.phase = [False]
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.prop_head = 0
        self.ok = True
        self.var_inc = 1.0

    # --- variables and clauses ---

    def new_var(self) -> int:
        self.values.append(0)
        self.levels.append(0)
        self.reasons.append(-1)
        self.activity.append(0.0)
        self.phase.append(False)
        return len(self.values) - 1

    @property
    def num_vars(self) -> int:
        return len(self.values) - 1

    def value(self, lit: int) -> int:
        v = self.values[abs(lit)]
        return v if lit > 0 else -v

    def add_clause(self, lits) -> bool:
        """Add a clause; False signals the formula became trivially unsat."""
        if not self.ok:
            return False
        seen = set()
        out = []
        for lit in lits:
            if -lit in seen:
                return True  # tautology
            if lit in seen:
                continue
            v = self.value(lit)
            if v == 1 and self.levels[abs(lit)] == 0:
                return True
            if v == -1 and self.levels[abs(lit)] == 0:
                continue
            seen.add(lit)
            out.append(lit)
        if not out:
            self.ok = False
            return False
        if len(out) == 1:
            if not self._enqueue(out[0], -1):
                self.ok = False
            return self.ok
        ci = len(self.clauses)
        self.clauses.append(out)
        self.watches.setdefault(out[0], []).append(ci)
        self.watches.setdefault(out[1], []).append(ci)
        return True

    # --- assignment machinery ---

    def _enqueue(self, lit: int, reason: int) -> bool:
        v = self.value(lit)
        if v == 1:
            return True
        if v == -1:
            return False
        var = abs(lit)
        self.values[var] = 1 if lit > 0 else -1
        self.levels[var] = len(self.trail_lim)
        self.reasons[var] = reason
        self.phase[var] = lit > 0
        self.trail.append(lit)
        return True

    def _propagate(self) -> int:
        """Unit propagation; returns a conflicting clause index or -1."""
        while self.prop_head < len(self.trail):
            lit = self.trail[self.prop_head]
            self.prop_head += 1
            false_lit = -lit
            watchers = self.watches.get(false_lit)
            if not watchers:
                continue
            self.watches[false_lit] = []
            keep = self.watches[false_lit]
            for idx, ci in enumerate(watchers):
                clause = self.clauses[ci]
                if clause[0] == false_lit:
                    clause[0], clause[1] = clause[1], clause[0]
                if self.value(clause[0]) == 1:
                    keep.append(ci)
                    continue
                moved = False
                for k in range(2, len(clause)):
                    if self.value(clause[k]) != -1:
                        clause[1], clause[k] = clause[k], clause[1]
                        self.watches.setdefault(clause[1], []).append(ci)
                        moved = True
                        break
                if moved:
                    continue
                keep.append(ci)
                if not self._enqueue(clause[0], ci):
                    keep.extend(watchers[idx + 1:])
                    return ci
        return -1

    def _bump(self, var: int) -> None:
        self.activity[var] += self.var_inc
        if self.activity[var] > 1e100:
            for v in range(1, len(self.activity)):
                self.activity[v] *= 1e-100
            self.var_inc *= 1e-100

    def _analyze(self, conflict: int) -> tuple[list[int], int]:
        learnt = [0]
        seen = [False] * (self.num_vars + 1)
        counter = 0
        lit = 0
        index = len(self.trail)
        current = len(self.trail_lim)
        reason = conflict
        while True:
            clause = self.clauses[reason]
            start = 1 if lit != 0 else 0
            for q in clause[start:] if lit == 0 else clause:
                if q == lit:
                    continue
                var = abs(q)
                if not seen[var] and self.levels[var] > 0:
                    seen[var] = True
                    self._bump(var)
                    if self.levels[var] >= current:
                        counter += 1
                    else:
                        learnt.append(q)
            while True:
                index -= 1
                if seen[abs(self.trail[index])]:
                    break
            lit = self.trail[index]
            counter -= 1
            if counter == 0:
                break
            reason = self.reasons[abs(lit)]
        learnt[0] = -lit
        if len(learnt) == 1:
            bt = 0
        else:
            bt = max(self.levels[abs(q)] for q in learnt[1:])
        return learnt, bt

    def _backtrack(self, level: int) -> None:
        while len(self.trail_lim) > level:
            limit = self.trail_lim.pop()
            while len(self.trail) > limit:
                lit = self.trail.pop()
                self.values[abs(lit)] = 0
        self.prop_head = min(self.prop_head, len(self.trail))

    def _pick_branch(self) -> int:
        best = 0
        best_act = -1.0
        for var in range(1, self.num_vars + 1):
            if self.values[var] == 0 and self.activity[var] > best_act:
                best = var
                best_act = self.activity[var]
        if best == 0:
            return 0
        return best if self.phase[best] else -best

    def _record_learnt(self, learnt: list[int]) -> None:
        if len(learnt) == 1:
            self._enqueue(learnt[0], -1)
            return
        ci = len(self.clauses)
        self.clauses.append(learnt)
        self.watches.setdefault(learnt[0], []).append(ci)
        self.watches.setdefault(learnt[1], []).append(ci)
        self._enqueue(learnt[0], ci)

    def solve(self, deadline: float | None = None) -> bool | None:
        """True if satisfiable, False if not, None on deadline expiry."""
        if not self.ok:
            return False
        conflicts = 0
        restart_segment = 0
        limit = 64 * _luby(0)
        while True:
            conflict = self._propagate()
            if conflict >= 0:
                conflicts += 1
                if not self.trail_lim:
                    return False
                learnt, bt = self._analyze(conflict)
                self._backtrack(bt)
                # put a literal of the backjump level second for watching
                if len(learnt) > 1:
                    for k in range(1, len(learnt)):
                        if self.levels[abs(learnt[k])] == bt:
                            learnt[1], learnt[k] = learnt[k], learnt[1]
                            break
                self._record_learnt(learnt)
                self.var_inc /= 0.95
                if deadline is not None and conflicts % 64 == 0 \
                        and time.monotonic() > deadline:
                    return None
                if conflicts >= limit:
                    restart_segment += 1
                    limit = conflicts + 64 * _luby(restart_segment)
                    self._backtrack(0)
                continue
            if deadline is not None and time.monotonic() > deadline:
                return None
            branch = self._pick_branch()
            if branch == 0:
                return True
            self.trail_lim.append(len(self.trail))
            self._enqueue(branch, -1)
