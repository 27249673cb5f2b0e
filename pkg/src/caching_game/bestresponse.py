"""Optimal adaptive search against a known Hider mixture.

Exact dynamic program over Searcher information states. A state is the
per-location dug depth (in grid steps) plus the per-location multiset of
depths at which objects have been revealed; together these determine which
support strategies remain consistent, so values are memoized on
(dug, found) alone. Probability mass is propagated unnormalized: the value
of a state is the total mass of consistent strategies the Searcher can
still fully uncover within the remaining budget.

Two internal accelerations, both validated against reference modes in the
test suite:

* jump moves: within one location, digging below the shallowest depth any
  consistent strategy still hides at reveals nothing, so actions move the
  dig front straight to that depth (single-step mode is kept as the
  reference semantics);
* state folding: when the mixture is invariant under location relabeling,
  values are memoized on the sorted multiset of (dug, found) location
  descriptors.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction

from .core import GameConfig, HiderMixed, HiderPure
from .enumeration import Grid


@dataclass(frozen=True)
class InfoState:
    """What the Searcher knows: dug steps, revealed depths, budget left."""

    dug: tuple[int, ...]
    found: tuple[tuple[int, ...], ...]
    budget_left: int


def effective_budget(cfg: GameConfig, grid: Grid) -> int:
    """Grid steps available to the Searcher: floor(h * m)."""
    return math.floor(cfg.h * grid.m)


def consistent(hp: HiderPure, state: InfoState, grid: Grid) -> bool:
    """True iff hp would have produced exactly the observations in state.

    Per location, the multiset of hp's depths lying at or above the dug
    front must equal the multiset of revealed depths.
    """
    steps = hp.scaled(grid.m)
    for dug_i, found_i, steps_i in zip(state.dug, state.found, steps):
        if tuple(s for s in steps_i if s <= dug_i) != found_i:
            return False
    return True


class TreePolicy:
    """A deterministic adaptive dig policy.

    `actions` maps (dug, found) states to (location, target_step) moves;
    states outside the map follow the fallback of digging the lowest-index
    unexhausted location to full depth. The policy is total, so it can be
    simulated against any strategy, on or off the support it was built for.
    """

    def __init__(self, n: int, m: int, budget: int, actions: dict | None = None):
        self.n = n
        self.m = m
        self.budget = budget
        self.actions = dict(actions or {})

    def act(self, dug: tuple[int, ...], found) -> tuple[int, int] | None:
        move = self.actions.get((dug, found))
        if move is not None:
            return move
        for loc in range(self.n):
            if dug[loc] < self.m:
                return loc, self.m
        return None

    def simulate(self, hp_steps: tuple[tuple[int, ...], ...]) -> bool:
        """Play the policy against one placement; True iff all objects found."""
        k = sum(len(s) for s in hp_steps)
        dug = [0] * self.n
        found = [() for _ in range(self.n)]
        found_count = 0
        budget = self.budget
        while True:
            if found_count == k:
                return True
            if budget == 0:
                return False
            move = self.act(tuple(dug), tuple(found))
            if move is None:
                return False
            loc, target = move
            hidden = hp_steps[loc]
            while dug[loc] < target and budget > 0:
                dug[loc] += 1
                budget -= 1
                step = dug[loc]
                hits = sum(1 for s in hidden if s == step)
                if hits:
                    found[loc] = tuple(sorted(found[loc] + (step,) * hits))
                    found_count += hits
                    break

    def to_json_obj(self) -> dict:
        moves = [
            {
                "dug": list(dug),
                "found": [list(f) for f in found],
                "location": loc,
                "to_step": target,
            }
            for (dug, found), (loc, target) in sorted(self.actions.items())
        ]
        return {"n": self.n, "m": self.m, "budget": self.budget, "moves": moves}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "TreePolicy":
        actions = {}
        for move in obj["moves"]:
            key = (
                tuple(move["dug"]),
                tuple(tuple(f) for f in move["found"]),
            )
            actions[key] = (move["location"], move["to_step"])
        return cls(obj["n"], obj["m"], obj["budget"], actions)


@dataclass
class PolicyNode:
    """Explicit policy tree node: state, single-step action, branches.

    Actions dig one grid step; `children` is keyed by the observation the
    step produced ("-" for no find, else the revealed steps joined by "+").
    """

    state: InfoState
    action: tuple[int, int] | None
    children: dict[str, "PolicyNode"] = field(default_factory=dict)


def _fold_key(dug, found):
    return tuple(sorted(zip(dug, found)))


class _BestResponse:
    def __init__(self, mu: HiderMixed, cfg: GameConfig, grid: Grid, jump: bool, fold: bool):
        self.n = cfg.n
        self.k = cfg.k
        self.m = grid.m
        self.budget = effective_budget(cfg, grid)
        self.jump = jump
        self.fold = fold
        self.weights = [p for _, p in mu.entries]
        self.steps = [hp.scaled(grid.m) for hp, _ in mu.entries]
        self.memo: dict = {}

    def _candidates(self, dug, cons, budget_left):
        """Eligible (location, target_step) moves from this state."""
        moves = []
        for loc in range(self.n):
            d0 = dug[loc]
            if d0 >= self.m:
                continue
            if not self.jump:
                if budget_left >= 1:
                    moves.append((loc, d0 + 1))
                continue
            target = None
            for i in cons:
                depths = self.steps[i][loc]
                pos = bisect_right(depths, d0)
                if pos < len(depths) and (target is None or depths[pos] < target):
                    target = depths[pos]
            if target is not None and target - d0 <= budget_left:
                moves.append((loc, target))
        return moves

    def _outcomes(self, cons, loc, target):
        """Partition consistent strategies by what the move reveals."""
        groups: dict[tuple[int, ...], list[int]] = {}
        for i in cons:
            out = tuple(s for s in self.steps[i][loc] if s == target)
            groups.setdefault(out, []).append(i)
        return groups

    def value(self, dug, found, cons) -> Fraction:
        key = _fold_key(dug, found) if self.fold else (dug, found)
        cached = self.memo.get(key)
        if cached is not None:
            return cached
        if sum(len(f) for f in found) == self.k:
            result = sum((self.weights[i] for i in cons), Fraction(0))
        else:
            budget_left = self.budget - sum(dug)
            result = Fraction(0)
            for loc, target in self._candidates(dug, cons, budget_left):
                next_dug = dug[:loc] + (target,) + dug[loc + 1 :]
                total = Fraction(0)
                for out, members in self._outcomes(cons, loc, target).items():
                    if out:
                        merged = tuple(sorted(found[loc] + out))
                        next_found = found[:loc] + (merged,) + found[loc + 1 :]
                    else:
                        next_found = found
                    total += self.value(next_dug, next_found, members)
                if total > result:
                    result = total
        self.memo[key] = result
        return result

    def best_move(self, dug, found, cons):
        """The value-maximizing move, ties broken by lowest location."""
        budget_left = self.budget - sum(dug)
        best = None
        best_value = Fraction(0)
        for loc, target in self._candidates(dug, cons, budget_left):
            next_dug = dug[:loc] + (target,) + dug[loc + 1 :]
            total = Fraction(0)
            for out, members in self._outcomes(cons, loc, target).items():
                if out:
                    merged = tuple(sorted(found[loc] + out))
                    next_found = found[:loc] + (merged,) + found[loc + 1 :]
                else:
                    next_found = found
                total += self.value(next_dug, next_found, members)
            if best is None or total > best_value:
                best = (loc, target)
                best_value = total
        return best, best_value

    def extract_policy(self) -> TreePolicy:
        """Record the chosen move for every state reachable under the mix."""
        actions = {}
        root = ((0,) * self.n, ((),) * self.n, tuple(range(len(self.steps))))
        stack = [root]
        seen = set()
        while stack:
            dug, found, cons = stack.pop()
            if (dug, found) in seen:
                continue
            seen.add((dug, found))
            if sum(len(f) for f in found) == self.k:
                continue
            move, move_value = self.best_move(dug, found, cons)
            if move is None or move_value == 0:
                # Nothing left worth digging for; fall back outside the map.
                continue
            actions[(dug, found)] = move
            loc, target = move
            next_dug = dug[:loc] + (target,) + dug[loc + 1 :]
            for out, members in self._outcomes(cons, loc, target).items():
                if out:
                    merged = tuple(sorted(found[loc] + out))
                    next_found = found[:loc] + (merged,) + found[loc + 1 :]
                else:
                    next_found = found
                stack.append((next_dug, next_found, tuple(members)))
        return TreePolicy(self.n, self.m, self.budget, actions)


def best_response_value(
    mu: HiderMixed,
    cfg: GameConfig,
    grid: Grid,
    *,
    jump: bool = True,
    fold: bool | None = None,
    extract_policy: bool = True,
) -> tuple[Fraction, TreePolicy | None]:
    """Exact value of the best adaptive Searcher reply to the mixture mu.

    Every support strategy must be a valid placement on the grid. The
    returned policy realizes the value against mu and is total (it digs
    sensibly off-support as well). `fold` defaults to automatic: folding is
    enabled exactly when mu is location-symmetric, which is what makes it
    sound. `jump=False` selects the slow single-step reference semantics.
    """
    from .core import validate_hider

    for hp, _ in mu.entries:
        violation = validate_hider(hp, cfg)
        if violation is not None:
            raise ValueError(f"invalid support strategy {hp}: {violation}")
    if fold is None:
        fold = mu.is_location_symmetric()
    solver = _BestResponse(mu, cfg, grid, jump=jump, fold=fold)
    root_cons = tuple(range(len(mu.entries)))
    value = solver.value((0,) * cfg.n, ((),) * cfg.n, root_cons)
    policy = solver.extract_policy() if extract_policy else None
    return value, policy


def export_policy_tree(
    policy: TreePolicy, mu: HiderMixed, cfg: GameConfig, grid: Grid
) -> PolicyNode:
    """Expand a policy into a single-step tree over the states mu can reach.

    Multi-step moves are unrolled one step at a time; the in-progress move
    is carried through no-find steps and dropped on a find, after which the
    policy is consulted afresh.
    """
    steps = [hp.scaled(grid.m) for hp, _ in mu.entries]
    k = cfg.k

    def build(dug, found, cons, pending) -> PolicyNode:
        budget_left = policy.budget - sum(dug)
        state = InfoState(dug, found, budget_left)
        if sum(len(f) for f in found) == k or budget_left == 0:
            return PolicyNode(state, None)
        if pending is not None and dug[pending[0]] < pending[1]:
            move = pending
        else:
            move = policy.act(dug, found)
        if move is None:
            return PolicyNode(state, None)
        loc, target = move
        step = dug[loc] + 1
        node = PolicyNode(state, (loc, step))
        next_dug = dug[:loc] + (step,) + dug[loc + 1 :]
        groups: dict[tuple[int, ...], list[int]] = {}
        for i in cons:
            out = tuple(s for s in steps[i][loc] if s == step)
            groups.setdefault(out, []).append(i)
        for out, members in groups.items():
            if out:
                merged = tuple(sorted(found[loc] + out))
                next_found = found[:loc] + (merged,) + found[loc + 1 :]
                label = "+".join(str(s) for s in out)
                next_pending = None
            else:
                next_found = found
                label = "-"
                next_pending = (loc, target) if step < target else None
            node.children[label] = build(next_dug, next_found, tuple(members), next_pending)
        return node

    return build((0,) * cfg.n, ((),) * cfg.n, tuple(range(len(mu.entries))), None)


def policy_tree_to_json(node: PolicyNode) -> dict:
    action = None
    if node.action is not None:
        action = {"location": node.action[0], "to_step": node.action[1]}
    return {
        "state": {
            "dug": list(node.state.dug),
            "found": [list(f) for f in node.state.found],
            "budget_left": node.state.budget_left,
        },
        "action": action,
        "children": {
            label: policy_tree_to_json(child) for label, child in sorted(node.children.items())
        },
    }
