"""Tree search over teaching strategies.

Rollout shape: descend from the root by UCT, expanding any non-terminal leaf
with up to n candidate actions plus simulated observations; every candidate is
evaluated immediately with a blend of the scorer's value and the sibling
self-consistency share; terminal rewards are the blended values and propagate
back to the root as running means. Untraversed children are preferred during
descent and fully-explored subtrees are skipped while alternatives remain, so
a search given at least as many rollouts as the tree has leaves degenerates to
exhaustive enumeration.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Protocol, Sequence

from ..domain import SessionConfig, StrategyNode, StrategyTree
from ..errors import EmptyCandidatesError, GatewayError, GeneratorFailedError


@dataclass(frozen=True)
class SearchParams:
    expansion_width: int = 3
    depth_limit: int = 3
    rollouts: int = 8
    exploration_weight: float = 1.0
    value_blend: float = 0.8
    quality_threshold: float = 0.7

    def __post_init__(self) -> None:
        if self.expansion_width < 1 or self.depth_limit < 1 or self.rollouts < 1:
            raise ValueError("width, depth and rollouts must be >= 1")
        if not 0.0 <= self.value_blend <= 1.0:
            raise ValueError("value_blend must be in [0, 1]")
        if self.exploration_weight < 0:
            raise ValueError("exploration_weight must be >= 0")

    @classmethod
    def from_config(cls, config: SessionConfig) -> "SearchParams":
        return cls(
            expansion_width=config.expansion_width,
            depth_limit=config.depth_limit,
            rollouts=config.rollouts,
            exploration_weight=config.exploration_weight,
            value_blend=config.value_blend,
            quality_threshold=config.quality_threshold,
        )


@dataclass(frozen=True)
class CandidateAction:
    action: str
    observation: str
    terminal: bool = False

    @property
    def content(self) -> str:
        return self.observation or self.action


@dataclass
class Trajectory:
    nodes: list[StrategyNode]
    value: float
    content: str
    found_terminal: bool = True

    def __post_init__(self) -> None:
        for parent, child in zip(self.nodes, self.nodes[1:]):
            if child.parent_id != parent.id:
                raise ValueError("trajectory nodes must be parent-linked")


class ActionGenerator(Protocol):
    def __call__(self, context: str, path: tuple[str, ...]) -> Sequence[CandidateAction]: ...


class ActionEvaluator(Protocol):
    def __call__(self, context: str, path: tuple[str, ...], candidate: CandidateAction) -> float: ...


Reflector = Callable[[str, tuple[str, ...]], str]


def uct(value: float, visits: int, parent_visits: int, exploration_weight: float) -> float:
    """value + w * sqrt(ln N(parent) / N(node)); ln 1 = 0 on a first visit."""
    if visits < 1 or parent_visits < 1:
        raise ValueError("visit counts must be >= 1")
    return value + exploration_weight * math.sqrt(math.log(parent_visits) / visits)


def blend_value(scorer_value: float, self_consistency_share: float, blend: float) -> float:
    """Convex combination: blend * scorer + (1 - blend) * consistency."""
    return blend * scorer_value + (1.0 - blend) * self_consistency_share


def consistency_key(text: str) -> str:
    """Agreement key: final non-empty line, lowercased, whitespace-collapsed."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    tail = lines[-1] if lines else text
    return re.sub(r"\s+", " ", tail).strip().lower()


def self_consistency(
    candidates: Sequence[str], key_fn: Callable[[str], str] = consistency_key
) -> dict[str, float]:
    """Share of candidates agreeing with each candidate's answer key."""
    if not candidates:
        raise EmptyCandidatesError("self-consistency needs at least one candidate")
    keys = [key_fn(c) for c in candidates]
    counts: dict[str, int] = {}
    for key in keys:
        counts[key] = counts.get(key, 0) + 1
    total = len(candidates)
    return {cand: counts[key] / total for cand, key in zip(candidates, keys)}


def backpropagate(path: Sequence[StrategyNode], reward: float) -> None:
    """Fold one reward into each node's running mean, terminal first.

    Callers must have incremented N for every node on the path already (a
    node's creation counts as its first visit).
    """
    for node in reversed(path):
        node.value = (node.value * (node.visits - 1) + reward) / node.visits


def lats_search(
    root_context: str,
    generator: ActionGenerator,
    evaluator: ActionEvaluator,
    reflector: Reflector | None,
    params: SearchParams,
    rollout_log: list[tuple[tuple[str, ...], float]] | None = None,
) -> tuple[Trajectory, StrategyTree]:
    """Run up to `rollouts` passes and return the best terminal trajectory.

    Stops early once a rollout ends at a terminal whose value reaches the
    quality threshold. If the generator never produces a terminal (and depth
    never forces one), the best internal node is returned flagged.
    `rollout_log` (when given) collects (path node ids, reward) per rollout so
    value means can be replayed and audited.
    """
    counter = 0

    def next_id() -> str:
        nonlocal counter
        nid = f"n{counter}"
        counter += 1
        return nid

    root = StrategyNode(
        id=next_id(), parent_id=None, context=root_context, action="", observation="", depth=0
    )
    tree = StrategyTree(root)
    traversed: set[str] = set()
    exhausted: set[str] = set()
    dead: set[str] = set()

    def path_actions(node: StrategyNode) -> tuple[str, ...]:
        return tuple(n.action for n in tree.path_to(node.id) if n.action)

    def expand(node: StrategyNode) -> list[StrategyNode]:
        try:
            candidates = list(generator(node.context, path_actions(node)))[: params.expansion_width]
        except GatewayError as exc:
            raise GeneratorFailedError(str(exc)) from exc
        if not candidates:
            return []
        shares = self_consistency([c.content for c in candidates])
        children = []
        for cand in candidates:
            context = f"{node.context}\nAction: {cand.action}\nObservation: {cand.observation}"
            child = StrategyNode(
                id=next_id(),
                parent_id=node.id,
                context=context,
                action=cand.action,
                observation=cand.observation,
                depth=node.depth + 1,
                terminal=cand.terminal or node.depth + 1 >= params.depth_limit,
            )
            tree.add(child)
            raw = max(0.0, min(1.0, evaluator(context, path_actions(child), cand)))
            child.value = blend_value(raw, shares[cand.content], params.value_blend)
            children.append(child)
        return children

    def select(node: StrategyNode) -> StrategyNode:
        kids = tree.children_of(node.id)
        fresh = [c for c in kids if c.id not in traversed]
        if fresh:
            return max(fresh, key=lambda c: c.value)
        pool = [c for c in kids if c.id not in exhausted] or kids
        return max(
            pool, key=lambda c: uct(c.value, c.visits, node.visits, params.exploration_weight)
        )

    for _ in range(params.rollouts):
        node = root
        path = [root]
        while not node.terminal and node.id not in dead:
            if not node.children:
                if not expand(node):
                    dead.add(node.id)
                    break
            node = select(node)
            path.append(node)

        for step in path:
            if step.id in traversed:
                step.visits += 1
            else:
                traversed.add(step.id)

        reward = node.value
        if node.terminal and reward < params.quality_threshold and reflector is not None:
            if node.reflection is None:
                node.reflection = reflector(node.context, path_actions(node))
                node.context = f"{node.context}\nReflection: {node.reflection}"
        if rollout_log is not None:
            rollout_log.append((tuple(step.id for step in path), reward))
        backpropagate(path, reward)

        for step in reversed(path):
            if step.terminal or step.id in dead:
                exhausted.add(step.id)
            elif step.children and all(c in exhausted for c in step.children):
                exhausted.add(step.id)

        if node.terminal and reward >= params.quality_threshold:
            break

    terminals = [n for n in tree.terminals() if n.id not in dead]
    if terminals:
        best = max(terminals, key=lambda n: n.value)
        return (
            Trajectory(
                nodes=tree.path_to(best.id),
                value=best.value,
                content=best.observation or best.action,
                found_terminal=True,
            ),
            tree,
        )

    fallback = max(tree.nodes.values(), key=lambda n: n.value)
    return (
        Trajectory(
            nodes=tree.path_to(fallback.id),
            value=fallback.value,
            content=fallback.observation or fallback.action or fallback.context,
            found_terminal=False,
        ),
        tree,
    )
