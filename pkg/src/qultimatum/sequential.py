"""Sequential play of the MW game and the game tree it induces.

Player 1 flips (or not) qubit 1, qubit 1 is measured, and the outcome
``iota`` decides whether player 2 acts on qubit 2 (``iota = 0``) or qubit 3
(``iota = 1``). Payoffs come from a pair-valued outcome operator ``X``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import qstate
from .classical_game import GameParams
from .mw_scheme import MWProfile, all_mw_profiles


@dataclass(frozen=True)
class OutcomeOperator:
    """Payoff vectors attached to the four terminal histories
    ``(c0,d0)``, ``(c0,d1)``, ``(c1,e0)``, ``(c1,e1)``."""

    O00: tuple[float, float]
    O01: tuple[float, float]
    O10: tuple[float, float]
    O11: tuple[float, float]

    @classmethod
    def ultimatum(cls, params: GameParams) -> "OutcomeOperator":
        fair, unfair = tuple(params.fair.tolist()), tuple(params.unfair.tolist())
        return cls(fair, (0.0, 0.0), unfair, (0.0, 0.0))

    def diagonals(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-basis-state outcome values of ``X^0`` and ``X^1``, shape (8, 2)."""
        x0 = np.zeros((qstate.DIM, 2))
        x1 = np.zeros((qstate.DIM, 2))
        for x in range(qstate.DIM):
            b1, b2, b3 = qstate.index_bits(x)
            if b1 == 0:
                x0[x] = self.O00 if b2 == 0 else self.O01
            else:
                x1[x] = self.O10 if b3 == 0 else self.O11
        return x0, x1

    def component_matrices(self, part: Optional[int] = None) -> np.ndarray:
        """``X`` (or ``X^part``) as a stack of two 8x8 matrices, one per player."""
        x0, x1 = self.diagonals()
        diag = {None: x0 + x1, 0: x0, 1: x1}[part]
        return np.stack([np.diag(diag[:, i]).astype(complex) for i in range(2)])


def expected_outcome(X: OutcomeOperator, rho: np.ndarray) -> np.ndarray:
    """``tr(X rho)`` for both players."""
    return np.real(np.einsum("pij,ji->p", X.component_matrices(), rho))


def _flip(qubit: int, kappa: int) -> np.ndarray:
    return qstate.on_qubit(qstate.pauli(kappa), qubit)


def direct_final(rho_in: np.ndarray, profile: MWProfile) -> np.ndarray:
    return qstate.conjugate_density(profile.operator(), rho_in)


def sequential_final(rho_in: np.ndarray, profile: MWProfile) -> np.ndarray:
    """Final state of the three-step procedure, as a probability mixture."""
    rho_k = qstate.conjugate_density(_flip(1, profile.kappa1), rho_in)
    kappas = (profile.kappa2, profile.kappa3)
    out = np.zeros_like(rho_k)
    for branch in qstate.measure_first_qubit(rho_k):
        if branch.empty:
            continue
        op = _flip(2 + branch.outcome, kappas[branch.outcome])
        out += branch.probability * qstate.conjugate_density(op, branch.state)
    return out


def check_outcome_equivalence(rho_in: np.ndarray, profile: MWProfile, X: OutcomeOperator) -> float:
    """Largest componentwise gap between sequential and direct expected outcomes."""
    a = expected_outcome(X, sequential_final(rho_in, profile))
    b = expected_outcome(X, direct_final(rho_in, profile))
    return float(np.max(np.abs(a - b)))


# ---------------------------------------------------------------------------
# game tree


@dataclass
class TreeNode:
    id: str
    kind: str  # "decision", "chance" or "terminal"
    player: Optional[int] = None
    info_set: Optional[str] = None
    payoff: Optional[tuple[float, float]] = None
    pruned: bool = False


@dataclass
class TreeEdge:
    source: str
    target: str
    action: str
    probability: Optional[float] = None


@dataclass
class QuantumGameTree:
    nodes: list[TreeNode] = field(default_factory=list)
    edges: list[TreeEdge] = field(default_factory=list)
    # chance[k1][iota] = probability of outcome iota after player 1's k1
    chance: dict[int, dict[int, float]] = field(default_factory=dict)
    # leaves[(iota, k1, k)] = expected outcome O'
    leaves: dict[tuple[int, int, int], tuple[float, float]] = field(default_factory=dict)
    pruned: list[str] = field(default_factory=list)

    def node(self, node_id: str) -> TreeNode:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)

    def info_sets(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {}
        for n in self.nodes:
            if n.info_set is not None and not n.pruned:
                out.setdefault(n.info_set, []).append(n.id)
        return out

    def actions_at(self, node_id: str) -> list[str]:
        return [e.action for e in self.edges if e.source == node_id]

    def fold(self, profile: MWProfile) -> np.ndarray:
        """Chance-weighted payoff of a pure profile."""
        kappas = (profile.kappa2, profile.kappa3)
        total = np.zeros(2)
        for iota, p in self.chance[profile.kappa1].items():
            if p > 0:
                total += p * np.asarray(self.leaves[(iota, profile.kappa1, kappas[iota])])
        return total

    def to_dict(self) -> dict:
        return {
            "nodes": [_node_dict(n) for n in self.nodes],
            "edges": [{k: v for k, v in vars(e).items() if v is not None} for e in self.edges],
            "chance": {f"c{k1}": {str(i): p for i, p in probs.items()} for k1, probs in self.chance.items()},
            "info_sets": self.info_sets(),
            "leaves": {f"{i}.{k1},{k}": list(v) for (i, k1, k), v in self.leaves.items()},
            "pruned": list(self.pruned),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    def to_dot(self, name: str = "quantum_tree") -> str:
        lines = [f"digraph {name} {{", "  rankdir=TB;", "  node [fontsize=10];"]
        in_cluster = {nid for members in self.info_sets().values() for nid in members}
        for n in self.nodes:
            if n.id in in_cluster:
                continue
            lines.append(f"  {_q(n.id)} [{_dot_attrs(n)}];")
        for k, (iset, members) in enumerate(sorted(self.info_sets().items())):
            lines.append(f"  subgraph cluster_{k} {{")
            lines.append(f"    label={_q(iset)}; style=dashed;")
            for nid in members:
                lines.append(f"    {_q(nid)} [{_dot_attrs(self.node(nid))}];")
            lines.append("  }")
        for e in self.edges:
            label = e.action if e.probability is None else f"{e.action} ({e.probability:.6f})"
            style = ", style=dotted" if self.node(e.target).pruned else ""
            lines.append(f"  {_q(e.source)} -> {_q(e.target)} [label={_q(label)}{style}];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _node_dict(n: TreeNode) -> dict:
    d = {"id": n.id, "kind": n.kind}
    if n.player is not None:
        d["player"] = n.player
    if n.info_set is not None:
        d["info_set"] = n.info_set
    if n.payoff is not None:
        d["payoff"] = list(n.payoff)
    if n.pruned:
        d["pruned"] = True
    return d


def _q(s: str) -> str:
    return '"' + s.replace('"', '\\"') + '"'


def _dot_attrs(n: TreeNode) -> str:
    if n.kind == "chance":
        attrs = ["shape=diamond", f"label={_q('chance')}"]
    elif n.kind == "terminal":
        attrs = ["shape=box", f"label={_q('({:.6f}, {:.6f})'.format(*n.payoff) if n.payoff else 'pruned')}"]
    else:
        attrs = ["shape=circle", f"label={_q(str(n.player))}"]
    if n.pruned:
        attrs.append("style=dotted")
    return ", ".join(attrs)


def build_tree(rho_in: np.ndarray, X: OutcomeOperator) -> QuantumGameTree:
    """Extract the two-stage tree: player 1, measurement chance node, player 2.

    Zero-probability chance outcomes keep their nodes but are marked pruned
    and carry no leaf payoffs.
    """
    tree = QuantumGameTree()
    tree.nodes.append(TreeNode("root", "decision", player=1, info_set=None))
    labels = ("d", "e")
    for k1 in (0, 1):
        cnode = f"c{k1}"
        tree.nodes.append(TreeNode(cnode, "chance"))
        tree.edges.append(TreeEdge("root", cnode, f"c{k1}"))
        rho_k = qstate.conjugate_density(_flip(1, k1), rho_in)
        tree.chance[k1] = {}
        for branch in qstate.measure_first_qubit(rho_k):
            iota = branch.outcome
            pnode = f"{cnode}/chance{iota}"
            tree.chance[k1][iota] = branch.probability
            tree.edges.append(TreeEdge(cnode, pnode, f"m{iota}", branch.probability))
            tree.nodes.append(TreeNode(pnode, "decision", player=2, info_set=f"I{iota}", pruned=branch.empty))
            if branch.empty:
                tree.pruned.append(pnode)
            for k in (0, 1):
                leaf = f"{pnode}/a{k}"
                payoff = None
                if not branch.empty:
                    rho_f = qstate.conjugate_density(_flip(2 + iota, k), branch.state)
                    payoff = tuple(float(v) for v in expected_outcome(X, rho_f))
                    tree.leaves[(iota, k1, k)] = payoff
                tree.nodes.append(TreeNode(leaf, "terminal", payoff=payoff, pruned=branch.empty))
                tree.edges.append(TreeEdge(pnode, leaf, f"{labels[iota]}{k}"))
    return tree


def tree_payoffs(tree: QuantumGameTree) -> dict[MWProfile, np.ndarray]:
    return {prof: tree.fold(prof) for prof in all_mw_profiles()}
