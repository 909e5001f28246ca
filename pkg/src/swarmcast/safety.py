"""Link-preservation certificates.

Every verdict is a conservative sufficient condition: NoGuarantee means no
rule in the registry applies, never that the link will break. Rules are
tagged so each reported bound traces back to the statement it came from,
and when several rules apply to one link the largest guaranteed bound wins.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .asymptotics import LeaderSet
from .errors import InvalidInputError, NotApplicableError
from .graphs import InfluenceModel, VisibilityGraph, build_visibility_graph

PRESERVED_UNCONDITIONALLY = "PreservedUnconditionally"
PRESERVED_IF_SPEED_BELOW = "PreservedIfSpeedBelow"
NO_GUARANTEE = "NoGuarantee"

RULES = {
    "complete-same-role": "complete graph: same-role distances contract monotonically",
    "complete-uniform-l2f": "complete graph, uniform weights: |u| <= n R keeps leader-follower links",
    "complete-scaled-l2f": "complete graph, scaled weights: |u| <= n/(n-1) R keeps leader-follower links",
    "incomplete-uniform-link": "uniform weights: common-neighbor margin certifies one link",
    "complete-subgraphs-same-role": "complete leader and follower subgraphs: same-role count condition",
    "complete-subgraphs-l2f": "complete leader and follower subgraphs: |u| <= 2R(shared-degree margin)",
    "chain-uniform": "single-leader chain, uniform weights: |u| <= n/(n-1) R under tight initial spacing",
    "chain-scaled": "single-leader chain, scaled weights: |u| <= n/(n-1) R under in-range initial spacing",
    "scaled-incomplete-open": "scaled weights on a general incomplete graph: no preservation rule available",
    "scaled-rate-note": "informational: at range the squared distance grows at most 4R^2 + 2|u|R",
}


@dataclass(frozen=True)
class LinkVerdict:
    edge: tuple
    classification: str
    bound: float = None  # length/time units, present only for conditional verdicts
    rule: str = "scaled-incomplete-open"

    def __post_init__(self):
        if self.rule not in RULES:
            raise InvalidInputError(f"unknown rule tag {self.rule!r}")
        if self.classification == PRESERVED_IF_SPEED_BELOW and not (
            self.bound is not None and self.bound > 0
        ):
            raise InvalidInputError("conditional verdicts need a positive bound")

    def to_payload(self) -> dict:
        out = {
            "edge": list(self.edge),
            "class": self.classification,
            "rule": self.rule,
        }
        if self.bound is not None:
            out["bound"] = float(self.bound)
        return out


@dataclass(frozen=True)
class SafetyCertificate:
    scenario_id: str
    verdicts: tuple
    global_bound: float = None  # min conditional bound; None if any NoGuarantee
    unbounded: bool = False  # True when every link is unconditional
    assumptions: tuple = ()
    notes: tuple = ()

    def to_payload(self) -> dict:
        return {
            "scenario_id": self.scenario_id,
            "verdicts": [v.to_payload() for v in self.verdicts],
            "global_bound": None if self.global_bound is None else float(self.global_bound),
            "unbounded": self.unbounded,
            "assumptions": list(self.assumptions),
            "notes": list(self.notes),
        }

    def allows_speed(self, speed: float) -> bool:
        """Whether ``speed`` is within every certified bound (False if uncertified)."""
        if self.unbounded:
            return True
        if self.global_bound is None:
            return False
        return speed <= self.global_bound


def complete_graph_bound(n: int, radius: float, model: InfluenceModel) -> float:
    """Largest certified |u| on a complete graph: n R uniform, n/(n-1) R scaled."""
    if n < 2:
        raise InvalidInputError("complete-graph bound needs n >= 2")
    if not (radius > 0):
        raise InvalidInputError("radius must be positive")
    if model == InfluenceModel.UNIFORM:
        return n * radius
    return n / (n - 1) * radius


def _link_counts(g: VisibilityGraph, leaders: LeaderSet, i: int, j: int) -> dict:
    adj = g.neighbor_lists()
    mem = leaders.members
    common = adj[i] & adj[j]
    return {
        "n_i": len(adj[i]),
        "n_j": len(adj[j]),
        "common_f": sum(1 for v in common if v not in mem),
        "common_l": sum(1 for v in common if v in mem),
        "i_leaders": sum(1 for v in adj[i] if v in mem),
        "i_followers": sum(1 for v in adj[i] if v not in mem),
        "j_leaders": sum(1 for v in adj[j] if v in mem),
        "j_followers": sum(1 for v in adj[j] if v not in mem),
    }


def link_condition_uniform(
    g: VisibilityGraph, leaders: LeaderSet, i: int, j: int
) -> LinkVerdict:
    """Per-link condition for uniform weights on any connected graph.

    Same-role links survive any command when the endpoints' degrees are
    covered three times over by their shared neighborhood; a
    leader-follower link additionally spends the margin on speed:
    |u| <= (3*common - degree sum) * R.
    """
    e = (min(i, j), max(i, j))
    if e not in g.edges:
        raise InvalidInputError(f"edge {e} not present")
    leaders.validate(g.n)
    c = _link_counts(g, leaders, i, j)
    margin = 3 * (c["common_f"] + c["common_l"]) - (c["n_i"] + c["n_j"])
    same_role = ((i in leaders.members) == (j in leaders.members))
    if same_role:
        if margin >= 0:
            return LinkVerdict(e, PRESERVED_UNCONDITIONALLY, rule="incomplete-uniform-link")
        return LinkVerdict(e, NO_GUARANTEE, rule="incomplete-uniform-link")
    if margin > 0:
        return LinkVerdict(
            e, PRESERVED_IF_SPEED_BELOW, bound=margin * g.radius,
            rule="incomplete-uniform-link",
        )
    return LinkVerdict(e, NO_GUARANTEE, rule="incomplete-uniform-link")


def _complete_within(g: VisibilityGraph, group) -> bool:
    group = sorted(group)
    for a in range(len(group)):
        for b in range(a + 1, len(group)):
            if not g.has_edge(group[a], group[b]):
                return False
    return True


def subgraph_complete_case(
    g: VisibilityGraph, leaders: LeaderSet, i: int, j: int, radius: float
) -> LinkVerdict:
    """Per-link condition when leaders and followers each form complete subgraphs.

    Applies to uniform weights only. Follower and leader pairs survive when
    their cross-role attachments are covered by the own-role clique plus
    shared cross-role neighbors. A leader-follower link needs a positive
    shared-degree margin ``n(follower->leaders) + n(leader->followers) - n/2``
    and then certifies |u| <= 2R * margin.
    """
    e = (min(i, j), max(i, j))
    if e not in g.edges:
        raise InvalidInputError(f"edge {e} not present")
    leaders.validate(g.n)
    mem = leaders.members
    followers = [v for v in range(g.n) if v not in mem]
    if not _complete_within(g, followers) or not _complete_within(g, sorted(mem)):
        raise NotApplicableError(
            "rule needs complete follower and leader subgraphs"
        )
    c = _link_counts(g, leaders, i, j)
    n_f = len(followers)
    n_l = len(mem)
    i_lead = i in mem
    j_lead = j in mem
    if not i_lead and not j_lead:
        ok = c["i_leaders"] + c["j_leaders"] <= n_f + 3 * c["common_l"]
        cls = PRESERVED_UNCONDITIONALLY if ok else NO_GUARANTEE
        return LinkVerdict(e, cls, rule="complete-subgraphs-same-role")
    if i_lead and j_lead:
        ok = c["i_followers"] + c["j_followers"] <= n_l + 3 * c["common_f"]
        cls = PRESERVED_UNCONDITIONALLY if ok else NO_GUARANTEE
        return LinkVerdict(e, cls, rule="complete-subgraphs-same-role")
    fol, led = (i, j) if j_lead else (j, i)
    adj = g.neighbor_lists()
    fol_leaders = sum(1 for v in adj[fol] if v in mem)
    led_followers = sum(1 for v in adj[led] if v not in mem)
    margin = fol_leaders + led_followers - g.n / 2
    if margin > 0:
        return LinkVerdict(
            e, PRESERVED_IF_SPEED_BELOW, bound=2 * radius * margin,
            rule="complete-subgraphs-l2f",
        )
    return LinkVerdict(e, NO_GUARANTEE, rule="complete-subgraphs-l2f")


def _chain_structure(g: VisibilityGraph, leaders: LeaderSet):
    """Return (leader, leading_follower, other_followers) or None."""
    if leaders.count != 1 or g.n < 3:
        return None
    led = next(iter(leaders.members))
    adj = g.neighbor_lists()
    if len(adj[led]) != 1:
        return None
    lead_fol = next(iter(adj[led]))
    followers = [v for v in range(g.n) if v != led]
    if not _complete_within(g, followers):
        return None
    # Leader must touch nothing else; already guaranteed by degree 1.
    others = [v for v in followers if v != lead_fol]
    return led, lead_fol, others


def chain_guarantee(
    n: int, radius: float, model: InfluenceModel, x0, y0
) -> SafetyCertificate:
    """Certificate for a single leader hanging off a complete follower clique.

    The leader is the last agent, attached only to the leading follower
    (second to last). Both models certify |u| <= n/(n-1) R, differing in
    how tightly the leading follower must initially hold the others:
    strictly within R/(n-1) under uniform weights, merely within R under
    scaled weights.
    """
    x0 = np.asarray(x0, dtype=float)
    y0 = np.asarray(y0, dtype=float)
    if x0.shape != (n,) or y0.shape != (n,):
        raise InvalidInputError("x0/y0 must be length-n")
    g = build_visibility_graph(np.column_stack([x0, y0]), radius)
    leaders = LeaderSet.of([n - 1])
    structure = _chain_structure(g, leaders)
    if structure is None or structure[0] != n - 1 or structure[1] != n - 2:
        raise NotApplicableError(
            "chain rule needs the last agent linked only to the one before it, "
            "with all other agents mutually in range"
        )
    led, lead_fol, others = structure
    rule = "chain-uniform" if model == InfluenceModel.UNIFORM else "chain-scaled"
    spacing_cap = radius / (n - 1) if model == InfluenceModel.UNIFORM else radius

    dist = lambda a, b: math.hypot(x0[a] - x0[b], y0[a] - y0[b])
    premises_ok = dist(led, lead_fol) < radius and all(
        dist(lead_fol, i) < spacing_cap for i in others
    )
    bound = n / (n - 1) * radius

    verdicts = []
    for e in sorted(g.edges):
        a, b = e
        if led in e:
            cls = PRESERVED_IF_SPEED_BELOW if premises_ok else NO_GUARANTEE
            verdicts.append(
                LinkVerdict(e, cls, bound=bound if premises_ok else None, rule=rule)
            )
        elif lead_fol in e:
            cls = PRESERVED_IF_SPEED_BELOW if premises_ok else NO_GUARANTEE
            verdicts.append(
                LinkVerdict(e, cls, bound=bound if premises_ok else None, rule=rule)
            )
        else:
            verdicts.append(LinkVerdict(e, PRESERVED_UNCONDITIONALLY, rule=rule))
    assumptions = [
        "single leader attached to one follower; followers mutually in range",
        f"initial spacing premise {'holds' if premises_ok else 'fails'} "
        f"(leading follower within {spacing_cap:g} of the others)",
    ]
    return _assemble(
        "chain", verdicts, assumptions=assumptions, notes=()
    )


def _better(a: LinkVerdict, b: LinkVerdict) -> LinkVerdict:
    ranks = {NO_GUARANTEE: 0, PRESERVED_IF_SPEED_BELOW: 1, PRESERVED_UNCONDITIONALLY: 2}
    if ranks[a.classification] != ranks[b.classification]:
        return a if ranks[a.classification] > ranks[b.classification] else b
    if a.classification == PRESERVED_IF_SPEED_BELOW:
        return a if a.bound >= b.bound else b
    return a


def _assemble(scenario_id, verdicts, assumptions=(), notes=()) -> SafetyCertificate:
    any_none = any(v.classification == NO_GUARANTEE for v in verdicts)
    bounds = [v.bound for v in verdicts if v.classification == PRESERVED_IF_SPEED_BELOW]
    if any_none:
        global_bound, unbounded = None, False
    elif bounds:
        global_bound, unbounded = min(bounds), False
    else:
        global_bound, unbounded = None, True
    return SafetyCertificate(
        scenario_id=scenario_id,
        verdicts=tuple(verdicts),
        global_bound=global_bound,
        unbounded=unbounded,
        assumptions=tuple(assumptions),
        notes=tuple(notes),
    )


def certify(
    g: VisibilityGraph,
    leaders: LeaderSet,
    model: InfluenceModel,
    positions=None,
    scenario_id: str = "",
) -> SafetyCertificate:
    """Best available verdict for every current link.

    Rules are tried from most to least specific -- complete graph, single
    leader chain (needs positions for its spacing premises), complete
    leader/follower subgraphs, then the general uniform per-link theorem --
    and each link keeps the strongest verdict. Scaled weights on a general
    incomplete graph admit no rule and certify nothing.
    """
    leaders.validate(g.n)
    mem = leaders.members
    radius = g.radius
    n = g.n
    assumptions = []
    notes = []

    best = {}

    def offer(verdict: LinkVerdict):
        e = verdict.edge
        best[e] = _better(best[e], verdict) if e in best else verdict

    if g.is_complete() and n >= 2:
        assumptions.append("graph complete at t=0")
        bound = complete_graph_bound(n, radius, model)
        l2f_rule = (
            "complete-uniform-l2f"
            if model == InfluenceModel.UNIFORM
            else "complete-scaled-l2f"
        )
        for e in sorted(g.edges):
            i, j = e
            if (i in mem) == (j in mem):
                offer(LinkVerdict(e, PRESERVED_UNCONDITIONALLY, rule="complete-same-role"))
            else:
                offer(
                    LinkVerdict(e, PRESERVED_IF_SPEED_BELOW, bound=bound, rule=l2f_rule)
                )

    structure = _chain_structure(g, leaders)
    if structure is not None and positions is not None:
        led, lead_fol, others = structure
        pos = np.asarray(positions, dtype=float)
        spacing_cap = radius / (n - 1) if model == InfluenceModel.UNIFORM else radius
        rule = "chain-uniform" if model == InfluenceModel.UNIFORM else "chain-scaled"
        dist = lambda a, b: math.hypot(*(pos[a] - pos[b]))
        premises_ok = dist(led, lead_fol) < radius and all(
            dist(lead_fol, i) < spacing_cap for i in others
        )
        assumptions.append(
            f"single-leader chain detected; spacing premise "
            f"{'holds' if premises_ok else 'fails'}"
        )
        if premises_ok:
            bound = n / (n - 1) * radius
            for e in sorted(g.edges):
                if led in e or lead_fol in e:
                    offer(LinkVerdict(e, PRESERVED_IF_SPEED_BELOW, bound=bound, rule=rule))
                else:
                    offer(LinkVerdict(e, PRESERVED_UNCONDITIONALLY, rule=rule))

    followers = [v for v in range(n) if v not in mem]
    if (
        model == InfluenceModel.UNIFORM
        and mem
        and followers
        and _complete_within(g, followers)
        and _complete_within(g, sorted(mem))
    ):
        assumptions.append("leaders and followers each form complete subgraphs")
        for e in sorted(g.edges):
            offer(subgraph_complete_case(g, leaders, e[0], e[1], radius))

    if model == InfluenceModel.UNIFORM:
        for e in sorted(g.edges):
            offer(link_condition_uniform(g, leaders, e[0], e[1]))
    elif not g.is_complete():
        notes.append(RULES["scaled-rate-note"])
        for e in sorted(g.edges):
            offer(LinkVerdict(e, NO_GUARANTEE, rule="scaled-incomplete-open"))

    verdicts = [best[e] for e in sorted(best)]
    return _assemble(scenario_id or "certificate", verdicts, assumptions, notes)


def certify_scenario(sc) -> SafetyCertificate:
    """Certificate for a scenario's first interval.

    Uses the initial positions (drawing random ones exactly as the run
    would) and the first scheduled broadcast's leader set; probabilistic
    detection is sampled from the same seed stream the runner uses.
    """
    from .simulate import SeedStream, sample_leaders

    sc.validate()
    seed = sc.resolved_seed()
    stream = SeedStream(seed)
    pos = sc.initial_positions(stream.generator(0))
    g = build_visibility_graph(pos, sc.radius)
    if sc.schedule:
        entry = sc.schedule[0]
        if entry.leaders is not None:
            leaders = LeaderSet.of(entry.leaders)
        else:
            leaders = sample_leaders(sc.n, entry.detect_prob, stream.next_generator())
    else:
        leaders = LeaderSet.empty()
    cert = certify(
        g, leaders, sc.model, positions=pos, scenario_id=sc.name or f"run-{seed}"
    )
    return cert
