"""Randomized property suite behind the ``verify`` CLI subcommand.

Each check draws its own instances from a named child of the master seed,
runs ``trials`` cases, and reports pass/fail counts. ``trials=0`` makes
every check vacuously pass.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .asymptotics import (
    LeaderSet,
    collective_speed_beta,
    deviation_gamma,
    find_equivalent_agents,
)
from .graphs import (
    InfluenceModel,
    VisibilityGraph,
    connected_components,
    laplacian,
    normalized_laplacian,
)
from .random_graphs import (
    complete_positions,
    random_connected_graph,
    random_graph,
    random_leaders,
)
from .safety import complete_graph_bound
from .simulate import (
    IntervalSpec,
    Scenario,
    ScheduleEntry,
    SwarmState,
    exact_state,
    integrate_many,
    run_scenario,
)
from .spectral import (
    butler_bound_check,
    interlacing_check,
    normalized_spectrum,
    scaled_spectrum,
    spectrum,
    uniform_spectrum,
)


@dataclass
class CheckResult:
    name: str
    passed: int
    failed: int
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.failed == 0


def _rng(seed: int, name: str) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(abs(hash(name)) % 2**31,))
    return np.random.Generator(np.random.Philox(ss))


def _count(name, cases) -> CheckResult:
    passed = failed = 0
    first_failure = ""
    for ok, detail in cases:
        if ok:
            passed += 1
        else:
            failed += 1
            if not first_failure:
                first_failure = detail
    return CheckResult(name=name, passed=passed, failed=failed, detail=first_failure)


# -- individual checks -----------------------------------------------------


def check_row_sums(seed, trials):
    rng = _rng(seed, "row-sums")

    def cases():
        for _ in range(trials):
            g = random_connected_graph(rng)
            for model in InfluenceModel:
                s = np.abs(laplacian(g, model).sum(axis=1)).max()
                yield s < 1e-12, f"row sum {s:.2e} on n={g.n}"

    return _count("laplacian-row-sums", cases())


def check_zero_multiplicity(seed, trials):
    rng = _rng(seed, "zero-multiplicity")

    def cases():
        for _ in range(trials):
            g = random_graph(rng)
            lam = uniform_spectrum(g).eigenvalues
            zeros = int(np.sum(np.abs(lam) < 1e-8))
            comps = len(connected_components(g))
            yield zeros == comps, f"{zeros} zero modes vs {comps} components"

    return _count("zero-multiplicity-vs-components", cases())


def check_scaled_identity(seed, trials):
    rng = _rng(seed, "scaled-identity")

    def cases():
        for _ in range(trials):
            g = random_connected_graph(rng)
            d = g.degree_vector().astype(float)
            lhs = laplacian(g, InfluenceModel.SCALED)
            rhs = laplacian(g, InfluenceModel.UNIFORM) / d[:, None]
            yield np.abs(lhs - rhs).max() < 1e-14, "scaled Laplacian mismatch"

    return _count("scaled-laplacian-identity", cases())


def check_gamma_similarity(seed, trials):
    rng = _rng(seed, "gamma-similarity")

    def cases():
        for _ in range(trials):
            g = random_connected_graph(rng)
            d = np.sqrt(g.degree_vector().astype(float))
            ls = laplacian(g, InfluenceModel.SCALED)
            gam = normalized_laplacian(g)
            sim = d[:, None] * ls / d[None, :]
            yield np.abs(sim - gam).max() < 1e-12, "similarity transform mismatch"

    return _count("normalized-similarity", cases())


def check_eig_residuals(seed, trials):
    rng = _rng(seed, "residuals")

    def cases():
        for _ in range(trials):
            g = random_connected_graph(rng)
            for model in InfluenceModel:
                L = laplacian(g, model)
                dec = spectrum(g, model)
                resid = np.abs(
                    L @ dec.right_vectors - dec.right_vectors * dec.eigenvalues
                ).max()
                bound = 1e-8 * (1 + np.abs(L).max())
                yield resid < bound, f"residual {resid:.2e}"
                bi = np.abs(
                    dec.left_vectors_t @ dec.right_vectors - np.eye(g.n)
                ).max()
                yield bi < 1e-9, f"biorthogonality {bi:.2e}"

    return _count("eigen-residuals", cases())


def check_spectra_agree(seed, trials):
    rng = _rng(seed, "spectra-agree")

    def cases():
        for _ in range(trials):
            g = random_connected_graph(rng)
            a = scaled_spectrum(g).eigenvalues
            b = normalized_spectrum(g).eigenvalues
            yield np.abs(a - b).max() < 1e-9, "scaled vs normalized spectra differ"

    return _count("scaled-equals-normalized-spectrum", cases())


def check_lambda2_ordering(seed, trials):
    rng = _rng(seed, "lambda2")

    def cases():
        for _ in range(trials):
            g = random_connected_graph(rng)
            lu = uniform_spectrum(g).eigenvalues[1]
            ls = scaled_spectrum(g).eigenvalues[1]
            yield ls <= lu + 1e-9, f"lambda2 scaled {ls:.4f} > uniform {lu:.4f}"

    return _count("lambda2-scaled-below-uniform", cases())


def check_normalized_ceiling(seed, trials):
    rng = _rng(seed, "ceiling")

    def cases():
        for _ in range(trials):
            g = random_connected_graph(rng)
            lam = normalized_spectrum(g).eigenvalues
            yield lam.max() <= 2 + 1e-9, f"normalized eigenvalue {lam.max():.6f} > 2"
            yield abs(lam.sum() - g.n) < 1e-9, "normalized eigenvalue sum != n"

    return _count("normalized-ceiling-and-sum", cases())


def check_interlacing(seed, trials):
    rng = _rng(seed, "interlacing")

    def cases():
        done = 0
        while done < trials:
            g = random_connected_graph(rng, extra=0.5)
            candidates = [
                e
                for e in sorted(g.edges)
                if min(
                    VisibilityGraph(
                        n=g.n, edges=g.edges - {e}, radius=g.radius
                    ).degree_vector()
                )
                >= 1
            ]
            if not candidates:
                continue
            e = candidates[int(rng.integers(0, len(candidates)))]
            rep = interlacing_check(g, e)
            yield rep.standard_interlaces, "standard interlacing failed"
            yield rep.trace_identity, "trace identity failed"
            yield rep.normalized_two_sided, "normalized two-sided bound failed"
            done += 1

    return _count("edge-deletion-interlacing", cases())


def check_butler(seed, trials):
    rng = _rng(seed, "butler")

    def cases():
        for _ in range(trials):
            g = random_connected_graph(rng)
            yield butler_bound_check(g), f"degree sandwich failed on n={g.n}"

    return _count("degree-sandwich", cases())


def check_zero_sums(seed, trials):
    rng = _rng(seed, "zero-sums")

    def cases():
        for _ in range(trials):
            g = random_connected_graph(rng)
            leaders = random_leaders(rng, g.n)
            gu = deviation_gamma(g, InfluenceModel.UNIFORM, leaders)
            yield abs(gu.sum()) < 1e-9, f"uniform deviation sum {gu.sum():.2e}"
            gs = deviation_gamma(g, InfluenceModel.SCALED, leaders)
            w = g.degree_vector().astype(float) @ gs
            yield abs(w) < 1e-9, f"scaled weighted sum {w:.2e}"

    return _count("deviation-zero-sums", cases())


def check_equivalence_gamma(seed, trials):
    rng = _rng(seed, "equivalence")

    def cases():
        for _ in range(trials):
            g = random_connected_graph(rng, n=int(rng.integers(3, 8)))
            leaders = random_leaders(rng, g.n)
            classes = find_equivalent_agents(g, leaders)
            for model in InfluenceModel:
                gam = deviation_gamma(g, model, leaders)
                spread = max(
                    (gam[c].max() - gam[c].min()) for c in classes
                )
                yield spread < 1e-9, f"class spread {spread:.2e}"

    return _count("equivalent-agents-equal-deviation", cases())


def check_complete_structure(seed, trials):
    rng = _rng(seed, "complete-structure")

    def cases():
        for _ in range(trials):
            n = int(rng.integers(3, 10))
            g = VisibilityGraph(
                n=n, edges=frozenset((i, j) for i in range(n) for j in range(i + 1, n))
            )
            leaders = random_leaders(rng, n, allow_all=False)
            mem = sorted(leaders.members)
            fol = [v for v in range(n) if v not in leaders.members]
            gu = deviation_gamma(g, InfluenceModel.UNIFORM, leaders)
            gs = deviation_gamma(g, InfluenceModel.SCALED, leaders)
            yield np.ptp(gu[mem]) < 1e-9 and np.ptp(gu[fol]) < 1e-9, "unequal roles"
            yield gu[mem[0]] * gu[fol[0]] < 0, "role deviations not opposite"
            yield np.abs(gs - (n - 1) * gu).max() < 1e-9, "scaled != (n-1) * uniform"

    return _count("complete-graph-deviation-structure", cases())


def check_conservation(seed, trials):
    rng = _rng(seed, "conservation")

    def cases():
        for _ in range(trials):
            g = random_connected_graph(rng, n=int(rng.integers(2, 9)))
            leaders = random_leaders(rng, g.n)
            u = rng.uniform(-2, 2, size=2)
            x0 = rng.uniform(-5, 5, size=g.n)
            y0 = rng.uniform(-5, 5, size=g.n)
            for model in InfluenceModel:
                spec = IntervalSpec(0.0, u, leaders, g, model)
                for tau in (0.5, 2.0, 5.0):
                    st = exact_state(spec, x0, y0, tau)
                    if model == InfluenceModel.UNIFORM:
                        drift = abs(
                            st.x.sum() - leaders.count * u[0] * tau - x0.sum()
                        )
                    else:
                        d = g.degree_vector().astype(float)
                        b = leaders.indicator(g.n)
                        drift = abs(d @ st.x - (d @ b) * u[0] * tau - d @ x0)
                    yield drift < 1e-6, f"conservation drift {drift:.2e}"

    return _count("per-interval-conservation", cases())


def check_exact_vs_rk4(seed, trials):
    rng = _rng(seed, "exact-vs-rk4")

    def cases():
        for _ in range(trials):
            g = random_connected_graph(rng, n=int(rng.integers(2, 9)))
            leaders = random_leaders(rng, g.n)
            u = rng.uniform(-2, 2, size=2)
            x0 = rng.uniform(-5, 5, size=g.n)
            y0 = rng.uniform(-5, 5, size=g.n)
            for model in InfluenceModel:
                spec = IntervalSpec(0.0, u, leaders, g, model)
                st0 = SwarmState(0.0, x0.copy(), y0.copy(), leaders, u)
                num = integrate_many(st0, spec, 1e-3, 5000)
                ex = exact_state(spec, x0, y0, 5.0)
                err = max(np.abs(num.x - ex.x).max(), np.abs(num.y - ex.y).max())
                yield err < 1e-6, f"propagator vs RK4 error {err:.2e}"

    return _count("exact-vs-rk4", cases())


def check_monotone_shrink(seed, trials):
    rng = _rng(seed, "monotone")

    def cases():
        for _ in range(trials):
            n = int(rng.integers(3, 8))
            radius = 10.0
            pos = complete_positions(rng, n, radius)
            leaders = random_leaders(rng, n, allow_all=False)
            model = InfluenceModel.UNIFORM if rng.random() < 0.5 else InfluenceModel.SCALED
            u = rng.uniform(-1, 1, size=2) * complete_graph_bound(n, radius, model)
            g = VisibilityGraph(
                n=n,
                edges=frozenset((i, j) for i in range(n) for j in range(i + 1, n)),
                radius=radius,
            )
            spec = IntervalSpec(0.0, u, leaders, g, model)
            mem = sorted(leaders.members)
            fol = [v for v in range(n) if v not in leaders.members]
            prev = None
            ok = True
            for tau in np.linspace(0.0, 3.0, 31):
                st = exact_state(spec, pos[:, 0], pos[:, 1], float(tau))
                dists = []
                for group in (mem, fol):
                    for a in range(len(group)):
                        for b in range(a + 1, len(group)):
                            i, j = group[a], group[b]
                            dists.append(
                                np.hypot(st.x[i] - st.x[j], st.y[i] - st.y[j])
                            )
                cur = np.asarray(dists)
                if prev is not None and np.any(cur > prev + 1e-9):
                    ok = False
                prev = cur
            yield ok, "same-role distance grew on a complete graph"

    return _count("complete-same-role-monotone-shrink", cases())


def check_chain_contraction(seed, trials):
    rng = _rng(seed, "chain")

    def cases():
        for _ in range(trials):
            n = int(rng.integers(4, 8))
            radius = 10.0
            # followers clustered tightly, leader hanging off the last follower
            pos = complete_positions(rng, n - 1, radius / (n - 1))
            lead_pos = pos[n - 2] + np.array([0.8 * radius, 0.0])
            pos = np.vstack([pos, lead_pos])
            edges = {(i, j) for i in range(n - 1) for j in range(i + 1, n - 1)}
            edges.add((n - 2, n - 1))
            g = VisibilityGraph(n=n, edges=frozenset(edges), radius=radius)
            leaders = LeaderSet.of([n - 1])
            u = np.array([n / (n - 1) * radius * 0.9, 0.0])
            for model, rate in (
                (InfluenceModel.UNIFORM, 2.0 * (n - 1)),
                (InfluenceModel.SCALED, 2.0 * (n - 1) / (n - 2)),
            ):
                spec = IntervalSpec(0.0, u, leaders, g, model)
                tau = 0.4
                st = exact_state(spec, pos[:, 0], pos[:, 1], tau)
                ok = True
                for a in range(n - 2):
                    for b in range(a + 1, n - 2):
                        d0 = np.sum((pos[a] - pos[b]) ** 2)
                        dt_ = (st.x[a] - st.x[b]) ** 2 + (st.y[a] - st.y[b]) ** 2
                        want = np.exp(-rate * tau) * d0
                        if d0 > 1e-12 and abs(dt_ - want) > 1e-6 * max(d0, 1.0):
                            ok = False
                yield ok, f"chain contraction rate off for {model.value}"

    return _count("single-leader-chain-contraction", cases())


def check_beta_vs_slope(seed, trials):
    rng = _rng(seed, "beta-slope")

    def cases():
        for _ in range(trials):
            g = random_connected_graph(rng, n=int(rng.integers(3, 10)))
            leaders = random_leaders(rng, g.n)
            x0 = rng.uniform(-5, 5, size=g.n)
            y0 = rng.uniform(-5, 5, size=g.n)
            for model in InfluenceModel:
                beta = collective_speed_beta(g, model, leaders)
                lam2 = spectrum(g, model).eigenvalues[1]
                spec = IntervalSpec(0.0, np.array([1.0, 0.0]), leaders, g, model)
                ts = np.linspace(30 / lam2, 60 / lam2, 12)
                means = [exact_state(spec, x0, y0, float(t)).x.mean() for t in ts]
                slope = np.polyfit(ts, means, 1)[0]
                yield abs(slope - beta) <= 1e-3 * max(abs(beta), 1e-12), (
                    f"slope {slope:.6f} vs beta {beta:.6f}"
                )

    return _count("collective-speed-vs-slope", cases())


def check_preservation_soundness(seed, trials):
    rng = _rng(seed, "preservation")

    def cases():
        for k in range(trials):
            n = int(rng.integers(3, 8))
            radius = 50.0
            model = InfluenceModel.UNIFORM if k % 2 == 0 else InfluenceModel.SCALED
            pos = complete_positions(rng, n, radius)
            leaders = random_leaders(rng, n, allow_all=False)
            bound = complete_graph_bound(n, radius, model)
            ang = rng.uniform(0, 2 * np.pi)
            u = 0.95 * bound * np.array([np.cos(ang), np.sin(ang)])
            sc = Scenario(
                n=n,
                radius=radius,
                model=model,
                seed=int(rng.integers(0, 2**31)),
                positions=pos,
                horizon=20.0,
                sample_dt=0.05,
                schedule=[
                    ScheduleEntry(t=0.0, u=tuple(u), leaders=tuple(leaders.sorted()))
                ],
            )
            log = run_scenario(sc)
            lost = log.events_of("LinkLost")
            yield not lost, f"lost {len(lost)} links below the bound"

    return _count("complete-graph-preservation", cases())


ALL_CHECKS = [
    check_row_sums,
    check_zero_multiplicity,
    check_scaled_identity,
    check_gamma_similarity,
    check_eig_residuals,
    check_spectra_agree,
    check_lambda2_ordering,
    check_normalized_ceiling,
    check_interlacing,
    check_butler,
    check_zero_sums,
    check_equivalence_gamma,
    check_complete_structure,
    check_conservation,
    check_exact_vs_rk4,
    check_monotone_shrink,
    check_chain_contraction,
    check_beta_vs_slope,
    check_preservation_soundness,
]


def run_all(seed: int = 0, trials: int = 20) -> list:
    return [chk(seed, trials) for chk in ALL_CHECKS]
