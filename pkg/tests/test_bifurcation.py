import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_signed
from hopfnet import spectral
from hopfnet.analysis import circular_distance
from hopfnet.bifurcation import (
    BifurcationError,
    Criticality,
    Reason,
    Verdict,
    check_assumption1,
    classify_graphs,
    compute_K,
    critical_attention,
    criticality,
    hopf_coefficient_b,
    hopf_vectors,
    normalize_hopf_eigenvectors,
    oscillation_threshold,
    predict_oscillation,
)
from hopfnet.experiments import asynchronous_graph, belief_system_graph, ring_graph
from hopfnet.params import ModelParams
from hopfnet.signed_graph import SignedGraph, complete_graph, signed_cycle, switch_graph

RING = ModelParams(d=1.0, alpha=0.1, gamma=0.1)
MULTI = ModelParams(d=1.0, alpha=0.1, gamma=0.1, beta=0.25, delta=0.25)
SINGLE = spectral.eig(np.ones((1, 1)))


def eig(g):
    return spectral.eig(g.adjacency)


def test_K_reduces_to_alpha_without_coupling(rng):
    for _ in range(5):
        sa, so = eig(random_signed(rng, 5)), eig(random_signed(rng, 3))
        assert compute_K(sa, so, ModelParams(alpha=0.37)).value == pytest.approx(0.37)


def test_K_and_u_star_for_the_ring():
    km = compute_K(eig(signed_cycle(7, {7})), SINGLE, RING)
    assert km.value == pytest.approx(0.19010, abs=1e-5)
    assert km.lam.imag > 0
    assert critical_attention(RING, km.value) == pytest.approx(5.2605, abs=1e-4)


def test_K_maximizer_is_the_cross_conjugate_pairing():
    km = compute_K(eig(asynchronous_graph()), eig(belief_system_graph()), MULTI)
    # -delta * lam_c * mu_c > 0 needs opposite imaginary signs
    assert km.lam.imag * km.mu.imag < 0
    assert km.lam.real == pytest.approx(0.8774, abs=1e-3)
    assert abs(km.lam.imag) == pytest.approx(0.7449, abs=1e-3)


def test_critical_attention_examples():
    assert critical_attention(ModelParams(d=1.0, alpha=0.5), 0.5) == 2.0
    assert critical_attention(ModelParams(d=2.0), 1.0) == 2.0
    for k in (0.0, -0.3):
        with pytest.raises(BifurcationError, match="no attention level destabilizes"):
            critical_attention(RING, k)


def test_assumption1_examples(rng):
    und = random_signed(rng, 4, symmetric=True)
    assert not check_assumption1(eig(und), eig(signed_cycle(2)), MULTI).holds
    assert check_assumption1(eig(signed_cycle(7, {7})), SINGLE, RING).holds
    decoupled = spectral.eig(np.eye(2))
    res = check_assumption1(decoupled, SINGLE, RING)
    assert not res.holds and "real" in res.reason


def test_normalization_of_the_two_ring_vectors():
    va = np.array([1, -1j]) / math.sqrt(2)
    wa = np.array([math.sqrt(2), -math.sqrt(2) * 1j])
    one = np.ones(1, dtype=complex)
    assert np.vdot(wa, va) == pytest.approx(2.0)
    vecs = normalize_hopf_eigenvectors(va, one, wa, one)
    assert np.allclose(vecs.va, va) and np.allclose(vecs.wa, wa)
    assert np.vdot(vecs.w, vecs.v) == pytest.approx(2.0)
    again = normalize_hopf_eigenvectors(vecs.va, vecs.vo, vecs.wa, vecs.wo)
    for x, y in zip((again.va, again.vo, again.wa, again.wo), (vecs.va, vecs.vo, vecs.wa, vecs.wo)):
        assert np.allclose(x, y)


def test_normalization_rejects_orthogonal_pairs():
    with pytest.raises(BifurcationError, match="defective or mispaired"):
        normalize_hopf_eigenvectors(np.array([1, 0]), np.ones(1), np.array([0, 1]), np.ones(1))


def test_seven_cycle_vectors_have_unit_norm():
    km = compute_K(eig(signed_cycle(7, {7})), SINGLE, RING)
    vecs = hopf_vectors(eig(signed_cycle(7, {7})), SINGLE, km.lam, km.mu)
    assert np.allclose(np.abs(vecs.va), 1 / math.sqrt(7))
    assert np.vdot(vecs.w, vecs.v) == pytest.approx(2.0)
    assert vecs.orthogonality_defect < 1e-10


@pytest.mark.parametrize("graph", [ring_graph(), signed_cycle(7, {7}), signed_cycle(7, {3})])
def test_b_for_seven_cycles(graph):
    rep = predict_oscillation(graph, None, RING)
    assert rep.b == pytest.approx(-0.0041, abs=0.0005)
    assert rep.criticality is Criticality.SUPERCRITICAL


def test_b_closed_form_for_the_two_ring():
    ring2 = signed_cycle(2, {2})
    for alpha, gamma in ((0.1, 1.0), (0.3, 0.5), (0.05, 2.0)):
        rep = predict_oscillation(ring2, None, ModelParams(d=1.0, alpha=alpha, gamma=gamma))
        assert rep.b == pytest.approx(-2 * alpha * (alpha**2 + gamma**2), abs=1e-12)
        assert rep.u_star == pytest.approx(1 / alpha)
        assert rep.omega == pytest.approx(gamma / alpha)
    sa = eig(ring2)
    b0 = hopf_coefficient_b(1j, 1.0, hopf_vectors(sa, SINGLE, 1j, 1.0), ModelParams(gamma=1.0))
    assert abs(b0) <= 1e-12 and criticality(b0) is Criticality.DEGENERATE


def test_criticality_thresholds():
    assert criticality(-1e-9) is Criticality.SUPERCRITICAL
    assert criticality(1e-9) is Criticality.SUBCRITICAL
    assert criticality(5e-11) is Criticality.DEGENERATE


@settings(max_examples=30, deadline=None)
@given(st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi))
def test_b_and_phase_are_gauge_invariant(theta_a, theta_o):
    ga, go = asynchronous_graph(), belief_system_graph()
    sa, so = eig(ga), eig(go)
    km = compute_K(sa, so, MULTI)
    ref = hopf_vectors(sa, so, km.lam, km.mu)
    ca, co = np.exp(1j * theta_a), np.exp(1j * theta_o)
    vecs = normalize_hopf_eigenvectors(ref.va * ca, ref.vo * co, ref.wa / np.conj(ca), ref.wo / np.conj(co))
    assert hopf_coefficient_b(km.lam, km.mu, vecs, MULTI) == pytest.approx(
        hopf_coefficient_b(km.lam, km.mu, ref, MULTI), abs=1e-14)
    # relative phases of the unnormalized product are gauge independent
    raw = np.kron(ref.va * ca, ref.vo * co)
    rel = np.mod(np.angle(raw) - np.angle(raw[0]), 2 * math.pi)
    rep = predict_oscillation(ga, go, MULTI)
    assert np.max(circular_distance(rel, rep.phase.ravel())) < 1e-10


def test_seven_cycle_prediction():
    rep = predict_oscillation(ring_graph(), None, RING)
    assert rep.available and rep.assumption1
    assert rep.u_star == pytest.approx(5.26, abs=0.01)
    assert rep.predicted_period == pytest.approx(27.53, abs=0.05)
    assert rep.predicted_period == pytest.approx(2 * math.pi / rep.omega)
    assert np.allclose(rep.phase[:, 0], [0, 3.59, 0.90, 4.49, 1.80, 5.39, 2.69], atol=0.05)
    assert np.allclose(rep.amplitude, 1.0)
    assert rep.reference == (0, 0) and rep.phase[0, 0] == 0.0


def test_report_invariants_multi_topic():
    rep = predict_oscillation(complete_graph(4), belief_system_graph(), MULTI)
    lam, mu = rep.lambda_dagger, rep.mu_dagger
    im = MULTI.gamma * lam.imag + MULTI.beta * mu.imag + MULTI.delta * (lam.real * mu.imag + lam.imag * mu.real)
    assert rep.u_star == pytest.approx(MULTI.d / rep.K)
    assert rep.omega == pytest.approx(rep.u_star * abs(im))
    assert rep.amplitude.max() == pytest.approx(1.0)
    assert np.all((rep.phase >= 0) & (rep.phase < 2 * math.pi))


def test_cooperative_agents_share_phases_per_topic():
    rep = predict_oscillation(complete_graph(4), belief_system_graph(), MULTI)
    assert np.allclose(rep.phase, rep.phase[0][None, :], atol=1e-10)
    vo = spectral.eig(belief_system_graph().adjacency).nearest(np.conj(rep.mu_dagger)).right
    expected = np.mod(np.angle(vo) - np.angle(vo[0]), 2 * math.pi)
    assert np.allclose(rep.phase[0], expected, atol=1e-10)


def test_clustered_agents_are_in_anti_phase():
    rep = predict_oscillation(switch_graph(complete_graph(4), (1, 1, -1, -1)), belief_system_graph(), MULTI)
    d = np.mod(rep.phase[2:] - rep.phase[:2], 2 * math.pi)
    assert np.allclose(d, math.pi, atol=1e-10)
    assert np.allclose(rep.phase[0], rep.phase[1]) and np.allclose(rep.phase[2], rep.phase[3])


def test_report_without_instability_is_encoded():
    rep = predict_oscillation(signed_cycle(2, {2}), None, ModelParams(gamma=1.0))
    assert rep.K == pytest.approx(0.0) and rep.u_star is None
    assert not rep.available and rep.b is None
    assert any("K <= 0" in n for n in rep.notes)
    json.dumps(rep.to_dict())


def test_degenerate_leading_set_is_reported():
    cyc = signed_cycle(3, {3})
    a = np.zeros((6, 6))
    a[:3, :3] = a[3:, 3:] = cyc.adjacency
    rep = predict_oscillation(SignedGraph(a), None, RING)
    assert not rep.assumption1 and rep.phase is None
    assert len(rep.leading) == 4
    assert any("degenerate leading set" in n for n in rep.notes)


def test_reference_moves_off_a_silent_component():
    a = np.array([[0, 0, 0, 0], [0, 0, 0, 1], [-1, -1, 0, -1], [1, 1, 1, 0]], dtype=float)
    rep = predict_oscillation(SignedGraph(a), None, RING)
    assert rep.available and rep.amplitude[0, 0] < 1e-12
    assert rep.reference != (0, 0) and rep.phase[rep.reference] == 0.0
    assert any("reference moved" in n for n in rep.notes)


def _pair_with_instability(rng):
    while True:
        ga, go = random_signed(rng, int(rng.integers(2, 6))), random_signed(rng, int(rng.integers(1, 4)))
        g = rng.uniform(0, 1, 4)
        p = ModelParams(d=float(rng.uniform(0.5, 2)), alpha=g[0], beta=g[1], gamma=g[2], delta=g[3])
        km = compute_K(eig(ga), eig(go), p)
        if km.value > 1e-3:
            return ga, go, p, km


def test_origin_stable_below_threshold_spectrally(rng):
    for _ in range(25):
        ga, go, p, km = _pair_with_instability(rng)
        u_star = critical_attention(p, km.value)
        sa, so = eig(ga), eig(go)
        for factor, sign in ((1 - 1e-3, -1), (1 + 1e-3, 1)):
            top = max(e.eta.real for e in spectral.compose_jacobian_spectrum(sa, so, p, u_star * factor,
                                                                            with_vectors=False))
            assert np.sign(top) == sign


def test_switching_covariance_of_predictions(rng):
    done = 0
    while done < 10:
        ga = random_signed(rng, int(rng.integers(3, 6)))
        rep = predict_oscillation(ga, belief_system_graph(), MULTI)
        if not rep.available:
            continue
        m = rng.choice([-1.0, 1.0], size=ga.n)
        rs = predict_oscillation(switch_graph(ga, m), belief_system_graph(), MULTI)
        assert rs.u_star == pytest.approx(rep.u_star, abs=1e-10)
        assert rs.b == pytest.approx(rep.b, abs=1e-10)
        assert np.allclose(rs.amplitude, rep.amplitude, atol=1e-10)
        done += 1


# ----------------------------------------------------------------- classification

def test_classify_undirected_pairs(rng):
    for _ in range(10):
        ga = random_signed(rng, int(rng.integers(2, 7)), symmetric=True)
        go = random_signed(rng, int(rng.integers(1, 5)), symmetric=True)
        cls = classify_graphs(ga, go, MULTI)
        assert (cls.verdict, cls.reason) == (Verdict.NEVER_OSCILLATES, Reason.UNDIRECTED_PAIR)
    swap = signed_cycle(2)
    cls = classify_graphs(swap, swap, MULTI)
    assert (cls.verdict, cls.reason) == (Verdict.NEVER_OSCILLATES, Reason.UNDIRECTED_PAIR)


def test_classify_both_eventually_balanced():
    directed = SignedGraph([[0, 1, 1], [1, 0, 1], [0, 1, 0]])
    hidden = switch_graph(directed, (1, -1, 1))
    cls = classify_graphs(switch_graph(complete_graph(4), (1, -1, -1, 1)), hidden, MULTI)
    assert (cls.verdict, cls.reason) == (Verdict.NEVER_OSCILLATES, Reason.BOTH_EVENTUALLY_BALANCED)
    rng = np.random.default_rng(0)
    sa, so = eig(complete_graph(4)), eig(hidden)
    for g in rng.uniform(0, 1, size=(20, 4)):
        p = ModelParams(alpha=g[0], beta=g[1], gamma=g[2], delta=g[3])
        assert not check_assumption1(sa, so, p).holds


def test_classify_supports_with_gamma_star():
    cls = classify_graphs(complete_graph(4), belief_system_graph(), MULTI)
    assert cls.verdict is Verdict.SUPPORTS_OSCILLATIONS
    assert cls.reason is Reason.THRESHOLD_MET
    gamma_star = cls.thresholds["gamma_star"]
    assert math.isfinite(gamma_star) and MULTI.gamma > gamma_star
    assert cls.generating_pair[0] == pytest.approx(3.0)
    assert cls.generating_pair[1].imag > 0
    json.dumps(cls.to_dict())


def test_classify_supports_with_beta_star():
    cls = classify_graphs(ring_graph(), complete_graph(3), MULTI)
    assert cls.verdict is Verdict.SUPPORTS_OSCILLATIONS
    assert "beta_star" in cls.thresholds


def test_classify_threshold_not_met_without_cross_gains():
    cls = classify_graphs(complete_graph(4), belief_system_graph(), ModelParams(alpha=0.1, gamma=0.1))
    assert cls.verdict is Verdict.SUPPORTS_OSCILLATIONS
    assert cls.reason is Reason.THRESHOLD_AVAILABLE and cls.notes


def test_classify_indeterminate():
    cls = classify_graphs(ring_graph(), belief_system_graph(), MULTI)
    assert (cls.verdict, cls.reason) == (Verdict.INDETERMINATE, Reason.NO_CRITERION)
    assert cls.generating_pair is None


def test_supported_pairs_oscillate_above_threshold():
    # gamma above gamma* makes the indecision-breaking bifurcation a Hopf point
    for gamma in (0.05, 0.1, 0.5):
        p = ModelParams(d=1, alpha=0.1, gamma=gamma, beta=0.25, delta=0.25)
        cls = classify_graphs(complete_graph(4), belief_system_graph(), p)
        rep = predict_oscillation(complete_graph(4), belief_system_graph(), p)
        assert gamma > cls.thresholds["gamma_star"] and rep.assumption1


def _threshold_grid(sb, sc, p, which):
    """Direct evaluation of the max over the spectrum grid."""
    rho = max(sb.values, key=abs).real
    kappa = max(sc.values, key=lambda z: (z.real, z.imag))
    other = p.beta if which == "gamma" else p.gamma
    vals = [-(other * (kappa - y).real + p.delta * (kappa * rho - y * x).real) / (rho - x.real)
            for x in sb.values if abs(x - rho) > 1e-8 for y in sc.values]
    return max(vals)


def test_threshold_formula_against_grid():
    sb, sc = eig(complete_graph(4)), eig(belief_system_graph())
    for beta, delta in ((0.25, 0.25), (0.0, 0.4), (1.0, 0.0)):
        p = ModelParams(alpha=0.1, gamma=0.1, beta=beta, delta=delta)
        assert oscillation_threshold(sb, sc, p, "gamma") == pytest.approx(_threshold_grid(sb, sc, p, "gamma"))
    assert oscillation_threshold(sb, sc, ModelParams(alpha=0.1), "gamma") == 0.0


def test_threshold_with_real_balanced_spectrum_and_beta_zero():
    sb = spectral.eig(np.array([[0, 2, 1], [1, 0, 1], [1, 1, 0]], dtype=float))
    assert np.all(np.abs(sb.values.imag) < 1e-12)
    sc = eig(belief_system_graph())
    p = ModelParams(alpha=0.1, gamma=0.1, delta=0.3)
    assert oscillation_threshold(sb, sc, p, "gamma") == pytest.approx(_threshold_grid(sb, sc, p, "gamma"))


@pytest.mark.parametrize("beta, delta", [(0.0, 2.0), (0.1, 2.0), (0.0, 0.3)])
def test_threshold_separates_leading_pairings(beta, delta):
    # independent of the closed form: scan gamma and find which eigenvalue
    # pairing maximizes Re(alpha + gamma*lam + beta*mu + delta*lam*mu)
    sb = spectral.eig(np.array([[0, 2, 1], [1, 0, 1], [1, 1, 0]], dtype=float))
    sc = eig(belief_system_graph())
    rho = max(sb.values, key=abs).real
    p = ModelParams(alpha=0.1, gamma=0.1, beta=beta, delta=delta)
    star = oscillation_threshold(sb, sc, p, "gamma")
    assert star > 0

    def led_by_rho_kappa(gamma):
        lam, mu = np.meshgrid(sb.values, sc.values, indexing="ij")
        re = (p.alpha + gamma * lam + beta * mu + delta * lam * mu).real
        i, j = np.unravel_index(np.argmax(re), re.shape)
        return abs(lam[i, j] - rho) < 1e-9 and abs(mu[i, j].imag) > 1e-9

    for gamma in np.linspace(0, 2 * star, 41):
        if abs(gamma - star) > 1e-3:
            assert led_by_rho_kappa(gamma) == (gamma > star), gamma


def test_threshold_preconditions():
    with pytest.raises(BifurcationError):
        oscillation_threshold(eig(signed_cycle(2)), eig(belief_system_graph()), MULTI, "gamma")
    with pytest.raises(BifurcationError):
        oscillation_threshold(eig(complete_graph(3)), eig(complete_graph(3)), MULTI, "gamma")
    with pytest.raises(ValueError):
        oscillation_threshold(eig(complete_graph(3)), eig(belief_system_graph()), MULTI, "delta")
