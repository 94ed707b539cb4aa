import math

import pytest
from hypothesis import given, strategies as st

from ponqkd.model import (
    SystemParams,
    TopologyPlan,
    binary_entropy,
    dark_count_qber,
    fiber_transmission,
    key_metrics,
    link_budget,
    optimal_mu,
    qber,
    secure_fraction,
    splitter_loss_equivalent_km,
    visibility_qber,
)
from oracles import bisect_zero_key_qber, brute_force_fom, h_mp

P = SystemParams()


def plan(n_users=64, n1=4, l1=15.0, l2=5.0):
    return TopologyPlan.from_split(n_users, n1, l1, l2)


# -- binary entropy --------------------------------------------------------

@pytest.mark.parametrize("x, expected", [(0.5, 1.0), (0.0, 0.0), (1.0, 0.0)])
def test_binary_entropy_trivial(x, expected):
    assert binary_entropy(x) == expected


def test_binary_entropy_matches_high_precision():
    assert binary_entropy(0.01) == pytest.approx(0.0807931358959, rel=1e-12)
    assert binary_entropy(0.01) == pytest.approx(h_mp(0.01), rel=1e-14)


@pytest.mark.parametrize("x", [-1e-9, 1.000001, math.nan])
def test_binary_entropy_domain(x):
    with pytest.raises(ValueError):
        binary_entropy(x)


@given(st.floats(0, 1))
def test_binary_entropy_symmetric_and_bounded(x):
    assert binary_entropy(x) == pytest.approx(binary_entropy(1 - x), abs=1e-12)
    assert 0 <= binary_entropy(x) <= 1


# -- optimal mu --------------------------------------------------------------

def test_optimal_mu_values():
    assert optimal_mu(0.0) == 0.5
    assert optimal_mu(0.01) == pytest.approx(0.46, abs=0.005)
    assert optimal_mu(0.04) == pytest.approx(0.34, abs=0.005)


def test_optimal_mu_rejects_high_qber():
    with pytest.raises(ValueError):
        optimal_mu(0.2)


# -- link budget ---------------------------------------------------------------

def test_fiber_transmission():
    assert fiber_transmission(SystemParams(alpha_db_per_km=0), plan()) == 1.0
    assert fiber_transmission(P, plan()) == pytest.approx(10 ** -0.5, rel=1e-14)
    assert fiber_transmission(SystemParams(alpha_db_per_km=0.2), plan()) == pytest.approx(
        0.398107170553, rel=1e-11)


def test_link_budget_example():
    b = link_budget(P, plan())
    assert b.fiber_total_km == 380
    assert b.t_total == pytest.approx(0.316227766017 / 16, rel=1e-11)
    assert b.t_total == b.t_fiber / 16
    assert b.loss_db == pytest.approx(5 + 10 * math.log10(16), rel=1e-12)


@pytest.mark.parametrize("n_users", [16, 32, 64, 128])
def test_extreme_layouts(n_users):
    t_fiber = 10 ** (-0.25 * 20 / 10)
    single = link_budget(P, plan(n_users, 1))
    assert single.t_total == t_fiber / n_users
    assert single.fiber_total_km == 15 + n_users * 5
    all_co = link_budget(P, plan(n_users, n_users))
    assert all_co.t_total == t_fiber
    assert all_co.fiber_total_km == n_users * 20


# -- QBER ---------------------------------------------------------------------

def test_qber_examples():
    assert qber(SystemParams(visibility=1, dark_rate=0), plan()) == 0.0
    assert qber(P, plan()) == pytest.approx(0.0163245553203, rel=1e-11)


def test_qber_worst_case_loss():
    t_total = 10 ** -2.5
    qd = dark_count_qber(1e-5, 0.5, 0.1, t_total)
    assert qd == pytest.approx(0.0316, abs=5e-5)
    assert visibility_qber(0.98) + qd == pytest.approx(0.04, abs=0.003)


def test_qber_decomposition():
    for n1 in (1, 2, 4, 8, 16, 32, 64):
        pl = plan(n1=n1)
        b = link_budget(P, pl)
        split = visibility_qber(P.visibility) + dark_count_qber(P.dark_rate, P.mu, P.eta, b.t_total)
        assert qber(P, pl) == pytest.approx(split, rel=1e-12)


def test_qber_monotone_in_n1():
    qs = [qber(P, plan(n1=2 ** i)) for i in range(7)]
    assert all(a > b for a, b in zip(qs, qs[1:]))
    flat = [qber(SystemParams(dark_rate=0), plan(n1=2 ** i)) for i in range(7)]
    assert len(set(flat)) == 1


def test_fiber_monotone_in_n1():
    lt = [link_budget(P, plan(n1=2 ** i)).fiber_total_km for i in range(7)]
    assert all(a < b for a, b in zip(lt, lt[1:]))


# -- secure fraction and metrics ----------------------------------------------

def test_secure_fraction_examples():
    assert secure_fraction(0.4, 0.0) == math.exp(-0.4)
    assert secure_fraction(0.4, 0.0163245553203) == pytest.approx(0.469424153765, rel=1e-10)
    q0 = bisect_zero_key_qber(0.4)
    assert q0 == pytest.approx(0.0798, abs=1e-4)
    assert abs(secure_fraction(0.4, q0)) < 1e-12
    with pytest.raises(ValueError):
        secure_fraction(0.4, 0.5)


@given(st.floats(0, 0.49), st.floats(0.01, 0.49))
def test_secure_fraction_decreasing_in_q(q, dq):
    q2 = min(q + dq, 0.4999)
    assert secure_fraction(0.4, q2) < secure_fraction(0.4, q)


@given(st.floats(0.01, 2), st.floats(0, 0.49))
def test_secure_fraction_decreasing_in_mu(mu, q):
    assert secure_fraction(mu + 0.01, q) < secure_fraction(mu, q)


def test_key_metrics_examples():
    m = key_metrics(P, plan())
    assert m.fom == pytest.approx(1.2353267204e-3, rel=1e-9)
    m1 = key_metrics(P, plan(n1=1))
    assert m1.qber == pytest.approx(0.0352982212813, rel=1e-11)
    assert m1.fom == pytest.approx(9.025187369614e-4, rel=1e-9)
    ideal = SystemParams(visibility=1, dark_rate=0)
    assert key_metrics(ideal, plan()).fom == pytest.approx(math.exp(-0.4) / 380, rel=1e-14)


@pytest.mark.parametrize("n_users", [16, 32, 64, 128])
def test_key_metrics_against_brute_force(n_users):
    for i in range(int(math.log2(n_users)) + 1):
        q, frac, fom = brute_force_fom(n_users, 2 ** i, 15, 5)
        m = key_metrics(P, plan(n_users, 2 ** i))
        assert m.qber == pytest.approx(q, rel=1e-13)
        assert m.secure_fraction == pytest.approx(frac, rel=1e-12)
        assert m.fom == pytest.approx(fom, rel=1e-12)


@given(
    st.sampled_from([1, 2, 4, 8, 16, 32, 64]),
    st.floats(0.1, 19.9),
    st.floats(0.05, 0.8),
    st.floats(1e6, 1e10),
)
def test_key_metrics_identities(n1, l1, mu, rate):
    params = SystemParams(mu=mu, pulse_rate=rate)
    pl = plan(64, n1, l1, 20 - l1)
    m = key_metrics(params, pl)
    assert m.fom * m.fiber_total_km == pytest.approx(m.secure_fraction, rel=1e-12)
    assert m.secure_rate == m.sifted_rate * m.secure_fraction
    doubled = key_metrics(SystemParams(mu=mu, pulse_rate=2 * rate), pl)
    assert doubled.qber == m.qber
    assert doubled.sifted_rate == pytest.approx(2 * m.sifted_rate, rel=1e-14)


# -- splitter equivalence -------------------------------------------------------

def test_splitter_loss_equivalent_km():
    assert splitter_loss_equivalent_km(1, 0.25) == 0
    assert splitter_loss_equivalent_km(32, 0.2) == pytest.approx(75.3, abs=0.05)
    assert splitter_loss_equivalent_km(16, 0.25) == pytest.approx(48.2, abs=0.05)
    with pytest.raises(ValueError):
        splitter_loss_equivalent_km(16, 0)


# -- validation -----------------------------------------------------------------

@pytest.mark.parametrize("kw", [
    dict(eta=1.1), dict(eta=0), dict(visibility=1.01), dict(visibility=0),
    dict(mu=0), dict(dark_rate=-1e-6), dict(alpha_db_per_km=-0.1), dict(pulse_rate=0),
])
def test_system_params_rejects(kw):
    with pytest.raises(ValueError):
        SystemParams(**kw)


def test_topology_plan_rejects():
    with pytest.raises(ValueError):
        TopologyPlan(64, 4, 8, 15, 5)
    with pytest.raises(ValueError):
        TopologyPlan.from_split(64, 3, 15, 5)
    with pytest.raises(ValueError):
        TopologyPlan.from_split(64, 4, -1, 5)
    assert TopologyPlan.from_split(48, 3, 15, 5).n2 == 16
