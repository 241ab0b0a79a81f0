import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from secnet.fieldsim import (
    GF,
    FieldElement,
    FieldTooSmallError,
    SimConfig,
    SimulationError,
    arq_overhear_prob,
    measure_concentration,
    mds_matrix,
    reports_to_csv,
    simulate,
    simulate_trials,
)
from secnet.fieldsim.gf import AES_POLY, field
from secnet.formulations import EdgeRates, FormulationConfig, SchemeSolution, solve_scheme
from secnet.netmodel import Network

GF8 = field(8)
byte = st.integers(0, 255)


def _slow_mul(a: int, b: int, poly: int = AES_POLY) -> int:
    # shift-and-add reference, independent of the log tables
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a & 0x100:
            a ^= poly
    return out


def single_edge(delta=0.0, delta_e=0.5):
    return Network.build([("e1", "s", "d", delta, delta_e)], "s", "d")


def scheme_for(net, algo="1"):
    return solve_scheme(net, FormulationConfig(algo=algo))


# field arithmetic


def test_aes_known_product():
    assert GF8.mul(0x57, 0x83) == 0xC1
    assert GF8.mul(0x57, 0x13) == 0xFE


def test_inverses_exhaustive_gf256():
    for a in range(1, 256):
        assert GF8.mul(a, GF8.inv(a)) == 1
    with pytest.raises(ZeroDivisionError):
        GF8.inv(0)


def test_mul_table_matches_reference():
    a = np.arange(256)
    for b in (0, 1, 2, 3, 0x53, 0xCA, 0xFF):
        got = GF8.mul(a, np.full(256, b))
        assert [int(v) for v in got] == [_slow_mul(int(x), b) for x in a]


@settings(max_examples=200, deadline=None)
@given(byte, byte, byte)
def test_field_axioms(a, b, c):
    x, y, z = GF8(a), GF8(b), GF8(c)
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x + GF8(0) == x and x * GF8(1) == x
    assert x + (-x) == GF8(0)
    if a:
        assert x * x.inverse() == GF8(1)
        assert (y / x) * x == y


def test_gf16_inverses_sampled():
    g = field(16)
    rng = np.random.default_rng(3)
    a = g.random(500, rng, nonzero=True)
    assert np.all(g.mul(a, g.inv(a)) == 1)


def test_field_element_rejects_out_of_range():
    with pytest.raises(ValueError):
        FieldElement(256, GF8)


def test_matmul_and_rank_against_reference():
    rng = np.random.default_rng(0)
    A = GF8.random((4, 5), rng)
    B = GF8.random((5, 3), rng)
    ref = np.zeros((4, 3), dtype=np.int64)
    for i, j, t in itertools.product(range(4), range(3), range(5)):
        ref[i, j] ^= _slow_mul(int(A[i, t]), int(B[t, j]))
    assert np.array_equal(GF8.matmul(A, B), ref)
    dup = np.vstack([A, A[0] ^ A[1]])
    assert GF8.rank(dup) == GF8.rank(A)
    assert GF8.rank(np.zeros((3, 3), dtype=np.int64)) == 0


def test_rank_profile_prefixes():
    rng = np.random.default_rng(1)
    A = GF8.random((6, 4), rng, nonzero=True)
    prof = GF8.rank_profile(A, [0, 1, 2, 6])
    assert list(prof) == [GF8.rank(A[:0]), GF8.rank(A[:1]), GF8.rank(A[:2]), GF8.rank(A)]


# MDS matrices


def _all_minors_nonzero(M, size, gf=GF8):
    rows, cols = M.shape
    for r in itertools.combinations(range(rows), size):
        for c in itertools.combinations(range(cols), size):
            if gf.rank(M[np.ix_(r, c)]) != size:
                return False
    return True


def test_mds_1x1():
    M = mds_matrix(1, 1, GF8)
    assert M.shape == (1, 1) and M[0, 0] != 0


def test_mds_3x2_minors():
    M = mds_matrix(3, 2, GF8)
    assert _all_minors_nonzero(M, 2)


def test_mds_6x4_every_square_submatrix():
    M = mds_matrix(6, 4, GF8)
    for size in range(1, 5):
        assert _all_minors_nonzero(M, size)


@pytest.mark.parametrize("rows,cols", [(3, 2), (5, 3), (6, 4), (7, 5)])
def test_mds_hides_every_single_input(rows, cols):
    M = mds_matrix(rows, cols, GF8)
    for obs in itertools.combinations(range(rows), cols - 1):
        O = M[list(obs)]
        assert GF8.rank(O) == cols - 1
        for j in range(cols):
            unit = np.zeros((1, cols), dtype=np.int64)
            unit[0, j] = 1
            assert GF8.rank(np.vstack([O, unit])) == cols


def test_mds_field_too_small():
    with pytest.raises(FieldTooSmallError):
        mds_matrix(200, 100, GF8)
    assert mds_matrix(128, 128, GF8).shape == (128, 128)


# overhear probability


def test_overhear_prob_examples():
    assert arq_overhear_prob(0.0, 0.3) == pytest.approx(0.7)
    assert arq_overhear_prob(0.5, 0.5) == pytest.approx(2 / 3)
    assert arq_overhear_prob(0.9, 0.0) == 1.0
    with pytest.raises(ValueError):
        arq_overhear_prob(1.0, 1.0)


@given(st.floats(0, 0.99), st.floats(0, 1))
def test_overhear_prob_geometric_series(d, de):
    series = (1 - de) * sum((d * de) ** t for t in range(4000))
    assert arq_overhear_prob(d, de) == pytest.approx(series, abs=1e-9)


# simulation


def test_blind_eve_learns_nothing():
    net = single_edge(0.0, 1.0)
    rep = simulate(net, scheme_for(net), 4000, "e1", seed=5)
    assert rep.eve_observed_message == 0
    assert rep.leaked_key_fraction == 0.0
    assert rep.decode_success


def test_eve_off_the_key_edge():
    net = Network.build([("e1", "s", "d", 0.0, 0.0), ("e2", "s", "d", 0.0, 0.0)], "s", "d")
    scheme = SchemeSolution(
        1.0, {"e1": EdgeRates(1.0, 0.0, 0.0, 0.0), "e2": EdgeRates(0.0, 1.0, 0.0, 1.0)}, algo="1"
    )
    rep = simulate(net, scheme, 3000, "e1", seed=2)
    assert rep.decode_success
    assert rep.eve_random_packets == 0
    assert rep.message_leak == 0
    assert rep.eve_key_rank_deficit == rep.eve_observed_message == rep.sent_message_packets


def test_one_time_pad_without_key_knowledge():
    # Eve hears every message but no randomness, so the pads reveal nothing
    net = Network.build([("e1", "s", "d", 0.0, 0.0), ("e2", "s", "d", 0.0, 1.0)], "s", "d")
    scheme = SchemeSolution(
        0.5, {"e1": EdgeRates(0.5, 0.0, 0.0, 0.0), "e2": EdgeRates(0.0, 0.5, 0.0, 0.5)}, algo="1"
    )
    rep = simulate(net, scheme, 2048, "e1", seed=9)
    assert rep.eve_observed_message > 0
    assert rep.message_leak == 0
    assert rep.leaked_key_fraction == 0.0


def test_reproducible_reports():
    net = Network.build([("e1", "s", "a", 0.2, 0.5), ("e2", "a", "d", 0.3, 0.4)], "s", "d")
    sch = scheme_for(net, "2")
    a = simulate(net, sch, 2500, "e2", seed=17)
    b = simulate(net, sch, 2500, "e2", seed=17)
    assert a == b
    ta = reports_to_csv(simulate_trials(net, sch, 1500, "e1", 2, seed=4))
    tb = reports_to_csv(simulate_trials(net, sch, 1500, "e1", 2, seed=4))
    assert ta == tb


@pytest.mark.parametrize("algo", ["1", "2", "3"])
def test_slot_accounting_and_report_bounds(algo):
    net = Network.build(
        [
            ("a", "s", "u", 0.1, 0.5),
            ("b", "s", "v", 0.3, 0.6),
            ("c", "u", "d", 0.2, 0.7),
            ("e", "v", "d", 0.0, 0.5),
            ("f", "u", "v", 0.4, 0.3),
        ],
        "s",
        "d",
    )
    sch = scheme_for(net, algo)
    N = 1500
    for eve in net.edge_ids:
        rep = simulate(net, sch, N, eve, seed=1)
        assert all(n <= N for n in rep.edge_slots.values())
        assert 0.0 <= rep.leaked_key_fraction <= 1.0
        assert rep.empirical_secure_rate <= rep.delivered_message_packets / N + 1e-15


def test_tiny_horizon_terminates():
    net = single_edge(0.9, 0.5)
    rep = simulate(net, scheme_for(net), 10, "e1", seed=0)
    assert rep.slots == 10
    assert all(n <= 10 for n in rep.edge_slots.values())


def test_debug_provenance_checks_pass():
    net = Network.build([("e1", "s", "a", 0.2, 0.5), ("e2", "a", "d", 0.1, 0.3)], "s", "d")
    for algo in "123":
        rep = simulate(net, scheme_for(net, algo), 2048, "e1", seed=3, config=SimConfig(debug=True))
        assert rep.decode_success


def test_packet_consistency():
    from secnet.fieldsim import Packet

    rng = np.random.default_rng(0)
    payload = GF8.random((3, 4), rng)
    prov = np.array([1, 0, 5])
    pkt = Packet(GF8.matmul(prov[None, :], payload)[0], prov)
    assert pkt.consistent(payload, GF8)
    bad = Packet(pkt.symbols ^ 1, prov)
    assert not bad.consistent(payload, GF8)


def test_unknown_eve_edge_and_bad_schedule():
    net = single_edge()
    sch = scheme_for(net)
    with pytest.raises(SimulationError):
        simulate(net, sch, 100, "nope")
    over = SchemeSolution(1.0, {"e1": EdgeRates(0.8, 0.5, 0.0, 0.5)}, algo="1")
    with pytest.raises(SimulationError):
        simulate(net, over, 100, "e1")


def test_concentration_trivial_cases():
    blind = single_edge(0.3, 1.0)
    s = measure_concentration(blind, scheme_for(blind), 2000, "e1", trials=5)
    assert np.all(s.overheard == 0)
    clear = single_edge(0.0, 0.0)
    sch = SchemeSolution(0.0, {"e1": EdgeRates(0.5, 0.0, 0.0, 0.0)}, algo="1")
    s = measure_concentration(clear, sch, 2000, "e1", trials=5)
    assert np.all(s.overheard == 1000)
    assert s.within(0.0)


def test_gf_rejects_reducible_polynomial():
    with pytest.raises(ValueError):
        GF(8, 0x100)
