"""Packet-level Monte Carlo of the ARQ/MDS key scheme with one-time-pad messages.

The horizon is cut into generations of ``SimConfig.generation_slots`` slots.
Each generation is an independent run of the scheme: the source draws fresh
random packets, every edge carries its share of ARQ randomness, MDS-coded
randomness and padded message packets inside its per-generation slot budget,
and vertices forward what they received in topological order. The key used
in generation ``t`` is the one distilled from generation ``t``'s randomness,
which a deployed system would pipeline one generation behind.

Every packet is a row ``[coefficients | symbols]``: coefficients over the
generation's source randomness followed by ``payload_symbols`` actual field
symbols. Linear operations act on both halves at once, so Bob's key symbols
are computed from what he actually received while Alice's pad is computed
from the coefficients she learns through public feedback. Decoding succeeds
only if the two agree.

Leakage is exact linear algebra. With Eve's random-packet observations ``E``
and the pads ``P_I`` of the message packets she overheard,
``message_leak = |I| + rank(E) - rank([E; P_I])`` is the number of message
packets' worth of information she holds.
"""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Iterable, Sequence
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from ..formulations import SchemeSolution, edge_coeffs
from ..netmodel import EdgeChannel, Network, topological_order
from .gf import GF, field as gf_field
from .mds import mds_matrix

SIMULATED_ALGOS = ("1", "2", "3")
ARQ, MDS, MSG = 0, 1, 2


class SimulationError(ValueError):
    pass


def arq_overhear_prob(delta: float, delta_e: float) -> float:
    """Chance Eve hears at least one copy of a packet retransmitted until the head ACKs it."""
    for name, x in (("delta", delta), ("delta_e", delta_e)):
        if not 0.0 <= x <= 1.0:
            raise ValueError(f"{name}={x} is not a probability")
    if delta * delta_e >= 1.0:
        raise ValueError("delta = delta_e = 1: the packet is never delivered")
    return (1.0 - delta_e) / (1.0 - delta * delta_e)


@dataclass(frozen=True)
class SimConfig:
    generation_slots: int = 1024
    field_bits: int = 16
    payload_symbols: int = 16
    # withhold ceil(z * sqrt(n)) of the n message packets per generation
    secrecy_margin: float = 0.7
    two_phase: bool = False
    # False: count transmissions only, skip all field arithmetic
    linear: bool = True
    debug: bool = False

    def __post_init__(self) -> None:
        if self.generation_slots < 1:
            raise ValueError("generation_slots must be positive")
        if self.secrecy_margin < 0:
            raise ValueError("secrecy_margin must be nonnegative")
        if self.payload_symbols < 0:
            raise ValueError("payload_symbols must be nonnegative")


@dataclass(frozen=True)
class Packet:
    symbols: np.ndarray
    provenance: np.ndarray

    def consistent(self, randomness: np.ndarray, gf: GF) -> bool:
        """Do the provenance coefficients reproduce the symbols from the source payloads?"""
        expect = gf.matmul(self.provenance[None, :], randomness)[0]
        return bool(np.array_equal(expect, self.symbols))


@dataclass
class SimulationReport:
    slots: int
    delivered_message_packets: int
    decode_success: bool
    eve_observed_message: int
    eve_key_rank_deficit: int
    leaked_key_fraction: float
    empirical_secure_rate: float
    seed: int | None = None
    trial: int | None = None
    sent_message_packets: int = 0
    message_leak: int = 0
    bob_random_packets: int = 0
    bob_secure_packets: int = 0
    eve_random_packets: int = 0
    generations: int = 0
    edge_slots: dict[str, int] = field(default_factory=dict)

    @property
    def delivered_rate(self) -> float:
        return self.delivered_message_packets / self.slots

    def csv_row(self) -> dict[str, object]:
        row = {k: v for k, v in asdict(self).items() if k != "edge_slots"}
        row["max_edge_slots"] = max(self.edge_slots.values(), default=0)
        return row


CSV_COLUMNS = tuple(f.name for f in fields(SimulationReport) if f.name != "edge_slots") + ("max_edge_slots",)


def _fmt(v: object) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return f"{v:.9g}"
    return "" if v is None else str(v)


def reports_to_csv(reports: Iterable[SimulationReport], extra: Sequence[dict] = ()) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        row = r.csv_row()
        w.writerow([_fmt(row[c]) for c in CSV_COLUMNS])
    for row in extra:
        w.writerow([_fmt(row.get(c)) for c in CSV_COLUMNS])
    return buf.getvalue()


def _count(rate: float, t: int) -> int:
    # LP values carry ~1e-9 noise from the tie-break pass
    return int(math.floor(round(rate, 8) * t + 1e-9))


def _share(rate: float, t0: int, t1: int) -> int:
    return _count(rate, t1) - _count(rate, t0)


def _check_scheme(net: Network, scheme: SchemeSolution, eve_edge: str) -> None:
    if not net.has_edge(eve_edge):
        raise SimulationError(f"unknown eavesdropped edge {eve_edge!r}")
    if scheme.per_source is not None or scheme.algo not in SIMULATED_ALGOS:
        raise SimulationError(f"schemes of formulation {scheme.algo!r} are not simulated")
    missing = set(net.edge_ids) - set(scheme.per_edge)
    if missing:
        raise SimulationError(f"scheme has no rates for edges {sorted(missing)}")
    for e in net.edges:
        er = scheme.per_edge[e.id]
        if min(er.m, er.k, er.r) < -1e-9:
            raise SimulationError(f"negative rate on {e.id}")
        if er.m + er.k + er.r <= 1e-12:
            continue
        if e.delta >= 1.0:
            raise SimulationError(f"edge {e.id} never delivers but carries traffic")
        c = edge_coeffs(e)
        need = er.r * c.ts_r + er.k * c.ts_k + er.m * c.ts_m
        if need > 1.0 + 1e-6:
            raise SimulationError(f"edge {e.id} needs {need:.6f} of each slot; the schedule is infeasible")


@dataclass
class _Hop:
    delivered: np.ndarray  # random rows the head received
    delivered_msgs: np.ndarray
    eve_rows: np.ndarray
    eve_msgs: np.ndarray
    both: int  # random transmissions received by head and Eve
    slots: int


class _Generation:
    def __init__(self, sim: _Simulator, t0: int, t1: int, rng: np.random.Generator) -> None:
        self.sim = sim
        self.net = sim.net
        self.budget = t1 - t0
        self.rng = rng
        scheme = sim.scheme
        self.cnt = {
            e.id: {x: _share(getattr(scheme.per_edge[e.id], x), t0, t1) for x in "mkr"} for e in self.net.edges
        }

    def _transmit(self, e: EdgeChannel, arq_rows, mds_inputs, msgs, eve: bool) -> _Hop:
        sim, rng = self.sim, self.rng
        d, de = e.delta, e.delta_e
        k_in = mds_inputs.shape[0]
        n_tx = int(math.floor(k_in / (1.0 - d * de) + 1e-9)) if k_in else 0
        if n_tx == k_in or mds_inputs.shape[1] == 0:
            # a square Cauchy matrix is an invertible recoding; send the inputs as they are
            coded = mds_inputs if n_tx == k_in else np.zeros((n_tx, 0), dtype=np.int64)
        else:
            coded = sim.gf.matmul(mds_matrix(n_tx, k_in, sim.gf), mds_inputs)
        n_a, n_m = arq_rows.shape[0], len(msgs)

        def attempts(n: int) -> np.ndarray:
            if d <= 0.0:
                return np.ones(n, dtype=np.int64)
            return rng.geometric(1.0 - d, size=n).astype(np.int64)

        dur_a, dur_m = attempts(n_a), attempts(n_m)
        head_mds = rng.random(n_tx) >= d
        eve_u = rng.random(n_a + n_tx + n_m)

        cls = np.concatenate([np.full(n_a, ARQ), np.full(n_tx, MDS), np.full(n_m, MSG)])
        pos = np.concatenate([np.arange(n_a), np.arange(n_tx), np.arange(n_m)])
        order = np.arange(cls.size) if sim.config.two_phase else np.lexsort((cls, pos))
        dur = np.concatenate([dur_a, np.ones(n_tx, dtype=np.int64), dur_m])
        cum = np.cumsum(dur[order])
        done_o = cum <= self.budget
        made_o = np.where(done_o, dur[order], np.clip(self.budget - (cum - dur[order]), 0, None))
        done = np.empty(cls.size, dtype=bool)
        made = np.empty(cls.size, dtype=np.int64)
        done[order] = done_o
        made[order] = made_o
        eve_hears = eve_u < 1.0 - np.power(de, made.astype(float))
        head_gets = done.copy()
        head_gets[n_a : n_a + n_tx] &= head_mds

        a_sl, c_sl, m_sl = slice(0, n_a), slice(n_a, n_a + n_tx), slice(n_a + n_tx, None)
        delivered = np.vstack([arq_rows[head_gets[a_sl]], coded[head_gets[c_sl]]])
        eve_rows = np.vstack([arq_rows[eve_hears[a_sl]], coded[eve_hears[c_sl]]]) if eve else delivered[:0]
        both = int(np.count_nonzero(head_gets[: n_a + n_tx] & eve_hears[: n_a + n_tx]))
        return _Hop(
            delivered=delivered,
            delivered_msgs=msgs[head_gets[m_sl]],
            eve_rows=eve_rows,
            eve_msgs=msgs[eve_hears[m_sl]] if eve else msgs[:0],
            both=both,
            slots=int(min(cum[-1], self.budget)) if cum.size else 0,
        )

    def run(self) -> dict:
        sim, net, gf = self.sim, self.net, self.sim.gf
        src, dst = net.source, net.destination
        linear = sim.config.linear
        L = sim.config.payload_symbols if linear else 0

        n_rand = sum(self.cnt[g]["r"] + self.cnt[g]["k"] for g in net.out_edges(src))
        width = n_rand + L if linear else 0
        fresh = np.zeros((n_rand, width), dtype=np.int64)
        payload = gf.random((n_rand, L), self.rng) if linear else np.zeros((n_rand, 0), dtype=np.int64)
        self.payload = payload
        if linear:
            fresh[:, :n_rand] = np.eye(n_rand, dtype=np.int64)
            fresh[:, n_rand:] = payload

        m_planned = sum(self.cnt[g]["m"] for g in net.out_edges(src))
        hold = math.ceil(sim.config.secrecy_margin * math.sqrt(m_planned)) if m_planned else 0
        n_msg = max(m_planned - hold, 0)

        inbox_rows: dict[str, list[np.ndarray]] = {v: [] for v in net.vertices}
        inbox_msgs: dict[str, list[np.ndarray]] = {v: [] for v in net.vertices}
        inbox_rows[src].append(fresh)
        inbox_msgs[src].append(np.arange(n_msg, dtype=np.int64))
        eve_out: _Hop | None = None
        link_keys: dict[str, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}
        sent_on_eve = np.zeros(0, dtype=np.int64)
        slots: dict[str, int] = {}

        for u in topological_order(net):
            if u == dst:
                continue
            pool = np.vstack(inbox_rows[u]) if inbox_rows[u] else np.zeros((0, width), dtype=np.int64)
            if sim.scheme.algo == "3" and u != src and linear and pool.shape[0] > 1:
                pool = gf.matmul(gf.random((pool.shape[0], pool.shape[0]), self.rng), pool)
            msgs = np.concatenate(inbox_msgs[u]) if inbox_msgs[u] else np.zeros(0, dtype=np.int64)
            at, mt = 0, 0
            for g in net.out_edges(u):
                e = net.edge(g)
                c = self.cnt[g]
                r_n = min(c["r"], pool.shape[0] - at)
                k_n = min(c["k"], pool.shape[0] - at - r_n)
                m_n = min(c["m"], msgs.size - mt)
                arq_rows = pool[at : at + r_n]
                mds_in = pool[at + r_n : at + r_n + k_n]
                at += r_n + k_n
                out = msgs[mt : mt + m_n]
                mt += m_n
                is_eve = g == sim.eve_edge
                hop = self._transmit(e, arq_rows, mds_in, out, is_eve)
                slots[g] = hop.slots
                if is_eve:
                    eve_out = hop
                    sent_on_eve = out
                if sim.scheme.algo == "2" and linear:
                    link_keys[g] = self._link_key(hop.delivered, out, n_rand)
                inbox_rows[e.head].append(hop.delivered)
                inbox_msgs[e.head].append(hop.delivered_msgs)

        bob = np.vstack(inbox_rows[dst]) if inbox_rows[dst] else np.zeros((0, width), dtype=np.int64)
        got = np.concatenate(inbox_msgs[dst]) if inbox_msgs[dst] else np.zeros(0, dtype=np.int64)
        res = {
            "sent": n_msg,
            "delivered": int(np.unique(got).size),
            "bob_random": bob.shape[0],
            "slots": slots,
            "overheard": 0,
            "leak": 0,
            "deficit": 0,
            "eve_random": 0,
            "both": 0,
            "decoded": bool(np.unique(got).size == n_msg),
        }
        if eve_out is not None:
            res["overheard"] = int(np.unique(eve_out.eve_msgs).size)
            res["eve_random"] = eve_out.eve_rows.shape[0]
            res["both"] = eve_out.both if net.edge(sim.eve_edge).head == dst else 0
        if not linear:
            return res

        C_key = mds_matrix(n_msg, bob.shape[0], gf)
        key_aug = gf.matmul(C_key, bob)
        key_coef = key_aug[:, :n_rand]

        if L:
            msg_payload = gf.random((n_msg, L), self.rng)
            x = msg_payload ^ gf.matmul(key_coef, payload)
            for rows, _, drift in link_keys.values():
                x[rows] ^= drift
            dec = x[got] ^ key_aug[got, n_rand:]
            res["decoded"] = res["decoded"] and bool(np.array_equal(dec, msg_payload[got]))
            if sim.config.debug:
                for row in bob:
                    if not Packet(row[n_rand:], row[:n_rand]).consistent(payload, gf):
                        raise SimulationError("packet provenance does not reproduce its symbols")

        if eve_out is not None and sent_on_eve.size:
            pads = key_coef[sent_on_eve]
            if sim.eve_edge in link_keys:
                pads = pads ^ link_keys[sim.eve_edge][1]
            heard = np.isin(sent_on_eve, eve_out.eve_msgs)
            ranks = _rank_blocks(gf, eve_out.eve_rows[:, :n_rand], pads[heard], pads[~heard])
            res["leak"] = int(heard.sum() + ranks[0] - ranks[1])
            res["deficit"] = int(ranks[2] - ranks[0])
        elif eve_out is not None:
            res["deficit"] = 0
        return res

    def _link_key(self, delivered: np.ndarray, msgs: np.ndarray, n_rand: int):
        """Link key for ``msgs`` on one edge.

        Returns the key's coefficients and the symbol drift between the tail's
        computation (coefficients applied to the source payload) and the head's
        (Cauchy rows applied to the symbols it received). The drift is zero
        unless provenance tracking is broken.
        """
        gf = self.sim.gf
        C = mds_matrix(msgs.size, delivered.shape[0], gf)
        aug = gf.matmul(C, delivered)
        coef = aug[:, :n_rand]
        tail_sym = gf.matmul(coef, self.payload)
        return msgs, coef, tail_sym ^ aug[:, n_rand:]


def _rank_blocks(gf: GF, E: np.ndarray, first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """Ranks of ``E``, ``[E; first]`` and ``[E; first; second]``.

    Unit-vector rows of ``E`` are eliminated up front by deleting their
    columns, which is what makes uncoded observations cheap.
    """
    nnz = np.count_nonzero(E, axis=1)
    unit = nnz == 1
    unit_cols = np.unique(np.argmax(E[unit], axis=1)) if unit.any() else np.zeros(0, dtype=np.int64)
    keep = np.ones(E.shape[1], dtype=bool)
    keep[unit_cols] = False
    rest = E[~unit & (nnz > 0)][:, keep]
    M = np.vstack([rest, first[:, keep], second[:, keep]])
    cps = [rest.shape[0], rest.shape[0] + first.shape[0], M.shape[0]]
    r = gf.rank_profile(M, cps)
    return r + unit_cols.size


class _Simulator:
    def __init__(self, net: Network, scheme: SchemeSolution, eve_edge: str, config: SimConfig) -> None:
        self.net = net
        self.scheme = scheme
        self.eve_edge = eve_edge
        self.config = config
        self.gf = gf_field(config.field_bits)


Seed = int | np.random.SeedSequence


def simulate(
    net: Network,
    scheme: SchemeSolution,
    slots: int,
    eve_edge: str,
    seed: Seed = 0,
    config: SimConfig | None = None,
) -> SimulationReport:
    """Run the scheme for ``slots`` slots with Eve wiretapping ``eve_edge``."""
    config = config or SimConfig()
    if slots < 1:
        raise SimulationError("slots must be positive")
    _check_scheme(net, scheme, eve_edge)
    sim = _Simulator(net, scheme, eve_edge, config)
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    rng = np.random.default_rng(ss)

    tot = dict.fromkeys(("sent", "delivered", "bob_random", "overheard", "leak", "deficit", "eve_random", "both"), 0)
    decoded = True
    edge_slots = dict.fromkeys(net.edge_ids, 0)
    gens = 0
    for t0 in range(0, slots, config.generation_slots):
        t1 = min(t0 + config.generation_slots, slots)
        res = _Generation(sim, t0, t1, rng).run()
        for k in tot:
            tot[k] += res[k]
        decoded &= res["decoded"]
        for g, n in res["slots"].items():
            edge_slots[g] += n
        gens += 1

    leak = min(tot["leak"], tot["overheard"])
    return SimulationReport(
        slots=slots,
        delivered_message_packets=tot["delivered"],
        decode_success=bool(decoded),
        eve_observed_message=tot["overheard"],
        eve_key_rank_deficit=tot["deficit"],
        leaked_key_fraction=leak / tot["overheard"] if tot["overheard"] else 0.0,
        empirical_secure_rate=(tot["delivered"] - leak) / slots,
        seed=seed if isinstance(seed, int) else None,
        sent_message_packets=tot["sent"],
        message_leak=leak,
        bob_random_packets=tot["bob_random"],
        bob_secure_packets=max(tot["bob_random"] - tot["both"], 0),
        eve_random_packets=tot["eve_random"],
        generations=gens,
        edge_slots=edge_slots,
    )


def simulate_trials(
    net: Network,
    scheme: SchemeSolution,
    slots: int,
    eve_edge: str,
    trials: int,
    seed: int = 0,
    config: SimConfig | None = None,
) -> list[SimulationReport]:
    """Independent trials, each on its own child of ``SeedSequence(seed)``."""
    if trials < 1:
        raise SimulationError("trials must be positive")
    out = []
    for i, child in enumerate(np.random.SeedSequence(seed).spawn(trials)):
        rep = simulate(net, scheme, slots, eve_edge, child, config)
        rep.seed, rep.trial = seed, i
        out.append(rep)
    return out


def summarize(reports: Sequence[SimulationReport]) -> dict[str, float]:
    """Mean of every numeric report column plus standard deviations of the headline ones."""
    out: dict[str, float] = {}
    rows = [r.csv_row() for r in reports]
    for c in CSV_COLUMNS:
        if c in ("seed", "trial"):
            continue
        vals = np.array([float(r[c]) for r in rows])
        out[c] = float(vals.mean())
    for c in ("empirical_secure_rate", "leaked_key_fraction", "eve_observed_message"):
        out[f"{c}_std"] = float(np.std([float(r[c]) for r in rows], ddof=1)) if len(rows) > 1 else 0.0
    return out


@dataclass(frozen=True)
class ConcentrationSummary:
    trials: int
    slots: int
    overheard: np.ndarray
    bob_secure: np.ndarray
    expected_overheard: float

    @property
    def mean_overheard(self) -> float:
        return float(self.overheard.mean())

    @property
    def std_overheard(self) -> float:
        return float(self.overheard.std(ddof=1)) if self.trials > 1 else 0.0

    @property
    def mean_bob_secure(self) -> float:
        return float(self.bob_secure.mean())

    @property
    def relative_error(self) -> float:
        if self.expected_overheard == 0.0:
            return 0.0 if self.mean_overheard == 0.0 else math.inf
        return abs(self.mean_overheard - self.expected_overheard) / self.expected_overheard

    def within(self, rel_tol: float) -> bool:
        return self.relative_error <= rel_tol


def measure_concentration(
    net: Network,
    scheme: SchemeSolution,
    slots: int,
    eve_edge: str,
    trials: int,
    seed: int = 0,
    config: SimConfig | None = None,
) -> ConcentrationSummary:
    """Spread of Eve's overheard-message count across trials, from transmission counts alone.

    The expected count is ``m * N * arq_overhear_prob`` on the wiretapped edge.
    """
    base = config or SimConfig()
    cfg = SimConfig(
        generation_slots=base.generation_slots,
        field_bits=base.field_bits,
        secrecy_margin=0.0,
        two_phase=base.two_phase,
        linear=False,
    )
    reps = simulate_trials(net, scheme, slots, eve_edge, trials, seed, cfg)
    e = net.edge(eve_edge)
    m = scheme.per_edge[eve_edge].m
    p = arq_overhear_prob(e.delta, e.delta_e) if e.delta * e.delta_e < 1.0 else 0.0
    return ConcentrationSummary(
        trials=trials,
        slots=slots,
        overheard=np.array([r.eve_observed_message for r in reps], dtype=float),
        bob_secure=np.array([r.bob_secure_packets for r in reps], dtype=float),
        expected_overheard=_count(m, slots) * p,
    )
