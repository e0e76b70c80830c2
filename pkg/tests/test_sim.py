import json
from dataclasses import dataclass

import pytest

from edgebicon.exceptions import (CongestViolation, DisconnectedGraphError, GraphError,
                                  NonTerminationError, ProtocolError)
from edgebicon.graph import Graph, generate
from edgebicon.protocol import bicon_factory, run_biconnectivity
from edgebicon.sim import (Kind, Message, SimConfig, build, congest_bound, label_bits,
                           message_bit_size, run_to_quiescence)


# toy nodes for engine-level tests

@dataclass
class Echo:
    """Initiator pings everyone once; receivers stay silent."""
    id: int
    neighbors: tuple
    start: bool
    sent: bool = False

    @property
    def terminal(self):
        return True

    def step(self, inbox, round):
        if self.start and not self.sent:
            self.sent = True
            return [(w, Message(Kind.EXPLORE)) for w in self.neighbors]
        return []


@dataclass
class Scripted:
    id: int
    script: list

    @property
    def terminal(self):
        return True

    def step(self, inbox, round):
        return self.script if round == 0 and self.id == 0 else []


@dataclass
class Eager:
    """Breaks the event-driven rule: acts at round 0 without being woken."""
    id: int

    @property
    def terminal(self):
        return False

    def step(self, inbox, round):
        return [(1 - self.id, Message(Kind.NULL))] if self.id == 1 else []


def scripted(script):
    return lambda v, nb, init, n: Scripted(v, script)


class TestMessageSize:
    @pytest.mark.parametrize("msg,n,bits", [
        (Message(Kind.NULL), 1000, 4),
        (Message(Kind.MARK_UP_TO, 3, 9), 15, 12),
        (Message(Kind.DESC_VALUE, 5), 5, 7),
        (Message(Kind.EXPLORE), 1, 4),
    ])
    def test_examples(self, msg, n, bits):
        assert message_bit_size(msg, n) == bits

    def test_label_width(self):
        assert [label_bits(n) for n in (1, 2, 3, 4, 7, 8, 1000)] == [1, 2, 2, 3, 3, 4, 10]
        assert congest_bound(15) == 12

    def test_every_kind_fits(self):
        for n in (1, 2, 5, 64, 1023):
            for msg in (Message(Kind.EXPLORE), Message(Kind.COMPONENT_IS, n),
                        Message(Kind.MARK_UP_TO, n, n)):
                assert message_bit_size(msg, n) <= congest_bound(n)

    def test_payload_charged(self):
        msg = Message(Kind.TOPOLOGY, payload=((0, 1), ((0, 1),)))
        assert message_bit_size(msg, 3) == 4 + 2 * 4

    def test_bad_n(self):
        with pytest.raises(ValueError):
            message_bit_size(Message(Kind.NULL), 0)


class TestMessageInvariants:
    def test_mark_order(self):
        with pytest.raises(ValueError):
            Message(Kind.MARK_UP_TO, 5, 2)

    def test_arity(self):
        with pytest.raises(ValueError):
            Message(Kind.NULL, 1)
        with pytest.raises(ValueError):
            Message(Kind.SET_PRE_LABEL)
        with pytest.raises(ValueError):
            Message(Kind.MARK_UP_TO, 1)

    def test_payload_only_on_topology(self):
        with pytest.raises(ValueError):
            Message(Kind.NULL, payload=((), ()))
        with pytest.raises(ValueError):
            Message(Kind.TOPOLOGY)

    def test_repr(self):
        assert repr(Message(Kind.MARK_UP_TO, 2, 4)) == "MarkUpTo(2, 4)"


class TestBuild:
    def test_bad_initiator(self, p3):
        with pytest.raises(GraphError):
            build(p3, bicon_factory(), SimConfig(initiator=7))

    def test_disconnected(self):
        with pytest.raises(DisconnectedGraphError):
            build(Graph(4, [(0, 1), (2, 3)]), bicon_factory())

    def test_all_initiators(self, c4):
        sim = build(c4, lambda v, nb, init, n: Echo(v, nb, init), SimConfig(initiator="all"))
        assert sim.initiators == frozenset(range(4))
        assert sum(node.start for node in sim.nodes) == 4

    def test_max_rounds(self, p3):
        with pytest.raises(ValueError):
            build(p3, bicon_factory(), SimConfig(max_rounds=0))


class TestEngine:
    def test_first_round_inflight(self, p3):
        sim = build(p3, bicon_factory())
        sim.step()
        assert [(s, r, m.kind) for s, r, m in sim.inflight] == [(0, 1, Kind.EXPLORE)]

    def test_round_delivers_previous_sends(self, p3):
        sim = build(p3, lambda v, nb, init, n: Echo(v, nb, init))
        first = sim.step()
        assert (first.delivered, first.sent) == (0, 1)
        second = sim.step()
        assert (second.delivered, second.sent, second.quiescent) == (1, 0, False)
        third = sim.step()
        assert third.quiescent and sim.is_quiescent()

    def test_duplicate_send(self, p3):
        sim = build(p3, scripted([(1, Message(Kind.NULL)), (1, Message(Kind.NULL))]))
        with pytest.raises(CongestViolation):
            sim.step()

    def test_non_neighbor_send(self, p3):
        sim = build(p3, scripted([(2, Message(Kind.NULL))]))
        with pytest.raises(CongestViolation):
            sim.step()

    def test_label_range(self, p3):
        sim = build(p3, scripted([(1, Message(Kind.COMPONENT_IS, 4))]))
        with pytest.raises(CongestViolation):
            sim.step()

    def test_payload_rejected_in_congest(self, p3):
        sim = build(p3, scripted([(1, Message(Kind.TOPOLOGY, payload=((0,), ())))]))
        with pytest.raises(CongestViolation):
            sim.step()

    def test_payload_allowed_without_congest(self, p3):
        sim = build(p3, scripted([(1, Message(Kind.TOPOLOGY, payload=((0,), ())))]),
                    SimConfig(congest=False))
        sim.step()
        assert sim.metrics.total_messages == 1

    def test_dormant_node_must_not_act(self):
        sim = build(generate("path", 2), lambda v, nb, init, n: Eager(v), SimConfig(initiator=0))
        with pytest.raises(ProtocolError):
            sim.step()

    def test_round_budget(self, c4):
        sim = build(c4, bicon_factory(), SimConfig(max_rounds=1))
        with pytest.raises(NonTerminationError):
            run_to_quiescence(sim)

    def test_no_initiator_is_silent(self, c4):
        sim = build(c4, bicon_factory(), SimConfig(initiator=None))
        met = run_to_quiescence(sim)
        assert (met.rounds, met.total_messages, met.max_message_bits) == (0, 0, 0)
        met = sim.run(5)
        assert met.total_messages == 0


class TestRunProperties:
    GRAPHS = [generate("path", 6), generate("cycle", 7), generate("barbell", 4),
              generate("random_connected", 25, 0.15, seed=4), generate("star", 9)]

    @pytest.mark.parametrize("g", GRAPHS)
    def test_deterministic(self, g):
        a, sa = run_biconnectivity(g, trace=True)
        b, sb = run_biconnectivity(g, trace=True)
        assert sa.trace_jsonl() == sb.trace_jsonl()
        assert a.dumps() == b.dumps()

    @pytest.mark.parametrize("g", GRAPHS)
    def test_step_order_irrelevant(self, g):
        a, sa = run_biconnectivity(g, trace=True)
        b, sb = run_biconnectivity(g, trace=True, reverse_order=True)
        assert a.dumps() == b.dumps()
        assert sa.trace_jsonl() == sb.trace_jsonl()

    @pytest.mark.parametrize("g", GRAPHS)
    def test_causality(self, g):
        _, sim = run_biconnectivity(g, initiator=g.n - 1)
        for v, r in sim.first_action_round.items():
            if v != g.n - 1:
                assert r > sim.first_message_round[v]

    @pytest.mark.parametrize("g", GRAPHS)
    def test_congest_audit(self, g):
        _, sim = run_biconnectivity(g, trace=True)
        seen = set()
        for rec in sim.trace:
            key = (rec.round, rec.sender, rec.receiver)
            assert key not in seen
            seen.add(key)
            assert rec.bits <= congest_bound(g.n)
            assert rec.receiver in g.neighbors(rec.sender)

    def test_trace_format(self, p3):
        _, sim = run_biconnectivity(p3, trace=True)
        lines = sim.trace_jsonl().splitlines()
        assert len(lines) == sim.metrics.total_messages
        first = json.loads(lines[0])
        assert first == {"round": 0, "from": 0, "to": 1, "kind": "Explore",
                         "a": None, "b": None, "bits": 4}
        assert {json.loads(x)["kind"] for x in lines} >= {"Explore", "ComponentIs"}

    def test_metrics_json(self, p3):
        res, _ = run_biconnectivity(p3)
        js = res.metrics.to_json()
        assert [c[:2] for c in js["per_edge_counts"]] == [[0, 1], [1, 2]]
        assert sum(c[2] for c in js["per_edge_counts"]) == js["total_messages"]
