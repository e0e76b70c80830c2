"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the verdict lines are
written straight to the terminal even when output capture is on.
"""

import time
from dataclasses import dataclass

import pytest

from edgebicon.check import gadget_edges, lca_violations, preorder_violations
from edgebicon.cli import main
from edgebicon.corpus import atlas_catalog, gadget_pairs, local_sample, random_corpus
from edgebicon.graph import attach_gadget, diameter
from edgebicon.local import HorizonExhausted, classification_correct_round, doubling_run, run_local
from edgebicon.oracles import bridges_bruteforce, components_oracle, cycle_witness_radius
from edgebicon.protocol import run_biconnectivity
from edgebicon.sim import congest_bound


def verdict(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")


def partition(labels):
    groups = {}
    for v, lab in enumerate(labels):
        groups.setdefault(lab, set()).add(v)
    return frozenset(frozenset(s) for s in groups.values())


@dataclass
class Record:
    source: str
    n: int
    m: int
    diam: int
    bridges_ok: bool
    partition_ok: bool
    rounds: int
    messages: int
    max_bits: int
    silent: int
    tree_bad: int
    eq1_ok: bool


def sweep(entries):
    records = []
    for source, g in entries:
        res, _ = run_biconnectivity(g)
        brute = bridges_bruteforce(g)
        met = res.metrics
        records.append(Record(
            source, g.n, g.m, diameter(g),
            bridges_ok=res.classification.bridges == brute,
            partition_ok=res.classification.partition() == partition(components_oracle(g, brute)),
            rounds=met.rounds, messages=met.total_messages, max_bits=met.max_message_bits,
            silent=sum(1 for c in met.per_edge_counts.values() if c < 1),
            tree_bad=len(preorder_violations(res)) + lca_violations(res, 20, 10_000),
            eq1_ok=res.marked_edges | res.cross_edges == g.edges - brute,
        ))
    return records


@pytest.fixture(scope="module")
def exhaustive():
    t0 = time.perf_counter()
    records = sweep((f"atlas:{i}", g) for i, g in enumerate(atlas_catalog(7)))
    return records, time.perf_counter() - t0


@pytest.fixture(scope="module")
def randomized():
    t0 = time.perf_counter()
    records = sweep((f"seed={s}", g) for s, g in random_corpus(500, max_n=60))
    return records, time.perf_counter() - t0


@pytest.fixture(scope="module")
def gadget_runs():
    out = []
    for seed, g, e in gadget_pairs(50, 30):
        res, _ = run_biconnectivity(g)
        g2 = attach_gadget(g, e)
        res2, _ = run_biconnectivity(g2)
        brute = bridges_bruteforce(g2)
        wrong = [x for x in gadget_edges(g.n, e)
                 if (x in res2.classification.bridges) != (x in brute)]
        out.append((seed, g, g2, res, res2, wrong))
    return out


def test_1_exhaustive_oracle_equivalence(capsys, exhaustive):
    records, secs = exhaustive
    bad = [r.source for r in records if not (r.bridges_ok and r.partition_ok)]
    ok = len(records) == 996 and not bad and secs < 120
    verdict(capsys, 1, ok, f"{len(records)} connected graphs on <= 7 nodes, "
                           f"{len(bad)} mismatches, {secs:.1f}s (limit 120s)")
    assert ok, bad[:10]


def test_2_random_oracle_equivalence(capsys, randomized):
    records, secs = randomized
    bad = [r.source for r in records if not (r.bridges_ok and r.partition_ok)]
    ok = len(records) == 500 and max(r.n for r in records) <= 60 and not bad and secs < 60
    verdict(capsys, 2, ok, f"500 random graphs (n <= 60), {len(bad)} mismatches, "
                           f"{secs:.1f}s (limit 60s)")
    assert ok, bad[:10]


def test_3_round_and_message_bounds(capsys, randomized):
    records, _ = randomized
    over_r = [r.source for r in records if r.rounds > 12 * r.diam + 12]
    over_m = [r.source for r in records if r.messages > 8 * r.m + 8]
    max_rd = max(r.rounds / r.diam for r in records if r.diam)
    max_rd_affine = max((r.rounds - 12) / r.diam for r in records if r.diam)
    max_mm = max(r.messages / r.m for r in records)
    ok = not over_r and not over_m
    verdict(capsys, 3, ok, f"max rounds/Diam={max_rd:.3f}, max (rounds-12)/Diam="
                           f"{max_rd_affine:.3f}, max messages/m={max_mm:.3f}; "
                           f"{len(over_r)} over 12*Diam+12, {len(over_m)} over 8m+8")
    assert ok


def test_4_message_width(capsys, exhaustive, randomized, gadget_runs):
    runs = [(r.n, r.max_bits) for r in exhaustive[0] + randomized[0]]
    for _, g, g2, res, res2, _ in gadget_runs:
        runs += [(g.n, res.metrics.max_message_bits), (g2.n, res2.metrics.max_message_bits)]
    over = [(n, b) for n, b in runs if b > congest_bound(n)]
    worst = max(b - congest_bound(n) for n, b in runs)
    ok = not over
    verdict(capsys, 4, ok, f"{len(runs)} congest runs, {len(over)} over 4+2*ceil(log2(n+1)) bits, "
                           f"tightest slack {-worst} bits")
    assert ok


def test_5_message_coverage_and_gadget(capsys, exhaustive, randomized, gadget_runs):
    silent = [r.source for r in exhaustive[0] + randomized[0] if r.silent]
    silent += [f"gadget:{s}" for s, _, _, res, res2, _ in gadget_runs
               if min(res.metrics.per_edge_counts.values(), default=1) < 1
               or min(res2.metrics.per_edge_counts.values()) < 1]
    wrong = [(s, w) for s, *_, w in gadget_runs if w]
    ok = not silent and not wrong and len(gadget_runs) == 50
    verdict(capsys, 5, ok, f"{len(silent)} runs with a silent edge; gadget reruns "
                           f"{50 - len(wrong)}/50 with all 10 gadget edges correct")
    assert ok


def test_6_preorder_and_lca(capsys, exhaustive, randomized):
    records = exhaustive[0] + randomized[0]
    bad = [r.source for r in records if r.tree_bad]
    exhaustive_trees = sum(1 for r in records if r.n <= 20)
    ok = not bad
    verdict(capsys, 6, ok, f"{len(records)} trees ({exhaustive_trees} with all triples, "
                           f"{len(records) - exhaustive_trees} with 10^4 sampled), {len(bad)} violating")
    assert ok, bad[:10]


def test_7_marked_plus_cross_is_cycle_edge_set(capsys, exhaustive, randomized):
    bad = [r.source for r in exhaustive[0] + randomized[0] if not r.eq1_ok]
    ok = not bad
    verdict(capsys, 7, ok, f"marked tree edges + cross edges = C on both corpora, "
                           f"{len(bad)} mismatches")
    assert ok, bad[:10]


def test_8_local_algorithm(capsys):
    t0 = time.perf_counter()
    sample = local_sample(200, 10)
    late, unsound, slow_doubling, unstable = [], [], [], []
    ratio_local = ratio_doubling = 0.0
    for seed, g in sample:
        truth = bridges_bruteforce(g)
        ups = cycle_witness_radius(g)
        rounds = max(2 * ups, diameter(g)) + 1
        run, _ = run_local(g, rounds)
        for snap in run.snapshots:
            if any(marks & truth for marks in snap):
                unsound.append(seed)
                break
        try:
            correct = classification_correct_round(run, truth)
        except HorizonExhausted:
            late.append(seed)
            continue
        if correct > 2 * ups:
            late.append(seed)
        try:
            rep = doubling_run(g, 8 * ups + 4, truth)
        except HorizonExhausted:
            slow_doubling.append(seed)
            continue
        if not rep.stable:
            unstable.append(seed)
        if ups:
            ratio_local = max(ratio_local, correct / ups)
            ratio_doubling = max(ratio_doubling, rep.rounds_to_correct / ups)
    secs = time.perf_counter() - t0
    ok = not (late or unsound or slow_doubling or unstable) and secs < 300
    verdict(capsys, 8, ok, f"200 graphs (n <= 10): {len(late)} late, {len(unsound)} unsound, "
                           f"{len(slow_doubling)} doubling over 8*U+4, {len(unstable)} unstable; "
                           f"max correct_round/U={ratio_local:.2f}, "
                           f"max doubling rounds/U={ratio_doubling:.2f}, {secs:.1f}s (limit 300s)")
    assert ok


def test_9_check_is_deterministic(capsys, tmp_path):
    argv = ["check", "--exhaustive", "7", "--random", "500", "--max-n", "60", "--first-seed", "1"]
    paths = [tmp_path / "first.json", tmp_path / "second.json"]
    codes = []
    for path in paths:
        codes.append(main(argv + ["--out", str(path)]))
    capsys.readouterr()
    same = paths[0].read_bytes() == paths[1].read_bytes()
    ok = same and codes == [0, 0]
    verdict(capsys, 9, ok, f"two full check runs, exit codes {codes}, reports "
                           f"{'byte-identical' if same else 'DIFFER'} "
                           f"({len(paths[0].read_bytes())} bytes)")
    assert ok
