import random
import warnings

import pytest

from textile2d import GraphInsplitPartition, HypothesisError, PairingError, PartitionError
from textile2d.corpus import random_corpus
from textile2d.graph import graphs_isomorphic
from textile2d.shiftspace import enumerate_blocks, extendable_blocks
from textile2d.textile import lifting_report
from textile2d.twograph import (TwoGraphInsplitPartition, enumerate_pairing_partitions,
                                insplit_twograph, textile_to_twograph)
from textile2d.moves import (check_e_hypothesis, check_f_hypotheses, derive_partitions,
                             e_from_f, f_from_e, g_from_e, roundtrip_equivalences, thm61_pipeline,
                             thm_lr_insplit, thm_main_iii, thm_priyanga, twograph_insplit_textile)


@pytest.fixture
def parts62(path3):
    return (path3.textile("T"), path3.partitions["G"].partition,
            path3.partitions["Fpart"].partition, path3.partitions["Epart"].partition)


def test_derive_from_each_kind(parts62):
    T, G, Fp, Ep = parts62
    for kind, P in (("G", G), ("F", Fp), ("E", Ep)):
        d = derive_partitions(T, kind, P)
        assert (d.G, d.Fpart, d.Epart) == (G, Fp, Ep)
        assert d.provenance == kind
    with pytest.raises(ValueError):
        derive_partitions(T, "X", G)


def test_pipeline_path3(parts62):
    T, G, _, _ = parts62
    res = thm61_pipeline(T, G)
    assert res.sizes == (5, 3, 7, 7, 5)
    assert sorted(res.excluded) == ["lam4^1^2", "lam4^2^1"]
    assert sorted(res.relabel.values()) == ["lam1^1", "lam2^1", "lam3^1", "lam4^1", "lam4^2"]
    TL = twograph_insplit_textile(T, G)
    for m in (1, 2, 3):
        for n in (1, 2, 3):
            assert set(enumerate_blocks(res.pruned, m, n)) == set(enumerate_blocks(TL, m, n))
    assert graphs_isomorphic(res.T_D.E, TL.E) is None


def test_pipeline_excluded_only_off_the_corner(parts62):
    T, G, _, _ = parts62
    res = thm61_pipeline(T, G)
    # excluded squares occur in admissible 2x2 blocks but never in the bottom-left cell
    blocks = enumerate_blocks(res.T_D, 2, 2)
    for x in res.excluded:
        assert any(x in sum(b.rows, ()) for b in blocks)
        assert all(b.cell(0, 0) != x for b in blocks)
    ren = res.relabel
    ext = {b.relabel(ren) for b in extendable_blocks(res.T_D, 2, 2)}
    assert ext == set(extendable_blocks(twograph_insplit_textile(T, G), 2, 2))


def test_three_constructions_agree(parts62):
    T, G, Fp, Ep = parts62
    t1 = thm_priyanga(T, G)
    t2, g2 = thm_lr_insplit(T, Fp)
    f3, g3, t3 = thm_main_iii(T, Ep)
    assert t1 == t2 == t3
    assert g2 == G == g3 and f3 == Fp
    assert lifting_report(t1).is_LR
    assert t1.q.edge_map["lam4^1"] == t1.q.edge_map["lam4^2"] == "e3^2"
    LI, _ = insplit_twograph(textile_to_twograph(T), G)
    assert textile_to_twograph(t1) == LI


@pytest.mark.parametrize("start", ["G", "F", "E"])
def test_roundtrip_path3(parts62, start):
    T, G, Fp, Ep = parts62
    rep = roundtrip_equivalences(T, start, {"G": G, "F": Fp, "E": Ep}[start])
    assert rep.ok, rep.mismatches
    assert set(rep.systems) == {"G", "F", "E"}


def test_e_partition_reordered_and_incomplete(parts62):
    T, _, _, _ = parts62
    swapped = GraphInsplitPartition({"v": ({"e1"},), "w": ({"e3"}, {"e2"})})
    check_e_hypothesis(T, swapped)
    assert lifting_report(thm_main_iii(T, swapped)[2]).is_LR
    with pytest.raises(PartitionError):
        check_e_hypothesis(T, GraphInsplitPartition({"v": ({"e1"},), "w": ({"e2"},)}))


def test_e_hypothesis_straddle():
    from textile2d.textile import textile_from_squares
    from textile2d.graph import DirectedGraph
    E = DirectedGraph.from_edges(["o"], [("a", "o", "o"), ("b", "o", "o")])
    T = textile_from_squares(E, {"u": ("o", "o")}, {
        "x": ("u", "a", "u", "a"), "y": ("u", "b", "u", "b")})
    assert lifting_report(T).is_LR
    with pytest.raises(HypothesisError, match="straddles"):
        check_e_hypothesis(T, GraphInsplitPartition({"o": ({"a"}, {"b"})}))


def test_f_hypotheses(parts62):
    T, _, Fp, _ = parts62
    check_f_hypotheses(T, Fp)
    merged = GraphInsplitPartition({"f1": ({"lam1"},), "f2": ({"lam2"},), "f3": ({"lam3", "lam4"},)})
    check_f_hypotheses(T, merged)
    t, g = thm_lr_insplit(T, merged)
    assert g.is_trivial()


def test_priyanga_rejects_bad_pairing(parts62):
    T, _, _, _ = parts62
    bad = TwoGraphInsplitPartition({"v": ({"e1"}, {"f1"}), "w": ({"e2", "f2", "e3", "f3"},)})
    with pytest.raises(PairingError):
        thm_priyanga(T, bad)


def test_not_lr_refused(not_lr):
    T = not_lr.textile("bad")
    with pytest.raises(HypothesisError):
        derive_partitions(T, "F", GraphInsplitPartition.trivial(T.F))


def test_trivial_partition_gives_copy(parts62):
    T, _, _, _ = parts62
    G = TwoGraphInsplitPartition.trivial(textile_to_twograph(T))
    t = thm_priyanga(T, G)
    assert len(t.F.r) == len(T.F.r) and len(t.E.r) == len(T.E.r)
    assert graphs_isomorphic(t.F, T.F) is not None


def test_partition_conversions_inverse(parts62):
    T, G, Fp, Ep = parts62
    assert g_from_e(T, Ep) == G
    assert f_from_e(T, Ep) == Fp
    assert e_from_f(T, Fp) == Ep


def test_priyanga_warns_when_p_not_onto():
    from textile2d.textile import textile_from_squares
    from textile2d.graph import DirectedGraph
    E = DirectedGraph.from_edges(["o", "z"], [("a", "o", "o"), ("c", "z", "z")])
    # nothing sits over z, so LR holds vacuously there while c is never hit
    T = textile_from_squares(E, {"u": ("o", "o")}, {"x": ("u", "a", "u", "a")})
    assert lifting_report(T).is_LR
    G = TwoGraphInsplitPartition.trivial(textile_to_twograph(T))
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        thm_priyanga(T, G)
    assert w
    with pytest.raises(HypothesisError, match="not surjective"):
        thm_lr_insplit(T, GraphInsplitPartition.trivial(T.F))


@pytest.mark.parametrize("seed", range(2))
def test_corpus_coherence_sample(seed):
    rng = random.Random(seed)
    for inst in random_corpus(15, seed=400 + seed, max_squares=8):
        L = textile_to_twograph(inst.T)
        Ps = enumerate_pairing_partitions(L, limit=20)
        for G in rng.sample(Ps, min(3, len(Ps))):
            rep = roundtrip_equivalences(inst.T, "G", G)
            assert rep.ok, rep.mismatches


def test_f_hypothesis_two_fails():
    from textile2d.textile import textile_from_squares
    from textile2d.graph import DirectedGraph
    E = DirectedGraph.from_edges(["o"], [("a", "o", "o"), ("b", "o", "o")])
    T = textile_from_squares(E, {"u": ("o", "o")}, {
        "x": ("u", "a", "u", "a"), "y": ("u", "b", "u", "b")})
    with pytest.raises(HypothesisError, match="hypothesis \\(2\\)"):
        check_f_hypotheses(T, GraphInsplitPartition({"u": ({"x"}, {"y"})}))
