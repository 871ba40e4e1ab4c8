import random

import pytest

from textile2d import HypothesisError, SizeGuardError, TextileError, insplit_textile_jm, invert_textile
from textile2d.corpus import random_corpus, random_nontrivial_jm_partition
from textile2d.shiftspace import (BlockMap, RectBlock, apply_block_map, block_boundary,
                                  block_violation, build_block_by_lifting, enumerate_blocks,
                                  extendable_blocks, identity_block_map, is_admissible,
                                  jm_conjugacy_block_maps, lift_row, reconstruct_from_bottom_right,
                                  reconstruct_from_left_top, transpose_block,
                                  verify_conjugacy_on_blocks)
from textile2d.textile import restrict_edges
from oracles import blocks_bruteforce, lifts_bruteforce


def test_rectblock_shape_checks():
    with pytest.raises(ValueError):
        RectBlock((("a", "b"), ("c",)))
    with pytest.raises(ValueError):
        RectBlock(())
    b = RectBlock((("a", "b"), ("c", "d")))
    assert (b.width, b.height, b.cell(1, 0), b.cell(0, 1)) == (2, 2, "b", "c")
    assert str(b) == "a b / c d"


def test_one_by_one(path3):
    T = path3.textile("T")
    assert {b.rows[0][0] for b in enumerate_blocks(T, 1, 1)} == set(T.F.r)


@pytest.mark.parametrize("m,n", [(1, 2), (2, 1), (2, 2), (3, 2), (2, 3)])
def test_enumeration_vs_bruteforce(path3, one_vertex, m, n):
    for T in (path3.textile("T"), one_vertex.textile("T")):
        got = enumerate_blocks(T, m, n)
        assert sorted(b.rows for b in got) == sorted(blocks_bruteforce(T, m, n))
        assert list(got) == sorted(got)


def test_enumeration_vs_bruteforce_corpus():
    for inst in random_corpus(20, seed=11, max_squares=6):
        T = inst.T
        assert sorted(b.rows for b in enumerate_blocks(T, 2, 2)) == sorted(blocks_bruteforce(T, 2, 2))


def test_block_violation_messages(path3):
    T = path3.textile("T")
    assert block_violation(T, RectBlock((("lam2", "lam1"),))) is None
    assert "horizontal" in block_violation(T, RectBlock((("lam1", "lam2"),)))
    assert "vertical" in block_violation(T, RectBlock((("lam2",), ("lam2",))))
    assert "not an edge" in block_violation(T, RectBlock((("zz",),)))


def test_size_guard(path3, monkeypatch):
    monkeypatch.setenv("TEXTILE2D_MAX_CELLS", "4")
    with pytest.raises(SizeGuardError):
        enumerate_blocks(path3.textile("T"), 3, 2)
    monkeypatch.setenv("TEXTILE2D_MAX_CELLS", "36")
    monkeypatch.setenv("TEXTILE2D_MAX_FRONTIER", "3")
    with pytest.raises(SizeGuardError):
        enumerate_blocks(path3.textile("T"), 4, 4)


def test_transpose(path3, one_vertex):
    for T in (path3.textile("T"), one_vertex.textile("T")):
        Th = invert_textile(T)
        for m, n in ((1, 2), (2, 3), (3, 3)):
            assert {transpose_block(b) for b in enumerate_blocks(T, m, n)} == set(enumerate_blocks(Th, n, m))


def test_lift_row_path3(path3):
    T = path3.textile("T")
    row = ("lam3", "lam2", "lam1")
    y = lift_row(T, row, check=False)
    assert y.rows[0] in lifts_bruteforce(T, row)
    assert y.rows[0] == min(lifts_bruteforce(T, row))
    assert lift_row(T, ("lam1",), check=False).rows == (("lam1",),)
    # q misses the lift of e3 at f2, so the hypothesis check refuses
    with pytest.raises(HypothesisError):
        lift_row(T, row)


def test_lift_row_no_lift(path3):
    T = path3.textile("T")
    # inadmissible input
    with pytest.raises(TextileError):
        lift_row(T, ("lam1", "lam2"), check=False)
    # without lam1 nothing has bottom e1 = p(lam2)
    T2 = restrict_edges(T, ["lam2", "lam3", "lam4"])
    assert lifts_bruteforce(T2, ("lam2",)) == []
    with pytest.raises(TextileError, match="no lift"):
        lift_row(T2, ("lam2",), check=False)


def test_build_by_lifting_corpus():
    n = 0
    for inst in random_corpus(40, seed=5, max_squares=8):
        T = inst.T
        try:
            lift_row(T, (T.F.edges[0],))
        except HypothesisError:
            continue
        n += 1
        for base in enumerate_blocks(T, 3, 1):
            b = build_block_by_lifting(T, base.rows[0], 3)
            assert is_admissible(T, b)
            assert b in set(enumerate_blocks(T, 3, 3))
    assert n > 0


def test_reconstruction_lr(path3):
    T = path3.textile("T")
    for m, n in ((2, 2), (3, 2), (2, 3)):
        for b in enumerate_blocks(T, m, n):
            bd = block_boundary(T, b)
            assert reconstruct_from_left_top(T, bd["lefts"], bd["tops"]) == b
            assert reconstruct_from_bottom_right(T, bd["bottoms"], bd["rights"]) == b


def test_reconstruction_fails_without_lr(not_lr):
    T = not_lr.textile("bad")
    results = [reconstruct_from_left_top(T, **{k: v for k, v in block_boundary(T, b).items()
                                                if k in ("lefts", "tops")})
               for b in enumerate_blocks(T, 1, 1)]
    assert None in results


def test_apply_block_map_shapes(one_vertex):
    T = one_vertex.textile("T")
    conj = jm_conjugacy_block_maps(T, one_vertex.partitions["P"].partition)
    for b in enumerate_blocks(T, 3, 2):
        img = apply_block_map(conj.psi, b)
        assert (img.width, img.height) == (2, 2)
    with pytest.raises(Exception):
        apply_block_map(conj.psi, enumerate_blocks(T, 1, 1)[0])


def test_identity_map(path3):
    T = path3.textile("T")
    I = identity_block_map(T)
    for b in enumerate_blocks(T, 3, 3):
        assert apply_block_map(I, b) == b
    assert verify_conjugacy_on_blocks(T, T, I, I, 3).ok


def test_conjugacy_one_vertex(one_vertex):
    T = one_vertex.textile("T")
    conj = jm_conjugacy_block_maps(T, one_vertex.partitions["P"].partition)
    rep = verify_conjugacy_on_blocks(T, conj.TI, conj.psi, conj.phi, 4)
    assert rep.ok, rep.counterexample
    assert rep.blocks_checked > 0


def test_corrupted_psi_detected(one_vertex):
    T = one_vertex.textile("T")
    conj = jm_conjugacy_block_maps(T, one_vertex.partitions["P"].partition)
    table = dict(conj.psi.table)
    key = next(k for k, v in sorted(table.items()) if v.endswith("^2"))
    table[key] = table[key][:-1] + "1"
    bad = BlockMap(conj.psi.window, table)
    rep = verify_conjugacy_on_blocks(T, conj.TI, bad, conj.phi, 4)
    assert not rep.ok and rep.counterexample


def test_counts_monotone_and_shift_invariant():
    for inst in random_corpus(15, seed=9, max_squares=8):
        T = inst.T
        for m in (1, 2, 3):
            ext = extendable_blocks(T, m, 2)
            full = set(enumerate_blocks(T, m, 2))
            assert ext <= full
            # crops of admissible blocks are admissible in every position
            for b in enumerate_blocks(T, m + 1, 2):
                assert b.crop(1, 0, m, 2) in full and b.crop(0, 0, m, 2) in full


def test_psi_commutes_with_shift():
    rng = random.Random(3)
    for inst in random_corpus(20, seed=17, max_squares=8):
        P = random_nontrivial_jm_partition(rng, inst.T.F)
        if P is None:
            continue
        conj = jm_conjugacy_block_maps(inst.T, P)
        for b in enumerate_blocks(inst.T, 4, 2):
            whole = apply_block_map(conj.psi, b)
            assert apply_block_map(conj.psi, b.crop(1, 0, 3, 2)) == whole.crop(1, 0, 2, 2)
            assert apply_block_map(conj.psi, b.crop(0, 1, 4, 1)) == whole.crop(0, 1, 3, 1)


def test_insplit_changes_nothing_for_conjugacy_checker_trivial(path3):
    from textile2d import GraphInsplitPartition
    T = path3.textile("T")
    conj = jm_conjugacy_block_maps(T, GraphInsplitPartition.trivial(T.F))
    assert verify_conjugacy_on_blocks(T, conj.TI, conj.psi, conj.phi, 3).ok
    assert insplit_textile_jm(T, GraphInsplitPartition.trivial(T.F)) == conj.TI
