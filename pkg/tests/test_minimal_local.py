# tests/test_minimal_local.py
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from geometry.errors import DomainError, PreconditionError
from geometry.partitions import AboutPartition, LocalPartition, validate_local_partition
from geometry.rects import HalfRect
from services import minimal_local
from services.minimal_local import (CanonicalForm, TreeNode, are_orthogonal_about, build_from_tree,
                                    canonical_form, cubical_oracle, enumerate_minimal_about,
                                    enumerate_minimal_by_matrices, enumerate_trees, find_ej_pair,
                                    is_minimal_about, is_minimal_local, merge_pair, minimality_witness,
                                    project_halves, tree_from_choices, union_box_homeomorphic, validate_certificate,
                                    validate_tree)
from services.separative import Config, PrincipalMatrix, cover_from_matrix, principal_matrix, r0_window


def octant():
    return cover_from_matrix(PrincipalMatrix.of(Config.OCTANT_ROWS))


def halves_1d():
    return AboutPartition.of(HalfRect((-2,), (2,)), (HalfRect((-2,), (0,)), HalfRect((0,), (2,))), (0,))


def three_piece_2d():
    """Вертикальный разрез и горизонтальный разрез левой половины."""
    return build_from_tree(CanonicalForm((0, 1), tree_from_choices((0, 1))), r0_window(2), (0, 0))


@st.composite
def minimal_partitions(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    k = draw(st.integers(0, n))
    indices = tuple(draw(st.permutations(range(n)))[:k])
    choices = tuple(draw(st.integers(0, level)) for level in range(k))
    return build_from_tree(CanonicalForm(indices, tree_from_choices(choices)), r0_window(n), (0,) * n)


def test_minimality_examples():
    orthants = cover_from_matrix(PrincipalMatrix.of(((1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1),
                                                     (-1, 1, 1), (-1, 1, -1), (-1, -1, 1), (-1, -1, -1))))
    assert not is_minimal_about(orthants)
    assert is_minimal_about(halves_1d())
    assert not is_minimal_about(octant())


def test_minimal_local_examples():
    window = HalfRect.cube(2, 0, 4)
    assert is_minimal_local(LocalPartition(window, (window,)))
    quarters = LocalPartition(window, tuple(HalfRect((a, b), (a + 2, b + 2)) for a in (0, 2) for b in (0, 2)))
    assert not is_minimal_local(quarters)
    witness = minimality_witness(quarters)
    assert (witness.point2, witness.nu, witness.beta) == ((4, 4), 4, 2)


def test_project_halves():
    orthants = cover_from_matrix(PrincipalMatrix.of(((1, 1), (1, -1), (-1, 1), (-1, -1))))
    upper = project_halves(orthants, 0, 1)
    assert sorted(upper.pieces) == [HalfRect((-2,), (0,)), HalfRect((0,), (2,))]
    window = r0_window(3)
    single = project_halves(AboutPartition.of(window, (window,), (0, 0, 0)), 1, -1)
    assert single.pieces == (r0_window(2),)
    lower = project_halves(three_piece_2d(), 0, -1)
    assert len(lower.pieces) == 2 and is_minimal_about(lower)
    with pytest.raises(DomainError):
        project_halves(halves_1d(), 0, 1)


def test_find_ej_pair_examples():
    pair = find_ej_pair(halves_1d())
    assert pair.axis == 0
    assert {pair.plus, pair.minus} == {0, 1}
    with pytest.raises(PreconditionError):
        find_ej_pair(octant())


def test_build_from_tree_examples():
    window = r0_window(2)
    assert build_from_tree(CanonicalForm((), TreeNode(0)), window, (0, 0)).pieces == (window,)
    assert sorted(three_piece_2d().pieces) == sorted([HalfRect((0, -2), (2, 2)), HalfRect((-2, 0), (0, 2)),
                                                      HalfRect((-2, -2), (0, 0))])
    with pytest.raises(DomainError):
        build_from_tree(CanonicalForm((0, 0), tree_from_choices((0, 0))), window, (0, 0))


def test_validate_tree_rejects_bad_labels():
    with pytest.raises(DomainError):
        validate_tree(TreeNode(0, (TreeNode(1), TreeNode(1))), 1)
    with pytest.raises(DomainError):
        validate_tree(TreeNode(0, (TreeNode(0),)), 1)
    validate_tree(tree_from_choices((0, 1, 2)), 3)


@pytest.mark.parametrize('k,count', [(0, 1), (1, 1), (2, 2), (3, 6), (4, 24)])
def test_enumerate_trees_counts(k, count):
    assert len(enumerate_trees(k)) == count


def test_canonical_form_examples():
    window = r0_window(2)
    trivial = canonical_form(AboutPartition.of(window, (window,), (0, 0)))
    assert trivial.indices == () and trivial.tree == TreeNode(0)
    line = canonical_form(halves_1d())
    assert line.indices == (0,) and line.k == 1
    with pytest.raises(PreconditionError):
        canonical_form(octant())


@given(minimal_partitions())
def test_canonical_form_round_trip(about):
    assert is_minimal_about(about)
    assert validate_local_partition(about.pieces, about.window, about.x).valid_about
    cf = canonical_form(about)
    rebuilt = build_from_tree(cf, about.window, about.x)
    assert rebuilt.base.same_pieces(about.base)
    assert CanonicalForm.from_json(cf.to_json()) == cf


@given(minimal_partitions())
def test_ej_pair_merge_lowers_beta(about):
    if len(about.pieces) == 1:
        return
    pair = find_ej_pair(about)
    merged = merge_pair(about, pair)
    assert validate_local_partition(merged.pieces, merged.window, merged.x).valid_about
    assert len(principal_matrix(merged).nonzero_columns()) == len(principal_matrix(about).nonzero_columns()) - 1


@given(minimal_partitions())
def test_projected_halves_stay_minimal(about):
    if about.n < 2:
        return
    for j in range(about.n):
        for sign in (1, -1):
            assert is_minimal_about(project_halves(about, j, sign))


def test_enumeration_counts():
    assert len(enumerate_minimal_about(2, 2)) == 4
    for n in (1, 2, 3):
        assert len(enumerate_minimal_about(n, 0)) == 1
    with pytest.raises(DomainError):
        enumerate_minimal_about(2, 3)


@pytest.mark.parametrize('n,k', [(2, 1), (2, 2), (3, 2), (3, 3)])
def test_enumeration_agrees_with_matrices(n, k):
    found = [tuple(sorted(a.pieces)) for a in enumerate_minimal_about(n, k)]
    assert found == enumerate_minimal_by_matrices(n, k)


def test_orthogonality_examples():
    window = r0_window(2)
    vertical = AboutPartition.of(window, (HalfRect((-2, -2), (0, 2)), HalfRect((0, -2), (2, 2))), (0, 0))
    horizontal = AboutPartition.of(window, (HalfRect((-2, -2), (2, 0)), HalfRect((-2, 0), (2, 2))), (0, 0))
    assert are_orthogonal_about(vertical, horizontal)
    assert not are_orthogonal_about(vertical, vertical)
    shifted = AboutPartition.of(window, horizontal.pieces, (0, 1))
    with pytest.raises(DomainError):
        are_orthogonal_about(vertical, shifted)


def test_union_examples():
    about = three_piece_2d()
    ok, certificate = union_box_homeomorphic(about, range(3))
    assert ok and certificate.kind == 'window'
    ok, certificate = union_box_homeomorphic(about, [1])
    assert ok and certificate.kind == 'piece' and certificate.box == about.pieces[1]
    with pytest.raises(DomainError):
        union_box_homeomorphic(about, [])


def test_union_verdict_comes_from_certificate(monkeypatch):
    about = three_piece_2d()
    monkeypatch.setattr(minimal_local, 'certificate_region', lambda certificate: [about.window])
    ok, certificate = union_box_homeomorphic(about, [1])
    assert not ok and certificate.kind == 'piece'
    ok, _ = union_box_homeomorphic(about, range(3))
    assert ok


def test_cubical_oracle_needs_shared_faces():
    wedge = cubical_oracle([HalfRect((0, 0), (2, 2)), HalfRect((2, 2), (4, 4))])
    assert wedge.euler == 1
    assert not wedge.connected and not wedge.ball_like
    strip = cubical_oracle([HalfRect((0, 0), (2, 2)), HalfRect((2, 0), (4, 2))])
    assert strip.connected and strip.ball_like
    corner_3d = cubical_oracle([HalfRect.cube(3, 0, 2), HalfRect((2, 2, 0), (4, 4, 2))])
    assert not corner_3d.connected


def _check_all_unions(about: AboutPartition):
    count = len(about.pieces)
    for size in range(1, count + 1):
        for subset in combinations(range(count), size):
            ok, certificate = union_box_homeomorphic(about, subset)
            boxes = [about.pieces[i] for i in subset]
            assert ok and validate_certificate(certificate, boxes)
            assert cubical_oracle(boxes).ball_like


@pytest.mark.parametrize('n', [1, 2])
def test_all_unions_are_boxes(n):
    for k in range(n + 1):
        for about in enumerate_minimal_about(n, k):
            _check_all_unions(about)


@pytest.mark.slow
def test_all_unions_are_boxes_3d():
    for k in range(4):
        for about in enumerate_minimal_about(3, k):
            _check_all_unions(about)


def test_cubical_oracle_rejects_ring():
    ring = [HalfRect((0, 0), (6, 2)), HalfRect((0, 4), (6, 6)), HalfRect((0, 2), (2, 4)), HalfRect((4, 2), (6, 4))]
    result = cubical_oracle(ring)
    assert result.connected and result.euler == 0 and not result.ball_like
    apart = cubical_oracle([HalfRect((0, 0), (2, 2)), HalfRect((4, 4), (6, 6))])
    assert not apart.connected


@pytest.mark.slow
def test_enumeration_in_four_dimensions_is_minimal():
    for k in range(5):
        for about in enumerate_minimal_about(4, k):
            assert len(about.pieces) == k + 1
            assert is_minimal_about(about)
            if k:
                find_ej_pair(about)
