import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ballperm.irreps import (
    REFERENCE_BRIDGE,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    StandardTableau,
    axial_distance,
    branch,
    bridge_matrix,
    bridge_matrix_check,
    character,
    commutator,
    conjugate,
    hook_dim,
    irrep_unitary,
    left_regular_transposition,
    lie_closure_dim,
    parse_partition,
    partitions,
    path_decode,
    path_encode,
    project_identity_norm,
    project_norm,
    project_state,
    projector_matrix,
    su2_commutator_expressions,
    syt_enumerate,
    transposition_image,
    two_row_decode,
    two_row_encode,
    yy_matrix,
    yy_transposition,
)
from ballperm.perm import all_perms, compose, identity
from ballperm.state import Circuit, LabelSwap, PartialSwap, apply_unitary_circuit, init_state, trace
from helpers import random_circuit


def test_partitions_small():
    assert partitions(4) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert conjugate((3, 1)) == (2, 1, 1)
    assert parse_partition("3,1") == (3, 1)
    with pytest.raises(ValueError):
        parse_partition("1,3")
    with pytest.raises(ValueError):
        hook_dim((2, 0, 1))


def test_hook_dim_examples():
    assert hook_dim((2, 1)) == 2
    assert hook_dim((3, 1)) == 3


@pytest.mark.parametrize("n", range(1, 8))
def test_hook_dim_matches_enumeration(n):
    for lam in partitions(n):
        assert hook_dim(lam) == len(syt_enumerate(lam))
    assert sum(hook_dim(lam) ** 2 for lam in partitions(n)) == math.factorial(n)


def test_tableau_order_is_row_word_lexicographic():
    for lam in [(3, 2), (2, 2, 1), (3, 1, 1)]:
        words = [t.row_word() for t in syt_enumerate(lam)]
        assert words == sorted(words)
    assert [str(t) for t in syt_enumerate((3, 1))] == ["(1,2,3;4)", "(1,2,4;3)", "(1,3,4;2)"]


def test_tableau_validation():
    with pytest.raises(ValueError):
        StandardTableau(((1, 2), (3,))).swapped(1)
    with pytest.raises(ValueError):
        StandardTableau(((2, 1),))
    t = StandardTableau(((1, 2), (3,)))
    assert StandardTableau.from_row_word(t.row_word()) == t
    assert t.to_json() == [[1, 2], [3]]


def test_axial_distance_examples():
    assert axial_distance(StandardTableau(((1, 2), (3,))), 1) == 1
    assert axial_distance(StandardTableau(((1, 3), (2,))), 1) == -1
    assert axial_distance(StandardTableau(((1, 2), (3,))), 2) == -2


def test_axial_distance_unit_iff_adjacent_cells():
    for lam in partitions(5):
        for t in syt_enumerate(lam):
            for k in range(1, 5):
                (r1, c1), (r2, c2) = t.cell(k), t.cell(k + 1)
                d = axial_distance(t, k)
                assert (d == 1) == (r1 == r2)
                assert (d == -1) == (c1 == c2)


def test_yy_examples():
    assert np.allclose(yy_transposition((2, 1), 1), np.diag([1, -1]), atol=1e-12)
    expected = np.array([[-0.5, math.sqrt(3) / 2], [math.sqrt(3) / 2, 0.5]])
    assert np.allclose(yy_transposition((2, 1), 2), expected, atol=1e-12)


@pytest.mark.parametrize("lam", [lam for n in range(2, 7) for lam in partitions(n)])
def test_yy_involution_and_symmetry(lam):
    f = hook_dim(lam)
    for k in range(1, sum(lam)):
        m = yy_transposition(lam, k)
        assert np.allclose(m, m.T, atol=1e-12)
        assert np.allclose(m @ m, np.eye(f), atol=1e-12)


def test_yy_matrix_is_homomorphism():
    lam = (3, 2)
    rng = np.random.default_rng(0)
    perms = list(all_perms(5))
    for _ in range(30):
        p, q = (perms[int(i)] for i in rng.integers(len(perms), size=2))
        assert np.allclose(yy_matrix(lam, compose(p, q)), yy_matrix(lam, p) @ yy_matrix(lam, q), atol=1e-12)


def test_irrep_unitary_examples():
    theta = 0.6
    u = irrep_unitary(Circuit(3, (PartialSwap(theta, 1),)), (2, 1))
    assert np.allclose(u, np.diag([np.exp(1j * theta), np.exp(-1j * theta)]), atol=1e-12)
    for lam in partitions(4):
        assert np.allclose(irrep_unitary(Circuit(4, ()), lam), np.eye(hook_dim(lam)))


def test_irrep_trace_cross_check_n3():
    theta = 0.6
    C = Circuit(3, (PartialSwap(theta, 1),))
    total = sum(hook_dim(lam) * np.trace(irrep_unitary(C, lam)) for lam in partitions(3))
    assert total == pytest.approx(6 * math.cos(theta), abs=1e-12)
    assert trace(C) == pytest.approx(total, abs=1e-12)


@pytest.mark.parametrize("side", ["left", "right"])
def test_irrep_unitary_is_unitary_with_nonadjacent(side):
    rng = np.random.default_rng(1)
    C = random_circuit(rng, 5, 15, side=side, adjacent=False)
    total = 0
    for lam in partitions(5):
        u = irrep_unitary(C, lam)
        assert np.allclose(u.conj().T @ u, np.eye(len(u)), atol=1e-10)
        total += hook_dim(lam) * np.trace(u)
    assert total == pytest.approx(trace(C), abs=1e-9)


def test_irrep_unitary_rejects():
    with pytest.raises(ValueError):
        irrep_unitary(Circuit(3, (PartialSwap(0.1, 1), PartialSwap(0.1, 2, 3, "right"))), (2, 1))
    with pytest.raises(ValueError):
        irrep_unitary(Circuit(3, (LabelSwap.from_pairs({(1, 2): 0.1}, 1),)), (2, 1))
    with pytest.raises(ValueError):
        irrep_unitary(Circuit(3, ()), (2, 2))


def test_branch_examples():
    assert [g.sub_shape for g in branch((2, 2))] == [(2, 1)]
    assert [g.sub_shape for g in branch((3, 1))] == [(2, 1), (3,)]
    assert [g.sub_shape for g in branch((5,))] == [(4,)]


@pytest.mark.parametrize("lam", [(3, 1), (2, 2), (3, 2), (2, 2, 1), (3, 1, 1), (4, 2)])
def test_branch_blocks_restrict_exactly(lam):
    n = sum(lam)
    groups = branch(lam)
    for k in range(1, n - 1):
        m = yy_transposition(lam, k)
        for g in groups:
            idx = np.array(g.indices)
            assert np.allclose(m[np.ix_(idx, idx)], yy_transposition(g.sub_shape, k), atol=1e-12)
            rest = np.setdiff1d(np.arange(len(m)), idx)
            assert np.allclose(m[np.ix_(idx, rest)], 0, atol=1e-12)


def test_character_examples():
    assert character((2, 1), (1, 2, 3)) == pytest.approx(2)
    assert character((2, 1), (2, 1, 3)) == pytest.approx(0, abs=1e-12)
    assert character((2, 1), (2, 3, 1)) == pytest.approx(-1)


def test_character_orthogonality_n4():
    perms = list(all_perms(4))
    for a, b in itertools.product(partitions(4), repeat=2):
        ip = sum(character(a, p) * character(b, p) for p in perms) / 24
        assert ip == pytest.approx(1.0 if a == b else 0.0, abs=1e-9)


def test_project_identity_norm_examples():
    assert project_identity_norm((2, 1)) == pytest.approx(4 / 6)
    e = init_state(3, identity(3))
    assert project_norm(e, (2, 1)) == pytest.approx(4 / 6, abs=1e-12)
    for n in range(3, 7):
        assert sum(project_identity_norm(lam) for lam in partitions(n)) == pytest.approx(1)


def test_project_state_is_normalized_and_idempotent():
    rng = np.random.default_rng(2)
    s = apply_unitary_circuit(random_circuit(rng, 4, 8), init_state(4, identity(4)))
    for lam in partitions(4):
        p = project_state(s, lam)
        assert p.norm() == pytest.approx(1, abs=1e-12)
        assert project_norm(p, lam) == pytest.approx(1, abs=1e-9)


def test_projector_algebra_n4():
    ps = {lam: projector_matrix(lam) for lam in partitions(4)}
    for a, b in itertools.product(ps, repeat=2):
        expected = ps[a] if a == b else np.zeros_like(ps[a])
        assert np.allclose(ps[a] @ ps[b], expected, atol=1e-9)
    assert np.allclose(sum(ps.values()), np.eye(24), atol=1e-9)


def test_projector_size_bound():
    with pytest.raises(ValueError):
        project_norm(init_state(8, identity(8)), (8,))


@pytest.mark.parametrize(
    "lam, dim",
    [((2, 1), 3), ((2, 2), 3), ((3, 1), 8), ((2, 1, 1), 8), ((3, 2), 24), ((3, 3), 24), ((4, 1), 15)],
)
def test_lie_closure_two_row_two_column(lam, dim):
    assert lie_closure_dim(lam) == dim == hook_dim(lam) ** 2 - 1


def test_lie_closure_other_shape_reported():
    assert lie_closure_dim((3, 1, 1)) == 15
    with pytest.raises(ValueError):
        lie_closure_dim((4, 2, 1))


def test_bridge_matrix():
    assert bridge_matrix_check()
    b = bridge_matrix()
    assert abs(np.trace(b)) < 1e-12
    assert np.allclose(b, b.conj().T, atol=1e-12)
    assert np.max(np.abs(b - REFERENCE_BRIDGE)) < 1e-12


def test_su2_expressions_observed_values():
    # in the tableau basis (1,2;3), (1,3;2) the three expressions come out as
    # σ_x, -σ_y and -2σ_z; the sign of σ_y tracks the off-diagonal sign convention
    # and the factor 2 on σ_z is basis-independent (its eigenvalues are ±2)
    ex, ey, ez = su2_commutator_expressions(yy_transposition((2, 1), 1), yy_transposition((2, 1), 2))
    assert np.allclose(ex, SIGMA_X, atol=1e-12)
    assert np.allclose(ey, -SIGMA_Y, atol=1e-12)
    assert np.allclose(ez, -2 * SIGMA_Z, atol=1e-12)
    assert np.allclose(sorted(np.linalg.eigvalsh(ez)), [-2, 2], atol=1e-12)


def test_su2_expressions_span_su2():
    ex, ey, ez = su2_commutator_expressions(yy_transposition((2, 1), 1), yy_transposition((2, 1), 2))
    basis = np.array([m.ravel() for m in (ex, ey, ez)])
    assert np.linalg.matrix_rank(basis) == 3
    assert np.allclose(commutator(ex, ey), 1j * ez, atol=1e-12)


def test_su2_expressions_annihilate_trivial_and_sign():
    exprs = su2_commutator_expressions(left_regular_transposition(3, 1), left_regular_transposition(3, 2))
    for lam in [(3,), (1, 1, 1)]:
        p = projector_matrix(lam)
        for m in exprs:
            assert np.allclose(m @ p, 0, atol=1e-12)
            assert np.allclose(p @ m, 0, atol=1e-12)


def test_transpose_shape_coupling():
    # the same circuit acts on λ' as on λ with the signs of the transpositions flipped
    rng = np.random.default_rng(3)
    C = random_circuit(rng, 4, 6)
    flipped = Circuit(4, tuple(PartialSwap(-g.theta, g.i, g.j, g.side) for g in C.gates))
    for lam in [(3, 1), (2, 2)]:
        a = irrep_unitary(C, conjugate(lam))
        b = irrep_unitary(flipped, lam)
        assert np.allclose(sorted(np.linalg.eigvals(a), key=np.angle), sorted(np.linalg.eigvals(b), key=np.angle), atol=1e-9)


def test_two_row_examples():
    assert two_row_encode(StandardTableau(((1, 2), (3, 4)))) == "0011"
    assert two_row_encode(StandardTableau(((1, 3), (2, 4)))) == "0101"
    assert len(syt_enumerate((3, 3))) == 5
    assert path_encode(StandardTableau(((1, 3), (2, 4)))) == "udud"
    assert path_decode("udud") == StandardTableau(((1, 3), (2, 4)))


@pytest.mark.parametrize("bits", ["", "1", "10", "0110", "0001", "01x0"])
def test_two_row_decode_rejects(bits):
    with pytest.raises(ValueError):
        two_row_decode(bits)


def test_two_row_valid_strings_are_ballot_sequences():
    for m in range(1, 5):
        valid = []
        for bits in itertools.product("01", repeat=2 * m):
            s = "".join(bits)
            try:
                valid.append(two_row_decode(s))
            except ValueError:
                continue
        assert sorted(valid, key=lambda t: t.row_word()) == list(syt_enumerate((m, m)))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5).flatmap(lambda m: st.sampled_from(syt_enumerate((m, m)))), st.data())
def test_two_row_round_trip_and_local_swap(t, data):
    bits = two_row_encode(t)
    assert two_row_decode(bits) == t
    k = data.draw(st.integers(1, t.n - 1))
    if bits[k - 1] != bits[k]:
        try:
            u = t.swapped(k)
        except ValueError:
            return
        other = two_row_encode(u)
        diff = [i for i in range(len(bits)) if bits[i] != other[i]]
        assert diff == [k - 1, k]


def test_transposition_image_nonadjacent():
    lam = (2, 1)
    t13 = transposition_image(lam, 1, 3)
    expected = yy_transposition(lam, 1) @ yy_transposition(lam, 2) @ yy_transposition(lam, 1)
    assert np.allclose(t13, expected, atol=1e-12)
