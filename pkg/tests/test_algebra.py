"""Structure tensors, bracket operations, invariants, and isomorphism witnesses."""

from fractions import Fraction
from itertools import combinations, permutations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unilie.algebra import (
    GeneralLinearWitness,
    NVector,
    SignedPermWitness,
    StructureTensor,
    ad_matrix,
    ad_rank,
    apply_signs,
    bracket,
    center,
    centralizer,
    check_witness,
    commutator,
    compose_witnesses,
    concatenate,
    derivation_dim,
    diagonal_orbit_count,
    diagonal_orbit_representatives,
    diagonal_witness,
    from_graph,
    invert_witness,
    is_heisenberg_type,
    j_basis,
    j_gram,
    j_map,
    lift_automorphism,
    sign_orbit_canonical,
    sign_vector,
    signed_perm_isomorphic,
    support_pairs,
    to_graph,
    totally_geodesic,
    verify_uniform_basis,
)
from unilie.families import (
    cyclic,
    free_two_step,
    heisenberg,
    kneser,
    quaternionic,
    ring_algebra,
)
from unilie.graphs import automorphisms, validate_uniform

H3 = from_graph(heisenberg(1))
QUAT = from_graph(quaternionic())
ASSOC = from_graph(quaternionic(associate=True))
RING2 = from_graph(ring_algebra(2))
RING2P = from_graph(ring_algebra(2, primed=True))
H33 = concatenate(H3, H3)

UNIFORM_SAMPLES = [
    (H3, 1, 2, 1, 1),
    (from_graph(heisenberg(2)), 1, 4, 2, 1),
    (QUAT, 3, 4, 2, 3),
    (ASSOC, 3, 4, 2, 3),
    (RING2, 2, 4, 2, 2),
    (from_graph(free_two_step(3)), 3, 3, 1, 2),
    (from_graph(cyclic(4)), 4, 4, 1, 2),
    (from_graph(kneser(5, 2)), 5, 10, 3, 3),
]


class TestStructureTensor:
    def test_graph_roundtrip(self):
        for g in (heisenberg(2), quaternionic(), ring_algebra(3)):
            assert to_graph(from_graph(g)) == g

    def test_from_brackets_flips_reversed_pairs(self):
        t = StructureTensor.from_brackets(2, 1, [(2, 1, 1, 1)])
        assert t.sorted_entries() == [(1, 2, 1, -1)]

    def test_alpha_antisymmetry(self):
        for (i, j, k, s) in QUAT.sorted_entries():
            assert QUAT.alpha(i, j, k) == s
            assert QUAT.alpha(j, i, k) == -s
        assert QUAT.alpha(1, 2, 3) == 0

    def test_rejects_double_pair(self):
        with pytest.raises(ValueError):
            StructureTensor.from_entries(3, 2, [(1, 2, 1, 1), (1, 2, 2, 1)])

    def test_dim(self):
        assert QUAT.dim() == 7
        assert H3.dim() == 3

    def test_verify_uniform_basis_matches_graph_validation(self):
        for t, *_ in UNIFORM_SAMPLES:
            rep_t = verify_uniform_basis(t)
            rep_g = validate_uniform(to_graph(t))
            assert rep_t.is_uniform and rep_g.is_uniform
            assert (rep_t.p, rep_t.q, rep_t.r, rep_t.s) == (
                rep_g.p,
                rep_g.q,
                rep_g.r,
                rep_g.s,
            )

    def test_verify_uniform_basis_flags_bad_tensor(self):
        t = StructureTensor.from_entries(3, 1, [(1, 2, 1, 1), (2, 3, 1, 1)])
        assert not verify_uniform_basis(t).is_uniform


class TestBracket:
    def test_generator_products(self):
        q, p = QUAT.q, QUAT.p
        v = lambda i: NVector.basis_v(q, p, i)
        z = lambda k: NVector.basis_z(q, p, k)
        assert bracket(QUAT, v(1), v(2)) == z(1)
        assert bracket(QUAT, v(2), v(1)) == -z(1)
        assert bracket(QUAT, v(4), v(2)) == z(2)
        assert bracket(QUAT, v(2), v(4)) == -z(2)

    def test_center_annihilates(self):
        for x in center(QUAT):
            for i in range(1, 5):
                assert bracket(QUAT, x, NVector.basis_v(4, 3, i)).is_zero()

    def test_two_step(self):
        # anything in the commutator brackets to zero
        v1 = NVector.basis_v(4, 3, 1)
        w = bracket(QUAT, v1, NVector.basis_v(4, 3, 2))
        assert bracket(QUAT, w, v1).is_zero()

    @given(
        st.lists(st.integers(min_value=-3, max_value=3), min_size=7, max_size=7),
        st.lists(st.integers(min_value=-3, max_value=3), min_size=7, max_size=7),
        st.integers(min_value=-3, max_value=3),
    )
    @settings(max_examples=50)
    def test_bilinear_and_alternating(self, xc, yc, c):
        x = NVector.from_coords(4, 3, xc)
        y = NVector.from_coords(4, 3, yc)
        assert bracket(QUAT, x, x).is_zero()
        assert bracket(QUAT, x, y) == -bracket(QUAT, y, x)
        lhs = bracket(QUAT, x.scale(c), y)
        assert lhs == bracket(QUAT, x, y).scale(c)
        assert bracket(QUAT, x + y, y) == bracket(QUAT, x, y)


class TestStructuralInvariants:
    @pytest.mark.parametrize("t,p,q,r,s", UNIFORM_SAMPLES)
    def test_center_dimension(self, t, p, q, r, s):
        assert len(center(t)) == p

    @pytest.mark.parametrize("t,p,q,r,s", UNIFORM_SAMPLES)
    def test_commutator_equals_center(self, t, p, q, r, s):
        comm = commutator(t)
        assert len(comm) == p
        cen = {x.coords() for x in center(t)}
        # both are coordinate-subspace bases here, so set equality is enough
        assert {x.coords() for x in comm} == cen

    @pytest.mark.parametrize("t,p,q,r,s", UNIFORM_SAMPLES)
    def test_centralizer_dimension(self, t, p, q, r, s):
        for i in range(1, q + 1):
            assert len(centralizer(t, i)) == p + q - s

    @pytest.mark.parametrize("t,p,q,r,s", UNIFORM_SAMPLES)
    def test_ad_rank(self, t, p, q, r, s):
        for i in range(1, q + 1):
            assert ad_rank(t, i) == s

    @pytest.mark.parametrize("t,p,q,r,s", UNIFORM_SAMPLES)
    def test_j_rank(self, t, p, q, r, s):
        for k in range(1, p + 1):
            assert j_basis(t, k).rank() == 2 * r

    @pytest.mark.parametrize("t,p,q,r,s", UNIFORM_SAMPLES)
    def test_j_gram_is_scaled_identity(self, t, p, q, r, s):
        gram = j_gram(t)
        assert gram.nrows == p
        for a in range(p):
            for b in range(p):
                assert gram[a, b] == (2 * r if a == b else 0)

    def test_j_gram_rejects_non_uniform(self):
        t = StructureTensor.from_entries(3, 1, [(1, 2, 1, 1), (2, 3, 1, 1)])
        with pytest.raises(ValueError):
            j_gram(t)

    def test_ad_matrix_maps_generators_to_center(self):
        m = ad_matrix(QUAT, 1)
        assert (m.nrows, m.ncols) == (3, 4)
        # column of v2 is the coordinate vector of [v1, v2] = z1
        assert tuple(m[k, 1] for k in range(3)) == (1, 0, 0)


class TestJMaps:
    def test_single_edge_convention(self):
        # the rank-one building block acts as a quarter rotation
        assert j_basis(H3, 1).rows == ((0, -1), (1, 0))

    def test_j_basis_skew(self):
        for t, p, *_ in UNIFORM_SAMPLES:
            for k in range(1, p + 1):
                m = j_basis(t, k)
                assert (m + m.transpose()).is_zero()

    def test_j_map_linear_combination(self):
        m = j_map(QUAT, (1, 1, 0))
        assert m == j_basis(QUAT, 1) + j_basis(QUAT, 2)
        assert j_map(QUAT, (Fraction(1, 2), 0, 0)) == j_basis(QUAT, 1).scale(
            Fraction(1, 2)
        )


class TestHeisenbergType:
    def test_heisenberg_family(self):
        for n in range(1, 5):
            assert is_heisenberg_type(from_graph(heisenberg(n)))

    def test_quaternionic_yes_associate_no(self):
        assert is_heisenberg_type(QUAT)
        assert not is_heisenberg_type(ASSOC)

    def test_ring_yes_sum_no(self):
        assert is_heisenberg_type(RING2)
        assert not is_heisenberg_type(H33)

    def test_matches_square_identity_on_central_sphere(self):
        # spot check the defining identity J(z)^2 = -|z|^2 I on an integer point
        m = j_map(QUAT, (1, 2, -2))
        n = m @ m
        norm_sq = 1 + 4 + 4
        for a in range(4):
            for b in range(4):
                assert n[a, b] == (-norm_sq if a == b else 0)


class TestTotallyGeodesic:
    def test_quaternionic_pair(self):
        rep = totally_geodesic(QUAT, [1, 2], [1])
        assert rep.is_subalgebra and rep.is_totally_geodesic

    def test_double_block_pair(self):
        rep = totally_geodesic(H33, [1, 2], [1])
        assert rep.is_subalgebra and rep.is_totally_geodesic

    def test_not_closed_fails_subalgebra(self):
        # {v1, v2} brackets into z1, which is not among the chosen colors
        rep = totally_geodesic(QUAT, [1, 2], [2])
        assert not rep.is_subalgebra

    def test_crossing_edge_blocks_geodesic(self):
        # {v1, v2, v3} closes up under colors {1, 2}, but the color-1 edge
        # (3, 4) has exactly one endpoint inside, so the complement leaks
        rep = totally_geodesic(RING2, [1, 2, 3], [1, 2])
        assert rep.is_subalgebra and not rep.is_totally_geodesic

    def test_full_algebra_is_geodesic(self):
        rep = totally_geodesic(H33, [1, 2, 3, 4], [1, 2])
        assert rep.is_subalgebra and rep.is_totally_geodesic

    def test_brute_force_oracle(self):
        # compare against direct evaluation of both closure conditions
        for t in (QUAT, RING2, H33):
            vertices = range(1, t.q + 1)
            colors = range(1, t.p + 1)
            for nv in (1, 2):
                for vs in combinations(vertices, nv):
                    for nc in (1, 2):
                        if nc > t.p:
                            continue
                        for cs in combinations(colors, nc):
                            rep = totally_geodesic(t, vs, cs)
                            inside = all(
                                t.pair_map().get((min(i, j), max(i, j)), (0, 0))[0]
                                in cs
                                for i, j in combinations(vs, 2)
                                if (min(i, j), max(i, j)) in t.pair_map()
                            )
                            assert rep.is_subalgebra == inside
                            if inside:
                                crossing = any(
                                    k in cs and (i in vs) != (j in vs)
                                    for i, j, k, _ in t.sorted_entries()
                                )
                                assert rep.is_totally_geodesic == (not crossing)


def single_sign_perturbations(w: SignedPermWitness):
    q, p = len(w.vertex_images), len(w.color_images)
    for i in range(q):
        vs = list(w.vertex_signs)
        vs[i] = -vs[i]
        yield SignedPermWitness(w.vertex_images, w.color_images, tuple(vs), w.color_signs)
    for k in range(p):
        cs = list(w.color_signs)
        cs[k] = -cs[k]
        yield SignedPermWitness(w.vertex_images, w.color_images, w.vertex_signs, tuple(cs))


class TestWitnesses:
    def test_lifted_automorphism_passes(self):
        for a in automorphisms(quaternionic(), strict=True):
            w = lift_automorphism(QUAT, a)
            assert check_witness(QUAT, QUAT, w).ok

    def test_identity_witness(self):
        w = SignedPermWitness((1, 2), (1,), (1, 1), (1,))
        assert check_witness(H3, H3, w).ok

    def test_single_sign_flip_breaks_identity(self):
        w = SignedPermWitness((1, 2), (1,), (1, 1), (1,))
        broken = 0
        for bad in single_sign_perturbations(w):
            res = check_witness(H3, H3, bad)
            if not res.ok:
                broken += 1
                assert res.failures
        # flipping one vertex sign or the color sign negates a bracket;
        # flipping both vertex signs would cancel, but that is two flips
        assert broken == 3

    def test_failure_reports_offending_pair(self):
        w = SignedPermWitness((1, 2), (1,), (-1, 1), (1,))
        res = check_witness(H3, H3, w)
        assert not res.ok
        assert len(res.failures) == 1

    def test_shape_mismatch_rejected(self):
        w = SignedPermWitness((1, 2), (1,), (1, 1), (1,))
        with pytest.raises(ValueError):
            check_witness(H3, QUAT, w)

    def test_singular_matrix_rejected(self):
        from unilie.exact import IntMatrix

        with pytest.raises(ValueError):
            check_witness(H3, H3, GeneralLinearWitness(IntMatrix.zero(3, 3)))

    def test_compose_and_invert(self):
        auts = automorphisms(quaternionic(), strict=True)
        a, b = auts[1], auts[2]
        wa, wb = lift_automorphism(QUAT, a), lift_automorphism(QUAT, b)
        composed = compose_witnesses(wb, wa)
        assert check_witness(QUAT, QUAT, composed).ok
        inv = invert_witness(wa)
        assert check_witness(QUAT, QUAT, inv).ok
        round_trip = compose_witnesses(inv, wa)
        assert round_trip.to_matrix() == round_trip.to_matrix().identity(7)

    def test_signed_perm_matrix_is_signed_permutation(self):
        w = SignedPermWitness((2, 1, 3, 4), (1, 3, 2), (1, -1, 1, 1), (1, 1, -1))
        m = w.to_matrix()
        for row in m.rows:
            assert sum(1 for x in row if x != 0) == 1
            assert all(x in (-1, 0, 1) for x in row)


class TestSignOrbits:
    @pytest.mark.parametrize("t", [H3, RING2, QUAT, ASSOC])
    def test_canonical_matches_exhaustive_orbit_minimum(self, t):
        pairs = support_pairs(t)
        base = sign_vector(t)
        orbit = set()
        for vbits in product((0, 1), repeat=t.q):
            for zbits in product((0, 1), repeat=t.p):
                vec = []
                for (i, j), s in zip(pairs, base):
                    k = t.pair_map()[(i, j)][0]
                    flip = vbits[i - 1] ^ vbits[j - 1] ^ zbits[k - 1]
                    vec.append(-s if flip else s)
                orbit.add(tuple(vec))
        # minimal in the orbit under the bit order used for canonical forms
        as_bits = lambda vec: tuple(0 if s == 1 else 1 for s in vec)
        assert sign_orbit_canonical(t) in orbit
        assert as_bits(sign_orbit_canonical(t)) == min(map(as_bits, orbit))

    def test_canonical_is_orbit_invariant(self):
        base = sign_orbit_canonical(QUAT)
        for signs in product((1, -1), repeat=6):
            moved = apply_signs(QUAT, signs)
            if sign_orbit_canonical(moved) == base:
                w = diagonal_witness(QUAT, moved)
                assert w is not None
                assert check_witness(QUAT, moved, w).ok

    def test_quaternionic_support_has_four_orbits(self):
        assert diagonal_orbit_count(QUAT) == 4
        reps = diagonal_orbit_representatives(QUAT)
        assert len(reps) == 4
        assert len({sign_orbit_canonical(r) for r in reps}) == 4
        assert all(to_graph(r).support() == to_graph(QUAT).support() for r in reps)

    def test_perfect_matching_color_is_free(self):
        # every sign assignment on a single heisenberg block is equivalent
        assert diagonal_orbit_count(H3) == 1
        assert diagonal_orbit_count(from_graph(heisenberg(3))) == 1

    def test_diagonal_witness_none_across_orbits(self):
        reps = diagonal_orbit_representatives(QUAT)
        assert diagonal_witness(reps[0], reps[1]) is None

    def test_orbit_count_oracle(self):
        for t in (H3, RING2, QUAT):
            pairs = support_pairs(t)
            canon = set()
            for signs in product((1, -1), repeat=len(pairs)):
                canon.add(sign_orbit_canonical(apply_signs(t, signs)))
            assert len(canon) == diagonal_orbit_count(t)


def oracle_signed_perm(t1, t2):
    q, p = t1.q, t1.p
    for vp in permutations(range(1, q + 1)):
        for cp in permutations(range(1, p + 1)):
            for vsigns in product((1, -1), repeat=q):
                for csigns in product((1, -1), repeat=p):
                    w = SignedPermWitness(vp, cp, vsigns, csigns)
                    if check_witness(t1, t2, w).ok:
                        return True
    return False


class TestSignedPermSearch:
    def test_self_isomorphism(self):
        for t in (H3, QUAT, RING2):
            w = signed_perm_isomorphic(t, t)
            assert w is not None
            assert check_witness(t, t, w).ok

    def test_detects_diagonal_twist(self):
        moved = apply_signs(QUAT, (-1, 1, 1, -1, 1, 1))
        w = signed_perm_isomorphic(QUAT, moved)
        assert w is not None
        assert check_witness(QUAT, moved, w).ok

    def test_rejects_distinct_orbit_classes(self):
        assert signed_perm_isomorphic(QUAT, ASSOC) is None

    def test_shape_mismatch_raises(self):
        with pytest.raises(ValueError):
            signed_perm_isomorphic(H3, QUAT)

    @pytest.mark.parametrize(
        "t1,t2",
        [
            (H3, H3),
            (RING2, RING2P),
            (RING2, apply_signs(RING2, (-1, 1, 1, 1))),
            (QUAT, ASSOC),
        ],
    )
    def test_matches_brute_force_oracle(self, t1, t2):
        got = signed_perm_isomorphic(t1, t2)
        expected = oracle_signed_perm(t1, t2)
        assert (got is not None) == expected
        if got is not None:
            assert check_witness(t1, t2, got).ok


class TestDerivations:
    @pytest.mark.parametrize(
        "t,dim",
        [
            (H3, 6),
            (RING2, 16),
            (RING2P, 16),
            (H33, 16),
            (QUAT, 19),
            (ASSOC, 19),
            (from_graph(cyclic(5)), 30),
        ],
    )
    def test_frozen_values(self, t, dim):
        assert derivation_dim(t) == dim

    def test_heisenberg_closed_form(self):
        # dim der = dim sp(2n) + dim Hom(V, Z) + 1
        for n in range(1, 4):
            expected = n * (2 * n + 1) + 2 * n + 1
            assert derivation_dim(from_graph(heisenberg(n))) == expected

    def test_free_two_step_closed_form(self):
        # dim der = dim gl(n) + dim Hom(V, Z)
        for n in range(2, 5):
            expected = n * n + n * (n * (n - 1) // 2)
            assert derivation_dim(from_graph(free_two_step(n))) == expected

    def test_invariant_under_signed_perm(self):
        moved = apply_signs(QUAT, (-1, -1, 1, 1, -1, 1))
        assert derivation_dim(moved) == derivation_dim(QUAT)


class TestConcatenate:
    def test_disjoint_blocks(self):
        t = concatenate(QUAT, H3)
        assert (t.q, t.p) == (6, 4)
        assert len(t.sorted_entries()) == 7

    def test_shared_colors(self):
        t = concatenate(H3, H3, color_mode="shared")
        assert (t.q, t.p) == (4, 1)
        assert verify_uniform_basis(t).is_uniform
