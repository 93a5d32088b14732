"""Text formats: round trips, comment handling, and parse failure modes."""

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unilie.algebra import (
    GeneralLinearWitness,
    SignedPermWitness,
    check_witness,
    from_graph,
    lift_automorphism,
)
from unilie.enumeration import ring_sum_witness
from unilie.exact import IntMatrix
from unilie.families import heisenberg, quaternionic, ring_algebra
from unilie.graphs import ColoredDigraph, automorphisms
from unilie.serialize import (
    ParseError,
    bracket_table,
    from_data,
    parse_any,
    parse_graph,
    parse_tensor,
    parse_witness,
    to_data,
    to_json,
    write_dot,
    write_graph,
    write_tensor,
    write_witness,
)

GRAPHS = [heisenberg(1), heisenberg(3), quaternionic(), ring_algebra(3, primed=True)]


class TestGraphFormat:
    @pytest.mark.parametrize("g", GRAPHS)
    def test_round_trip(self, g):
        assert parse_graph(write_graph(g)) == g

    def test_header_first_line(self):
        text = write_graph(quaternionic())
        assert text.splitlines()[0] == "unilie-graph v1 q=4 p=3"

    def test_comments_and_blanks_ignored(self):
        text = "# a note\nunilie-graph v1 q=2 p=1\n\n# body\n1 2 1\n"
        assert parse_graph(text) == heisenberg(1)

    def test_rejects_missing_header(self):
        with pytest.raises(ParseError):
            parse_graph("1 2 1\n")

    def test_rejects_bad_arity(self):
        with pytest.raises(ParseError):
            parse_graph("unilie-graph v1 q=2 p=1\n1 2\n")

    def test_rejects_out_of_range(self):
        with pytest.raises(ParseError):
            parse_graph("unilie-graph v1 q=2 p=1\n1 3 1\n")


class TestTensorFormat:
    @pytest.mark.parametrize("g", GRAPHS)
    def test_round_trip(self, g):
        t = from_graph(g)
        assert parse_tensor(write_tensor(t)) == t

    def test_signs_in_text(self):
        t = from_graph(quaternionic())
        text = write_tensor(t)
        assert "2 4 2 -1" in text
        assert "1 2 1 +1" in text

    def test_bare_one_accepted_as_sign(self):
        text = "unilie-algebra v1 q=2 p=1\n1 2 1 1\n"
        assert parse_tensor(text) == from_graph(heisenberg(1))

    def test_rejects_zero_sign(self):
        with pytest.raises(ParseError):
            parse_tensor("unilie-algebra v1 q=2 p=1\n1 2 1 0\n")

    def test_bracket_table_content(self):
        table = bracket_table(from_graph(heisenberg(2)))
        assert table.splitlines() == ["[v1, v3] = z1", "[v2, v4] = z1"]
        quat_table = bracket_table(from_graph(quaternionic()))
        assert "[v2, v4] = -z2" in quat_table


class TestWitnessFormat:
    def test_signed_perm_round_trip(self):
        w = SignedPermWitness((2, 1, 3, 4), (1, 3, 2), (1, -1, 1, 1), (1, 1, -1))
        parsed, q, p = parse_witness(write_witness(w, 4, 3))
        assert (q, p) == (4, 3)
        assert parsed == w

    def test_general_linear_round_trip(self):
        _, _, w = ring_sum_witness()
        parsed, q, p = parse_witness(write_witness(w, 4, 2))
        assert (q, p) == (4, 2)
        assert parsed.to_matrix() == w.to_matrix()

    def test_fraction_entries_survive(self):
        m = IntMatrix.from_rows([[Fraction(1, 2), 0, 0], [0, 1, 0], [0, 0, 1]])
        w = GeneralLinearWitness(m)
        parsed, _, _ = parse_witness(write_witness(w, 2, 1))
        assert parsed.to_matrix()[0, 0] == Fraction(1, 2)

    def test_cycle_notation_accepted(self):
        text = (
            "unilie-witness v1 kind=signed-perm q=4 p=3\n"
            "vertex-cycles (1 2)(3 4)\n"
            "color-cycles (2 3)\n"
        )
        w, q, p = parse_witness(text)
        assert w.vertex_images == (2, 1, 4, 3)
        assert w.color_images == (1, 3, 2)
        # omitted sign lines default to all plus
        assert w.vertex_signs == (1, 1, 1, 1)
        assert w.color_signs == (1, 1, 1)

    def test_bare_sign_tokens_accepted(self):
        text = (
            "unilie-witness v1 kind=signed-perm q=2 p=1\n"
            "vertex-images 1 2\n"
            "vertex-signs + -\n"
            "color-images 1\n"
            "color-signs -1\n"
        )
        w, _, _ = parse_witness(text)
        assert w.vertex_signs == (1, -1)
        assert w.color_signs == (-1,)

    def test_rejects_non_permutation(self):
        text = (
            "unilie-witness v1 kind=signed-perm q=2 p=1\n"
            "vertex-images 1 1\n"
            "color-images 1\n"
        )
        with pytest.raises(ParseError):
            parse_witness(text)

    def test_rejects_unknown_kind(self):
        with pytest.raises(ParseError):
            parse_witness("unilie-witness v1 kind=mystery q=2 p=1\n")

    def test_parsed_witness_still_checks(self):
        t = from_graph(quaternionic())
        for a in automorphisms(quaternionic(), strict=True):
            w = lift_automorphism(t, a)
            parsed, _, _ = parse_witness(write_witness(w, 4, 3))
            assert check_witness(t, t, parsed).ok


class TestDot:
    def test_dot_structure(self):
        text = write_dot(quaternionic())
        assert text.startswith("graph unilie {")
        assert text.rstrip().endswith("}")
        assert 'v1 -- v2 [label="z1", color="red", dir=forward];' in text
        assert text.count(" -- ") == 6

    def test_palette_cycles_when_colors_exceed_it(self):
        from unilie.families import free_two_step

        text = write_dot(free_two_step(6))  # 15 colors, palette has 12
        assert text.count(" -- ") == 15


class TestDataAndJson:
    @pytest.mark.parametrize("g", GRAPHS)
    def test_graph_data_round_trip(self, g):
        assert from_data(to_data(g)) == g

    def test_tensor_data_round_trip(self):
        t = from_graph(quaternionic())
        assert from_data(to_data(t)) == t

    def test_witness_data_round_trip(self):
        _, _, w = ring_sum_witness()
        back = from_data(to_data(w))
        assert back.to_matrix() == w.to_matrix()

    def test_json_is_deterministic_and_loadable(self):
        t = from_graph(quaternionic())
        one, two = to_json(t), to_json(t)
        assert one == two
        payload = json.loads(one)
        assert payload["kind"] == "algebra"
        assert from_data(payload) == t

    def test_from_data_rejects_unknown_kind(self):
        with pytest.raises(ParseError):
            from_data({"kind": "mystery"})


class TestParseAny:
    def test_dispatch(self):
        g = quaternionic()
        t = from_graph(g)
        assert parse_any(write_graph(g)) == g
        assert parse_any(write_tensor(t)) == t
        w = SignedPermWitness((1, 2), (1,), (1, 1), (1,))
        # witness files dispatch to the bare witness, dropping the q/p header
        assert parse_any(write_witness(w, 2, 1)) == w

    def test_rejects_garbage(self):
        with pytest.raises(ParseError):
            parse_any("once upon a time\n")


@given(
    st.integers(min_value=2, max_value=6).flatmap(
        lambda q: st.lists(
            st.tuples(
                st.integers(min_value=1, max_value=q),
                st.integers(min_value=1, max_value=q),
                st.integers(min_value=1, max_value=4),
            ),
            max_size=6,
        ).map(lambda arcs: (q, arcs))
    )
)
@settings(max_examples=120)
def test_random_graph_round_trip(qa):
    q, raw = qa
    seen, arcs = set(), []
    for i, j, k in raw:
        if i == j:
            continue
        pair = (min(i, j), max(i, j))
        if pair in seen:
            continue
        seen.add(pair)
        arcs.append((i, j, k))
    if not arcs:
        return
    g = ColoredDigraph.from_arcs(q, 4, arcs)
    assert parse_graph(write_graph(g)) == g
    assert from_data(to_data(g)) == g
