import math

import pytest

from levelcover.core import (
    Mode,
    VertexAttrs,
    add_vertex,
    derive_parameters,
    new_instance,
    theoretical_ratio,
)
from levelcover.dynamic import insert_edge
from levelcover.errors import BudgetError, EdgeError, InstanceError


def test_parameter_derivation_two_unit_vertices():
    verts = [VertexAttrs(0, 1.0, 1), VertexAttrs(1, 1.0, 1)]
    st = new_instance(verts, 2.0, 0.05, "capacitated", 2)
    p = st.params
    assert p.mu == 2.0
    assert p.alpha == pytest.approx(2.6)
    # ceil(log2(2 * 2 * 2.6 / 1)) = ceil(log2 10.4) = 4
    assert p.levels == 4
    assert st.is_quiescent
    assert not st.edges
    assert all(st.level(v) == 0 for v in range(2))


def test_alpha_formula():
    p = derive_parameters("capacitated", 2.43, 0.01, 4, 1.0, 1.0, 1)
    assert p.alpha == pytest.approx(5.86 / 2.43 + 0.02)
    assert p.alpha == pytest.approx(2.4315, abs=1e-4)


def test_empty_graph_zero_weights():
    verts = [VertexAttrs(i, 2.0, 2) for i in range(5)]
    st = new_instance(verts, 2.0, 0.1, "capacitated", 5)
    assert all(st.weight(v) == 0.0 for v in range(5))


def test_weightedvc_pins_beta_and_alpha():
    verts = [VertexAttrs(0, 1.0), VertexAttrs(1, 2.0)]
    st = new_instance(verts, 99.0, 0.1, "weightedvc", 2)
    assert st.params.beta == pytest.approx(1.1)
    assert st.params.alpha == pytest.approx(1.3)


def test_setcover_levels_use_hyperedge_budget():
    verts = [VertexAttrs(i, 1.0, 1) for i in range(3)]
    st = new_instance(verts, 2.43, 0.05, "setcover", 40, f=3)
    p = st.params
    expected = math.ceil(math.log(40 * p.mu * p.alpha / p.c_min, p.beta))
    assert p.levels == expected


def test_parameter_determinism():
    a = derive_parameters("capacitated", 2.43, 0.01, 16, 1.0, 4.0, 3)
    b = derive_parameters("capacitated", 2.43, 0.01, 16, 1.0, 4.0, 3)
    assert a == b


def test_construction_rejections():
    verts = [VertexAttrs(0, 1.0, 1), VertexAttrs(1, 1.0, 1)]
    with pytest.raises(InstanceError):
        new_instance(verts, 1.0, 0.05, "capacitated", 2)        # beta <= 1
    with pytest.raises(InstanceError):
        new_instance(verts, 2.0, 0.0, "capacitated", 2)         # epsilon out
    with pytest.raises(InstanceError):
        new_instance(verts, 2.0, 1.5, "capacitated", 2)
    with pytest.raises(InstanceError):
        new_instance([VertexAttrs(0, -1.0, 1)], 2.0, 0.1, "capacitated", 1)
    with pytest.raises(InstanceError):
        new_instance([VertexAttrs(0, 1.0, 0)], 2.0, 0.1, "capacitated", 1)
    with pytest.raises(InstanceError):
        new_instance([VertexAttrs(0, 1.0, 1), VertexAttrs(0, 1.0, 1)],
                     2.0, 0.1, "capacitated", 2)                # duplicate id
    with pytest.raises(BudgetError):
        new_instance(verts, 2.0, 0.1, "capacitated", 1)         # budget < n
    # alpha >= beta/(beta-1) requirement rules out small beta
    with pytest.raises(InstanceError):
        new_instance(verts, 1.3, 0.01, "capacitated", 2)


def test_add_vertex_isolated_then_edge(rng):
    verts = [VertexAttrs(0, 1.0, 1), VertexAttrs(1, 1.5, 1)]
    st = new_instance(verts, 2.0, 0.05, "capacitated", 3, cost_band=(1.0, 2.0))
    add_vertex(st, VertexAttrs(2, 2.0, 1))
    assert st.weight(2) == 0.0 and st.level(2) == 0

    # equivalent upfront construction must behave identically
    st2 = new_instance(
        [VertexAttrs(0, 1.0, 1), VertexAttrs(1, 1.5, 1), VertexAttrs(2, 2.0, 1)],
        2.0, 0.05, "capacitated", 3, cost_band=(1.0, 2.0))
    insert_edge(st, 0, 2)
    insert_edge(st2, 0, 2)
    assert [st.level(v) for v in range(3)] == [st2.level(v) for v in range(3)]
    assert [st.weight(v) for v in range(3)] == [st2.weight(v) for v in range(3)]


def test_add_vertex_rejections():
    verts = [VertexAttrs(0, 1.0, 1), VertexAttrs(1, 2.0, 1)]
    st = new_instance(verts, 2.0, 0.05, "capacitated", 3)
    with pytest.raises(InstanceError):
        add_vertex(st, VertexAttrs(2, 5.0, 1))      # above declared c_max
    with pytest.raises(InstanceError):
        add_vertex(st, VertexAttrs(3, 1.0, 1))      # non-dense id
    add_vertex(st, VertexAttrs(2, 1.5, 1))
    with pytest.raises(BudgetError):
        add_vertex(st, VertexAttrs(3, 1.5, 1))      # budget exhausted


def test_theoretical_ratio_values():
    p = derive_parameters("capacitated", 2.43, 1e-9, 4, 1.0, 1.0, 1)
    assert theoretical_ratio(p) == pytest.approx(36.38, abs=0.01)
    p = derive_parameters("capacitated", 2.43, 0.01, 4, 1.0, 1.0, 1)
    assert theoretical_ratio(p) == pytest.approx(36.69, abs=0.01)
    p = derive_parameters("capacitated", 2.0, 0.05, 4, 1.0, 1.0, 1)
    assert theoretical_ratio(p) == pytest.approx(39.0)
    wvc = derive_parameters("weightedvc", 0.0, 0.1, 4, 1.0, 1.0, 1)
    with pytest.raises(InstanceError):
        theoretical_ratio(wvc)


def test_self_loop_and_duplicate_edges(unit_pair_state):
    st = unit_pair_state
    with pytest.raises(EdgeError):
        insert_edge(st, 0, 0)
    insert_edge(st, 0, 1)
    with pytest.raises(EdgeError):
        insert_edge(st, 1, 0)
    with pytest.raises(EdgeError):
        insert_edge(st, 0, 7)
