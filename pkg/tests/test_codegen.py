import random

import pytest

from conftest import all_subspaces
from entronet.codegen import (
    GroupCodeError,
    group_code_encode,
    linear_code,
    linear_compress,
    quasi_uniform_code,
    side_info_encoder,
)
from entronet.construct import build_gdagger, capacitated_network, rate_capacity
from entronet.ffield import GF
from entronet.groupchar import (
    SubgroupFamily,
    SubspaceFamily,
    SupportSet,
    coset_support,
    cyclic,
    direct_product,
    entropy_from_subspaces,
    quasi_uniform_check,
    symmetric,
)
from entronet.netmodel import (
    ConnectionRequirement,
    Edge,
    Network,
    UNCAPPED,
    check_admissible,
    evaluate_code,
    kernels_of_linear_code,
)


def full_pipeline_qu(fam, n):
    lay = build_gdagger(n)
    s = coset_support(fam)
    res = quasi_uniform_check(s)
    assert res.ok
    code = quasi_uniform_code(s, lay)
    tup = rate_capacity(res.entropy, lay)
    net = capacitated_network(lay, tup)
    ev = evaluate_code(net, lay.conn, code)
    return ev.zero_error and check_admissible(net, lay.conn, code, tup)


def test_quasi_uniform_code_subgroups_z2z2():
    g = direct_product(cyclic(2), cyclic(2))
    subs = [sorted(s) for s in g.all_subgroups() if len(s) == 2]
    fam = SubgroupFamily(g, (subs[0], subs[1]))
    assert full_pipeline_qu(fam, 2)


def test_quasi_uniform_code_subgroups_s3_n3():
    g = symmetric(3)
    subs = [sorted(s) for s in g.all_subgroups() if len(s) == 2]
    fam = SubgroupFamily(g, subs[:3])
    assert full_pipeline_qu(fam, 3)


def test_linear_code_three_lines_f2():
    fam = SubspaceFamily(2, 2, (((1, 0),), ((0, 1),), ((1, 1),)))
    lay = build_gdagger(3)
    h = entropy_from_subspaces(fam)
    code = linear_code(fam, lay)
    tup = rate_capacity(h, lay)
    net = capacitated_network(lay, tup)
    ev = evaluate_code(net, lay.conn, code)
    assert ev.zero_error
    assert check_admissible(net, lay.conn, code, tup)
    # the kernel loop returns the session/edge kernels as subspaces
    ker = kernels_of_linear_code(net, lay.conn, code)
    assert ker.q == 2


def test_linear_code_rejects_nontrivial_intersection():
    fam = SubspaceFamily(2, 2, (((1, 0),), ((1, 0),)))
    with pytest.raises(ValueError):
        linear_code(fam, build_gdagger(2))


def test_linear_code_with_full_space_member():
    # a full-space kernel means that variable is constant; still zero-error
    subs = all_subspaces(2, 3)
    full = max(subs, key=len)
    line = next(s for s in subs if len(s) == 1)
    plane = next(s for s in subs if len(s) == 2)
    fam = SubspaceFamily(2, 3, (line, plane, full))
    if not fam.intersection_basis(range(3)):
        lay = build_gdagger(3)
        code = linear_code(fam, lay)
        tup = rate_capacity(entropy_from_subspaces(fam), lay)
        net = capacitated_network(lay, tup)
        ev = evaluate_code(net, lay.conn, code)
        assert ev.zero_error and check_admissible(net, lay.conn, code, tup)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_linear_compress_reconstruction_identity(q):
    gf = GF(q)
    rng = random.Random(q * 13)
    for _ in range(30):
        d = rng.randint(1, 4)
        t1, t2 = rng.randint(0, 3), rng.randint(0, 3)
        T1 = [[rng.randrange(q) for _ in range(t1)] for _ in range(d)]
        T2 = [[rng.randrange(q) for _ in range(t2)] for _ in range(d)]
        comp = linear_compress(q, T1, T2)
        for x in gf.all_vectors(d):
            w = gf.apply(x, comp.W_matrix) if comp.out_dim else []
            y1 = gf.apply(x, T1) if t1 else []
            y2 = gf.apply(x, T2) if t2 else []
            # W is a function of T1(x)
            if comp.out_dim and t1:
                assert gf.apply(y1, comp.via_T1) == w
            # T1(x) is reconstructed from W and T2(x)
            part_w = gf.apply(w, comp.rec_from_W) if comp.out_dim else [0] * t1
            part_2 = gf.apply(y2, comp.rec_from_T2) if t2 and comp.rec_from_T2 else [0] * t1
            if t1:
                assert [gf.add(a, b) for a, b in zip(part_w, part_2)] == y1
        # dim W = dim ker T2 - dim(ker T1 ∩ ker T2)
        B1, B2 = gf.nullspace(T1), gf.nullspace(T2)
        I = gf.intersect(B1, B2) if B1 and B2 else []
        assert comp.out_dim == len(B2) - len(I)


def test_side_info_encoder_round_trip():
    g = direct_product(cyclic(2), cyclic(4))
    subs = [sorted(s) for s in g.all_subgroups()]
    rng = random.Random(2)
    for _ in range(10):
        fam = SubgroupFamily(g, (rng.choice(subs), rng.choice(subs)))
        s = coset_support(fam)
        sic = side_info_encoder(s)
        for u1, u2 in s.tuples:
            w = sic.encoder[(u1, u2)]
            assert w < sic.alphabet_size
            assert sic.decoder[(w, u2)] == u1


def butterfly():
    edges = [
        Edge("e_sa", "s", "a", UNCAPPED), Edge("e_sb", "s", "b", UNCAPPED),
        Edge("e_ac", "a", "c", UNCAPPED), Edge("e_bc", "b", "c", UNCAPPED),
        Edge("e_cd", "c", "d", UNCAPPED), Edge("e_ar2", "a", "r2", UNCAPPED),
        Edge("e_br1", "b", "r1", UNCAPPED), Edge("e_dr1", "d", "r1", UNCAPPED),
        Edge("e_dr2", "d", "r2", UNCAPPED),
    ]
    net = Network(("s", "a", "b", "c", "d", "r1", "r2"), tuple(edges))
    conn = ConnectionRequirement(
        ("X", "Y"), {"X": "s", "Y": "s"}, {"X": ("r1", "r2"), "Y": ("r1", "r2")}
    )
    return net, conn


def test_group_code_on_butterfly_reproduces_xor_behaviour():
    # Z2 x Z2 with the two axis subgroups on the sides and the diagonal in
    # the middle: the classic XOR arrangement
    g = direct_product(cyclic(2), cyclic(2))
    subs = [sorted(s) for s in g.all_subgroups() if len(s) == 2]
    axis = [s for s in subs if 1 in s or 2 in s]
    diag = next(s for s in subs if s not in axis)
    net, conn = butterfly()
    assignment = {
        "X": axis[0], "Y": axis[1],
        "e_sa": axis[0], "e_sb": axis[1],
        "e_ac": axis[0], "e_bc": axis[1],
        "e_cd": diag,
        "e_ar2": axis[0], "e_br1": axis[1],
        "e_dr1": diag, "e_dr2": diag,
    }
    code = group_code_encode(g, assignment, net, conn)
    res = evaluate_code(net, conn, code)
    assert res.zero_error
    # alphabets have the coset counts: index 2 everywhere
    for k, a in code.alphabets.items():
        assert a.size == 2


def test_group_code_straddle_raises():
    # an edge assigned a subgroup finer than what its feeds determine
    # cannot pick a single coset: construction must fail loudly
    g = direct_product(cyclic(2), cyclic(2))
    subs = [sorted(s) for s in g.all_subgroups() if len(s) == 2]
    trivial = [0]
    net, conn = butterfly()
    assignment = {
        "X": subs[0], "Y": subs[1],
        "e_sa": subs[0], "e_sb": subs[1],
        "e_ac": trivial,  # finer than the incoming coset information
        "e_bc": subs[1], "e_cd": subs[0],
        "e_ar2": subs[0], "e_br1": subs[1],
        "e_dr1": subs[0], "e_dr2": subs[0],
    }
    with pytest.raises(GroupCodeError):
        group_code_encode(g, assignment, net, conn)
