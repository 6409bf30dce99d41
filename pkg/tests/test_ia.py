"""Interference-alignment code: construction, duality, repair, conditions.

The coupling coefficients are cross-checked two independent ways: the
closed-form repairability conditions are compared against the coupling
determinant, and the decode matrices are compared against generic inverses.
"""

import random
from itertools import combinations

import pytest

from regenrepair.framework import SingularCouplingError
from regenrepair.gf import Field, Matrix, all_square_submatrices_invertible, mat_mul
from regenrepair.ia import IACode, UnsupportedPatternError, default_kappa, field_search
from regenrepair.workbench import AssignmentNotFoundError, verify_exact_repair

F32 = Field(5)
F256 = Field(8, 0x11D)
F4 = Field(2)


def example_code():
    return IACode(F32, 4)


def test_default_construction_is_power_table():
    code = example_code()
    g = F32.generator
    expect = [[F32.pow(g, r * c) for c in range(4)] for r in range(4)]
    assert code.P.data == expect
    assert code.V.data == Matrix.identity(F32, 4).data
    assert code.kappa == 2
    assert (code.n, code.d, code.alpha) == (8, 7, 4)


def test_duality_identities():
    for code in [example_code(), IACode(F256, 3), IACode(F4, 2)]:
        f, k = code.field, code.k
        inv_kappa = f.inv(code.kappa)
        utv = mat_mul(code.U.transpose(), code.V).data
        assert utv == [[f.mul(inv_kappa, code.P.data[c][r]) for c in range(k)] for r in range(k)]
        vdtud = mat_mul(code.Vd.transpose(), code.Ud).data
        assert vdtud == [[f.mul(code.kappa, code.Pd.data[r][c]) for c in range(k)] for r in range(k)]
        assert mat_mul(code.Pd, code.P.transpose()).data == Matrix.identity(f, k).data


def test_construction_validation():
    with pytest.raises(ValueError):
        IACode(F256, 2, P=Matrix(F256, [[1, 1], [1, 1]]))  # singular submatrix
    with pytest.raises(ValueError):
        IACode(F256, 2, kappa=0)
    with pytest.raises(ValueError):
        IACode(F256, 2, kappa=1)
    with pytest.raises(ValueError):
        IACode(Field(1), 2)  # GF(2) has no kappa with kappa^2 != 1
    with pytest.raises(ValueError):
        IACode(F256, 0)
    assert default_kappa(F4) == 2


def test_systematic_nodes_store_raw_data():
    code = example_code()
    rng = random.Random(11)
    msg = code.random_message(rng)
    shards = code.encode(msg)
    for j in range(1, 5):
        assert shards[j] == msg[(j - 1) * 4 : j * 4]
    assert code.encode([0] * 16) == {i: [0] * 4 for i in range(1, 9)}


def test_reconstruct_from_every_k_subset():
    code = example_code()
    rng = random.Random(12)
    msg = code.random_message(rng)
    shards = code.encode(msg)
    for sub in combinations(code.node_ids(), 4):
        assert code.reconstruct({i: shards[i] for i in sub}) == msg


def test_single_repair_every_node():
    code = example_code()
    rng = random.Random(13)
    msg = code.random_message(rng)
    shards = code.encode(msg)
    for node in code.node_ids():
        rest = {i: s for i, s in shards.items() if i != node}
        content, transcript = code.repair_single(rest, node)
        assert content == shards[node]
        assert transcript.total == 7
        assert transcript.per_helper == {h: 1 for h in rest}


def test_multi_repair_all_patterns_exact():
    code = example_code()
    for e in (2, 3, 4):
        report = code.pattern_sweep(e, seed=5)
        assert len(report.entries) == [28, 56, 70][e - 2]
        assert report.all_ok()
        assert {entry.bandwidth for entry in report.entries} == {e * (8 - e)}


def test_multi_repair_validation():
    code = example_code()
    shards = code.encode([0] * 16)
    with pytest.raises(ValueError):
        code.repair_multi({i: shards[i] for i in range(1, 4)}, (4, 5, 6, 7, 8))  # e > k
    with pytest.raises(ValueError):
        code.repair_multi({i: shards[i] for i in (2, 3, 4)}, (1, 5))  # missing survivors
    live = {i: shards[i] for i in (2, 3, 4, 5, 6, 7)}
    with pytest.raises(ValueError):
        code.repair_multi(live, (1, 8), helpers=(2, 3, 4, 5, 6))  # partial helper set


def test_failed_order_invariance():
    code = example_code()
    rng = random.Random(14)
    msg = code.random_message(rng)
    shards = code.encode(msg)
    live = {i: s for i, s in shards.items() if i not in (2, 5, 7)}
    a, _ = code.repair_multi(live, (2, 5, 7))
    b, _ = code.repair_multi(live, (7, 2, 5))
    assert a == b == {i: shards[i] for i in (2, 5, 7)}


def test_one_sided_determinants_frozen():
    # all-systematic and all-parity patterns: det = (1 + kappa^2)^(e(e-1)/2)
    for code in [example_code(), IACode(F256, 6)]:
        f, k = code.field, code.k
        base = f.add(1, f.mul(code.kappa, code.kappa))
        for e in range(2, k + 1):
            want = f.pow(base, e * (e - 1) // 2)
            for pat in combinations(range(1, k + 1), e):
                system, _ = code.coupling_system(pat)
                assert system.determinant() == want
            for pat in combinations(range(k + 1, 2 * k + 1), e):
                system, _ = code.coupling_system(pat)
                assert system.determinant() == want


def test_condition_check_matches_determinant_on_example():
    code = example_code()
    for e in (2, 3, 4):
        for pat in combinations(code.node_ids(), e):
            system, _ = code.coupling_system(pat)
            assert code.condition_check(pat) == (system.determinant() != 0)


def test_condition_check_matches_determinant_random_p():
    rng = random.Random(99)
    shapes = [(1, 5), (1, 2, 5), (1, 5, 6), (1, 2, 3, 5), (1, 5, 6, 7), (1, 2, 5, 6)]
    codes = 0
    while codes < 25:
        data = [[rng.randrange(1, F256.size) for _ in range(4)] for _ in range(4)]
        p = Matrix(F256, data)
        if not all_square_submatrices_invertible(p):
            continue
        code = IACode(F256, 4, P=p)
        codes += 1
        for pat in shapes:
            system, _ = code.coupling_system(pat)
            assert code.condition_check(pat) == (system.determinant() != 0)


def test_unsupported_shape_raises():
    code = IACode(F256, 5)
    with pytest.raises(UnsupportedPatternError):
        code.condition_check((1, 2, 3, 6, 7))  # 3 systematic + 2 parity
    # the coupling solve itself still handles the shape
    system, _ = code.coupling_system((1, 2, 3, 6, 7))
    assert system.determinant() != 0


def test_product_formula_matches_determinant():
    code = example_code()
    for e in (2, 3, 4):
        for pat in combinations(code.node_ids(), e):
            lhs, rhs, equal = code.conjecture_eval(pat)
            assert equal and lhs == rhs


def test_systematic_decode_matrix_is_closed_form_inverse():
    # (U' + kappa^2/(1+kappa) V e_l e_l^t P') inverts rows u_i^t + P_{l,i} v'_l^t
    code = example_code()
    f, k = code.field, code.k
    for l in range(1, k + 1):
        fwd = [[code.U.data[c][i] for c in range(k)] for i in range(k)]
        vdl = [code.Vd.data[r][l - 1] for r in range(k)]
        for i in range(k):
            for c in range(k):
                fwd[i][c] = f.add(fwd[i][c], f.mul(code.P.data[l - 1][i], vdl[c]))
        inv = [row[:] for row in code.Ud.data]
        coef = f.div(f.mul(code.kappa, code.kappa), code.one_plus_k)
        for r in range(k):
            for c in range(k):
                inv[r][c] = f.add(inv[r][c], f.mul(coef, f.mul(code.V.data[r][l - 1], code.Pd.data[l - 1][c])))
        prod = mat_mul(Matrix(f, inv), Matrix(f, fwd))
        assert prod.data == Matrix.identity(f, k).data


def test_column_order_permutation_keeps_determinant():
    # reference layout for failures {1, 2, parity 1} lists the transfers as
    # s_{1,1}, sbar_{1,1}, r_{1,2}, r_{2,1}, s_{2,1}, sbar_{1,2}
    code = example_code()
    failed = (1, 2, 5)
    system, _ = code.coupling_system(failed)
    ours = system.pairs
    theirs = [(1, 5), (5, 1), (1, 2), (2, 1), (2, 5), (5, 2)]
    assert sorted(ours) == sorted(theirs)
    pos = {pair: i for i, pair in enumerate(ours)}
    perm = [pos[pair] for pair in theirs]
    reordered = Matrix(
        code.field, [[system.A.data[perm[r]][perm[c]] for c in range(6)] for r in range(6)]
    )
    from regenrepair.gf import mat_det

    assert mat_det(reordered) == system.determinant() != 0


def test_gf4_k3_mixed_pairs_all_singular():
    code = IACode(F4, 3)
    singular = []
    for pat in combinations(code.node_ids(), 2):
        system, _ = code.coupling_system(pat)
        if system.determinant() == 0:
            singular.append(pat)
    assert singular == [(l, m) for l in (1, 2, 3) for m in (4, 5, 6)]
    for l in (1, 2, 3):
        for m in (1, 2, 3):
            assert code._pi(l, m) == 1  # Pi = 1 is exactly the failure condition
    for pat in combinations(code.node_ids(), 3):
        system, _ = code.coupling_system(pat)
        assert system.determinant() != 0


def test_singular_coupling_reported():
    code = IACode(F4, 3)
    rng = random.Random(4)
    msg = code.random_message(rng)
    shards = code.encode(msg)
    live = {i: s for i, s in shards.items() if i not in (1, 4)}
    with pytest.raises(SingularCouplingError) as err:
        code.repair_multi(live, (1, 4))
    assert err.value.failed == (1, 4)
    ok, bandwidth, singular = verify_exact_repair(code, (1, 4), rng=random.Random(8))
    assert (ok, bandwidth, singular) == (False, 0, True)
    ok, bandwidth, singular = verify_exact_repair(code, (1, 2, 4), rng=random.Random(8))
    assert (ok, singular) == (True, False) and bandwidth == 9


def test_k1_degenerate():
    code = IACode(Field(3), 1)
    shards = code.encode([5])
    fixed, transcript = code.repair_single({2: shards[2]}, 1)
    assert fixed == shards[1] and transcript.total == 1
    fixed, _ = code.repair_single({1: shards[1]}, 2)
    assert fixed == shards[2]


def test_field_search_found_and_not_found():
    code = field_search(F32, 4, e_max=4, trials=5, seed=1)
    assert code.P.data == example_code().P.data  # default assignment wins
    with pytest.raises(AssignmentNotFoundError) as err:
        field_search(F4, 3, e_max=3, trials=40, seed=0)
    assert err.value.best_failures == 9


def test_descriptor():
    code = example_code()
    desc = code.descriptor()
    assert desc["family"] == "ia"
    assert (desc["k"], desc["m"], desc["kappa"]) == (4, 5, 2)
    rebuilt = IACode(Field(desc["m"], desc["modulus"]), desc["k"],
                     P=Matrix(F32, desc["P"]), V=Matrix(F32, desc["V"]), kappa=desc["kappa"])
    assert rebuilt.encode([1] * 16) == code.encode([1] * 16)
