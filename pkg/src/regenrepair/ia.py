"""Interference-alignment minimum-storage code: n = 2k, d = 2k-1, alpha = k.

Systematic nodes 1..k store the raw data vectors w_1..w_k; parity node k+i
stores w-bar_i with w-bar_i^t = sum_j w_j^t (u_i v_j^t + P_{j,i} I). Repair
of a failed node downloads one inner product from each of the other 2k-1
nodes and cancels the interference through the dual bases U', V'. With e
failures the 2k-e survivors all act as helpers and the cross-failure
transfers are recovered from the coupling system, whose rows come in four
flavors depending on which side of the code each endpoint lives on.

All arithmetic is over GF(2^m), where addition and subtraction coincide;
the formulas keep the textbook shape and simply evaluate minus as plus,
and the constraint kappa^2 != 1 reduces to kappa != 1.
"""

import random

from .framework import CouplingSystem, RepairProblem, solve_and_regenerate, unknown_pairs
from .gf import (
    Matrix,
    all_square_submatrices_invertible,
    cauchy,
    dot,
    mat_inv,
    mat_mul,
    mat_solve,
    mat_vec,
    vandermonde,
)


class UnsupportedPatternError(ValueError):
    """Pattern shape has no closed-form repair condition."""


def default_p_matrix(field, k):
    """Power table g^{(i-1)(j-1)}, falling back to a Cauchy matrix when some
    square submatrix degenerates."""
    g = field.generator
    data = [[field.pow(g, (r - 1) * (c - 1)) for c in range(1, k + 1)] for r in range(1, k + 1)]
    p = Matrix(field, data)
    if all_square_submatrices_invertible(p):
        return p
    if 2 * k > field.size:
        raise ValueError("field too small for a Cauchy fallback")
    elems = list(field.elements())
    return cauchy(field, elems[:k], elems[k : 2 * k])


def default_kappa(field):
    for x in field.elements():
        if x != 0 and field.mul(x, x) != 1:
            return x
    raise ValueError("field has no kappa with kappa^2 != 1")


class IACode:
    def __init__(self, field, k, P=None, V=None, kappa=None):
        if k < 1:
            raise ValueError("need k >= 1")
        self.field = field
        self.k = k
        self.n = 2 * k
        self.d = 2 * k - 1
        self.alpha = k
        if V is None:
            V = Matrix.identity(field, k)
        if P is None:
            P = default_p_matrix(field, k)
        elif not all_square_submatrices_invertible(P):
            raise ValueError("every square submatrix of P must be invertible")
        if kappa is None:
            kappa = default_kappa(field)
        if kappa == 0 or field.mul(kappa, kappa) == 1:
            raise ValueError("kappa must satisfy kappa != 0 and kappa^2 != 1")
        self.V = V
        self.P = P
        self.kappa = kappa
        self.Vd = mat_inv(V).transpose()  # V'
        self.Pd = mat_inv(P).transpose()  # P'
        # U = kappa^{-1} V' P and its inverse transpose U' = kappa V P'
        inv_kappa = field.inv(kappa)
        self.U = Matrix(
            field,
            [[field.mul(inv_kappa, x) for x in row] for row in mat_mul(self.Vd, P).data],
        )
        self.Ud = Matrix(field, [[field.mul(kappa, x) for x in row] for row in mat_mul(V, self.Pd).data])
        self.one_minus_k2 = field.add(1, field.mul(kappa, kappa))  # 1 - kappa^2
        self.one_plus_k = field.add(1, kappa)  # 1 + kappa = 1 - kappa

    # --- structure helpers ---

    def node_ids(self):
        return list(range(1, self.n + 1))

    def is_systematic(self, node):
        return 1 <= node <= self.k

    def _col(self, m, j):
        return [m.data[r][j - 1] for r in range(self.k)]

    def descriptor(self):
        return {
            "family": "ia",
            "k": self.k,
            "m": self.field.m,
            "modulus": self.field.modulus,
            "kappa": self.kappa,
            "P": [list(r) for r in self.P.data],
            "V": [list(r) for r in self.V.data],
        }

    # --- encode / reconstruct ---

    @property
    def message_length(self):
        return self.k * self.alpha

    def random_message(self, rng):
        return [rng.randrange(self.field.size) for _ in range(self.message_length)]

    def encode(self, data):
        if len(data) != self.message_length:
            raise ValueError("data must have k*alpha symbols")
        f = self.field
        shards = {}
        systematic = []
        for j in range(1, self.k + 1):
            w = list(data[(j - 1) * self.alpha : j * self.alpha])
            systematic.append(w)
            shards[j] = w
        for i in range(1, self.k + 1):
            u_i = self._col(self.U, i)
            acc = [0] * self.alpha
            for j in range(1, self.k + 1):
                w = systematic[j - 1]
                scale = dot(f, w, u_i)  # w_j^t u_i
                p = self.P.data[j - 1][i - 1]
                v_j = self._col(self.V, j)
                for t in range(self.alpha):
                    acc[t] = f.add(acc[t], f.add(f.mul(scale, v_j[t]), f.mul(p, w[t])))
            shards[self.k + i] = acc
        return shards

    def reconstruct(self, shards):
        """Recover the data from any k shards via a generic linear solve."""
        nodes = sorted(shards)[: self.k]
        if len(nodes) < self.k:
            raise ValueError("need at least k shards")
        f = self.field
        size = self.message_length
        rows, rhs = [], []
        for node in nodes:
            if len(shards[node]) != self.alpha:
                raise ValueError("bad shard length at node %d" % node)
            for t in range(self.alpha):
                row = [0] * size
                if self.is_systematic(node):
                    row[(node - 1) * self.alpha + t] = 1
                else:
                    i = node - self.k
                    u_i = self._col(self.U, i)
                    for j in range(1, self.k + 1):
                        p = self.P.data[j - 1][i - 1]
                        base = (j - 1) * self.alpha
                        # w_j contributes (w_j . u_i) V[t][j-1] + p w_j[t]
                        vj_t = self.V.data[t][j - 1]
                        for s in range(self.alpha):
                            row[base + s] = f.add(row[base + s], f.mul(u_i[s], vj_t))
                        row[base + t] = f.add(row[base + t], p)
                rows.append(row)
                rhs.append(shards[node][t])
        return mat_solve(Matrix(f, rows), rhs)

    # --- single-node repair ---

    def repair_transfer(self, shard, target):
        """Symbol a live node sends toward failed node target.

        Every node projects its content on v'_l for a systematic target l,
        and on u_m for a parity target k+m.
        """
        if self.is_systematic(target):
            return dot(self.field, shard, self._col(self.Vd, target))
        return dot(self.field, shard, self._col(self.U, target - self.k))

    def _decode_systematic(self, l, transfers):
        """w_l = (U' - kappa^2/(1+kappa) V e_l e_l^t P') y with
        y_i = sbar_{i,l} - sum_{j != l} P_{j,i} r_{j,l}."""
        f = self.field
        y = []
        for i in range(1, self.k + 1):
            acc = transfers[self.k + i]
            for j in range(1, self.k + 1):
                if j != l:
                    acc = f.add(acc, f.mul(self.P.data[j - 1][i - 1], transfers[j]))
            y.append(acc)
        out = mat_vec(self.Ud, y)
        scale = f.mul(
            f.div(f.mul(self.kappa, self.kappa), self.one_plus_k),
            dot(f, self.Pd.data[l - 1], y),
        )
        v_l = self._col(self.V, l)
        return [f.add(out[t], f.mul(scale, v_l[t])) for t in range(self.alpha)]

    def _decode_parity(self, m, transfers):
        """wbar_m = ((1-kappa^2) V + (1+kappa) U' e_m e_m^t P^t) z with
        z_i = s_{i,m} + kappa^2/(1-kappa^2) sum_{j != m} P'_{i,j} rbar_{j,m}."""
        f = self.field
        ratio = f.div(f.mul(self.kappa, self.kappa), self.one_minus_k2)
        z = []
        for i in range(1, self.k + 1):
            acc = transfers[i]
            for j in range(1, self.k + 1):
                if j != m:
                    acc = f.add(acc, f.mul(ratio, f.mul(self.Pd.data[i - 1][j - 1], transfers[self.k + j])))
            z.append(acc)
        vz = mat_vec(self.V, z)
        scale = f.mul(self.one_plus_k, dot(f, [self.P.data[j][m - 1] for j in range(self.k)], z))
        ud_m = self._col(self.Ud, m)
        return [f.add(f.mul(self.one_minus_k2, vz[t]), f.mul(scale, ud_m[t])) for t in range(self.alpha)]

    def _decode_from_transfers(self, target, transfers):
        if self.is_systematic(target):
            return self._decode_systematic(target, transfers)
        return self._decode_parity(target - self.k, transfers)

    def repair_single(self, shards, failed, helpers=None):
        contents, transcript = self.repair_multi(shards, (failed,), helpers)
        return contents[failed], transcript

    # --- multi-node repair ---

    def _coupling_terms(self, x, y):
        """Expansion of the unknown transfer x -> y over transfers toward x.

        Returns [(source, destination, coefficient)]; destination is always
        x. Sources that also failed become matrix entries, the rest feed b.
        """
        f = self.field
        k = self.k
        kap = self.kappa
        terms = []
        if self.is_systematic(x) and not self.is_systematic(y):
            l, m = x, y - k
            # s_{l,m}: couples the transfers that repair systematic l
            ratio = f.div(kap, self.one_plus_k)
            plm = self.P.data[l - 1][m - 1]
            for j in range(1, k + 1):
                c = f.mul(ratio, f.mul(plm, self.Pd.data[l - 1][j - 1]))
                if j == m:
                    c = f.add(1, c)  # (1 - kappa/(1+kappa) P_lm P'_lm)
                terms.append((k + j, l, c))
            for j in range(1, k + 1):
                if j != l:
                    terms.append((j, l, self.P.data[j - 1][m - 1]))  # -P_{j,m} r_{j,l}
        elif self.is_systematic(x) and self.is_systematic(y):
            l1, l2 = x, y
            # r_{l1,l2} = sum_j kappa P'_{l2,j} sbar_{j,l1} - kappa r_{l2,l1}
            for j in range(1, k + 1):
                terms.append((k + j, l1, f.mul(kap, self.Pd.data[l2 - 1][j - 1])))
            terms.append((l2, l1, kap))
        elif not self.is_systematic(x) and self.is_systematic(y):
            m, l = x - k, y
            # sbar_{m,l}: couples the transfers that repair parity m
            pdlm = self.Pd.data[l - 1][m - 1]
            kk1 = f.mul(kap, self.one_plus_k)
            for j in range(1, k + 1):
                c = f.mul(kk1, f.mul(pdlm, self.P.data[j - 1][m - 1]))
                if j == l:
                    c = f.add(self.one_minus_k2, c)
                terms.append((j, x, c))
            k2 = f.mul(kap, kap)
            for j in range(1, k + 1):
                if j != m:
                    terms.append((k + j, x, f.mul(k2, self.Pd.data[l - 1][j - 1])))
        else:
            m1, m2 = x - k, y - k
            # rbar_{m1,m2} = sum_j (1-kappa^2)/kappa P_{j,m2} s_{j,m1} + kappa rbar_{m2,m1}
            ratio = f.div(self.one_minus_k2, kap)
            for j in range(1, k + 1):
                terms.append((j, x, f.mul(ratio, self.P.data[j - 1][m2 - 1])))
            terms.append((y, x, kap))
        return terms

    def coupling_system(self, failed):
        """Coupling matrix for a pattern plus the known-term recipe for b."""
        failed = tuple(sorted(failed))
        system = CouplingSystem(self.field, failed)
        known = {}
        failed_set = set(failed)
        for pair in unknown_pairs(failed):
            known[pair] = []
            for src, dst, coeff in self._coupling_terms(*pair):
                if src in failed_set:
                    system.add_entry(pair, (src, dst), coeff)
                else:
                    known[pair].append((src, dst, coeff))
        return system, known

    def assemble_multi(self, shards, failed):
        f = self.field
        failed = tuple(sorted(failed))
        system, known = self.coupling_system(failed)
        helpers = [h for h in sorted(shards) if h not in set(failed)]
        received = {}
        for h in helpers:
            for j in failed:
                received[(h, j)] = self.repair_transfer(shards[h], j)
        for pair, terms in known.items():
            acc = 0
            for src, dst, coeff in terms:
                acc = f.add(acc, f.mul(coeff, received[(src, dst)]))
            system.add_rhs(pair, acc)
        return system, received

    def repair_multi(self, shards, failed, helpers=None):
        failed = tuple(sorted(set(failed)))
        e = len(failed)
        if not 1 <= e <= self.k:
            raise ValueError("can repair 1..k nodes at once")
        survivors = tuple(h for h in sorted(shards) if h not in set(failed))
        if len(survivors) != self.n - e or set(failed) & set(shards.keys()):
            raise ValueError("need shards from exactly the %d survivors" % (self.n - e))
        if helpers is not None and tuple(sorted(helpers)) != survivors:
            raise ValueError("all survivors must help: d-e+1 = n-e here")
        problem = RepairProblem(failed=failed, helpers=survivors)
        if e == 1:
            target = failed[0]
            transfers = {h: self.repair_transfer(shards[h], target) for h in survivors}
            decode = lambda node, solved: self._decode_from_transfers(node, transfers)
            return solve_and_regenerate(None, decode, problem)
        system, received = self.assemble_multi(shards, failed)

        def decode(node, solved):
            transfers = {}
            for src in self.node_ids():
                if src == node:
                    continue
                transfers[src] = received[(src, node)] if src in shards else solved[(src, node)]
            return self._decode_from_transfers(node, transfers)

        return solve_and_regenerate(system, decode, problem)

    def pattern_sweep(self, e, seed=0, sample=None):
        from .workbench import run_sweep

        return run_sweep(self, e, seed=seed, sample=sample)

    # --- closed-form repairability conditions ---

    def _pi(self, l, m):
        """P_{l,m} (P^{-1})_{m,l} for systematic l, parity index m."""
        return self.field.mul(self.P.data[l - 1][m - 1], self.Pd.data[l - 1][m - 1])

    def condition_check(self, failed):
        """Closed-form repairability for the covered shapes; cross-checked
        against the coupling determinant."""
        f = self.field
        failed = tuple(sorted(set(failed)))
        sys_nodes = [x for x in failed if self.is_systematic(x)]
        par_nodes = [x - self.k for x in failed if not self.is_systematic(x)]
        s, p = len(sys_nodes), len(par_nodes)
        if s == 0 or p == 0:
            return True
        if (s, p) in [(1, 1), (2, 1), (1, 2), (3, 1), (1, 3)]:
            acc = 1
            for l in sys_nodes:
                for m in par_nodes:
                    acc = f.add(acc, self._pi(l, m))  # 1 - sum pi, minus = plus
            return acc != 0
        if (s, p) == (2, 2):
            l1, l2 = sys_nodes
            m1, m2 = par_nodes
            q = lambda a, b: self.P.data[a - 1][b - 1]
            w = lambda a, b: self.Pd.data[a - 1][b - 1]
            acc = 1
            for l in (l1, l2):
                for m in (m1, m2):
                    acc = f.add(acc, self._pi(l, m))
            acc = f.add(acc, f.mul(f.mul(q(l1, m1), w(l1, m1)), f.mul(q(l2, m2), w(l2, m2))))
            acc = f.add(acc, f.mul(f.mul(q(l1, m2), w(l1, m2)), f.mul(q(l2, m1), w(l2, m1))))
            acc = f.add(acc, f.mul(f.mul(q(l1, m1), w(l2, m1)), f.mul(q(l2, m2), w(l1, m2))))
            acc = f.add(acc, f.mul(f.mul(q(l1, m2), w(l2, m2)), f.mul(q(l2, m1), w(l1, m1))))
            return acc != 0
        raise UnsupportedPatternError("no closed form for %d systematic + %d parity" % (s, p))

    def conjecture_eval(self, failed):
        """Compare det(A) with the conjectured product formula (report only)."""
        from itertools import combinations, permutations

        f = self.field
        failed = tuple(sorted(set(failed)))
        sys_nodes = [x for x in failed if self.is_systematic(x)]
        par_nodes = [x - self.k for x in failed if not self.is_systematic(x)]
        s, p = len(sys_nodes), len(par_nodes)
        e = s + p
        system, _ = self.coupling_system(failed)
        lhs = system.determinant()
        # kappa^{2sp} (1-kappa^2)^{C(s,2)+C(p,2)} (1 - sum over matchings)^e
        bracket = 1
        for size in range(1, min(s, p) + 1):
            for lset in combinations(sys_nodes, size):
                for jset in combinations(par_nodes, size):
                    for sigma in permutations(range(size)):
                        sgn_a = _perm_sign(sigma)
                        prod_a = 1
                        for i, t in enumerate(sigma):
                            prod_a = f.mul(prod_a, self.P.data[lset[i] - 1][jset[t] - 1])
                        for sigma2 in permutations(range(size)):
                            prod_b = 1
                            for i, t in enumerate(sigma2):
                                prod_b = f.mul(prod_b, self.Pd.data[lset[i] - 1][jset[t] - 1])
                            term = f.mul(prod_a, prod_b)
                            # signs are powers of -1 = 1 in characteristic 2
                            bracket = f.add(bracket, term)
        rhs = f.pow(self.kappa, 2 * s * p)
        rhs = f.mul(rhs, f.pow(self.one_minus_k2, s * (s - 1) // 2 + p * (p - 1) // 2))
        rhs = f.mul(rhs, f.pow(bracket, e))
        return lhs, rhs, lhs == rhs


def _perm_sign(sigma):
    inversions = sum(
        1 for a in range(len(sigma)) for b in range(a + 1, len(sigma)) if sigma[a] > sigma[b]
    )
    return -1 if inversions % 2 else 1


def field_search(field, k, e_max, trials=200, seed=0):
    """Search for IA coefficients whose sweeps are clean for all e <= e_max.

    Trial zero uses the default construction; later trials draw random P
    matrices (filtered by the all-submatrix condition) and random kappa.
    """
    from itertools import combinations

    from .workbench import AssignmentNotFoundError

    rng = random.Random(seed)
    e_cap = min(e_max, k)
    best = None
    best_bad = None
    for trial in range(trials):
        try:
            if trial == 0:
                code = IACode(field, k)
            else:
                data = [[rng.randrange(1, field.size) for _ in range(k)] for _ in range(k)]
                p = Matrix(field, data)
                if not all_square_submatrices_invertible(p):
                    continue
                kappas = [x for x in field.elements() if x not in (0, 1)]
                code = IACode(field, k, P=p, kappa=kappas[rng.randrange(len(kappas))])
        except ValueError:
            continue
        bad = 0
        for e in range(2, e_cap + 1):
            for pattern in combinations(code.node_ids(), e):
                system, _ = code.coupling_system(pattern)
                if system.determinant() == 0:
                    bad += 1
        if bad == 0:
            return code
        if best_bad is None or bad < best_bad:
            best, best_bad = code, bad
    raise AssignmentNotFoundError("ia", best=best, best_failures=best_bad)
