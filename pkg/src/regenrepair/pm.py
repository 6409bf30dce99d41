"""Product-matrix minimum-storage code: d = 2k-2, alpha = k-1, beta = 1.

Node i (ids are 1-based) stores psi_i^t M where psi_i = [1, lam_i, ...,
lam_i^{d-1}] and M stacks two symmetric (alpha x alpha) matrices S1, S2.
Single repair sends one inner product per helper; repairing e nodes at
once routes the missing cross-failure transfers through the coupling
system of the framework module, with coefficients evaluated through the
elementary-symmetric form of the Vandermonde inverse.
"""

import random

from .framework import CouplingSystem, RepairProblem, solve_and_regenerate, unknown_pairs
from .gf import Field, Matrix, dot, mat_mul, mat_solve, vandermonde


class PMCode:
    def __init__(self, field, n, k, lambdas=None):
        if k < 2:
            raise ValueError("need k >= 2 so that alpha = k-1 >= 1")
        d = 2 * k - 2
        if n < d + 1:
            raise ValueError("need n >= d+1 = %d to run repairs" % (d + 1))
        if lambdas is None:
            if n > field.order:
                raise ValueError("field too small for %d default points" % n)
            g = field.generator
            lambdas = [field.pow(g, t) for t in range(n)]
        if len(lambdas) != n:
            raise ValueError("need one lambda per node")
        if len(set(lambdas)) != n:
            raise ValueError("lambdas must be distinct")
        alpha = k - 1
        powers = [field.pow(x, alpha) for x in lambdas]
        if len(set(powers)) != n:
            raise ValueError("alpha-th powers of lambdas must be distinct")
        self.field = field
        self.n = n
        self.k = k
        self.d = d
        self.alpha = alpha
        self.lambdas = list(lambdas)
        self.lam_alpha = powers
        self.Psi = vandermonde(field, lambdas, d)
        self.Phi = self.Psi.submatrix(range(n), range(alpha))

    # --- message handling ---

    @property
    def message_length(self):
        return self.k * (self.k - 1)

    def node_ids(self):
        return list(range(1, self.n + 1))

    def random_message(self, rng):
        return [rng.randrange(self.field.size) for _ in range(self.message_length)]

    def message_matrix(self, msg):
        """Fill S1 and S2 upper triangles row-major and stack them (d x alpha)."""
        if len(msg) != self.message_length:
            raise ValueError("message must have k(k-1) symbols")
        a = self.alpha
        m = Matrix.zero(self.field, self.d, a)
        pos = 0
        for block in range(2):
            for r in range(a):
                for c in range(r, a):
                    m.data[block * a + r][c] = msg[pos]
                    m.data[block * a + c][r] = msg[pos]
                    pos += 1
        return m

    def encode(self, msg):
        code = mat_mul(self.Psi, self.message_matrix(msg))
        return {i + 1: list(code.data[i]) for i in range(self.n)}

    def _msg_index(self, row, col):
        """Position in the message vector feeding M[row][col]."""
        a = self.alpha
        block, r = divmod(row, a)
        lo, hi = min(r, col), max(r, col)
        # upper triangle row-major: row lo starts after lo rows of lengths a, a-1, ...
        tri = lo * a - lo * (lo - 1) // 2 + (hi - lo)
        return block * (a * (a + 1) // 2) + tri

    def reconstruct(self, shards):
        """Recover the message from any k shards via a generic linear solve."""
        nodes = sorted(shards)[: self.k]
        if len(nodes) < self.k:
            raise ValueError("need at least k shards")
        f = self.field
        size = self.message_length
        rows = []
        rhs = []
        for i in nodes:
            if len(shards[i]) != self.alpha:
                raise ValueError("bad shard length at node %d" % i)
            for c in range(self.alpha):
                row = [0] * size
                for a in range(self.d):
                    pos = self._msg_index(a, c)
                    row[pos] = f.add(row[pos], self.Psi.data[i - 1][a])
                rows.append(row)
                rhs.append(shards[i][c])
        return mat_solve(Matrix(f, rows), rhs)

    # --- repair ---

    def repair_transfer(self, shard, target):
        """The symbol a live node sends toward failed node target: w^t phi_target."""
        return dot(self.field, shard, self.Phi.data[target - 1])

    def _decode_from_transfers(self, target, sources, transfers):
        """Rebuild node target from d transfers {source: w_src^t phi_target}."""
        f = self.field
        ordered = sorted(sources)
        psi_h = self.Psi.submatrix([h - 1 for h in ordered], range(self.d))
        x = mat_solve(psi_h, [transfers[h] for h in ordered])  # x = M phi_target
        lam = self.lam_alpha[target - 1]
        return [f.add(x[c], f.mul(lam, x[self.alpha + c])) for c in range(self.alpha)]

    def default_helpers(self, shards, failed, count):
        live = [i for i in sorted(shards) if i not in failed]
        if len(live) < count:
            raise ValueError("not enough live nodes: need %d" % count)
        return tuple(live[:count])

    def repair_single(self, shards, failed, helpers=None):
        contents, transcript = self.repair_multi(shards, (failed,), helpers)
        return contents[failed], transcript

    def _gammas(self, others):
        """Coefficients of prod_{m in others} (x + lam_m), ascending powers.

        gammas[h-1] is the elementary-symmetric coefficient gamma_h; plus
        equals minus in characteristic 2 so no sign bookkeeping is needed.
        """
        f = self.field
        poly = [1]
        for m in others:
            lam = self.lambdas[m - 1]
            nxt = [0] * (len(poly) + 1)
            for t, c in enumerate(poly):
                nxt[t + 1] = f.add(nxt[t + 1], c)
                nxt[t] = f.add(nxt[t], f.mul(c, lam))
            poly = nxt
        return poly

    def coupling_coefficient(self, i, j, l, pool):
        """Weight of transfer s_{l,i} inside the expansion of s_{i,j}.

        pool is the full participant set (failed + helpers); the repair of
        node i reads one transfer from every node of pool except i itself.
        """
        f = self.field
        others = sorted(m for m in pool if m != i and m != l)
        gam = self._gammas(others)  # degree d-1, entries gamma_1..gamma_d
        lam_i = self.lam_alpha[i - 1]
        lam_j = self.lambdas[j - 1]
        lam_l = self.lambdas[l - 1]
        num = 0
        pw = 1
        for h in range(self.alpha):
            term = f.add(gam[h], f.mul(lam_i, gam[h + self.alpha]))
            num = f.add(num, f.mul(term, pw))
            pw = f.mul(pw, lam_j)
        den = 0
        pw = 1
        for h in range(self.d):
            den = f.add(den, f.mul(gam[h], pw))
            pw = f.mul(pw, lam_l)
        return f.div(num, den)

    def assemble_multi(self, shards, failed, helpers):
        """Build the coupling system plus the transfers received from helpers."""
        f = self.field
        failed = tuple(sorted(failed))
        pool = set(failed) | set(helpers)
        received = {}
        for h in helpers:
            for j in failed:
                received[(h, j)] = self.repair_transfer(shards[h], j)
        system = CouplingSystem(f, failed)
        for i, j in unknown_pairs(failed):
            for l in failed:
                if l != i:
                    system.add_entry((i, j), (l, i), self.coupling_coefficient(i, j, l, pool))
            acc = 0
            for h in helpers:
                c = self.coupling_coefficient(i, j, h, pool)
                acc = f.add(acc, f.mul(c, received[(h, i)]))
            system.add_rhs((i, j), acc)
        return system, received

    def repair_multi(self, shards, failed, helpers=None):
        failed = tuple(sorted(set(failed)))
        e = len(failed)
        if not 1 <= e <= min(self.n - self.k, self.k - 1):
            raise ValueError("can repair 1..min(n-k, k-1) nodes at once")
        want = self.d - e + 1
        if helpers is None:
            helpers = self.default_helpers(shards, failed, want)
        helpers = tuple(sorted(helpers))
        if len(helpers) != want:
            raise ValueError("need exactly d-e+1 = %d helpers" % want)
        if set(helpers) & set(failed) or any(h not in shards for h in helpers):
            raise ValueError("helpers must be live non-failed nodes")
        problem = RepairProblem(failed=failed, helpers=helpers)
        if e == 1:
            i = failed[0]
            transfers = {h: self.repair_transfer(shards[h], i) for h in helpers}
            decode = lambda node, solved: self._decode_from_transfers(node, helpers, transfers)
            return solve_and_regenerate(None, decode, problem)
        system, received = self.assemble_multi(shards, failed, helpers)

        def decode(node, solved):
            sources = [m for m in sorted(set(failed) | set(helpers)) if m != node]
            transfers = {}
            for m in sources:
                transfers[m] = received[(m, node)] if m in shards else solved[(m, node)]
            return self._decode_from_transfers(node, sources, transfers)

        return solve_and_regenerate(system, decode, problem)

    def pattern_sweep(self, e, seed=0, sample=None):
        from .workbench import run_sweep

        return run_sweep(self, e, seed=seed, sample=sample)

    def descriptor(self):
        return {
            "family": "pm",
            "n": self.n,
            "k": self.k,
            "m": self.field.m,
            "modulus": self.field.modulus,
            "lambdas": list(self.lambdas),
        }


def field_search(field, n, k, e_max, trials=200, seed=0):
    """Randomized search for a lambda assignment with no singular patterns.

    Multi-repair of e nodes needs d-e+1 >= k helpers, so e is capped at
    min(e_max, n-k, k-1). Singularity only depends on the lambdas, never
    on the message, so candidates are vetted by determinant alone.
    """
    from itertools import combinations

    from .workbench import AssignmentNotFoundError

    e_cap = min(e_max, n - k, k - 1)
    rng = random.Random(seed)
    best = None
    best_bad = None
    for _ in range(trials):
        if n > field.size:
            break
        lambdas = rng.sample(list(field.elements()), n)
        try:
            code = PMCode(field, n, k, lambdas)
        except ValueError:
            continue
        shards = code.encode([0] * code.message_length)
        bad = 0
        for e in range(2, e_cap + 1):
            for pattern in combinations(code.node_ids(), e):
                helpers = code.default_helpers(shards, pattern, code.d - e + 1)
                system, _ = code.assemble_multi(shards, pattern, helpers)
                if system.determinant() == 0:
                    bad += 1
        if bad == 0:
            return lambdas
        if best_bad is None or bad < best_bad:
            best, best_bad = lambdas, bad
    raise AssignmentNotFoundError("pm", best=best, best_failures=best_bad)
