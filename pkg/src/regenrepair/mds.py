"""Striped systematic MDS code: the simple strategy for many failures.

The file of k*delta symbols becomes an (n*delta, k*delta) Reed-Solomon
codeword and node j stores codeword positions (j-1)*delta .. j*delta-1.
Repair downloads k*delta/d symbols from each of d helpers (any k*delta
positions determine the file), rebuilds the file, and re-encodes the lost
shards, so the total bandwidth is always exactly M = k*delta. Fixed mode
stores delta = d symbols per node for one repair degree; adaptive mode
stores delta = lcm(k..d_max) so every degree k <= d <= d_max divides M.
"""

import math
import random

from .framework import InvalidHelperCountError, RepairProblem, RepairTranscript
from .gf import Matrix, mat_inv, mat_mul, mat_solve, vandermonde


class MDSStripeCode:
    def __init__(self, field, n, k, d=None, d_max=None):
        if k < 1 or n < k:
            raise ValueError("need n >= k >= 1")
        if (d is None) == (d_max is None):
            raise ValueError("give exactly one of d (fixed) or d_max (adaptive)")
        if d is not None:
            if not k <= d <= n - 1:
                raise ValueError("fixed repair degree needs k <= d <= n-1")
            self.mode = "fixed"
            self.delta = d
            self.d_max = d
        else:
            if not k <= d_max <= n - 1:
                raise ValueError("adaptive range needs k <= d_max <= n-1")
            self.mode = "adaptive"
            self.delta = math.lcm(*range(k, d_max + 1))
            self.d_max = d_max
        self.field = field
        self.n = n
        self.k = k
        if n * self.delta > field.size:
            raise ValueError("field too small: need %d evaluation points" % (n * self.delta))
        self.message_length = k * self.delta  # M
        v_all = vandermonde(field, list(range(n * self.delta)), self.message_length)
        v_sys = Matrix(field, v_all.data[: self.message_length])
        self.generator = mat_mul(v_all, mat_inv(v_sys))

    def node_ids(self):
        return list(range(1, self.n + 1))

    def random_message(self, rng):
        return [rng.randrange(self.field.size) for _ in range(self.message_length)]

    def _codeword_rows(self, positions, data):
        f = self.field
        out = []
        for pos in positions:
            row = self.generator.data[pos]
            acc = 0
            for c, x in enumerate(data):
                if x:
                    acc = f.add(acc, f.mul(row[c], x))
            out.append(acc)
        return out

    def encode(self, data):
        if len(data) != self.message_length:
            raise ValueError("file must have k*delta symbols")
        shards = {}
        for j in range(1, self.n + 1):
            shards[j] = self._codeword_rows(range((j - 1) * self.delta, j * self.delta), data)
        return shards

    def _solve_positions(self, positions, symbols):
        rows = [self.generator.data[pos] for pos in positions]
        return mat_solve(Matrix(self.field, rows), symbols)

    def reconstruct(self, shards):
        nodes = sorted(shards)[: self.k]
        if len(nodes) < self.k:
            raise ValueError("need at least k shards")
        positions, symbols = [], []
        for node in nodes:
            positions.extend(range((node - 1) * self.delta, node * self.delta))
            symbols.extend(shards[node])
        return self._solve_positions(positions, symbols)

    def repair_multi(self, shards, failed, helpers=None, d=None):
        failed = tuple(sorted(set(failed)))
        e = len(failed)
        if not failed or set(failed) & set(shards):
            raise ValueError("failed nodes must be erased and nonempty")
        survivors = [h for h in sorted(shards) if h not in failed]
        if d is None:
            d = self.delta if self.mode == "fixed" else min(self.d_max, self.n - e)
        if self.mode == "fixed" and d != self.delta:
            raise InvalidHelperCountError("fixed mode repairs with d = %d helpers" % self.delta)
        if not self.k <= d <= self.d_max or d > self.n - e:
            raise InvalidHelperCountError("repair degree %d out of range" % d)
        if self.message_length % d:
            raise InvalidHelperCountError("%d does not divide k*delta" % d)
        if helpers is None:
            helpers = survivors[:d]
        helpers = tuple(sorted(helpers))
        if len(helpers) != d or any(h not in shards for h in helpers):
            raise InvalidHelperCountError("need shards from exactly d = %d helpers" % d)
        problem = RepairProblem(failed=failed, helpers=helpers)
        beta = self.message_length // d
        positions, symbols = [], []
        for h in helpers:
            positions.extend(range((h - 1) * self.delta, (h - 1) * self.delta + beta))
            symbols.extend(shards[h][:beta])
        data = self._solve_positions(positions, symbols)
        contents = {
            f: self._codeword_rows(range((f - 1) * self.delta, f * self.delta), data)
            for f in failed
        }
        transcript = RepairTranscript(per_helper={h: beta for h in helpers})
        return contents, transcript

    def repair_single(self, shards, failed, helpers=None, d=None):
        contents, transcript = self.repair_multi(shards, (failed,), helpers, d)
        return contents[failed], transcript

    def pattern_sweep(self, e, seed=0, sample=None, d=None):
        from .workbench import run_sweep

        extra = {} if d is None else {"d": d}
        return run_sweep(self, e, seed=seed, sample=sample, **extra)

    def descriptor(self):
        return {
            "family": "mds",
            "n": self.n,
            "k": self.k,
            "mode": self.mode,
            "d_or_range": self.delta if self.mode == "fixed" else [self.k, self.d_max],
            "m": self.field.m,
            "modulus": self.field.modulus,
        }
