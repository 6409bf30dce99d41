"""Verification orchestration: golden round trips, pattern sweeps, seeded
randomness, assignment search, and CSV/JSON exports for the tradeoff curves.

Code families plug in through a small duck-typed surface: node_ids(),
random_message(rng), encode(msg) -> {node: symbols}, repair_multi(shards,
failed, helpers=None, ...) -> ({node: symbols}, transcript), descriptor().
"""

import contextlib
import csv
import hashlib
import itertools
import json
import random
import sys
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction

from .framework import SingularCouplingError
from .tradeoff import SystemParams, compare_strategies, tradeoff_curve


class AssignmentNotFoundError(LookupError):
    """Search budget exhausted without a fully sweep-clean assignment."""

    def __init__(self, family, best=None, best_failures=None):
        self.family = family
        self.best = best
        self.best_failures = best_failures
        super().__init__(
            "no %s assignment found (best candidate leaves %s singular patterns)"
            % (family, best_failures)
        )


class SplitRandom:
    """Counter-mode SHA-256 stream with named substreams.

    split(label) returns an independent deterministic stream, so per-pattern
    messages do not depend on sweep order or on how many draws came before.
    """

    def __init__(self, seed, path=()):
        self.seed = int(seed)
        self.path = tuple(str(p) for p in path)
        self.counter = 0

    def split(self, label):
        return SplitRandom(self.seed, self.path + (str(label),))

    def _next64(self):
        key = "%d|%s|%d" % (self.seed, "/".join(self.path), self.counter)
        self.counter += 1
        return int.from_bytes(hashlib.sha256(key.encode()).digest()[:8], "big")

    def randrange(self, bound):
        if bound <= 0:
            raise ValueError("bound must be positive")
        return self._next64() % bound

    def sample(self, seq, count):
        pool = list(seq)
        if count > len(pool):
            raise ValueError("sample larger than population")
        for t in range(count):
            u = t + self.randrange(len(pool) - t)
            pool[t], pool[u] = pool[u], pool[t]
        return pool[:count]


@dataclass
class SweepEntry:
    pattern: tuple
    success: bool
    bandwidth: int
    singular: bool

    def to_dict(self):
        return {
            "pattern": list(self.pattern),
            "success": self.success,
            "bandwidth": self.bandwidth,
            "singular": self.singular,
        }


@dataclass
class SweepReport:
    descriptor: dict
    e: int
    entries: list = dataclass_field(default_factory=list)

    @property
    def singular_patterns(self):
        return [x.pattern for x in self.entries if x.singular]

    @property
    def failed_patterns(self):
        return [x.pattern for x in self.entries if not x.success]

    @property
    def success_count(self):
        return sum(1 for x in self.entries if x.success)

    def all_ok(self):
        return all(x.success for x in self.entries)

    def to_json(self):
        return json.dumps(
            {
                "descriptor": self.descriptor,
                "e": self.e,
                "entries": [x.to_dict() for x in self.entries],
            },
            sort_keys=True,
        )


def verify_exact_repair(code, pattern, helpers=None, rng=None, **repair_args):
    """Encode a message, erase the pattern, repair, compare bit-exactly.

    Returns (success, bandwidth, singular); a singular coupling system is a
    reported outcome, a content mismatch after a solve would be a code bug
    and also comes back as success=False.
    """
    pattern = tuple(sorted(pattern))
    if rng is None:
        rng = random.Random(0)
    msg = code.random_message(rng)
    shards = code.encode(msg)
    golden = {i: list(shards[i]) for i in pattern}
    survivors = {i: v for i, v in shards.items() if i not in set(pattern)}
    try:
        contents, transcript = code.repair_multi(survivors, pattern, helpers, **repair_args)
    except SingularCouplingError:
        return False, 0, True
    ok = all(list(contents[i]) == golden[i] for i in pattern)
    return ok, transcript.total, False


def run_sweep(code, e, seed=0, sample=None, helpers=None, **repair_args):
    """Try every e-failure pattern (or a seeded sample) and verify repair."""
    base = SplitRandom(seed)
    patterns = list(itertools.combinations(code.node_ids(), e))
    if sample is not None and sample < len(patterns):
        chosen = sorted(base.split("patterns").sample(range(len(patterns)), sample))
        patterns = [patterns[t] for t in chosen]
    report = SweepReport(descriptor=code.descriptor(), e=e)
    for pattern in patterns:
        rng = base.split("msg-%s" % (",".join(map(str, pattern))))
        ok, bandwidth, singular = verify_exact_repair(
            code, pattern, helpers=helpers, rng=rng, **repair_args
        )
        report.entries.append(SweepEntry(pattern, ok, bandwidth, singular))
    return report


def search_assignment(family, params, budget=200, seed=0):
    """Randomized search for code coefficients whose sweeps are all clean."""
    from . import ia as ia_mod
    from . import pm as pm_mod
    from .gf import Field

    field = Field(params["m"], params.get("modulus"))
    if family == "pm":
        lambdas = pm_mod.field_search(
            field,
            params["n"],
            params["k"],
            params.get("e_max", params["n"] - params["k"]),
            trials=budget,
            seed=seed,
        )
        return pm_mod.PMCode(field, params["n"], params["k"], lambdas).descriptor()
    if family == "ia":
        code = ia_mod.field_search(
            field,
            params["k"],
            params.get("e_max", params["k"]),
            trials=budget,
            seed=seed,
        )
        return code.descriptor()
    raise ValueError("search supports the pm and ia families")


def _frac(q):
    q = Fraction(q)
    return q.numerator, q.denominator


def _open_out(path):
    # "-" selects stdout so CLI callers can stream instead of writing a file
    if path == "-":
        return contextlib.nullcontext(sys.stdout)
    return open(path, "w", newline="")


def emit_curve(params, path):
    """Write the storage-bandwidth tradeoff breakpoints as exact rationals."""
    rows = tradeoff_curve(params)
    with _open_out(path) as out:
        w = csv.writer(out)
        w.writerow(["gamma_num", "gamma_den", "alpha_num", "alpha_den", "segment"])
        for p in rows:
            w.writerow([*_frac(p.gamma), *_frac(p.alpha), p.segment])
    return len(rows)


def emit_comparison(params, path):
    """Write batched-vs-separate repair bandwidths over a shared alpha grid."""
    report = compare_strategies(params)
    with _open_out(path) as out:
        w = csv.writer(out)
        w.writerow(
            [
                "alpha_num",
                "alpha_den",
                "batched_num",
                "batched_den",
                "separate_num",
                "separate_den",
                "batched_fewer_num",
                "batched_fewer_den",
            ]
        )
        for row in report.rows:
            fewer = row.gamma_centralized_fewer
            fewer_cols = _frac(fewer) if fewer is not None else ("", "")
            w.writerow(
                [
                    *_frac(row.alpha),
                    *_frac(row.gamma_centralized),
                    *_frac(row.gamma_separate),
                    *fewer_cols,
                ]
            )
    return report


def build_code(descriptor):
    """Rebuild a code object from its descriptor dict.

    Inverse of each family's descriptor() method, so JSON descriptors can be
    stored and later turned back into working encoders.
    """
    from .gf import Field, Matrix

    family = descriptor["family"]
    field = Field(descriptor["m"], descriptor["modulus"])
    if family == "pm":
        from .pm import PMCode

        return PMCode(field, descriptor["n"], descriptor["k"], lambdas=list(descriptor["lambdas"]))
    if family == "ia":
        from .ia import IACode

        return IACode(
            field,
            descriptor["k"],
            P=Matrix(field, [list(r) for r in descriptor["P"]]),
            V=Matrix(field, [list(r) for r in descriptor["V"]]),
            kappa=descriptor["kappa"],
        )
    if family == "mds":
        from .mds import MDSStripeCode

        if descriptor["mode"] == "fixed":
            return MDSStripeCode(field, descriptor["n"], descriptor["k"], d=descriptor["d_or_range"])
        return MDSStripeCode(field, descriptor["n"], descriptor["k"], d_max=descriptor["d_or_range"][1])
    if family == "ambr":
        from .ambr import AdaptiveMBRCode

        return AdaptiveMBRCode(
            field, descriptor["n"], descriptor["k"], descriptor["d_min"], descriptor["d_max"]
        )
    raise ValueError("unknown code family %r" % (family,))
