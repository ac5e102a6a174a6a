"""Self-test: the two independent cohomology routes must agree.

Isotypic fiber cohomology is computed twice, by deliberately disjoint
methods:

  * the block route (descent module): split the trivialized rational fiber
    complex into stabilizer-character blocks and take exact kernel/rank
    computations over Q, and
  * the averaging route (oracle module): keep the fiber complex whole over
    the cyclotomic field Q(zeta_m), build the isotypic projectors
    (1/|S|) sum_g phi(g)^{-1} rho(g), and read dimensions off projected
    ranks.

They share no linear algebra and disagree only if one of them is wrong, so
agreement over a random corpus is the toolkit's strongest internal evidence.
Each mismatch is reported with a full problem-file serialization of the
instance, ready to replay.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random

from .descent import block_cohomology, fiber_restrict
from .oracle import isotypic_cohomology
from .problem import point_to_list, problem_to_dict
from .randgen import random_action, random_group, random_point, random_valid_complex


@dataclass(frozen=True)
class Mismatch:
    trial: int
    point: list
    via_blocks: dict  # {(degree, values): dim}
    via_averaging: dict
    problem: dict  # replayable problem-file serialization

    def to_dict(self) -> dict:
        def table(d):
            return [
                {"degree": j, "fiber_character": list(values), "dimension": dim}
                for (j, values), dim in sorted(d.items())
            ]

        return {
            "trial": self.trial,
            "point": self.point,
            "via_blocks": table(self.via_blocks),
            "via_averaging": table(self.via_averaging),
            "problem": self.problem,
        }


@dataclass(frozen=True)
class SelftestReport:
    trials: int
    seed: int
    mismatches: tuple

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> dict:
        return {
            "verdict": "pass" if self.passed else "fail",
            "trials": self.trials,
            "seed": self.seed,
            "mismatch_count": len(self.mismatches),
            "mismatches": [m.to_dict() for m in self.mismatches],
        }


def run_oracle_selftest(
    trials: int = 100,
    seed: int = 0,
    max_group_order: int = 12,
    max_dim: int = 3,
) -> SelftestReport:
    rng = Random(seed)
    mismatches = []
    for trial in range(trials):
        group = random_group(rng, max_order=max_group_order)
        action = random_action(rng, group, max_dim=max_dim)
        complex_ = random_valid_complex(rng, action)
        point = random_point(rng, action.dim + 1)

        fiber = fiber_restrict(complex_, point)
        via_blocks = {
            (j, phi.values): dim
            for (j, phi), dim in block_cohomology(fiber).items()
            if dim
        }
        via_averaging = {k: v for k, v in isotypic_cohomology(complex_, point).items() if v}

        if via_blocks != via_averaging:
            mismatches.append(
                Mismatch(
                    trial=trial,
                    point=point_to_list(point),
                    via_blocks=via_blocks,
                    via_averaging=via_averaging,
                    problem=problem_to_dict(
                        action,
                        complexes={"instance": complex_},
                        points=[point],
                    ),
                )
            )
    return SelftestReport(trials=trials, seed=seed, mismatches=tuple(mismatches))
