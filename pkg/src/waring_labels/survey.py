"""Monte Carlo surveys of label classes over random forms and points.

Each trial draws an independent sample from a seeded substream (derived from
the survey seed and the trial index), runs the matching engine, and tallies
the achieved label.  Failures are first-class data: the failure rate is the
estimate of the bad-set-plus-solver-gap measure, so no silent retries happen
here.  Histograms merge in trial order, which makes results identical for
any thread count.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .algebra import EngineError, HomogeneousForm, ProjectivePoint, exponents, multinomials
from .binary import sylvester_decompose
from .decompose import NLSConfig, decompose_weight, generic_rank
from .hypersurface import HypersurfaceInstance, find_label_hypersurface
from .labels import Label

DISTRIBUTIONS = ("gaussian-monomial", "gaussian-bombieri")


@dataclass(frozen=True)
class BinaryGeometry:
    d: int

    kind = "binary"

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("degree must be >= 1")


@dataclass(frozen=True)
class VeroneseGeometry:
    n: int
    d: int
    weight: int | None = None  # defaults to the filling rank plus one

    kind = "veronese"

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ValueError("need n >= 1 and d >= 1")

    def search_weight(self) -> int:
        return self.weight if self.weight is not None else generic_rank(self.n, self.d) + 1


@dataclass(frozen=True)
class HypersurfaceGeometry:
    surface: HomogeneousForm

    kind = "hypersurface"

    def __post_init__(self):
        if not self.surface.is_real:
            raise ValueError("the hypersurface must be real")


Geometry = BinaryGeometry | VeroneseGeometry | HypersurfaceGeometry


@dataclass(frozen=True)
class EnsembleSpec:
    geometry: Geometry
    trials: int
    seed: int = 0
    distribution: str = "gaussian-monomial"
    nls: NLSConfig = field(default_factory=NLSConfig)

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(f"unknown distribution {self.distribution!r}")


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """The RNG substream of one trial; depends only on (seed, index)."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def sample_random_form(spec: EnsembleSpec, stream: np.random.Generator) -> HomogeneousForm:
    """One i.i.d.-coefficient real form from the spec's form geometry."""
    geom = spec.geometry
    if isinstance(geom, BinaryGeometry):
        n, d = 1, geom.d
    elif isinstance(geom, VeroneseGeometry):
        n, d = geom.n, geom.d
    else:
        raise ValueError("the hypersurface geometry samples points, not forms")
    m = len(exponents(n, d))
    coeffs = stream.standard_normal(m)
    if spec.distribution == "gaussian-bombieri":
        coeffs = coeffs * np.sqrt(multinomials(n, d))
    return HomogeneousForm(n, d, coeffs)


@dataclass
class LabelHistogram:
    counts: dict
    failures: int
    metadata: dict

    @property
    def trials(self) -> int:
        return sum(self.counts.values()) + self.failures

    def frequency(self, label: Label) -> float:
        return self.counts.get(label, 0) / self.trials

    def max_weight(self) -> int | None:
        return max((lab.weight for lab in self.counts), default=None)

    def to_json_obj(self) -> dict:
        rows = [
            {"label": [lab.a, lab.b], "weight": lab.weight, "count": count}
            for lab, count in sorted(self.counts.items())
        ]
        return {"counts": rows, "failures": self.failures, "metadata": self.metadata}

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["label_a", "label_b", "weight", "count"])
            for lab, count in sorted(self.counts.items()):
                writer.writerow([lab.a, lab.b, lab.weight, count])
            writer.writerow(["failure", "", "", self.failures])


def _run_trial(spec: EnsembleSpec, index: int) -> Label | None:
    rng = trial_rng(spec.seed, index)
    geom = spec.geometry
    try:
        if isinstance(geom, BinaryGeometry):
            S, _ = sylvester_decompose(sample_random_form(spec, rng))
        elif isinstance(geom, HypersurfaceGeometry):
            q = ProjectivePoint(rng.standard_normal(geom.surface.n + 1))
            S, _ = find_label_hypersurface(HypersurfaceInstance(geom.surface, q), rng)
        else:
            f = sample_random_form(spec, rng)
            seed = int(rng.integers(0, 2**31 - 1))
            cfg = NLSConfig(
                max_iters=spec.nls.max_iters,
                lambda_init=spec.nls.lambda_init,
                gradient_tol=spec.nls.gradient_tol,
                residual_tol=spec.nls.residual_tol,
                restarts=spec.nls.restarts,
                seed=seed,
            )
            S, _ = decompose_weight(f, geom.search_weight(), skip_all_real=True, config=cfg)
        return S.label
    except EngineError:
        return None


def survey_labels(spec: EnsembleSpec, threads: int = 1) -> LabelHistogram:
    """Tally achieved labels over the ensemble; failures are counted, never retried.

    The histogram depends only on the spec (seed included), not the thread
    count: trials use independent substreams and merge in index order.
    """
    if threads < 1:
        raise ValueError("threads must be >= 1")
    if threads == 1:
        outcomes = [_run_trial(spec, i) for i in range(spec.trials)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(lambda i: _run_trial(spec, i), range(spec.trials)))
    counts: dict = {}
    failures = 0
    for outcome in outcomes:
        if outcome is None:
            failures += 1
        else:
            counts[outcome] = counts.get(outcome, 0) + 1
    geom = spec.geometry
    # The thread count is deliberately not recorded: it cannot change the
    # histogram, and the output must be byte-identical for any value.
    meta = {
        "geometry": _geometry_json(geom),
        "distribution": spec.distribution,
        "trials": spec.trials,
        "seed": spec.seed,
    }
    return LabelHistogram(counts, failures, meta)


def _geometry_json(geom: Geometry) -> dict:
    if isinstance(geom, BinaryGeometry):
        return {"kind": "binary", "d": geom.d}
    if isinstance(geom, VeroneseGeometry):
        return {"kind": "veronese", "n": geom.n, "d": geom.d, "weight": geom.search_weight()}
    coeffs = [
        {"alpha": list(alpha), "re": float(c.real), "im": 0.0}
        for alpha, c in geom.surface.to_coeff_dict().items()
    ]
    return {
        "kind": "hypersurface",
        "surface": {"n": geom.surface.n, "d": geom.surface.d, "coeffs": coeffs},
    }
