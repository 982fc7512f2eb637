"""Acceptance gate: one test per release criterion, at its stated tolerance.

Run `pytest tests/test_acceptance.py -v -s` to get one pass/fail line per
criterion.
"""

from __future__ import annotations

import math
import time

import numpy as np
import pytest

from roby.analysis import correlation_matrix, cross_norm_summary, pearson
from roby.fixtures import FIXTURE_NAMES, load_all_fixtures, load_fixture
from roby.metrics import DistanceSpec, EmbeddingDataset, evaluate
from roby.synth import SynthSpec, generate_blobs

from conftest import random_dataset
from reference import ref_evaluate

# Published correlation rows: dataset -> (FSA, FSD, ROBY) against the
# matching attack-success-rate column.
TABLE_LINF = {
    "CIFAR-10": (-0.84, -0.87, 0.89),
    "MNIST": (-0.93, -0.90, 0.96),
    "Fashion-MNIST": (-0.93, -0.91, 0.97),
}
TABLE_L2 = {
    "CIFAR-10": (-0.98, -0.96, 0.98),
    "MNIST": (-0.99, -0.92, 0.97),
    "Fashion-MNIST": (-0.91, -0.91, 0.98),
}
CROSS_NORM = {
    ("ASR_2", "ROBY_2"): 0.9760,
    ("ASR_2", "ROBY_INF"): 0.9730,
    ("ASR_INF", "ROBY_2"): 0.9600,
    ("ASR_INF", "ROBY_INF"): 0.9400,
}

TOL = 0.05


def _ok(name: str) -> None:
    print(f"[acceptance] {name}: PASS")


def test_criterion_linf_correlation_table():
    start = time.perf_counter()
    for dataset, expected in TABLE_LINF.items():
        table = load_fixture(dataset)
        results = correlation_matrix(
            table, ["FSA_INF", "FSD_INF", "ROBY_INF"], "ASR_INF"
        )
        got = [r.r for r in results]
        assert got == pytest.approx(expected, abs=TOL), dataset
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    _ok(f"l_inf correlation table reproduced +-{TOL} in {elapsed * 1e3:.0f} ms")


def test_criterion_l2_correlation_table():
    for dataset, expected in TABLE_L2.items():
        table = load_fixture(dataset)
        results = correlation_matrix(table, ["FSA_2", "FSD_2", "ROBY_2"], "ASR_2")
        got = [r.r for r in results]
        assert got == pytest.approx(expected, abs=TOL), dataset
    _ok(f"l_2 correlation table reproduced +-{TOL}")


def test_criterion_cross_norm_summary():
    summary = cross_norm_summary(load_all_fixtures())
    for pairing, expected in CROSS_NORM.items():
        assert summary[pairing] == pytest.approx(expected, abs=TOL), pairing
    # internal consistency of the averaging convention
    assert np.mean([0.98, 0.97, 0.98]) == pytest.approx(0.9767, abs=1e-4)
    _ok("cross-norm summary averages reproduced")


def test_criterion_sign_structure():
    for dataset in FIXTURE_NAMES:
        table = load_fixture(dataset)
        for asr, cols in (
            ("ASR_INF", ("FSA_INF", "FSD_INF", "ROBY_INF")),
            ("ASR_2", ("FSA_2", "FSD_2", "ROBY_2")),
        ):
            y = table.column(asr)
            assert pearson(table.column(cols[0]), y) < 0.0, (dataset, cols[0])
            assert pearson(table.column(cols[1]), y) < 0.0, (dataset, cols[1])
            assert pearson(table.column(cols[2]), y) > 0.0, (dataset, cols[2])
    _ok("sign structure exact on all fixtures")


def test_criterion_oracle_equivalence():
    specs = [DistanceSpec(1.0), DistanceSpec(2.0), DistanceSpec.infinity()]
    checked = 0
    for seed in range(102):
        ds = random_dataset(seed, k_range=(2, 6), n_range=(1, 20), m_range=(1, 16))
        for spec in specs:
            report = evaluate(ds, spec)
            ref = ref_evaluate(
                ds.indices, ds.labels, ds.vectors, ds.num_classes, spec.p
            )
            assert report.fsa_per_class == pytest.approx(
                ref["fsa_per_class"], abs=1e-12
            ), (seed, spec.tag)
            assert report.fsa == pytest.approx(ref["fsa"], abs=1e-12)
            assert report.fsd_per_pair == pytest.approx(
                ref["fsd_per_pair"], abs=1e-12
            )
            assert report.fsd == pytest.approx(ref["fsd"], abs=1e-12)
            assert report.roby_per_pair == pytest.approx(
                ref["roby_per_pair"], abs=1e-12
            )
            assert report.roby == pytest.approx(ref["roby"], abs=1e-12)
        checked += 1
    assert checked >= 100
    _ok(f"oracle equivalence on {checked} datasets x p in {{1, 2, inf}} at 1e-12")


def _sample(seed: int) -> EmbeddingDataset:
    return generate_blobs(
        SynthSpec(
            num_classes=5,
            samples_per_class=40,
            dims=8,
            separation=2.5,
            spread=1.0,
            seed=seed,
        )
    )


def test_criterion_invariance_suite():
    spec = DistanceSpec(2.0)
    for seed in range(3):
        base = _sample(seed)
        rng = np.random.Generator(np.random.PCG64(1000 + seed))

        perm = rng.permutation(base.num_records)
        shuffled = EmbeddingDataset(
            base.dims, base.num_classes, base.indices[perm], base.labels[perm],
            base.vectors[perm], base.model_name,
        )
        assert evaluate(shuffled, spec) == evaluate(base, spec)

        shift = rng.uniform(-20.0, 20.0, size=base.dims)
        translated = EmbeddingDataset(
            base.dims, base.num_classes, base.indices, base.labels,
            base.vectors + shift, base.model_name,
        )
        a, b = evaluate(base, spec), evaluate(translated, spec)
        for field in ("fsa", "fsd", "roby"):
            assert getattr(b, field) == pytest.approx(getattr(a, field), abs=1e-9)
        assert b.fsa_per_class == pytest.approx(a.fsa_per_class, abs=1e-9)

        scale = float(rng.uniform(0.1, 10.0))
        scaled = EmbeddingDataset(
            base.dims, base.num_classes, base.indices, base.labels,
            base.vectors * scale, base.model_name,
        )
        c = evaluate(scaled, spec)
        for field in ("fsa", "fsd", "roby"):
            assert getattr(c, field) == pytest.approx(getattr(a, field), abs=1e-9)

        relabel = rng.permutation(base.num_classes)
        relabeled = EmbeddingDataset(
            base.dims, base.num_classes, base.indices, relabel[base.labels],
            base.vectors, base.model_name,
        )
        d = evaluate(relabeled, spec)
        for field in ("fsa", "fsd", "roby"):
            assert getattr(d, field) == pytest.approx(getattr(a, field), abs=1e-12)
    _ok("invariance suite (permutation/translation/scale/relabel)")


def test_criterion_separation_monotonicity():
    separations = [0.5, 1.0, 2.0, 4.0, 8.0]
    seeds = range(5)
    curves = []
    for seed in seeds:
        vals = []
        for sep in separations:
            ds = generate_blobs(
                SynthSpec(
                    num_classes=5,
                    samples_per_class=200,
                    dims=16,
                    separation=sep,
                    spread=1.0,
                    seed=seed,
                )
            )
            vals.append(evaluate(ds, DistanceSpec(2.0)).roby)
        curves.append(vals)
    avg = np.mean(curves, axis=0)
    assert all(avg[i + 1] <= avg[i] for i in range(len(avg) - 1)), avg
    _ok(f"separation monotonicity: averaged roby sweep {np.round(avg, 4).tolist()}")


def test_criterion_performance():
    def timed(per_class: int) -> float:
        ds = generate_blobs(
            SynthSpec(
                num_classes=10,
                samples_per_class=per_class,
                dims=128,
                separation=3.0,
                spread=1.0,
                seed=0,
            )
        )
        best = math.inf
        for _ in range(3):
            t0 = time.perf_counter()
            evaluate(ds, DistanceSpec(2.0))
            best = min(best, time.perf_counter() - t0)
        return best

    t_full = timed(1000)
    assert t_full < 1.0
    t_half = timed(500)
    assert t_full <= max(t_half, 1e-4) * 5.0
    _ok(
        f"performance: 10k x 128 evaluate in {t_full * 1e3:.1f} ms; "
        f"n->2n ratio {t_full / max(t_half, 1e-9):.2f} <= 5"
    )
