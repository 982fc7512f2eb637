"""Shipped per-model metric tables for three image-classification benchmarks.

Each CSV holds ten models evaluated on one dataset: accuracy, attack
success rates under the l_inf and l_2 threat models, and the corresponding
decision-boundary metric columns.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..analysis import ModelMetricsTable

FIXTURE_FILES = {
    "CIFAR-10": "cifar10.csv",
    "MNIST": "mnist.csv",
    "Fashion-MNIST": "fashion_mnist.csv",
}

FIXTURE_NAMES = tuple(FIXTURE_FILES)


def fixture_path(name: str) -> Path:
    """Filesystem path of a shipped fixture ('CIFAR-10', 'MNIST', 'Fashion-MNIST')."""
    try:
        filename = FIXTURE_FILES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choices: {FIXTURE_NAMES}") from None
    return Path(str(resources.files(__package__).joinpath(filename)))


def load_fixture(name: str) -> ModelMetricsTable:
    from ..io import load_metrics_table

    return load_metrics_table(fixture_path(name), dataset_name=name)


def load_all_fixtures() -> list[ModelMetricsTable]:
    return [load_fixture(name) for name in FIXTURE_NAMES]
