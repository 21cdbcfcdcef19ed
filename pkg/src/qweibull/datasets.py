"""Bundled reference data."""

from importlib import resources

import numpy as np


def load_glass_fibre() -> np.ndarray:
    """Strengths of 63 glass fibres of length 1.5 cm (National Physical Laboratory)."""
    text = resources.files("qweibull.data").joinpath("glass_fibre.txt").read_text()
    return np.array([float(line) for line in text.split()])


def glass_fibre_path() -> str:
    """Filesystem path of the bundled data file (for CLI examples and tests)."""
    return str(resources.files("qweibull.data").joinpath("glass_fibre.txt"))
