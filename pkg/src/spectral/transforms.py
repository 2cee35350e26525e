"""
Discrete Fourier transforms on grid-shaped arrays

scipy.fft with the configured worker count; the workspace is per call.
"""

import numpy as np
import scipy.fft

from ..config import settings


def forward(values: np.ndarray) -> np.ndarray:
    return scipy.fft.fftn(values, workers=settings.fft_workers)


def inverse(spectrum: np.ndarray) -> np.ndarray:
    return scipy.fft.ifftn(spectrum, workers=settings.fft_workers).real
