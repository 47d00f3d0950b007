"""Fast Walsh-Hadamard transform and XOR convolution."""

import numpy as np


def fwht(values: np.ndarray, axis: int = -1) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform along ``axis`` (length a power of two).

    out[s] = sum_c (-1)^{popcount(s & c)} values[c]. Applying it twice
    multiplies by the length.
    """
    a = np.array(np.moveaxis(np.asarray(values), axis, -1), order="C", copy=True)
    size = a.shape[-1]
    if size & (size - 1):
        raise ValueError(f"length {size} is not a power of two")
    lead = a.shape[:-1]
    h = 1
    while h < size:
        v = a.reshape(*lead, size // (2 * h), 2, h)
        x = v[..., 0, :].copy()
        y = v[..., 1, :]
        v[..., 0, :] += y
        v[..., 1, :] = x - y
        h *= 2
    return np.moveaxis(a, -1, axis)


def xor_convolve(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """(f * g)(x) = sum_a f(a) g(x ^ a), in O(N log N)."""
    size = len(f)
    return fwht(fwht(f) * fwht(g)) / size


def xor_self_convolve(f: np.ndarray) -> np.ndarray:
    F = fwht(f)
    return fwht(F * F) / len(f)
