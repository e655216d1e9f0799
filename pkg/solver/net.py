"""
Fixed-topology feed-forward network evaluated from a flat parameter vector.

The swarm searches the flat vector directly, so the canonical layout is part
of the public contract: layer by layer, each weight matrix of shape
(width_out, width_in) in row-major order, followed by that layer's biases.
"""
import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

import numpy as np
from scipy.special import expit

from solver.numerics import Grid, SampledFunction

logger = logging.getLogger(__name__)

ACTIVATIONS = {
    "tanh": np.tanh,
    "sigmoid": expit,
}

DEFAULT_LAYERS = (1, 16, 16, 1)

Layer = Tuple[np.ndarray, np.ndarray]


class ArchitectureError(ValueError):
    """Raised for invalid architectures or parameter vectors"""
    pass


@dataclass(frozen=True)
class MlpArchitecture:
    """Scalar-in, scalar-out network with activated hidden layers and a linear output"""
    layer_widths: Tuple[int, ...] = DEFAULT_LAYERS
    activation: str = "tanh"

    def __post_init__(self):
        widths = tuple(int(w) for w in self.layer_widths)
        object.__setattr__(self, "layer_widths", widths)
        if len(widths) < 3:
            raise ArchitectureError("At least one hidden layer is required")
        if widths[0] != 1 or widths[-1] != 1:
            raise ArchitectureError(f"Input and output widths must be 1, got {widths}")
        if any(w < 1 for w in widths):
            raise ArchitectureError(f"Layer widths must be positive, got {widths}")
        if self.activation not in ACTIVATIONS:
            raise ArchitectureError(
                f"Unknown activation '{self.activation}', expected one of {sorted(ACTIVATIONS)}"
            )


def param_count(arch: Union[MlpArchitecture, Sequence[int]]) -> int:
    """Number of weights plus biases, from an architecture or bare layer widths."""
    widths = arch.layer_widths if isinstance(arch, MlpArchitecture) else tuple(arch)
    return sum((w_in + 1) * w_out for w_in, w_out in zip(widths[:-1], widths[1:]))


def unflatten(arch: MlpArchitecture, params: np.ndarray) -> List[Layer]:
    """Split a flat vector into (weights, biases) per layer."""
    params = np.asarray(params, dtype=float)
    expected = param_count(arch)
    if params.shape != (expected,):
        raise ArchitectureError(
            f"Parameter vector has shape {params.shape}, architecture needs ({expected},)"
        )

    layers = []
    offset = 0
    widths = arch.layer_widths
    for w_in, w_out in zip(widths[:-1], widths[1:]):
        weights = params[offset:offset + w_in * w_out].reshape(w_out, w_in)
        offset += w_in * w_out
        biases = params[offset:offset + w_out]
        offset += w_out
        layers.append((weights, biases))
    return layers


def flatten(layers: Sequence[Layer]) -> np.ndarray:
    """Inverse of unflatten."""
    parts = []
    for weights, biases in layers:
        parts.append(np.asarray(weights, dtype=float).ravel())
        parts.append(np.asarray(biases, dtype=float).ravel())
    return np.concatenate(parts)


def init_params(arch: MlpArchitecture, rng: np.random.Generator,
                lo: float = -1.0, hi: float = 1.0) -> np.ndarray:
    """Uniform random parameter vector."""
    return rng.uniform(lo, hi, size=param_count(arch))


def forward_batch(arch: MlpArchitecture, params: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Evaluate the network at every entry of xs."""
    act = ACTIVATIONS[arch.activation]
    layers = unflatten(arch, params)

    h = np.asarray(xs, dtype=float).reshape(-1, 1)
    for weights, biases in layers[:-1]:
        h = act(h @ weights.T + biases)
    weights, biases = layers[-1]
    return (h @ weights.T + biases)[:, 0]


def forward(arch: MlpArchitecture, params: np.ndarray, x: float) -> float:
    return float(forward_batch(arch, params, np.array([x]))[0])


def forward_grid(arch: MlpArchitecture, params: np.ndarray, grid: Grid) -> SampledFunction:
    """Raw network output u sampled on the grid."""
    return SampledFunction(grid, forward_batch(arch, params, grid.nodes))
