"""Gauss-Legendre rules and the doubling refinement used by every integral."""

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np
from scipy.special import roots_legendre

from wave_cauchy.utils.errors import DomainError

# Rounding floor multiplier: differences below NOISE_FACTOR * eps * sum|w f|
# are treated as converged.
NOISE_FACTOR = 1000.0
EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureSpec:
    """Node counts and refinement policy for the kernel and aperture integrals.

    Args:
        nodes_t (int): Gauss-Legendre nodes for the outer (time) integral.
        nodes_x (int): Gauss-Legendre nodes for the inner (abscissa) integral.
        nodes_s (int): Gauss-Legendre nodes for the kernel s-integral.
        refinement (int): Maximum number of node doublings.
        rel_tol (float): Relative agreement required between two levels.
        noise_tol (float): Largest admissible rounding floor of an aperture
            quadrature, relative to ``1 + sum |w v|`` (the data scale).
    """

    nodes_t: int = 64
    nodes_x: int = 64
    nodes_s: int = 64
    refinement: int = 3
    rel_tol: float = 1e-10
    noise_tol: float = 1e-4

    def __post_init__(self):
        for name in ("nodes_t", "nodes_x", "nodes_s"):
            if int(getattr(self, name)) < 4:
                raise DomainError(f"QuadratureSpec.{name} must be >= 4")
        if self.refinement < 0:
            raise DomainError("QuadratureSpec.refinement must be >= 0")
        if not self.rel_tol > 0:
            raise DomainError("QuadratureSpec.rel_tol must be positive")
        if not self.noise_tol > 0:
            raise DomainError("QuadratureSpec.noise_tol must be positive")

    def doubled(self, levels: int = 1) -> "QuadratureSpec":
        """Return a copy with every node count multiplied by 2**levels."""
        factor = 2**levels
        return QuadratureSpec(
            nodes_t=self.nodes_t * factor,
            nodes_x=self.nodes_x * factor,
            nodes_s=self.nodes_s * factor,
            refinement=self.refinement,
            rel_tol=self.rel_tol,
            noise_tol=self.noise_tol,
        )

    def to_dict(self) -> dict:
        """Return the rule settings as a plain dictionary for provenance."""
        return {
            "nodes_t": self.nodes_t,
            "nodes_x": self.nodes_x,
            "nodes_s": self.nodes_s,
            "refinement": self.refinement,
            "rel_tol": self.rel_tol,
            "noise_tol": self.noise_tol,
        }


class RefinedValue(NamedTuple):
    """Outcome of a doubling refinement."""

    value: np.ndarray
    level: int
    converged: bool
    magnitude: np.ndarray


@lru_cache(maxsize=64)
def _reference_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = roots_legendre(n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_legendre(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Return Gauss-Legendre nodes and weights mapped to [a, b].

    Args:
        n (int): Number of nodes.
        a (float): Lower limit.
        b (float): Upper limit.

    Returns:
        tuple[np.ndarray, np.ndarray]: Nodes and weights.
    """
    nodes, weights = _reference_rule(int(n))
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    return mid + half * nodes, half * weights


def composite_gauss_legendre(
    a: float, b: float, n_panels: int, order: int = 8
) -> tuple[np.ndarray, np.ndarray]:
    """Return nodes and weights of a uniform composite Gauss rule on [a, b].

    Args:
        a (float): Lower limit.
        b (float): Upper limit.
        n_panels (int): Number of equal panels.
        order (int): Gauss-Legendre nodes per panel.

    Returns:
        tuple[np.ndarray, np.ndarray]: Nodes and weights.
    """
    n_panels = max(int(n_panels), 1)
    ref_nodes, ref_weights = _reference_rule(order)
    edges = np.linspace(a, b, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * ref_nodes[None, :]).ravel()
    weights = (half[:, None] * ref_weights[None, :]).ravel()
    return nodes, weights


def noise_floor(magnitude: np.ndarray | float) -> np.ndarray:
    """Rounding floor for a quadrature whose sum of |w f| is ``magnitude``."""
    return NOISE_FACTOR * EPS * np.asarray(magnitude, dtype=float)


def refine(
    evaluate: Callable[[int], tuple[np.ndarray, np.ndarray]],
    max_levels: int,
    rel_tol: float,
) -> RefinedValue:
    """Double the resolution until two successive levels agree.

    ``evaluate(level)`` must return the estimate and the matching sum of
    ``|w f|`` for the node counts of that level. Agreement means
    ``|new - old| <= rel_tol * |new| + noise_floor(magnitude)`` for every
    element.

    Args:
        evaluate (Callable): Function of the refinement level.
        max_levels (int): Maximum number of doublings after level 0.
        rel_tol (float): Relative tolerance.

    Returns:
        RefinedValue: Last estimate, level used, convergence flag and the
        sum of |w f| of the last level.
    """
    value, magnitude = evaluate(0)
    for level in range(1, max_levels + 1):
        new_value, magnitude = evaluate(level)
        floor = noise_floor(magnitude)
        gap = np.abs(new_value - value)
        value = new_value
        if np.all(gap <= rel_tol * np.abs(new_value) + floor):
            return RefinedValue(value, level, True, magnitude)
    return RefinedValue(value, max_levels, max_levels == 0, magnitude)
