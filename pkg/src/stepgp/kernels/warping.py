"""Input warping: k~(x, x') = k(M(x), M(x')).

A sigmoid map M squashes one axis through g(c1 * x), so points on the same
side of the steep region land close together in warped space and points on
opposite sides land far apart.  A stationary kernel applied there behaves
like a step-aware kernel in the original space.  PeriodicPair wraps a
1-D input onto a circle, giving exact periodicity with any base kernel.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Sequence

import numpy as np
from scipy import special

from ..domain import Box
from ..errors import DimensionError, ParameterError
from .base import Kernel, _rename
from .params import HyperParam, positive


class WarpMap(ABC):
    """Deterministic map R^in_dim -> R^out_dim applied before a kernel."""

    kind: str = "?"

    @property
    @abstractmethod
    def params(self) -> tuple[HyperParam, ...]:
        ...

    @abstractmethod
    def with_values(self, values: Sequence[float]) -> "WarpMap":
        ...

    @abstractmethod
    def transform(self, X: np.ndarray) -> np.ndarray:
        ...

    def out_dim(self, in_dim: int) -> int:
        return in_dim

    @abstractmethod
    def output_box(self, box: Box) -> Box:
        """Bounding box of the warped image; used to scale lengthscale
        bounds for the kernel downstream of the warp."""

    @property
    def n_params(self) -> int:
        return len(self.params)


class _SigmoidWarp(WarpMap):
    """Replace x[axis] by g(c1 * x[axis]), all other axes untouched."""

    #: (lo, hi) range of g, used for output_box
    g_range = (-1.0, 1.0)

    def __init__(self, c1=1.0, axis=0):
        self.axis = int(axis)
        if self.axis < 0:
            raise DimensionError("axis must be >= 0")
        if isinstance(c1, HyperParam):
            self._c1 = HyperParam("c1", c1.value, c1.lower, c1.upper,
                                  c1.scale, c1.shift)
        else:
            self._c1 = positive("c1", float(c1))

    @property
    def params(self):
        return (self._c1,)

    @property
    def c1(self) -> float:
        return self._c1.value

    def with_values(self, values):
        (v,) = values
        out = object.__new__(type(self))
        out.axis = self.axis
        out._c1 = self._c1.with_value(v)
        return out

    @staticmethod
    def _g(t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def transform(self, X):
        if X.shape[1] <= self.axis:
            raise DimensionError(
                f"warp reads axis {self.axis} but points have "
                f"dimension {X.shape[1]}")
        out = np.array(X, dtype=float)
        out[:, self.axis] = self._g(self.c1 * X[:, self.axis])
        return out

    def output_box(self, box):
        lo = list(box.lower)
        hi = list(box.upper)
        lo[self.axis], hi[self.axis] = self.g_range
        return Box(tuple(lo), tuple(hi))


class ErfWarp(_SigmoidWarp):
    """g(t) = erf(t), range (-1, 1)."""

    kind = "Erf"
    g_range = (-1.0, 1.0)

    @staticmethod
    def _g(t):
        return special.erf(t)


class LogisticWarp(_SigmoidWarp):
    """g(t) = 1 / (1 + exp(t)), range (0, 1)."""

    kind = "Logistic"
    g_range = (0.0, 1.0)

    @staticmethod
    def _g(t):
        return special.expit(-t)


class TanhWarp(_SigmoidWarp):
    """g(t) = tanh(t), range (-1, 1)."""

    kind = "Tanh"
    g_range = (-1.0, 1.0)

    @staticmethod
    def _g(t):
        return np.tanh(t)


class ArctanWarp(_SigmoidWarp):
    """g(t) = arctan(t), range (-pi/2, pi/2)."""

    kind = "Arctan"
    g_range = (-np.pi / 2, np.pi / 2)

    @staticmethod
    def _g(t):
        return np.arctan(t)


class PeriodicPairWarp(WarpMap):
    """1-D input onto the circle of circumference ``period``:
    M(x) = (cos(2 pi x / T), sin(2 pi x / T)).  No hyperparameters."""

    kind = "PeriodicPair"

    def __init__(self, period: float):
        period = float(period)
        if not period > 0:
            raise ParameterError(f"period must be > 0, got {period}")
        self.period = period

    @property
    def params(self):
        return ()

    def with_values(self, values):
        if list(values):
            raise ParameterError("PeriodicPair has no parameters")
        return self

    def out_dim(self, in_dim):
        if in_dim != 1:
            raise DimensionError("PeriodicPair warps 1-D inputs only")
        return 2

    def transform(self, X):
        if X.shape[1] != 1:
            raise DimensionError("PeriodicPair warps 1-D inputs only")
        ang = (2.0 * np.pi / self.period) * X[:, 0]
        return np.column_stack([np.cos(ang), np.sin(ang)])

    def output_box(self, box):
        return Box((-1.0, -1.0), (1.0, 1.0))


WARP_KINDS = {
    c.kind: c
    for c in (ErfWarp, LogisticWarp, TanhWarp, ArctanWarp, PeriodicPairWarp)
}


class WarpedKernel(Kernel):
    """k(M(x), M(x')) for a warp map M and a base kernel k."""

    kind = "Warped"

    def __init__(self, warp: WarpMap, child: Kernel, dim: int | None = None):
        if not isinstance(warp, WarpMap):
            raise ParameterError("warp must be a WarpMap")
        if dim is None:
            # sigmoid warps preserve dimension; PeriodicPair needs 1
            dim = 1 if isinstance(warp, PeriodicPairWarp) else child.dim
        super().__init__(dim)
        if warp.out_dim(self.dim) != child.dim:
            raise DimensionError(
                f"warp maps {self.dim}-D points to {warp.out_dim(self.dim)}-D "
                f"but the base kernel expects {child.dim}-D")
        self.warp = warp
        self.child = child
        self._assert_unique_names()

    @property
    def params(self):
        return tuple([_rename(p, "warp.") for p in self.warp.params]
                     + list(self.child.params))

    def with_values(self, values: Sequence[float]):
        values = list(values)
        nw = self.warp.n_params
        return WarpedKernel(self.warp.with_values(values[:nw]),
                            self.child.with_values(values[nw:]),
                            dim=self.dim)

    def _cross(self, X1, X2):
        return self.child._cross(self.warp.transform(X1),
                                 self.warp.transform(X2))
