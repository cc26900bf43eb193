"""Gibbs covariance with a shared input-dependent lengthscale.

    k(x, x') = sigma2 * ( 2 l(x) l(x') / (l(x)^2 + l(x')^2) )^{d/2}
               * exp( - sum_i (x_i - x_i')^2 / (l(x)^2 + l(x')^2) )

l is a positive scalar function shared by all axes.  A sigmoid-shaped l
that drops near a point makes the process wiggle there and stay smooth
elsewhere, which mimics a step without actually breaking continuity.
With constant l the kernel reduces exactly to the squared-exponential.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Sequence

import numpy as np
from scipy import special

from ..errors import DimensionError, ParameterError
from .base import Kernel
from .params import HyperParam, offset_above, positive


def _own(name, v, default_ctor):
    if isinstance(v, HyperParam):
        return HyperParam(name, v.value, v.lower, v.upper, v.scale, v.shift)
    return default_ctor(name, float(v))


class LengthScaleFn(ABC):
    """Positive scalar field l(x) used by :class:`GibbsKernel`."""

    kind: str = "?"
    #: lower limit every l value must exceed (sigmoid offset constraint)
    c2_limit: float = 0.0

    @property
    @abstractmethod
    def params(self) -> tuple[HyperParam, ...]:
        ...

    @abstractmethod
    def with_values(self, values: Sequence[float]) -> "LengthScaleFn":
        ...

    @abstractmethod
    def values(self, X: np.ndarray) -> np.ndarray:
        """l at each row of X, shape (n,)."""

    @property
    def n_params(self) -> int:
        return len(self.params)


class ConstantLS(LengthScaleFn):
    """l(x) = c2 with c2 > 0."""

    kind = "Constant"

    def __init__(self, c2=1.0):
        self._params = (_own("c2", c2, positive),)

    @property
    def params(self):
        return self._params

    def with_values(self, values):
        (v,) = values
        out = object.__new__(ConstantLS)
        out._params = (self._params[0].with_value(v),)
        return out

    def values(self, X):
        return np.full(X.shape[0], self._params[0].value)


class _AxisLS(LengthScaleFn):
    """Lengthscale functions of a single coordinate x[axis]."""

    def __init__(self, c1=1.0, c2=None, axis=0):
        self.axis = int(axis)
        if self.axis < 0:
            raise DimensionError("axis must be >= 0")
        if c2 is None:
            c2 = self.c2_limit + 1.0
        self._params = (
            _own("c1", c1, self._default_c1),
            _own("c2", c2, lambda n, v: offset_above(n, v, self.c2_limit)),
        )

    @staticmethod
    def _default_c1(name, v):
        return HyperParam(name, v, -1e6, 1e6)

    @property
    def params(self):
        return self._params

    @property
    def c1(self) -> float:
        return self._params[0].value

    @property
    def c2(self) -> float:
        return self._params[1].value

    def with_values(self, values):
        v1, v2 = values
        out = object.__new__(type(self))
        out.axis = self.axis
        out._params = (self._params[0].with_value(v1),
                       self._params[1].with_value(v2))
        return out

    def _coord(self, X):
        if X.shape[1] <= self.axis:
            raise DimensionError(
                f"lengthscale reads axis {self.axis} but points have "
                f"dimension {X.shape[1]}")
        return X[:, self.axis]


class QuadraticLS(_AxisLS):
    """l(x) = c1 * x[axis]^2 + c2 with c1 >= 0, c2 > 0.

    Grows away from the origin: short lengthscales near 0, long far out.
    """

    kind = "Quadratic"
    c2_limit = 0.0

    @staticmethod
    def _default_c1(name, v):
        if v < 0:
            raise ParameterError(f"quadratic coefficient must be >= 0, got {v}")
        return HyperParam(name, v, 0.0, 1e6)

    def values(self, X):
        t = self._coord(X)
        return self.c1 * t * t + self.c2


class ErfLS(_AxisLS):
    """l(x) = erf(c1 * x[axis]) + c2 with c2 > 1."""

    kind = "Erf"
    c2_limit = 1.0

    def values(self, X):
        return special.erf(self.c1 * self._coord(X)) + self.c2


class LogisticLS(_AxisLS):
    """l(x) = 1 / (1 + exp(c1 * x[axis])) + c2 with c2 > 0."""

    kind = "Logistic"
    c2_limit = 0.0

    def values(self, X):
        return special.expit(-self.c1 * self._coord(X)) + self.c2


class TanhLS(_AxisLS):
    """l(x) = tanh(c1 * x[axis]) + c2 with c2 > 1."""

    kind = "Tanh"
    c2_limit = 1.0

    def values(self, X):
        return np.tanh(self.c1 * self._coord(X)) + self.c2


class ArctanLS(_AxisLS):
    """l(x) = arctan(c1 * x[axis]) + c2 with c2 > pi/2."""

    kind = "Arctan"
    c2_limit = np.pi / 2

    def values(self, X):
        return np.arctan(self.c1 * self._coord(X)) + self.c2


LS_KINDS = {
    c.kind: c
    for c in (ConstantLS, QuadraticLS, ErfLS, LogisticLS, TanhLS, ArctanLS)
}


class GibbsKernel(Kernel):
    """Nonstationary squared-exponential with lengthscale field ``lsfn``."""

    kind = "Gibbs"

    def __init__(self, dim: int, lsfn: LengthScaleFn, sigma2=1.0):
        super().__init__(dim)
        if not isinstance(lsfn, LengthScaleFn):
            raise ParameterError("lsfn must be a LengthScaleFn")
        self.lsfn = lsfn
        self._sigma2 = _own("variance", sigma2, positive)
        self._assert_unique_names()

    @property
    def params(self):
        return (self._sigma2,) + tuple(self.lsfn.params)

    @property
    def sigma2(self) -> float:
        return self._sigma2.value

    def with_values(self, values: Sequence[float]):
        values = list(values)
        if len(values) != 1 + self.lsfn.n_params:
            raise ParameterError(
                f"expected {1 + self.lsfn.n_params} values, got {len(values)}")
        return GibbsKernel(self.dim, self.lsfn.with_values(values[1:]),
                           self._sigma2.with_value(values[0]))

    def _ls(self, X):
        l = np.asarray(self.lsfn.values(X), dtype=float)
        if l.shape != (X.shape[0],):
            raise DimensionError(
                f"lengthscale fn returned shape {l.shape} for {X.shape[0]} points")
        if np.any(l <= 0):
            raise ParameterError("lengthscale must be positive at every point")
        return l

    def _cross(self, X1, X2):
        l1 = self._ls(X1)
        l2 = self._ls(X2)
        L2 = l1[:, None] ** 2 + l2[None, :] ** 2
        pref = (2.0 * np.outer(l1, l2) / L2) ** (0.5 * self.dim)
        sq = np.sum((X1[:, None, :] - X2[None, :, :]) ** 2, axis=-1)
        return self.sigma2 * pref * np.exp(-sq / L2)
