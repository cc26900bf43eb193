"""Stationary covariance kernels.

Each kernel is a tensor product of one-dimensional correlation shapes
rho(|x_i - x_i'| / l_i) over the input axes, scaled by a shared variance:

    k(x, x') = sigma2 * prod_i rho_i(|x_i - x_i'| / l_i)

Hyperparameters are ``variance`` and one lengthscale ``l1 .. ld`` per axis.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .base import Kernel
from .params import HyperParam, positive


def _normalize(dim: int, sigma2, lengthscales) -> tuple[HyperParam, ...]:
    """Accept floats or ready-made HyperParams and return the canonical
    (sigma2, l1, .., ld) tuple."""
    if isinstance(sigma2, HyperParam):
        s2 = HyperParam("variance", sigma2.value, sigma2.lower, sigma2.upper,
                        sigma2.scale, sigma2.shift)
    else:
        s2 = positive("variance", float(sigma2))
    if isinstance(lengthscales, (int, float)):
        lengthscales = [float(lengthscales)] * dim
    ls = []
    for i, l in enumerate(lengthscales, start=1):
        if isinstance(l, HyperParam):
            ls.append(HyperParam(f"l{i}", l.value, l.lower, l.upper,
                                 l.scale, l.shift))
        else:
            ls.append(positive(f"l{i}", float(l)))
    if len(ls) != dim:
        from ..errors import DimensionError
        raise DimensionError(
            f"expected {dim} lengthscales, got {len(ls)}")
    return (s2, *ls)


class _TensorStationary(Kernel):
    """Shared machinery: scaled absolute differences per axis, a subclass
    correlation shape, and the product over axes."""

    def __init__(self, dim: int, sigma2=1.0, lengthscales=1.0):
        super().__init__(dim)
        self._params = _normalize(self.dim, sigma2, lengthscales)
        self._assert_unique_names()

    @property
    def params(self):
        return self._params

    @property
    def sigma2(self) -> float:
        return self._params[0].value

    @property
    def lengthscales(self) -> np.ndarray:
        return np.array([p.value for p in self._params[1:]])

    def with_values(self, values: Sequence[float]):
        values = list(values)
        if len(values) != len(self._params):
            from ..errors import ParameterError
            raise ParameterError(
                f"expected {len(self._params)} values, got {len(values)}")
        k = object.__new__(type(self))
        Kernel.__init__(k, self.dim)
        k._params = tuple(p.with_value(v)
                          for p, v in zip(self._params, values))
        return k

    @staticmethod
    def _rho(T: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _cross(self, X1, X2):
        T = np.abs(X1[:, None, :] - X2[None, :, :]) / self.lengthscales
        return self.sigma2 * np.prod(self._rho(T), axis=-1)


class Exponential(_TensorStationary):
    """k = sigma2 * prod_i exp(-|dx_i| / l_i)"""

    kind = "Exponential"

    @staticmethod
    def _rho(T):
        return np.exp(-T)


class Matern32(_TensorStationary):
    """k = sigma2 * prod_i (1 + sqrt(3)|dx_i|/l_i) exp(-sqrt(3)|dx_i|/l_i)"""

    kind = "Matern32"

    @staticmethod
    def _rho(T):
        S = np.sqrt(3.0) * T
        return (1.0 + S) * np.exp(-S)


class Matern52(_TensorStationary):
    """k = sigma2 * prod_i (1 + sqrt(5)|dx_i|/l_i + 5 dx_i^2 / (3 l_i^2))
    * exp(-sqrt(5)|dx_i|/l_i)"""

    kind = "Matern52"

    @staticmethod
    def _rho(T):
        S = np.sqrt(5.0) * T
        return (1.0 + S + (5.0 / 3.0) * T * T) * np.exp(-S)


class SquaredExponential(_TensorStationary):
    """k = sigma2 * prod_i exp(-dx_i^2 / (2 l_i^2))"""

    kind = "SquaredExp"

    @staticmethod
    def _rho(T):
        return np.exp(-0.5 * T * T)
