"""Covariance kernel base class, Gram assembly and the composition algebra.

Every kernel is immutable after construction: evaluation is pure, so a
single kernel object can be shared freely across threads.  Parameter
updates go through :meth:`Kernel.with_values`, which returns a new object.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Callable, Sequence

import numpy as np

from ..errors import DimensionError, ParameterError
from .params import HyperParam


class Kernel(ABC):
    """A symmetric positive-semidefinite covariance function on R^d."""

    kind: str = "?"

    def __init__(self, dim: int):
        dim = int(dim)
        if dim < 1:
            raise DimensionError("kernel dimension must be >= 1")
        self._dim = dim

    @property
    def dim(self) -> int:
        return self._dim

    @property
    @abstractmethod
    def params(self) -> tuple[HyperParam, ...]:
        """Flattened hyperparameters with names unique across the kernel."""

    @abstractmethod
    def with_values(self, values: Sequence[float]) -> "Kernel":
        """New kernel with parameter values replaced, in ``params`` order."""

    @abstractmethod
    def _cross(self, X1: np.ndarray, X2: np.ndarray) -> np.ndarray:
        """Covariance matrix between two validated point sets."""

    # -- evaluation ---------------------------------------------------------

    def _check(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            # for 1-D kernels a flat array is a column of points,
            # otherwise it is a single point
            X = X[:, None] if self._dim == 1 else X[None, :]
        if X.ndim != 2 or X.shape[1] != self._dim:
            raise DimensionError(
                f"expected points of dimension {self._dim}, got shape {X.shape}"
            )
        return X

    def cross(self, X1, X2) -> np.ndarray:
        """The (n1, n2) matrix k(x1_i, x2_j)."""
        return self._cross(self._check(X1), self._check(X2))

    def __call__(self, x, xp) -> float:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        xp = np.atleast_1d(np.asarray(xp, dtype=float))
        if x.shape != (self._dim,) or xp.shape != (self._dim,):
            raise DimensionError(
                f"expected points of dimension {self._dim}, "
                f"got shapes {x.shape} and {xp.shape}"
            )
        return float(self._cross(x[None, :], xp[None, :])[0, 0])

    def gram(self, X) -> np.ndarray:
        """Symmetric Gram matrix; the upper triangle is mirrored so
        K[i, j] == K[j, i] holds exactly."""
        X = self._check(X)
        K = self._cross(X, X)
        U = np.triu(K)
        return U + np.triu(K, 1).T

    # -- bookkeeping --------------------------------------------------------

    @property
    def n_params(self) -> int:
        return len(self.params)

    def param_values(self) -> np.ndarray:
        return np.array([p.value for p in self.params])

    def _assert_unique_names(self):
        names = [p.name for p in self.params]
        if len(set(names)) != len(names):
            raise ParameterError(f"duplicate parameter names in kernel: {names}")

    # -- composition sugar (closure of PD kernels under + and *) ------------

    def __add__(self, other):
        if isinstance(other, Kernel):
            return SumKernel(self, other)
        return ShiftedKernel(self, float(other))

    def __radd__(self, other):
        return ShiftedKernel(self, float(other))

    def __mul__(self, other):
        if isinstance(other, Kernel):
            return ProductKernel(self, other)
        return ScaledKernel(float(other), self)

    def __rmul__(self, other):
        return ScaledKernel(float(other), self)


def _rename(p: HyperParam, prefix: str) -> HyperParam:
    return HyperParam(prefix + p.name, p.value, p.lower, p.upper, p.scale, p.shift)


class _Binary(Kernel):
    """Shared plumbing for two-child compositions."""

    def __init__(self, k1: Kernel, k2: Kernel):
        if k1.dim != k2.dim:
            raise DimensionError(
                f"cannot combine kernels of dimension {k1.dim} and {k2.dim}"
            )
        super().__init__(k1.dim)
        self.k1 = k1
        self.k2 = k2
        self._assert_unique_names()

    @property
    def params(self):
        return tuple(
            [_rename(p, "k1.") for p in self.k1.params]
            + [_rename(p, "k2.") for p in self.k2.params]
        )

    def with_values(self, values):
        values = list(values)
        n1 = self.k1.n_params
        return type(self)(self.k1.with_values(values[:n1]),
                          self.k2.with_values(values[n1:]))


class SumKernel(_Binary):
    """k1 + k2."""

    kind = "Sum"

    def _cross(self, X1, X2):
        return self.k1._cross(X1, X2) + self.k2._cross(X1, X2)


class ProductKernel(_Binary):
    """k1 * k2."""

    kind = "Product"

    def _cross(self, X1, X2):
        return self.k1._cross(X1, X2) * self.k2._cross(X1, X2)


class _Unary(Kernel):
    def __init__(self, child: Kernel):
        super().__init__(child.dim)
        self.child = child

    @property
    def params(self):
        return self.child.params

    def _cross(self, X1, X2):
        raise NotImplementedError


class ScaledKernel(_Unary):
    """c * k for a fixed constant c > 0."""

    kind = "Scaled"

    def __init__(self, c: float, child: Kernel):
        if not c > 0:
            raise ParameterError(f"scale constant must be > 0, got {c}")
        super().__init__(child)
        self.c = float(c)

    def with_values(self, values):
        return ScaledKernel(self.c, self.child.with_values(values))

    def _cross(self, X1, X2):
        return self.c * self.child._cross(X1, X2)


class ShiftedKernel(_Unary):
    """k + c for a fixed constant c > 0."""

    kind = "ShiftedConst"

    def __init__(self, child: Kernel, c: float):
        if not c > 0:
            raise ParameterError(f"shift constant must be > 0, got {c}")
        super().__init__(child)
        self.c = float(c)

    def with_values(self, values):
        return ShiftedKernel(self.child.with_values(values), self.c)

    def _cross(self, X1, X2):
        return self.child._cross(X1, X2) + self.c


class OuterFnKernel(_Unary):
    """g(x) * k(x, x') * g(x') for a deterministic user function g.

    g is called once per point on every evaluation; values are never cached.
    """

    kind = "OuterFn"

    def __init__(self, child: Kernel, g: Callable[[np.ndarray], float]):
        super().__init__(child)
        if not callable(g):
            raise ParameterError("OuterFn requires a callable g")
        self.g = g

    def with_values(self, values):
        return OuterFnKernel(self.child.with_values(values), self.g)

    def _g_vals(self, X):
        return np.array([float(self.g(x)) for x in X])

    def _cross(self, X1, X2):
        K = self.child._cross(X1, X2)
        return self._g_vals(X1)[:, None] * K * self._g_vals(X2)[None, :]


def compose(kind: str, *args) -> Kernel:
    """Build a composite kernel: Sum(k1, k2), Product(k1, k2), Scaled(c, k),
    ShiftedConst(k, c) or OuterFn(k, g)."""
    if kind == "Sum":
        return SumKernel(*args)
    if kind == "Product":
        return ProductKernel(*args)
    if kind == "Scaled":
        c, k = args
        return ScaledKernel(c, k)
    if kind == "ShiftedConst":
        k, c = args
        return ShiftedKernel(k, c)
    if kind == "OuterFn":
        k, g = args
        return OuterFnKernel(k, g)
    raise ParameterError(f"unknown composition kind: {kind!r}")


def gram_matrix(kernel: Kernel, X) -> np.ndarray:
    """Module-level alias for :meth:`Kernel.gram`."""
    return kernel.gram(X)
