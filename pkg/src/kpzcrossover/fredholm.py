"""Nystrom discretization of Fredholm determinants det(I - K) and of
resolvent traces tr((I - K)^{-1} P) for rank-one P.

A kernel is a callable K(X, Y) that broadcasts over arrays of points.
"""
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .linalg import lu_determinant, solve
from .quadrature import QuadratureRule


@dataclass(frozen=True)
class RankOneKernel:
    left: Callable
    right: Callable

    def __call__(self, x, y):
        return self.left(x) * self.right(y)


def kernel_matrix(kernel, nodes, nodes2=None):
    z = np.asarray(nodes)
    z2 = z if nodes2 is None else np.asarray(nodes2)
    K = np.asarray(kernel(z[:, None], z2[None, :]))
    K = np.broadcast_to(K, (len(z), len(z2)))
    bad = ~np.isfinite(K)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise ValueError(f"non-finite kernel entry at nodes ({z[i]}, {z2[j]})")
    return K


@dataclass
class NystromSystem:
    rule: QuadratureRule
    kernel_matrix: np.ndarray

    @classmethod
    def build(cls, kernel, rule):
        return cls(rule, kernel_matrix(kernel, rule.nodes))

    @property
    def symmetric_weights(self):
        return self.rule.is_real and np.all(self.rule.weights > 0)

    def operator(self):
        """I - K W, or I - W^{1/2} K W^{1/2} for positive real weights."""
        w = self.rule.weights
        n = len(w)
        if self.symmetric_weights:
            sw = np.sqrt(w)
            return np.eye(n) - sw[:, None] * self.kernel_matrix * sw[None, :]
        return np.eye(n) - self.kernel_matrix * w[None, :]

    def det(self) -> complex:
        return lu_determinant(self.operator())

    def resolvent_trace(self, u_vals, v_vals) -> complex:
        """tr((I - K)^{-1} u (x) v) = sum_i w_i [(I - K)^{-1} u](z_i) v(z_i)."""
        w = self.rule.weights
        if self.symmetric_weights:
            sw = np.sqrt(w)
            phi = solve(self.operator(), sw * u_vals)
            return complex(np.sum(phi * sw * v_vals))
        phi = solve(self.operator(), u_vals)
        return complex(np.sum(w * phi * v_vals))


def fredholm_det(kernel, rule: QuadratureRule) -> complex:
    return NystromSystem.build(kernel, rule).det()


def resolvent_trace(kernel, P: RankOneKernel, rule: QuadratureRule) -> complex:
    sys_ = NystromSystem.build(kernel, rule)
    return sys_.resolvent_trace(P.left(rule.nodes), P.right(rule.nodes))
