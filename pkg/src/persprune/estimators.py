"""Transformer-style wrappers around erosion, pruning and decomposition.

These follow the fit / transform / get_params convention so the operations
can be configured once and applied to many modules.  All the work happens
in the functional cores; the wrappers only validate input and keep the
fitted state.
"""

from __future__ import annotations

import inspect

from .decomp import Decomposition, barcode, decompose
from .erode import erosion
from .permod import PersistenceModule
from .prune import PruningPair, pruning, pruning_pair

__all__ = ["check_module", "Eroder", "Pruner", "Decomposer"]


def check_module(M) -> PersistenceModule:
    if not isinstance(M, PersistenceModule):
        raise TypeError(f"expected a PersistenceModule, got {type(M).__name__}")
    return M


def _check_eps(eps) -> int:
    if isinstance(eps, bool) or not isinstance(eps, int) or eps < 0:
        raise ValueError(f"epsilon must be a nonnegative integer, got {eps!r}")
    return eps


class _Params:
    @classmethod
    def _param_names(cls):
        sig = inspect.signature(cls.__init__)
        return [n for n in sig.parameters if n != "self"]

    def get_params(self, deep: bool = True) -> dict:
        return {n: getattr(self, n) for n in self._param_names()}

    def set_params(self, **params):
        valid = set(self._param_names())
        for k, v in params.items():
            if k not in valid:
                raise ValueError(f"invalid parameter {k!r} for {type(self).__name__}")
            setattr(self, k, v)
        return self

    def fit_transform(self, M, y=None):
        return self.fit(M, y).transform(M)

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({args})"

    def _check_fitted(self, attr):
        if not hasattr(self, attr):
            raise RuntimeError(f"{type(self).__name__} is not fitted yet; call fit first")


class Eroder(_Params):
    """Er_eps as a transformer; stateless apart from input checks."""

    def __init__(self, epsilon: int = 1):
        self.epsilon = epsilon

    def fit(self, M, y=None):
        check_module(M)
        self.epsilon_ = _check_eps(self.epsilon)
        return self

    def transform(self, M) -> PersistenceModule:
        self._check_fitted("epsilon_")
        return erosion(check_module(M), self.epsilon_)


class Pruner(_Params):
    """Fits the pruning pair (I, K) of a module; transform returns (I/K)(-eps).

    The pair depends on the module, so transform only accepts the module
    it was fitted on.
    """

    def __init__(self, epsilon: int = 1):
        self.epsilon = epsilon

    def fit(self, M, y=None):
        M = check_module(M)
        self.pair_: PruningPair = pruning_pair(M, _check_eps(self.epsilon))
        self.steps_ = self.pair_.steps
        return self

    def transform(self, M) -> PersistenceModule:
        self._check_fitted("pair_")
        if check_module(M) != self.pair_.ambient:
            raise ValueError("Pruner.transform expects the module passed to fit")
        return pruning(M, self.pair_.eps, self.pair_)


class Decomposer(_Params):
    """Splits a module into indecomposables; transform returns the summand list."""

    def __init__(self, seed: int = 0, trials: int = 64):
        self.seed = seed
        self.trials = trials

    def fit(self, M, y=None):
        M = check_module(M)
        self.decomposition_: Decomposition = decompose(M, seed=self.seed, trials=self.trials)
        self.barcode_ = barcode(M, seed=self.seed, decomposition=self.decomposition_)
        self.n_summands_ = len(self.decomposition_.parts)
        return self

    def transform(self, M) -> list:
        self._check_fitted("decomposition_")
        if check_module(M) != self.decomposition_.ambient:
            return decompose(M, seed=self.seed, trials=self.trials).parts
        return list(self.decomposition_.parts)
