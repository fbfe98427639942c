"""The pruning pair (I, K) of a module and the pruned module (I/K)(-eps).

The defining conditions quantify over every morphism M -> M(2 eps).  Each
condition is linear in the morphism (preimages of a fixed subspace are
intersected, images are summed), so a basis of the Hom space gives the same
fixed point as the whole space; the iteration therefore runs over
:func:`hom_basis` only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .permod import (
    Morphism,
    PersistenceModule,
    Submodule,
    apply_to,
    full_submodule,
    hom_basis,
    preimage,
    shift_module,
    sub_intersect,
    sub_sum,
    subquotient,
    transition,
    zero_submodule,
)
from .erode import img_eps, ker_eps

__all__ = ["PruningPair", "pruning_pair", "pruning", "pruning_properties"]


@dataclass
class PruningPair:
    ambient: PersistenceModule
    I: Submodule
    K: Submodule
    eps: int
    steps_I: int
    steps_K: int
    morphisms: list = field(repr=False, default_factory=list)
    I_chain: list = field(repr=False, default_factory=list)
    K_chain: list = field(repr=False, default_factory=list)

    @property
    def steps(self) -> int:
        """r' = max(steps_I, steps_K); the pruning is a 2 r' eps refinement."""
        return max(self.steps_I, self.steps_K)


def _restrict_pullback(T: Morphism, I: Submodule, W: Submodule) -> Submodule:
    return sub_intersect(I, preimage(T, W))


def pruning_pair(M: PersistenceModule, eps: int, extra: list | None = None,
                 max_iter: int | None = None) -> PruningPair:
    """Iterate I to its fixed point, then K inside the final I."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    if eps == 0:
        full = full_submodule(M)
        return PruningPair(M, full, zero_submodule(M), 0, 0, 0, [], [full], [zero_submodule(M)])
    M2 = shift_module(M, 2 * eps)
    T = transition(M, 0, 2 * eps).with_target(M2)
    fs = hom_basis(M, M2) + list(extra or [])
    limit = max_iter if max_iter is not None else M.supdim + 2

    I = full_submodule(M)
    I_chain = [I]
    for _ in range(limit + 1):
        TI = apply_to(T, I)
        nxt = sub_intersect(I, *[preimage(f, TI) for f in fs]) if fs else I
        if nxt == I:
            break
        I = nxt
        I_chain.append(I)
    steps_I = len(I_chain) - 1

    kerI = _restrict_pullback(T, I, zero_submodule(M2))
    K = zero_submodule(M)
    K_chain = [K]
    for _ in range(limit + 1):
        parts = [_restrict_pullback(T, I, apply_to(f, K)) for f in fs]
        nxt = sub_sum(kerI, *parts) if parts else kerI
        if nxt == K:
            break
        K = nxt
        K_chain.append(K)
    steps_K = len(K_chain) - 1
    return PruningPair(M, I, K, eps, steps_I, steps_K, fs, I_chain, K_chain)


def pruning(M: PersistenceModule, eps: int, pair: PruningPair | None = None) -> PersistenceModule:
    """(I/K)(-eps)."""
    pair = pair or pruning_pair(M, eps)
    return shift_module(subquotient(pair.I, pair.K), -eps)


def pruning_properties(pair: PruningPair, r: int | None = None) -> dict:
    """Exact checks of the containments satisfied by a pruning pair."""
    M, eps = pair.ambient, pair.eps
    r = M.supdim if r is None else r
    M2 = shift_module(M, 2 * eps)
    T = transition(M, 0, 2 * eps).with_target(M2)
    I, K = pair.I, pair.K
    TI, TK = apply_to(T, I), apply_to(T, K)
    out = {
        "K_inside_I": K <= I,
        "I_stable": all(apply_to(f, I) <= TI for f in pair.morphisms),
        "K_pullback_stable": all(_restrict_pullback(T, I, apply_to(f, K)) <= K for f in pair.morphisms),
        "img_2r_inside_TI": img_eps(M2, 2 * r * eps) <= TI,
        "K_inside_ker_2r": K <= sub_intersect(I, ker_eps(M, 2 * r * eps)),
        "K_saturated": K == _restrict_pullback(T, I, TK),
        "fK_inside_TK": all(apply_to(f, K) <= TK for f in pair.morphisms),
        "steps_bounded": pair.steps_I <= r and pair.steps_K <= r,
    }
    return out
