"""Erosions, erosion-neighbourhood witnesses and common members of interleaved pairs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import exactlin as el
from .errors import ENViolation, NotAnInterleaving, NaturalityViolation
from .permod import (
    Morphism,
    PersistenceModule,
    Submodule,
    Subquotient,
    direct_sum,
    full_submodule,
    image,
    kernel,
    preimage,
    shift_module,
    sub_intersect,
    sub_sum,
    transition,
    zero_submodule,
)

__all__ = [
    "img_eps",
    "ker_eps",
    "erosion",
    "erosion_dim",
    "erosion_morphism",
    "ENWitness",
    "check_en_witness",
    "erosion_witness",
    "member_interleaving",
    "check_interleaving",
    "common_en_from_interleaving",
    "CommonMember",
]


def img_eps(M: PersistenceModule, eps: int) -> Submodule:
    """Image of M(-eps) -> M."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    if eps == 0:
        return full_submodule(M)
    p = M.p
    basis = {}
    for x in M.dims:
        m = M.diagonal(tuple(a - eps for a in x), eps)
        if m.shape[1]:
            basis[x] = el.colspace(m, p)
    return Submodule(M, basis, canonical=True)


def ker_eps(M: PersistenceModule, eps: int) -> Submodule:
    """Kernel of M -> M(eps)."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    if eps == 0:
        return zero_submodule(M)
    p = M.p
    basis = {}
    for x, n in M.dims.items():
        m = M.diagonal(x, eps)
        basis[x] = el.identity(n) if m.shape[0] == 0 else el.colspace(el.nullspace(m, p), p)
    return Submodule(M, basis, canonical=True)


def _erosion_sq(M: PersistenceModule, eps: int) -> Subquotient:
    im = img_eps(M, eps)
    return Subquotient(im, sub_intersect(im, ker_eps(M, eps)))


def erosion(M: PersistenceModule, eps: int) -> PersistenceModule:
    """Img_eps(M) / (Ker_eps(M) meet Img_eps(M))."""
    return _erosion_sq(M, eps).module


def erosion_dim(M: PersistenceModule, eps: int, x) -> int:
    """Rank of M_{x-eps -> x+eps}, the pointwise dimension of the erosion."""
    return el.rank(M.diagonal(tuple(a - eps for a in x), 2 * eps), M.p)


def _induced(f: Morphism, src: Subquotient, tgt: Subquotient) -> Morphism:
    p = f.p
    comps = {}
    for x, L in src.lift.items():
        if x in tgt.proj:
            comps[x] = tgt.project(x, (f.at(x) @ L) % p)
    return Morphism(src.module, tgt.module, comps, check=False)


def erosion_morphism(f: Morphism, eps: int) -> Morphism:
    """Er_eps(f): Er_eps(M) -> Er_eps(N) induced by f: M -> N."""
    return _induced(f, _erosion_sq(f.source, eps), _erosion_sq(f.target, eps))


@dataclass
class ENWitness:
    """Submodules M2 <= M1 of M presenting a member of EN_eps(M)."""

    ambient: PersistenceModule
    M1: Submodule
    M2: Submodule
    eps: int


def check_en_witness(w: ENWitness) -> PersistenceModule:
    """Verify the three containments and return M1/M2; ENViolation names the failure."""
    M = w.ambient
    checks = [
        ("M2 inside M1", w.M2, w.M1),
        ("Img_eps inside M1", img_eps(M, w.eps), w.M1),
        ("M2 inside Ker_eps", w.M2, ker_eps(M, w.eps)),
    ]
    for name, small, big in checks:
        x = small.first_escape(big)
        if x is not None:
            raise ENViolation(name, x)
    return Subquotient(w.M1, w.M2).module


def erosion_witness(M: PersistenceModule, eps: int) -> ENWitness:
    im = img_eps(M, eps)
    return ENWitness(M, im, sub_intersect(im, ker_eps(M, eps)), eps)


def member_interleaving(w: ENWitness):
    """The member M1/M2 with the eps-interleaving induced by M_{0->eps}.

    Returns ``(member, phi, psi)`` with phi: member -> M(eps) and
    psi: M -> member(eps).
    """
    check_en_witness(w)
    M, eps, p = w.ambient, w.eps, w.ambient.p
    sq = Subquotient(w.M1, w.M2)
    Q = sq.module
    Meps = shift_module(M, eps)
    Qeps = shift_module(Q, eps)
    phi = {}
    for x, L in sq.lift.items():
        if Meps.dim(x):
            phi[x] = (M.diagonal(x, eps) @ L) % p
    psi = {}
    for x in M.dims:
        if Qeps.dim(x):
            psi[x] = sq.project(tuple(a + eps for a in x), M.diagonal(x, eps))
    return Q, Morphism(Q, Meps, phi, check=False), Morphism(M, Qeps, psi, check=False)


def check_interleaving(M, N, phi: Morphism, psi: Morphism, eps: int) -> bool:
    """Exact check of both interleaving identities (and naturality of phi, psi)."""
    try:
        phi.check_naturality()
        psi.check_naturality()
    except NaturalityViolation:
        return False
    if phi.source.dims != M.dims or psi.source.dims != N.dims:
        return False
    if phi.target.dims != shift_module(N, eps).dims or psi.target.dims != shift_module(M, eps).dims:
        return False
    left = psi.shift(eps).compose(phi.with_target(shift_module(N, eps)))
    right = phi.shift(eps).compose(psi.with_target(shift_module(M, eps)))
    return left == transition(M, 0, 2 * eps) and right == transition(N, 0, 2 * eps)


@dataclass
class CommonMember:
    witness_M: ENWitness
    witness_N: ENWitness
    member_M: PersistenceModule
    member_N: PersistenceModule
    iso: Morphism
    preimages_agree: bool


def common_en_from_interleaving(M, N, phi: Morphism, psi: Morphism, eps: int) -> CommonMember:
    """Witnesses on M and N whose members are isomorphic, built from an interleaving.

    M1 = Img_eps(M) + img psi(-eps), M2 = Ker_eps(M) meet ker phi meet M1,
    and symmetrically on N.  Both members are quotients of M(-eps) + N(-eps)
    by the same submodule, which yields the explicit isomorphism.
    """
    if not check_interleaving(M, N, phi, psi, eps):
        raise NotAnInterleaving(f"identities fail at eps={eps}")
    p = M.p
    psi_m = psi.shift(-eps).with_target(M)
    phi_m = phi.shift(-eps).with_target(N)
    M1 = sub_sum(img_eps(M, eps), image(psi_m))
    M2 = sub_intersect(ker_eps(M, eps), kernel(phi), M1)
    N1 = sub_sum(img_eps(N, eps), image(phi_m))
    N2 = sub_intersect(ker_eps(N, eps), kernel(psi), N1)
    wM, wN = ENWitness(M, M1, M2, eps), ENWitness(N, N1, N2, eps)
    check_en_witness(wM)
    check_en_witness(wN)

    Mm, Nm = shift_module(M, -eps), shift_module(N, -eps)
    S, _, _ = direct_sum([Mm, Nm])
    tM, tN = transition(M, -eps, 0), transition(N, -eps, 0)
    mu = {}
    nu = {}
    for x, n in S.dims.items():
        mu[x] = np.hstack([tM.at(x), psi_m.at(x)]) if M.dim(x) else el.zeros(0, n)
        nu[x] = np.hstack([phi_m.at(x), tN.at(x)]) if N.dim(x) else el.zeros(0, n)
    mu_f = Morphism(S, M, mu, check=False)
    nu_f = Morphism(S, N, nu, check=False)
    agree = preimage(mu_f, M2) == preimage(nu_f, N2)

    sqM, sqN = Subquotient(M1, M2), Subquotient(N1, N2)
    comps = {}
    for x, L in sqM.lift.items():
        pre = el.solve(mu_f.at(x), L, p)
        comps[x] = sqN.project(x, (nu_f.at(x) @ pre) % p) if x in sqN.proj else el.zeros(0, L.shape[1])
    iso = Morphism(sqM.module, sqN.module, comps, check=True)
    return CommonMember(wM, wN, sqM.module, sqN.module, iso, agree)
