"""Chain maps built from certified resolutions, shared by several test files."""
from __future__ import annotations

from presheafcoh import complexes as cx
from presheafcoh import diagram as dg
from presheafcoh import homalg
from presheafcoh.diagram import DiagMap


def augmentation(R: homalg.Resolution, cap: bool = True):
    """(P, f) with P the (capped) resolution complex and f: P -> M as a chain map into M in degree 0."""
    P, aug = R.complex(cap=cap)
    Mc = cx.single(R.module).padded(P.top)
    comps = [aug] + [dg.zero_map(P.term(n), Mc.term(n)) for n in range(1, P.top + 1)]
    return P, cx.ChainMap(P, Mc, comps)


def lifted(g: DiagMap, RM, RN):
    """The capped natural lift of g: M -> N between capped natural resolutions, with both augmentations."""
    PM, fM = augmentation(RM)
    PN, fN = augmentation(RN)
    mats, gK = homalg.lift_to_resolutions(g, RM, RN)
    comps = [DiagMap(PM.term(n), PN.term(n), mats[n]) for n in range(len(mats))]
    comps.append(DiagMap(PM.term(len(mats)), PN.term(len(mats)), gK))
    return cx.ChainMap(PM, PN, comps), fM, fN


def scaled(M, c: int) -> DiagMap:
    F = M.field
    return DiagMap(M, M, {i: F.reduce(c * F.eye(M.dim(i))) for i in M.base.objects})


def chain_of(g: DiagMap, top: int) -> cx.ChainMap:
    """g: M -> N as a chain map between single-term complexes padded to ``top``."""
    S, T = cx.single(g.source).padded(top), cx.single(g.target).padded(top)
    return cx.ChainMap(S, T, [g] + [dg.zero_map(S.term(n), T.term(n)) for n in range(1, top + 1)])
