"""Independent brute-force routes used as oracles by the tests.

Nothing here calls the package's linear algebra: ranks are plain Gaussian
elimination mod p on Python ints, and every complex is built from its textbook
formula by explicit enumeration.
"""
from __future__ import annotations

import itertools

P = 101


def rank_mod_p(rows: list[list[int]], p: int = P) -> int:
    m = [[x % p for x in r] for r in rows]
    rank, ncols = 0, len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], -1, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c]
                m[r] = [(a - f * b) % p for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def matmul(a, b, p: int = P):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) % p for j in range(len(b[0]) if b else 0)] for i in range(len(a))]


def ints(arr) -> list[list[int]]:
    """numpy matrix over F_p -> nested lists of ints."""
    return [[int(x) for x in row] for row in arr]


# -- categories ----------------------------------------------------------------------------------------


class RawCat:
    """A category from its to_dict() form: plain strings and dicts only."""

    def __init__(self, d: dict):
        self.objects = list(d["objects"])
        self.mors = {m: (a, b) for m, a, b in d["morphisms"]}
        self.ids = dict(d["identities"])
        self.comp = {(u, v): w for u, v, w in d["compose"]}
        self.idset = set(self.ids.values())

    def nonid(self):
        return [m for m in self.mors if m not in self.idset]


def nondegenerate_chains(C: RawCat, max_len: int = 8) -> list[tuple]:
    """Every tuple of composable nonidentity morphisms, by brute force over products."""
    out = [("obj", o) for o in C.objects]
    non = C.nonid()
    for n in range(1, max_len + 1):
        found = False
        for chain in itertools.product(non, repeat=n):
            if all(C.mors[chain[t]][1] == C.mors[chain[t + 1]][0] for t in range(n - 1)):
                out.append(chain)
                found = True
        if not found:
            break
    return out


def _vertices(C: RawCat, s) -> list:
    if s[0] == "obj":
        return [s[1]]
    return [C.mors[s[0]][0]] + [C.mors[u][1] for u in s]


def _segment(C: RawCat, s, a: int, b: int):
    """tau(a -> b) as a morphism id."""
    if s[0] == "obj":
        return C.ids[s[1]]
    w = C.ids[_vertices(C, s)[a]]
    for t in range(a, b):
        w = C.comp[(w, s[t])]
    return w


def _dim(s) -> int:
    return 0 if s[0] == "obj" else len(s)


def subdivision_counts(d: dict) -> tuple[int, int]:
    """Objects and morphisms of C' by enumerating every (tau, sigma, monotone f)."""
    C = RawCat(d)
    simp = nondegenerate_chains(C)
    triples = set()
    for tau in simp:
        p = _dim(tau)
        for sigma in simp:
            q = _dim(sigma)
            for f in itertools.combinations(range(p + 1), q + 1):
                ok = _vertices(C, sigma) == [_vertices(C, tau)[k] for k in f]
                ok = ok and all(_segment(C, sigma, t, t + 1) == _segment(C, tau, f[t], f[t + 1]) for t in range(q))
                if ok:
                    triples.add((tau, sigma, _segment(C, tau, 0, f[0])))
    return len(simp), len(triples)


def nerve_cohomology(d: dict, n_max: int, p: int = P) -> list[int]:
    """Cohomology of the nerve with coefficients in F_p, on nondegenerate chains (face maps compose)."""
    C = RawCat(d)
    simp = nondegenerate_chains(C, n_max + 2)
    by_dim = {}
    for s in simp:
        by_dim.setdefault(_dim(s), []).append(s)
    index = {k: {s: a for a, s in enumerate(v)} for k, v in by_dim.items()}

    def faces(s):
        n = _dim(s)
        if n == 1:
            u = s[0]
            return [(0, ("obj", C.mors[u][1])), (1, ("obj", C.mors[u][0]))]
        out = [(0, s[1:])]
        for t in range(1, n):
            w = C.comp[(s[t - 1], s[t])]
            if w in C.idset:
                continue
            out.append((t, s[: t - 1] + (w,) + s[t + 1:]))
        out.append((n, s[:-1]))
        return out

    def coboundary_rank(n):
        src, dst = by_dim.get(n, []), by_dim.get(n + 1, [])
        if not src or not dst:
            return 0
        rows = []
        for s in dst:
            row = [0] * len(src)
            for t, f in faces(s):
                row[index[n][f]] += (-1) ** t
            rows.append(row)
        return rank_mod_p(rows, p)

    ranks = [coboundary_rank(n) for n in range(n_max + 1)]
    return [len(by_dim.get(n, [])) - ranks[n] - (ranks[n - 1] if n else 0) for n in range(n_max + 1)]


# -- Ext over the category algebra -----------------------------------------------------------------------


def category_algebra_ext(d: dict, M: dict, N: dict, n_max: int, p: int = P) -> list[int]:
    """Ext over kC between presheaves, from the bar complex normalized relative to k^{objects}.

    M and N are {"dims": {obj: int}, "T": {mor: matrix cod -> dom}} with plain lists.
    Cochains in degree n: for every chain (u_1..u_n) of composable nonidentity
    morphisms a matrix M^{cod u_n} -> N^{dom u_1}.
    """
    C = RawCat(d)
    chains = {0: [("obj", o) for o in C.objects]}
    non = C.nonid()
    for n in range(1, n_max + 2):
        chains[n] = [ch for ch in itertools.product(non, repeat=n)
                     if all(C.mors[ch[t]][1] == C.mors[ch[t + 1]][0] for t in range(n - 1))]

    def ends(ch):
        if ch[0] == "obj":
            return ch[1], ch[1]
        return C.mors[ch[0]][0], C.mors[ch[-1]][1]  # (dom u_1, cod u_n)

    def layout(n):
        offs, off = {}, 0
        for ch in chains[n]:
            a, b = ends(ch)
            offs[ch] = off
            off += N["dims"][a] * M["dims"][b]
        return offs, off

    def T(mod, u):
        a, b = C.mors[u]
        m = mod["T"].get(u)
        if m is None:
            return [[int(i == j) for j in range(mod["dims"][b])] for i in range(mod["dims"][a])]
        return m

    def coboundary(n):
        src, w = layout(n)
        dst, h = layout(n + 1)
        if w == 0 or h == 0:
            return None, w, h
        rows = [[0] * w for _ in range(h)]

        def add(ch_out, ch_in, left, right, sign):
            # contributes sign * left . f(ch_in) . right to the entry at ch_out
            a, b = ends(ch_out)
            ai, bi = ends(ch_in)
            na, mb = N["dims"][a], M["dims"][b]
            nai, mbi = N["dims"][ai], M["dims"][bi]
            for r in range(na):
                for c in range(mb):
                    row = rows[dst[ch_out] + r * mb + c]
                    for x in range(nai):
                        lx = left[r][x] if left is not None else int(r == x)
                        if not lx:
                            continue
                        for y in range(mbi):
                            ry = right[y][c] if right is not None else int(y == c)
                            if ry:
                                row[src[ch_in] + x * mbi + y] += sign * lx * ry

        for ch in chains[n + 1]:
            k = n + 1
            # u_1 . f(u_2 .. u_k)
            rest = ch[1:] if k > 1 else ("obj", C.mors[ch[0]][1])
            add(ch, rest, T(N, ch[0]), None, 1)
            for t in range(1, k):
                w_ = C.comp[(ch[t - 1], ch[t])]
                if w_ in C.idset:
                    continue
                add(ch, ch[: t - 1] + (w_,) + ch[t + 1:], None, None, (-1) ** t)
            first = ch[:-1] if k > 1 else ("obj", C.mors[ch[0]][0])
            add(ch, first, None, T(M, ch[-1]), (-1) ** k)
        return rows, w, h

    dims, ranks = [], [0]
    for n in range(n_max + 1):
        rows, w, h = coboundary(n)
        dims.append(w)
        ranks.append(rank_mod_p(rows, p) if rows else 0)
    return [dims[n] - ranks[n + 1] - ranks[n] for n in range(n_max + 1)]


def presheaf_data(M) -> dict:
    """Plain-list presheaf data of a module over a constant-k diagram (objects and morphisms as labels)."""
    from presheafcoh.fincat import label
    C = M.base
    return {"dims": {label(o): M.dim(o) for o in C.objects},
            "T": {label(v): ints(M.T[v]) for v in C.morphisms if not C.is_identity(v)}}


# -- Hochschild cohomology of a finite-dimensional algebra -------------------------------------------------


def hochschild_bar(mult: list, unit: list, n_max: int, p: int = P) -> list[int]:
    """HH^n(B, B) from the full (unnormalized) bar complex; mult[a][b][s] is the coefficient of e_s in e_a e_b."""
    d = len(unit)

    def prod(a, b):  # basis indices -> coefficient vector
        return [mult[a][b][s] % p for s in range(d)]

    def coboundary(n):
        # f: B^{(x)n} -> B, variables f[s, (t_1..t_n)] ordered by s then tuple
        src = list(itertools.product(range(d), repeat=n))
        dst = list(itertools.product(range(d), repeat=n + 1))
        si = {t: k for k, t in enumerate(src)}
        w = d * len(src)
        rows = []
        for tup in dst:
            for s in range(d):
                row = [0] * w
                # b_1 f(b_2..)
                for r in range(d):
                    c = prod(tup[0], r)[s]
                    if c:
                        row[r * len(src) + si[tup[1:]]] += c
                # sum (-1)^t f(.. b_t b_{t+1} ..)
                for t in range(n):
                    pr = prod(tup[t], tup[t + 1])
                    for q in range(d):
                        if pr[q]:
                            row[s * len(src) + si[tup[:t] + (q,) + tup[t + 2:]]] += (-1) ** (t + 1) * pr[q]
                # (-1)^{n+1} f(b_1..b_n) b_{n+1}
                for r in range(d):
                    c = prod(r, tup[-1])[s]
                    if c:
                        row[r * len(src) + si[tup[:-1]]] += (-1) ** (n + 1) * c
                rows.append(row)
        return rows, w

    dims, ranks = [], [0]
    for n in range(n_max + 1):
        rows, w = coboundary(n)
        dims.append(w)
        ranks.append(rank_mod_p(rows, p))
    return [dims[n] - ranks[n + 1] - ranks[n] for n in range(n_max + 1)]


def center_dim(mult: list, p: int = P) -> int:
    """dim of the center: x with x e_a = e_a x for every basis element."""
    d = len(mult)
    rows = []
    for a in range(d):
        for s in range(d):
            rows.append([(mult[r][a][s] - mult[a][r][s]) % p for r in range(d)])
    return d - rank_mod_p(rows, p)


# -- Hom between modules over a diagram -------------------------------------------------------------------


def hom_dim(Mdata: dict, Ndata: dict, p: int = P) -> int:
    """dim Hom of diagram modules by one linear system in the entries of every component.

    Each side is {"objects": [...], "dims": {o: n}, "acts": {o: [matrix per algebra basis element]},
    "T": {mor: (dom, cod, matrix)}}.
    """
    objs = Mdata["objects"]
    offs, off = {}, 0
    for o in objs:
        offs[o] = off
        off += Ndata["dims"][o] * Mdata["dims"][o]
    rows = []

    def var(o, r, c):
        return offs[o] + r * Mdata["dims"][o] + c

    for o in objs:
        m, n = Mdata["dims"][o], Ndata["dims"][o]
        for am, an in zip(Mdata["acts"][o], Ndata["acts"][o]):
            # X am - an X = 0
            for r in range(n):
                for c in range(m):
                    row = [0] * off
                    for k in range(m):
                        if am[k][c]:
                            row[var(o, r, k)] += am[k][c]
                    for k in range(n):
                        if an[r][k]:
                            row[var(o, k, c)] -= an[r][k]
                    rows.append(row)
    for v, (a, b, tm) in Mdata["T"].items():
        tn = Ndata["T"][v][2]
        # X_a TM - TN X_b = 0  (T: cod -> dom)
        for r in range(Ndata["dims"][a]):
            for c in range(Mdata["dims"][b]):
                row = [0] * off
                for k in range(Mdata["dims"][a]):
                    if tm[k][c]:
                        row[var(a, r, k)] += tm[k][c]
                for k in range(Ndata["dims"][b]):
                    if tn[r][k]:
                        row[var(b, k, c)] -= tn[r][k]
                rows.append(row)
    if off == 0:
        return 0
    return off - (rank_mod_p(rows, p) if rows else 0)


def module_data(M) -> dict:
    C = M.base
    return {
        "objects": list(C.objects),
        "dims": {o: M.dim(o) for o in C.objects},
        "acts": {o: [ints(a) for a in M.modules[o].action] for o in C.objects},
        "T": {v: (C.dom(v), C.cod(v), ints(M.T[v])) for v in C.morphisms},
    }
