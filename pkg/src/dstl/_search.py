"""Pure-Python ∀∃ search; the compiled ``_kernels`` module mirrors it exactly.

For every ds with ``ftab[ds]`` set, look for a candidate Z (a submask of
``reach[ds]``, visited in ascending order) with ``ds & ~back[Z] == 0`` that
is accepted by the mode:

    MODE_EXISTS   gtab[Z]
    MODE_UNLESS   gtab[Z], or ftab[Z] with Z not a superset of ds, or
                  ftab[Z] with Z a superset of ds where one final state f of ds
                  may stutter: every other member of ds has a same-or-next
                  state in Z - {f}
"""

MODE_EXISTS = 0
MODE_UNLESS = 1


def _stutters(ds, z, step, final):
    fs = ds & final
    while fs:
        f = fs & -fs
        fs ^= f
        rest = ds & ~f
        zf = z & ~f
        ok = True
        k = 0
        while rest:
            if rest & 1 and not step[k] & zf:
                ok = False
                break
            rest >>= 1
            k += 1
        if ok:
            return True
    return False


def witness(ds, ftab, gtab, reach, back, mode, step, final):
    """Smallest accepted candidate for ``ds``, or 0."""
    u = int(reach[ds])
    sub = 0
    while True:
        sub = (sub - u) & u
        if sub == 0:
            return 0
        if ds & ~int(back[sub]):
            continue
        if gtab[sub]:
            return sub
        if mode == MODE_UNLESS and ftab[sub]:
            if ds & ~sub or _stutters(ds, sub, step, final):
                return sub


def first_failure(ftab, gtab, reach, back, mode, step, final, lo, hi):
    """Smallest ds in [lo, hi) with ftab[ds] set and no witness, or 0."""
    ftab_l = ftab.tolist() if hasattr(ftab, "tolist") else ftab
    gtab_l = gtab.tolist() if hasattr(gtab, "tolist") else gtab
    reach_l = reach.tolist() if hasattr(reach, "tolist") else reach
    back_l = back.tolist() if hasattr(back, "tolist") else back
    step_l = [int(x) for x in step]
    for ds in range(max(lo, 1), hi):
        if ftab_l[ds] and not witness(ds, ftab_l, gtab_l, reach_l, back_l, mode, step_l, final):
            return ds
    return 0
