# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled ∀∃ search; same contract as ``dstl._search``."""

from libc.stdint cimport uint8_t, uint32_t


cdef inline bint _stutters(uint32_t ds, uint32_t z, const uint32_t[::1] step,
                           uint32_t final) noexcept nogil:
    cdef uint32_t fs = ds & final
    cdef uint32_t f, rest, zf
    cdef int k
    cdef bint ok
    while fs:
        f = fs & (~fs + 1)
        fs ^= f
        rest = ds & ~f
        zf = z & ~f
        ok = True
        k = 0
        while rest:
            if (rest & 1) and not (step[k] & zf):
                ok = False
                break
            rest >>= 1
            k += 1
        if ok:
            return True
    return False


cdef inline uint32_t _witness(uint32_t ds, const uint8_t[::1] ftab, const uint8_t[::1] gtab,
                              const uint32_t[::1] reach, const uint32_t[::1] back, int mode,
                              const uint32_t[::1] step, uint32_t final) noexcept nogil:
    cdef uint32_t u = reach[ds]
    cdef uint32_t sub = 0
    while True:
        sub = (sub - u) & u
        if sub == 0:
            return 0
        if ds & ~back[sub]:
            continue
        if gtab[sub]:
            return sub
        if mode == 1 and ftab[sub]:
            if (ds & ~sub) or _stutters(ds, sub, step, final):
                return sub


def witness(uint32_t ds, const uint8_t[::1] ftab, const uint8_t[::1] gtab,
            const uint32_t[::1] reach, const uint32_t[::1] back, int mode,
            const uint32_t[::1] step, uint32_t final):
    return _witness(ds, ftab, gtab, reach, back, mode, step, final)


def first_failure(const uint8_t[::1] ftab, const uint8_t[::1] gtab,
                  const uint32_t[::1] reach, const uint32_t[::1] back, int mode,
                  const uint32_t[::1] step, uint32_t final, Py_ssize_t lo, Py_ssize_t hi):
    cdef Py_ssize_t ds
    cdef Py_ssize_t found = 0
    if lo < 1:
        lo = 1
    with nogil:
        for ds in range(lo, hi):
            if ftab[ds] and not _witness(<uint32_t>ds, ftab, gtab, reach, back, mode, step, final):
                found = ds
                break
    return found
