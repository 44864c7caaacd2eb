# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled node kernel.

Same surface as ``plgroups._pykernel`` but nodes live in C arrays of GMP
rationals, so composition allocates no Python objects per node. Python-level
rationals (gmpy2 ``mpq``) are produced only when ``xs``/``ys`` are read.

Module-level scratch rationals are shared between calls; every entry point
runs with the GIL held and never releases it, which keeps them safe.
"""

from cpython.mem cimport PyMem_Malloc, PyMem_Free
from gmpy2 cimport mpq, GMPy_MPQ_New, import_gmpy2, MPQ_Check, __mpq_struct, mpq_srcptr, mpq_ptr

cdef extern from "gmp.h":
    void mpq_init(mpq_ptr)
    void mpq_clear(mpq_ptr)
    void mpq_set(mpq_ptr, mpq_srcptr)
    void mpq_set_ui(mpq_ptr, unsigned long, unsigned long)
    void mpq_swap(mpq_ptr, mpq_ptr)
    void mpq_add(mpq_ptr, mpq_srcptr, mpq_srcptr)
    void mpq_sub(mpq_ptr, mpq_srcptr, mpq_srcptr)
    void mpq_mul(mpq_ptr, mpq_srcptr, mpq_srcptr)
    void mpq_div(mpq_ptr, mpq_srcptr, mpq_srcptr)
    int mpq_cmp(mpq_srcptr, mpq_srcptr)
    int mpq_equal(mpq_srcptr, mpq_srcptr)

import gmpy2

import_gmpy2()

NAME = "compiled"

cdef __mpq_struct _w1, _w2, _w3
mpq_init(&_w1)
mpq_init(&_w2)
mpq_init(&_w3)


cdef inline void _interp(mpq_ptr dst, mpq_srcptr x0, mpq_srcptr y0,
                         mpq_srcptr x1, mpq_srcptr y1, mpq_srcptr t):
    # dst = y0 + (t - x0) * (y1 - y0) / (x1 - x0)
    if mpq_equal(x0, y0) and mpq_equal(x1, y1):
        mpq_set(dst, t)
        return
    mpq_sub(&_w1, t, x0)
    mpq_sub(&_w2, y1, y0)
    mpq_mul(&_w1, &_w1, &_w2)
    mpq_sub(&_w2, x1, x0)
    mpq_div(&_w1, &_w1, &_w2)
    mpq_add(dst, &_w1, y0)


cdef inline bint _collinear(__mpq_struct *x, __mpq_struct *y, Py_ssize_t k):
    # nodes k-2, k-1, k on one line
    mpq_sub(&_w1, &y[k - 1], &y[k - 2])
    mpq_sub(&_w2, &x[k], &x[k - 1])
    mpq_mul(&_w1, &_w1, &_w2)
    mpq_sub(&_w2, &y[k], &y[k - 1])
    mpq_sub(&_w3, &x[k - 1], &x[k - 2])
    mpq_mul(&_w2, &_w2, &_w3)
    return mpq_equal(&_w1, &_w2) != 0


cdef inline mpq _to_py(mpq_srcptr q):
    cdef mpq r = GMPy_MPQ_New(NULL)
    mpq_set(r.q, q)
    return r


cdef inline mpq _as_mpq(object v):
    if MPQ_Check(v):
        return <mpq>v
    if isinstance(v, str):
        from .rat import parse_rat
        return <mpq>gmpy2.mpq(parse_rat(v))
    return <mpq>gmpy2.mpq(v)


cdef inline size_t _mix(size_t h, unsigned long long v):
    h ^= <size_t>v
    h *= <size_t>1099511628211ULL
    return h


cdef size_t _hash_mpz(size_t h, int size, const unsigned long *limbs):
    cdef int i, n = size if size >= 0 else -size
    h = _mix(h, <unsigned long long>(size + 0x9e3779b9))
    for i in range(n):
        h = _mix(h, limbs[i])
    return h


cdef extern from *:
    """
    static inline int plg_num_size(const __mpq_struct *q) { return q->_mp_num._mp_size; }
    static inline int plg_den_size(const __mpq_struct *q) { return q->_mp_den._mp_size; }
    static inline const unsigned long *plg_num_limbs(const __mpq_struct *q) { return (const unsigned long *)q->_mp_num._mp_d; }
    static inline const unsigned long *plg_den_limbs(const __mpq_struct *q) { return (const unsigned long *)q->_mp_den._mp_d; }
    """
    int plg_num_size(mpq_srcptr)
    int plg_den_size(mpq_srcptr)
    const unsigned long *plg_num_limbs(mpq_srcptr)
    const unsigned long *plg_den_limbs(mpq_srcptr)


cdef class Nodes:
    """Immutable breakpoint list of a PL homeomorphism of [0, 1]."""

    cdef __mpq_struct *x
    cdef __mpq_struct *y
    cdef Py_ssize_t n
    cdef Py_ssize_t cap
    cdef Py_hash_t _hash
    cdef object _xs
    cdef object _ys

    def __cinit__(self):
        self.x = NULL
        self.y = NULL
        self.n = 0
        self.cap = 0
        self._hash = -1

    def __dealloc__(self):
        cdef Py_ssize_t i
        if self.x != NULL:
            for i in range(self.cap):
                mpq_clear(&self.x[i])
                mpq_clear(&self.y[i])
            PyMem_Free(self.x)
            PyMem_Free(self.y)

    @classmethod
    def from_sequences(cls, xs, ys, canonical=True):
        cdef Py_ssize_t m = len(xs), k = 0, i
        cdef Nodes r = _alloc(m)
        for i in range(m):
            mpq_set(&r.x[k], (<mpq>_as_mpq(xs[i])).q)
            mpq_set(&r.y[k], (<mpq>_as_mpq(ys[i])).q)
            if not canonical and k >= 2 and _collinear(r.x, r.y, k):
                mpq_swap(&r.x[k - 1], &r.x[k])
                mpq_swap(&r.y[k - 1], &r.y[k])
            else:
                k += 1
        r.n = k
        return r

    @classmethod
    def identity(cls):
        cdef Nodes r = _alloc(2)
        mpq_set_ui(&r.x[0], 0, 1)
        mpq_set_ui(&r.y[0], 0, 1)
        mpq_set_ui(&r.x[1], 1, 1)
        mpq_set_ui(&r.y[1], 1, 1)
        r.n = 2
        return r

    @property
    def xs(self):
        if self._xs is None:
            self._xs = tuple([_to_py(&self.x[i]) for i in range(self.n)])
        return self._xs

    @property
    def ys(self):
        if self._ys is None:
            self._ys = tuple([_to_py(&self.y[i]) for i in range(self.n)])
        return self._ys

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, Nodes):
            return NotImplemented
        return _equal(self, <Nodes>other)

    def __ne__(self, other):
        if not isinstance(other, Nodes):
            return NotImplemented
        return not _equal(self, <Nodes>other)

    def __hash__(self):
        cdef size_t h = <size_t>14695981039346656037ULL
        cdef Py_ssize_t i
        if self._hash == -1:
            for i in range(self.n):
                h = _hash_mpz(h, plg_num_size(&self.x[i]), plg_num_limbs(&self.x[i]))
                h = _hash_mpz(h, plg_den_size(&self.x[i]), plg_den_limbs(&self.x[i]))
                h = _hash_mpz(h, plg_num_size(&self.y[i]), plg_num_limbs(&self.y[i]))
                h = _hash_mpz(h, plg_den_size(&self.y[i]), plg_den_limbs(&self.y[i]))
            if <Py_hash_t>h == -1:
                h = 2
            self._hash = <Py_hash_t>h
        return self._hash

    def __reduce__(self):
        return (_rebuild, (self.xs, self.ys))

    def is_identity(self):
        return self.n == 2

    def inverse(self):
        cdef Nodes r = _alloc(self.n)
        cdef Py_ssize_t i
        for i in range(self.n):
            mpq_set(&r.x[i], &self.y[i])
            mpq_set(&r.y[i], &self.x[i])
        r.n = self.n
        return r

    def compose(self, Nodes other):
        """Apply ``self`` first, then ``other``."""
        return _compose(self, other)

    def evaluate(self, x):
        cdef mpq q = _as_mpq(x)
        cdef mpq r = GMPy_MPQ_New(NULL)
        _eval_into(self, r.q, q.q)
        return r

    def escape(self, x, bound, long limit):
        """Smallest n >= 1 with x f^n > bound, or -1 if none within ``limit``."""
        cdef mpq q = _as_mpq(x)
        cdef mpq b = _as_mpq(bound)
        cdef __mpq_struct p
        cdef long k
        mpq_init(&p)
        try:
            mpq_set(&p, q.q)
            for k in range(1, limit + 1):
                _eval_into(self, &p, &p)
                if mpq_cmp(&p, b.q) > 0:
                    return k
            return -1
        finally:
            mpq_clear(&p)


def _rebuild(xs, ys):
    return Nodes.from_sequences(xs, ys)


cdef Nodes _alloc(Py_ssize_t m):
    cdef Nodes r = Nodes.__new__(Nodes)
    cdef Py_ssize_t i
    r.x = <__mpq_struct *>PyMem_Malloc(m * sizeof(__mpq_struct))
    r.y = <__mpq_struct *>PyMem_Malloc(m * sizeof(__mpq_struct))
    if r.x == NULL or r.y == NULL:
        raise MemoryError()
    for i in range(m):
        mpq_init(&r.x[i])
        mpq_init(&r.y[i])
    r.cap = m
    return r


cdef bint _equal(Nodes a, Nodes b):
    cdef Py_ssize_t i
    if a.n != b.n:
        return False
    if a._hash != -1 and b._hash != -1 and a._hash != b._hash:
        return False
    for i in range(a.n):
        if not mpq_equal(&a.x[i], &b.x[i]) or not mpq_equal(&a.y[i], &b.y[i]):
            return False
    return True


cdef void _eval_into(Nodes f, mpq_ptr dst, mpq_srcptr t):
    # dst may alias t
    cdef Py_ssize_t lo = 0, hi = f.n - 1, mid
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if mpq_cmp(&f.x[mid], t) <= 0:
            lo = mid
        else:
            hi = mid
    if mpq_equal(&f.x[lo], t):
        mpq_set(dst, &f.y[lo])
    else:
        _interp(dst, &f.x[lo], &f.y[lo], &f.x[lo + 1], &f.y[lo + 1], t)


cdef Nodes _compose(Nodes f, Nodes g):
    cdef Nodes r = _alloc(f.n + g.n)
    cdef Py_ssize_t i = 1, j = 1, k = 1
    cdef int c
    mpq_set_ui(&r.x[0], 0, 1)
    mpq_set_ui(&r.y[0], 0, 1)
    while i < f.n:
        c = mpq_cmp(&f.y[i], &g.x[j])
        if c < 0:
            mpq_set(&r.x[k], &f.x[i])
            _interp(&r.y[k], &g.x[j - 1], &g.y[j - 1], &g.x[j], &g.y[j], &f.y[i])
            i += 1
        elif c > 0:
            _interp(&r.x[k], &f.y[i - 1], &f.x[i - 1], &f.y[i], &f.x[i], &g.x[j])
            mpq_set(&r.y[k], &g.y[j])
            j += 1
        else:
            mpq_set(&r.x[k], &f.x[i])
            mpq_set(&r.y[k], &g.y[j])
            i += 1
            j += 1
        if k >= 2 and _collinear(r.x, r.y, k):
            mpq_swap(&r.x[k - 1], &r.x[k])
            mpq_swap(&r.y[k - 1], &r.y[k])
        else:
            k += 1
    r.n = k
    return r
