# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled successor kernel; mirrors ``_kernel_py.NetKernel``."""
from cpython.mem cimport PyMem_Malloc, PyMem_Free
from cpython.ref cimport Py_INCREF
from cpython.tuple cimport PyTuple_New, PyTuple_SET_ITEM


cdef long *_flatten(list rows, long **offsets) except NULL:
    # CSR layout: offsets[t]..offsets[t+1] index pairs (place, value)
    cdef Py_ssize_t n = len(rows), total = 0, i, k = 0
    for r in rows:
        total += len(r)
    cdef long *off = <long *> PyMem_Malloc((n + 1) * sizeof(long))
    cdef long *data = <long *> PyMem_Malloc((2 * total + 1) * sizeof(long))
    if off == NULL or data == NULL:
        raise MemoryError()
    for i in range(n):
        off[i] = k
        for p, v in rows[i]:
            data[2 * k] = p
            data[2 * k + 1] = v
            k += 1
    off[n] = k
    offsets[0] = off
    return data


cdef class NetKernel:
    cdef public int n_places, n_transitions
    cdef long *pre_off
    cdef long *pre
    cdef long *inh_off
    cdef long *inh
    cdef long *del_off
    cdef long *dlt
    cdef long *buf

    def __cinit__(self, int n_places, list pre, list inhib, list delta):
        self.n_places = n_places
        self.n_transitions = len(pre)
        self.pre = _flatten([list(r) for r in pre], &self.pre_off)
        self.inh = _flatten([list(r) for r in inhib], &self.inh_off)
        self.dlt = _flatten([list(r) for r in delta], &self.del_off)
        self.buf = <long *> PyMem_Malloc((n_places + 1) * sizeof(long))
        if self.buf == NULL:
            raise MemoryError()

    def __dealloc__(self):
        PyMem_Free(self.pre_off); PyMem_Free(self.pre)
        PyMem_Free(self.inh_off); PyMem_Free(self.inh)
        PyMem_Free(self.del_off); PyMem_Free(self.dlt)
        PyMem_Free(self.buf)

    cdef void _load(self, tuple marking):
        cdef Py_ssize_t i
        for i in range(self.n_places):
            self.buf[i] = <long> marking[i]

    cdef bint _enabled(self, long t):
        cdef long k
        for k in range(self.pre_off[t], self.pre_off[t + 1]):
            if self.buf[self.pre[2 * k]] < self.pre[2 * k + 1]:
                return False
        for k in range(self.inh_off[t], self.inh_off[t + 1]):
            if self.buf[self.inh[2 * k]] >= self.inh[2 * k + 1]:
                return False
        return True

    cdef tuple _fired(self, long t):
        cdef long k, p
        cdef Py_ssize_t i
        cdef object v  # must be a boxed object: SET_ITEM steals this reference
        for k in range(self.del_off[t], self.del_off[t + 1]):
            self.buf[self.dlt[2 * k]] += self.dlt[2 * k + 1]
        cdef tuple out = PyTuple_New(self.n_places)
        for i in range(self.n_places):
            v = self.buf[i]
            Py_INCREF(v)
            PyTuple_SET_ITEM(out, i, v)
        for k in range(self.del_off[t], self.del_off[t + 1]):
            self.buf[self.dlt[2 * k]] -= self.dlt[2 * k + 1]
        return out

    def is_enabled(self, tuple marking, long t):
        self._load(marking)
        return self._enabled(t)

    def enabled(self, tuple marking):
        cdef long t
        self._load(marking)
        return [t for t in range(self.n_transitions) if self._enabled(t)]

    def fire(self, tuple marking, long t):
        self._load(marking)
        return self._fired(t)

    def successors(self, tuple marking):
        cdef long t
        cdef list out = []
        self._load(marking)
        for t in range(self.n_transitions):
            if self._enabled(t):
                out.append((t, self._fired(t)))
        return out
