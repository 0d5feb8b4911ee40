# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Hot kernel: apply the three-mode generator to a Fock-basis state.

out = (neg_k a b1^ + conj(neg_k) a^ b1 + neg_g b1^2 b2^ + conj(neg_g) b1^^2 b2) x

where x and out are C-contiguous (n_a, n_b1, n_b2) amplitude grids,
neg_k = -k and neg_g = -gamma_nl * exp(i dk z).  Square-root occupation
tables are precomputed by the caller:

    sa[n] = sqrt(n) over mode a, s1/s2 likewise, w1[j] = sqrt((j+1)(j+2)).
"""


def apply_generator(double complex[:, :, ::1] x,
                    double complex[:, :, ::1] out,
                    double complex neg_k,
                    double complex neg_g,
                    double[::1] sa,
                    double[::1] s1,
                    double[::1] s2,
                    double[::1] w1):
    cdef Py_ssize_t da = x.shape[0], d1 = x.shape[1], d2 = x.shape[2]
    cdef Py_ssize_t na, n1, n2
    cdef double complex neg_kc = neg_k.conjugate()
    cdef double complex neg_gc = neg_g.conjugate()
    cdef double complex acc, c

    for na in range(da):
        for n1 in range(d1):
            for n2 in range(d2):
                acc = 0
                if na + 1 < da and n1 >= 1:
                    acc = acc + neg_k * sa[na + 1] * s1[n1] * x[na + 1, n1 - 1, n2]
                if na >= 1 and n1 + 1 < d1:
                    acc = acc + neg_kc * sa[na] * s1[n1 + 1] * x[na - 1, n1 + 1, n2]
                if n1 + 2 < d1 and n2 >= 1:
                    acc = acc + neg_g * w1[n1] * s2[n2] * x[na, n1 + 2, n2 - 1]
                if n1 >= 2 and n2 + 1 < d2:
                    acc = acc + neg_gc * w1[n1 - 2] * s2[n2 + 1] * x[na, n1 - 2, n2 + 1]
                out[na, n1, n2] = acc
