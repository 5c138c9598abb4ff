# distutils: language = c++
"""Compiled n-gram statistics kernel.

Counts are taken over UTF-32 codepoint windows so multi-byte characters
behave exactly like the pure-Python kernel. The counting loops run without
the GIL, which lets corpus scoring scale across threads.
"""

from cython.operator cimport dereference, preincrement
from libcpp.string cimport string
from libcpp.unordered_map cimport unordered_map


def pair_stats(str hyp, str ref, int max_order):
    """Per-order (hypothesis total, reference total, matched) n-gram counts."""
    cdef bytes hyp_b = hyp.encode("utf-32-le")
    cdef bytes ref_b = ref.encode("utf-32-le")
    cdef const char* hp = hyp_b
    cdef const char* rp = ref_b
    cdef Py_ssize_t hn = len(hyp_b) // 4
    cdef Py_ssize_t rn = len(ref_b) // 4
    cdef list out = []
    cdef int n
    cdef Py_ssize_t i, hyp_total, ref_total
    cdef long long matched, hc, rc
    cdef unordered_map[string, long long] hyp_map, ref_map
    cdef unordered_map[string, long long].iterator it, found

    for n in range(1, max_order + 1):
        hyp_total = hn - n + 1 if hn >= n else 0
        ref_total = rn - n + 1 if rn >= n else 0
        matched = 0
        if hyp_total > 0 and ref_total > 0:
            hyp_map.clear()
            ref_map.clear()
            with nogil:
                for i in range(hyp_total):
                    preincrement(hyp_map[string(hp + 4 * i, <size_t>(4 * n))])
                for i in range(ref_total):
                    preincrement(ref_map[string(rp + 4 * i, <size_t>(4 * n))])
                it = hyp_map.begin()
                while it != hyp_map.end():
                    found = ref_map.find(dereference(it).first)
                    if found != ref_map.end():
                        hc = dereference(it).second
                        rc = dereference(found).second
                        matched += hc if hc < rc else rc
                    preincrement(it)
        out.append((hyp_total, ref_total, matched))
    return out
