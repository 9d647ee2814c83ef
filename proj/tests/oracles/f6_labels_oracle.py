"""Numerically identify which F6 columns play the roles p+, p-, q+, q-, r+, r-
in the five simplifying combinations, by matching coefficient vectors."""
import itertools

import numpy as np

n = 5
w = np.exp(1j * np.pi / 3)
monos = [()] + [(i,) for i in range(10)] + [(i, k) for i in range(10) for k in range(i, 10)]
index = {m: t for t, m in enumerate(monos)}
rng = np.random.default_rng(0)
pts = rng.normal(size=(400, 10))
A = np.array([[np.prod([p[i] for i in m]) for m in monos] for p in pts])


def poly_from_fn(fn):
    # exact quadratic fit by sampling
    b = np.array([fn(p) for p in pts])
    return np.linalg.lstsq(A, b, rcond=None)[0]


def raw(k):
    def f(s):
        z = np.concatenate(([1.0], s[:n] + 1j * s[n:]))
        S = sum(np.conj(w ** (j * k)) * z[j] for j in range(6))
        return abs(S) ** 2 - 6
    return poly_from_fn(f)


cols = [raw(k) for k in range(6)]
N = poly_from_fn(lambda s: np.sum(s ** 2) - 5)

F00 = [
    lambda s: s[0]+s[4]+s[0]*s[1]+s[1]*s[2]+s[2]*s[3]+s[3]*s[4]+s[5]*s[6]+s[6]*s[7]+s[7]*s[8]+s[8]*s[9],
    lambda s: s[5]-s[9]+s[0]*s[6]-s[1]*s[5]+s[1]*s[7]-s[2]*s[6]+s[2]*s[8]-s[3]*s[7]+s[3]*s[9]-s[4]*s[8],
    lambda s: s[2]+s[0]*s[3]+s[1]*s[4]+s[5]*s[8]+s[6]*s[9],
    lambda s: s[1]+s[3]+s[0]*s[2]+s[0]*s[4]+s[1]*s[3]+s[2]*s[4]+s[5]*s[7]+s[5]*s[9]+s[6]*s[8]+s[7]*s[9],
    lambda s: s[6]-s[8]+s[0]*s[7]-s[0]*s[9]+s[1]*s[8]-s[2]*s[5]+s[2]*s[9]-s[3]*s[6]+s[4]*s[5]-s[4]*s[7],
]
F00 = [poly_from_fn(f) for f in F00]


def strip(e):
    # remove the multiple of the normalization polynomial (fixed by the x1^2 coefficient)
    return e - e[index[(0, 0)]] * N


def match(e, f):
    e = strip(e)
    nz = np.argmax(np.abs(f))
    r = e[nz] / f[nz]
    return abs(r) > 1e-8 and np.abs(e - r * f).max() < 1e-8, r


def combos(p, m, q, qm, r, rm):
    return [p + m, p - m - q + qm + r - rm, 2 * p - 2 * m + q - qm - r + rm,
            p + m - r - rm, p - m + r - rm]


if __name__ == "__main__":
    for perm in itertools.permutations(range(6)):
        res = []
        for e in combos(*[cols[i] for i in perm]):
            hit = None
            for i, f in enumerate(F00):
                ok, r = match(e, f)
                if ok:
                    hit = (i, round(r, 6))
            res.append(hit)
        if all(h is not None for h in res):
            print("p+,p-,q+,q-,r+,r- = columns", perm, res)
