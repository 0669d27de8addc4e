#!/usr/bin/env python3
"""High-precision reference values frozen into the C++ tests.

Everything here is computed with mpmath at 50 digits through the invertible
closed forms, independent of the library's compatible-representation path.
Output is the body of tests/oracle_values.hpp.
"""

import mpmath as mp

mp.mp.dps = 50

# Fixed inputs shared with tests/oracle_values.hpp.
A3 = mp.matrix([[2, 1j, 0], [-1j, 3, 1], [0, 1, 1]])
B3 = mp.matrix([[1, 0.5, 0], [0.5, 2, 0.5j], [0, -0.5j, 1.5]])
# Singular pair: A is rank 2, B = diag(1,1,0).
AS = mp.matrix([[1, 1, 0], [1, 2, 1], [0, 1, 1]])
BS = mp.matrix([[1, 0, 0], [0, 1, 0], [0, 0, 0]])


def herm(m):
    return (m + m.H) / 2


def fun(m, f):
    e, q = mp.eighe(herm(m))
    d = mp.diag([f(x) for x in e])
    return herm(q * d * q.H)


def persp(f, a, b):
    bh = fun(b, mp.sqrt)
    bih = fun(b, lambda x: 1 / mp.sqrt(x))
    return herm(bh * fun(bih * a * bih, f) * bh)


def parallel(a, b):
    return herm(mp.inverse(mp.inverse(a) + mp.inverse(b)))


def cxx(name, m):
    cells = []
    for i in range(m.rows):
        for j in range(m.cols):
            z = mp.mpc(mp.chop(mp.mpc(m[i, j]), tol=mp.mpf(10) ** -40))
            cells.append("Complex(%s, %s)" % (mp.nstr(z.real, 17), mp.nstr(z.imag, 17)))
    rows = [", ".join(cells[i * m.cols:(i + 1) * m.cols]) for i in range(m.rows)]
    print("inline Matrix %s() {\n  Matrix m(%d, %d);\n  m << %s;\n  return m;\n}\n"
          % (name, m.rows, m.cols, ",\n       ".join(rows)))


def scalar(name, x):
    print("inline constexpr double %s = %s;" % (name, mp.nstr(x, 17)))


def main():
    cxx("kPerspSquare", persp(lambda t: t * t, A3, B3))
    cxx("kPerspTlogt", persp(lambda t: t * mp.log(t), A3, B3))
    cxx("kPerspNeglog", persp(lambda t: -mp.log(t), A3, B3))
    cxx("kPerspPow15", persp(lambda t: t ** mp.mpf(1.5), A3, B3))
    cxx("kParallelSum", parallel(A3, B3))
    cxx("kGeometricMean", persp(mp.sqrt, A3, B3))
    scalar("kTraceTlogt", sum(persp(lambda t: t * mp.log(t), A3, B3)[i, i] for i in range(3)).real)

    # least lambda with A^2 <= lambda B
    bih = fun(B3, lambda x: 1 / mp.sqrt(x))
    scalar("kT2Lambda", max(mp.eighe(herm(bih * A3 * A3 * bih))[0]))

    # [B]A = lim A:nB = A - A(A+nB)^{-1}A at n = 1e40
    n = mp.mpf(10) ** 40
    cxx("kAbsCont", herm(AS - AS * mp.inverse(AS + n * BS) * AS))

    # Example pair: sup over unit vectors of <A x,x>^2 / <B x,x>, A = [[1,1],[1,1]], B = diag(1,2).
    g = lambda th: (mp.cos(th) + mp.sin(th)) ** 4 / (mp.cos(th) ** 2 + 2 * mp.sin(th) ** 2)
    th = mp.findroot(lambda th: mp.diff(g, th), 0.6)
    scalar("kCor711Sup", g(th))

    # Scalar reference values
    scalar("kTalphaAt3", mp.mpf(3) ** 1.5)
    scalar("kTwoLog2", 2 * mp.log(2))
    scalar("kTlogtDiv", mp.log(2) / 2 + mp.log(mp.mpf(2) / 3) / 2)


if __name__ == "__main__":
    main()
