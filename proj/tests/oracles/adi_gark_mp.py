"""High-precision evaluation of the order-3/order-4 ADI-GARK coefficient tables.

Independent of the C++ sources: coefficients are re-entered here from their
closed forms and evaluated with mpmath at 50 digits. The printed values are
frozen into tests/test_order_conditions.cpp.
"""
import mpmath as mp

mp.mp.dps = 50


def gamma3():
    f = lambda g: 6 * g**3 - 18 * g**2 + 9 * g - 1
    return mp.findroot(f, mp.mpf("0.43586652150845900"))


def adi_gark3():
    g = gamma3()
    AI = mp.matrix([
        [0, 0, 0, 0],
        [g, g, 0, 0],
        [(215 * g + 424) / (2624 - 1536 * g), (264 - 841 * g) / (1536 * g + 448), g, 0],
        [(2 * g + 1) / (4 * g + 8), (31 - 14 * g) / (352 - 900 * g), (320 * g + 224) / (575 - 477 * g), g],
    ])
    AE = mp.matrix([
        [0, 0, 0, 0],
        [2 * g, 0, 0, 0],
        [(12526987 * g + 655304) / (8876160 * g + 7175968), 15 * (215 * g + 152) / (2144 * (92 * g - 9)), 0, 0],
        [(2370311 * g - 563481) / (134 * (17071 * g + 921)), (380783 - 137789 * g) / (134 * (17727 * g - 15511)),
         (1000 - 304 * g) / (1371 * g + 379), 0],
    ])
    b = mp.matrix([AI[3, j] for j in range(4)])
    c = mp.matrix([0, 2 * g, (g + 2) / 4, 1])
    return AI, AE, b, c


def adi_gark4():
    r = mp.sqrt(2)
    AI = mp.matrix(6, 6)
    rows = [
        [],
        [mp.mpf(1) / 4, mp.mpf(1) / 4],
        [(1 - r) / 8, (1 - r) / 8, mp.mpf(1) / 4],
        [(5 - 7 * r) / 64, (5 - 7 * r) / 64, 7 * (r + 1) / 32, mp.mpf(1) / 4],
        [(-54539 * r - 13796) / 125000, (-54539 * r - 13796) / 125000, (132109 * r + 506605) / 437500,
         166 * (376 * r - 97) / 109375, mp.mpf(1) / 4],
        [(1181 - 987 * r) / 13782, (1181 - 987 * r) / 13782, 47 * (1783 * r - 267) / 273343,
         16 * (-3525 * r + 22922) / 571953, 15625 * (-376 * r - 97) / 90749876, mp.mpf(1) / 4],
    ]
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            AI[i, j] = v
    AE = mp.matrix(6, 6)
    erows = [
        [],
        [mp.mpf(1) / 2],
        [mp.mpf(4) / 7 - 1 / (2 * r), -mp.mpf(1) / 14],
        [(192440351 * r + 245255777) / 1090446224, (1059385241 - 192440351 * r) / 1090446224, -mp.mpf(4) / 7],
        [(3246103358815879 * r - 4074461458752694) / 1911688536450000,
         (15031561460125012 - 11088311262828073 * r) / 1911688536450000,
         (1307034650668699 * r - 1700986476469053) / 318614756075000, mp.mpf(11) / 17],
        [(2357123976102849118 - 3355327406349634955 * r) / 1982691401525245488,
         (4815717108798877157 * r - 9817340273693398308) / 1982691401525245488,
         (3722435241465127195 - 759937254896120301 * r) / 991345700762622744,
         (7576400 * r + 387641523) / 385686973, 625 * (376 * r + 97) / 22687469],
    ]
    for i, row in enumerate(erows):
        for j, v in enumerate(row):
            AE[i, j] = v
    b = mp.matrix([AI[5, j] for j in range(6)])
    c = mp.matrix([0, mp.mpf(1) / 2, (2 - r) / 4, mp.mpf(5) / 8, mp.mpf(26) / 25, 1])
    return AI, AE, b, c


def dot(u, v):
    return mp.fsum(u[i] * v[i] for i in range(len(u)))


def rk_conditions(A, b):
    n = A.rows
    one = mp.matrix([1] * n)
    c = A * one
    Ac = A * c
    return {
        "b1": dot(b, one) - 1,
        "bc": dot(b, c) - mp.mpf(1) / 2,
        "bc2": dot(b, mp.matrix([x**2 for x in c])) - mp.mpf(1) / 3,
        "bAc": dot(b, Ac) - mp.mpf(1) / 6,
        "bc3": dot(b, mp.matrix([x**3 for x in c])) - mp.mpf(1) / 4,
        "bcAc": dot(mp.matrix([b[i] * c[i] for i in range(n)]), Ac) - mp.mpf(1) / 8,
        "bAc2": dot(b, A * mp.matrix([x**2 for x in c])) - mp.mpf(1) / 12,
        "bAAc": dot(b, A * Ac) - mp.mpf(1) / 24,
    }


for name, fn in (("adi-gark3", adi_gark3), ("adi-gark4", adi_gark4)):
    AI, AE, b, c = fn()
    one = mp.matrix([1] * AI.rows)
    print(name)
    print("  max |AI 1 - c| =", mp.nstr(max(abs(x) for x in (AI * one - c)), 5))
    print("  max |AE 1 - c| =", mp.nstr(max(abs(x) for x in (AE * one - c)), 5))
    for label, A in (("AI", AI), ("AE", AE)):
        res = rk_conditions(A, b)
        print("  ", label, {k: mp.nstr(v, 5) for k, v in res.items()})
    print("  b^T AI AE c - 1/24 =", mp.nstr(dot(b, AI * (AE * c)) - mp.mpf(1) / 24, 20))
    print("  b^T AE AI c - 1/24 =", mp.nstr(dot(b, AE * (AI * c)) - mp.mpf(1) / 24, 20))
