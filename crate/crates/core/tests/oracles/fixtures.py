# Independent high-precision oracle for the frozen fixture values used in
# the Rust test suite. Uses mpmath quadrature directly on the defining
# integrals; shares no code with the crate.
#
#   python3 crates/core/tests/oracles/fixtures.py
from mpmath import mp, mpf, quad, gamma, log, exp, sqrt, inf, fabs

mp.dps = 40


def show(name, v):
    print(f"{name:<28} {mp.nstr(v, 20)}")


show("gamma(0.5)", quad(lambda t: exp(-t) * t ** mpf("-0.5"), [0, 1, inf]))
show("beta(2,3)", quad(lambda t: t * (1 - t) ** 2, [0, 1]))
z = mpf("0.5")
series = mp.nsum(lambda n: z ** n / (n + 1), [0, inf])
show("hyp2f1(1,1,2,0.5)", series)

show("c3 fixture", quad(lambda t: t * t * mpf(2) ** (-2 * t), [0, 1]))
show("r1 fixture", quad(lambda t: mpf(4) ** t * t, [0, 1]))
show("t1 fixture", quad(lambda t: t * t * mpf(4) ** t, [0, 1]))
show("v3 fixture", quad(lambda t: mpf(4) ** t, [0, 1]))
show("c0(1,1/2)", quad(lambda t: fabs(t - mpf(1) / 2), [0, mpf(1) / 2, 1]))

# K_f fixture: f(u)=u^2, m=0.5, theta=1.5, lambda=1/3, a=1, b=4, x=2.
f = lambda u: u * u
df = lambda u: 2 * u
m, th, lam, a, b, x = mpf("0.5"), mpf("1.5"), mpf(1) / 3, mpf(1), mpf(4), mpf(2)
am, bm, xm = a ** m, b ** m, x ** m
lxa, lbx = log(x / a), log(b / x)
boundary = (1 - lam) * m ** th * (lxa ** th + lbx ** th) * f(xm) + lam * m ** th * (
    f(am) * lxa ** th + f(bm) * lbx ** th
)
j1 = quad(lambda t: log(t / am) ** (th - 1) * f(t) / t, [am, xm]) / gamma(th)
j2 = quad(lambda t: log(bm / t) ** (th - 1) * f(t) / t, [xm, bm]) / gamma(th)
kf_direct = boundary - gamma(th + 1) * (j1 + j2)
ia = quad(lambda t: (t ** th - lam) * (x / a) ** (m * t) * df(x ** (m * t) * a ** (m * (1 - t))), [0, 1])
ib = quad(lambda t: (t ** th - lam) * (x / b) ** (m * t) * df(x ** (m * t) * b ** (m * (1 - t))), [0, 1])
kf_identity = m ** (th + 1) * (am * lxa ** (th + 1) * ia - bm * lbx ** (th + 1) * ib)
show("kf fixture direct", kf_direct)
show("kf fixture identity", kf_identity)

# Bounds for the same fixture with q=2, p=2, alpha=1.
q, p, al = mpf(2), mpf(2), mpf(1)
tstar = lam ** (1 / th)
kink = lambda g: quad(g, [0, tstar, 1])
dxm, da, db = fabs(df(xm)) ** q, fabs(df(a)) ** q, fabs(df(b)) ** q
A = am * lxa ** (th + 1)
B = bm * lbx ** (th + 1)
ra, rb = x / a, x / b

c0 = kink(lambda t: fabs(t ** th - lam))
C = [
    kink(lambda t: fabs(t ** th - lam) * ra ** (q * m * t) * t ** al),
    kink(lambda t: fabs(t ** th - lam) * ra ** (q * m * t) * (1 - t ** al)),
    kink(lambda t: fabs(t ** th - lam) * rb ** (q * m * t) * t ** al),
    kink(lambda t: fabs(t ** th - lam) * rb ** (q * m * t) * (1 - t ** al)),
]
b5 = m ** (th + 1) * c0 ** (1 - 1 / q) * (
    A * (dxm * C[0] + m * da * C[1]) ** (1 / q) + B * (dxm * C[2] + m * db * C[3]) ** (1 / q)
)
show("bound thm5 fixture", b5)

r0 = kink(lambda t: fabs(t ** th - lam) ** p)
R = [
    quad(lambda t: ra ** (m * q * t) * t ** al, [0, 1]),
    quad(lambda t: ra ** (m * q * t) * (1 - t ** al), [0, 1]),
    quad(lambda t: rb ** (m * q * t) * t ** al, [0, 1]),
    quad(lambda t: rb ** (m * q * t) * (1 - t ** al), [0, 1]),
]
b6 = m ** (th + 1) * r0 ** (1 / p) * (
    A * (dxm * R[0] + m * da * R[1]) ** (1 / q) + B * (dxm * R[2] + m * db * R[3]) ** (1 / q)
)
show("bound thm6 fixture", b6)

T1 = kink(lambda t: fabs(t ** th - lam) ** p * ra ** (m * p * t))
T2 = kink(lambda t: fabs(t ** th - lam) ** p * rb ** (m * p * t))
b7 = m ** (th + 1) * (
    A * T1 ** (1 / p) * ((dxm + m * al * da) / (al + 1)) ** (1 / q)
    + B * T2 ** (1 / p) * ((dxm + m * al * db) / (al + 1)) ** (1 / q)
)
show("bound thm7 fixture", b7)

V1 = kink(lambda t: fabs(t ** th - lam) ** q * t ** al)
V2 = kink(lambda t: fabs(t ** th - lam) ** q * (1 - t ** al))
V3 = quad(lambda t: ra ** (p * m * t), [0, 1])
V4 = quad(lambda t: rb ** (p * m * t), [0, 1])
b8 = m ** (th + 1) * (
    A * V3 ** (1 / p) * (V1 * dxm + m * V2 * da) ** (1 / q)
    + B * V4 ** (1 / p) * (V1 * dxm + m * V2 * db) ** (1 / q)
)
show("bound thm8 fixture", b8)

# Hermite-Hadamard chain, f(u)=u on [1,4], theta=1.
show("hh middle u [1,4]", quad(lambda t: 1, [1, 4]) / log(4))
# hadamard_left f=ln t, a=1: (ln x)^(th+1)/Gamma(th+2), x=3, th=0.7
xx, tt = mpf(3), mpf("0.7")
show("J_left ln, x=3, th=0.7", quad(lambda t: log(xx / t) ** (tt - 1) * log(t) / t, [1, xx]) / gamma(tt))
show("  closed form", log(xx) ** (tt + 1) / gamma(tt + 2))
